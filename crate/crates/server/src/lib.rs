//! HTTP service and operator command line over the phytobase store.

pub mod api;
pub mod cli;
pub mod error;
pub mod service;

pub use api::{app, AppState, Mutation};
pub use error::{ApiError, ErrorCode};
pub use service::{serve, serve_on, ServeError, ServiceConfig};
