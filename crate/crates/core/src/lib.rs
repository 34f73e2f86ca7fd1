//! Core of the phytobase medicinal-plant knowledge base.

pub mod error;
pub mod fixtures;
pub mod model;
pub mod narration;
pub mod pql;
pub mod status;
pub mod store;

pub use error::{ModelError, NarrationError, PqlError, StatusError, StoreError};
pub use model::{PlantRecord, ValidationReport};
pub use store::{Database, RecordStore};
