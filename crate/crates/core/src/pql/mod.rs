//! The Plant Query Language: a small `SELECT` dialect over the single
//! implicit table `plants`, plus structured multi-criteria search.

pub mod ast;
pub mod eval;
pub mod lexer;
pub mod parser;
pub mod render;
pub mod search;

pub use ast::{CompareOp, Direction, Expr, Field, Literal, OrderBy, Projection, Query};
pub use eval::{evaluate_query, evaluate_query_scan, field_values, matches, ResultRow, ResultSet};
pub use lexer::{tokenize, Keyword, Symbol, Token, TokenKind};
pub use parser::parse_query;
pub use render::render_query;
pub use search::{structured_search, PlantSummary, SearchCriteria, SearchKey, SUMMARY_FIELDS};
