use thiserror::Error;

use crate::model::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("scientific name is empty")]
    EmptyName,
    #[error("malformed scientific name: {0}")]
    MalformedName(String),
    #[error("unknown ailment code {0:?}")]
    UnknownCode(String),
    #[error("ailment code conflict: {0}")]
    CodeConflict(String),
    #[error("invalid language tag {0:?}")]
    InvalidLanguageTag(String),
    #[error("invalid value {value:?} for {field}")]
    InvalidValue { field: &'static str, value: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatusError {
    #[error("every opinion percentage is zero")]
    AllZero,
    #[error("invalid opinion distribution: {0}")]
    InvalidDistribution(String),
    #[error("status mapping may not target {0}")]
    ForbiddenMapping(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NarrationError {
    #[error("language {0:?} is not registered")]
    UnknownLanguage(String),
    #[error("language {0:?} is already registered")]
    DuplicateLanguage(String),
    #[error("label catalog for {language:?} is missing {missing:?}")]
    IncompleteCatalog {
        language: String,
        missing: Vec<String>,
    },
    #[error("label catalog line {line}: {message}")]
    CatalogSyntax { line: usize, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("record {id:?} is invalid: {report}")]
    InvalidRecord {
        id: String,
        report: ValidationReport,
    },
    #[error("record {0:?} not found")]
    NotFound(String),
    #[error("unknown ailment code {0:?}")]
    UnknownCode(String),
    #[error("malformed source: {0}")]
    MalformedSource(String),
    #[error("store unavailable: {0}")]
    StoreUnavailable(String),
    #[error("corrupt snapshot: {0}")]
    CorruptSnapshot(String),
    #[error("store is read-only")]
    ReadOnly,
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl From<std::io::Error> for StoreError {
    fn from(e: std::io::Error) -> Self {
        StoreError::StoreUnavailable(e.to_string())
    }
}

/// Byte offsets `(start, end)` into query text.
pub type Span = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PqlError {
    #[error("lex error at {}..{}: {message}", span.0, span.1)]
    Lex { message: String, span: Span },
    #[error("parse error at {}..{}: {message}", span.0, span.1)]
    Parse { message: String, span: Span },
    #[error("unknown field {name:?}")]
    UnknownField { name: String, span: Option<Span> },
    #[error("search criteria are empty")]
    EmptyCriteria,
    #[error("criterion {0:?} given more than once")]
    DuplicateCriterion(String),
}

impl PqlError {
    pub fn span(&self) -> Option<Span> {
        match self {
            PqlError::Lex { span, .. } | PqlError::Parse { span, .. } => Some(*span),
            PqlError::UnknownField { span, .. } => *span,
            PqlError::EmptyCriteria | PqlError::DuplicateCriterion(_) => None,
        }
    }
}
