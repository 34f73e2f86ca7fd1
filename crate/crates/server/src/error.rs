use std::fmt;

use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use phytobase_core::error::Span;
use phytobase_core::{ModelError, NarrationError, PqlError, StoreError};
use serde::{Deserialize, Serialize};

/// The closed set of machine-readable error codes the service can return.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ErrorCode {
    ParseError,
    UnknownField,
    EmptyCriteria,
    DuplicateCriterion,
    BadRequest,
    NotFound,
    MethodNotAllowed,
    InvalidRecord,
    UnknownCode,
    UnknownLanguage,
    MalformedSource,
    ReadOnly,
    StoreUnavailable,
    Internal,
}

impl ErrorCode {
    pub const ALL: [ErrorCode; 14] = [
        ErrorCode::ParseError,
        ErrorCode::UnknownField,
        ErrorCode::EmptyCriteria,
        ErrorCode::DuplicateCriterion,
        ErrorCode::BadRequest,
        ErrorCode::NotFound,
        ErrorCode::MethodNotAllowed,
        ErrorCode::InvalidRecord,
        ErrorCode::UnknownCode,
        ErrorCode::UnknownLanguage,
        ErrorCode::MalformedSource,
        ErrorCode::ReadOnly,
        ErrorCode::StoreUnavailable,
        ErrorCode::Internal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::ParseError => "PARSE_ERROR",
            ErrorCode::UnknownField => "UNKNOWN_FIELD",
            ErrorCode::EmptyCriteria => "EMPTY_CRITERIA",
            ErrorCode::DuplicateCriterion => "DUPLICATE_CRITERION",
            ErrorCode::BadRequest => "BAD_REQUEST",
            ErrorCode::NotFound => "NOT_FOUND",
            ErrorCode::MethodNotAllowed => "METHOD_NOT_ALLOWED",
            ErrorCode::InvalidRecord => "INVALID_RECORD",
            ErrorCode::UnknownCode => "UNKNOWN_CODE",
            ErrorCode::UnknownLanguage => "UNKNOWN_LANGUAGE",
            ErrorCode::MalformedSource => "MALFORMED_SOURCE",
            ErrorCode::ReadOnly => "READ_ONLY",
            ErrorCode::StoreUnavailable => "STORE_UNAVAILABLE",
            ErrorCode::Internal => "INTERNAL",
        }
    }

    pub fn status(self) -> StatusCode {
        match self {
            ErrorCode::ParseError
            | ErrorCode::UnknownField
            | ErrorCode::EmptyCriteria
            | ErrorCode::DuplicateCriterion
            | ErrorCode::BadRequest
            | ErrorCode::UnknownCode
            | ErrorCode::UnknownLanguage
            | ErrorCode::MalformedSource => StatusCode::BAD_REQUEST,
            ErrorCode::NotFound => StatusCode::NOT_FOUND,
            ErrorCode::MethodNotAllowed => StatusCode::METHOD_NOT_ALLOWED,
            ErrorCode::InvalidRecord => StatusCode::UNPROCESSABLE_ENTITY,
            ErrorCode::ReadOnly => StatusCode::FORBIDDEN,
            ErrorCode::StoreUnavailable => StatusCode::SERVICE_UNAVAILABLE,
            ErrorCode::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The JSON body of every error response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    pub status: u16,
    pub code: ErrorCode,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<Span>,
}

impl ApiError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        ApiError {
            status: code.status().as_u16(),
            code,
            message: message.into(),
            span: None,
        }
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(ErrorCode::BadRequest, message)
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        Self::new(ErrorCode::NotFound, message)
    }

    fn with_span(mut self, span: Option<Span>) -> Self {
        self.span = span;
        self
    }
}

impl fmt::Display for ApiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.status, self.code, self.message)
    }
}

impl std::error::Error for ApiError {}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

impl From<PqlError> for ApiError {
    fn from(e: PqlError) -> Self {
        let code = match &e {
            PqlError::Lex { .. } | PqlError::Parse { .. } => ErrorCode::ParseError,
            PqlError::UnknownField { .. } => ErrorCode::UnknownField,
            PqlError::EmptyCriteria => ErrorCode::EmptyCriteria,
            PqlError::DuplicateCriterion(_) => ErrorCode::DuplicateCriterion,
        };
        ApiError::new(code, e.to_string()).with_span(e.span())
    }
}

impl From<ModelError> for ApiError {
    fn from(e: ModelError) -> Self {
        let code = match &e {
            ModelError::UnknownCode(_) => ErrorCode::UnknownCode,
            ModelError::InvalidLanguageTag(_) => ErrorCode::UnknownLanguage,
            _ => ErrorCode::BadRequest,
        };
        ApiError::new(code, e.to_string())
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        let code = match &e {
            StoreError::InvalidRecord { .. } => ErrorCode::InvalidRecord,
            StoreError::NotFound(_) => ErrorCode::NotFound,
            StoreError::UnknownCode(_) => ErrorCode::UnknownCode,
            StoreError::MalformedSource(_) => ErrorCode::MalformedSource,
            StoreError::StoreUnavailable(_) | StoreError::CorruptSnapshot(_) => {
                ErrorCode::StoreUnavailable
            }
            StoreError::ReadOnly => ErrorCode::ReadOnly,
            StoreError::Model(m) => return m.clone().into(),
        };
        ApiError::new(code, e.to_string())
    }
}

impl From<NarrationError> for ApiError {
    fn from(e: NarrationError) -> Self {
        let code = match &e {
            NarrationError::UnknownLanguage(_) => ErrorCode::UnknownLanguage,
            NarrationError::Model(m) => return m.clone().into(),
            NarrationError::DuplicateLanguage(_)
            | NarrationError::IncompleteCatalog { .. }
            | NarrationError::CatalogSyntax { .. } => ErrorCode::Internal,
        };
        ApiError::new(code, e.to_string())
    }
}
