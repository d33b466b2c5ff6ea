use axum::extract::rejection::JsonRejection;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;

use splitweave::edits::EditError;
use splitweave::parser::{self, ParseError, SourceSpan};
use splitweave::render::RenderError;

/// Error body shared by every endpoint. `code` is one of `PARSE_ERROR`,
/// `SEMANTIC_ERROR`, `INCOMPATIBLE_EDIT`, `BAD_REQUEST`, `BUDGET_EXCEEDED`
/// and `INTERNAL`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub code: &'static str,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub span: Option<SourceSpan>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node_path: Option<String>,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, detail: impl Into<String>) -> ApiError {
        ApiError { status, code, detail: detail.into(), span: None, node_path: None }
    }

    pub fn bad_request(detail: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::BAD_REQUEST, "BAD_REQUEST", detail)
    }

    pub fn internal(detail: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "INTERNAL", detail)
    }

    pub fn budget() -> ApiError {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "BUDGET_EXCEEDED", "render time budget exhausted")
    }

    pub fn incompatible(detail: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::CONFLICT, "INCOMPATIBLE_EDIT", detail)
    }

    /// Prefixes the detail, e.g. with the field the error came from.
    pub fn within(mut self, field: &str) -> ApiError {
        self.detail = format!("{field}: {}", self.detail);
        self
    }
}

impl From<ParseError> for ApiError {
    fn from(e: ParseError) -> ApiError {
        ApiError { span: Some(e.span), ..ApiError::new(StatusCode::BAD_REQUEST, "PARSE_ERROR", e.to_string()) }
    }
}

impl From<parser::Error> for ApiError {
    fn from(e: parser::Error) -> ApiError {
        match e {
            parser::Error::Parse(e) => e.into(),
            parser::Error::Semantic(s) => ApiError {
                node_path: s.diagnostics.first().map(|d| d.path.to_string()),
                ..ApiError::new(StatusCode::BAD_REQUEST, "SEMANTIC_ERROR", s.to_string())
            },
        }
    }
}

impl From<RenderError> for ApiError {
    fn from(e: RenderError) -> ApiError {
        match e.path() {
            Some(path) => ApiError {
                node_path: Some(path.to_string()),
                ..ApiError::new(StatusCode::BAD_REQUEST, "SEMANTIC_ERROR", e.to_string())
            },
            None => ApiError::internal(e.to_string()),
        }
    }
}

impl From<EditError> for ApiError {
    fn from(e: EditError) -> ApiError {
        ApiError::incompatible(e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> ApiError {
        ApiError::new(r.status(), "BAD_REQUEST", r.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}
