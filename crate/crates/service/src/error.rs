use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use qsa_core::engine::EngineError;
use serde::Serialize;
use serde_json::{json, Value};

/// Every code a 4xx response can carry, with its status.
pub const ERROR_CODES: &[(&str, u16)] = &[
    ("malformed-body", 400),
    ("origin-not-allowed", 403),
    ("not-found", 404),
    ("unknown-area", 404),
    ("method-not-allowed", 405),
    ("payload-too-large", 413),
    ("unknown-gateway", 422),
    ("unknown-branch", 422),
    ("arity-violation", 422),
    ("gateway-not-pending", 422),
    ("unknown-attribute", 422),
    ("negative-weight", 422),
    ("invalid-k", 422),
    ("too-large-to-enumerate", 422),
    ("unvalidated-model", 422),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        debug_assert!(ERROR_CODES.iter().any(|(c, s)| *c == code && *s == status.as_u16()));
        ApiError { status, code: code.to_string(), message: message.into(), detail: None }
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }

    pub fn malformed(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "malformed-body", message)
    }

    pub fn unknown_area(area: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "unknown-area", format!("unknown design area `{area}`"))
            .with_detail(json!({ "area": area }))
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> Self {
        let detail = match &e {
            EngineError::UnvalidatedModel(codes) => json!({ "codes": codes }),
            EngineError::UnknownGateway(g) | EngineError::GatewayNotPending(g) => {
                json!({ "gateway": g })
            }
            EngineError::UnknownBranch { gateway, label } => {
                json!({ "gateway": gateway, "label": label })
            }
            EngineError::ArityViolation { gateway, .. } => json!({ "gateway": gateway }),
            EngineError::UnknownAttribute(a) | EngineError::NegativeWeight(a) => {
                json!({ "attribute": a })
            }
            EngineError::TooLargeToEnumerate { count, limit } => {
                json!({ "count": count.to_string(), "limit": limit.to_string() })
            }
        };
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.code(), e.to_string()).with_detail(detail)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        crate::json_response(self.status, &self)
    }
}
