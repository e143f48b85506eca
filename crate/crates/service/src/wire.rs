//! JSON request documents shared by the HTTP API and the command line.
//!
//! Decoding is done by hand over [`serde_json::Value`] so that every
//! failure maps onto a documented error code: shape problems are
//! `malformed-body`, domain problems carry the engine's code.

use std::collections::BTreeMap;

use qsa_core::engine::{AnswerSet, Top, WeightVector};
use qsa_core::Vocabulary;
use rust_decimal::Decimal;
use serde_json::{json, Map, Value};

use crate::error::ApiError;
use axum::http::StatusCode;

pub fn parse_object(body: &[u8]) -> Result<Map<String, Value>, ApiError> {
    let value: Value = serde_json::from_slice(body)
        .map_err(|e| ApiError::malformed(format!("body is not valid JSON: {e}")))?;
    match value {
        Value::Object(map) => Ok(map),
        other => Err(ApiError::malformed(format!("body must be an object, got {}", kind(&other)))),
    }
}

/// Rejects fields outside `allowed`.
pub fn expect_fields(map: &Map<String, Value>, allowed: &[&str]) -> Result<(), ApiError> {
    match map.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(ApiError::malformed(format!("unexpected field `{k}`"))
            .with_detail(json!({ "field": k, "allowed": allowed }))),
        None => Ok(()),
    }
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

/// Accepts JSON numbers and numeric strings, including exponent notation.
pub fn decimal(v: &Value) -> Option<Decimal> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        _ => return None,
    };
    text.parse::<Decimal>().ok().or_else(|| Decimal::from_scientific(&text).ok())
}

pub fn decode_weights(v: Option<&Value>, field: &str, vocabulary: &Vocabulary) -> Result<WeightVector, ApiError> {
    let map = match v {
        None | Some(Value::Null) => return Ok(WeightVector::empty()),
        Some(Value::Object(map)) => map,
        Some(other) => {
            return Err(ApiError::malformed(format!("`{field}` must be an object, got {}", kind(other))))
        }
    };
    let mut pairs = Vec::with_capacity(map.len());
    for (qa, w) in map {
        let w = decimal(w).ok_or_else(|| {
            ApiError::malformed(format!("`{field}.{qa}` must be a number"))
                .with_detail(json!({ "field": field, "attribute": qa }))
        })?;
        pairs.push((qa.clone(), w));
    }
    Ok(WeightVector::new(pairs, vocabulary)?)
}

pub fn decode_answers(v: Option<&Value>) -> Result<AnswerSet, ApiError> {
    let map = match v {
        None | Some(Value::Null) => return Ok(AnswerSet::new()),
        Some(Value::Object(map)) => map,
        Some(other) => {
            return Err(ApiError::malformed(format!("`answers` must be an object, got {}", kind(other))))
        }
    };
    let mut out = BTreeMap::new();
    for (gateway, labels) in map {
        let bad = || {
            ApiError::malformed(format!("`answers.{gateway}` must be an array of branch labels"))
                .with_detail(json!({ "gateway": gateway }))
        };
        let Value::Array(items) = labels else { return Err(bad()) };
        let labels = items
            .iter()
            .map(|l| l.as_str().map(str::to_string).ok_or_else(bad))
            .collect::<Result<Vec<_>, _>>()?;
        out.insert(gateway.clone(), labels);
    }
    Ok(AnswerSet::from(out))
}

pub fn decode_top(v: Option<&Value>) -> Result<Top, ApiError> {
    match v {
        None | Some(Value::Null) => Ok(Top::All),
        Some(Value::Number(n)) => {
            let k = n.as_u64().ok_or_else(|| invalid_k(n.to_string()))?;
            Top::k(usize::try_from(k).unwrap_or(usize::MAX)).ok_or_else(|| invalid_k(n.to_string()))
        }
        Some(other) => Err(ApiError::malformed(format!("`k` must be an integer, got {}", kind(other)))),
    }
}

fn invalid_k(got: String) -> ApiError {
    ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid-k", format!("`k` must be a positive integer, got {got}"))
        .with_detail(json!({ "k": got }))
}

/// Reads the weights interchange document `{"weights": {...}}`.
pub fn weights_document(body: &[u8], vocabulary: &Vocabulary) -> Result<WeightVector, ApiError> {
    let map = parse_object(body)?;
    expect_fields(&map, &["weights"])?;
    decode_weights(map.get("weights"), "weights", vocabulary)
}
