//! Request harness shared by the service tests and the acceptance target.
#![allow(dead_code)]

use std::collections::BTreeMap;

use axum::body::{to_bytes, Body};
use axum::http::{HeaderMap, Request, StatusCode};
use axum::Router;
use qsa_core::catalog::Catalog;
use qsa_core::engine::{auto_select, compare_whatif, recommend, AnswerSet, Session, Top, WeightVector};
use qsa_core::testkit::{self, ChaCha8Rng};
use qsa_core::{DecisionModel, DesignArea, GatewayKind};
use qsa_service::{area_summaries, ApiError, NextQuestions, Recommendations, ServiceConfig, ERROR_CODES};
use rand::seq::SliceRandom;
use rand::Rng;
use rust_decimal::Decimal;
use serde::Serialize;
use serde_json::{json, Value};
use tower::ServiceExt;

pub fn app(catalog: Catalog) -> Router {
    qsa_service::router(catalog, ServiceConfig { allowed_origins: vec!["http://ui.test".into()], log_requests: false })
}

pub struct Reply {
    pub status: StatusCode,
    pub headers: HeaderMap,
    pub body: Vec<u8>,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.body).unwrap_or_else(|e| {
            panic!("{e}: {}", String::from_utf8_lossy(&self.body))
        })
    }
}

pub async fn call(app: &Router, method: &str, uri: &str, body: Vec<u8>, headers: &[(&str, &str)]) -> Reply {
    let mut req = Request::builder().method(method).uri(uri);
    for (k, v) in headers {
        req = req.header(*k, *v);
    }
    let resp = app.clone().oneshot(req.body(Body::from(body)).unwrap()).await.unwrap();
    let status = resp.status();
    let headers = resp.headers().clone();
    let body = to_bytes(resp.into_body(), usize::MAX).await.unwrap().to_vec();
    Reply { status, headers, body }
}

pub async fn get(app: &Router, uri: &str) -> Reply {
    call(app, "GET", uri, Vec::new(), &[]).await
}

pub async fn post(app: &Router, uri: &str, body: &Value) -> Reply {
    call(app, "POST", uri, serde_json::to_vec(body).unwrap(), &[("content-type", "application/json")]).await
}

/// What the API should answer for a direct library result.
pub fn expected<T: Serialize>(result: Result<T, ApiError>) -> (StatusCode, Value) {
    match result {
        Ok(v) => (StatusCode::OK, serde_json::to_value(v).unwrap()),
        Err(e) => (e.status, serde_json::to_value(e).unwrap()),
    }
}

/// Raw answers exactly as sent, possibly invalid.
pub type RawAnswers = BTreeMap<String, Vec<String>>;

pub fn random_raw_answers(rng: &mut ChaCha8Rng, model: &DecisionModel) -> RawAnswers {
    let mut raw: RawAnswers = testkit::random_answers(rng, model).into_map();
    raw.retain(|_, _| rng.gen_bool(0.8));
    if rng.gen_bool(0.2) {
        let gateways: Vec<_> = model.gateways.values().collect();
        let g = gateways[rng.gen_range(0..gateways.len())];
        match rng.gen_range(0..5) {
            0 => {
                raw.insert("g-missing".into(), vec!["x".into()]);
            }
            1 => {
                raw.insert(g.id.clone(), vec!["no-such-branch".into()]);
            }
            2 => {
                raw.insert(g.id.clone(), Vec::new());
            }
            3 => {
                let all = g.branches.iter().map(|b| b.label.clone()).collect();
                raw.insert(g.id.clone(), all);
            }
            _ => {
                let mut labels: Vec<String> = g.branches.iter().map(|b| b.label.clone()).collect();
                labels.shuffle(rng);
                labels.push(labels[0].clone());
                raw.insert(g.id.clone(), labels);
            }
        }
    }
    raw
}

pub fn random_raw_weights(rng: &mut ChaCha8Rng, catalog: &Catalog) -> Vec<(String, Decimal)> {
    let ids: Vec<String> = catalog.vocabulary().attributes().map(|a| a.id.clone()).collect();
    let mut out = BTreeMap::new();
    for _ in 0..rng.gen_range(0..6) {
        let id = ids[rng.gen_range(0..ids.len())].clone();
        out.insert(id, Decimal::new(rng.gen_range(0..500), rng.gen_range(0..3)));
    }
    if rng.gen_bool(0.05) {
        out.insert("velocity".into(), Decimal::ONE);
    }
    if rng.gen_bool(0.05) {
        out.insert(ids[0].clone(), Decimal::new(-rng.gen_range(1..100), 1));
    }
    out.into_iter().collect()
}

pub fn encode_answers(raw: &RawAnswers) -> Value {
    serde_json::to_value(raw).unwrap()
}

/// Numbers and numeric strings are both accepted.
pub fn encode_weights(rng: &mut ChaCha8Rng, raw: &[(String, Decimal)]) -> Value {
    let map: serde_json::Map<String, Value> = raw
        .iter()
        .map(|(k, w)| {
            let v = if rng.gen_bool(0.5) {
                serde_json::from_str(&w.to_string()).unwrap()
            } else {
                Value::String(w.to_string())
            };
            (k.clone(), v)
        })
        .collect();
    Value::Object(map)
}

fn weights(catalog: &Catalog, raw: &[(String, Decimal)]) -> Result<WeightVector, ApiError> {
    Ok(WeightVector::new(raw.iter().cloned(), catalog.vocabulary())?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Areas,
    Model,
    NextQuestions,
    Recommend,
    AutoSelect,
    Compare,
}

impl Endpoint {
    pub const ALL: [Endpoint; 6] = [
        Endpoint::Areas,
        Endpoint::Model,
        Endpoint::NextQuestions,
        Endpoint::Recommend,
        Endpoint::AutoSelect,
        Endpoint::Compare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Endpoint::Areas => "GET /v1/areas",
            Endpoint::Model => "GET /v1/areas/{area}/model",
            Endpoint::NextQuestions => "POST next-questions",
            Endpoint::Recommend => "POST recommend",
            Endpoint::AutoSelect => "POST auto-select",
            Endpoint::Compare => "POST compare",
        }
    }
}

/// Sends one random request and compares against the library call.
/// Returns a description of the mismatch, if any.
pub async fn parity_case(app: &Router, catalog: &Catalog, endpoint: Endpoint, rng: &mut ChaCha8Rng) -> Option<String> {
    let areas: Vec<DesignArea> = catalog.areas().collect();
    let area = areas[rng.gen_range(0..areas.len())];
    let model = catalog.model(area).unwrap();
    let (req, reply, want) = match endpoint {
        Endpoint::Areas => {
            let reply = get(app, "/v1/areas").await;
            ("".to_string(), reply, expected::<_>(Ok(area_summaries(catalog))))
        }
        Endpoint::Model => {
            let bogus = rng.gen_bool(0.1);
            let uri = if bogus { "/v1/areas/qa-land/model".to_string() } else { format!("/v1/areas/{area}/model") };
            let want = if bogus { expected::<DecisionModel>(Err(ApiError::unknown_area("qa-land"))) } else { expected(Ok(model.clone())) };
            (uri.clone(), get(app, &uri).await, want)
        }
        Endpoint::NextQuestions => {
            let raw = random_raw_answers(rng, model);
            let body = json!({ "answers": encode_answers(&raw) });
            let want = expected(
                Session::from_answers(model, &AnswerSet::from(raw))
                    .map(|s| NextQuestions::from_session(&s))
                    .map_err(ApiError::from),
            );
            (body.to_string(), post(app, &format!("/v1/areas/{area}/next-questions"), &body).await, want)
        }
        Endpoint::Recommend => {
            let raw = random_raw_answers(rng, model);
            let rw = random_raw_weights(rng, catalog);
            let k = rng.gen_bool(0.5).then(|| rng.gen_range(1..6usize));
            let mut body = json!({ "answers": encode_answers(&raw), "weights": encode_weights(rng, &rw) });
            if let Some(k) = k {
                body["k"] = json!(k);
            }
            let want = expected(weights(catalog, &rw).and_then(|w| {
                let top = k.and_then(Top::k).unwrap_or(Top::All);
                recommend(model, &AnswerSet::from(raw), &w, top)
                    .map(|recommendations| Recommendations { recommendations })
                    .map_err(ApiError::from)
            }));
            (body.to_string(), post(app, &format!("/v1/areas/{area}/recommend"), &body).await, want)
        }
        Endpoint::AutoSelect => {
            let rw = random_raw_weights(rng, catalog);
            let body = json!({ "weights": encode_weights(rng, &rw) });
            let want = expected(weights(catalog, &rw).and_then(|w| auto_select(model, &w).map_err(ApiError::from)));
            (body.to_string(), post(app, &format!("/v1/areas/{area}/auto-select"), &body).await, want)
        }
        Endpoint::Compare => {
            let raw = random_raw_answers(rng, model);
            let ra = random_raw_weights(rng, catalog);
            let rb = match rng.gen_range(0..3) {
                0 => ra.clone(),
                1 => ra.iter().map(|(k, w)| (k.clone(), w * Decimal::TWO)).collect(),
                _ => random_raw_weights(rng, catalog),
            };
            let body = json!({
                "answers": encode_answers(&raw),
                "weights_a": encode_weights(rng, &ra),
                "weights_b": encode_weights(rng, &rb),
            });
            let want = expected(weights(catalog, &ra).and_then(|wa| {
                let wb = weights(catalog, &rb)?;
                compare_whatif(model, &AnswerSet::from(raw), &wa, &wb).map_err(ApiError::from)
            }));
            (body.to_string(), post(app, &format!("/v1/areas/{area}/compare"), &body).await, want)
        }
    };
    let got = (reply.status, serde_json::from_slice::<Value>(&reply.body).unwrap_or(Value::Null));
    (got != want).then(|| format!("{} {req}: got {got:?}, want {want:?}", endpoint.name()))
}

/// Malformed variants of otherwise reasonable bodies.
pub fn malformed_body(rng: &mut ChaCha8Rng) -> Vec<u8> {
    let seeds = [
        r#"{"answers":{"g-comm":["entanglement"]},"weights":{"security":1},"k":2}"#,
        r#"{"weights":{"security":"0.5","performance":2}}"#,
        r#"{"answers":{},"weights_a":{"security":1},"weights_b":{"latency":1}}"#,
    ];
    let base = seeds[rng.gen_range(0..seeds.len())].as_bytes().to_vec();
    match rng.gen_range(0..9) {
        0 => (0..rng.gen_range(0..64)).map(|_| rng.gen()).collect(),
        1 => base[..rng.gen_range(0..base.len())].to_vec(),
        2 => {
            let mut b = base;
            let i = rng.gen_range(0..b.len());
            b[i] = rng.gen();
            b
        }
        3 => br#"{"answers":{"g-comm":"entanglement"}}"#.to_vec(),
        4 => br#"{"weights":{"security":true}}"#.to_vec(),
        5 => br#"{"weights":[1,2],"answers":7}"#.to_vec(),
        6 => br#"{"k":"three","weights":null,"extra":1}"#.to_vec(),
        7 => {
            let depth = rng.gen_range(100..2000);
            format!("{}{}", "[".repeat(depth), "]".repeat(depth)).into_bytes()
        }
        _ => [b"\xff\xfe".as_slice(), &base].concat(),
    }
}

/// Returns a description of the violation, if the reply is outside the
/// documented taxonomy.
pub async fn malformed_case(app: &Router, rng: &mut ChaCha8Rng) -> Option<String> {
    let endpoints = ["next-questions", "recommend", "auto-select", "compare"];
    let ep = endpoints[rng.gen_range(0..endpoints.len())];
    let body = malformed_body(rng);
    let reply = call(app, "POST", &format!("/v1/areas/communication/{ep}"), body.clone(), &[]).await;
    let shown = String::from_utf8_lossy(&body).into_owned();
    if reply.status.is_success() {
        return serde_json::from_slice::<Value>(&body)
            .is_err()
            .then(|| format!("{ep} accepted unparseable body {shown:?}"));
    }
    check_error_reply(&reply).map(|e| format!("{ep} {shown:?}: {e}"))
}

pub fn check_error_reply(reply: &Reply) -> Option<String> {
    if !reply.status.is_client_error() {
        return Some(format!("status {}", reply.status));
    }
    let Ok(v) = serde_json::from_slice::<Value>(&reply.body) else {
        return Some("error body is not JSON".into());
    };
    let code = v["code"].as_str().unwrap_or_default();
    let documented = ERROR_CODES.iter().any(|(c, s)| *c == code && *s == reply.status.as_u16());
    (!documented).then(|| format!("undocumented code {code:?} with status {}", reply.status))
}

/// Whether `model` starts at an exclusive gateway.
pub fn starts_exclusive(model: &DecisionModel) -> bool {
    model.gateways.get(&model.start).is_some_and(|g| g.kind == GatewayKind::Exclusive)
}
