mod support;

use std::io::{Read, Write};

use axum::http::StatusCode;
use qsa_core::catalog::{load_builtin, load_dir, Catalog};
use qsa_core::engine::{recommend, AnswerSet, Top, WeightVector};
use qsa_core::{DecisionModel, Vocabulary};
use serde_json::{json, Value};
use support::{app, call, check_error_reply, get, post, starts_exclusive};

const TOY: &str = r#"model decomposition "Toy" {
  start -> g
  gateway g kind=exclusive question="X or Y?" {
    branch x when "x" -> px
    branch y when "y" -> py
  }
  pattern px name="X" {
    improves security
  }
  pattern py name="Y" {
    degrades performance
  }
}
"#;

fn builtin() -> Catalog {
    load_builtin().unwrap()
}

fn toy() -> (tempfile::TempDir, Catalog) {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("toy.qdm"), TOY).unwrap();
    let catalog = load_dir(dir.path()).unwrap();
    (dir, catalog)
}

fn qkd_answers() -> Value {
    json!({
        "g-comm": ["entanglement", "secure"],
        "g-entanglement": ["connection"],
        "g-connection": ["on-demand"],
        "g-secure": ["qkd"],
    })
}

#[tokio::test]
async fn health_reports_catalog() {
    let c = builtin();
    let r = get(&app(c.clone()), "/v1/health").await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json(), json!({ "status": "ok", "checksum": c.checksum(), "models": 6 }));

    let again = get(&app(builtin()), "/v1/health").await;
    assert_eq!(again.body, r.body);

    let (_dir, one) = toy();
    assert_eq!(get(&app(one), "/v1/health").await.json()["models"], 1);
}

#[tokio::test]
async fn areas_listing_and_etag() {
    let app = app(builtin());
    let r = get(&app, "/v1/areas").await;
    assert_eq!(r.status, StatusCode::OK);
    let areas = r.json();
    assert_eq!(areas.as_array().unwrap().len(), 6);
    assert_eq!(areas[1], json!({ "area": "communication", "title": "Communication", "patterns": 18, "gateways": 10 }));
    assert_eq!(r.headers["access-control-allow-origin"], "*");

    let etag = r.headers["etag"].to_str().unwrap().to_string();
    let again = get(&app, "/v1/areas").await;
    assert_eq!(again.body, r.body);
    assert_eq!(again.headers["etag"], etag.as_str());

    let cached = call(&app, "GET", "/v1/areas", Vec::new(), &[("if-none-match", &etag)]).await;
    assert_eq!(cached.status, StatusCode::NOT_MODIFIED);
    assert!(cached.body.is_empty());
    let stale = call(&app, "GET", "/v1/areas", Vec::new(), &[("if-none-match", "\"old\"")]).await;
    assert_eq!(stale.status, StatusCode::OK);
}

#[tokio::test]
async fn model_document_round_trips() {
    let c = builtin();
    let app = app(c.clone());
    let r = get(&app, "/v1/areas/communication/model").await;
    assert_eq!(r.status, StatusCode::OK);
    let doc: DecisionModel = serde_json::from_slice(&r.body).unwrap();
    assert_eq!(doc.patterns.len(), 18);
    assert_eq!(&doc, c.model(qsa_core::DesignArea::Communication).unwrap());

    let etag = r.headers["etag"].to_str().unwrap().to_string();
    let cached = call(&app, "GET", "/v1/areas/communication/model", Vec::new(), &[("if-none-match", &etag)]).await;
    assert_eq!(cached.status, StatusCode::NOT_MODIFIED);

    let missing = get(&app, "/v1/areas/qa-land/model").await;
    assert_eq!(missing.status, StatusCode::NOT_FOUND);
    assert_eq!(missing.json()["code"], "unknown-area");
}

#[tokio::test]
async fn next_questions_flow() {
    let (_dir, c) = toy();
    assert!(starts_exclusive(c.models().next().unwrap()));
    let app = app(c);
    let first = post(&app, "/v1/areas/decomposition/next-questions", &json!({ "answers": {} })).await;
    assert_eq!(first.status, StatusCode::OK);
    let body = first.json();
    assert_eq!(body["questions"].as_array().unwrap().len(), 1);
    assert_eq!(body["questions"][0]["id"], "g");
    assert_eq!(body["questions"][0]["kind"], "exclusive");
    assert_eq!(body["questions"][0]["branches"][1]["condition"], "y");
    assert_eq!(body["complete"], false);

    let done = post(&app, "/v1/areas/decomposition/next-questions", &json!({ "answers": { "g": ["y"] } })).await;
    assert_eq!(done.json()["questions"], json!([]));
    assert_eq!(done.json()["active_patterns"], json!(["py"]));
    assert_eq!(done.json()["complete"], true);

    let both = post(&app, "/v1/areas/decomposition/next-questions", &json!({ "answers": { "g": ["x", "y"] } })).await;
    assert_eq!(both.status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(both.json()["code"], "arity-violation");
    assert_eq!(both.json()["detail"]["gateway"], "g");

    let builtin = support::app(builtin());
    let start = post(&builtin, "/v1/areas/fault-tolerance/next-questions", &json!({})).await;
    assert_eq!(start.json()["questions"][0]["id"], "g-fault");
}

#[tokio::test]
async fn recommend_matches_library() {
    let c = builtin();
    let app = app(c.clone());
    let body = json!({ "answers": qkd_answers(), "weights": { "security": 1 } });
    let r = post(&app, "/v1/areas/communication/recommend", &body).await;
    assert_eq!(r.status, StatusCode::OK);
    let recs = &r.json()["recommendations"];
    assert_eq!(recs[0]["pattern"], "qkd-protocols");

    let model = c.model(qsa_core::DesignArea::Communication).unwrap();
    let answers: AnswerSet = serde_json::from_value(qkd_answers()).unwrap();
    let w = WeightVector::new([("security", 1.into())], &Vocabulary::standard()).unwrap();
    let direct = recommend(model, &answers, &w, Top::All).unwrap();
    assert_eq!(recs, &serde_json::to_value(&direct).unwrap());

    let zero = post(&app, "/v1/areas/communication/recommend", &json!({ "answers": qkd_answers() })).await.json();
    let ids: Vec<&str> = zero["recommendations"].as_array().unwrap().iter().map(|r| r["pattern"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert!(zero["recommendations"].as_array().unwrap().iter().all(|r| r["score"] == "0"));

    let top3 = post(&app, "/v1/areas/communication/recommend", &json!({ "answers": qkd_answers(), "k": 3 })).await;
    assert!(top3.json()["recommendations"].as_array().unwrap().len() <= 3);

    let k0 = post(&app, "/v1/areas/communication/recommend", &json!({ "k": 0 })).await;
    assert_eq!(k0.json()["code"], "invalid-k");
}

#[tokio::test]
async fn auto_select_on_toy_model() {
    let (_dir, c) = toy();
    let app = app(c);
    let r = post(&app, "/v1/areas/decomposition/auto-select", &json!({ "weights": { "security": 2, "performance": 1 } })).await;
    assert_eq!(r.status, StatusCode::OK);
    let sel = r.json();
    assert_eq!(sel["patterns"], json!(["px"]));
    assert_eq!(sel["choices"], json!({ "g": ["x"] }));
    assert_eq!(sel["total_score"], "2");

    let zero = post(&app, "/v1/areas/decomposition/auto-select", &json!({ "weights": {} })).await.json();
    assert_eq!(zero["total_score"], "0");

    let bad = post(&app, "/v1/areas/decomposition/auto-select", &json!({ "weights": { "velocity": 1 } })).await;
    assert_eq!(bad.status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(bad.json()["code"], "unknown-attribute");
    assert_eq!(bad.json()["detail"]["attribute"], "velocity");
}

async fn ranking(app: &axum::Router, w: &Value) -> Vec<String> {
    let body = json!({ "answers": qkd_answers(), "weights": w });
    let reply = post(app, "/v1/areas/communication/recommend", &body).await.json();
    reply["recommendations"].as_array().unwrap().iter().map(|r| r["pattern"].as_str().unwrap().to_string()).collect()
}

#[tokio::test]
async fn compare_whatif_examples() {
    let c = builtin();
    let app = app(c.clone());
    let uri = "/v1/areas/communication/compare";
    let wa = json!({ "security": 1, "performance": "0.5" });

    let same = post(&app, uri, &json!({ "answers": qkd_answers(), "weights_a": wa, "weights_b": wa })).await.json();
    assert_eq!(same, json!({ "changes": [], "flipped": [] }));

    let doubled = json!({ "security": 2, "performance": 1 });
    let d = post(&app, uri, &json!({ "answers": qkd_answers(), "weights_a": wa, "weights_b": doubled })).await.json();
    assert!(d["changes"].as_array().unwrap().iter().all(|c| c["movement"] == 0));
    assert_eq!(d["flipped"], json!([]));

    let raised = json!({ "security": 3, "performance": "0.5" });
    let r = post(&app, uri, &json!({ "answers": qkd_answers(), "weights_a": wa, "weights_b": raised })).await.json();
    let (ra, rb) = (ranking(&app, &wa).await, ranking(&app, &raised).await);
    for change in r["changes"].as_array().unwrap() {
        let p = change["pattern"].as_str().unwrap();
        let a = ra.iter().position(|x| x == p).unwrap() as i64 + 1;
        let b = rb.iter().position(|x| x == p).unwrap() as i64 + 1;
        assert_eq!(change["rank_a"], a);
        assert_eq!(change["rank_b"], b);
        assert_eq!(change["movement"], a - b);
    }
    for p in &ra {
        let moved = ra.iter().position(|x| x == p) != rb.iter().position(|x| x == p);
        let listed = r["changes"].as_array().unwrap().iter().any(|c| c["pattern"] == p.as_str());
        assert!(!moved || listed, "{p} moved but is not listed");
    }
}

#[tokio::test]
async fn routing_and_limits() {
    let app = app(builtin());
    let r = get(&app, "/v2/areas").await;
    assert_eq!(r.status, StatusCode::NOT_FOUND);
    assert_eq!(r.json()["code"], "not-found");

    let r = call(&app, "DELETE", "/v1/areas", Vec::new(), &[]).await;
    assert_eq!(r.status, StatusCode::METHOD_NOT_ALLOWED);
    assert_eq!(r.json()["code"], "method-not-allowed");

    let huge = vec![b' '; qsa_service::MAX_BODY_BYTES + 1];
    let r = call(&app, "POST", "/v1/areas/communication/recommend", huge, &[]).await;
    assert_eq!(r.status, StatusCode::PAYLOAD_TOO_LARGE);
    assert_eq!(check_error_reply(&r), None);

    let r = post(&app, "/v1/areas/nowhere/recommend", &json!({})).await;
    assert_eq!(r.json()["code"], "unknown-area");

    let r = post(&app, "/v1/areas/communication/recommend", &json!({ "weight": {} })).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    assert_eq!(r.json()["detail"]["field"], "weight");
}

#[tokio::test]
async fn cors_rules() {
    let app = app(builtin());
    let body = serde_json::to_vec(&json!({})).unwrap();
    let uri = "/v1/areas/communication/recommend";

    let ok = call(&app, "POST", uri, body.clone(), &[("origin", "http://ui.test")]).await;
    assert_eq!(ok.headers["access-control-allow-origin"], "http://ui.test");
    let other = call(&app, "POST", uri, body, &[("origin", "http://evil.test")]).await;
    assert!(!other.headers.contains_key("access-control-allow-origin"));

    let pre = |origin: &'static str, method: &'static str| {
        let app = app.clone();
        async move {
            call(&app, "OPTIONS", uri, Vec::new(), &[("origin", origin), ("access-control-request-method", method)]).await
        }
    };
    let allowed = pre("http://ui.test", "POST").await;
    assert_eq!(allowed.status, StatusCode::NO_CONTENT);
    assert_eq!(allowed.headers["access-control-allow-origin"], "http://ui.test");
    let denied = pre("http://evil.test", "POST").await;
    assert_eq!(denied.status, StatusCode::FORBIDDEN);
    assert_eq!(denied.json()["code"], "origin-not-allowed");
    let reads = pre("http://evil.test", "GET").await;
    assert_eq!(reads.status, StatusCode::NO_CONTENT);
    assert_eq!(reads.headers["access-control-allow-origin"], "*");
}

#[tokio::test]
async fn replay_in_any_order() {
    let app = app(builtin());
    let requests = [
        ("/v1/areas/communication/recommend", json!({ "answers": qkd_answers(), "weights": { "security": 1 } })),
        ("/v1/areas/decomposition/auto-select", json!({ "weights": { "modularity": 2 } })),
        ("/v1/areas/communication/next-questions", json!({ "answers": { "g-comm": ["entanglement"] } })),
        ("/v1/areas/communication/recommend", json!({ "answers": { "g-comm": ["nope"] } })),
    ];
    let mut first = Vec::new();
    for (uri, body) in &requests {
        first.push(post(&app, uri, body).await.body);
    }
    for (i, (uri, body)) in requests.iter().enumerate().rev() {
        assert_eq!(post(&app, uri, body).await.body, first[i]);
    }
}

#[tokio::test(flavor = "multi_thread", worker_threads = 2)]
async fn serves_over_tcp_and_reports_bind_failures() {
    let listener = qsa_service::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let server = tokio::spawn(qsa_service::serve(listener, builtin(), Default::default()));

    let reply = tokio::task::spawn_blocking(move || {
        let mut s = std::net::TcpStream::connect(addr).unwrap();
        s.write_all(b"GET /v1/health HTTP/1.1\r\nhost: x\r\nconnection: close\r\n\r\n").unwrap();
        let mut out = String::new();
        s.read_to_string(&mut out).unwrap();
        out
    })
    .await
    .unwrap();
    assert!(reply.starts_with("HTTP/1.1 200"), "{reply}");
    assert!(reply.contains("\"status\":\"ok\""));

    let err = qsa_service::bind(&addr.to_string()).await.unwrap_err();
    assert_eq!(err.code(), "bind-failed");
    server.abort();
}
