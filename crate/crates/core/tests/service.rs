mod common;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use gddx::service::{router, AppState};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string()))
            .unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = router(AppState::default(), None).oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

fn cli_output(args: &[&str]) -> String {
    let mut out = Vec::new();
    gddx::cli::run(std::iter::once("gddx").chain(args.iter().copied()), &mut out, &mut Vec::new());
    String::from_utf8(out).unwrap()
}

#[tokio::test]
async fn prove_matches_the_command_line() {
    let gcs = common::fixture("ninepoint.gcs");
    let (status, body) = call("POST", "/api/prove", Some(json!({ "gcs": gcs, "lang": "de" }))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["status"], "proved");
    let root = body["root"].as_u64().unwrap() as usize;
    let node = body["dag"].as_array().unwrap().iter().find(|n| n["index"] == root).unwrap();
    assert_eq!(node["fact"], "cyclic(D,E,F,G)");
    let path = common::fixture_path("ninepoint.gcs");
    assert_eq!(body["rendering"], cli_output(&["prove", path.to_str().unwrap(), "--lang", "de"]));

    let (_, dot) = call("POST", "/api/prove", Some(json!({ "gcs": gcs, "mode": "dot" }))).await;
    assert_eq!(dot["rendering"], cli_output(&["prove", path.to_str().unwrap(), "--format", "dot"]));
}

#[tokio::test]
async fn prove_reports_not_proved_and_errors() {
    let (status, body) = call("POST", "/api/prove", Some(json!({ "gcs": common::fixture("scalene.gcs") }))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["status"], "not_proved");

    let (status, body) = call("POST", "/api/prove", Some(json!({ "gcs": "point A\nmidpoint M A Q\n" }))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["error_class"], "input");

    let (status, _) = call("POST", "/api/prove", Some(json!({ "gcs": common::fixture("midline.gcs"), "lang": "zz" }))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn wu_backend_lists_conditions() {
    let req = json!({ "gcs": common::fixture("midline.gcs"), "backend": "wu" });
    let (status, body) = call("POST", "/api/prove", Some(req)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["status"], "proved");
    assert!(!body["ndgs"].as_array().unwrap().is_empty());
}

#[tokio::test]
async fn parse_reports_line_numbers() {
    let (status, body) = call("POST", "/api/parse", Some(json!({ "gcs": "point A\npoint B\nmidpoint M A\n" }))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["error"]["line"], 3);

    let (status, body) = call("POST", "/api/parse", Some(json!({ "gcs": common::fixture("midline.gcs") }))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["points"].as_array().unwrap().len(), 5);
    assert_eq!(body["goals"].as_array().unwrap().len(), 1);
}

#[tokio::test]
async fn detected_goal_can_be_proved() {
    let gcs = common::fixture("ninepoint.gcs");
    let (status, body) = call("POST", "/api/detect", Some(json!({ "gcs": gcs }))).await;
    assert_eq!(status, StatusCode::OK);
    let cand = body
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["fact"] == "cyclic(D,E,F,G)")
        .unwrap()
        .clone();
    let (status, body) = call("POST", "/api/prove", Some(json!({ "gcs": gcs, "goal": cand["goal"] }))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["goal"], "cyclic(D,E,F,G)");
    assert_eq!(body["status"], "proved");
}

#[tokio::test]
async fn catalogs_and_rules() {
    let (status, body) = call("GET", "/api/i18n/de", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["fallback"], "en");
    assert!(body["entries"].as_array().unwrap().iter().any(|e| e["key"] == "because"));
    let (status, _) = call("GET", "/api/i18n/zz", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let (status, body) = call("GET", "/api/rules", None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(body["rules"].as_array().unwrap().iter().any(|r| r["id"] == "midp_cong"));
}
