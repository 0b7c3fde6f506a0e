use axum::body::{to_bytes, Body};
use axum::http::{Request, StatusCode};
use cb_cli::server::router;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or(Body::empty(), |b| Body::from(b.to_string())))
        .unwrap();
    let resp = router().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = to_bytes(resp.into_body(), usize::MAX).await.unwrap();
    (status, serde_json::from_slice(&bytes).unwrap())
}

fn generic() -> Value {
    json!([["1","0","0"],["0","1","0"],["0","0","1"],["1","1","1"],["1","2","3"],["1","5","7"],["1","11","13"],["1","17","29"]])
}

#[tokio::test]
async fn health() {
    let (status, body) = call("GET", "/api/health", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["status"], "ok");
}

#[tokio::test]
async fn compute_returns_certified_point_and_pencil() {
    let (status, body) = call("POST", "/api/compute", Some(json!({"points": generic(), "method": "det"}))).await;
    assert_eq!(status, StatusCode::OK);
    let r = &body["result"];
    assert_eq!(r["p9"], json!(["2275923", "4469543", "6720033"]));
    assert_eq!(r["certification"]["certified"], true);
    assert_eq!(r["cubic_basis"].as_array().unwrap().len(), 2);
    assert!(body["meta"]["elapsed_micros"].is_u64());
}

#[tokio::test]
async fn floats_are_accepted_exactly() {
    let mut pts = generic();
    pts[4] = json!([1.0, 2.75, -3.125]);
    let (status, body) = call("POST", "/api/compute", Some(json!({"points": pts}))).await;
    assert_eq!(status, StatusCode::OK);
    assert!(body["result"]["p9"].is_array(), "{body}");
    let mut exact = generic();
    exact[4] = json!(["1", "11/4", "-25/8"]);
    let (_, want) = call("POST", "/api/compute", Some(json!({"points": exact}))).await;
    assert_eq!(body["result"], want["result"]);
}

#[tokio::test]
async fn prime_frame_is_reported_degenerate() {
    let pts = json!([["1","0","0"],["0","1","0"],["0","0","1"],["1","1","1"],["1","2","3"],["1","5","7"],["1","11","13"],["1","17","19"]]);
    let (status, body) = call("POST", "/api/compute", Some(json!({"points": pts}))).await;
    assert_eq!(status, StatusCode::OK);
    assert!(body["result"]["p9"].is_null());
    assert_eq!(body["result"]["degeneracy"]["collinear_triples"], json!([[6, 7, 8]]));
}

#[tokio::test]
async fn duplicate_point_with_fano_signals_zero_vector() {
    let mut pts = generic();
    pts[1] = pts[0].clone();
    let (status, body) = call("POST", "/api/compute", Some(json!({"points": pts, "method": "fano"}))).await;
    assert_eq!(status, StatusCode::OK);
    let r = &body["result"];
    assert!(r["p9"].is_null());
    assert_eq!(r["fano_zero_vector"], true);
    assert_eq!(r["degeneracy"]["coincident_pairs"], json!([[1, 2]]));

    let (status, body) = call("POST", "/api/degeneracy", Some(json!({"points": pts}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["general_position"], false);
}

#[tokio::test]
async fn validation_errors_are_400() {
    let mut pts = generic();
    pts[6][2] = json!(true);
    let (status, body) = call("POST", "/api/compute", Some(json!({"points": pts}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"]["field"], "points[6][2]");

    let (status, body) = call("POST", "/api/compute", Some(json!({"points": generic(), "method": "magic"}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"]["field"], "method");

    let (status, body) = call("POST", "/api/compute", Some(json!({"points": generic(), "triple": [1, 2]}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"]["field"], "triple");
}

#[tokio::test]
async fn identical_requests_give_identical_results() {
    let req = json!({"points": generic(), "method": "crossratio"});
    let (_, a) = call("POST", "/api/compute", Some(req.clone())).await;
    let (_, b) = call("POST", "/api/compute", Some(req)).await;
    assert_eq!(a["result"].to_string(), b["result"].to_string());
}
