use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use sesforge::convert::REPORT_DELIMITER;
use sesforge::http::{router, AppState, FORMAT_HEADER};
use sesforge_core::store::Registry;
use sesforge_core::syntax::PhraseTable;
use tower::ServiceExt;

const OSTROM_OWL: &str = include_str!("../../core/fixtures/ostrom2007.owl");
const COX_CXL: &str = include_str!("../../core/fixtures/cox2014.cxl");

fn app(dir: &std::path::Path, reg: Registry, limit: usize) -> Router {
    router(
        Arc::new(AppState::new(reg, dir.to_path_buf(), PhraseTable::default())),
        limit,
    )
}

async fn send(app: &Router, req: Request<Body>) -> (StatusCode, String) {
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

fn post(uri: &str, format: Option<&str>, body: impl Into<Body>) -> Request<Body> {
    let mut req = Request::post(uri);
    if let Some(f) = format {
        req = req.header(FORMAT_HEADER, f);
    }
    req.body(body.into()).unwrap()
}

fn get(uri: &str) -> Request<Body> {
    Request::get(uri).body(Body::empty()).unwrap()
}

#[tokio::test]
async fn convert_returns_turtle_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(dir.path(), Registry::default(), 1 << 20);
    let (status, body) = send(&app, post("/convert", Some("owl"), OSTROM_OWL)).await;
    assert_eq!(status, StatusCode::OK);
    let (turtle, report) = body.split_once(REPORT_DELIMITER).unwrap();
    assert!(turtle.contains("ses:ResourceSystem_Ostrom2007"));
    assert!(turtle.contains("sescore:refers_to global:ResourceSystem"));
    assert!(report.contains("normalization report for case `upload`"));
    assert!(!dir.path().join("manifest.txt").exists(), "convert must not persist");
}

#[tokio::test]
async fn case_lifecycle() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(dir.path(), Registry::default(), 1 << 20);
    assert_eq!(send(&app, get("/cases")).await, (StatusCode::OK, String::new()));

    let (status, _) = send(&app, post("/cases/x", Some("owl"), OSTROM_OWL)).await;
    assert_eq!(status, StatusCode::CREATED);
    let (status, _) = send(&app, post("/cases/x", Some("owl"), OSTROM_OWL)).await;
    assert_eq!(status, StatusCode::CONFLICT);

    assert_eq!(send(&app, get("/cases")).await, (StatusCode::OK, "x\n".into()));
    let (status, turtle) = send(&app, get("/cases/x")).await;
    assert_eq!(status, StatusCode::OK);
    assert!(turtle.contains("ses:Ostrom2007_SESFramework"));
    assert_eq!(send(&app, get("/cases/y")).await.0, StatusCode::NOT_FOUND);

    let reloaded = Registry::load(dir.path(), Default::default()).unwrap();
    assert!(reloaded.case("x").is_some());
}

#[tokio::test]
async fn query_and_search() {
    let dir = tempfile::tempdir().unwrap();
    let mut reg = Registry::default();
    reg.seed_framework("McGinnisOstrom2014").unwrap();
    let app = app(dir.path(), reg, 1 << 20);
    assert_eq!(
        send(&app, post("/cases/cox2014", Some("cxl"), COX_CXL)).await.0,
        StatusCode::CREATED
    );

    let (status, tsv) = send(
        &app,
        post("/query", None, "?x sescore:refers_to global:IrrigationSystem"),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(tsv, "?x\nses:IrrigationSystem_Cox2014\n");

    let (status, _) = send(&app, post("/query", None, "?x sescore:refers_to")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let (status, hits) = send(&app, get("/search?q=irrigation%20system")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(hits.lines().next(), Some("2\tses:IrrigationSystem_Cox2014"));
    assert_eq!(send(&app, get("/search?q=")).await.0, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn rejects_bad_uploads() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(dir.path(), Registry::default(), 64);
    let (status, _) = send(&app, post("/convert", Some("owl"), OSTROM_OWL)).await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
    let (status, msg) = send(&app, post("/convert", None, "x")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(msg.contains("X-Format"));
    let (status, _) = send(&app, post("/convert", Some("docx"), "x")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, msg) = send(&app, post("/convert", Some("ttl"), "<a> <b>")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(msg.starts_with("parse error"), "{msg}");
}
