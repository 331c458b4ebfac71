use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::sync::Arc;
use tower::ServiceExt;
use wos_core::api::{router, schema, AppState};
use wos_core::engine::Engine;
use wos_core::fixtures;
use wos_core::geo::parse_geo_table;
use wos_core::mine::{build_graph, MineConfig};
use wos_core::snapshot;

fn f1_state() -> Arc<AppState> {
    let geo = parse_geo_table(fixtures::f1_geo_text()).unwrap();
    let (g, _) = build_graph(&fixtures::f1_records(), geo, &MineConfig::default()).unwrap();
    Arc::new(AppState::new(Engine::new(g), None))
}

async fn call(app: &axum::Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Vec<u8>) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req.header("content-type", "application/json").body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    (status, resp.into_body().collect().await.unwrap().to_bytes().to_vec())
}

async fn get(app: &axum::Router, uri: &str) -> (StatusCode, Value) {
    let (status, bytes) = call(app, Method::GET, uri, None).await;
    (status, serde_json::from_slice(&bytes).unwrap_or_else(|e| panic!("{uri}: body is not JSON: {e}")))
}

#[track_caller]
fn assert_valid(schema_name: &str, doc: &Value) {
    let schema: Value = serde_json::from_str(schema(schema_name).expect("schema exists")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{schema_name}: {errors:?}\n{doc:#}");
}

async fn expect_error(app: &axum::Router, method: Method, uri: &str, body: Option<Value>, status: StatusCode, kind: &str) {
    let (got, bytes) = call(app, method, uri, body).await;
    let doc: Value = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(got, status, "{uri}: {doc}");
    assert_valid("api_error", &doc);
    assert_eq!(doc["kind"], kind, "{uri}");
}

fn advisor_form() -> Value {
    json!({
        "field_tags": ["CS"],
        "min_advisees": 1,
        "min_citations": 0,
        "institution": "I1",
        "weights": {"field": 1.0, "advisees": 2.0, "citations": 1.0, "institution": 0.5}
    })
}

#[tokio::test]
async fn every_endpoint_validates_against_its_schema() {
    let app = router(f1_state(), None);

    let (s, doc) = get(&app, "/healthz").await;
    assert_eq!(s, StatusCode::OK);
    assert_valid("health", &doc);

    for q in ["alic", "Bob's advisor", "carol's collaborators", "s2's citers", "alice's team", "bob's advisees"] {
        let (s, doc) = get(&app, &format!("/scholars?q={}", q.replace(' ', "%20").replace('\'', "%27"))).await;
        assert_eq!(s, StatusCode::OK, "{q}");
        assert_valid("query_answer", &doc);
    }

    for id in ["s1", "s2", "s3"] {
        let (s, doc) = get(&app, &format!("/scholars/{id}")).await;
        assert_eq!(s, StatusCode::OK);
        assert_valid("scholar_profile", &doc);
        for kind in ["coauthor", "advisor", "cites", "cocited", "team"] {
            for extra in ["", "&geo=true", "&series=true&from=2009&to=2012", "&geo=true&series=true"] {
                let (s, doc) = get(&app, &format!("/scholars/{id}/ego?kind={kind}{extra}")).await;
                assert_eq!(s, StatusCode::OK, "{id} {kind} {extra}");
                assert_valid("ego_network", &doc);
            }
        }
    }

    for m in ["collaborators", "advisees", "team_members", "advisor_influence", "citations", "potential_index"] {
        let (s, doc) = get(&app, &format!("/rankings/{m}")).await;
        assert_eq!(s, StatusCode::OK);
        assert_valid("ranking_page", &doc);
    }

    let (s, bytes) = call(&app, Method::POST, "/recommend/advisor", Some(advisor_form())).await;
    assert_eq!(s, StatusCode::OK);
    let doc: Value = serde_json::from_slice(&bytes).unwrap();
    assert_valid("recommendation_set", &doc);

    let (s, doc) = get(&app, "/export?format=nodelink").await;
    assert_eq!(s, StatusCode::OK);
    assert_valid("nodelink", &doc);

    let (s, doc) = get(&app, "/schemas/ranking_page").await;
    assert_eq!(s, StatusCode::OK);
    assert!(doc.get("$schema").is_some());
}

#[tokio::test]
async fn errors_use_the_error_schema() {
    let app = router(f1_state(), None);
    expect_error(&app, Method::GET, "/scholars?q=%20%20", None, StatusCode::BAD_REQUEST, "empty_query").await;
    expect_error(&app, Method::GET, "/scholars", None, StatusCode::BAD_REQUEST, "empty_query").await;
    expect_error(&app, Method::GET, "/scholars?q=a&limit=0", None, StatusCode::BAD_REQUEST, "bad_query_parameter").await;
    expect_error(&app, Method::GET, "/scholars?q=a&limit=-3", None, StatusCode::BAD_REQUEST, "bad_query_parameter").await;
    expect_error(&app, Method::GET, "/scholars/nobody", None, StatusCode::NOT_FOUND, "unknown_scholar").await;
    expect_error(&app, Method::GET, "/scholars/nobody/ego", None, StatusCode::NOT_FOUND, "unknown_scholar").await;
    expect_error(&app, Method::GET, "/scholars/s1/ego?kind=friend", None, StatusCode::BAD_REQUEST, "unknown_kind").await;
    expect_error(&app, Method::GET, "/scholars/s1/ego?series=true&from=2012&to=2000", None, StatusCode::BAD_REQUEST, "bad_query_parameter").await;
    expect_error(&app, Method::GET, "/rankings/h_index", None, StatusCode::BAD_REQUEST, "unknown_measure").await;
    expect_error(&app, Method::GET, "/rankings/citations?offset=x", None, StatusCode::BAD_REQUEST, "bad_query_parameter").await;
    expect_error(&app, Method::POST, "/recommend/advisor", Some(json!({})), StatusCode::BAD_REQUEST, "empty_form").await;
    let negative = json!({"field_tags": ["CS"], "weights": {"field": -1.0}});
    expect_error(&app, Method::POST, "/recommend/advisor", Some(negative), StatusCode::BAD_REQUEST, "bad_weights").await;
    expect_error(&app, Method::POST, "/recommend/advisor", Some(json!([1, 2])), StatusCode::BAD_REQUEST, "bad_body").await;
    expect_error(&app, Method::GET, "/export?format=graphml", None, StatusCode::BAD_REQUEST, "unsupported_format").await;
    expect_error(&app, Method::GET, "/schemas/nope", None, StatusCode::NOT_FOUND, "unknown_schema").await;
    expect_error(&app, Method::GET, "/nowhere", None, StatusCode::NOT_FOUND, "not_found").await;
    expect_error(&app, Method::DELETE, "/healthz", None, StatusCode::METHOD_NOT_ALLOWED, "method_not_allowed").await;
    expect_error(&app, Method::GET, "/recommend/advisor", None, StatusCode::METHOD_NOT_ALLOWED, "method_not_allowed").await;
    expect_error(&app, Method::GET, "/ui/", None, StatusCode::NOT_FOUND, "ui_not_installed").await;
}

#[tokio::test]
async fn collaborators_ranking_and_name_search_on_f1() {
    let app = router(f1_state(), None);
    let (_, doc) = get(&app, "/rankings/collaborators").await;
    let got: Vec<(String, f64)> = doc["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["scholar_id"].as_str().unwrap().to_owned(), e["value"].as_f64().unwrap()))
        .collect();
    assert_eq!(got, vec![("s1".into(), 2.0), ("s2".into(), 1.0), ("s3".into(), 1.0)]);

    let (_, doc) = get(&app, "/scholars?q=alic").await;
    assert_eq!(doc["matches"][0]["scholar_id"], "s1");

    let (_, doc) = get(&app, "/scholars?q=Bob%27s%20advisor").await;
    assert_eq!(doc["query"], json!({"kind": "relation_query", "name": "Bob", "relation": "advisor"}));
}

#[tokio::test]
async fn pages_concatenate_to_the_full_list() {
    let app = router(f1_state(), None);
    for m in ["collaborators", "citations", "potential_index", "advisees"] {
        let (_, full) = get(&app, &format!("/rankings/{m}?limit=1000")).await;
        let full = full["entries"].as_array().unwrap().clone();
        for size in 1..=4 {
            let mut joined = Vec::new();
            let mut offset = 0;
            loop {
                let (s, page) = get(&app, &format!("/rankings/{m}?offset={offset}&limit={size}")).await;
                assert_eq!(s, StatusCode::OK);
                assert_eq!(page["total"], full.len());
                let entries = page["entries"].as_array().unwrap();
                if entries.is_empty() {
                    break;
                }
                joined.extend(entries.iter().cloned());
                offset += size;
            }
            assert_eq!(joined, full, "{m} pages of {size}");
        }
    }
}

#[tokio::test]
async fn reads_do_not_mutate_the_graph() {
    let state = f1_state();
    let before = snapshot::encode(state.current().graph());
    let generation = state.current().graph().generation();
    let app = router(state.clone(), None);
    for uri in ["/healthz", "/scholars?q=alic", "/scholars/s1", "/scholars/s1/ego?geo=true&series=true", "/rankings/citations", "/export"] {
        get(&app, uri).await;
    }
    call(&app, Method::POST, "/recommend/advisor", Some(advisor_form())).await;
    assert_eq!(snapshot::encode(state.current().graph()), before);
    assert_eq!(state.current().graph().generation(), generation);
}

#[tokio::test]
async fn exported_graph_round_trips() {
    let state = f1_state();
    let app = router(state.clone(), None);
    let (_, bytes) = call(&app, Method::GET, "/export", None).await;
    let back = wos_core::export::import_graph(&bytes).unwrap();
    assert_eq!(&back, state.current().graph());
}

#[tokio::test]
async fn ui_assets_are_served_when_configured() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<html>wos</html>").unwrap();
    let app = router(f1_state(), Some(PathBuf::from(dir.path())));
    let (s, body) = call(&app, Method::GET, "/ui/index.html", None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(body, b"<html>wos</html>");
    let (s, _) = call(&app, Method::GET, "/ui/", None).await;
    assert_eq!(s, StatusCode::OK);
}

#[tokio::test]
async fn reload_swaps_in_a_new_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("graph.snap");
    let geo = parse_geo_table(fixtures::f1_geo_text()).unwrap();
    let (g, _) = build_graph(&fixtures::f1_records()[..2], geo.clone(), &MineConfig::default()).unwrap();
    snapshot::save_snapshot(&g, &path).unwrap();
    let state = Arc::new(AppState::load(path.clone()).unwrap());
    let app = router(state.clone(), None);
    let (_, h) = get(&app, "/healthz").await;
    assert_eq!(h["publications"], 2);

    let (full, _) = build_graph(&fixtures::f1_records(), geo, &MineConfig::default()).unwrap();
    snapshot::save_snapshot(&full, &path).unwrap();
    state.reload().unwrap();
    let (_, h) = get(&app, "/healthz").await;
    assert_eq!(h["publications"], 4);
}
