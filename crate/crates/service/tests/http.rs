use std::path::Path;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use brb_core::io::{load_framework_file, LoadOptions};
use brb_core::model::{
    generate_complete_rule_base, AntecedentAttribute, FillPolicy, FrameworkBuilder, ReferentialScale,
};
use brb_core::validation::synthetic::{planted_framework, synthetic_survey, SyntheticConfig};
use brb_core::{egov, EvaluationFramework};
use brb_service::{app, router, AppState, VERSION_HEADER};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn toy() -> EvaluationFramework {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/toy_framework.json");
    load_framework_file(&path, LoadOptions::default()).unwrap()
}

fn flat(leaves: &[&str]) -> EvaluationFramework {
    let five = || ReferentialScale::five_point("five");
    let attrs = leaves.iter().map(|l| AntecedentAttribute::new(*l, five())).collect();
    let rb = generate_complete_rule_base("root", attrs, five(), FillPolicy::Diagonal).unwrap();
    let mut b = FrameworkBuilder::new("flat");
    for l in leaves {
        b = b.leaf(*l, five());
    }
    b.internal("root", leaves, rb).build().unwrap()
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Option<u64>, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, |b| Body::from(b.to_string())))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let version = resp.headers().get(VERSION_HEADER).map(|v| v.to_str().unwrap().parse().unwrap());
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, version, value)
}

fn root_crisp(v: &Value) -> f64 {
    v["output"]["result"]["crisp"].as_f64().unwrap()
}

#[tokio::test]
async fn framework_topology() {
    let app = app(egov::framework().unwrap());
    let (status, version, body) = call(&app, Method::GET, "/framework", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(version, Some(1));
    assert_eq!(body["leaves"].as_array().unwrap().len(), 21);
    assert_eq!(body["internal"].as_array().unwrap().len(), 9);
    assert_eq!(body["root"], egov::ROOT);
    assert_eq!(body["scales"][0]["grades"].as_array().unwrap().len(), 5);
    let root = body["nodes"].as_array().unwrap().iter().find(|n| n["name"] == egov::ROOT).unwrap();
    assert_eq!(root["weights"], json!([1.0, 1.0, 1.0]));
    assert_eq!(root["rules"], 125);
}

#[tokio::test]
async fn unknown_route_is_404() {
    let app = app(toy());
    let (status, _, body) = call(&app, Method::GET, "/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["error"], "not found");
}

#[tokio::test]
async fn cors_is_permissive() {
    let app = app(toy());
    let req =
        Request::builder().uri("/framework").header("origin", "http://localhost:5173").body(Body::empty()).unwrap();
    let resp = app.oneshot(req).await.unwrap();
    assert_eq!(resp.headers()["access-control-allow-origin"], "*");
}

#[tokio::test]
async fn evaluate_toy_identity() {
    let app = app(toy());
    let (status, _, body) = call(&app, Method::POST, "/evaluate", Some(json!({"q": 6.5}))).await;
    assert_eq!(status, StatusCode::OK);
    assert!((root_crisp(&body) - 6.5).abs() < 1e-9);
    assert!((body["output"]["percent"].as_f64().unwrap() - 65.0).abs() < 1e-9);
    assert_eq!(body["children"][0]["name"], "Quality");
}

#[tokio::test]
async fn evaluate_errors() {
    let app = app(flat(&["a", "b"]));
    let (status, _, body) = call(&app, Method::POST, "/evaluate", Some(json!({"a": "missing", "b": null}))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["node"], "root");

    let (status, _, body) = call(&app, Method::POST, "/evaluate", Some(json!({"a": 5, "b": 6, "zz": 1}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(body["error"].as_str().unwrap().contains("zz"));

    let (status, _, body) = call(&app, Method::POST, "/evaluate", Some(json!({"a": 5}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(body["error"].as_str().unwrap().contains('b'));

    let (status, _, _) = call(&app, Method::POST, "/evaluate", Some(json!([1, 2]))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let (status, _, _) = call(&app, Method::POST, "/evaluate", Some(json!({"a": {"Great": 1.0}, "b": 5}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn whatif_contracts() {
    let app = app(flat(&["a", "b"]));
    let baseline = json!({"a": 6, "b": 8});

    let (status, _, body) = call(&app, Method::POST, "/whatif", Some(json!({"baseline": baseline}))).await;
    assert_eq!(status, StatusCode::OK);
    assert!(body["scenarios"].as_array().unwrap().is_empty());

    let scenarios = json!([
        {"name": "same", "overrides": {}},
        {"name": "broken", "overrides": {"a": "missing", "b": "missing"}},
        {"name": "better", "overrides": {"a": 9}}
    ]);
    let (status, _, body) =
        call(&app, Method::POST, "/whatif", Some(json!({"baseline": baseline, "scenarios": scenarios}))).await;
    assert_eq!(status, StatusCode::OK);
    let reports = body["scenarios"].as_array().unwrap();
    assert_eq!(reports.len(), 3);
    assert_eq!(reports[0]["name"], "better");
    assert_eq!(reports[1]["name"], "same");
    assert!(reports[1]["deltas"].as_array().unwrap().iter().all(|d| d["delta"] == 0.0));
    assert_eq!(reports[2]["name"], "broken");
    assert!(reports[2]["error"].as_str().unwrap().contains("root"));
    assert_eq!(reports.iter().filter(|r| r.get("error").is_some()).count(), 1);

    let (status, _, body) =
        call(&app, Method::POST, "/whatif", Some(json!({"baseline": {"a": "missing", "b": "missing"}}))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["node"], "root");
}

#[tokio::test]
async fn weights_update() {
    let app = app(flat(&["a", "b"]));
    let inputs = json!({"a": 9, "b": 5.25});
    let (_, v1, before) = call(&app, Method::POST, "/evaluate", Some(inputs.clone())).await;

    let (status, v2, topo) =
        call(&app, Method::PUT, "/weights", Some(json!({"node": "root", "weights": [3, 3]}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!((v1, v2), (Some(1), Some(2)));
    assert_eq!(topo["version"], 2);
    let (_, _, same) = call(&app, Method::POST, "/evaluate", Some(inputs.clone())).await;
    assert!((root_crisp(&before) - root_crisp(&same)).abs() < 1e-12);

    call(&app, Method::PUT, "/weights", Some(json!({"node": "root", "weights": [2, 1]}))).await;
    let (_, v, heavy) = call(&app, Method::POST, "/evaluate", Some(inputs)).await;
    assert_eq!(v, Some(3));
    assert!(root_crisp(&heavy) > root_crisp(&before));

    let (status, _, _) = call(&app, Method::PUT, "/weights", Some(json!({"node": "root", "weights": [1]}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _, _) = call(&app, Method::PUT, "/weights", Some(json!({"node": "root", "weights": [1, -1]}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _, _) = call(&app, Method::PUT, "/weights", Some(json!({"node": "ghost", "weights": [1, 1]}))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _, _) = call(&app, Method::PUT, "/weights", Some(json!({"node": "root"}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (_, v, _) = call(&app, Method::GET, "/framework", None).await;
    assert_eq!(v, Some(3));
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_weight_updates_are_atomic() {
    let fw = flat(&["a", "b"]);
    let schedule: Vec<[f64; 2]> = (0..20).map(|i| [1.0 + (i % 5) as f64, 1.0 + (i % 3) as f64]).collect();
    let inputs = json!({"a": 9, "b": 5.25});

    // expected root score for every version the server can publish
    let mut expected = vec![f64::NAN];
    let probe = brb_core::LeafInputs::from_iter([
        ("a".to_string(), brb_core::InputValue::Crisp(9.0)),
        ("b".to_string(), brb_core::InputValue::Crisp(5.25)),
    ]);
    expected.push(brb_core::evaluate_tree(&fw, &probe).unwrap().crisp().unwrap());
    for w in &schedule {
        let next = brb_core::set_weights(&fw, "root", w).unwrap();
        expected.push(brb_core::evaluate_tree(&next, &probe).unwrap().crisp().unwrap());
    }

    let app = router(Arc::new(AppState::new(fw)));
    let writer = {
        let app = app.clone();
        tokio::spawn(async move {
            for w in schedule {
                let (status, _, _) =
                    call(&app, Method::PUT, "/weights", Some(json!({"node": "root", "weights": w}))).await;
                assert_eq!(status, StatusCode::OK);
                tokio::task::yield_now().await;
            }
        })
    };
    let readers: Vec<_> = (0..8)
        .map(|_| {
            let app = app.clone();
            let inputs = inputs.clone();
            tokio::spawn(async move {
                let mut seen = vec![];
                for _ in 0..25 {
                    let (status, version, body) = call(&app, Method::POST, "/evaluate", Some(inputs.clone())).await;
                    assert_eq!(status, StatusCode::OK);
                    seen.push((version.unwrap() as usize, root_crisp(&body)));
                }
                seen
            })
        })
        .collect();
    writer.await.unwrap();
    for r in readers {
        for (version, crisp) in r.await.unwrap() {
            assert_eq!(crisp, expected[version], "version {version}");
        }
    }
    let (_, v, _) = call(&app, Method::GET, "/framework", None).await;
    assert_eq!(v, Some(21));
}

fn roc_payload(records: &[brb_core::SurveyRecord]) -> Value {
    json!({"records": records.iter().map(|r| json!({"id": r.id, "label": r.label as u8, "values": r.values})).collect::<Vec<_>>()})
}

#[tokio::test]
async fn roc_perfect_separation() {
    let app = app(flat(&["a", "b"]));
    let records: Vec<Value> = (1..=10).map(|i| json!({"label": i > 5, "values": {"a": i, "b": i}})).collect();
    let (status, _, body) = call(&app, Method::POST, "/roc", Some(json!({"records": records}))).await;
    assert_eq!(status, StatusCode::OK);
    let overall = body["dimensions"].as_array().unwrap().iter().find(|d| d["dimension"] == "Overall").unwrap();
    assert_eq!(overall["engine_auc"], 1.0);
}

#[tokio::test]
async fn roc_errors() {
    let app = app(flat(&["a", "b"]));
    let one_class: Vec<Value> = (1..=4).map(|i| json!({"label": 1, "values": {"a": i, "b": 3}})).collect();
    let (status, _, _) = call(&app, Method::POST, "/roc", Some(json!({"records": one_class}))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    let bad_label = json!({"records": [{"label": 2, "values": {"a": 1, "b": 1}}]});
    assert_eq!(call(&app, Method::POST, "/roc", Some(bad_label)).await.0, StatusCode::BAD_REQUEST);
    let out_of_range =
        json!({"records": [{"label": 1, "values": {"a": 11, "b": 1}}, {"label": 0, "values": {"a": 1, "b": 1}}]});
    assert_eq!(call(&app, Method::POST, "/roc", Some(out_of_range)).await.0, StatusCode::BAD_REQUEST);
    let missing_leaf = json!({"records": [{"label": 1, "values": {"a": 1}}]});
    assert_eq!(call(&app, Method::POST, "/roc", Some(missing_leaf)).await.0, StatusCode::BAD_REQUEST);
    let unanswered =
        json!({"records": [{"label": 1, "values": {"a": 0, "b": 0}}, {"label": 0, "values": {"a": 3, "b": 1}}]});
    let (status, _, body) = call(&app, Method::POST, "/roc", Some(unanswered)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["node"], "root");
}

#[tokio::test]
async fn roc_on_seeded_synthetic_survey() {
    let fw = planted_framework().unwrap();
    let records = synthetic_survey(&fw, &SyntheticConfig::default()).unwrap();
    let app = app(fw);
    let (status, _, body) = call(&app, Method::POST, "/roc", Some(roc_payload(&records))).await;
    assert_eq!(status, StatusCode::OK);
    let overall = body["dimensions"].as_array().unwrap().iter().find(|d| d["dimension"] == "Overall").unwrap();
    assert!(overall["engine_auc"].as_f64().unwrap() > overall["lrf_auc"].as_f64().unwrap());
}
