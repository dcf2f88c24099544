//! HTTP facade over an evaluation framework.
//!
//! Routes:
//!
//! | method | path         | body                                  |
//! |--------|--------------|---------------------------------------|
//! | GET    | `/framework` |                                       |
//! | POST   | `/evaluate`  | `{leaf: value}`                       |
//! | POST   | `/whatif`    | `{baseline, scenarios: [{name, overrides}]}` |
//! | PUT    | `/weights`   | `{node, weights}`                     |
//! | POST   | `/roc`       | `{records: [{id, label, values}]}`    |
//!
//! Every response to a framework-dependent request carries the
//! `x-framework-version` header. Weight updates swap the whole framework, so
//! a request sees either the old or the new version, never a mix.

use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use brb_core::framework::Scenario;
use brb_core::io::{parse_leaf_inputs, FrameworkDocument};
use brb_core::model::{EvaluationFramework, NodeKind, ReferentialScale};
use brb_core::validation::{compare, SurveyRecord};
use brb_core::{evaluate_tree, set_weights, what_if, FrameworkError, LeafInputs, ValidationError};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use tokio::net::TcpListener;
use tower_http::cors::CorsLayer;

pub const VERSION_HEADER: &str = "x-framework-version";

/// A framework together with the version number it was published under.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub version: u64,
    pub framework: Arc<EvaluationFramework<f64>>,
    topology: Arc<Topology>,
}

impl Snapshot {
    fn new(version: u64, framework: EvaluationFramework<f64>) -> Self {
        let topology = Arc::new(Topology::of(version, &framework));
        Self { version, framework: Arc::new(framework), topology }
    }
}

#[derive(Debug)]
pub struct AppState {
    current: RwLock<Snapshot>,
}

impl AppState {
    pub fn new(framework: EvaluationFramework<f64>) -> Self {
        Self { current: RwLock::new(Snapshot::new(1, framework)) }
    }

    pub fn snapshot(&self) -> Snapshot {
        self.current.read().expect("state lock poisoned").clone()
    }

    /// Replaces the weights of `node` and publishes the result as a new version.
    pub fn update_weights(&self, node: &str, weights: &[f64]) -> Result<Snapshot, FrameworkError> {
        let mut guard = self.current.write().expect("state lock poisoned");
        let next = set_weights(&guard.framework, node, weights)?;
        *guard = Snapshot::new(guard.version + 1, next);
        Ok(guard.clone())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Topology {
    pub name: String,
    pub version: u64,
    pub root: String,
    pub scales: Vec<ReferentialScale<f64>>,
    pub leaves: Vec<String>,
    pub internal: Vec<String>,
    pub nodes: Vec<TopologyNode>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TopologyNode {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub kind: &'static str,
    /// Input scale for leaves, output scale for internal nodes.
    pub scale: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub weights: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rules: Option<usize>,
}

impl Topology {
    fn of(version: u64, fw: &EvaluationFramework<f64>) -> Self {
        let doc = FrameworkDocument::from_framework(fw);
        let nodes = fw
            .nodes()
            .iter()
            .zip(&doc.nodes)
            .map(|(n, d)| {
                let (kind, scale, weights, rules) = match (&n.kind, &d.rulebase) {
                    (NodeKind::Leaf { .. }, _) => ("leaf", d.scale.clone().unwrap_or_default(), vec![], None),
                    (NodeKind::Internal { rule_base, .. }, Some(brb_core::io::RuleBaseSource::Inline(inline))) => {
                        ("internal", inline.scale.clone(), rule_base.attribute_weights(), Some(rule_base.rules().len()))
                    }
                    (NodeKind::Internal { rule_base, .. }, _) => (
                        "internal",
                        rule_base.consequent_scale().name().to_owned(),
                        rule_base.attribute_weights(),
                        Some(rule_base.rules().len()),
                    ),
                };
                TopologyNode {
                    name: n.name.clone(),
                    label: n.label.clone(),
                    kind,
                    scale,
                    children: d.children.clone(),
                    weights,
                    rules,
                }
            })
            .collect();
        Self {
            name: fw.name().to_owned(),
            version,
            root: fw.root().name.clone(),
            scales: doc.scales,
            leaves: fw.leaf_names().into_iter().map(String::from).collect(),
            internal: fw.internal_names().into_iter().map(String::from).collect(),
            nodes,
        }
    }
}

/// JSON error body: `{"error": ..., "node": ...}`.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
    node: Option<String>,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        Self { status, message: message.into(), node: None }
    }

    fn bad_request(message: impl ToString) -> Self {
        Self::new(StatusCode::BAD_REQUEST, message.to_string())
    }
}

impl From<FrameworkError> for ApiError {
    fn from(e: FrameworkError) -> Self {
        match &e {
            FrameworkError::NoRuleActivated { node } => {
                Self { status: StatusCode::UNPROCESSABLE_ENTITY, message: e.to_string(), node: Some(node.clone()) }
            }
            FrameworkError::Inference { node, .. } => {
                Self { status: StatusCode::BAD_REQUEST, message: e.to_string(), node: Some(node.clone()) }
            }
            FrameworkError::UnknownNode(_) => Self::new(StatusCode::NOT_FOUND, e.to_string()),
            _ => Self::bad_request(e),
        }
    }
}

impl From<ValidationError> for ApiError {
    fn from(e: ValidationError) -> Self {
        match e {
            ValidationError::DegenerateLabels => Self::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()),
            ValidationError::Evaluation { record, source } => {
                let mut err = ApiError::from(source);
                err.message = format!("record `{record}`: {}", err.message);
                err
            }
            other => Self::bad_request(other),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        #[derive(Serialize)]
        struct Body {
            error: String,
            #[serde(skip_serializing_if = "Option::is_none")]
            node: Option<String>,
        }
        (self.status, Json(Body { error: self.message, node: self.node })).into_response()
    }
}

fn versioned<T: Serialize>(version: u64, body: &T) -> Response {
    let mut resp = Json(body).into_response();
    resp.headers_mut().insert(VERSION_HEADER, HeaderValue::from(version));
    resp
}

fn parse<T: serde::de::DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(ApiError::bad_request)
}

async fn get_framework(State(state): State<Arc<AppState>>) -> Response {
    let snap = state.snapshot();
    versioned(snap.version, &*snap.topology)
}

async fn post_evaluate(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let text = std::str::from_utf8(&body).map_err(ApiError::bad_request)?;
    let inputs: LeafInputs<f64> = parse_leaf_inputs(text).map_err(ApiError::bad_request)?;
    let snap = state.snapshot();
    let result = evaluate_tree(&snap.framework, &inputs)?;
    Ok(versioned(snap.version, &result))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WhatIfRequest {
    baseline: LeafInputs<f64>,
    #[serde(default)]
    scenarios: Vec<Scenario<f64>>,
}

async fn post_whatif(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let req: WhatIfRequest = parse(&body)?;
    let snap = state.snapshot();
    let report = what_if(&snap.framework, &req.baseline, &req.scenarios)?;
    Ok(versioned(snap.version, &report))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightsRequest {
    node: String,
    weights: Vec<f64>,
}

async fn put_weights(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let req: WeightsRequest = parse(&body)?;
    let snap = state.update_weights(&req.node, &req.weights)?;
    Ok(versioned(snap.version, &*snap.topology))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Label {
    Flag(bool),
    Number(u8),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RocRecord {
    #[serde(default)]
    id: Option<String>,
    label: Label,
    values: IndexMap<String, f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RocRequest {
    records: Vec<RocRecord>,
}

async fn post_roc(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let req: RocRequest = parse(&body)?;
    let snap = state.snapshot();
    let leaves = snap.framework.leaf_names();
    let records = req
        .records
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let label = match r.label {
                Label::Flag(b) => b,
                Label::Number(0) => false,
                Label::Number(1) => true,
                Label::Number(n) => {
                    return Err(ApiError::bad_request(format!("record {}: label must be 0 or 1, got {n}", i + 1)))
                }
            };
            let record = SurveyRecord { id: r.id.unwrap_or_else(|| (i + 1).to_string()), values: r.values, label };
            record.check(&leaves)?;
            Ok(record)
        })
        .collect::<Result<Vec<_>, ApiError>>()?;
    let report = compare(&snap.framework, &records)?;
    Ok(versioned(snap.version, &report))
}

async fn not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "not found")
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/framework", get(get_framework))
        .route("/evaluate", post(post_evaluate))
        .route("/whatif", post(post_whatif))
        .route("/weights", put(put_weights))
        .route("/roc", post(post_roc))
        .fallback(not_found)
        .layer(CorsLayer::permissive())
        .with_state(state)
}

pub fn app(framework: EvaluationFramework<f64>) -> Router {
    router(Arc::new(AppState::new(framework)))
}

/// Serves `framework` on an already bound listener until the process is stopped.
pub async fn serve(framework: EvaluationFramework<f64>, listener: TcpListener) -> std::io::Result<()> {
    axum::serve(listener, app(framework)).await
}
