use thiserror::Error;

/// Errors raised while constructing model values.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("scale `{scale}`: {reason}")]
    InvalidScale { scale: String, reason: String },
    #[error("invalid belief distribution: {0}")]
    InvalidBeliefs(String),
    #[error("attribute `{attribute}`: weight must be finite and > 0, got {weight}")]
    InvalidAttributeWeight { attribute: String, weight: f64 },
    #[error("rule base `{name}` failed validation: {first}")]
    InvalidRuleBase { name: String, first: String },
    #[error("refusing to generate {count} rules (cap is {cap})")]
    TooManyRules { count: String, cap: u64 },
    #[error("framework: {0}")]
    InvalidFramework(String),
}

/// Errors raised by the inference pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum InferenceError {
    #[error("no rule activated: every matching degree is zero")]
    NoRuleActivated,
    #[error("expected {expected} inputs, got {got}")]
    InputCount { expected: usize, got: usize },
    #[error("input for `{attribute}`: {reason}")]
    InputMismatch { attribute: String, reason: String },
    #[error("non-finite crisp input {0}")]
    NonFiniteInput(f64),
    #[error("aggregation: {0}")]
    InvalidAggregation(String),
    #[error("degenerate evidence combination (normaliser vanished)")]
    Degenerate,
}

/// Errors raised by hierarchical evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameworkError {
    #[error("no rule activated at node `{node}`")]
    NoRuleActivated { node: String },
    #[error("node `{node}`: {source}")]
    Inference {
        node: String,
        #[source]
        source: InferenceError,
    },
    #[error("no input given for leaf `{0}`")]
    MissingLeafInput(String),
    #[error("unknown leaf `{0}`")]
    UnknownLeaf(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("node `{node}` has {expected} children, got {got} weights")]
    WeightCount { node: String, expected: usize, got: usize },
    #[error("node `{node}`: weights must be finite and > 0")]
    NonPositiveWeight { node: String },
}

impl FrameworkError {
    pub(crate) fn at(node: &str, err: InferenceError) -> Self {
        match err {
            InferenceError::NoRuleActivated => FrameworkError::NoRuleActivated { node: node.to_owned() },
            source => FrameworkError::Inference { node: node.to_owned(), source },
        }
    }
}

/// Errors raised while reading documents.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("io error on `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Errors raised by survey ingestion and ROC analysis.
#[derive(Debug, Error)]
pub enum ValidationError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("survey: {0}")]
    Survey(String),
    #[error("ROC needs at least one positive and one negative label")]
    DegenerateLabels,
    #[error("scores and labels differ in length ({scores} vs {labels})")]
    LengthMismatch { scores: usize, labels: usize },
    #[error("no records to compare")]
    Empty,
    #[error("record `{record}`: {source}")]
    Evaluation {
        record: String,
        #[source]
        source: FrameworkError,
    },
}
