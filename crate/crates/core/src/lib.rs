//! Belief rule base (BRB) inference with evidential-reasoning aggregation.
//!
//! The engine is generic over the [`Scalar`] type (`f32` or `f64`); the
//! aliases at the crate root fix it to `f64`, which is what the CLI and the
//! HTTP service use.
//!
//! ```
//! use brb_core::{egov, infer, InputValue};
//!
//! let fw = egov::framework::<f64>().unwrap();
//! let rb = fw.node("User Environment").unwrap().rule_base().unwrap();
//! let out = infer(rb, &[InputValue::Crisp(6.5), InputValue::Crisp(8.0), InputValue::Missing]).unwrap();
//! assert!(out.unassigned_mass > 0.0);
//! ```

pub mod egov;
pub mod error;
pub mod framework;
pub mod inference;
pub mod io;
pub mod model;
mod scalar;
pub mod transform;
pub mod validation;

pub use error::{FrameworkError, InferenceError, LoadError, ModelError, ValidationError};
pub use framework::{evaluate_tree, set_weights, what_if, LeafInputs, NodeOutput};
pub use inference::{
    activate, activation_weights, aggregate_analytical, aggregate_recursive, expected_utility, infer,
    infer_transformed, matching_degree, update_beliefs,
};
pub use io::LoadOptions;
pub use model::{validate_rule_base, FillPolicy, Severity, ValidationIssue};
pub use scalar::{Scalar, COMPLETENESS_TOL};
pub use transform::{transform_crisp, transform_input};

pub type ReferentialScale = model::ReferentialScale<f64>;
pub type BeliefDistribution = model::BeliefDistribution<f64>;
pub type AntecedentAttribute = model::AntecedentAttribute<f64>;
pub type BeliefRule = model::BeliefRule<f64>;
pub type RuleBase = model::RuleBase<f64>;
pub type EvaluationFramework = model::EvaluationFramework<f64>;
pub type InputValue = transform::InputValue<f64>;
pub type InferenceResult = inference::InferenceResult<f64>;
pub type ActivationRecord = inference::ActivationRecord<f64>;
pub type NodeResult = framework::NodeResult<f64>;
pub type Scenario = framework::Scenario<f64>;
pub type WhatIfReport = framework::WhatIfReport<f64>;
pub type SurveyRecord = validation::SurveyRecord<f64>;
pub type RocCurve = validation::RocCurve<f64>;
pub type ComparisonReport = validation::ComparisonReport<f64>;
