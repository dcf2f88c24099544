//! The single-rule-base inference pipeline: transform, activate, discount,
//! aggregate, score.

mod activation;
mod aggregate;

use serde::{Deserialize, Serialize};

pub use activation::{activate, activation_weights, matching_degree, update_beliefs, ActivationRecord};
pub use aggregate::{aggregate_analytical, aggregate_recursive};

use crate::error::InferenceError;
use crate::model::{BeliefDistribution, RuleBase};
use crate::scalar::Scalar;
use crate::transform::{transform_input, InputValue};

/// Output of one rule base: combined beliefs, crisp score and ignorance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct InferenceResult<T> {
    /// Consequent grade labels, lowest first.
    pub grades: Vec<String>,
    pub distribution: BeliefDistribution<T>,
    /// Expected utility; unassigned mass contributes nothing.
    pub crisp: T,
    pub unassigned_mass: T,
    /// Crisp score if all unassigned mass went to the lowest-utility grade.
    pub utility_min: T,
    /// Crisp score if all unassigned mass went to the highest-utility grade.
    pub utility_max: T,
}

/// `Σ_j u_j β_j` over the assigned mass.
pub fn expected_utility<T: Scalar>(dist: &BeliefDistribution<T>, utilities: &[T]) -> T {
    debug_assert_eq!(dist.len(), utilities.len());
    dist.degrees().iter().zip(utilities).map(|(&b, &u)| b * u).sum()
}

/// Runs one rule base on raw inputs (one per antecedent attribute).
pub fn infer<T: Scalar>(rb: &RuleBase<T>, raw_inputs: &[InputValue<T>]) -> Result<InferenceResult<T>, InferenceError> {
    if raw_inputs.len() != rb.antecedents().len() {
        return Err(InferenceError::InputCount { expected: rb.antecedents().len(), got: raw_inputs.len() });
    }
    let inputs = rb
        .antecedents()
        .iter()
        .zip(raw_inputs)
        .map(|(attr, raw)| {
            transform_input(raw, attr.scale()).map_err(|e| match e {
                InferenceError::InputMismatch { reason, .. } => {
                    InferenceError::InputMismatch { attribute: attr.name().to_owned(), reason }
                }
                other => other,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    infer_transformed(rb, &inputs)
}

/// Runs one rule base on inputs already expressed as belief distributions.
pub fn infer_transformed<T: Scalar>(
    rb: &RuleBase<T>,
    inputs: &[BeliefDistribution<T>],
) -> Result<InferenceResult<T>, InferenceError> {
    let records = activate(rb, inputs)?;
    let (weights, beliefs): (Vec<T>, Vec<&[T]>) = records
        .iter()
        .filter(|r| r.activation_weight > T::zero())
        .map(|r| (r.activation_weight, r.updated_beliefs.degrees()))
        .unzip();
    let distribution = aggregate_analytical(&weights, &beliefs, rb.consequent_scale().len())?;
    Ok(score(rb, distribution))
}

fn score<T: Scalar>(rb: &RuleBase<T>, distribution: BeliefDistribution<T>) -> InferenceResult<T> {
    let scale = rb.consequent_scale();
    let crisp = expected_utility(&distribution, scale.utilities());
    let unassigned = distribution.unassigned();
    InferenceResult {
        grades: scale.grades().to_vec(),
        crisp,
        unassigned_mass: unassigned,
        utility_min: crisp + unassigned * scale.min_utility(),
        utility_max: crisp + unassigned * scale.max_utility(),
        distribution,
    }
}
