use serde::{Deserialize, Serialize};

use crate::error::InferenceError;
use crate::model::{BeliefDistribution, BeliefRule, RuleBase};
use crate::scalar::Scalar;

/// Per-rule activation state for one set of inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ActivationRecord<T> {
    pub rule_id: String,
    pub matching_degree: T,
    pub activation_weight: T,
    pub updated_beliefs: BeliefDistribution<T>,
}

fn check_lengths<T: Scalar>(rule: &BeliefRule<T>, inputs: &[BeliefDistribution<T>]) -> Result<(), InferenceError> {
    if rule.antecedent.len() != inputs.len() {
        return Err(InferenceError::InputCount { expected: rule.antecedent.len(), got: inputs.len() });
    }
    Ok(())
}

/// Combined matching degree of `rule`: the product over attributes of the
/// input belief on the rule's packet grade, each raised to the attribute
/// weight divided by the largest attribute weight.
///
/// An attribute whose input carries no belief at all (a missing answer) does
/// not take part in the product; the rule-side discount for it happens in
/// [`update_beliefs`]. If every input is missing the degree is 0.
pub fn matching_degree<T: Scalar>(
    rule: &BeliefRule<T>,
    inputs: &[BeliefDistribution<T>],
    weights: &[T],
) -> Result<T, InferenceError> {
    check_lengths(rule, inputs)?;
    if weights.len() != inputs.len() {
        return Err(InferenceError::InputCount { expected: inputs.len(), got: weights.len() });
    }
    let max_w = weights.iter().copied().fold(T::zero(), T::max);
    if !(max_w > T::zero() && max_w.is_finite()) {
        return Err(InferenceError::InvalidAggregation("attribute weights must be positive".into()));
    }
    let mut degree = T::one();
    let mut any_present = false;
    for ((&grade, input), &w) in rule.antecedent.iter().zip(inputs).zip(weights) {
        if input.mass() <= T::zero() {
            continue;
        }
        any_present = true;
        let alpha = *input.degrees().get(grade).ok_or_else(|| InferenceError::InputMismatch {
            attribute: format!("#{grade}"),
            reason: format!("grade index {grade} outside an input of {} grades", input.len()),
        })?;
        let exponent = w / max_w;
        // 0^0 = 1: a zero-weight attribute is ignored
        let factor = if exponent == T::zero() { T::one() } else { alpha.powf(exponent) };
        degree = degree * factor;
        if degree == T::zero() {
            return Ok(T::zero());
        }
    }
    Ok(if any_present { degree } else { T::zero() })
}

/// Normalised activation weights `θ_k α_k / Σ θ_j α_j` for every rule.
pub fn activation_weights<T: Scalar>(
    rb: &RuleBase<T>,
    inputs: &[BeliefDistribution<T>],
) -> Result<Vec<T>, InferenceError> {
    let weights = rb.attribute_weights();
    let alphas = rb.rules().iter().map(|r| matching_degree(r, inputs, &weights)).collect::<Result<Vec<T>, _>>()?;
    normalise(rb, &alphas)
}

fn normalise<T: Scalar>(rb: &RuleBase<T>, alphas: &[T]) -> Result<Vec<T>, InferenceError> {
    let raw: Vec<T> = rb.rules().iter().zip(alphas).map(|(r, &a)| r.weight * a).collect();
    let total: T = raw.iter().copied().sum();
    if total <= T::zero() {
        return Err(InferenceError::NoRuleActivated);
    }
    Ok(raw.into_iter().map(|x| x / total).collect())
}

/// Discounts a rule's consequent by the mean completeness mass of its inputs.
/// Every rule binds every attribute, so the mean runs over all inputs.
pub fn update_beliefs<T: Scalar>(rule: &BeliefRule<T>, inputs: &[BeliefDistribution<T>]) -> BeliefDistribution<T> {
    rule.consequent.scaled(completeness_factor(inputs))
}

pub(crate) fn completeness_factor<T: Scalar>(inputs: &[BeliefDistribution<T>]) -> T {
    if inputs.is_empty() {
        return T::one();
    }
    let total: T = inputs.iter().map(|d| d.mass().min(T::one())).sum();
    total / T::lit(inputs.len() as f64)
}

/// Matching degrees, activation weights and updated beliefs for every rule.
pub fn activate<T: Scalar>(
    rb: &RuleBase<T>,
    inputs: &[BeliefDistribution<T>],
) -> Result<Vec<ActivationRecord<T>>, InferenceError> {
    if inputs.len() != rb.antecedents().len() {
        return Err(InferenceError::InputCount { expected: rb.antecedents().len(), got: inputs.len() });
    }
    for (attr, input) in rb.antecedents().iter().zip(inputs) {
        if input.len() != attr.scale().len() {
            return Err(InferenceError::InputMismatch {
                attribute: attr.name().to_owned(),
                reason: format!("{} degrees for a {}-grade scale", input.len(), attr.scale().len()),
            });
        }
    }
    let weights = rb.attribute_weights();
    let alphas = rb.rules().iter().map(|r| matching_degree(r, inputs, &weights)).collect::<Result<Vec<T>, _>>()?;
    let omegas = normalise(rb, &alphas)?;
    let factor = completeness_factor(inputs);
    Ok(rb
        .rules()
        .iter()
        .zip(alphas.into_iter().zip(omegas))
        .map(|(rule, (alpha, omega))| ActivationRecord {
            rule_id: rule.id.clone(),
            matching_degree: alpha,
            activation_weight: omega,
            updated_beliefs: rule.consequent.scaled(factor),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AntecedentAttribute, ReferentialScale};

    fn dist(d: &[f64]) -> BeliefDistribution<f64> {
        BeliefDistribution::new(d.to_vec()).unwrap()
    }

    fn rule(packet: Vec<usize>) -> BeliefRule<f64> {
        BeliefRule::new("R", packet, BeliefDistribution::certain(5, 0))
    }

    #[test]
    fn matching_single_factor() {
        let input = dist(&[0.0, 0.0, 0.5, 0.5, 0.0]);
        assert_eq!(matching_degree(&rule(vec![2]), &[input], &[1.0]).unwrap(), 0.5);
    }

    #[test]
    fn matching_product() {
        let a = dist(&[0.5, 0.5]);
        let b = dist(&[0.5, 0.5]);
        assert_eq!(matching_degree(&rule(vec![0, 1]), &[a, b], &[1.0, 1.0]).unwrap(), 0.25);
    }

    #[test]
    fn matching_weighted_exponents() {
        let a = dist(&[0.5, 0.5]);
        let b = dist(&[0.25, 0.75]);
        let got = matching_degree(&rule(vec![0, 0]), &[a, b], &[1.0, 2.0]).unwrap();
        // normalised weights (0.5, 1)
        let expect = 0.5f64.sqrt() * 0.25;
        assert!((got - expect).abs() < 1e-15);
        assert!((got - 0.17678).abs() < 1e-5);
    }

    #[test]
    fn matching_zero_factor_and_missing() {
        let a = dist(&[1.0, 0.0]);
        let missing = BeliefDistribution::zeros(2);
        assert_eq!(matching_degree(&rule(vec![1, 0]), &[a.clone(), missing.clone()], &[1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(matching_degree(&rule(vec![0, 1]), &[a, missing.clone()], &[1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(matching_degree(&rule(vec![0, 1]), &[missing.clone(), missing], &[1.0, 1.0]).unwrap(), 0.0);
        assert!(matching_degree(&rule(vec![0]), &[dist(&[1.0, 0.0]), dist(&[1.0, 0.0])], &[1.0, 1.0]).is_err());
    }

    fn two_rule_base(theta: (f64, f64)) -> RuleBase<f64> {
        let s = ReferentialScale::<f64>::new("s", vec!["lo".into(), "hi".into()], vec![0.0, 1.0]).unwrap();
        RuleBase::new(
            "t",
            vec![AntecedentAttribute::new("a", s.clone())],
            s,
            vec![
                BeliefRule::new("R1", vec![0], BeliefDistribution::certain(2, 0)).weighted(theta.0),
                BeliefRule::new("R2", vec![1], BeliefDistribution::certain(2, 1)).weighted(theta.1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn weights_normalise() {
        let w = activation_weights(&two_rule_base((1.0, 1.0)), &[dist(&[0.3, 0.7])]).unwrap();
        assert!((w[0] - 0.3).abs() < 1e-15 && (w[1] - 0.7).abs() < 1e-15);
        let w = activation_weights(&two_rule_base((2.0, 1.0)), &[dist(&[0.5, 0.5])]).unwrap();
        assert!((w[0] - 2.0 / 3.0).abs() < 1e-15 && (w[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn all_missing_activates_nothing() {
        let err = activation_weights(&two_rule_base((1.0, 1.0)), &[BeliefDistribution::zeros(2)]).unwrap_err();
        assert_eq!(err, InferenceError::NoRuleActivated);
    }

    #[test]
    fn update_discounts_by_mean_mass() {
        let r = BeliefRule::new("R1", vec![0, 0], dist(&[0.2, 0.8]));
        let half = update_beliefs(&r, &[dist(&[1.0, 0.0]), BeliefDistribution::zeros(2)]);
        assert_eq!(half.degrees(), &[0.1, 0.4]);
        let same = update_beliefs(&r, &[dist(&[1.0, 0.0]), dist(&[0.5, 0.5])]);
        assert_eq!(same.degrees(), r.consequent.degrees());

        let rule_one = BeliefRule::new("R1", vec![0, 0, 0], dist(&[0.0, 0.2222, 0.7778, 0.0, 0.0]));
        let inputs = [dist(&[1.0, 0.0]), dist(&[0.0, 1.0]), dist(&[0.4, 0.0])];
        let upd = update_beliefs(&rule_one, &inputs);
        let expect = [0.0, 0.17776, 0.62224, 0.0, 0.0];
        for (g, e) in upd.degrees().iter().zip(expect) {
            assert!((g - e).abs() < 1e-12);
        }
        assert!((upd.mass() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn activation_records() {
        let rb = two_rule_base((1.0, 1.0));
        let recs = activate(&rb, &[dist(&[0.3, 0.7])]).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].matching_degree, 0.3);
        assert!(activate(&rb, &[dist(&[0.3, 0.3, 0.4])]).is_err());
        assert!(activate(&rb, &[]).is_err());
    }
}
