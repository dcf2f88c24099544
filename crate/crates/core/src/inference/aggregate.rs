//! Evidential-reasoning combination of activated rules.
//!
//! Both functions take the activation weights `ω_k` and the (updated) rule
//! consequents `β_jk` and return the combined belief over the `n` consequent
//! grades. [`aggregate_analytical`] is the closed form used by the engine;
//! [`aggregate_recursive`] folds the rules pairwise and serves as a check.

use crate::error::InferenceError;
use crate::model::BeliefDistribution;
use crate::scalar::{Scalar, COMPLETENESS_TOL};

fn check<T: Scalar, B: AsRef<[T]>>(weights: &[T], beliefs: &[B], n: usize) -> Result<(), InferenceError> {
    let bad = |m: String| Err(InferenceError::InvalidAggregation(m));
    if weights.len() != beliefs.len() {
        return bad(format!("{} weights for {} rules", weights.len(), beliefs.len()));
    }
    if weights.is_empty() {
        return bad("no rules to aggregate".into());
    }
    if n == 0 {
        return bad("consequent has no grades".into());
    }
    if weights.iter().any(|w| !(w.is_finite() && *w >= T::zero())) {
        return bad("activation weights must be finite and non-negative".into());
    }
    let tol = T::lit(COMPLETENESS_TOL).max(T::epsilon() * T::lit(64.0));
    let total: T = weights.iter().copied().sum();
    if (total - T::one()).abs() > tol {
        return bad(format!("activation weights sum to {total}, expected 1"));
    }
    for (k, row) in beliefs.iter().enumerate() {
        let row = row.as_ref();
        if row.len() != n {
            return bad(format!("rule #{k} has {} degrees, expected {n}", row.len()));
        }
        if row.iter().any(|b| !(*b >= T::zero() && *b <= T::one())) {
            return bad(format!("rule #{k} has a degree outside [0, 1]"));
        }
        let s: T = row.iter().copied().sum();
        if s > T::one() + tol {
            return bad(format!("rule #{k} beliefs sum to {s} > 1"));
        }
    }
    Ok(())
}

fn finish<T: Scalar>(mut out: Vec<T>) -> BeliefDistribution<T> {
    for b in &mut out {
        *b = b.max(T::zero()).min(T::one());
    }
    BeliefDistribution::from_vec_unchecked(out)
}

/// Closed-form ER aggregation:
///
/// ```text
/// β_j = μ [Π_k (ω_k β_jk + 1 − ω_k Σ_j β_jk) − Π_k (1 − ω_k Σ_j β_jk)] / (1 − μ Π_k (1 − ω_k))
/// μ   = [Σ_j Π_k (ω_k β_jk + 1 − ω_k Σ_j β_jk) − (n − 1) Π_k (1 − ω_k Σ_j β_jk)]^-1
/// ```
pub fn aggregate_analytical<T: Scalar, B: AsRef<[T]>>(
    weights: &[T],
    beliefs: &[B],
    n: usize,
) -> Result<BeliefDistribution<T>, InferenceError> {
    check(weights, beliefs, n)?;
    let mut per_grade = vec![T::one(); n];
    let mut remaining = T::one();
    let mut unweighted = T::one();
    for (&w, row) in weights.iter().zip(beliefs) {
        if w == T::zero() {
            continue;
        }
        let row = row.as_ref();
        let assigned = w * row.iter().copied().sum::<T>();
        for (p, &b) in per_grade.iter_mut().zip(row) {
            *p = *p * (w * b + T::one() - assigned);
        }
        remaining = remaining * (T::one() - assigned);
        unweighted = unweighted * (T::one() - w);
    }
    let inv_mu = per_grade.iter().copied().sum::<T>() - T::lit((n - 1) as f64) * remaining;
    if inv_mu.abs() <= T::min_positive_value() {
        return Err(InferenceError::Degenerate);
    }
    let mu = T::one() / inv_mu;
    let denom = T::one() - mu * unweighted;
    if denom.abs() <= T::epsilon() {
        return Err(InferenceError::Degenerate);
    }
    Ok(finish(per_grade.into_iter().map(|p| mu * (p - remaining) / denom).collect()))
}

/// Recursive ER aggregation: basic masses `m_jk = ω_k β_jk` with the
/// remainder split into a weight-induced part `1 − ω_k` and an
/// incompleteness-induced part `ω_k (1 − Σ_j β_jk)`, combined one rule at a
/// time with per-step normalisation.
pub fn aggregate_recursive<T: Scalar, B: AsRef<[T]>>(
    weights: &[T],
    beliefs: &[B],
    n: usize,
) -> Result<BeliefDistribution<T>, InferenceError> {
    check(weights, beliefs, n)?;

    struct Masses<T> {
        grades: Vec<T>,
        /// remaining mass from the rule weight
        weight_rest: T,
        /// remaining mass from incomplete beliefs
        ignorance: T,
    }

    let basic = |w: T, row: &[T]| {
        let grades: Vec<T> = row.iter().map(|&b| w * b).collect();
        let assigned: T = row.iter().copied().sum();
        Masses { grades, weight_rest: T::one() - w, ignorance: w * (T::one() - assigned) }
    };

    let mut acc = basic(weights[0], beliefs[0].as_ref());
    for (&w, row) in weights.iter().zip(beliefs).skip(1) {
        let next = basic(w, row.as_ref());
        let acc_rest = acc.weight_rest + acc.ignorance;
        let next_rest = next.weight_rest + next.ignorance;

        let acc_total: T = acc.grades.iter().copied().sum();
        let next_total: T = next.grades.iter().copied().sum();
        let agree: T = acc.grades.iter().zip(&next.grades).map(|(&a, &b)| a * b).sum();
        let conflict = acc_total * next_total - agree;
        let norm = T::one() - conflict;
        if norm <= T::zero() {
            return Err(InferenceError::Degenerate);
        }
        let k = T::one() / norm;

        let grades =
            acc.grades.iter().zip(&next.grades).map(|(&a, &b)| k * (a * b + acc_rest * b + a * next_rest)).collect();
        let ignorance =
            k * (acc.ignorance * next.ignorance + acc.weight_rest * next.ignorance + acc.ignorance * next.weight_rest);
        let weight_rest = k * acc.weight_rest * next.weight_rest;
        acc = Masses { grades, weight_rest, ignorance };
    }

    let denom = T::one() - acc.weight_rest;
    if denom <= T::zero() {
        return Err(InferenceError::Degenerate);
    }
    Ok(finish(acc.grades.into_iter().map(|m| m / denom).collect()))
}
