use serde::{Deserialize, Serialize};

use crate::error::ValidationError;
use crate::scalar::Scalar;

/// ROC curve from (0, 0) to (1, 1) as (false-positive rate, true-positive rate).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RocCurve<T> {
    pub points: Vec<(T, T)>,
    pub auc: T,
}

/// Threshold sweep over distinct scores, highest first. Tied scores form a
/// single step, so ties contribute half credit to the area.
pub fn roc_points<T: Scalar>(scores: &[T], labels: &[bool]) -> Result<RocCurve<T>, ValidationError> {
    if scores.len() != labels.len() {
        return Err(ValidationError::LengthMismatch { scores: scores.len(), labels: labels.len() });
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(ValidationError::Survey("scores must be finite".into()));
    }
    let positives = labels.iter().filter(|&&l| l).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(ValidationError::DegenerateLabels);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).expect("finite"));

    let (p, n) = (T::lit(positives as f64), T::lit(negatives as f64));
    let mut points = vec![(T::zero(), T::zero())];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if labels[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push((T::lit(fp as f64) / n, T::lit(tp as f64) / p));
    }
    let auc = auc_trapezoid(&points);
    Ok(RocCurve { points, auc })
}

/// Area under a piecewise-linear curve by the trapezoidal rule.
pub fn auc_trapezoid<T: Scalar>(points: &[(T, T)]) -> T {
    points.windows(2).map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / T::lit(2.0)).sum()
}
