use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::scale::ReferentialScale;
use crate::error::ModelError;
use crate::scalar::{Scalar, COMPLETENESS_TOL};

/// Degrees of belief over the grades of one scale, in the scale's grade order.
///
/// Every degree lies in `[0, 1]` and the total (the completeness mass) never
/// exceeds one by more than [`COMPLETENESS_TOL`]. Mass below one is
/// unassigned belief, i.e. ignorance.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar", transparent)]
pub struct BeliefDistribution<T> {
    degrees: Vec<T>,
}

impl<T: Scalar> BeliefDistribution<T> {
    pub fn new(degrees: Vec<T>) -> Result<Self, ModelError> {
        if let Some(d) = degrees.iter().find(|d| !(**d >= T::zero() && **d <= T::one())) {
            return Err(ModelError::InvalidBeliefs(format!("degree {d} outside [0, 1]")));
        }
        let sum: T = degrees.iter().copied().sum();
        if sum > T::one() + T::lit(COMPLETENESS_TOL) {
            return Err(ModelError::InvalidBeliefs(format!("degrees sum to {sum} > 1")));
        }
        Ok(Self { degrees })
    }

    /// Total ignorance over `n` grades.
    pub fn zeros(n: usize) -> Self {
        Self { degrees: vec![T::zero(); n] }
    }

    /// Full belief on a single grade.
    pub fn certain(n: usize, grade: usize) -> Self {
        let mut degrees = vec![T::zero(); n];
        degrees[grade] = T::one();
        Self { degrees }
    }

    /// Builds from `label -> degree` pairs; unlisted grades get zero.
    pub fn from_labels<'a, I>(scale: &ReferentialScale<T>, pairs: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (&'a str, T)>,
    {
        let mut degrees = vec![T::zero(); scale.len()];
        for (label, d) in pairs {
            let idx = scale.grade_index(label).ok_or_else(|| {
                ModelError::InvalidBeliefs(format!("grade `{label}` not in scale `{}`", scale.name()))
            })?;
            degrees[idx] = degrees[idx] + d;
        }
        Self::new(degrees)
    }

    /// Skips validation; for values already known to satisfy the invariants.
    pub(crate) fn from_vec_unchecked(degrees: Vec<T>) -> Self {
        Self { degrees }
    }

    pub fn degrees(&self) -> &[T] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Sum of all degrees.
    pub fn mass(&self) -> T {
        self.degrees.iter().copied().sum()
    }

    pub fn unassigned(&self) -> T {
        (T::one() - self.mass()).max(T::zero())
    }

    pub fn is_complete(&self) -> bool {
        (self.mass() - T::one()).abs() <= T::lit(COMPLETENESS_TOL)
    }

    /// Multiplies every degree by `factor` (expected in `[0, 1]`).
    pub fn scaled(&self, factor: T) -> Self {
        Self { degrees: self.degrees.iter().map(|&d| d * factor).collect() }
    }

    /// `label -> degree` map in grade order.
    pub fn labeled(&self, scale: &ReferentialScale<T>) -> IndexMap<String, T> {
        scale.grades().iter().cloned().zip(self.degrees.iter().copied()).collect()
    }
}

impl<'de, T: Scalar> Deserialize<'de> for BeliefDistribution<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let degrees = Vec::<T>::deserialize(d)?;
        Self::new(degrees).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn completeness() {
        let b = BeliefDistribution::new(vec![0.0f64, 0.2222, 0.7778, 0.0, 0.0]).unwrap();
        assert!(b.is_complete());
        let half = b.scaled(0.5);
        assert!(!half.is_complete());
        assert!((half.unassigned() - 0.5).abs() < 1e-12);
        assert_eq!(BeliefDistribution::<f64>::zeros(3).mass(), 0.0);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(BeliefDistribution::new(vec![-0.1, 0.5]).is_err());
        assert!(BeliefDistribution::new(vec![1.1]).is_err());
        assert!(BeliefDistribution::new(vec![0.6, 0.6]).is_err());
        assert!(BeliefDistribution::new(vec![f64::NAN]).is_err());
        assert!(BeliefDistribution::new(vec![0.5, 0.5 + 5e-7]).is_ok());
    }

    #[test]
    fn labels_map_onto_scale() {
        let s = ReferentialScale::<f64>::five_point("x");
        let b = BeliefDistribution::from_labels(&s, [("Very Good", 0.2222), ("Good", 0.7778)]).unwrap();
        assert_eq!(b.degrees(), &[0.0, 0.0, 0.7778, 0.2222, 0.0]);
        assert!(BeliefDistribution::from_labels(&s, [("Great", 1.0)]).is_err());
        let m = b.labeled(&s);
        assert_eq!(m.keys().next().unwrap(), "Poor");
        assert_eq!(m["Good"], 0.7778);
    }
}
