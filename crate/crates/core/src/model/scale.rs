use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::scalar::Scalar;

/// Grade labels of the shipped five-point scale, lowest first.
pub const FIVE_POINT_GRADES: [&str; 5] = ["Poor", "Satisfactory", "Good", "Very Good", "Excellent"];
/// Utility anchors of the shipped five-point scale on the 1-10 survey range.
pub const FIVE_POINT_ANCHORS: [f64; 5] = [4.0, 5.0, 6.0, 7.0, 10.0];

/// An ordered set of linguistic grades with a utility anchor per grade.
///
/// Grades are kept in ascending anchor order, so index 0 is always the least
/// preferred grade. Anchors drive input transformation; `utilities` drive the
/// expected-utility score of a distribution over this scale and default to the
/// anchors.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ReferentialScale<T> {
    name: String,
    grades: Vec<String>,
    anchors: Vec<T>,
    utilities: Vec<T>,
}

impl<T: Scalar> ReferentialScale<T> {
    pub fn new(name: impl Into<String>, grades: Vec<String>, anchors: Vec<T>) -> Result<Self, ModelError> {
        let utilities = anchors.clone();
        Self::with_utilities(name, grades, anchors, utilities)
    }

    /// Builds a scale with explicit output utilities.
    ///
    /// Grades given out of anchor order are reordered (carrying their
    /// utilities along) so that index order equals utility order.
    pub fn with_utilities(
        name: impl Into<String>,
        grades: Vec<String>,
        anchors: Vec<T>,
        utilities: Vec<T>,
    ) -> Result<Self, ModelError> {
        let name = name.into();
        let fail = |reason: String| ModelError::InvalidScale { scale: name.clone(), reason };
        if grades.len() < 2 {
            return Err(fail(format!("needs at least 2 grades, got {}", grades.len())));
        }
        if anchors.len() != grades.len() || utilities.len() != grades.len() {
            return Err(fail(format!(
                "{} grades but {} anchors and {} utilities",
                grades.len(),
                anchors.len(),
                utilities.len()
            )));
        }
        if anchors.iter().chain(&utilities).any(|v| !v.is_finite()) {
            return Err(fail("anchors and utilities must be finite".into()));
        }
        let mut seen = HashSet::new();
        for g in &grades {
            if !seen.insert(g.as_str()) {
                return Err(fail(format!("duplicate grade label `{g}`")));
            }
        }

        let mut order: Vec<usize> = (0..grades.len()).collect();
        order.sort_by(|&a, &b| anchors[a].partial_cmp(&anchors[b]).expect("finite anchors"));
        let grades: Vec<String> = order.iter().map(|&i| grades[i].clone()).collect();
        let anchors: Vec<T> = order.iter().map(|&i| anchors[i]).collect();
        let utilities: Vec<T> = order.iter().map(|&i| utilities[i]).collect();
        if anchors.windows(2).any(|w| w[0] >= w[1]) {
            return Err(fail("anchors must be strictly increasing".into()));
        }
        Ok(Self { name, grades, anchors, utilities })
    }

    /// The Poor..Excellent scale with anchors 4/5/6/7/10.
    pub fn five_point(name: impl Into<String>) -> Self {
        Self::new(
            name,
            FIVE_POINT_GRADES.iter().map(|g| g.to_string()).collect(),
            FIVE_POINT_ANCHORS.iter().map(|&a| T::lit(a)).collect(),
        )
        .expect("built-in scale is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn grades(&self) -> &[String] {
        &self.grades
    }

    pub fn anchors(&self) -> &[T] {
        &self.anchors
    }

    pub fn utilities(&self) -> &[T] {
        &self.utilities
    }

    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }

    pub fn grade_index(&self, label: &str) -> Option<usize> {
        self.grades.iter().position(|g| g == label)
    }

    /// Same grades, anchors and utilities (names may differ).
    pub fn same_grades(&self, other: &Self) -> bool {
        self.grades == other.grades && self.anchors == other.anchors && self.utilities == other.utilities
    }

    pub fn min_utility(&self) -> T {
        self.utilities.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max_utility(&self) -> T {
        self.utilities.iter().copied().fold(T::neg_infinity(), T::max)
    }
}

#[derive(Deserialize)]
#[serde(bound = "T: Scalar")]
struct RawScale<T> {
    name: String,
    grades: Vec<String>,
    anchors: Vec<T>,
    #[serde(default)]
    utilities: Option<Vec<T>>,
}

impl<'de, T: Scalar> Deserialize<'de> for ReferentialScale<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawScale::<T>::deserialize(d)?;
        let utilities = raw.utilities.unwrap_or_else(|| raw.anchors.clone());
        Self::with_utilities(raw.name, raw.grades, raw.anchors, utilities).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn five_point_defaults() {
        let s = ReferentialScale::<f64>::five_point("q");
        assert_eq!(s.len(), 5);
        assert_eq!(s.anchors(), &[4.0, 5.0, 6.0, 7.0, 10.0]);
        assert_eq!(s.utilities(), s.anchors());
        assert_eq!(s.grade_index("Very Good"), Some(3));
    }

    #[test]
    fn reorders_by_anchor() {
        let s = ReferentialScale::<f64>::with_utilities(
            "s",
            labels(&["High", "Low", "Mid"]),
            vec![3.0, 1.0, 2.0],
            vec![30.0, 10.0, 20.0],
        )
        .unwrap();
        assert_eq!(s.grades(), &labels(&["Low", "Mid", "High"])[..]);
        assert_eq!(s.utilities(), &[10.0, 20.0, 30.0]);
    }

    #[test]
    fn rejects_bad_scales() {
        assert!(ReferentialScale::<f64>::new("s", labels(&["a"]), vec![1.0]).is_err());
        assert!(ReferentialScale::<f64>::new("s", labels(&["a", "b"]), vec![1.0, 1.0]).is_err());
        assert!(ReferentialScale::<f64>::new("s", labels(&["a", "a"]), vec![1.0, 2.0]).is_err());
        assert!(ReferentialScale::<f64>::new("s", labels(&["a", "b"]), vec![1.0, f64::NAN]).is_err());
        assert!(ReferentialScale::<f64>::new("s", labels(&["a", "b"]), vec![1.0]).is_err());
    }

    #[test]
    fn deserialize_validates() {
        let ok: ReferentialScale<f64> =
            serde_json::from_str(r#"{"name":"x","grades":["a","b"],"anchors":[0,1]}"#).unwrap();
        assert_eq!(ok.utilities(), &[0.0, 1.0]);
        let bad = serde_json::from_str::<ReferentialScale<f64>>(r#"{"name":"x","grades":["a","b"],"anchors":[1,1]}"#);
        assert!(bad.is_err());
    }
}
