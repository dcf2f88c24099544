//! Input transformation: crisp values, pre-distributed beliefs and missing
//! answers become belief distributions over an attribute's grades.

use std::fmt;

use indexmap::IndexMap;
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::InferenceError;
use crate::model::{BeliefDistribution, ReferentialScale};
use crate::scalar::Scalar;

/// One raw input to an antecedent attribute.
///
/// In documents a crisp value is a JSON number, a missing answer is
/// `"missing"` or `null`, and a distribution is a `{grade: degree}` object.
#[derive(Debug, Clone, PartialEq)]
pub enum InputValue<T> {
    Crisp(T),
    Distribution(IndexMap<String, T>),
    Missing,
}

impl<T: Scalar> InputValue<T> {
    pub fn is_missing(&self) -> bool {
        matches!(self, InputValue::Missing)
    }

    /// Survey convention: a raw 0 means "no answer".
    pub fn from_survey(raw: T) -> Self {
        if raw == T::zero() {
            InputValue::Missing
        } else {
            InputValue::Crisp(raw)
        }
    }
}

impl<T: Scalar> fmt::Display for InputValue<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputValue::Crisp(v) => write!(f, "{v}"),
            InputValue::Missing => f.write_str("missing"),
            InputValue::Distribution(m) => {
                let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}: {v}")).collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
        }
    }
}

impl<T: Scalar> Serialize for InputValue<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            InputValue::Crisp(v) => v.serialize(s),
            InputValue::Missing => s.serialize_str("missing"),
            InputValue::Distribution(m) => {
                let mut map = s.serialize_map(Some(m.len()))?;
                for (k, v) in m {
                    map.serialize_entry(k, v)?;
                }
                map.end()
            }
        }
    }
}

impl<'de, T: Scalar> Deserialize<'de> for InputValue<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V<T>(std::marker::PhantomData<T>);

        impl<'de, T: Scalar> Visitor<'de> for V<T> {
            type Value = InputValue<T>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number, \"missing\", null, or a {grade: degree} object")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
                Ok(InputValue::Crisp(T::lit(v)))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(InputValue::Crisp(T::lit(v as f64)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(InputValue::Crisp(T::lit(v as f64)))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                if v.eq_ignore_ascii_case("missing") {
                    Ok(InputValue::Missing)
                } else {
                    v.parse::<f64>()
                        .map(|x| InputValue::Crisp(T::lit(x)))
                        .map_err(|_| E::custom(format!("expected a number or \"missing\", got `{v}`")))
                }
            }

            fn visit_unit<E: de::Error>(self) -> Result<Self::Value, E> {
                Ok(InputValue::Missing)
            }

            fn visit_none<E: de::Error>(self) -> Result<Self::Value, E> {
                Ok(InputValue::Missing)
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut m = IndexMap::new();
                while let Some((k, v)) = access.next_entry::<String, T>()? {
                    m.insert(k, v);
                }
                Ok(InputValue::Distribution(m))
            }
        }

        d.deserialize_any(V(std::marker::PhantomData))
    }
}

/// Distributes a crisp value over the two grades whose anchors bracket it.
///
/// Between anchors `h_j <= x <= h_{j+1}` the lower grade gets
/// `(h_{j+1} - x) / (h_{j+1} - h_j)` and the upper grade the rest. Values
/// outside the anchor range clamp to full belief on the nearest extreme grade.
pub fn transform_crisp<T: Scalar>(
    value: T,
    scale: &ReferentialScale<T>,
) -> Result<BeliefDistribution<T>, InferenceError> {
    if !value.is_finite() {
        return Err(InferenceError::NonFiniteInput(value.as_f64()));
    }
    let h = scale.anchors();
    let n = h.len();
    if value <= h[0] {
        return Ok(BeliefDistribution::certain(n, 0));
    }
    if value >= h[n - 1] {
        return Ok(BeliefDistribution::certain(n, n - 1));
    }
    // first upper anchor strictly above value; value > h[0] so j >= 1
    let upper = h.partition_point(|&a| a <= value);
    let lower = upper - 1;
    let mut degrees = vec![T::zero(); n];
    let low = (h[upper] - value) / (h[upper] - h[lower]);
    degrees[lower] = low;
    degrees[upper] = T::one() - low;
    Ok(BeliefDistribution::from_vec_unchecked(degrees))
}

/// Transforms any input kind against `scale`. Missing becomes the all-zero
/// distribution (completeness mass 0).
pub fn transform_input<T: Scalar>(
    input: &InputValue<T>,
    scale: &ReferentialScale<T>,
) -> Result<BeliefDistribution<T>, InferenceError> {
    match input {
        InputValue::Crisp(v) => transform_crisp(*v, scale),
        InputValue::Missing => Ok(BeliefDistribution::zeros(scale.len())),
        InputValue::Distribution(m) => BeliefDistribution::from_labels(scale, m.iter().map(|(k, v)| (k.as_str(), *v)))
            .map_err(|e| InferenceError::InputMismatch { attribute: scale.name().to_owned(), reason: e.to_string() }),
    }
}
