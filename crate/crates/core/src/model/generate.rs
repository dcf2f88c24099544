use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::belief::BeliefDistribution;
use super::rule::{AntecedentAttribute, BeliefRule, RuleBase};
use super::scale::ReferentialScale;
use crate::error::ModelError;
use crate::scalar::Scalar;

pub const DEFAULT_RULE_CAP: u64 = 1_000_000;

/// How consequents of generated rules are filled in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FillPolicy {
    /// Equal belief on every consequent grade.
    Uniform,
    /// Full belief on the grade at the rounded mean antecedent position.
    Diagonal,
    /// All-zero consequents, for expert editing.
    Blank,
}

impl FromStr for FillPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "uniform" => Ok(Self::Uniform),
            "diagonal" => Ok(Self::Diagonal),
            "blank" => Ok(Self::Blank),
            other => Err(format!("unknown fill policy `{other}` (uniform|diagonal|blank)")),
        }
    }
}

impl fmt::Display for FillPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Uniform => "uniform",
            Self::Diagonal => "diagonal",
            Self::Blank => "blank",
        })
    }
}

/// Number of rules a complete rule base over `antecedents` would hold, or
/// `None` on overflow.
pub fn combination_count<T: Scalar>(antecedents: &[AntecedentAttribute<T>]) -> Option<u64> {
    antecedents.iter().try_fold(1u64, |acc, a| acc.checked_mul(a.scale().len() as u64))
}

/// Generates one rule per packet-antecedent combination, in lexicographic
/// order of grade indices (last attribute varies fastest). Rule ids are
/// `R1..RL`.
pub fn generate_complete_rule_base<T: Scalar>(
    name: impl Into<String>,
    antecedents: Vec<AntecedentAttribute<T>>,
    consequent_scale: ReferentialScale<T>,
    fill: FillPolicy,
) -> Result<RuleBase<T>, ModelError> {
    generate_complete_rule_base_capped(name, antecedents, consequent_scale, fill, DEFAULT_RULE_CAP)
}

pub fn generate_complete_rule_base_capped<T: Scalar>(
    name: impl Into<String>,
    antecedents: Vec<AntecedentAttribute<T>>,
    consequent_scale: ReferentialScale<T>,
    fill: FillPolicy,
    cap: u64,
) -> Result<RuleBase<T>, ModelError> {
    let count = match combination_count(&antecedents) {
        Some(c) if c <= cap => c as usize,
        Some(c) => return Err(ModelError::TooManyRules { count: c.to_string(), cap }),
        None => return Err(ModelError::TooManyRules { count: "more than 2^64".into(), cap }),
    };
    let sizes: Vec<usize> = antecedents.iter().map(|a| a.scale().len()).collect();
    let n = consequent_scale.len();

    let mut rules = Vec::with_capacity(count);
    let mut packet = vec![0usize; sizes.len()];
    for k in 0..count {
        let consequent = match fill {
            FillPolicy::Uniform => BeliefDistribution::from_vec_unchecked(vec![T::one() / T::lit(n as f64); n]),
            FillPolicy::Blank => BeliefDistribution::zeros(n),
            FillPolicy::Diagonal => BeliefDistribution::certain(n, diagonal_grade(&packet, &sizes, n)),
        };
        rules.push(BeliefRule::new(format!("R{}", k + 1), packet.clone(), consequent));
        // odometer increment
        for i in (0..sizes.len()).rev() {
            packet[i] += 1;
            if packet[i] < sizes[i] {
                break;
            }
            packet[i] = 0;
        }
    }
    RuleBase::new(name, antecedents, consequent_scale, rules)
}

/// Mean relative position of the packet grades mapped onto `n` consequent
/// grades. With equal grade counts this is the rounded mean grade index.
fn diagonal_grade(packet: &[usize], sizes: &[usize], n: usize) -> usize {
    if packet.is_empty() {
        return 0;
    }
    let mean =
        packet.iter().zip(sizes).map(|(&g, &s)| if s > 1 { g as f64 / (s - 1) as f64 } else { 0.0 }).sum::<f64>()
            / packet.len() as f64;
    ((mean * (n - 1) as f64).round() as usize).min(n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::rule::Severity;

    fn attrs(k: usize) -> Vec<AntecedentAttribute<f64>> {
        (0..k).map(|i| AntecedentAttribute::new(format!("A{i}"), ReferentialScale::five_point("s"))).collect()
    }

    #[test]
    fn counts_match_grade_products() {
        for (k, expect) in [(1, 5), (2, 25), (5, 3125)] {
            let rb = generate_complete_rule_base("g", attrs(k), ReferentialScale::five_point("c"), FillPolicy::Uniform)
                .unwrap();
            assert_eq!(rb.rules().len(), expect);
            assert!(rb.validate().is_empty());
        }
    }

    #[test]
    fn lexicographic_order() {
        let rb =
            generate_complete_rule_base("g", attrs(2), ReferentialScale::five_point("c"), FillPolicy::Blank).unwrap();
        assert_eq!(rb.rules()[0].antecedent, vec![0, 0]);
        assert_eq!(rb.rules()[1].antecedent, vec![0, 1]);
        assert_eq!(rb.rules()[5].antecedent, vec![1, 0]);
        assert_eq!(rb.rules()[24].antecedent, vec![4, 4]);
        assert_eq!(rb.rules()[24].id, "R25");
        assert!(rb.validate().iter().all(|i| i.severity == Severity::Warn));
    }

    #[test]
    fn diagonal_single_attribute() {
        let rb = generate_complete_rule_base("g", attrs(1), ReferentialScale::five_point("c"), FillPolicy::Diagonal)
            .unwrap();
        for (k, r) in rb.rules().iter().enumerate() {
            assert_eq!(r.consequent.degrees(), BeliefDistribution::<f64>::certain(5, k).degrees());
        }
    }

    #[test]
    fn diagonal_rounds_mean_index() {
        assert_eq!(diagonal_grade(&[0, 1], &[5, 5], 5), 1); // 0.5 rounds up
        assert_eq!(diagonal_grade(&[0, 4, 4], &[5, 5, 5], 5), 3); // 2.67
        assert_eq!(diagonal_grade(&[1, 1], &[3, 3], 5), 2);
    }

    #[test]
    fn cap_refuses_with_count() {
        let err = generate_complete_rule_base_capped(
            "g",
            attrs(3),
            ReferentialScale::five_point("c"),
            FillPolicy::Uniform,
            100,
        )
        .unwrap_err();
        assert_eq!(err, ModelError::TooManyRules { count: "125".into(), cap: 100 });
    }

    #[test]
    fn fill_parses() {
        assert_eq!("Diagonal".parse::<FillPolicy>().unwrap(), FillPolicy::Diagonal);
        assert!("random".parse::<FillPolicy>().is_err());
    }
}
