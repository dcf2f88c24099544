use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::belief::BeliefDistribution;
use super::scale::ReferentialScale;
use crate::error::ModelError;
use crate::scalar::{Scalar, COMPLETENESS_TOL};

/// An antecedent attribute: a named input with its own scale and weight.
#[derive(Debug, Clone, PartialEq)]
pub struct AntecedentAttribute<T> {
    name: String,
    scale: ReferentialScale<T>,
    weight: T,
}

impl<T: Scalar> AntecedentAttribute<T> {
    pub fn new(name: impl Into<String>, scale: ReferentialScale<T>) -> Self {
        Self { name: name.into(), scale, weight: T::one() }
    }

    pub fn with_weight(name: impl Into<String>, scale: ReferentialScale<T>, weight: T) -> Result<Self, ModelError> {
        let name = name.into();
        check_weight(&name, weight)?;
        Ok(Self { name, scale, weight })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn scale(&self) -> &ReferentialScale<T> {
        &self.scale
    }

    pub fn weight(&self) -> T {
        self.weight
    }

    pub(crate) fn set_weight(&mut self, weight: T) -> Result<(), ModelError> {
        check_weight(&self.name, weight)?;
        self.weight = weight;
        Ok(())
    }
}

fn check_weight<T: Scalar>(name: &str, weight: T) -> Result<(), ModelError> {
    if weight.is_finite() && weight > T::zero() {
        Ok(())
    } else {
        Err(ModelError::InvalidAttributeWeight { attribute: name.to_owned(), weight: weight.as_f64() })
    }
}

/// One IF-THEN belief rule: a packet antecedent (one grade index per
/// attribute) and a belief distribution over the consequent grades.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefRule<T> {
    pub id: String,
    pub weight: T,
    pub antecedent: Vec<usize>,
    pub consequent: BeliefDistribution<T>,
}

impl<T: Scalar> BeliefRule<T> {
    pub fn new(id: impl Into<String>, antecedent: Vec<usize>, consequent: BeliefDistribution<T>) -> Self {
        Self { id: id.into(), weight: T::one(), antecedent, consequent }
    }

    pub fn weighted(mut self, weight: T) -> Self {
        self.weight = weight;
        self
    }

    pub fn is_complete(&self) -> bool {
        self.consequent.is_complete()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warn,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warn => "WARN",
            Severity::Error => "ERROR",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationIssue {
    pub severity: Severity,
    pub location: String,
    pub message: String,
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] {}", self.severity, self.location, self.message)
    }
}

/// A set of belief rules sharing one antecedent list and consequent scale.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleBase<T> {
    name: String,
    antecedents: Vec<AntecedentAttribute<T>>,
    consequent_scale: ReferentialScale<T>,
    rules: Vec<BeliefRule<T>>,
}

impl<T: Scalar> RuleBase<T> {
    /// Builds a rule base, rejecting it if validation reports any ERROR.
    /// Incomplete rules (WARN) are accepted.
    pub fn new(
        name: impl Into<String>,
        antecedents: Vec<AntecedentAttribute<T>>,
        consequent_scale: ReferentialScale<T>,
        rules: Vec<BeliefRule<T>>,
    ) -> Result<Self, ModelError> {
        let rb = Self::new_unchecked(name, antecedents, consequent_scale, rules);
        if let Some(first) = rb.validate().into_iter().find(|i| i.severity == Severity::Error) {
            return Err(ModelError::InvalidRuleBase { name: rb.name, first: first.to_string() });
        }
        Ok(rb)
    }

    /// Builds without validation, e.g. to report issues with [`validate`](Self::validate).
    pub fn new_unchecked(
        name: impl Into<String>,
        antecedents: Vec<AntecedentAttribute<T>>,
        consequent_scale: ReferentialScale<T>,
        rules: Vec<BeliefRule<T>>,
    ) -> Self {
        Self { name: name.into(), antecedents, consequent_scale, rules }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn antecedents(&self) -> &[AntecedentAttribute<T>] {
        &self.antecedents
    }

    pub fn consequent_scale(&self) -> &ReferentialScale<T> {
        &self.consequent_scale
    }

    pub fn rules(&self) -> &[BeliefRule<T>] {
        &self.rules
    }

    pub fn attribute_weights(&self) -> Vec<T> {
        self.antecedents.iter().map(|a| a.weight).collect()
    }

    /// Copy of this rule base with new attribute weights.
    pub fn with_weights(&self, weights: &[T]) -> Result<Self, ModelError> {
        if weights.len() != self.antecedents.len() {
            return Err(ModelError::InvalidRuleBase {
                name: self.name.clone(),
                first: format!("{} weights for {} attributes", weights.len(), self.antecedents.len()),
            });
        }
        let mut out = self.clone();
        for (a, &w) in out.antecedents.iter_mut().zip(weights) {
            a.set_weight(w)?;
        }
        Ok(out)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Checks every structural invariant. An empty list means the rule base
    /// is valid and all rules are complete.
    pub fn validate(&self) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();
        let mut push = |severity, location: String, message: String| {
            issues.push(ValidationIssue { severity, location, message });
        };
        let whole = format!("rulebase {}", self.name);

        if self.antecedents.is_empty() {
            push(Severity::Error, whole.clone(), "rule base has no antecedent attributes".into());
        }
        if self.rules.is_empty() {
            push(Severity::Error, whole.clone(), "rule base has no rules".into());
        }
        let mut names = HashMap::new();
        for (i, a) in self.antecedents.iter().enumerate() {
            if !(a.weight.is_finite() && a.weight > T::zero()) {
                push(Severity::Error, format!("attribute {}", a.name), format!("weight {} must be > 0", a.weight));
            }
            if let Some(prev) = names.insert(a.name.as_str(), i) {
                push(
                    Severity::Error,
                    format!("attribute {}", a.name),
                    format!("duplicate attribute name (also attribute #{})", prev + 1),
                );
            }
        }

        let n = self.consequent_scale.len();
        let mut packets: HashMap<&[usize], &str> = HashMap::new();
        let mut ids: HashMap<&str, usize> = HashMap::new();
        for (k, rule) in self.rules.iter().enumerate() {
            let loc = format!("rule {}", rule.id);
            if ids.insert(rule.id.as_str(), k).is_some() {
                push(Severity::Error, loc.clone(), "duplicate rule id".into());
            }
            if !(rule.weight.is_finite() && rule.weight > T::zero()) {
                push(Severity::Error, loc.clone(), format!("rule weight {} must be > 0", rule.weight));
            }
            if rule.antecedent.len() != self.antecedents.len() {
                push(
                    Severity::Error,
                    loc.clone(),
                    format!(
                        "packet antecedent binds {} attributes, rule base has {}",
                        rule.antecedent.len(),
                        self.antecedents.len()
                    ),
                );
            } else {
                for (a, &g) in self.antecedents.iter().zip(&rule.antecedent) {
                    if g >= a.scale.len() {
                        push(
                            Severity::Error,
                            loc.clone(),
                            format!("grade index {g} out of range for attribute {}", a.name),
                        );
                    }
                }
                if let Some(other) = packets.insert(rule.antecedent.as_slice(), rule.id.as_str()) {
                    push(Severity::Error, loc.clone(), format!("duplicate packet antecedent (same as rule {other})"));
                }
            }

            let beliefs = rule.consequent.degrees();
            if beliefs.len() != n {
                push(
                    Severity::Error,
                    loc.clone(),
                    format!("consequent has {} degrees, scale has {n} grades", beliefs.len()),
                );
                continue;
            }
            if beliefs.iter().any(|b| !(*b >= T::zero() && *b <= T::one())) {
                push(Severity::Error, loc.clone(), "belief degree outside [0, 1]".into());
                continue;
            }
            let sum = rule.consequent.mass();
            let tol = T::lit(COMPLETENESS_TOL);
            if sum > T::one() + tol {
                push(Severity::Error, loc, format!("consequent beliefs sum to {sum} > 1"));
            } else if sum < T::one() - tol {
                push(Severity::Warn, loc, format!("incomplete rule, Σβ = {sum}"));
            }
        }
        issues
    }
}

/// Free-function form of [`RuleBase::validate`].
pub fn validate_rule_base<T: Scalar>(rb: &RuleBase<T>) -> Vec<ValidationIssue> {
    rb.validate()
}
