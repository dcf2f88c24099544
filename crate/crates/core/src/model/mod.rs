//! Domain types: scales, belief distributions, rules, rule bases and
//! evaluation frameworks.

mod belief;
mod framework;
mod generate;
mod rule;
mod scale;

pub use belief::BeliefDistribution;
pub use framework::{EvaluationFramework, FrameworkBuilder, FrameworkNode, NodeKind};
pub use generate::{
    combination_count, generate_complete_rule_base, generate_complete_rule_base_capped, FillPolicy, DEFAULT_RULE_CAP,
};
pub use rule::{validate_rule_base, AntecedentAttribute, BeliefRule, RuleBase, Severity, ValidationIssue};
pub use scale::{ReferentialScale, FIVE_POINT_ANCHORS, FIVE_POINT_GRADES};
