//! The shipped e-government evaluation framework: nine rule bases over 21
//! survey variables in three dimensions (determinants, characteristics,
//! results), all on the five-point Poor..Excellent scale.

use crate::error::LoadError;
use crate::io::{FrameworkDocument, InlineRuleBase, LoadOptions, NodeDoc, RuleBaseSource};
use crate::model::{EvaluationFramework, FillPolicy, ReferentialScale};
use crate::scalar::Scalar;

pub const ROOT: &str = "E-Government Assessment";
pub const DETERMINANTS: &str = "Determinants";
pub const CHARACTERISTICS: &str = "Characteristics";
pub const RESULTS: &str = "Results";
pub const SCALE: &str = "five_point";

/// `(internal node, children)` in post-order.
pub const INTERNAL_NODES: [(&str, &[&str]); 9] = [
    ("Determinants", &["D1", "D2", "D3", "D4", "D5"]),
    ("User Environment", &["C11", "C12", "C13"]),
    ("Resource Management", &["C21", "C22", "C23", "C24"]),
    ("Authentication Protocol", &["C31", "C32"]),
    ("Characteristics", &["User Environment", "Resource Management", "Authentication Protocol"]),
    ("Result Analysis", &["R11", "R12", "R13", "R14"]),
    ("Result Specification", &["R21", "R22", "R23"]),
    ("Results", &["Result Analysis", "Result Specification"]),
    (ROOT, &["Determinants", "Characteristics", "Results"]),
];

/// `(leaf id, survey variable)`.
pub const LEAVES: [(&str, &str); 21] = [
    ("D1", "Quality of the information and existing data to feed the system"),
    ("D2", "Technological infrastructure and compatibility"),
    ("D3", "Organizational and management-related characteristics"),
    ("D4", "Existing legal and institutional framework"),
    ("D5", "Potential demand"),
    ("C11", "Interaction"),
    ("C12", "Integration"),
    ("C13", "Personalization"),
    ("C21", "Quality of information available on websites and in systems"),
    ("C22", "Services"),
    ("C23", "Accessibility"),
    ("C24", "Usability"),
    ("C31", "Security"),
    ("C32", "Privacy"),
    ("R11", "Statistics on system usage"),
    ("R12", "Quality of public services"),
    ("R13", "Efficiency and productivity"),
    ("R14", "Effectiveness of programs and policies"),
    ("R21", "Transparency and accountability"),
    ("R22", "Citizen participation"),
    ("R23", "Changes in the regulatory framework"),
];

/// Framework document with every rule base generated by `fill`.
pub fn document<T: Scalar>(fill: FillPolicy) -> FrameworkDocument<T> {
    let mut nodes: Vec<NodeDoc<T>> = INTERNAL_NODES
        .iter()
        .rev()
        .map(|(name, children)| NodeDoc {
            name: name.to_string(),
            label: None,
            scale: None,
            children: children.iter().map(|c| c.to_string()).collect(),
            weights: None,
            rulebase: Some(RuleBaseSource::Inline(InlineRuleBase {
                scale: SCALE.into(),
                fill: Some(fill),
                rules: None,
            })),
        })
        .collect();
    nodes.extend(LEAVES.iter().map(|(id, label)| NodeDoc {
        name: id.to_string(),
        label: Some(label.to_string()),
        scale: Some(SCALE.into()),
        children: vec![],
        weights: None,
        rulebase: None,
    }));
    FrameworkDocument { name: ROOT.into(), scales: vec![ReferentialScale::five_point(SCALE)], nodes }
}

/// The default framework with diagonal rule bases.
pub fn framework<T: Scalar>() -> Result<EvaluationFramework<T>, LoadError> {
    document(FillPolicy::Diagonal).to_framework(None, LoadOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape() {
        let fw = framework::<f64>().unwrap();
        assert_eq!(fw.root().name, ROOT);
        assert_eq!(fw.leaf_names().len(), 21);
        assert_eq!(fw.internal_names().len(), 9);
        let counts: Vec<usize> =
            fw.post_order().into_iter().filter_map(|i| fw.nodes()[i].rule_base()).map(|rb| rb.rules().len()).collect();
        assert_eq!(counts, vec![3125, 125, 625, 25, 125, 625, 125, 25, 125]);
        assert_eq!(fw.total_rules(), 4925);
        let names: Vec<&str> = INTERNAL_NODES.iter().map(|(n, _)| *n).collect();
        assert_eq!(fw.internal_names(), names);
    }
}
