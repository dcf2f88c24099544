//! Hierarchical evaluation: leaf inputs flow upward, each internal node's
//! crisp score becomes a crisp input to its parent.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::FrameworkError;
use crate::inference::{infer, InferenceResult};
use crate::model::{BeliefDistribution, EvaluationFramework, NodeKind};
use crate::scalar::Scalar;
use crate::transform::{transform_input, InputValue};

/// Leaf name to raw input.
pub type LeafInputs<T> = IndexMap<String, InputValue<T>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", bound = "T: Scalar")]
pub enum NodeOutput<T> {
    Leaf {
        input: InputValue<T>,
        distribution: BeliefDistribution<T>,
    },
    Internal {
        result: InferenceResult<T>,
        /// Crisp score as a percentage of the 10-point scale.
        percent: T,
    },
}

/// Evaluation result for one node, mirroring the framework tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct NodeResult<T> {
    pub name: String,
    pub output: NodeOutput<T>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<NodeResult<T>>,
}

impl<T: Scalar> NodeResult<T> {
    pub fn inference(&self) -> Option<&InferenceResult<T>> {
        match &self.output {
            NodeOutput::Internal { result, .. } => Some(result),
            NodeOutput::Leaf { .. } => None,
        }
    }

    /// Crisp score of an internal node.
    pub fn crisp(&self) -> Option<T> {
        self.inference().map(|r| r.crisp)
    }

    pub fn percent(&self) -> Option<T> {
        match &self.output {
            NodeOutput::Internal { percent, .. } => Some(*percent),
            NodeOutput::Leaf { .. } => None,
        }
    }

    pub fn distribution(&self) -> &BeliefDistribution<T> {
        match &self.output {
            NodeOutput::Internal { result, .. } => &result.distribution,
            NodeOutput::Leaf { distribution, .. } => distribution,
        }
    }

    /// Depth-first search by node name.
    pub fn find(&self, name: &str) -> Option<&NodeResult<T>> {
        if self.name == name {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.find(name))
    }

    /// Internal nodes in post-order.
    pub fn internal_nodes(&self) -> Vec<&NodeResult<T>> {
        fn walk<'a, T: Scalar>(n: &'a NodeResult<T>, out: &mut Vec<&'a NodeResult<T>>) {
            for c in &n.children {
                walk(c, out);
            }
            if n.inference().is_some() {
                out.push(n);
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

pub fn percent_of_ten<T: Scalar>(crisp: T) -> T {
    crisp / T::lit(10.0) * T::lit(100.0)
}

/// Evaluates the whole framework bottom-up.
///
/// Every leaf needs an entry in `leaf_inputs` (`Missing` is allowed); keys
/// that are not leaves are rejected.
pub fn evaluate_tree<T: Scalar>(
    fw: &EvaluationFramework<T>,
    leaf_inputs: &LeafInputs<T>,
) -> Result<NodeResult<T>, FrameworkError> {
    for key in leaf_inputs.keys() {
        match fw.node(key) {
            Some(n) if n.is_leaf() => {}
            _ => return Err(FrameworkError::UnknownLeaf(key.clone())),
        }
    }
    for leaf in fw.leaf_names() {
        if !leaf_inputs.contains_key(leaf) {
            return Err(FrameworkError::MissingLeafInput(leaf.to_owned()));
        }
    }
    evaluate_node(fw, fw.root_index(), leaf_inputs)
}

fn evaluate_node<T: Scalar>(
    fw: &EvaluationFramework<T>,
    index: usize,
    leaf_inputs: &LeafInputs<T>,
) -> Result<NodeResult<T>, FrameworkError> {
    let node = &fw.nodes()[index];
    match &node.kind {
        NodeKind::Leaf { scale } => {
            let input = leaf_inputs
                .get(&node.name)
                .cloned()
                .ok_or_else(|| FrameworkError::MissingLeafInput(node.name.clone()))?;
            let distribution = transform_input(&input, scale).map_err(|e| FrameworkError::at(&node.name, e))?;
            Ok(NodeResult {
                name: node.name.clone(),
                output: NodeOutput::Leaf { input, distribution },
                children: vec![],
            })
        }
        NodeKind::Internal { rule_base, children } => {
            let results = children.iter().map(|&c| evaluate_node(fw, c, leaf_inputs)).collect::<Result<Vec<_>, _>>()?;
            let raw: Vec<InputValue<T>> = results
                .iter()
                .map(|r| match &r.output {
                    NodeOutput::Leaf { input, .. } => input.clone(),
                    NodeOutput::Internal { result, .. } => InputValue::Crisp(result.crisp),
                })
                .collect();
            let result = infer(rule_base, &raw).map_err(|e| FrameworkError::at(&node.name, e))?;
            let percent = percent_of_ten(result.crisp);
            Ok(NodeResult {
                name: node.name.clone(),
                output: NodeOutput::Internal { result, percent },
                children: results,
            })
        }
    }
}

/// A named set of leaf overrides applied on top of a baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Scenario<T> {
    pub name: String,
    #[serde(default)]
    pub overrides: LeafInputs<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct NodeDelta<T> {
    pub node: String,
    pub baseline: T,
    pub scenario: T,
    pub delta: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ScenarioReport<T> {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_delta: Option<T>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub deltas: Vec<NodeDelta<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<NodeResult<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct WhatIfReport<T> {
    pub baseline: NodeResult<T>,
    /// Successful scenarios by decreasing |root delta|, then failed ones.
    pub scenarios: Vec<ScenarioReport<T>>,
}

/// Evaluates each scenario against the baseline. A failing scenario is
/// reported in place; only a failing baseline aborts.
pub fn what_if<T: Scalar>(
    fw: &EvaluationFramework<T>,
    baseline: &LeafInputs<T>,
    scenarios: &[Scenario<T>],
) -> Result<WhatIfReport<T>, FrameworkError> {
    let base = evaluate_tree(fw, baseline)?;
    let base_scores: Vec<(String, T)> =
        base.internal_nodes().into_iter().map(|n| (n.name.clone(), n.crisp().expect("internal"))).collect();

    let mut reports: Vec<ScenarioReport<T>> = scenarios
        .iter()
        .map(|sc| {
            let run = || -> Result<NodeResult<T>, FrameworkError> {
                let mut inputs = baseline.clone();
                for (leaf, value) in &sc.overrides {
                    match fw.node(leaf) {
                        Some(n) if n.is_leaf() => {
                            inputs.insert(leaf.clone(), value.clone());
                        }
                        _ => return Err(FrameworkError::UnknownLeaf(leaf.clone())),
                    }
                }
                evaluate_tree(fw, &inputs)
            };
            match run() {
                Ok(result) => {
                    let deltas: Vec<NodeDelta<T>> = base_scores
                        .iter()
                        .map(|(name, b)| {
                            let s = result.find(name).and_then(|n| n.crisp()).expect("same topology");
                            NodeDelta { node: name.clone(), baseline: *b, scenario: s, delta: s - *b }
                        })
                        .collect();
                    let root_delta = result.crisp().expect("root is internal") - base.crisp().expect("root");
                    ScenarioReport {
                        name: sc.name.clone(),
                        root_delta: Some(root_delta),
                        deltas,
                        result: Some(result),
                        error: None,
                    }
                }
                Err(e) => ScenarioReport {
                    name: sc.name.clone(),
                    root_delta: None,
                    deltas: vec![],
                    result: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    reports.sort_by(|a, b| match (a.root_delta, b.root_delta) {
        (Some(x), Some(y)) => y.abs().partial_cmp(&x.abs()).unwrap_or(std::cmp::Ordering::Equal),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
    Ok(WhatIfReport { baseline: base, scenarios: reports })
}

/// Returns a new framework with per-child weights replaced at `node`.
pub fn set_weights<T: Scalar>(
    fw: &EvaluationFramework<T>,
    node: &str,
    weights: &[T],
) -> Result<EvaluationFramework<T>, FrameworkError> {
    fw.with_node_weights(node, weights)
}
