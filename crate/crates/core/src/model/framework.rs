use std::collections::HashMap;
use std::sync::Arc;

use super::rule::RuleBase;
use super::scale::ReferentialScale;
use crate::error::{FrameworkError, ModelError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind<T> {
    /// Accepts an external input, transformed with the parent's attribute scale.
    Leaf { scale: ReferentialScale<T> },
    /// Runs a rule base whose attributes are this node's children, in order.
    Internal { rule_base: Arc<RuleBase<T>>, children: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameworkNode<T> {
    pub name: String,
    /// Human-readable description, if any.
    pub label: Option<String>,
    pub kind: NodeKind<T>,
}

impl<T> FrameworkNode<T> {
    pub fn is_leaf(&self) -> bool {
        matches!(self.kind, NodeKind::Leaf { .. })
    }

    pub fn children(&self) -> &[usize] {
        match &self.kind {
            NodeKind::Leaf { .. } => &[],
            NodeKind::Internal { children, .. } => children,
        }
    }

    pub fn rule_base(&self) -> Option<&RuleBase<T>> {
        match &self.kind {
            NodeKind::Leaf { .. } => None,
            NodeKind::Internal { rule_base, .. } => Some(rule_base),
        }
    }
}

/// A tree of rule bases. Leaves take external inputs; each internal node's
/// crisp output feeds the matching attribute of its parent.
///
/// Cloning is cheap: rule bases are shared.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationFramework<T> {
    name: String,
    nodes: Vec<FrameworkNode<T>>,
    root: usize,
    index: HashMap<String, usize>,
}

enum Pending<T> {
    Leaf(ReferentialScale<T>),
    Internal(RuleBase<T>, Vec<String>),
}

/// Collects nodes by name and checks the tree invariants on `build`.
pub struct FrameworkBuilder<T> {
    name: String,
    pending: Vec<(String, Option<String>, Pending<T>)>,
}

impl<T: Scalar> FrameworkBuilder<T> {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), pending: Vec::new() }
    }

    pub fn leaf(mut self, name: impl Into<String>, scale: ReferentialScale<T>) -> Self {
        self.pending.push((name.into(), None, Pending::Leaf(scale)));
        self
    }

    pub fn internal<S: AsRef<str>>(mut self, name: impl Into<String>, children: &[S], rule_base: RuleBase<T>) -> Self {
        let children = children.iter().map(|c| c.as_ref().to_owned()).collect();
        self.pending.push((name.into(), None, Pending::Internal(rule_base, children)));
        self
    }

    /// Attaches a description to the most recently added node.
    pub fn label(mut self, label: impl Into<String>) -> Self {
        if let Some(last) = self.pending.last_mut() {
            last.1 = Some(label.into());
        }
        self
    }

    pub fn build(self) -> Result<EvaluationFramework<T>, ModelError> {
        let fail = |m: String| Err(ModelError::InvalidFramework(m));
        let mut index = HashMap::new();
        for (i, (name, _, _)) in self.pending.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return fail(format!("duplicate node name `{name}`"));
            }
        }
        let mut parent: Vec<Option<usize>> = vec![None; self.pending.len()];
        let mut nodes = Vec::with_capacity(self.pending.len());
        for (i, (name, label, p)) in self.pending.into_iter().enumerate() {
            let kind = match p {
                Pending::Leaf(scale) => NodeKind::Leaf { scale },
                Pending::Internal(rule_base, child_names) => {
                    if child_names.is_empty() {
                        return fail(format!("internal node `{name}` has no children"));
                    }
                    if rule_base.antecedents().len() != child_names.len() {
                        return fail(format!(
                            "node `{name}` has {} children but its rule base has {} attributes",
                            child_names.len(),
                            rule_base.antecedents().len()
                        ));
                    }
                    let mut children = Vec::with_capacity(child_names.len());
                    for c in &child_names {
                        let Some(&ci) = index.get(c) else {
                            return fail(format!("node `{name}` references unknown child `{c}`"));
                        };
                        if ci == i {
                            return fail(format!("node `{name}` lists itself as a child"));
                        }
                        if let Some(p) = parent[ci] {
                            return fail(format!("node `{c}` has more than one parent (index {p} and `{name}`)"));
                        }
                        parent[ci] = Some(i);
                        children.push(ci);
                    }
                    NodeKind::Internal { rule_base: Arc::new(rule_base), children }
                }
            };
            nodes.push(FrameworkNode { name, label, kind });
        }
        if nodes.is_empty() {
            return fail("framework has no nodes".into());
        }
        let roots: Vec<usize> = (0..nodes.len()).filter(|&i| parent[i].is_none()).collect();
        let root = match roots.as_slice() {
            [r] => *r,
            [] => return fail("no root: every node has a parent (cycle)".into()),
            many => {
                let names: Vec<&str> = many.iter().map(|&i| nodes[i].name.as_str()).collect();
                return fail(format!("multiple roots: {}", names.join(", ")));
            }
        };
        // one parent per node + single root: the tree is acyclic iff everything is reachable
        let mut seen = vec![false; nodes.len()];
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            seen[i] = true;
            stack.extend(nodes[i].children().iter().copied());
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return fail(format!("node `{}` is on a cycle", nodes[i].name));
        }
        for node in &nodes {
            if let NodeKind::Internal { rule_base, children } = &node.kind {
                for (attr, &c) in rule_base.antecedents().iter().zip(children) {
                    if let NodeKind::Leaf { scale } = &nodes[c].kind {
                        if !scale.same_grades(attr.scale()) {
                            return fail(format!(
                                "leaf `{}` scale does not match attribute `{}` of `{}`",
                                nodes[c].name,
                                attr.name(),
                                node.name
                            ));
                        }
                    }
                }
            }
        }
        Ok(EvaluationFramework { name: self.name, nodes, root, index })
    }
}

impl<T: Scalar> EvaluationFramework<T> {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nodes(&self) -> &[FrameworkNode<T>] {
        &self.nodes
    }

    pub fn root(&self) -> &FrameworkNode<T> {
        &self.nodes[self.root]
    }

    pub fn root_index(&self) -> usize {
        self.root
    }

    pub fn node(&self, name: &str) -> Option<&FrameworkNode<T>> {
        self.index.get(name).map(|&i| &self.nodes[i])
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Node indices in post-order (children before parents, left to right).
    pub fn post_order(&self) -> Vec<usize> {
        fn walk<T>(fw: &[FrameworkNode<T>], i: usize, out: &mut Vec<usize>) {
            for &c in fw[i].children() {
                walk(fw, c, out);
            }
            out.push(i);
        }
        let mut out = Vec::with_capacity(self.nodes.len());
        walk(&self.nodes, self.root, &mut out);
        out
    }

    /// Leaf names in left-to-right tree order.
    pub fn leaf_names(&self) -> Vec<&str> {
        self.post_order()
            .into_iter()
            .filter(|&i| self.nodes[i].is_leaf())
            .map(|i| self.nodes[i].name.as_str())
            .collect()
    }

    /// Internal node names in post-order.
    pub fn internal_names(&self) -> Vec<&str> {
        self.post_order()
            .into_iter()
            .filter(|&i| !self.nodes[i].is_leaf())
            .map(|i| self.nodes[i].name.as_str())
            .collect()
    }

    /// Leaves in the subtree rooted at `node`, in tree order.
    pub fn leaves_under(&self, node: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(i) = stack.pop() {
            if self.nodes[i].is_leaf() {
                out.push(i);
            }
            stack.extend(self.nodes[i].children().iter().rev().copied());
        }
        out
    }

    pub fn total_rules(&self) -> usize {
        self.nodes.iter().filter_map(|n| n.rule_base()).map(|rb| rb.rules().len()).sum()
    }

    /// Returns a copy with new per-child weights at `node`; `self` is untouched.
    pub fn with_node_weights(&self, node: &str, weights: &[T]) -> Result<Self, FrameworkError> {
        let i = self.node_index(node).ok_or_else(|| FrameworkError::UnknownNode(node.to_owned()))?;
        let NodeKind::Internal { rule_base, children } = &self.nodes[i].kind else {
            return Err(FrameworkError::WeightCount { node: node.to_owned(), expected: 0, got: weights.len() });
        };
        if weights.len() != children.len() {
            return Err(FrameworkError::WeightCount {
                node: node.to_owned(),
                expected: children.len(),
                got: weights.len(),
            });
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > T::zero())) {
            return Err(FrameworkError::NonPositiveWeight { node: node.to_owned() });
        }
        let updated =
            rule_base.with_weights(weights).map_err(|_| FrameworkError::NonPositiveWeight { node: node.to_owned() })?;
        let mut out = self.clone();
        out.nodes[i].kind = NodeKind::Internal { rule_base: Arc::new(updated), children: children.clone() };
        Ok(out)
    }
}
