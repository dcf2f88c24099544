//! JSON documents for rule bases, frameworks, leaf inputs and scenarios.
//!
//! The layouts are described by the schema files under `schema/`.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{LoadError, ModelError};
use crate::framework::{LeafInputs, Scenario};
use crate::model::{
    generate_complete_rule_base, AntecedentAttribute, BeliefDistribution, BeliefRule, EvaluationFramework, FillPolicy,
    FrameworkBuilder, NodeKind, ReferentialScale, RuleBase, Severity,
};
use crate::scalar::{Scalar, COMPLETENESS_TOL};

/// Largest consequent sum that `renormalize` will rescale.
pub const RENORMALIZE_LIMIT: f64 = 1.01;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadOptions {
    /// Rescale consequents whose beliefs sum to slightly more than one
    /// (up to [`RENORMALIZE_LIMIT`]), as happens with rounded published figures.
    pub renormalize: bool,
}

fn one<T: Scalar>() -> T {
    T::one()
}

fn is_one<T: Scalar>(v: &T) -> bool {
    *v == T::one()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Scalar")]
pub struct AttributeDoc<T> {
    pub name: String,
    pub scale: String,
    #[serde(default = "one")]
    pub weight: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConsequentDoc {
    pub name: String,
    pub scale: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Scalar")]
pub struct RuleDoc<T> {
    pub id: String,
    #[serde(default = "one")]
    pub weight: T,
    #[serde(rename = "if")]
    pub antecedent: Vec<String>,
    #[serde(rename = "then")]
    pub consequent: IndexMap<String, T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Scalar")]
pub struct RuleBaseDocument<T> {
    pub name: String,
    pub scales: Vec<ReferentialScale<T>>,
    pub attributes: Vec<AttributeDoc<T>>,
    pub consequent: ConsequentDoc,
    #[serde(default)]
    pub rules: Vec<RuleDoc<T>>,
}

fn scale_table<T: Scalar>(scales: &[ReferentialScale<T>]) -> Result<HashMap<&str, &ReferentialScale<T>>, LoadError> {
    let mut out = HashMap::new();
    for s in scales {
        if out.insert(s.name(), s).is_some() {
            return Err(LoadError::Schema(format!("duplicate scale name `{}`", s.name())));
        }
    }
    Ok(out)
}

fn lookup<'a, T>(
    table: &HashMap<&str, &'a ReferentialScale<T>>,
    name: &str,
) -> Result<&'a ReferentialScale<T>, LoadError> {
    table.get(name).copied().ok_or_else(|| LoadError::Schema(format!("unknown scale `{name}`")))
}

fn rules_from_docs<T: Scalar>(
    docs: &[RuleDoc<T>],
    attributes: &[AntecedentAttribute<T>],
    consequent: &ReferentialScale<T>,
    opts: LoadOptions,
) -> Result<Vec<BeliefRule<T>>, LoadError> {
    docs.iter()
        .map(|r| {
            if r.antecedent.len() != attributes.len() {
                return Err(LoadError::Schema(format!(
                    "rule {}: `if` lists {} grades, rule base has {} attributes",
                    r.id,
                    r.antecedent.len(),
                    attributes.len()
                )));
            }
            let packet = r
                .antecedent
                .iter()
                .zip(attributes)
                .map(|(label, a)| {
                    a.scale().grade_index(label).ok_or_else(|| {
                        LoadError::Schema(format!(
                            "rule {}: grade `{label}` not in scale of attribute `{}`",
                            r.id,
                            a.name()
                        ))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mut degrees = vec![T::zero(); consequent.len()];
            for (label, &d) in &r.consequent {
                let idx = consequent.grade_index(label).ok_or_else(|| {
                    LoadError::Schema(format!("rule {}: grade `{label}` not in consequent scale", r.id))
                })?;
                if !d.is_finite() {
                    return Err(LoadError::Schema(format!("rule {}: non-finite belief", r.id)));
                }
                degrees[idx] = d;
            }
            let sum: T = degrees.iter().copied().sum();
            if opts.renormalize && sum > T::one() + T::lit(COMPLETENESS_TOL) && sum <= T::lit(RENORMALIZE_LIMIT) {
                for d in &mut degrees {
                    *d = *d / sum;
                }
            }
            Ok(BeliefRule {
                id: r.id.clone(),
                weight: r.weight,
                antecedent: packet,
                consequent: BeliefDistribution::from_vec_unchecked(degrees),
            })
        })
        .collect()
}

impl<T: Scalar> RuleBaseDocument<T> {
    /// Resolves names into a rule base without running validation.
    pub fn to_rule_base_unchecked(&self, opts: LoadOptions) -> Result<RuleBase<T>, LoadError> {
        let table = scale_table(&self.scales)?;
        let attributes = self
            .attributes
            .iter()
            .map(|a| {
                AntecedentAttribute::with_weight(a.name.clone(), lookup(&table, &a.scale)?.clone(), a.weight)
                    .map_err(LoadError::from)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let consequent = lookup(&table, &self.consequent.scale)?.clone();
        let rules = rules_from_docs(&self.rules, &attributes, &consequent, opts)?;
        Ok(RuleBase::new_unchecked(self.name.clone(), attributes, consequent, rules))
    }

    pub fn from_rule_base(rb: &RuleBase<T>) -> Self {
        let mut scales = ScaleCollector::default();
        let attributes = rb
            .antecedents()
            .iter()
            .map(|a| AttributeDoc { name: a.name().to_owned(), scale: scales.add(a.scale()), weight: a.weight() })
            .collect();
        let consequent = ConsequentDoc { name: rb.name().to_owned(), scale: scales.add(rb.consequent_scale()) };
        Self { name: rb.name().to_owned(), scales: scales.into_inner(), attributes, consequent, rules: rule_docs(rb) }
    }
}

fn rule_docs<T: Scalar>(rb: &RuleBase<T>) -> Vec<RuleDoc<T>> {
    rb.rules()
        .iter()
        .map(|r| RuleDoc {
            id: r.id.clone(),
            weight: r.weight,
            antecedent: r
                .antecedent
                .iter()
                .zip(rb.antecedents())
                .map(|(&g, a)| a.scale().grades()[g].clone())
                .collect(),
            consequent: r.consequent.labeled(rb.consequent_scale()),
        })
        .collect()
}

#[derive(Default)]
struct ScaleCollector<T> {
    scales: Vec<ReferentialScale<T>>,
}

impl<T: Scalar> ScaleCollector<T> {
    /// Registers `scale` and returns the name it is stored under.
    fn add(&mut self, scale: &ReferentialScale<T>) -> String {
        if let Some(s) = self.scales.iter().find(|s| s.same_grades(scale) && s.name() == scale.name()) {
            return s.name().to_owned();
        }
        let mut name = scale.name().to_owned();
        let mut k = 2;
        while self.scales.iter().any(|s| s.name() == name) {
            name = format!("{}_{k}", scale.name());
            k += 1;
        }
        let renamed = ReferentialScale::with_utilities(
            name.clone(),
            scale.grades().to_vec(),
            scale.anchors().to_vec(),
            scale.utilities().to_vec(),
        )
        .expect("copy of a valid scale");
        self.scales.push(renamed);
        name
    }

    fn into_inner(self) -> Vec<ReferentialScale<T>> {
        self.scales
    }
}

/// Parses a rule-base document without rejecting invariant breaches, so
/// that they can be listed with [`RuleBase::validate`].
pub fn parse_rule_base<T: Scalar>(text: &str, opts: LoadOptions) -> Result<RuleBase<T>, LoadError> {
    let doc: RuleBaseDocument<T> = serde_json::from_str(text)?;
    doc.to_rule_base_unchecked(opts)
}

/// Parses and validates a rule-base document. Any ERROR-level issue fails
/// the load; incomplete rules are accepted.
pub fn load_rule_base<T: Scalar>(text: &str, opts: LoadOptions) -> Result<RuleBase<T>, LoadError> {
    let rb = parse_rule_base(text, opts)?;
    reject_errors(rb)
}

fn reject_errors<T: Scalar>(rb: RuleBase<T>) -> Result<RuleBase<T>, LoadError> {
    if let Some(first) = rb.validate().into_iter().find(|i| i.severity == Severity::Error) {
        return Err(ModelError::InvalidRuleBase { name: rb.name().to_owned(), first: first.to_string() }.into());
    }
    Ok(rb)
}

pub fn store_rule_base<T: Scalar>(rb: &RuleBase<T>) -> String {
    to_pretty(&RuleBaseDocument::from_rule_base(rb))
}

pub(crate) fn to_pretty<S: Serialize>(value: &S) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

pub fn read_file(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.display().to_string(), source })
}

pub fn load_rule_base_file<T: Scalar>(path: &Path, opts: LoadOptions) -> Result<RuleBase<T>, LoadError> {
    load_rule_base(&read_file(path)?, opts)
}

/// Where a framework node's rule base comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, bound = "T: Scalar")]
pub enum RuleBaseSource<T> {
    /// Path to a rule-base document, relative to the framework file.
    Path(String),
    Inline(InlineRuleBase<T>),
}

/// A rule base whose attributes are the node's children. Exactly one of
/// `fill` or `rules` is given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Scalar")]
pub struct InlineRuleBase<T> {
    pub scale: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fill: Option<FillPolicy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rules: Option<Vec<RuleDoc<T>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Scalar")]
pub struct NodeDoc<T> {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Leaf input scale.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rulebase: Option<RuleBaseSource<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Scalar")]
pub struct FrameworkDocument<T> {
    pub name: String,
    pub scales: Vec<ReferentialScale<T>>,
    pub nodes: Vec<NodeDoc<T>>,
}

impl<T: Scalar> FrameworkDocument<T> {
    /// Builds the framework. Relative rule-base paths resolve against `base_dir`.
    pub fn to_framework(
        &self,
        base_dir: Option<&Path>,
        opts: LoadOptions,
    ) -> Result<EvaluationFramework<T>, LoadError> {
        let table = scale_table(&self.scales)?;
        let mut by_name: HashMap<&str, &NodeDoc<T>> = HashMap::new();
        for n in &self.nodes {
            if by_name.insert(n.name.as_str(), n).is_some() {
                return Err(LoadError::Schema(format!("duplicate node `{}`", n.name)));
            }
        }

        let mut built: HashMap<String, RuleBase<T>> = HashMap::new();
        let mut visiting = HashSet::new();
        for n in &self.nodes {
            self.build_node(n, &by_name, &table, base_dir, opts, &mut built, &mut visiting)?;
        }

        let mut b = FrameworkBuilder::new(self.name.clone());
        for n in &self.nodes {
            b = match built.remove(&n.name) {
                Some(rb) => b.internal(n.name.clone(), &n.children, rb),
                None => {
                    let scale = n
                        .scale
                        .as_deref()
                        .ok_or_else(|| LoadError::Schema(format!("leaf `{}` has no scale", n.name)))?;
                    b.leaf(n.name.clone(), lookup(&table, scale)?.clone())
                }
            };
            if let Some(l) = &n.label {
                b = b.label(l.clone());
            }
        }
        Ok(b.build()?)
    }

    /// Output scale of node `name`: the leaf scale or the consequent scale.
    #[allow(clippy::too_many_arguments)]
    fn build_node<'a>(
        &'a self,
        n: &'a NodeDoc<T>,
        by_name: &HashMap<&str, &'a NodeDoc<T>>,
        table: &HashMap<&str, &ReferentialScale<T>>,
        base_dir: Option<&Path>,
        opts: LoadOptions,
        built: &mut HashMap<String, RuleBase<T>>,
        visiting: &mut HashSet<&'a str>,
    ) -> Result<ReferentialScale<T>, LoadError> {
        let schema = |m: String| LoadError::Schema(m);
        if let Some(rb) = built.get(&n.name) {
            return Ok(rb.consequent_scale().clone());
        }
        match (&n.rulebase, n.children.is_empty()) {
            (None, true) => {
                if n.weights.is_some() {
                    return Err(schema(format!("leaf `{}` cannot have weights", n.name)));
                }
                let s = n.scale.as_deref().ok_or_else(|| schema(format!("leaf `{}` has no scale", n.name)))?;
                return Ok(lookup(table, s)?.clone());
            }
            (None, false) => return Err(schema(format!("node `{}` has children but no rulebase", n.name))),
            (Some(_), true) => return Err(schema(format!("node `{}` has a rulebase but no children", n.name))),
            (Some(_), false) => {}
        }
        if n.scale.is_some() {
            return Err(schema(format!("internal node `{}` cannot have a leaf scale", n.name)));
        }
        if !visiting.insert(n.name.as_str()) {
            return Err(schema(format!("node `{}` is on a cycle", n.name)));
        }
        let mut child_scales = Vec::with_capacity(n.children.len());
        for c in &n.children {
            let child = by_name
                .get(c.as_str())
                .ok_or_else(|| schema(format!("node `{}` references unknown child `{c}`", n.name)))?;
            child_scales.push(self.build_node(child, by_name, table, base_dir, opts, built, visiting)?);
        }
        if let Some(w) = &n.weights {
            if w.len() != n.children.len() {
                return Err(schema(format!(
                    "node `{}`: {} weights for {} children",
                    n.name,
                    w.len(),
                    n.children.len()
                )));
            }
        }
        let weight = |i: usize| n.weights.as_ref().map_or(T::one(), |w| w[i]);

        let rb = match n.rulebase.as_ref().expect("checked above") {
            RuleBaseSource::Path(p) => {
                let path = base_dir.map_or_else(|| Path::new(p).to_path_buf(), |d| d.join(p));
                let rb = load_rule_base_file::<T>(&path, opts)?.with_name(n.name.clone());
                if rb.antecedents().len() != n.children.len() {
                    return Err(schema(format!(
                        "node `{}`: rule base `{p}` has {} attributes for {} children",
                        n.name,
                        rb.antecedents().len(),
                        n.children.len()
                    )));
                }
                match &n.weights {
                    Some(w) => rb.with_weights(w)?,
                    None => rb,
                }
            }
            RuleBaseSource::Inline(inline) => {
                let consequent = lookup(table, &inline.scale)?.clone();
                let attributes = n
                    .children
                    .iter()
                    .zip(child_scales)
                    .enumerate()
                    .map(|(i, (c, s))| AntecedentAttribute::with_weight(c.clone(), s, weight(i)))
                    .collect::<Result<Vec<_>, _>>()?;
                match (&inline.fill, &inline.rules) {
                    (Some(fill), None) => generate_complete_rule_base(n.name.clone(), attributes, consequent, *fill)?,
                    (None, Some(rules)) => {
                        let rules = rules_from_docs(rules, &attributes, &consequent, opts)?;
                        reject_errors(RuleBase::new_unchecked(n.name.clone(), attributes, consequent, rules))?
                    }
                    _ => {
                        return Err(schema(format!(
                            "node `{}`: inline rulebase needs exactly one of `fill` or `rules`",
                            n.name
                        )))
                    }
                }
            }
        };
        visiting.remove(n.name.as_str());
        let out = rb.consequent_scale().clone();
        built.insert(n.name.clone(), rb);
        Ok(out)
    }

    /// Document with every rule base written inline.
    pub fn from_framework(fw: &EvaluationFramework<T>) -> Self {
        let mut scales = ScaleCollector::default();
        let nodes = fw
            .nodes()
            .iter()
            .map(|n| match &n.kind {
                NodeKind::Leaf { scale } => NodeDoc {
                    name: n.name.clone(),
                    label: n.label.clone(),
                    scale: Some(scales.add(scale)),
                    children: vec![],
                    weights: None,
                    rulebase: None,
                },
                NodeKind::Internal { rule_base, children } => {
                    let weights = rule_base.attribute_weights();
                    NodeDoc {
                        name: n.name.clone(),
                        label: n.label.clone(),
                        scale: None,
                        children: children.iter().map(|&c| fw.nodes()[c].name.clone()).collect(),
                        weights: if weights.iter().all(is_one) { None } else { Some(weights) },
                        rulebase: Some(RuleBaseSource::Inline(InlineRuleBase {
                            scale: scales.add(rule_base.consequent_scale()),
                            fill: None,
                            rules: Some(rule_docs(rule_base)),
                        })),
                    }
                }
            })
            .collect();
        Self { name: fw.name().to_owned(), scales: scales.into_inner(), nodes }
    }
}

pub fn load_framework<T: Scalar>(
    text: &str,
    base_dir: Option<&Path>,
    opts: LoadOptions,
) -> Result<EvaluationFramework<T>, LoadError> {
    let doc: FrameworkDocument<T> = serde_json::from_str(text)?;
    doc.to_framework(base_dir, opts)
}

pub fn load_framework_file<T: Scalar>(path: &Path, opts: LoadOptions) -> Result<EvaluationFramework<T>, LoadError> {
    load_framework(&read_file(path)?, path.parent(), opts)
}

pub fn store_framework<T: Scalar>(fw: &EvaluationFramework<T>) -> String {
    to_pretty(&FrameworkDocument::from_framework(fw))
}

/// Parses a `{leaf: value}` inputs document.
pub fn parse_leaf_inputs<T: Scalar>(text: &str) -> Result<LeafInputs<T>, LoadError> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Deserialize)]
#[serde(untagged, bound = "T: Scalar")]
enum OneOrMany<T> {
    Many(Vec<Scenario<T>>),
    One(Scenario<T>),
}

/// Parses a scenario document: one `{name, overrides}` object or an array of them.
pub fn parse_scenarios<T: Scalar>(text: &str) -> Result<Vec<Scenario<T>>, LoadError> {
    Ok(match serde_json::from_str::<OneOrMany<T>>(text)? {
        OneOrMany::Many(v) => v,
        OneOrMany::One(s) => vec![s],
    })
}
