//! Seeded survey generator with a planted ground truth.
//!
//! Answers are independent integers in 1..=10. The label is whether the
//! planted framework's root score on the complete answers lies at or above
//! the median. Answers are then blanked (recorded as 0) at random, keeping
//! at least one answer under every rule base fed directly by leaves.

use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::survey::SurveyRecord;
use crate::egov;
use crate::error::{FrameworkError, LoadError};
use crate::framework::{evaluate_tree, LeafInputs};
use crate::io::{FrameworkDocument, LoadOptions, RuleBaseSource};
use crate::model::{EvaluationFramework, FillPolicy};
use crate::transform::InputValue;

/// Relative influence of the first child of every node in the planted framework.
pub const PLANTED_LEAD: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub respondents: usize,
    /// Probability that an answer is blanked.
    pub missing_rate: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self { respondents: 400, missing_rate: 0.3, seed: 454 }
    }
}

/// The e-government topology with rule consequents placed at the weighted
/// mean antecedent position, the first child weighing `lead` and the rest 1.
/// Fractional positions are split between the two neighbouring grades;
/// grades with zero belief are left out of the rule's `then` map.
pub fn planted_document(lead: f64) -> FrameworkDocument<f64> {
    let mut doc = egov::document::<f64>(FillPolicy::Diagonal);
    let scale = doc.scales[0].clone();
    let fw = doc.to_framework(None, LoadOptions::default()).expect("default framework is valid");
    doc = FrameworkDocument::from_framework(&fw);
    doc.name = format!("{} (planted)", egov::ROOT);
    let n = scale.len();
    for node in &mut doc.nodes {
        let Some(RuleBaseSource::Inline(inline)) = &mut node.rulebase else { continue };
        for rule in inline.rules.iter_mut().flatten() {
            let (mut num, mut den) = (0.0, 0.0);
            for (i, grade) in rule.antecedent.iter().enumerate() {
                let w = if i == 0 { lead } else { 1.0 };
                num += w * scale.grade_index(grade).expect("grade from same scale") as f64;
                den += w;
            }
            let pos = num / den;
            let lo = (pos.floor() as usize).min(n - 1);
            let frac = pos - lo as f64;
            rule.consequent = scale
                .grades()
                .iter()
                .enumerate()
                .filter_map(|(j, g)| match j {
                    _ if j == lo && frac < 1.0 => Some((g.clone(), 1.0 - frac)),
                    _ if j == lo + 1 && frac > 0.0 => Some((g.clone(), frac)),
                    _ => None,
                })
                .collect();
        }
    }
    doc
}

pub fn planted_framework() -> Result<EvaluationFramework<f64>, LoadError> {
    planted_document(PLANTED_LEAD).to_framework(None, LoadOptions::default())
}

/// Generates a labelled survey over the leaves of `fw`.
pub fn synthetic_survey(
    fw: &EvaluationFramework<f64>,
    config: &SyntheticConfig,
) -> Result<Vec<SurveyRecord<f64>>, FrameworkError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let leaves = fw.leaf_names();
    let nodes = fw.nodes();
    let groups: Vec<Vec<&str>> = nodes
        .iter()
        .map(|n| n.children().iter().filter(|&&c| nodes[c].is_leaf()).map(|&c| nodes[c].name.as_str()).collect())
        .filter(|g: &Vec<&str>| !g.is_empty())
        .collect();

    let mut complete: Vec<IndexMap<String, f64>> = Vec::with_capacity(config.respondents);
    let mut truth = Vec::with_capacity(config.respondents);
    for _ in 0..config.respondents {
        let answers: IndexMap<String, f64> =
            leaves.iter().map(|leaf| (leaf.to_string(), rng.random_range(1..=10) as f64)).collect();
        let inputs: LeafInputs<f64> = answers.iter().map(|(k, &v)| (k.clone(), InputValue::Crisp(v))).collect();
        truth.push(evaluate_tree(fw, &inputs)?.crisp().expect("root is internal"));
        complete.push(answers);
    }

    let mut sorted = truth.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];

    let records = complete
        .into_iter()
        .zip(truth)
        .enumerate()
        .map(|(i, (mut answers, score))| {
            for group in &groups {
                let keep = group[rng.random_range(0..group.len())];
                for leaf in group {
                    if *leaf != keep && rng.random_bool(config.missing_rate) {
                        answers.insert(leaf.to_string(), 0.0);
                    }
                }
            }
            SurveyRecord { id: (i + 1).to_string(), values: answers, label: score >= median }
        })
        .collect();
    Ok(records)
}
