use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::roc::{roc_points, RocCurve};
use super::survey::{lrf_score_over, SurveyRecord};
use crate::error::ValidationError;
use crate::framework::evaluate_tree;
use crate::model::EvaluationFramework;
use crate::scalar::Scalar;

/// Dimension name used for the root node.
pub const OVERALL: &str = "Overall";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct DimensionReport<T> {
    pub dimension: String,
    /// Framework node scored for this dimension.
    pub node: String,
    pub engine_auc: T,
    pub lrf_auc: T,
    pub engine_curve: RocCurve<T>,
    pub lrf_curve: RocCurve<T>,
}

/// Engine-vs-baseline AUC per dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ComparisonReport<T> {
    pub records: usize,
    pub positives: usize,
    pub negatives: usize,
    pub dimensions: Vec<DimensionReport<T>>,
}

/// Scores every record with the framework and with the mean baseline, then
/// compares both as classifiers of the record labels.
///
/// Dimensions are the root's internal children followed by the root itself
/// ([`OVERALL`]). The engine score of a dimension is its node's crisp
/// output; the baseline score is the mean of the raw answers below it.
pub fn compare<T: Scalar>(
    fw: &EvaluationFramework<T>,
    records: &[SurveyRecord<T>],
) -> Result<ComparisonReport<T>, ValidationError> {
    if records.is_empty() {
        return Err(ValidationError::Empty);
    }
    let leaves = fw.leaf_names();
    for r in records {
        r.check(&leaves)?;
    }
    let labels: Vec<bool> = records.iter().map(|r| r.label).collect();
    let positives = labels.iter().filter(|&&l| l).count();
    if positives == 0 || positives == labels.len() {
        return Err(ValidationError::DegenerateLabels);
    }

    let root = fw.root_index();
    let mut dims: Vec<(String, usize)> = fw.nodes()[root]
        .children()
        .iter()
        .filter(|&&c| !fw.nodes()[c].is_leaf())
        .map(|&c| (fw.nodes()[c].name.clone(), c))
        .collect();
    dims.push((OVERALL.to_owned(), root));

    let engine_scores: Vec<Vec<T>> = records
        .par_iter()
        .map(|r| {
            let tree = evaluate_tree(fw, &r.leaf_inputs())
                .map_err(|source| ValidationError::Evaluation { record: r.id.clone(), source })?;
            Ok(dims
                .iter()
                .map(|(_, node)| tree.find(&fw.nodes()[*node].name).and_then(|n| n.crisp()).expect("internal node"))
                .collect())
        })
        .collect::<Result<_, ValidationError>>()?;

    let dimensions = dims
        .iter()
        .enumerate()
        .map(|(d, (dimension, node))| {
            let vars: Vec<&str> = fw.leaves_under(*node).into_iter().map(|i| fw.nodes()[i].name.as_str()).collect();
            let engine: Vec<T> = engine_scores.iter().map(|s| s[d]).collect();
            let lrf: Vec<T> = records.iter().map(|r| lrf_score_over(r, &vars)).collect();
            let engine_curve = roc_points(&engine, &labels)?;
            let lrf_curve = roc_points(&lrf, &labels)?;
            Ok(DimensionReport {
                dimension: dimension.clone(),
                node: fw.nodes()[*node].name.clone(),
                engine_auc: engine_curve.auc,
                lrf_auc: lrf_curve.auc,
                engine_curve,
                lrf_curve,
            })
        })
        .collect::<Result<_, ValidationError>>()?;

    Ok(ComparisonReport { records: records.len(), positives, negatives: records.len() - positives, dimensions })
}

impl<T: Scalar> ComparisonReport<T> {
    pub fn dimension(&self, name: &str) -> Option<&DimensionReport<T>> {
        self.dimensions.iter().find(|d| d.dimension == name)
    }

    /// Plain-text table: one row per method, one column per dimension.
    pub fn to_table(&self) -> String {
        let width = self.dimensions.iter().map(|d| d.dimension.len()).max().unwrap_or(0).max(8);
        let mut out = String::new();
        let _ = write!(out, "{:<8}", "Method");
        for d in &self.dimensions {
            let _ = write!(out, "  {:>width$}", d.dimension);
        }
        out.push('\n');
        for (method, pick) in [("BRB", true), ("LRF", false)] {
            let _ = write!(out, "{method:<8}");
            for d in &self.dimensions {
                let auc = if pick { d.engine_auc } else { d.lrf_auc };
                let _ = write!(out, "  {:>width$.3}", auc.as_f64());
            }
            out.push('\n');
        }
        let _ = writeln!(out, "records: {} ({} positive, {} negative)", self.records, self.positives, self.negatives);
        out
    }
}
