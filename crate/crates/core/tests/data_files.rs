//! The files under `data/` are generated; set `BRB_REGENERATE=1` to rewrite them.

use std::path::{Path, PathBuf};

use brb_core::io::{load_framework_file, load_rule_base_file, store_rule_base, LoadOptions};
use brb_core::validation::synthetic::{
    planted_document, planted_framework, synthetic_survey, SyntheticConfig, PLANTED_LEAD,
};
use brb_core::validation::{load_survey, survey_to_csv};
use brb_core::{egov, evaluate_tree, FillPolicy, InputValue, LeafInputs};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn check_or_write(name: &str, expected: &str) {
    let path = data(name);
    if std::env::var_os("BRB_REGENERATE").is_some() {
        std::fs::write(&path, expected).unwrap();
    }
    let actual = std::fs::read_to_string(&path).unwrap();
    assert!(actual == expected, "{name} is stale; rerun with BRB_REGENERATE=1");
}

#[test]
fn egov_framework_file() {
    let doc = egov::document::<f64>(FillPolicy::Diagonal);
    check_or_write("egov_framework.json", &(serde_json::to_string_pretty(&doc).unwrap() + "\n"));
    let fw = load_framework_file::<f64>(&data("egov_framework.json"), LoadOptions::default()).unwrap();
    assert_eq!(fw, egov::framework().unwrap());
}

#[test]
fn planted_framework_file() {
    let doc = planted_document(PLANTED_LEAD);
    check_or_write("planted_framework.json", &(serde_json::to_string(&doc).unwrap() + "\n"));
    let fw = load_framework_file::<f64>(&data("planted_framework.json"), LoadOptions::default()).unwrap();
    assert_eq!(fw, planted_framework().unwrap());
}

#[test]
fn synthetic_survey_file() {
    let fw = planted_framework().unwrap();
    let records = synthetic_survey(&fw, &SyntheticConfig::default()).unwrap();
    let leaves = fw.leaf_names();
    check_or_write("synthetic_survey.csv", &survey_to_csv(&records, &leaves));
    let text = std::fs::read_to_string(data("synthetic_survey.csv")).unwrap();
    assert_eq!(load_survey::<f64>(&text, &leaves).unwrap(), records);
}

#[test]
fn rule_one_file() {
    let rb = load_rule_base_file::<f64>(&data("rule_one.json"), LoadOptions::default()).unwrap();
    assert!(rb.validate().is_empty());
    assert!((rb.rules()[0].consequent.mass() - 1.0).abs() < 1e-9);
    let stored = store_rule_base(&rb);
    let again = brb_core::io::load_rule_base::<f64>(&stored, LoadOptions::default()).unwrap();
    assert_eq!(store_rule_base(&again), stored);
}

#[test]
fn toy_framework_file_is_identity() {
    let fw = load_framework_file::<f64>(&data("toy_framework.json"), LoadOptions::default()).unwrap();
    let inputs: LeafInputs<f64> = [("q".to_string(), InputValue::Crisp(6.5))].into_iter().collect();
    let out = evaluate_tree(&fw, &inputs).unwrap();
    assert!((out.crisp().unwrap() - 6.5).abs() < 1e-12);
}
