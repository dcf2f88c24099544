//! The JSON Schemas under `schema/` describe exactly the fields the loaders accept.

use std::collections::BTreeSet;
use std::path::Path;

use brb_core::egov;
use brb_core::io::{store_framework, store_rule_base, FrameworkDocument};
use serde_json::Value;

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema").join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn keys(v: &Value) -> BTreeSet<String> {
    v.as_object().unwrap().keys().cloned().collect()
}

fn required(v: &Value) -> BTreeSet<String> {
    v["required"].as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_owned()).collect()
}

fn covers(schema_obj: &Value, doc: &Value) {
    let allowed = keys(&schema_obj["properties"]);
    let present = keys(doc);
    assert!(present.is_subset(&allowed), "{present:?} not within {allowed:?}");
    assert!(required(schema_obj).is_subset(&present));
}

#[test]
fn rule_base_schema_matches_output() {
    let s = schema("rulebase.schema.json");
    assert_eq!(required(&s), ["attributes", "consequent", "name", "rules", "scales"].map(String::from).into());
    let fw = egov::framework::<f64>().unwrap();
    let rb = fw.node("User Environment").unwrap().rule_base().unwrap();
    let doc: Value = serde_json::from_str(&store_rule_base(rb)).unwrap();
    covers(&s, &doc);
    covers(&s["$defs"]["scale"], &doc["scales"][0]);
    covers(&s["$defs"]["rule"], &doc["rules"][0]);
    covers(&s["properties"]["attributes"]["items"], &doc["attributes"][0]);
}

#[test]
fn framework_schema_matches_output() {
    let s = schema("framework.schema.json");
    assert_eq!(required(&s), ["name", "nodes", "scales"].map(String::from).into());
    let fw = egov::framework::<f64>().unwrap();
    let doc: Value = serde_json::from_str(&store_framework(&fw)).unwrap();
    covers(&s, &doc);
    for node in doc["nodes"].as_array().unwrap() {
        covers(&s["$defs"]["node"], node);
    }
    let fill = serde_json::to_value(egov::document::<f64>(brb_core::FillPolicy::Diagonal)).unwrap();
    let inline = &s["$defs"]["node"]["properties"]["rulebase"]["oneOf"][1];
    covers(inline, &fill["nodes"][0]["rulebase"]);
    let _: FrameworkDocument<f64> = serde_json::from_value(fill).unwrap();
}
