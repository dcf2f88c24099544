use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::ValidationError;
use crate::framework::LeafInputs;
use crate::scalar::Scalar;
use crate::transform::InputValue;

/// Largest raw answer accepted on the 1-10 survey scale.
pub const SURVEY_MAX: f64 = 10.0;

/// One respondent: raw answers per variable (0 = no answer) and a binary
/// ground-truth label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SurveyRecord<T> {
    pub id: String,
    pub values: IndexMap<String, T>,
    pub label: bool,
}

impl<T: Scalar> SurveyRecord<T> {
    pub fn input(&self, variable: &str) -> InputValue<T> {
        self.values.get(variable).map_or(InputValue::Missing, |&v| InputValue::from_survey(v))
    }

    pub fn leaf_inputs(&self) -> LeafInputs<T> {
        self.values.iter().map(|(k, &v)| (k.clone(), InputValue::from_survey(v))).collect()
    }

    /// Checks the record covers exactly `variables` with values in range.
    pub fn check(&self, variables: &[&str]) -> Result<(), ValidationError> {
        for k in self.values.keys() {
            if !variables.contains(&k.as_str()) {
                return Err(ValidationError::Survey(format!("record {}: unknown variable `{k}`", self.id)));
            }
        }
        for v in variables {
            match self.values.get(*v) {
                None => return Err(ValidationError::Survey(format!("record {}: no value for `{v}`", self.id))),
                Some(x) if !(*x >= T::zero() && *x <= T::lit(SURVEY_MAX)) => {
                    return Err(ValidationError::Survey(format!("record {}: `{v}` = {x} outside [0, 10]", self.id)))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Reads a survey CSV: a header row naming the variables, a `label` column
/// of 0/1 and an optional `id` column. Every variable in `variables` must
/// appear. Cells of 0 mean "no answer".
pub fn load_survey<T: Scalar>(csv_text: &str, variables: &[&str]) -> Result<Vec<SurveyRecord<T>>, ValidationError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(csv_text.as_bytes());
    let headers = reader.headers()?.clone();
    let mut label_col = None;
    let mut id_col = None;
    let mut var_cols = Vec::new();
    for (i, h) in headers.iter().enumerate() {
        match h {
            "label" => label_col = Some(i),
            "id" => id_col = Some(i),
            v if variables.contains(&v) => var_cols.push((i, v.to_owned())),
            other => return Err(ValidationError::Survey(format!("unknown variable column `{other}`"))),
        }
    }
    let label_col = label_col.ok_or_else(|| ValidationError::Survey("no `label` column".into()))?;
    for v in variables {
        if !var_cols.iter().any(|(_, name)| name == v) {
            return Err(ValidationError::Survey(format!("missing variable column `{v}`")));
        }
    }

    let mut out = Vec::new();
    for (row, rec) in reader.records().enumerate() {
        let rec = rec?;
        let line = row + 2;
        let id = id_col.map_or_else(|| (row + 1).to_string(), |c| rec[c].to_owned());
        let label = match &rec[label_col] {
            "1" => true,
            "0" => false,
            other => return Err(ValidationError::Survey(format!("line {line}: label must be 0 or 1, got `{other}`"))),
        };
        let mut values = IndexMap::with_capacity(var_cols.len());
        for (c, name) in &var_cols {
            let cell = &rec[*c];
            let v: f64 = cell
                .parse()
                .map_err(|_| ValidationError::Survey(format!("line {line}: `{name}` is not numeric (`{cell}`)")))?;
            if !(0.0..=SURVEY_MAX).contains(&v) {
                return Err(ValidationError::Survey(format!("line {line}: `{name}` = {v} outside [0, 10]")));
            }
            values.insert(name.clone(), T::lit(v));
        }
        out.push(SurveyRecord { id, values, label });
    }
    Ok(out)
}

/// Writes records back in the CSV layout read by [`load_survey`].
pub fn survey_to_csv<T: Scalar>(records: &[SurveyRecord<T>], variables: &[&str]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["id"];
    header.extend_from_slice(variables);
    header.push("label");
    w.write_record(&header).expect("in-memory write");
    for r in records {
        let mut row = vec![r.id.clone()];
        row.extend(variables.iter().map(|v| r.values.get(*v).map_or_else(|| "0".to_owned(), |x| x.to_string())));
        row.push(if r.label { "1" } else { "0" }.to_owned());
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

/// Baseline score: arithmetic mean of all raw answers, unanswered counted as 0.
pub fn lrf_score<T: Scalar>(record: &SurveyRecord<T>) -> T {
    mean(record.values.values().copied())
}

/// [`lrf_score`] restricted to `variables`.
pub fn lrf_score_over<T: Scalar>(record: &SurveyRecord<T>, variables: &[&str]) -> T {
    mean(variables.iter().map(|v| record.values.get(*v).copied().unwrap_or(T::zero())))
}

fn mean<T: Scalar>(it: impl Iterator<Item = T>) -> T {
    let (sum, n) = it.fold((T::zero(), 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        T::zero()
    } else {
        sum / T::lit(n as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DET: [&str; 5] = ["D1", "D2", "D3", "D4", "D5"];

    #[test]
    fn zero_cells_are_missing() {
        let csv = "id,D1,D2,D3,D4,D5,label\n1,8,0,0,0,0,1\n2,0,0,0,0,0,0\n";
        let recs = load_survey::<f64>(csv, &DET).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].input("D1"), InputValue::Crisp(8.0));
        assert!(["D2", "D3", "D4", "D5"].iter().all(|v| recs[0].input(v).is_missing()));
        assert!(recs[1].leaf_inputs().values().all(|v| v.is_missing()));
        assert!(recs[0].label && !recs[1].label);
    }

    #[test]
    fn rejects_bad_cells() {
        assert!(load_survey::<f64>("D1,D2,D3,D4,D5,label\n11,0,0,0,0,1\n", &DET).is_err());
        assert!(load_survey::<f64>("D1,D2,D3,D4,D5,label\nx,0,0,0,0,1\n", &DET).is_err());
        assert!(load_survey::<f64>("D1,D2,D3,D4,D9,label\n1,0,0,0,0,1\n", &DET).is_err());
        assert!(load_survey::<f64>("D1,D2,D3,D4,D5\n1,0,0,0,0\n", &DET).is_err());
        assert!(load_survey::<f64>("D1,D2,D3,D4,D5,label\n1,0,0,0,0,2\n", &DET).is_err());
        assert!(load_survey::<f64>("D1,D2,D3,D4,label\n1,0,0,0,1\n", &DET).is_err());
    }

    #[test]
    fn ids_default_to_row_number() {
        let recs = load_survey::<f64>("D1,D2,D3,D4,D5,label\n1,2,3,4,5,1\n", &DET).unwrap();
        assert_eq!(recs[0].id, "1");
    }

    fn rec(vals: &[f64]) -> SurveyRecord<f64> {
        SurveyRecord {
            id: "r".into(),
            values: vals.iter().enumerate().map(|(i, &v)| (format!("v{i}"), v)).collect(),
            label: true,
        }
    }

    #[test]
    fn lrf_means() {
        assert_eq!(lrf_score(&rec(&[8.0, 6.0, 7.0])), 7.0);
        assert!((lrf_score(&rec(&[8.0, 0.0, 0.0, 0.0, 0.0])) - 1.6).abs() < 1e-12);
        assert_eq!(lrf_score(&rec(&[4.5; 6])), 4.5);
        assert_eq!(lrf_score_over(&rec(&[8.0, 6.0, 7.0]), &["v0", "v1"]), 7.0);
    }

    #[test]
    fn csv_round_trip() {
        let csv = "id,D1,D2,D3,D4,D5,label\n1,8,0,0,0,0,1\n2,7,6.5,0,0,0,0\n";
        let recs = load_survey::<f64>(csv, &DET).unwrap();
        assert_eq!(survey_to_csv(&recs, &DET), csv);
    }
}
