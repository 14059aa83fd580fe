use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: bool,
    pub max_deviation: f64,
    pub failures: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_fidelity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_fidelity: Option<f64>,
}

/// Top-level JSON document every command emits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub config: Value,
    pub results: Vec<Value>,
    pub summary: Summary,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Rows with a `pass` and a `deviation` field folded into a summary.
pub fn summarize<T: Serialize>(rows: &[T], pass_of: impl Fn(&T) -> bool, dev_of: impl Fn(&T) -> f64) -> (Vec<Value>, Summary) {
    let failures = rows.iter().filter(|r| !pass_of(r)).count();
    let max_deviation = rows.iter().map(&dev_of).fold(0.0, f64::max);
    let results = rows.iter().map(|r| serde_json::to_value(r).expect("row serializes")).collect();
    (results, Summary { pass: failures == 0, max_deviation, failures, min_fidelity: None, mean_fidelity: None })
}
