//! One JSON object per report line.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub result: Value,
    pub caveats: Vec<String>,
    /// Always null so that identical runs give identical bytes.
    pub timing: Option<f64>,
}

impl Report {
    pub fn new(command: &str, inputs: Value, verdict: impl Into<String>, result: Value) -> Self {
        Report {
            command: command.to_string(),
            inputs,
            verdict: verdict.into(),
            witness: None,
            result,
            caveats: Vec::new(),
            timing: None,
        }
    }

    pub fn witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn caveat(mut self, c: impl Into<String>) -> Self {
        self.caveats.push(c.into());
        self
    }

    pub fn failed(&self) -> bool {
        self.verdict == "fails"
    }

    pub fn line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}
