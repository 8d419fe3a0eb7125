use std::time::Instant;

use serde::Serialize;
use serde_json::{Map, Value};

/// A pipeline's inputs, outputs and certificates. Big integers are kept as
/// decimal strings so that values stay exact in JSON.
#[derive(Debug, Serialize)]
pub struct PipelineReport {
    pub pipeline: String,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub certificates: Map<String, Value>,
    pub version: String,
    pub elapsed_seconds: f64,
    #[serde(skip)]
    started: Option<Instant>,
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

impl PipelineReport {
    pub fn new(pipeline: impl Into<String>) -> Self {
        PipelineReport {
            pipeline: pipeline.into(),
            inputs: Map::new(),
            outputs: Map::new(),
            certificates: Map::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            elapsed_seconds: 0.0,
            started: Some(Instant::now()),
        }
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.inputs.insert(key.into(), to_value(v));
        self
    }

    pub fn output(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.outputs.insert(key.into(), to_value(v));
        self
    }

    pub fn certificate(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.certificates.insert(key.into(), to_value(v));
        self
    }

    pub fn finish(&mut self) {
        if let Some(t) = self.started {
            self.elapsed_seconds = t.elapsed().as_secs_f64();
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("pipeline: {}\n", self.pipeline);
        for (title, map) in [("inputs", &self.inputs), ("outputs", &self.outputs), ("certificates", &self.certificates)] {
            if map.is_empty() {
                continue;
            }
            out.push_str(title);
            out.push_str(":\n");
            for (k, v) in map {
                let shown = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                out.push_str(&format!("  {k}: {shown}\n"));
            }
        }
        out.push_str(&format!("elapsed: {:.3}s\n", self.elapsed_seconds));
        out
    }
}
