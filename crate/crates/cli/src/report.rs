//! JSON reports. Keys are sorted (serde_json's default map), and timings
//! are the only nondeterministic field.

use std::io::Write;
use std::time::Instant;

use rgfp::model_file::format_coefficient;
use rgfp::ExactScalar;
use serde_json::{json, Map, Value};

use crate::input::LoadedModel;
use crate::{CliError, Outcome};

pub struct Report {
    fields: Map<String, Value>,
    timings: Option<Map<String, Value>>,
}

impl Report {
    pub fn new(command: &str, timings: bool) -> Self {
        let mut fields = Map::new();
        fields.insert("command".into(), json!(command));
        Report {
            fields,
            timings: timings.then(Map::new),
        }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.fields.insert(key.into(), value);
    }

    pub fn model(&mut self, m: &LoadedModel) {
        let params: Map<String, Value> = m
            .file
            .params
            .iter()
            .map(|(k, v)| (k.clone(), json!(scalar(v))))
            .collect();
        self.set(
            "model",
            json!({
                "digest": m.digest,
                "mode": if m.file.model.is_restricted() { "restricted" } else { "general" },
                "params": params,
            }),
        );
    }

    /// Runs `f` and records its wall time under `label`.
    pub fn timed<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if let Some(t) = &mut self.timings {
            t.insert(label.into(), json!(start.elapsed().as_secs_f64() * 1e3));
        }
        out
    }

    pub fn finish(mut self, outcome: Outcome) -> Value {
        let status = match outcome {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Inconclusive => "inconclusive",
            Outcome::Refutation => "refutation",
        };
        self.fields.insert("status".into(), json!(status));
        self.fields.insert("exit_code".into(), json!(outcome as u8));
        if let Some(t) = self.timings {
            self.fields.insert("timings_ms".into(), Value::Object(t));
        }
        Value::Object(self.fields)
    }
}

pub fn scalar(c: &ExactScalar) -> String {
    format_coefficient(c)
}

/// Writes `value` to `dest` (`-` is standard output).
pub fn emit(value: &Value, dest: &str) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    if dest == "-" {
        std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Output(e.to_string()))
    } else {
        std::fs::write(dest, text).map_err(|e| CliError::Output(format!("{dest}: {e}")))
    }
}

/// Human-readable lines go to stdout unless the JSON report does.
pub struct Console {
    quiet: bool,
}

impl Console {
    pub fn new(json: Option<&str>) -> Self {
        Console {
            quiet: json == Some("-"),
        }
    }

    pub fn line(&self, s: impl AsRef<str>) {
        // a closed pipe (`rgfp ... | head`) is not an error worth reporting
        if !self.quiet {
            let _ = writeln!(std::io::stdout(), "{}", s.as_ref());
        }
    }
}
