//! Structured text records: ordered `key = value` lines.
//!
//! The record body is deterministic for identical arguments and seed; the
//! timestamp is appended outside the body so reruns and cache hits stay
//! byte-comparable.

use std::fmt::Write as _;

/// One run's record, assembled in output order.
pub struct RunReport {
    lines: Vec<(String, String)>,
}

impl RunReport {
    pub fn new(command_echo: &str) -> Self {
        let mut report = RunReport { lines: Vec::new() };
        report.push("command", command_echo);
        report
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    pub fn push_float(&mut self, key: &str, value: f64) {
        self.lines.push((key.to_string(), format_float(value)));
    }

    pub fn push_floats(&mut self, key: &str, values: &[f64]) {
        let joined = values.iter().map(|&v| format_float(v)).collect::<Vec<_>>().join(",");
        self.lines.push((key.to_string(), joined));
    }

    pub fn push_indices(&mut self, key: &str, values: &[usize]) {
        let joined = values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        self.lines.push((key.to_string(), joined));
    }

    /// The deterministic body: everything except the timestamp.
    pub fn body(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.lines {
            let _ = writeln!(out, "{key} = {value}");
        }
        out
    }
}

/// Fixed 9-decimal rendering keeps reruns byte-identical.
pub fn format_float(v: f64) -> String {
    format!("{v:.9}")
}

pub fn unix_timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Fixed CSV column set for `bounds` rows and sweeps.
pub const CSV_HEADER: &str =
    "graph6,n,alpha,theta,alpha_star,vt,sc,theta_complement,product_vt_check";

pub struct CsvRow {
    pub graph6: String,
    pub n: usize,
    pub alpha: f64,
    pub theta: f64,
    pub alpha_star: f64,
    pub vertex_transitive: bool,
    pub self_complementary: bool,
    pub theta_complement: f64,
}

impl CsvRow {
    pub fn render(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.graph6,
            self.n,
            format_float(self.alpha),
            format_float(self.theta),
            format_float(self.alpha_star),
            self.vertex_transitive,
            self.self_complementary,
            format_float(self.theta_complement),
            format_float(self.theta * self.theta_complement),
        )
    }
}
