//! The report every command produces.

use std::fmt::Write as _;

use serde::Serialize;

/// Size and width information about the input.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct InstanceStats {
    /// Number of vertices.
    pub n: Option<usize>,
    /// Number of edges (undirected) or arcs (directed).
    pub m: Option<usize>,
    /// Number of irrelevant vertices.
    pub irrelevant: Option<usize>,
    /// Width of the tree decomposition used.
    pub width: Option<usize>,
    /// Height of the nice decomposition used.
    pub height: Option<usize>,
    /// Number of labels of the expression used.
    pub cw: Option<usize>,
}

/// The answer of a command.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RunResult {
    /// YES / NO for decision commands.
    pub decision: Option<bool>,
    /// Centers, 1-indexed.
    pub centers: Option<Vec<usize>>,
    /// Counts per number of centers, as decimal strings.
    pub counts: Option<Vec<String>>,
    /// A radius (queried, or the optimum for `oracle min-radius`).
    pub radius: Option<u64>,
}

/// The machine-readable report of one invocation.
///
/// Every center list in `result` has been checked with `verify_center` on
/// the input graph; `certified_radius` is the radius measured there.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunReport {
    /// The arguments, program name excluded.
    pub command: Vec<String>,
    /// Algorithm or sub-command identifier.
    pub algorithm: String,
    /// Input statistics.
    pub instance: InstanceStats,
    /// The answer.
    pub result: RunResult,
    /// Largest distance from the reported centers to a relevant vertex.
    pub certified_radius: Option<u64>,
    /// Wall time in milliseconds, present only with `--timing`.
    pub wall_time_ms: Option<f64>,
    /// Algorithm-specific counters and diagnostics.
    pub details: serde_json::Value,
    /// Error message for exit code 2.
    pub error: Option<String>,
    /// Process exit code: 0 YES/success, 1 NO, 2 error.
    pub exit_code: i32,
}

impl RunReport {
    /// Pretty-printed JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// A short human-readable summary.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error: {e}");
            return out;
        }
        let _ = writeln!(out, "algorithm: {}", self.algorithm);
        let i = &self.instance;
        if let (Some(n), Some(m)) = (i.n, i.m) {
            let _ = writeln!(out, "instance: n = {n}, m = {m}");
        }
        if let Some(w) = i.width {
            let _ = writeln!(out, "width: {w}");
        }
        if let Some(d) = self.result.decision {
            let _ = writeln!(out, "answer: {}", if d { "YES" } else { "NO" });
        }
        if let Some(c) = &self.result.centers {
            let list: Vec<String> = c.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "centers: {}", list.join(" "));
        }
        if let Some(c) = &self.result.counts {
            let _ = writeln!(out, "counts: {}", c.join(" "));
        }
        if let Some(r) = self.result.radius {
            let _ = writeln!(out, "radius: {r}");
        }
        if let Some(r) = self.certified_radius {
            let _ = writeln!(out, "certified radius: {r}");
        }
        if let Some(t) = self.wall_time_ms {
            let _ = writeln!(out, "time: {t:.3} ms");
        }
        if !self.details.is_null() {
            let _ = writeln!(out, "details: {}", self.details);
        }
        out
    }
}
