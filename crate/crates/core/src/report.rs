//! Suite reporting: named residuals with gates, grouped per verification
//! case, plus a small JSON emitter. Serialization is hand-rolled so float
//! formatting is pinned to 17 significant digits and field order is fixed,
//! making reports byte-diffable across runs.

use crate::linalg::CMat;

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub gate: f64,
    pub pass: bool,
    /// Free-form context: sample counts, fitted scalars, block sizes.
    pub note: String,
}

impl CheckResult {
    pub fn gated(name: &str, residual: f64, gate: f64, note: impl Into<String>) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            residual,
            gate,
            pass: residual < gate,
            note: note.into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CaseReport {
    pub lie_type: char,
    pub rank: usize,
    pub q: f64,
    /// Parabolic node set, 1-indexed for display.
    pub subset: Vec<usize>,
    /// Reduced word of the evaluation cell, 1-indexed for display.
    pub word: Vec<usize>,
    pub trunc: usize,
    pub block: usize,
    pub eps_target: Vec<f64>,
    pub eps_fitted: Vec<f64>,
    pub checks: Vec<CheckResult>,
    pub wall_ms: u128,
}

impl CaseReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn worst(&self) -> Option<&CheckResult> {
        self.checks
            .iter()
            .max_by(|a, b| (a.residual / a.gate).total_cmp(&(b.residual / b.gate)))
    }

    pub fn label(&self) -> String {
        let subset: Vec<String> = self.subset.iter().map(|s| s.to_string()).collect();
        format!(
            "{}{} S={{{}}} q={}",
            self.lie_type,
            self.rank,
            subset.join(","),
            self.q
        )
    }
}

fn push_f64(out: &mut String, x: f64) {
    if x.is_finite() {
        out.push_str(&format!("{:.16e}", x));
    } else {
        out.push_str("null");
    }
}

fn push_str(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
}

fn push_usize_list(out: &mut String, xs: &[usize]) {
    out.push('[');
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&x.to_string());
    }
    out.push(']');
}

fn push_f64_list(out: &mut String, xs: &[f64]) {
    out.push('[');
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        push_f64(out, *x);
    }
    out.push(']');
}

fn push_check(out: &mut String, c: &CheckResult) {
    out.push_str("{\"name\":");
    push_str(out, &c.name);
    out.push_str(",\"residual\":");
    push_f64(out, c.residual);
    out.push_str(",\"gate\":");
    push_f64(out, c.gate);
    out.push_str(",\"pass\":");
    out.push_str(if c.pass { "true" } else { "false" });
    out.push_str(",\"note\":");
    push_str(out, &c.note);
    out.push('}');
}

fn push_case(out: &mut String, r: &CaseReport) {
    out.push_str("{\"type\":");
    push_str(out, &r.lie_type.to_string());
    out.push_str(",\"rank\":");
    out.push_str(&r.rank.to_string());
    out.push_str(",\"q\":");
    push_f64(out, r.q);
    out.push_str(",\"subset\":");
    push_usize_list(out, &r.subset);
    out.push_str(",\"word\":");
    push_usize_list(out, &r.word);
    out.push_str(",\"trunc\":");
    out.push_str(&r.trunc.to_string());
    out.push_str(",\"block\":");
    out.push_str(&r.block.to_string());
    out.push_str(",\"eps_target\":");
    push_f64_list(out, &r.eps_target);
    out.push_str(",\"eps_fitted\":");
    push_f64_list(out, &r.eps_fitted);
    out.push_str(",\"pass\":");
    out.push_str(if r.all_pass() { "true" } else { "false" });
    out.push_str(",\"wall_ms\":");
    out.push_str(&r.wall_ms.to_string());
    out.push_str(",\"checks\":[");
    for (i, c) in r.checks.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        push_check(out, c);
    }
    out.push_str("]}");
}

/// Aggregated report over cases, in the order given.
pub fn report_json(cases: &[CaseReport]) -> String {
    let mut out = String::new();
    out.push_str("{\"cases\":[");
    for (i, r) in cases.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        push_case(&mut out, r);
    }
    out.push_str("],\"pass\":");
    out.push_str(if cases.iter().all(|r| r.all_pass()) {
        "true"
    } else {
        "false"
    });
    out.push('}');
    out
}

/// A complex matrix as a shape header plus row-major [re, im] pairs.
pub fn matrix_json(m: &CMat) -> String {
    let mut out = String::new();
    out.push_str("{\"shape\":[");
    out.push_str(&m.nrows().to_string());
    out.push(',');
    out.push_str(&m.ncols().to_string());
    out.push_str("],\"data\":[");
    let mut first = true;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if !first {
                out.push(',');
            }
            first = false;
            out.push('[');
            push_f64(&mut out, m[(i, j)].re);
            out.push(',');
            push_f64(&mut out, m[(i, j)].im);
            out.push(']');
        }
    }
    out.push_str("]}");
    out
}

/// Named collection of matrices in one JSON object, keys in the given order.
pub fn matrices_json(entries: &[(String, CMat)]) -> String {
    let mut out = String::new();
    out.push('{');
    for (i, (name, m)) in entries.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        push_str(&mut out, name);
        out.push(':');
        out.push_str(&matrix_json(m));
    }
    out.push('}');
    out
}
