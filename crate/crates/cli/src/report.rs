//! Report records, the human table, the JSON document and the CSV breakdown.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use zmlab_core::C64;

use crate::config::{CliError, Command, Compare};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for Cx {
    fn from(z: C64) -> Self {
        Cx { re: z.re, im: z.im }
    }
}

impl From<Cx> for C64 {
    fn from(z: Cx) -> Self {
        C64::new(z.re, z.im)
    }
}

/// Non-finite residuals become `null`.
pub fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Part {
    pub label: String,
    pub value: Cx,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SixTermRow {
    pub label: String,
    pub thm1: Cx,
    pub thm2: Cx,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentBody {
    pub T: f64,
    pub shifts: [f64; 4],
    pub direct_value: Cx,
    pub direct_coarse_value: Cx,
    pub direct_step: f64,
    pub direct_nodes: usize,
    pub main_term_thm1: Cx,
    pub main_term_thm2: Cx,
    pub six_term_breakdown: Vec<SixTermRow>,
    pub residual_thm1: Option<f64>,
    pub residual_thm2: Option<f64>,
    pub gap_thm1_thm2: Option<f64>,
    pub compare: Compare,
    pub tolerance: f64,
    pub warnings: Vec<String>,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QdpBody {
    pub X: f64,
    pub Z: f64,
    pub H: f64,
    pub shifts: [f64; 4],
    pub brute_force_value: Cx,
    pub brute_force_terms: u64,
    pub enumeration_cutoff: u64,
    pub tail_estimate: f64,
    pub main_terms: Vec<Part>,
    pub main_term_total: Cx,
    pub residual: Option<f64>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AfeBody {
    pub t: f64,
    pub shifts: [f64; 4],
    pub truncation: u64,
    pub lhs: Cx,
    pub first: Cx,
    pub second: Cx,
    pub rhs: Cx,
    pub residual: Option<f64>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub inputs_digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyBody {
    pub results: Vec<CheckRow>,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Body {
    Moment(MomentBody),
    Qdp(QdpBody),
    Afe(AfeBody),
    Verify(VerifyBody),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub version: String,
    pub command: Command,
    pub seed: u64,
    pub config_digest: String,
    pub tolerance_profile: crate::config::ToleranceProfile,
    pub pass: bool,
    pub wall_time_s: f64,
    #[serde(flatten)]
    pub body: Body,
}

impl Document {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Per-term breakdown as CSV rows, header first.
    pub fn csv_rows(&self) -> Vec<Vec<String>> {
        let cx = |z: &Cx| [format!("{:?}", z.re), format!("{:?}", z.im)];
        let opt = |x: Option<f64>| x.map(|v| format!("{v:?}")).unwrap_or_default();
        match &self.body {
            Body::Moment(m) => {
                let mut rows = vec![vec!["term".into(), "thm1_re".into(), "thm1_im".into(), "thm2_re".into(), "thm2_im".into()]];
                for r in &m.six_term_breakdown {
                    rows.push([vec![r.label.clone()], cx(&r.thm1).to_vec(), cx(&r.thm2).to_vec()].concat());
                }
                rows.push([vec!["total".into()], cx(&m.main_term_thm1).to_vec(), cx(&m.main_term_thm2).to_vec()].concat());
                rows.push([vec!["direct".into()], cx(&m.direct_value).to_vec(), cx(&m.direct_value).to_vec()].concat());
                rows
            }
            Body::Qdp(q) => {
                let mut rows = vec![vec!["term".into(), "re".into(), "im".into()]];
                for p in &q.main_terms {
                    rows.push([vec![p.label.clone()], cx(&p.value).to_vec()].concat());
                }
                rows.push([vec!["main total".into()], cx(&q.main_term_total).to_vec()].concat());
                rows.push([vec!["brute force".into()], cx(&q.brute_force_value).to_vec()].concat());
                rows
            }
            Body::Afe(a) => {
                let mut rows = vec![vec!["quantity".into(), "re".into(), "im".into()]];
                for (l, z) in [("lhs", &a.lhs), ("first", &a.first), ("second", &a.second), ("rhs", &a.rhs)] {
                    rows.push([vec![l.to_string()], cx(z).to_vec()].concat());
                }
                rows
            }
            Body::Verify(v) => {
                let mut rows = vec![vec!["name".into(), "residual".into(), "tolerance".into(), "pass".into(), "inputs_digest".into()]];
                for r in &v.results {
                    rows.push(vec![r.name.clone(), opt(r.residual), format!("{:?}", r.tolerance), r.pass.to_string(), r.inputs_digest.clone()]);
                }
                rows
            }
        }
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        let z = |c: &Cx| format!("{:+.10e} {:+.10e}i", c.re, c.im);
        let r = |x: Option<f64>| x.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "n/a".into());
        match &self.body {
            Body::Moment(m) => {
                let _ = writeln!(s, "moment  T = {}  shifts = {:?}", m.T, m.shifts);
                let _ = writeln!(s, "{:<14} {:>42} {:>42}", "term", "thm1", "thm2");
                for row in &m.six_term_breakdown {
                    let _ = writeln!(s, "{:<14} {:>42} {:>42}", row.label, z(&row.thm1), z(&row.thm2));
                }
                let _ = writeln!(s, "{:<14} {:>42} {:>42}", "total", z(&m.main_term_thm1), z(&m.main_term_thm2));
                let _ = writeln!(s, "{:<14} {:>42}  (step {}, {} nodes)", "direct", z(&m.direct_value), m.direct_step, m.direct_nodes);
                let _ = writeln!(
                    s,
                    "residual thm1 {}  thm2 {}  thm1 vs thm2 {}  (compare {:?}, tol {:e})",
                    r(m.residual_thm1),
                    r(m.residual_thm2),
                    r(m.gap_thm1_thm2),
                    m.compare,
                    m.tolerance
                );
                for w in &m.warnings {
                    let _ = writeln!(s, "warning: {w}");
                }
            }
            Body::Qdp(q) => {
                let _ = writeln!(s, "qdp  X = {}  Z = {}  H = {}  shifts = {:?}", q.X, q.Z, q.H, q.shifts);
                for p in &q.main_terms {
                    let _ = writeln!(s, "{:<14} {:>42}", p.label, z(&p.value));
                }
                let _ = writeln!(s, "{:<14} {:>42}", "main total", z(&q.main_term_total));
                let _ = writeln!(
                    s,
                    "{:<14} {:>42}  ({} terms, cutoff {}, tail {:.1e})",
                    "brute force",
                    z(&q.brute_force_value),
                    q.brute_force_terms,
                    q.enumeration_cutoff,
                    q.tail_estimate
                );
                let _ = writeln!(s, "residual {}  (tol {:e})", r(q.residual), q.tolerance);
            }
            Body::Afe(a) => {
                let _ = writeln!(s, "afe  t = {}  shifts = {:?}  truncation mn <= {}", a.t, a.shifts, a.truncation);
                for (l, c) in [("lhs", &a.lhs), ("first", &a.first), ("second", &a.second), ("rhs", &a.rhs)] {
                    let _ = writeln!(s, "{:<8} {:>42}", l, z(c));
                }
                let _ = writeln!(s, "residual {}  (tol {:e})", r(a.residual), a.tolerance);
            }
            Body::Verify(v) => {
                for c in &v.results {
                    let _ = writeln!(s, "{} {:<44} {:>10} <= {:e}", if c.pass { "PASS" } else { "FAIL" }, c.name, r(c.residual), c.tolerance);
                }
                let _ = writeln!(s, "{} passed, {} failed", v.passed, v.failed);
            }
        }
        let _ = writeln!(s, "{}  ({:.2} s)", if self.pass { "PASS" } else { "FAIL" }, self.wall_time_s);
        s
    }
}

/// CSV path next to the JSON report.
pub fn csv_path(out: &Path) -> PathBuf {
    let p = out.with_extension("csv");
    if p == out {
        out.with_extension("breakdown.csv")
    } else {
        p
    }
}

/// Writes the JSON document to `out` and the breakdown to `csv_path(out)`.
pub fn emit_report(doc: &Document, out: &Path) -> Result<(), CliError> {
    let io = |p: &Path, e: &dyn std::fmt::Display| CliError::Io(format!("{}: {e}", p.display()));
    std::fs::write(out, doc.to_json()).map_err(|e| io(out, &e))?;
    let cp = csv_path(out);
    let mut w = csv::Writer::from_path(&cp).map_err(|e| io(&cp, &e))?;
    for row in doc.csv_rows() {
        w.write_record(&row).map_err(|e| io(&cp, &e))?;
    }
    w.flush().map_err(|e| io(&cp, &e))
}
