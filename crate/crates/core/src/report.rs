//! Shared report records: per-instance evaluations, CSV rows and the
//! aggregate produced by the randomized verifiers.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::linalg::MatrixFile;

/// `holds` tolerance for operator bounds, relative to max(1, |lhs|, |rhs|).
pub const BOUND_HOLDS_REL_TOL: f64 = 1e-7;
/// `holds` tolerance for vector lemmas.
pub const LEMMA_HOLDS_REL_TOL: f64 = 1e-9;

pub(crate) fn scale_of(lhs: f64, rhs: f64) -> f64 {
    1f64.max(lhs.abs()).max(rhs.abs())
}

/// slack ≥ −tol·max(1, |lhs|, |rhs|).
pub fn holds_within(lhs: f64, rhs: f64, tol: f64) -> bool {
    let slack = rhs - lhs;
    slack.is_finite() && slack >= -tol * scale_of(lhs, rhs)
}

/// One flat output row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CsvRow {
    pub id: String,
    pub alpha: f64,
    pub beta: f64,
    pub r: f64,
    pub n: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

pub const CSV_HEADER: &str = "id,alpha,beta,r,n,lhs,rhs,slack,holds";

impl CsvRow {
    pub fn to_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.id, self.alpha, self.beta, self.r, self.n, self.lhs, self.rhs, self.slack, self.holds
        )
    }
}

pub fn write_csv(mut out: impl Write, rows: &[CsvRow]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.to_line())?;
    }
    Ok(())
}

/// Operands echoed for the worst instance of an id.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct InstanceEcho {
    pub trial: usize,
    pub trial_seed: u64,
    pub dim: usize,
    pub a: MatrixFile,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<MatrixFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<MatrixFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct WorstInstance {
    pub row: CsvRow,
    pub relative_slack: f64,
    pub instance: InstanceEcho,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct IdStats {
    pub id: String,
    pub evaluations: usize,
    pub violations: usize,
    pub min_slack: f64,
    pub min_relative_slack: f64,
    /// Instance with the smallest relative slack.
    pub argmin: Option<WorstInstance>,
}

impl IdStats {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            evaluations: 0,
            violations: 0,
            min_slack: f64::INFINITY,
            min_relative_slack: f64::INFINITY,
            argmin: None,
        }
    }

    pub(crate) fn record(&mut self, row: &CsvRow, echo: impl FnOnce() -> InstanceEcho) {
        self.evaluations += 1;
        if !row.holds {
            self.violations += 1;
        }
        self.min_slack = self.min_slack.min(row.slack);
        let rel = row.slack / scale_of(row.lhs, row.rhs);
        if rel < self.min_relative_slack || self.argmin.is_none() {
            self.min_relative_slack = rel;
            self.argmin = Some(WorstInstance {
                row: row.clone(),
                relative_slack: rel,
                instance: echo(),
            });
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ViolationRecord {
    pub trial: usize,
    pub trial_seed: u64,
    pub row: CsvRow,
}

/// Worst relative residual of one algebraic identity across trials.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct IdentityStats {
    pub name: String,
    pub checks: usize,
    pub failures: usize,
    pub max_relative_residual: f64,
}

impl IdentityStats {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            checks: 0,
            failures: 0,
            max_relative_residual: 0.0,
        }
    }

    pub(crate) fn record(&mut self, rel: f64, tol: f64) {
        self.checks += 1;
        if !(rel <= tol) {
            self.failures += 1;
        }
        self.max_relative_residual = self.max_relative_residual.max(rel);
    }
}

/// Largest relative excess rhs/reference − 1 of a comparison that should be
/// nonpositive. Tracked for information; does not affect `passed`.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ChainStats {
    pub name: String,
    pub checks: usize,
    pub failures: usize,
    pub max_excess: f64,
}

impl ChainStats {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            checks: 0,
            failures: 0,
            max_excess: f64::NEG_INFINITY,
        }
    }

    pub(crate) fn record(&mut self, value: f64, reference: f64, rel_tol: f64) {
        self.checks += 1;
        if !(value <= reference * (1.0 + rel_tol)) {
            self.failures += 1;
        }
        let excess = if reference != 0.0 { value / reference - 1.0 } else { value - reference };
        self.max_excess = self.max_excess.max(excess);
    }
}

/// Aggregate of a randomized verification run.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct VerificationSummary {
    pub kind: String,
    pub seed: u64,
    pub trials: usize,
    pub evaluations: usize,
    pub total_violations: usize,
    pub skipped: usize,
    pub errors: Vec<String>,
    pub per_id: Vec<IdStats>,
    /// The first violations in trial order, capped.
    pub violations: Vec<ViolationRecord>,
    pub identities: Vec<IdentityStats>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub chains: Vec<ChainStats>,
    #[serde(skip)]
    pub rows: Vec<CsvRow>,
}

impl VerificationSummary {
    /// No violations, no identity failures, no evaluation errors.
    pub fn passed(&self) -> bool {
        self.total_violations == 0
            && self.errors.is_empty()
            && self.identities.iter().all(|i| i.failures == 0)
    }

    pub fn stats(&self, id: &str) -> Option<&IdStats> {
        self.per_id.iter().find(|s| s.id == id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn holds_uses_relative_scale() {
        assert!(holds_within(1.0, 1.0, 1e-7));
        assert!(holds_within(1e9 + 10.0, 1e9, 1e-7));
        assert!(!holds_within(1e9 + 1000.0, 1e9, 1e-7));
        assert!(!holds_within(0.5, 0.4, 1e-7));
        assert!(!holds_within(f64::NAN, 1.0, 1e-7));
    }

    #[test]
    fn csv_line_format() {
        let row = CsvRow {
            id: "IN3".into(),
            alpha: 0.5,
            beta: 1.0,
            r: 1.0,
            n: 2,
            lhs: 1.0,
            rhs: 2.0,
            slack: 1.0,
            holds: true,
        };
        let mut buf = Vec::new();
        write_csv(&mut buf, &[row]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "id,alpha,beta,r,n,lhs,rhs,slack,holds\nIN3,0.5,1,1,2,1,2,1,true\n");
    }
}
