use std::fmt;

use super::SimLog;
use crate::error::{Error, Result};

/// Position tracking errors, m.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorMetrics {
    /// `||pos(r_d) - pos(r')||` per step: what the controller sees.
    pub observed: Vec<f64>,
    /// `||pos(r_d) - pos(r)||` per step: what the arm actually does.
    pub actual: Vec<f64>,
    pub mean_observed: f64,
    pub mean_actual: f64,
    pub max_observed: f64,
    pub max_actual: f64,
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

pub fn compute_metrics(log: &SimLog) -> Result<ErrorMetrics> {
    if log.is_empty() {
        return Err(Error::LogTooShort(0));
    }
    let observed: Vec<f64> = log
        .rows()
        .iter()
        .map(|r| (r.r_d.position - r.r_prime.position).norm())
        .collect();
    let actual: Vec<f64> = log
        .rows()
        .iter()
        .map(|r| (r.r_d.position - r.r.position).norm())
        .collect();
    Ok(ErrorMetrics {
        mean_observed: mean(&observed),
        mean_actual: mean(&actual),
        max_observed: max(&observed),
        max_actual: max(&actual),
        observed,
        actual,
    })
}

/// Euclidean discrepancy of one column group between two runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnDiscrepancy {
    pub column: &'static str,
    /// Largest per-step norm.
    pub max: f64,
    /// Mean per-step norm.
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunComparison {
    pub columns: Vec<ColumnDiscrepancy>,
}

impl RunComparison {
    pub fn column(&self, name: &str) -> Option<&ColumnDiscrepancy> {
        self.columns.iter().find(|c| c.column == name)
    }

    /// Max over time of `||q~_a - q~_b||`.
    pub fn max_q_tilde(&self) -> f64 {
        self.column("q_tilde").map(|c| c.max).unwrap_or(f64::NAN)
    }

    pub fn max_q(&self) -> f64 {
        self.column("q").map(|c| c.max).unwrap_or(f64::NAN)
    }
}

impl fmt::Display for RunComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<10} {:>24} {:>24}", "column", "max", "mean")?;
        for c in &self.columns {
            writeln!(f, "{:<10} {:>24.16e} {:>24.16e}", c.column, c.max, c.mean)?;
        }
        Ok(())
    }
}

/// Column-by-column discrepancies between two logs on the same time grid.
/// Orientation differences use the short arc.
pub fn compare_runs(a: &SimLog, b: &SimLog) -> Result<RunComparison> {
    if a.len() != b.len() {
        return Err(Error::GridMismatch(format!("{} vs {} samples", a.len(), b.len())));
    }
    if a.is_empty() {
        return Err(Error::LogTooShort(0));
    }
    if a.dof() != b.dof() {
        return Err(Error::GridMismatch(format!("{} vs {} joints", a.dof(), b.dof())));
    }
    for (k, (ra, rb)) in a.rows().iter().zip(b.rows()).enumerate() {
        if (ra.t - rb.t).abs() > 1e-12 * ra.t.abs().max(1.0) {
            return Err(Error::GridMismatch(format!("sample {k}: t = {} vs {}", ra.t, rb.t)));
        }
    }

    type Extract = fn(&super::LogRow, &super::LogRow) -> f64;
    let groups: [(&'static str, Extract); 9] = [
        ("q", |x, y| (&*x.q - &*y.q).norm()),
        ("q_tilde", |x, y| (&*x.q_tilde - &*y.q_tilde).norm()),
        ("u", |x, y| (&*x.u - &*y.u).norm()),
        ("u_tilde", |x, y| (&*x.u_tilde - &*y.u_tilde).norm()),
        ("r", |x, y| x.r.difference(&y.r).norm()),
        ("r_prime", |x, y| x.r_prime.difference(&y.r_prime).norm()),
        ("r_d", |x, y| x.r_d.difference(&y.r_d).norm()),
        ("r_hat", |x, y| x.r_hat.difference(&y.r_hat).norm()),
        ("beta_hat", |x, y| (x.beta_hat - y.beta_hat).abs()),
    ];
    let columns = groups
        .iter()
        .map(|(name, f)| {
            let d: Vec<f64> = a.rows().iter().zip(b.rows()).map(|(x, y)| f(x, y)).collect();
            ColumnDiscrepancy {
                column: name,
                max: max(&d),
                mean: mean(&d),
            }
        })
        .collect();
    Ok(RunComparison { columns })
}
