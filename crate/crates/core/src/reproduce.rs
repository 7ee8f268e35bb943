//! Headline constants for diagonal matrices built from the first `n`
//! lattice points: `κ_max,F / n → 3^{1/4}/(2√π)` and
//! `κ_max,op / √n → 3^{1/4}/√(2π)`.

use serde::Serialize;

use crate::conditioning::{condition_report_diagonal, NormKind};
use crate::error::{Error, Result};
use crate::extremal::{AsymptoticRow, Exponent};
use crate::lattice::first_n_lattice_points;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproduceRow {
    pub norm: NormKind,
    /// `κ_max` in this norm.
    pub kappa_max: f64,
    pub row: AsymptoticRow,
}

impl ReproduceRow {
    pub fn relative_deviation(&self) -> f64 {
        self.row.relative_deviation()
    }
}

/// Frobenius row first, then operator.
pub fn reproduce(n: usize) -> Result<Vec<ReproduceRow>> {
    if n < 100 {
        return Err(Error::InvalidInput(format!("reproduce needs n ≥ 100, got {n}")));
    }
    let report = condition_report_diagonal(&first_n_lattice_points(n)?)?;
    Ok([(NormKind::Frobenius, Exponent::Finite(2.0)), (NormKind::Operator, Exponent::Infinity)]
        .into_iter()
        .map(|(norm, p)| {
            let kappa_max = report.kappa_max(norm);
            ReproduceRow { norm, kappa_max, row: AsymptoticRow::new(n, kappa_max, p) }
        })
        .collect())
}
