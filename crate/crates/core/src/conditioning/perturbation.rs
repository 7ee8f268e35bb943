//! Empirical check of the first-order perturbation bounds
//! `|λ̂ − λ| ≤ ε·κ_λ + O(ε²)` and `∠(x, x̂) ≤ ε·κ_x + O(ε²)`, with
//! perturbations of size `ε·‖A‖_*`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{condition_report, NormKind};
use crate::error::{Error, Result};
use crate::linalg::random::ginibre;
use crate::linalg::{eigenpair_from_schur, inner, operator_norm, schur, vector_norm, ComplexMatrix, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationConfig {
    pub epsilon: f64,
    pub trials: usize,
    pub norm: NormKind,
    pub seed: u64,
}

/// Worst observed ratios for one eigenpair, next to its condition numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationRow {
    pub lambda: Complex64,
    pub kappa_lambda: f64,
    pub kappa_x: f64,
    /// `max |λ̂ − λ| / (ε‖A‖_*)`
    pub max_shift_ratio: f64,
    /// `max ∠(x, x̂) / (ε‖A‖_*)`
    pub max_angle_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationTable {
    pub epsilon: f64,
    pub norm: NormKind,
    pub rows: Vec<PerturbationRow>,
    pub valid_trials: usize,
    /// Trials dropped because eigenvalue matching was ambiguous.
    pub excluded_trials: usize,
}

impl PerturbationTable {
    /// Smallest `c` with every ratio `≤ κ·(1 + c·ε)`.
    pub fn slack(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| [(r.max_shift_ratio, r.kappa_lambda), (r.max_angle_ratio, r.kappa_x)])
            .map(|(ratio, kappa)| ((ratio / kappa - 1.0) / self.epsilon).max(0.0))
            .fold(0.0, f64::max)
    }
}

/// Principal angle between the lines spanned by unit vectors `x` and `xh`,
/// computed as `atan2(‖xh − (xᴴxh)x‖, |xᴴxh|)` to stay accurate for tiny angles.
pub fn principal_angle(x: &[Complex64], xh: &[Complex64]) -> f64 {
    let c = inner(x, xh);
    let residual: Vec<Complex64> = xh.iter().zip(x).map(|(a, b)| a - c * b).collect();
    vector_norm(&residual).atan2(c.norm())
}

/// Relative gap under which two candidate matches count as equidistant.
const AMBIGUITY: f64 = 1e-9;

/// For each original eigenvalue, index of the nearest perturbed one, or
/// `None` if the matching is ambiguous or not one-to-one.
fn match_eigenvalues(original: &[Complex64], perturbed: &[Complex64]) -> Option<Vec<usize>> {
    let mut taken = vec![false; perturbed.len()];
    let mut out = Vec::with_capacity(original.len());
    for &lambda in original {
        let mut best = (f64::INFINITY, usize::MAX);
        let mut second = f64::INFINITY;
        for (j, &mu) in perturbed.iter().enumerate() {
            let d = (mu - lambda).norm();
            if d < best.0 {
                second = best.0;
                best = (d, j);
            } else if d < second {
                second = d;
            }
        }
        if second - best.0 <= AMBIGUITY * second || taken[best.1] {
            return None;
        }
        taken[best.1] = true;
        out.push(best.1);
    }
    Some(out)
}

/// Run `cfg.trials` independently seeded perturbations `A + ε‖A‖_*·E` with
/// Ginibre `E` normalized to `‖E‖_* = 1`, and record the worst shift and
/// angle ratios for each eigenpair.
pub fn perturbation_experiment(a: &ComplexMatrix, cfg: &PerturbationConfig, tol: &Tolerances) -> Result<PerturbationTable> {
    if !(cfg.epsilon > 0.0 && cfg.epsilon.is_finite()) {
        return Err(Error::InvalidInput(format!("epsilon must be positive, got {}", cfg.epsilon)));
    }
    let report = condition_report(a, tol)?;
    let norm_a = report.norm(cfg.norm);
    let lambdas: Vec<Complex64> = report.per_eigenpair.iter().map(|e| e.lambda).collect();
    let mut min_gap = f64::INFINITY;
    for i in 0..lambdas.len() {
        for j in 0..i {
            min_gap = min_gap.min((lambdas[i] - lambdas[j]).norm());
        }
    }
    if cfg.epsilon * norm_a * 10.0 > min_gap {
        return Err(Error::InvalidInput(format!(
            "epsilon {} too large: need ε·‖A‖ ≤ min gap / 10 = {}",
            cfg.epsilon,
            min_gap / 10.0
        )));
    }
    let vectors: Vec<Vec<Complex64>> = report.per_eigenpair.iter().map(|e| e.x.to_dense()).collect();
    let n = a.rows();
    let size = cfg.epsilon * norm_a;

    let trials: Vec<Option<Vec<(f64, f64)>>> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| -> Result<Option<Vec<(f64, f64)>>> {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(t));
            let e = ginibre(n, n, &mut rng);
            let e_norm = match cfg.norm {
                NormKind::Frobenius => e.frobenius_norm(),
                NormKind::Operator => operator_norm(&e)?,
            };
            let perturbed = a + &e.scaled(Complex64::new(size / e_norm, 0.0));
            let s = schur(&perturbed)?;
            let Some(matching) = match_eigenvalues(&lambdas, &s.eigenvalues()) else {
                return Ok(None);
            };
            let ratios = matching
                .iter()
                .enumerate()
                .map(|(i, &j)| {
                    let hat = eigenpair_from_schur(&s, j);
                    let shift = (hat.lambda - lambdas[i]).norm() / size;
                    let angle = principal_angle(&vectors[i], &hat.x) / size;
                    (shift, angle)
                })
                .collect();
            Ok(Some(ratios))
        })
        .collect::<Result<_>>()?;

    let mut rows: Vec<PerturbationRow> = report
        .per_eigenpair
        .iter()
        .map(|e| PerturbationRow {
            lambda: e.lambda,
            kappa_lambda: e.kappa_lambda,
            kappa_x: e.kappa_x,
            max_shift_ratio: 0.0,
            max_angle_ratio: 0.0,
        })
        .collect();
    let mut valid = 0;
    for ratios in trials.iter().flatten() {
        valid += 1;
        for (row, &(shift, angle)) in rows.iter_mut().zip(ratios) {
            row.max_shift_ratio = row.max_shift_ratio.max(shift);
            row.max_angle_ratio = row.max_angle_ratio.max(angle);
        }
    }
    Ok(PerturbationTable {
        epsilon: cfg.epsilon,
        norm: cfg.norm,
        rows,
        valid_trials: valid,
        excluded_trials: cfg.trials - valid,
    })
}
