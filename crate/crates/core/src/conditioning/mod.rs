//! Eigenvalue and eigenvector condition numbers.
//!
//! For an eigenpair `(λ, x)` let `Q` be unitary with first column `x`; then
//!
//! ```text
//! Qᴴ A Q = [ λ  wᴴ ]
//!          [ 0  B  ]
//! ```
//!
//! and `κ_x = 1/σ_min(B − λI)`, `κ_λ = ‖y‖‖x‖/|yᴴx|` with `y` the left
//! eigenvector. `κ_max,* = max_x κ_x·‖A‖_*` over all eigenvectors.

mod perturbation;

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremal::{p_norm, Exponent};
use crate::lattice::Configuration;
use crate::linalg::{
    eigenpair_from_schur, find_cluster, inner, operator_norm, right_left_eigenpair, schur,
    smallest_right_singular_vector, smallest_singular_value, unitary_with_first_column, vector_norm, ComplexMatrix,
    Tolerances,
};

pub use perturbation::{perturbation_experiment, PerturbationConfig, PerturbationRow, PerturbationTable};

/// Below this `|yᴴx|` (unit vectors) the eigenvalue condition number is
/// reported as `+∞`.
pub const MIN_OVERLAP: f64 = 1e-14;

/// Which matrix norm scales `κ_x` in `κ_max,*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormKind {
    Frobenius,
    Operator,
}

impl std::str::FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "frob" | "frobenius" => Ok(NormKind::Frobenius),
            "op" | "operator" => Ok(NormKind::Operator),
            other => Err(Error::InvalidInput(format!("unknown norm {other:?}, expected frob or op"))),
        }
    }
}

/// A unit eigenvector. Diagonal matrices have standard basis vectors, which
/// are kept implicit so large diagonal reports stay `O(n)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Eigenvector {
    Dense(Vec<Complex64>),
    Basis { index: usize, dim: usize },
}

impl Eigenvector {
    pub fn to_dense(&self) -> Vec<Complex64> {
        match self {
            Eigenvector::Dense(v) => v.clone(),
            Eigenvector::Basis { index, dim } => {
                let mut v = vec![Complex64::new(0.0, 0.0); *dim];
                v[*index] = Complex64::new(1.0, 0.0);
                v
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenpairReport {
    pub lambda: Complex64,
    pub x: Eigenvector,
    pub y: Eigenvector,
    pub kappa_lambda: f64,
    pub kappa_x: f64,
    /// `‖Ax − λx‖`
    pub residual_right: f64,
    /// `‖yᴴA − λyᴴ‖`
    pub residual_left: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub per_eigenpair: Vec<EigenpairReport>,
    pub kappa_max_frob: f64,
    pub kappa_max_op: f64,
    pub norm_frob: f64,
    pub norm_op: f64,
}

impl ConditionReport {
    fn from_pairs(per_eigenpair: Vec<EigenpairReport>, norm_frob: f64, norm_op: f64) -> Self {
        let worst = per_eigenpair.iter().map(|e| e.kappa_x).fold(0.0, f64::max);
        ConditionReport {
            per_eigenpair,
            kappa_max_frob: worst * norm_frob,
            kappa_max_op: worst * norm_op,
            norm_frob,
            norm_op,
        }
    }

    pub fn kappa_max(&self, norm: NormKind) -> f64 {
        match norm {
            NormKind::Frobenius => self.kappa_max_frob,
            NormKind::Operator => self.kappa_max_op,
        }
    }

    pub fn norm(&self, norm: NormKind) -> f64 {
        match norm {
            NormKind::Frobenius => self.norm_frob,
            NormKind::Operator => self.norm_op,
        }
    }
}

fn argument(z: Complex64) -> f64 {
    let t = z.arg();
    if t < 0.0 {
        t + 2.0 * PI
    } else {
        t
    }
}

/// Report order: modulus, then argument in `[0, 2π)`.
fn spectral_order(a: Complex64, b: Complex64) -> Ordering {
    a.norm().total_cmp(&b.norm()).then_with(|| argument(a).total_cmp(&argument(b)))
}

fn sorted_indices(values: &[Complex64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| spectral_order(values[i], values[j]).then(i.cmp(&j)));
    idx
}

fn kappa_lambda_from(x: &[Complex64], y: &[Complex64]) -> f64 {
    let overlap = inner(y, x).norm() / (vector_norm(x) * vector_norm(y));
    if overlap < MIN_OVERLAP {
        f64::INFINITY
    } else {
        1.0 / overlap
    }
}

/// `κ_x` from a known unit eigenvector `x`, through the block form of
/// `Qᴴ A Q` with `Q` completing `x` to a unitary basis.
///
/// `σ_min(B − λI)` at or below `ε·‖A‖_F` is numerically zero and gives `+∞`.
pub fn kappa_x_from_eigenvector(
    a: &ComplexMatrix,
    lambda: Complex64,
    x: &[Complex64],
    tol: &Tolerances,
) -> Result<f64> {
    let n = a.rows();
    if !a.is_square() {
        return Err(Error::DimensionMismatch("eigenvector conditioning needs a square matrix".into()));
    }
    if n < 2 {
        return Err(Error::InvalidInput("κ_x is undefined for 1x1 matrices".into()));
    }
    let frob = a.frobenius_norm();
    let q = unitary_with_first_column(x)?;
    let m = &(&q.adjoint() * a) * &q;
    let residual = vector_norm(&m.column(0)[1..]);
    let block_tol = tol.block * frob;
    if residual > block_tol {
        return Err(Error::BlockFormViolation { residual, tol: block_tol });
    }
    let b = m.submatrix(1, n, 1, n).shifted(lambda);
    let sigma = smallest_singular_value(&b)?;
    if sigma <= f64::EPSILON * frob {
        Ok(f64::INFINITY)
    } else {
        Ok(1.0 / sigma)
    }
}

/// Eigenvalue condition number `‖y‖‖x‖/|yᴴx|` of a simple eigenvalue.
pub fn kappa_lambda(a: &ComplexMatrix, lambda: Complex64, tol: &Tolerances) -> Result<f64> {
    let e = right_left_eigenpair(a, lambda, tol)?;
    Ok(kappa_lambda_from(&e.x, &e.y))
}

/// Eigenvector condition number `1/σ_min(B − λI)`.
///
/// For a repeated eigenvalue the eigenvector is taken from the null space
/// of `A − λI`, and the result is `+∞` when `B − λI` is singular.
pub fn kappa_x(a: &ComplexMatrix, lambda: Complex64, tol: &Tolerances) -> Result<f64> {
    if a.is_square() && a.rows() < 2 {
        return Err(Error::InvalidInput("κ_x is undefined for 1x1 matrices".into()));
    }
    match right_left_eigenpair(a, lambda, tol) {
        Ok(e) => kappa_x_from_eigenvector(a, e.lambda, &e.x, tol),
        Err(Error::ClusteredSpectrum { .. }) => {
            let (_, x) = smallest_right_singular_vector(&a.shifted(lambda))?;
            kappa_x_from_eigenvector(a, lambda, &x, tol)
        }
        Err(e) => Err(e),
    }
}

/// Per-eigenpair condition numbers and `κ_max,Frob`, `κ_max,op` of a general
/// square matrix with simple spectrum.
pub fn condition_report(a: &ComplexMatrix, tol: &Tolerances) -> Result<ConditionReport> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!("expected a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    if a.rows() < 2 {
        return Err(Error::InvalidInput("condition reports need n ≥ 2".into()));
    }
    let s = schur(a)?;
    let ev = s.eigenvalues();
    let norm_frob = a.frobenius_norm();
    let gap = tol.cluster * norm_frob;
    if let Some((i, j)) = find_cluster(&ev, gap) {
        return Err(Error::ClusteredSpectrum { first: ev[i], second: ev[j], tol: gap });
    }
    let norm_op = operator_norm(a)?;
    let pairs = sorted_indices(&ev)
        .into_par_iter()
        .map(|k| {
            let e = eigenpair_from_schur(&s, k);
            let kappa_x = kappa_x_from_eigenvector(a, e.lambda, &e.x, tol)?;
            let ax = a.mul_vec(&e.x);
            let right: Vec<Complex64> = ax.iter().zip(&e.x).map(|(p, q)| p - e.lambda * q).collect();
            let ya = a.vec_adjoint_mul(&e.y);
            let left: Vec<Complex64> = ya.iter().zip(&e.y).map(|(p, q)| p - e.lambda * q.conj()).collect();
            Ok(EigenpairReport {
                lambda: e.lambda,
                kappa_lambda: kappa_lambda_from(&e.x, &e.y),
                kappa_x,
                residual_right: vector_norm(&right),
                residual_left: vector_norm(&left),
                x: Eigenvector::Dense(e.x),
                y: Eigenvector::Dense(e.y),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConditionReport::from_pairs(pairs, norm_frob, norm_op))
}

/// Condition report of `Diag(z₁,…,z_n)` without forming the matrix:
/// `κ_λ = 1`, `κ_{e_i} = 1/min_{j≠i}|z_i − z_j|`.
pub fn condition_report_diagonal(c: &Configuration) -> Result<ConditionReport> {
    let n = c.len();
    if n < 2 {
        return Err(Error::InvalidInput("condition reports need n ≥ 2".into()));
    }
    if c.min_separation() == Some(0.0) {
        let (i, j) = c.closest_pair().expect("n ≥ 2");
        return Err(Error::DuplicatePoints { first: i, second: j, value: c.points()[i] });
    }
    let z = c.points();
    let nn = c.nearest_neighbor_distances().expect("n ≥ 2");
    // Same evaluation as the separation functional, so S_2 and S_∞ agree exactly.
    let norm_frob = p_norm(z, Exponent::Finite(2.0));
    let norm_op = p_norm(z, Exponent::Infinity);
    let pairs = sorted_indices(z)
        .into_iter()
        .map(|i| EigenpairReport {
            lambda: z[i],
            x: Eigenvector::Basis { index: i, dim: n },
            y: Eigenvector::Basis { index: i, dim: n },
            kappa_lambda: 1.0,
            kappa_x: 1.0 / nn[i],
            residual_right: 0.0,
            residual_left: 0.0,
        })
        .collect();
    let mut report = ConditionReport::from_pairs(pairs, norm_frob, norm_op);
    // Use the cached separation so lattice spectra get their exact value.
    let gap = c.min_separation().expect("n ≥ 2");
    report.kappa_max_frob = norm_frob / gap;
    report.kappa_max_op = norm_op / gap;
    Ok(report)
}
