//! Right/left eigenvectors from a Schur form, and unitary completion of a
//! vector to a basis.

use num_complex::Complex64;

use super::matrix::{vector_norm, ComplexMatrix};
use super::schur::{schur, SchurForm};
use super::svd::smallest_singular_value;
use super::Tolerances;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A simple eigenvalue with unit right (`A·x = λx`) and left
/// (`yᴴ·A = λyᴴ`) eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub lambda: Complex64,
    pub x: Vec<Complex64>,
    pub y: Vec<Complex64>,
}

/// Scale to unit norm and rotate so the largest-modulus entry (first one on
/// near-ties) is real and positive.
pub fn normalize_phase(v: &mut [Complex64]) {
    let norm = vector_norm(v);
    if norm == 0.0 {
        return;
    }
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-12))
        .expect("nonzero vector has a maximal entry");
    let rot = v[pivot].conj() / (v[pivot].norm() * norm);
    for z in v.iter_mut() {
        *z *= rot;
    }
    v[pivot] = Complex64::new(v[pivot].norm(), 0.0);
}

/// Right eigenvector of the upper-triangular `t` for its `k`-th diagonal entry.
fn triangular_right(t: &ComplexMatrix, k: usize) -> Vec<Complex64> {
    let n = t.rows();
    let lambda = t[(k, k)];
    let mut v = vec![ZERO; n];
    v[k] = ONE;
    for i in (0..k).rev() {
        let s: Complex64 = (i + 1..=k).map(|j| t[(i, j)] * v[j]).sum();
        v[i] = -s / (t[(i, i)] - lambda);
    }
    v
}

/// Left eigenvector `u` (`uᴴ·t = λ·uᴴ`) of the upper-triangular `t`.
fn triangular_left(t: &ComplexMatrix, k: usize) -> Vec<Complex64> {
    let n = t.rows();
    let lambda = t[(k, k)];
    // Work with w = conj(u): w·t = λ·w.
    let mut w = vec![ZERO; n];
    w[k] = ONE;
    for j in k + 1..n {
        let s: Complex64 = (k..j).map(|i| w[i] * t[(i, j)]).sum();
        w[j] = -s / (t[(j, j)] - lambda);
    }
    w.iter().map(|z| z.conj()).collect()
}

/// Eigenpair for the `k`-th diagonal entry of a Schur form. The caller is
/// responsible for having checked that the eigenvalue is simple.
pub fn eigenpair_from_schur(s: &SchurForm, k: usize) -> Eigenpair {
    let lambda = s.t[(k, k)];
    let mut x = s.q.mul_vec(&triangular_right(&s.t, k));
    let mut y = s.q.mul_vec(&triangular_left(&s.t, k));
    normalize_phase(&mut x);
    normalize_phase(&mut y);
    Eigenpair { lambda, x, y }
}

/// First pair of diagonal entries of `t` closer than `gap`, if any.
pub fn find_cluster(eigenvalues: &[Complex64], gap: f64) -> Option<(usize, usize)> {
    for i in 0..eigenvalues.len() {
        for j in i + 1..eigenvalues.len() {
            if (eigenvalues[i] - eigenvalues[j]).norm() <= gap {
                return Some((i, j));
            }
        }
    }
    None
}

/// Locate `lambda` among the eigenvalues of `a` and return its eigenpair.
///
/// Fails with [`Error::NotAnEigenvalue`] when `σ_min(A − λI)` exceeds
/// `tol.eig·‖A‖_F`, and with [`Error::ClusteredSpectrum`] when another
/// eigenvalue lies within `tol.cluster·‖A‖_F`.
pub fn right_left_eigenpair(a: &ComplexMatrix, lambda: Complex64, tol: &Tolerances) -> Result<Eigenpair> {
    let s = schur(a)?;
    let (k, _) = locate_eigenvalue(a, &s, lambda, tol)?;
    Ok(eigenpair_from_schur(&s, k))
}

/// Index of the Schur diagonal entry matching `lambda`, after the eigenvalue
/// and simplicity checks. Returns the index and `‖A‖_F`.
fn locate_eigenvalue(
    a: &ComplexMatrix,
    s: &SchurForm,
    lambda: Complex64,
    tol: &Tolerances,
) -> Result<(usize, f64)> {
    let frob = a.frobenius_norm();
    let sigma_min = smallest_singular_value(&a.shifted(lambda))?;
    let eig_tol = tol.eig * frob;
    if sigma_min > eig_tol {
        return Err(Error::NotAnEigenvalue { lambda, sigma_min, tol: eig_tol });
    }
    let ev = s.eigenvalues();
    let k = (0..ev.len())
        .min_by(|&i, &j| (ev[i] - lambda).norm().total_cmp(&(ev[j] - lambda).norm()))
        .expect("nonempty spectrum");
    let gap = tol.cluster * frob;
    if let Some(j) = (0..ev.len()).find(|&j| j != k && (ev[j] - ev[k]).norm() <= gap) {
        return Err(Error::ClusteredSpectrum { first: ev[k], second: ev[j], tol: gap });
    }
    Ok((k, frob))
}

/// Unitary `Q` whose first column is the unit vector `x`.
///
/// A single Householder reflector, rephased; when `x` is already a multiple
/// of `e₁` the result is diagonal.
pub fn unitary_with_first_column(x: &[Complex64]) -> Result<ComplexMatrix> {
    let n = x.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty vector".into()));
    }
    let norm = vector_norm(x);
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput(format!("vector must have unit norm, got {norm}")));
    }
    let x: Vec<Complex64> = x.iter().map(|z| z / norm).collect();
    let head = x[0].norm();
    let phase = if head == 0.0 { ONE } else { x[0] / head };

    if vector_norm(&x[1..]) == 0.0 {
        let mut q = ComplexMatrix::identity(n);
        q[(0, 0)] = phase;
        return Ok(q);
    }

    // H = I − 2vvᴴ/‖v‖² with v = x + phase·e₁ sends x to −phase·e₁, so
    // Q = −phase·H has Q·e₁ = x.
    let mut v = x;
    v[0] += phase;
    let scale = 2.0 / v.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let mut q = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let h = if i == j { ONE } else { ZERO } - v[i] * v[j].conj() * scale;
            q[(i, j)] = -phase * h;
        }
    }
    Ok(q)
}
