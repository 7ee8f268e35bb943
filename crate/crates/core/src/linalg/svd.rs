//! Singular values by one-sided (Hestenes) Jacobi rotations.
//!
//! One-sided Jacobi keeps small singular values to high relative accuracy,
//! which matters here because condition numbers are their reciprocals.

use num_complex::Complex64;

use super::matrix::{inner, vector_norm, ComplexMatrix};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Singular values (descending) and, optionally, the right singular vectors
/// as the columns of a unitary matrix in the same order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub v: Option<ComplexMatrix>,
}

/// One-sided Jacobi SVD. Works on the columns of `m` (or of `mᴴ` when `m` is
/// wide; right vectors are then unavailable and `v` is `None`).
pub fn svd(m: &ComplexMatrix, want_v: bool) -> Result<Svd> {
    if !m.is_finite() {
        return Err(Error::InvalidInput("matrix entries must be finite".into()));
    }
    if m.rows() < m.cols() {
        let s = svd(&m.adjoint(), false)?;
        return Ok(Svd { singular_values: s.singular_values, v: None });
    }
    let rows = m.rows();
    let n = m.cols();
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| m.column(j)).collect();
    let mut v: Option<Vec<Vec<Complex64>>> = want_v.then(|| {
        (0..n)
            .map(|j| {
                let mut e = vec![Complex64::new(0.0, 0.0); n];
                e[j] = Complex64::new(1.0, 0.0);
                e
            })
            .collect()
    });
    let tol = f64::EPSILON * (rows as f64).sqrt();
    let mut norms: Vec<f64> = cols.iter().map(|c| vector_norm(c).powi(2)).collect();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = inner(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, c, s, phase);
                if let Some(v) = v.as_mut() {
                    rotate(v, p, q, c, s, phase);
                }
                norms[p] = vector_norm(&cols[p]).powi(2);
                norms[q] = vector_norm(&cols[q]).powi(2);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { budget: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let sigma: Vec<f64> = cols.iter().map(|c| vector_norm(c)).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]).then(i.cmp(&j)));
    let singular_values = order.iter().map(|&i| sigma[i]).collect();
    let v = v.map(|v| {
        let mut out = ComplexMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            for i in 0..n {
                out[(i, dst)] = v[src][i];
            }
        }
        out
    });
    Ok(Svd { singular_values, v })
}

/// `p ← c·p − s·(q·e^{−iφ})`, `q ← s·p + c·(q·e^{−iφ})`.
fn rotate(cols: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let (head, tail) = cols.split_at_mut(q);
    let cp = &mut head[p];
    let cq = &mut tail[0];
    let unphase = phase.conj();
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let a = *x;
        let b = *y * unphase;
        *x = a * c - b * s;
        *y = a * s + b * c;
    }
}

pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(svd(m, false)?.singular_values)
}

/// Least singular value `σ_min`.
pub fn smallest_singular_value(m: &ComplexMatrix) -> Result<f64> {
    Ok(*singular_values(m)?.last().expect("matrices are nonempty"))
}

/// Largest singular value.
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?[0])
}

pub fn frobenius_norm(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_finite() {
        return Err(Error::InvalidInput("matrix entries must be finite".into()));
    }
    Ok(m.frobenius_norm())
}

/// Unit right singular vector belonging to `σ_min` of a square matrix.
pub fn smallest_right_singular_vector(m: &ComplexMatrix) -> Result<(f64, Vec<Complex64>)> {
    let s = svd(m, true)?;
    let v = s.v.ok_or_else(|| Error::DimensionMismatch("matrix must not be wide".into()))?;
    let last = v.cols() - 1;
    Ok((s.singular_values[last], v.column(last)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{ginibre, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_examples() {
        let id = ComplexMatrix::identity(2);
        assert_eq!(smallest_singular_value(&id).unwrap(), 1.0);
        let d = ComplexMatrix::from_real_rows(&[&[3.0, 0.0], &[0.0, 4.0]]).unwrap();
        assert_eq!(smallest_singular_value(&d).unwrap(), 3.0);
        assert_eq!(operator_norm(&d).unwrap(), 4.0);
        let nil = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(smallest_singular_value(&nil).unwrap(), 0.0);
        assert_eq!(operator_norm(&nil).unwrap(), 1.0);
        assert_eq!(frobenius_norm(&nil).unwrap(), 1.0);
        let d12 = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0]]).unwrap();
        assert_eq!(operator_norm(&d12).unwrap(), 2.0);
        assert!((frobenius_norm(&d12).unwrap() - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn known_spectrum() {
        // U·diag(s)·Wᴴ with random unitaries has singular values s.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = [7.0, 3.0, 1.0, 1e-3, 1e-9];
        let u = random_unitary(5, &mut rng);
        let w = random_unitary(5, &mut rng);
        let d = ComplexMatrix::from_diagonal(&s.map(|x| Complex64::new(x, 0.0)));
        let m = &(&u * &d) * &w.adjoint();
        let got = singular_values(&m).unwrap();
        for (g, e) in got.iter().zip(&s) {
            assert!((g - e).abs() <= 1e-13 * 7.0, "{g} vs {e}");
        }
        // Relative accuracy on the smallest value is well below 1e-4 even at 1e-9.
        assert!((got[4] - 1e-9).abs() / 1e-9 < 1e-4);
    }

    #[test]
    fn wide_and_tall() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = ginibre(3, 6, &mut rng);
        let sa = singular_values(&a).unwrap();
        let sah = singular_values(&a.adjoint()).unwrap();
        assert_eq!(sa.len(), 3);
        for (x, y) in sa.iter().zip(&sah) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn null_vector() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        let (s, v) = smallest_right_singular_vector(&a).unwrap();
        assert!(s < 1e-15);
        let av = a.mul_vec(&v);
        assert!(vector_norm(&av) < 1e-15);
        assert!((vector_norm(&v) - 1.0).abs() < 1e-15);
    }
}
