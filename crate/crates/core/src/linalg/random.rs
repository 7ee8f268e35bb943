//! Seeded random test ensembles.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::{inner, vector_norm, ComplexMatrix};

/// Standard complex Gaussian, `E|z|² = 1`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Ginibre matrix: independent standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| complex_normal(rng)).collect();
    ComplexMatrix::from_row_major(rows, cols, data).expect("gaussian samples are finite")
}

/// Uniformly distributed unit vector in `ℂⁿ`.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| complex_normal(rng)).collect();
        let norm = vector_norm(&v);
        if norm > 0.0 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-distributed unitary matrix: Gram–Schmidt (applied twice) on the
/// columns of a Ginibre sample.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(n, n, rng);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        for _ in 0..2 {
            for b in &basis {
                let proj = inner(b, &v);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= proj * bi;
                }
            }
        }
        let norm = vector_norm(&v);
        basis.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut q = ComplexMatrix::zeros(n, n);
    for (j, col) in basis.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            q[(i, j)] = z;
        }
    }
    q
}

/// `n` points uniform in the disk of the given radius.
pub fn uniform_disk_points<R: Rng + ?Sized>(n: usize, radius: f64, rng: &mut R) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let theta = 2.0 * std::f64::consts::PI * rng.random::<f64>();
            Complex64::from_polar(r, theta)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::svd::{frobenius_norm, operator_norm};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_norms() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for n in [1usize, 2, 5, 12, 30] {
            let q = random_unitary(n, &mut rng);
            let err = (&(&q.adjoint() * &q) - &ComplexMatrix::identity(n)).frobenius_norm();
            assert!(err <= 1e-12 * n as f64);
            assert!((operator_norm(&q).unwrap() - 1.0).abs() <= 1e-12);
            assert!((frobenius_norm(&q).unwrap() - (n as f64).sqrt()).abs() <= 1e-10);
        }
    }

    #[test]
    fn disk_points_inside() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pts = uniform_disk_points(1000, 2.5, &mut rng);
        assert!(pts.iter().all(|z| z.norm() <= 2.5));
    }
}
