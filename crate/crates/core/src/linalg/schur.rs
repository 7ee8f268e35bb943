//! Complex Schur factorization `A = Q T Qᴴ`.
//!
//! Householder reduction to upper Hessenberg form followed by single-shift
//! QR iteration (Wilkinson shift, explicit Givens sweeps on the active
//! window, exceptional shifts after stagnation).

use num_complex::Complex64;

use super::matrix::{vector_norm, ComplexMatrix};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Unitary `q` and upper-triangular `t` with `a = q·t·qᴴ`.
#[derive(Debug, Clone)]
pub struct SchurForm {
    pub q: ComplexMatrix,
    pub t: ComplexMatrix,
}

impl SchurForm {
    /// Eigenvalues in the order they appear on the diagonal of `t`.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.t.diagonal()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        &(&self.q * &self.t) * &self.q.adjoint()
    }
}

/// Total QR sweep budget for an `n×n` problem.
pub fn sweep_budget(n: usize) -> usize {
    30 * n.max(10)
}

pub fn schur(a: &ComplexMatrix) -> Result<SchurForm> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "Schur factorization needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix entries must be finite".into()));
    }
    let n = a.rows();
    let mut t = a.clone();
    let mut q = ComplexMatrix::identity(n);
    hessenberg(&mut t, &mut q);
    qr_iterate(&mut t, &mut q)?;
    for i in 1..n {
        for j in 0..i {
            t[(i, j)] = ZERO;
        }
    }
    Ok(SchurForm { q, t })
}

/// Reduce `h` to upper Hessenberg form in place, accumulating into `q`.
fn hessenberg(h: &mut ComplexMatrix, q: &mut ComplexMatrix) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        if vector_norm(&x[1..]) == 0.0 {
            continue;
        }
        let alpha_norm = vector_norm(&x);
        let phase = if x[0].norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x[0] / x[0].norm() };
        // v = x + phase·‖x‖·e₁ maps x to −phase·‖x‖·e₁ without cancellation.
        let mut v = x;
        v[0] += phase * alpha_norm;
        let vnorm2 = vector_norm(&v).powi(2);
        let tau = 2.0 / vnorm2;

        // h ← P·h on rows k+1.., columns k..
        for j in k..n {
            let s: Complex64 = v.iter().enumerate().map(|(r, vr)| vr.conj() * h[(k + 1 + r, j)]).sum();
            let s = s * tau;
            for (r, vr) in v.iter().enumerate() {
                h[(k + 1 + r, j)] -= vr * s;
            }
        }
        // h ← h·P and q ← q·P on columns k+1..
        for m in [&mut *h, &mut *q] {
            for i in 0..n {
                let s: Complex64 = v.iter().enumerate().map(|(r, vr)| m[(i, k + 1 + r)] * vr).sum();
                let s = s * tau;
                for (r, vr) in v.iter().enumerate() {
                    m[(i, k + 1 + r)] -= s * vr.conj();
                }
            }
        }
        h[(k + 1, k)] = -phase * alpha_norm;
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
}

#[derive(Clone, Copy)]
struct Givens {
    c: f64,
    s: Complex64,
}

impl Givens {
    /// Rotation `G = [[c, s], [−s̄, c]]` with `G·[a; b] = [r; 0]`.
    fn zeroing(a: Complex64, b: Complex64) -> Givens {
        let an = a.norm();
        let bn = b.norm();
        if bn == 0.0 {
            return Givens { c: 1.0, s: ZERO };
        }
        if an == 0.0 {
            return Givens { c: 0.0, s: Complex64::new(1.0, 0.0) };
        }
        let r = an.hypot(bn);
        Givens { c: an / r, s: (a / an) * b.conj() / r }
    }

    fn apply_left(&self, m: &mut ComplexMatrix, k: usize, cols: std::ops::Range<usize>) {
        for j in cols {
            let u = m[(k, j)];
            let w = m[(k + 1, j)];
            m[(k, j)] = u * self.c + self.s * w;
            m[(k + 1, j)] = -self.s.conj() * u + w * self.c;
        }
    }

    /// `m ← m·Gᴴ` on columns `k, k+1`.
    fn apply_right_adjoint(&self, m: &mut ComplexMatrix, k: usize, rows: std::ops::Range<usize>) {
        for i in rows {
            let u = m[(i, k)];
            let w = m[(i, k + 1)];
            m[(i, k)] = u * self.c + w * self.s.conj();
            m[(i, k + 1)] = -u * self.s + w * self.c;
        }
    }
}

fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let bc = b * c;
    if bc == ZERO {
        return d;
    }
    let root = (half * half + bc).sqrt();
    let den = if (half + root).norm() >= (half - root).norm() { half + root } else { half - root };
    if den == ZERO {
        d
    } else {
        d - bc / den
    }
}

fn qr_iterate(h: &mut ComplexMatrix, q: &mut ComplexMatrix) -> Result<()> {
    let n = h.rows();
    let budget = sweep_budget(n);
    let frob = h.frobenius_norm();
    let small = f64::MIN_POSITIVE * n as f64 / f64::EPSILON;
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n.saturating_sub(1);

    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let sub = abs1(h[(lo, lo - 1)]);
            let mut scale = abs1(h[(lo - 1, lo - 1)]) + abs1(h[(lo, lo)]);
            if scale == 0.0 {
                scale = frob;
            }
            if sub <= f64::EPSILON * scale || sub <= small {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if total >= budget {
            return Err(Error::NoConvergence { budget });
        }
        total += 1;
        since_deflation += 1;

        let mu = if since_deflation.is_multiple_of(10) {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + Complex64::new(0.75 * abs1(h[(hi, hi - 1)]), 0.0)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        for k in lo..=hi {
            h[(k, k)] -= mu;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let g = Givens::zeroing(h[(k, k)], h[(k + 1, k)]);
            g.apply_left(h, k, k..n);
            h[(k + 1, k)] = ZERO;
            rotations.push(g);
        }
        for (offset, g) in rotations.iter().enumerate() {
            let k = lo + offset;
            g.apply_right_adjoint(h, k, 0..(k + 2).min(hi + 1));
            g.apply_right_adjoint(q, k, 0..n);
        }
        for k in lo..=hi {
            h[(k, k)] += mu;
        }
    }
    Ok(())
}
