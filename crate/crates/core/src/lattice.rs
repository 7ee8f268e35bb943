//! The unit-side triangular lattice `{ (a + b/2) + i·b·√3/2 : a, b ∈ ℤ }`,
//! finite point configurations, and lattice-point counts in disks.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `√3 / 2`, the imaginary part of the second generator and the area of a
/// fundamental cell.
pub const HALF_SQRT3: f64 = 0.866_025_403_784_438_6;

/// Determinant of the generator matrix `[[1, 1/2], [0, √3/2]]`.
pub const LATTICE_DET: f64 = HALF_SQRT3;

/// Leading coefficient of the lattice count, `2π/√3`.
pub fn lattice_density() -> f64 {
    PI / LATTICE_DET
}

/// A point of the triangular lattice with its integer coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticePoint {
    pub a: i64,
    pub b: i64,
    pub z: Complex64,
}

impl LatticePoint {
    pub fn new(a: i64, b: i64) -> Self {
        let z = Complex64::new(a as f64 + 0.5 * b as f64, b as f64 * HALF_SQRT3);
        LatticePoint { a, b, z }
    }

    /// `|z|²` computed exactly as the integer `a² + ab + b²`.
    pub fn norm_sq(&self) -> i64 {
        self.a * self.a + self.a * self.b + self.b * self.b
    }

    pub fn modulus(&self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }

    /// Argument in `[0, 2π)`.
    pub fn angle(&self) -> f64 {
        if self.a == 0 && self.b == 0 {
            return 0.0;
        }
        let t = self.z.im.atan2(self.z.re);
        if t < 0.0 {
            t + 2.0 * PI
        } else {
            t
        }
    }

    /// Declared enumeration order: modulus, then argument, then `(a, b)`.
    fn order(&self, other: &Self) -> Ordering {
        self.norm_sq()
            .cmp(&other.norm_sq())
            .then_with(|| self.angle().total_cmp(&other.angle()))
            .then_with(|| (self.a, self.b).cmp(&(other.a, other.b)))
    }
}

/// A finite, nonempty list of complex points with its minimum pairwise
/// separation cached at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    points: Vec<Complex64>,
    min_separation: Option<f64>,
}

impl Configuration {
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("configuration must contain at least one point".into()));
        }
        if let Some(k) = points.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput(format!("point {k} is not finite")));
        }
        let min_separation = closest_pair(&points).map(|(d, _, _)| d);
        Ok(Configuration { points, min_separation })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Complex64> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `min_{i≠j} |z_i − z_j|`, or `None` for a single point.
    pub fn min_separation(&self) -> Option<f64> {
        self.min_separation
    }

    /// Indices `(i, j)`, `i < j`, of a pair attaining the minimum separation.
    pub fn closest_pair(&self) -> Option<(usize, usize)> {
        closest_pair(&self.points).map(|(_, i, j)| (i, j))
    }

    /// Distance from each point to its nearest other point.
    pub fn nearest_neighbor_distances(&self) -> Option<Vec<f64>> {
        let n = self.points.len();
        if n < 2 {
            return None;
        }
        let order = sorted_by_real_part(&self.points);
        let mut best = vec![f64::INFINITY; n];
        for (pos, &i) in order.iter().enumerate() {
            let zi = self.points[i];
            for &j in &order[pos + 1..] {
                if self.points[j].re - zi.re >= best[i] {
                    break;
                }
                let d = (zi - self.points[j]).norm();
                best[i] = best[i].min(d);
                best[j] = best[j].min(d);
            }
            for &j in order[..pos].iter().rev() {
                if zi.re - self.points[j].re >= best[i] {
                    break;
                }
                best[i] = best[i].min((zi - self.points[j]).norm());
            }
        }
        Some(best)
    }

    pub fn centroid(&self) -> Complex64 {
        self.points.iter().sum::<Complex64>() / self.points.len() as f64
    }

    pub fn max_modulus(&self) -> f64 {
        self.points.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Every point multiplied by `factor` (scaling and rotation).
    pub fn mapped(&self, factor: Complex64) -> Result<Self> {
        Configuration::new(self.points.iter().map(|z| z * factor).collect())
    }

    pub fn translated(&self, shift: Complex64) -> Result<Self> {
        Configuration::new(self.points.iter().map(|z| z + shift).collect())
    }
}

fn sorted_by_real_part(points: &[Complex64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| {
        points[i]
            .re
            .total_cmp(&points[j].re)
            .then_with(|| points[i].im.total_cmp(&points[j].im))
            .then_with(|| i.cmp(&j))
    });
    order
}

/// Sweep over points sorted by real part. Returns the same minimum as the
/// brute-force double loop since `|Δz| ≥ |Δre|` survives rounding.
fn closest_pair(points: &[Complex64]) -> Option<(f64, usize, usize)> {
    if points.len() < 2 {
        return None;
    }
    let order = sorted_by_real_part(points);
    let mut best = (f64::INFINITY, 0, 0);
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if points[j].re - points[i].re >= best.0 {
                break;
            }
            let d = (points[i] - points[j]).norm();
            if d < best.0 {
                best = (d, i.min(j), i.max(j));
            }
        }
    }
    Some(best)
}

fn check_radius(r: f64) -> Result<()> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::InvalidInput(format!("radius must be finite and non-negative, got {r}")));
    }
    Ok(())
}

/// All lattice points in the open (`|z| < r`) or closed disk of radius `r`
/// about the origin, in the declared deterministic order.
///
/// The closed disk admits points with `|z| ≤ r·(1 + 8ε)` so that exact
/// boundary hits such as `r = 1` are not lost to rounding.
pub fn enumerate_lattice_in_disk(r: f64, closed: bool) -> Result<Vec<LatticePoint>> {
    check_radius(r)?;
    let limit = if closed { r * (1.0 + 8.0 * f64::EPSILON) } else { r };
    let b_max = (limit / HALF_SQRT3).floor() as i64 + 1;
    let mut out = Vec::new();
    for b in -b_max..=b_max {
        let half_b = 0.5 * b as f64;
        let a_lo = (-limit - half_b).floor() as i64 - 1;
        let a_hi = (limit - half_b).ceil() as i64 + 1;
        for a in a_lo..=a_hi {
            let p = LatticePoint::new(a, b);
            let m = p.modulus();
            let inside = if closed { m <= limit } else { m < limit };
            if inside {
                out.push(p);
            }
        }
    }
    out.sort_by(LatticePoint::order);
    Ok(out)
}

/// Number of lattice points in the closed disk of radius `r`. This is a lower
/// bound for the largest 1-separated set in that disk, not its exact value.
pub fn lattice_count(r: f64) -> Result<usize> {
    Ok(enumerate_lattice_in_disk(r, true)?.len())
}

/// The first `n` lattice points by increasing modulus, ties broken by
/// argument in `[0, 2π)` and then by `(a, b)`.
pub fn first_n_lattice_coordinates(n: usize) -> Result<Vec<LatticePoint>> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    // Invert the area law and pad; grow until enough points are found.
    let mut r = (n as f64 / lattice_density()).sqrt() + 2.0;
    loop {
        let mut pts = enumerate_lattice_in_disk(r, true)?;
        if pts.len() >= n {
            pts.truncate(n);
            return Ok(pts);
        }
        r *= 1.25;
    }
}

/// The extremal configuration: first `n` triangular-lattice points.
pub fn first_n_lattice_points(n: usize) -> Result<Configuration> {
    let pts = first_n_lattice_coordinates(n)?;
    // Distinct lattice points are at distance sqrt(k) for integers k ≥ 1, and
    // for n ≥ 2 the origin and a unit-modulus neighbour are both present.
    let min_separation = if n >= 2 { Some(1.0) } else { None };
    Ok(Configuration {
        points: pts.into_iter().map(|p| p.z).collect(),
        min_separation,
    })
}

/// Shift a configuration so its center of mass is the origin.
pub fn translate_to_centroid(c: &Configuration) -> Configuration {
    let mean = c.centroid();
    let points: Vec<Complex64> = c.points.iter().map(|z| z - mean).collect();
    let min_separation = closest_pair(&points).map(|(d, _, _)| d);
    Configuration { points, min_separation }
}
