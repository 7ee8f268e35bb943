//! The separation functional
//!
//! ```text
//! S_p(z) = (Σ|z_i|^p)^{1/p} / min_{i≠j}|z_i − z_j|
//! ```
//!
//! its leading-order optimum `(2/(p+2))^{1/p}·3^{1/4}/√(2π)·n^{1/2+1/p}`, and
//! convergence studies of lattice configurations against that constant.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{first_n_lattice_points, Configuration};

/// Exponent `p` of the separation functional; `p = ∞` is the max-modulus case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else if p.is_finite() && p > 0.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::InvalidInput(format!("exponent p must be positive, got {p}")))
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// Growth exponent `1/2 + 1/p` of the optimal `S_p`.
    pub fn growth(self) -> f64 {
        match self {
            Exponent::Finite(p) => 0.5 + 1.0 / p,
            Exponent::Infinity => 0.5,
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            other => {
                let p: f64 = other.parse().map_err(|_| Error::Parse(format!("bad exponent {s:?}")))?;
                Exponent::new(p)
            }
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

/// Finite exponents serialize as numbers, infinity as `"inf"`.
impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

/// `(Σ|z_i|^p)^{1/p}`, evaluated as `M·(Σ(|z_i|/M)^p)^{1/p}` with `M` the
/// largest modulus so that large `p` cannot overflow.
pub fn p_norm(points: &[Complex64], p: Exponent) -> f64 {
    let max = points.iter().map(|z| z.norm()).fold(0.0, f64::max);
    match p {
        Exponent::Infinity => max,
        Exponent::Finite(_) if max == 0.0 => 0.0,
        Exponent::Finite(p) => {
            let sum: f64 = points.iter().map(|z| (z.norm() / max).powf(p)).sum();
            max * sum.powf(1.0 / p)
        }
    }
}

/// `S_p(c)`; `+∞` when two points coincide.
pub fn separation_functional(c: &Configuration, p: Exponent) -> Result<f64> {
    let gap = c
        .min_separation()
        .ok_or_else(|| Error::InvalidInput("the separation functional needs at least two points".into()))?;
    if gap == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(p_norm(c.points(), p) / gap)
}

/// `3^{1/4}/√(2π)`, the `p = ∞` constant.
pub fn max_modulus_constant() -> f64 {
    3f64.powf(0.25) / (2.0 * PI).sqrt()
}

/// `(2/(p+2))^{1/p}·3^{1/4}/√(2π)`; the factor tends to 1 as `p → ∞`.
pub fn proposition_constant(p: Exponent) -> f64 {
    match p {
        Exponent::Infinity => max_modulus_constant(),
        Exponent::Finite(p) => (2.0 / (p + 2.0)).powf(1.0 / p) * max_modulus_constant(),
    }
}

/// `n^{1/2+1/p}` (`√n` for `p = ∞`).
pub fn growth_scale(n: usize, p: Exponent) -> f64 {
    (n as f64).powf(p.growth())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticRow {
    pub n: usize,
    pub raw: f64,
    pub scale: f64,
    pub ratio: f64,
    pub target: f64,
}

impl AsymptoticRow {
    pub fn new(n: usize, raw: f64, p: Exponent) -> Self {
        let scale = growth_scale(n, p);
        AsymptoticRow { n, raw, scale, ratio: raw / scale, target: proposition_constant(p) }
    }

    /// `ratio / target`.
    pub fn margin(&self) -> f64 {
        self.ratio / self.target
    }

    pub fn relative_deviation(&self) -> f64 {
        (self.ratio - self.target).abs() / self.target
    }
}

/// First `n` triangular-lattice points.
pub fn lattice_generator(n: usize) -> Result<Configuration> {
    first_n_lattice_points(n)
}

/// One row per requested `n`, in input order. Rows are computed in parallel.
pub fn convergence_study<G>(p: Exponent, n_values: &[usize], generator: G) -> Result<Vec<AsymptoticRow>>
where
    G: Fn(usize) -> Result<Configuration> + Sync,
{
    if n_values.is_empty() {
        return Err(Error::InvalidInput("n_values must be nonempty".into()));
    }
    if n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("n_values must be strictly increasing".into()));
    }
    n_values
        .par_iter()
        .map(|&n| {
            let c = generator(n)?;
            if c.len() != n {
                return Err(Error::InvalidInput(format!("generator returned {} points for n = {n}", c.len())));
            }
            Ok(AsymptoticRow::new(n, separation_functional(&c, p)?, p))
        })
        .collect()
}

/// Comparison of a configuration with the leading-order bound. Margins below
/// one are legal at finite `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificate {
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
}

pub fn lower_bound_certificate(c: &Configuration, p: Exponent) -> Result<Certificate> {
    let value = separation_functional(c, p)?;
    let bound = proposition_constant(p) * growth_scale(c.len(), p);
    Ok(Certificate { value, bound, margin: value / bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditioning::condition_report_diagonal;
    use crate::linalg::random::uniform_disk_points;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn conf(points: &[Complex64]) -> Configuration {
        Configuration::new(points.to_vec()).unwrap()
    }

    fn triangle() -> Configuration {
        let r = 1.0 / 3f64.sqrt();
        conf(&(0..3).map(|k| Complex64::from_polar(r, 2.0 * PI * k as f64 / 3.0)).collect::<Vec<_>>())
    }

    const TWO: Exponent = Exponent::Finite(2.0);

    #[test]
    fn small_values() {
        let pair = conf(&[c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(separation_functional(&pair, TWO).unwrap(), 1.0);
        assert_eq!(separation_functional(&pair, Exponent::Infinity).unwrap(), 1.0);
        assert!((separation_functional(&triangle(), TWO).unwrap() - 1.0).abs() < 1e-15);
        let dup = conf(&[c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(separation_functional(&dup, TWO).unwrap(), f64::INFINITY);
        assert!(separation_functional(&conf(&[c(1.0, 0.0)]), TWO).is_err());
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert_eq!("2".parse::<Exponent>().unwrap(), TWO);
        assert!("0".parse::<Exponent>().is_err());
        assert!("-1".parse::<Exponent>().is_err());
        assert!("abc".parse::<Exponent>().is_err());
        assert!(Exponent::new(f64::NAN).is_err());
    }

    #[test]
    fn constants() {
        // Closed forms evaluated independently.
        let two = 3f64.powf(0.25) / (2.0 * PI.sqrt());
        let inf = 3f64.powf(0.25) / (2.0 * PI).sqrt();
        assert!((two - 0.371_257_62).abs() < 1e-8);
        assert!((inf - 0.525_037_57).abs() < 1e-8);
        assert!((proposition_constant(TWO) - two).abs() < 1e-15);
        assert!((proposition_constant(Exponent::Infinity) - inf).abs() < 1e-15);
        assert!((proposition_constant(TWO) - proposition_constant(Exponent::Infinity) / 2f64.sqrt()).abs() < 1e-15);
        let big = proposition_constant(Exponent::Finite(1e3));
        assert!((big - inf).abs() / inf < 0.01);
        // Continuity and monotonicity in p.
        let mut prev = 0.0;
        for p in [0.5, 1.0, 2.0, 4.0, 16.0, 256.0] {
            let v = proposition_constant(Exponent::Finite(p));
            assert!(v > prev && v < inf);
            prev = v;
        }
    }

    #[test]
    fn certificates() {
        let pair = conf(&[c(-0.5, 0.0), c(0.5, 0.0)]);
        let cert = lower_bound_certificate(&pair, TWO).unwrap();
        assert!((cert.value - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((cert.bound - 0.742_515).abs() < 1e-6);
        assert!((cert.margin - 0.952).abs() < 1e-3);

        let cert = lower_bound_certificate(&triangle(), TWO).unwrap();
        assert!((cert.value - 1.0).abs() < 1e-15);
        assert!((cert.bound - 1.113_773).abs() < 1e-6);
        assert!((cert.margin - 0.898).abs() < 1e-3);

        let cert = lower_bound_certificate(&first_n_lattice_points(10_000).unwrap(), TWO).unwrap();
        assert!(cert.margin >= 0.97 && cert.margin <= 1.05, "{}", cert.margin);
    }

    #[test]
    fn lattice_convergence() {
        let rows = convergence_study(TWO, &[100, 1000, 10_000], lattice_generator).unwrap();
        let last = rows[2];
        assert!(last.relative_deviation() < 0.03);
        assert!(rows[0].relative_deviation() > rows[1].relative_deviation());
        assert!(rows[1].relative_deviation() > rows[2].relative_deviation());
        for r in &rows {
            assert_eq!(r.ratio, r.raw / r.scale);
        }
        let inf = convergence_study(Exponent::Infinity, &[10_000], lattice_generator).unwrap();
        assert!(inf[0].relative_deviation() < 0.03);
        assert!(convergence_study(TWO, &[], lattice_generator).is_err());
        assert!(convergence_study(TWO, &[10, 5], lattice_generator).is_err());
    }

    #[test]
    fn invariances() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let n = rng.random_range(2..40);
            let base = conf(&uniform_disk_points(n, 3.0, &mut rng));
            let theta = rng.random_range(0.0..2.0 * PI);
            for p in [Exponent::Finite(1.0), TWO, Exponent::Finite(4.0), Exponent::Infinity] {
                let s = separation_functional(&base, p).unwrap();
                for t in [1e-3, 1.0, 1e3] {
                    let scaled = base.mapped(c(t, 0.0)).unwrap();
                    assert!((separation_functional(&scaled, p).unwrap() - s).abs() <= 1e-10 * s);
                }
                let rotated = base.mapped(Complex64::from_polar(1.0, theta)).unwrap();
                assert!((separation_functional(&rotated, p).unwrap() - s).abs() <= 1e-10 * s);
            }
            // Nonincreasing in p.
            let vals: Vec<f64> = [Exponent::Finite(1.0), TWO, Exponent::Finite(4.0), Exponent::Infinity]
                .iter()
                .map(|&p| separation_functional(&base, p).unwrap())
                .collect();
            assert!(vals.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-14)));
        }
    }

    #[test]
    fn large_p_does_not_overflow() {
        let pts = conf(&[c(1e10, 0.0), c(0.0, 2e10), c(3.0, 3.0)]);
        let s = separation_functional(&pts, Exponent::Finite(400.0)).unwrap();
        assert!(s.is_finite());
        let s_inf = separation_functional(&pts, Exponent::Infinity).unwrap();
        assert!(s >= s_inf && s < s_inf * 1.01);
    }

    #[test]
    fn matches_diagonal_condition_numbers() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in [2usize, 5, 19, 64] {
            let confs = [
                first_n_lattice_points(n).unwrap(),
                conf(&uniform_disk_points(n, 2.0, &mut rng)),
            ];
            for cf in &confs {
                let r = condition_report_diagonal(cf).unwrap();
                assert_eq!(r.kappa_max_frob, separation_functional(cf, TWO).unwrap());
                assert_eq!(r.kappa_max_op, separation_functional(cf, Exponent::Infinity).unwrap());
            }
        }
    }
}
