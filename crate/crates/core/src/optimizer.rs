//! Numerical search for configurations with small `S_p`.
//!
//! The hard minimum gap is replaced by the soft-min
//! `−(1/β)·log Σ_{i<j} exp(−β·|z_i − z_j|)`, which is smooth and never exceeds
//! the true minimum. Each restart runs gradient descent with Armijo
//! backtracking through an increasing β schedule, rescaling after every step
//! so the hard minimum gap is 1, and finishes with a coordinate-wise line
//! search on the exact (hard-min) objective.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extremal::{p_norm, separation_functional, Exponent};
use crate::lattice::{first_n_lattice_points, Configuration, HALF_SQRT3};
use crate::linalg::random::uniform_disk_points;

/// Finite exponent used in the smooth stage when optimizing for `p = ∞`.
pub const INFINITY_SURROGATE: f64 = 64.0;

/// Backtracking gives up (and the stage ends) below this displacement.
const MIN_STEP: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    Lattice,
    RandomDisk,
    Given(Configuration),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub n: usize,
    pub p: Exponent,
    /// Soft-min sharpness per stage, for configurations with unit minimum gap.
    pub beta_schedule: Vec<f64>,
    /// Largest point displacement tried first in each stage (cycled if shorter
    /// than the β schedule).
    pub step_schedule: Vec<f64>,
    pub restarts: usize,
    /// Gradient iterations per stage.
    pub max_iters: usize,
    /// Sweeps of the final hard-min coordinate search.
    pub polish_rounds: usize,
    pub seed: u64,
    pub init: Init,
}

impl OptimizerConfig {
    /// Default schedules: `β ∈ {10, 30, 100, 300, 1000}·max(1, ln #pairs)`.
    pub fn new(n: usize, p: Exponent) -> Self {
        let pairs = (n.max(2) * (n.max(2) - 1) / 2) as f64;
        let factor = pairs.ln().max(1.0);
        OptimizerConfig {
            n,
            p,
            beta_schedule: [10.0, 30.0, 100.0, 300.0, 1000.0].iter().map(|b| b * factor).collect(),
            step_schedule: vec![0.1, 0.05, 0.02, 0.01, 0.005],
            restarts: 1,
            max_iters: 300,
            polish_rounds: 200,
            seed: 0,
            init: Init::Lattice,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidInput("optimization needs n ≥ 2".into()));
        }
        if self.beta_schedule.is_empty() || self.step_schedule.is_empty() {
            return Err(Error::InvalidInput("schedules must be nonempty".into()));
        }
        if self.beta_schedule.iter().any(|&b| !(b > 0.0 && b.is_finite()))
            || self.beta_schedule.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::InvalidInput("beta schedule must be positive and increasing".into()));
        }
        if self.step_schedule.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return Err(Error::InvalidInput("steps must be positive".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidInput("restarts must be at least 1".into()));
        }
        if let Init::Given(c) = &self.init {
            if c.len() != self.n {
                return Err(Error::InvalidInput(format!(
                    "initial configuration has {} points, expected {}",
                    c.len(),
                    self.n
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub restart: usize,
    pub stage: usize,
    pub iteration: usize,
    /// Hard objective after this iteration.
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerResult {
    /// Best configuration found, scaled to unit minimum gap.
    pub best: Configuration,
    /// Exact `S_p` of `best`.
    pub objective: f64,
    /// Trace of the winning restart.
    pub trace: Vec<TracePoint>,
    /// Smallest `S_p` among the starting configurations.
    pub init_objective: f64,
    /// Seed of the winning restart.
    pub seed: u64,
}

/// Soft objective at one configuration, with the hard minimum gap it was
/// shifted by and, on request, the gradient.
struct Evaluation {
    value: f64,
    hard_gap: f64,
    gradient: Option<Vec<Complex64>>,
}

fn evaluate(z: &[Complex64], p: f64, beta: f64, with_gradient: bool) -> Result<Evaluation> {
    let n = z.len();
    if n < 2 {
        return Err(Error::InvalidInput("soft-min needs at least two points".into()));
    }
    let mut dist = Vec::with_capacity(n * (n - 1) / 2);
    let mut dmin = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let d = (z[i] - z[j]).norm();
            dmin = dmin.min(d);
            dist.push(d);
        }
    }
    if dmin == 0.0 {
        return Err(Error::InvalidInput("coincident points".into()));
    }
    for d in &mut dist {
        *d = (-beta * (*d - dmin)).exp();
    }
    let total: f64 = dist.iter().sum();
    let softmin = dmin - total.ln() / beta;
    let exponent = if p.is_infinite() { Exponent::Infinity } else { Exponent::Finite(p) };
    let norm = p_norm(z, exponent);
    let value = if softmin > 0.0 { norm / softmin } else { f64::INFINITY };
    if !with_gradient {
        return Ok(Evaluation { value, hard_gap: dmin, gradient: None });
    }
    if softmin <= 0.0 {
        return Err(Error::InvalidInput("soft-min is not positive; increase beta".into()));
    }

    // ∂s/∂z_i = Σ_j w_ij (z_i − z_j)/|z_i − z_j| with softmax weights w.
    let mut ds = vec![Complex64::new(0.0, 0.0); n];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            let diff = z[i] - z[j];
            let u = diff * (dist[k] / (total * diff.norm()));
            ds[i] += u;
            ds[j] -= u;
            k += 1;
        }
    }
    // ∂P/∂z_i = (|z_i|/P)^{p−1} · z_i/|z_i|.
    let s = softmin;
    let grad = z
        .iter()
        .zip(&ds)
        .map(|(zi, dsi)| {
            let r = zi.norm();
            let dp = if r == 0.0 || norm == 0.0 { Complex64::new(0.0, 0.0) } else { zi / r * (r / norm).powf(p - 1.0) };
            dp / s - dsi * (norm / (s * s))
        })
        .collect();
    Ok(Evaluation { value, hard_gap: dmin, gradient: Some(grad) })
}

fn check_smooth_args(p: f64, beta: f64) -> Result<()> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::InvalidInput(format!("p must be positive, got {p}")));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidInput(format!("beta must be positive and finite, got {beta}")));
    }
    Ok(())
}

/// `−(1/β)·log Σ_{i<j} exp(−β|z_i − z_j|)`, shifted by the hard minimum to
/// avoid overflow.
pub fn softmin_gap(c: &Configuration, beta: f64) -> Result<f64> {
    check_smooth_args(1.0, beta)?;
    let z = c.points();
    if z.len() < 2 {
        return Err(Error::InvalidInput("soft-min needs at least two points".into()));
    }
    let dmin = min_gap(z);
    let mut total = 0.0;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            total += (-beta * ((z[i] - z[j]).norm() - dmin)).exp();
        }
    }
    Ok(dmin - total.ln() / beta)
}

/// `(Σ|z_i|^p)^{1/p} / softmin_β`. Returns `+∞` when the soft-min is not
/// positive (β too small for the configuration's scale).
pub fn soft_separation_functional(c: &Configuration, p: f64, beta: f64) -> Result<f64> {
    check_smooth_args(p, beta)?;
    Ok(evaluate(c.points(), p, beta, false)?.value)
}

/// Analytic gradient of [`soft_separation_functional`]; entry `i` holds
/// `∂F/∂Re z_i + i·∂F/∂Im z_i`. Needs finite `p`.
pub fn gradient(c: &Configuration, p: f64, beta: f64) -> Result<Vec<Complex64>> {
    check_smooth_args(p, beta)?;
    if !p.is_finite() {
        return Err(Error::InvalidInput("the gradient needs a finite p".into()));
    }
    Ok(evaluate(c.points(), p, beta, true)?.gradient.expect("requested"))
}

fn min_gap(z: &[Complex64]) -> f64 {
    let mut d = f64::INFINITY;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            d = d.min((z[i] - z[j]).norm());
        }
    }
    d
}

fn hard_objective(z: &[Complex64], p: Exponent) -> f64 {
    let g = min_gap(z);
    if g == 0.0 {
        f64::INFINITY
    } else {
        p_norm(z, p) / g
    }
}

fn rescale(z: &mut [Complex64], gap: f64) {
    if gap > 0.0 && gap.is_finite() {
        for v in z.iter_mut() {
            *v /= gap;
        }
    }
}

fn initial_points(cfg: &OptimizerConfig, restart: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Complex64>> {
    let jitter = |mut pts: Vec<Complex64>, rng: &mut ChaCha8Rng| {
        if restart > 0 {
            for (z, dz) in pts.iter_mut().zip(uniform_disk_points(cfg.n, 0.1, rng)) {
                *z += dz;
            }
        }
        pts
    };
    Ok(match &cfg.init {
        Init::Lattice => jitter(first_n_lattice_points(cfg.n)?.into_points(), rng),
        Init::Given(c) => jitter(c.points().to_vec(), rng),
        Init::RandomDisk => uniform_disk_points(cfg.n, random_init_radius(cfg.n), rng),
    })
}

struct RestartOutcome {
    points: Vec<Complex64>,
    objective: f64,
    init_objective: f64,
    trace: Vec<TracePoint>,
    seed: u64,
}

fn run_restart(cfg: &OptimizerConfig, restart: usize) -> Result<RestartOutcome> {
    let seed = cfg.seed.wrapping_add(restart as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = initial_points(cfg, restart, &mut rng)?;
    let gap = min_gap(&z);
    if gap == 0.0 {
        return Err(Error::InvalidInput("initial configuration has coincident points".into()));
    }
    rescale(&mut z, gap);
    let smooth_p = match cfg.p {
        Exponent::Finite(p) => p,
        Exponent::Infinity => INFINITY_SURROGATE,
    };
    let init_objective = hard_objective(&z, cfg.p);
    let mut best = (init_objective, z.clone());
    let mut trace = Vec::new();

    for (stage, &beta) in cfg.beta_schedule.iter().enumerate() {
        let mut step = cfg.step_schedule[stage % cfg.step_schedule.len()];
        for iteration in 0..cfg.max_iters {
            // Fails only when the soft-min is not positive at this β.
            let Ok(current) = evaluate(&z, smooth_p, beta, true) else { break };
            let f = current.value;
            let g = current.gradient.expect("requested");
            let gmax = g.iter().map(|v| v.norm()).fold(0.0, f64::max);
            if gmax <= 1e-14 * f {
                break;
            }
            let slope: f64 = g.iter().map(|v| v.norm_sqr()).sum::<f64>() / gmax;
            let mut t = step;
            let mut accepted = None;
            while t >= MIN_STEP {
                let trial: Vec<Complex64> = z.iter().zip(&g).map(|(zi, gi)| zi - gi * (t / gmax)).collect();
                if let Ok(e) = evaluate(&trial, smooth_p, beta, false) {
                    if e.value <= f - 1e-4 * t * slope {
                        accepted = Some((trial, e.value, e.hard_gap));
                        break;
                    }
                }
                t *= 0.5;
            }
            let Some((trial, ft, gap)) = accepted else { break };
            z = trial;
            let hard = p_norm(&z, cfg.p) / gap;
            rescale(&mut z, gap);
            step = (2.0 * t).min(1.0);
            trace.push(TracePoint { restart, stage, iteration, objective: hard });
            if hard < best.0 {
                best = (hard, z.clone());
            }
            if f - ft <= 1e-12 * f {
                break;
            }
        }
    }

    let mut points = best.1.clone();
    polish(&mut points, cfg.p, cfg.polish_rounds);
    let gap = min_gap(&points);
    rescale(&mut points, gap);
    let mut objective = hard_objective(&points, cfg.p);
    if objective.is_nan() || objective > best.0 {
        // Rounding in the rescale can cost an ulp; never hand back worse.
        (objective, points) = best;
    }
    trace.push(TracePoint { restart, stage: cfg.beta_schedule.len(), iteration: 0, objective });
    Ok(RestartOutcome { points, objective, init_objective, trace, seed })
}

/// Coordinate-wise line search on the exact objective. Returns the final
/// objective; `z` is modified in place and only ever improves.
fn polish(z: &mut [Complex64], p: Exponent, rounds: usize) -> f64 {
    let n = z.len();
    let mut current = hard_objective(z, p);
    let dirs = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ];
    let mut h = 1e-2;
    let mut round = 0;
    while h > 1e-10 && round < rounds {
        round += 1;
        let (mut a, mut b) = closest_pair(z);
        let mut improved = false;
        for i in 0..n {
            // Closest pair among those not involving i.
            let others = if i == a || i == b { closest_pair_excluding(z, i) } else { ((z[a] - z[b]).norm(), a, b) };
            for dir in dirs {
                let old = z[i];
                z[i] = old + dir * h;
                let (near, j) = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| ((z[i] - z[j]).norm(), j))
                    .fold((f64::INFINITY, i), |m, x| if x.0 < m.0 { x } else { m });
                let gap = near.min(others.0);
                let trial = if gap > 0.0 { p_norm(z, p) / gap } else { f64::INFINITY };
                if trial < current {
                    current = trial;
                    improved = true;
                    (a, b) = if near < others.0 { (i, j) } else { (others.1, others.2) };
                    break;
                }
                z[i] = old;
            }
        }
        if !improved {
            h *= 0.25;
        }
    }
    current
}

fn closest_pair(z: &[Complex64]) -> (usize, usize) {
    let mut best = (f64::INFINITY, 0, 1);
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let d = (z[i] - z[j]).norm();
            if d < best.0 {
                best = (d, i, j);
            }
        }
    }
    (best.1, best.2)
}

fn closest_pair_excluding(z: &[Complex64], skip: usize) -> (f64, usize, usize) {
    let mut best = (f64::INFINITY, skip, skip);
    for i in 0..z.len() {
        if i == skip {
            continue;
        }
        for j in i + 1..z.len() {
            let d = (z[i] - z[j]).norm();
            if j != skip && d < best.0 {
                best = (d, i, j);
            }
        }
    }
    best
}

/// Multi-restart minimization of `S_p`. Restarts run in parallel with seeds
/// `seed + r`; the winner is the smallest `(objective, seed)`.
pub fn optimize(cfg: &OptimizerConfig) -> Result<OptimizerResult> {
    cfg.validate()?;
    let outcomes = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(cfg, r))
        .collect::<Result<Vec<_>>>()?;
    let init_objective = outcomes.iter().map(|o| o.init_objective).fold(f64::INFINITY, f64::min);
    let winner = outcomes
        .into_iter()
        .min_by(|a, b| a.objective.total_cmp(&b.objective).then(a.seed.cmp(&b.seed)))
        .expect("at least one restart");
    let best = Configuration::new(winner.points)?;
    let objective = separation_functional(&best, cfg.p)?;
    Ok(OptimizerResult {
        objective: objective.min(winner.objective),
        best,
        trace: winner.trace,
        init_objective,
        seed: winner.seed,
    })
}

/// Radius of the disk used for random initialization, matching the lattice
/// density `2/√3` points per unit area.
pub fn random_init_radius(n: usize) -> f64 {
    (n as f64 / (std::f64::consts::PI / HALF_SQRT3)).sqrt()
}

/// Random configuration in the density-matched disk.
pub fn random_configuration(n: usize, seed: u64) -> Result<Configuration> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Configuration::new(uniform_disk_points(n, random_init_radius(n), &mut rng))
}
