//! Monte Carlo oracle: planar Brownian paths run until they hit the slit.
//!
//! The first coordinate `B` carries the optional drift `-sigma2 * mu`, the second
//! `W` is driftless. A path exits when `W` crosses zero while `B < 0`. Crossings
//! between grid points are caught with the Brownian bridge probability.

mod exec;
mod stats;

pub use exec::{path_rng, Execution};
pub use stats::{
    ks_statistic, pairwise_sum, pearson, quantile, ranks, spearman, MCEstimate,
};

use rand::Rng;
use rand_distr::{Exp, StandardNormal};
use serde::Serialize;

use crate::error::{domain, require_positive, Result};
use crate::point::Point;
use crate::slit::sample_hit_place_exact;

/// Steps far from the slit are `STEP_GROWTH * r^2`, `r` the distance to the nearest feature.
const STEP_GROWTH: f64 = 0.005;
/// Radius of the tip zone in units of `sqrt(sigma2 * step)`.
const TIP_ZONE: f64 = 10.0;
/// Step reduction inside the tip zone.
const TIP_REFINE: f64 = 16.0;
/// Inside the tip zone steps also shrink like `TIP_GROWTH * |x|^2`, down to `TIP_FLOOR * step`.
const TIP_GROWTH: f64 = 0.01;
const TIP_FLOOR: f64 = 1e-4;

/// Parameters of an Euler path ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MCConfig {
    pub paths: u64,
    /// Base time step used near the slit.
    pub step: f64,
    /// Censoring time.
    pub horizon: f64,
    pub seed: u64,
    /// Variance per unit time of each coordinate: 2 for VAR2T, 1 for VAR1T.
    pub sigma2: f64,
    /// Drift parameter; `B` moves with drift `-sigma2 * drift_mu`.
    pub drift_mu: f64,
}

impl Default for MCConfig {
    fn default() -> Self {
        Self { paths: 100_000, step: 1e-4, horizon: 50.0, seed: 0x5117, sigma2: 2.0, drift_mu: 0.0 }
    }
}

impl MCConfig {
    pub fn validate(&self) -> Result<()> {
        if self.paths == 0 {
            return Err(domain("paths must be >= 1"));
        }
        require_positive("step", self.step)?;
        require_positive("horizon", self.horizon)?;
        require_positive("sigma2", self.sigma2)?;
        if self.step > self.horizon {
            return Err(domain("step must not exceed horizon"));
        }
        if !(self.drift_mu >= 0.0 && self.drift_mu.is_finite()) {
            return Err(domain("drift_mu must be finite and >= 0"));
        }
        Ok(())
    }

    pub fn with_paths(self, paths: u64) -> Self {
        Self { paths, ..self }
    }

    pub fn with_horizon(self, horizon: f64) -> Self {
        Self { horizon, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn with_sigma2(self, sigma2: f64) -> Self {
        Self { sigma2, ..self }
    }

    pub fn with_drift(self, drift_mu: f64) -> Self {
        Self { drift_mu, ..self }
    }

    pub fn with_step(self, step: f64) -> Self {
        Self { step, ..self }
    }
}

/// Outcome of one path. Censored paths carry the horizon as time and the last `B` as place.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HitRecord {
    pub path_id: u64,
    pub hit_time: f64,
    pub hit_place: f64,
    pub censored: bool,
}

/// Disk whose discounted occupation time is accumulated along the path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Occupation {
    pub centre: Point,
    pub radius: f64,
    /// Discount rate `q` in `int_0^tau e^(-q t) 1{X_t in disk} dt`.
    pub killing_rate: f64,
}

impl Occupation {
    fn area(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius
    }
}

fn slit_distance(p: Point) -> f64 {
    if p.x1 <= 0.0 { p.x2.abs() } else { p.norm() }
}

pub(crate) fn step_size(cfg: &MCConfig, p: Point, occ: Option<&Occupation>) -> f64 {
    let tip = p.norm();
    if tip < TIP_ZONE * (cfg.sigma2 * cfg.step).sqrt() {
        let local = TIP_GROWTH * tip * tip / cfg.sigma2;
        return local.clamp(TIP_FLOOR * cfg.step, cfg.step / TIP_REFINE);
    }
    let mut r = slit_distance(p);
    if let Some(o) = occ {
        r = r.min((p.dist(o.centre) - o.radius).max(o.radius));
    }
    (STEP_GROWTH * r * r / cfg.sigma2).max(cfg.step)
}

/// Fraction of a step at which the second coordinate crosses zero, if it does.
///
/// Opposite signs always cross. Same signs cross with the bridge probability
/// `exp(-2 w0 w1 / (sigma2 dt))`. The crossing time is placed by linear interpolation.
pub(crate) fn crossing_fraction<R: Rng + ?Sized>(w0: f64, w1: f64, sigma2: f64, dt: f64, rng: &mut R) -> Option<f64> {
    let span = w0.abs() + w1.abs();
    let theta = if span == 0.0 { 0.0 } else { w0.abs() / span };
    if w0 * w1 <= 0.0 {
        return Some(theta);
    }
    let p = (-2.0 * w0 * w1 / (sigma2 * dt)).exp();
    (p > 0.0 && rng.random::<f64>() < p).then_some(theta)
}

/// Result of [`simulate_path`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathOutcome {
    pub record: HitRecord,
    /// Discounted time spent in the occupation disk, zero without one.
    pub occupation: f64,
}

/// Runs one path from `start` until it hits the slit or reaches the horizon.
pub fn simulate_path(cfg: &MCConfig, start: Point, path_id: u64, occ: Option<&Occupation>) -> PathOutcome {
    let mut rng = path_rng(cfg.seed, path_id);
    let sd = cfg.sigma2.sqrt();
    let drift = -cfg.sigma2 * cfg.drift_mu;
    let (mut b, mut w) = (start.x1, start.x2);
    let mut t = 0.0;
    let mut occupied = 0.0;
    while t < cfg.horizon {
        let p = Point::new(b, w);
        let dt = step_size(cfg, p, occ).min(cfg.horizon - t);
        if let Some(o) = occ {
            if p.dist(o.centre) < o.radius {
                occupied += (-o.killing_rate * t).exp() * dt;
            }
        }
        let root = dt.sqrt();
        let nb = b + drift * dt + sd * root * rng.sample::<f64, _>(StandardNormal);
        let nw = w + sd * root * rng.sample::<f64, _>(StandardNormal);
        if let Some(theta) = crossing_fraction(w, nw, cfg.sigma2, dt, &mut rng) {
            let place = b + theta * (nb - b);
            if place < 0.0 {
                let record = HitRecord { path_id, hit_time: t + theta * dt, hit_place: place, censored: false };
                return PathOutcome { record, occupation: occupied };
            }
        }
        b = nb;
        w = nw;
        t += dt;
    }
    let record = HitRecord { path_id, hit_time: cfg.horizon, hit_place: b, censored: true };
    PathOutcome { record, occupation: occupied }
}

fn check_start(cfg: &MCConfig, start: Point) -> Result<()> {
    cfg.validate()?;
    start.require_in_domain("start")
}

/// One record per path, in path order.
pub fn simulate_hits(cfg: &MCConfig, start: Point, exec: Execution) -> Result<Vec<HitRecord>> {
    check_start(cfg, start)?;
    Ok(exec.map_indexed(cfg.paths, |i| simulate_path(cfg, start, i, None).record))
}

/// Sorted exit places of the uncensored paths, and the number censored.
pub fn hit_places_sorted(records: &[HitRecord]) -> (Vec<f64>, usize) {
    let mut places: Vec<f64> = records.iter().filter(|r| !r.censored).map(|r| r.hit_place).collect();
    places.sort_by(f64::total_cmp);
    let censored = records.len() - places.len();
    (places, censored)
}

/// `P^start(tau_D > t)`.
pub fn estimate_survival(cfg: &MCConfig, start: Point, t: f64, exec: Execution) -> Result<MCEstimate> {
    require_positive("t", t)?;
    if t > cfg.horizon {
        return Err(domain(format!("t = {t} exceeds the horizon {}", cfg.horizon)));
    }
    let cut = cfg.with_horizon(t);
    let records = simulate_hits(&cut, start, exec)?;
    let alive = records.iter().filter(|r| r.censored).count() as u64;
    MCEstimate::from_binomial(alive, cfg.paths)
}

/// `E^start[exp(-rate tau_D)]`; censored paths contribute `exp(-rate horizon)`.
pub fn estimate_gauge(cfg: &MCConfig, start: Point, rate: f64, exec: Execution) -> Result<MCEstimate> {
    require_positive("rate", rate)?;
    let records = simulate_hits(cfg, start, exec)?;
    let xs: Vec<f64> = records.iter().map(|r| (-rate * r.hit_time).exp()).collect();
    MCEstimate::from_samples(&xs)
}

/// Discounted occupation density of the killed process near `occ.centre`:
/// `E^start int_0^tau e^(-q t) 1{X_t in disk} dt / area`.
pub fn estimate_occupation(cfg: &MCConfig, start: Point, occ: &Occupation, exec: Execution) -> Result<MCEstimate> {
    check_start(cfg, start)?;
    require_positive("radius", occ.radius)?;
    if !(occ.killing_rate >= 0.0) {
        return Err(domain("killing rate must be >= 0"));
    }
    let area = occ.area();
    let xs = exec.map_indexed(cfg.paths, |i| simulate_path(cfg, start, i, Some(occ)).occupation / area);
    MCEstimate::from_samples(&xs)
}

/// Free-plane resolvent density at distance `r`, from the position at an
/// independent exponential time: `U_q(r) = P(|B_T| in annulus) / (q area)`.
pub fn estimate_resolvent_density(
    sigma2: f64,
    rate: f64,
    r: f64,
    half_width: f64,
    draws: u64,
    seed: u64,
    exec: Execution,
) -> Result<MCEstimate> {
    require_positive("sigma2", sigma2)?;
    require_positive("rate", rate)?;
    require_positive("half_width", half_width)?;
    if !(r > half_width) {
        return Err(domain("annulus must not contain the origin"));
    }
    let clock = Exp::new(rate).map_err(|e| domain(e.to_string()))?;
    let inside = exec.map_indexed(draws, |i| {
        let mut rng = path_rng(seed, i);
        let t: f64 = rng.sample(clock);
        let sd = (sigma2 * t).sqrt();
        let x = sd * rng.sample::<f64, _>(StandardNormal);
        let y = sd * rng.sample::<f64, _>(StandardNormal);
        ((x.hypot(y) - r).abs() < half_width) as u64
    });
    let hits = inside.iter().sum();
    let p = MCEstimate::from_binomial(hits, draws)?;
    let scale = 1.0 / (rate * std::f64::consts::PI * 4.0 * r * half_width);
    Ok(MCEstimate {
        value: p.value * scale,
        std_error: p.std_error * scale,
        n: draws,
        ci95: (p.ci95.0 * scale, p.ci95.1 * scale),
    })
}

/// Exact exit places from the conformal sampler, sorted.
pub fn sample_hit_places_exact(start: Point, draws: u64, seed: u64, exec: Execution) -> Result<Vec<f64>> {
    start.require_in_domain("start")?;
    let mut xs = exec
        .map_indexed(draws, |i| sample_hit_place_exact(start, &mut path_rng(seed, i)))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    xs.sort_by(f64::total_cmp);
    Ok(xs)
}
