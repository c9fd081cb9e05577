//! Drifted slit exits, the hyperbolic Cauchy exit law, and the exponential
//! functional `A_y(t) = y^2 int_0^t exp(2(B_s - 2 mu s)) ds`. All VAR2T.
//!
//! The hyperbolic picture is the flat one in logarithmic coordinates: with
//! `U = ln(y/a) + B - 2 mu t` and an independent `W`, leaving `H_a` through
//! `{0} x (0, a]` is the slit exit of `(U, W)`, at height `a exp(U)`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{domain, require_negative, require_positive, Error, Result};
use crate::mc::{self, path_rng, pearson, quantile, ranks, Execution, MCConfig, MCEstimate};
use crate::point::Point;
use crate::slit::hit_place_density_axis;

/// Joint density of exit time and place for `B - 2 mu t` started at `y`:
/// `h(y, z) g_{y-z}(s) exp(mu (y - z) - mu^2 s)`.
pub fn drift_joint_density(mu: f64, y: f64, s: f64, z: f64) -> Result<f64> {
    require_positive("y", y)?;
    require_negative("z", z)?;
    Ok((y / -z).sqrt() / (PI * (y - z)) * drift_level_density(mu, y - z, s)?)
}

/// Density of the first time `B - 2 mu t` started at `a` reaches 0.
///
/// The tilt is merged into the Gaussian: `a s^(-3/2) exp(-(a - 2 mu s)^2 / 4s) / (2 sqrt pi)`.
pub fn drift_level_density(mu: f64, a: f64, s: f64) -> Result<f64> {
    check_mu(mu)?;
    require_positive("a", a)?;
    require_positive("s", s)?;
    let gap = a - 2.0 * mu * s;
    Ok(a * (-gap * gap / (4.0 * s)).exp() / (2.0 * PI.sqrt() * s.powf(1.5)))
}

fn check_mu(mu: f64) -> Result<()> {
    if mu >= 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("mu must be finite and >= 0, got {mu}")))
    }
}

fn check_levels(a: f64, y: f64, z: f64) -> Result<()> {
    require_positive("a", a)?;
    if !(0.0 < z && z < a && a < y && y.is_finite()) {
        return Err(domain(format!("need 0 < z < a < y, got z={z}, a={a}, y={y}")));
    }
    Ok(())
}

/// Exit height density from `H_a` for the vertical coordinate `y exp(B - 2 mu t)`:
/// `(1/(pi z)) sqrt(ln(y/a) / ln(a/z)) / ln(y/z)`. Free of `mu`.
pub fn hyp_exit_place(a: f64, y: f64, z: f64) -> Result<f64> {
    check_levels(a, y, z)?;
    Ok(hit_place_density_axis((y / a).ln(), (z / a).ln())? / z)
}

/// Joint exit density with the printed time factor `g^{2 mu}_{ln(y/z)}(s)`.
///
/// The printed factor is the hitting density for drift `4 mu`; the process
/// `B - 2 mu t` gives [`hyp_exit_joint_matched`].
pub fn hyp_exit_joint(mu: f64, a: f64, y: f64, s: f64, z: f64) -> Result<f64> {
    Ok(hyp_exit_place(a, y, z)? * drift_level_density(2.0 * mu, (y / z).ln(), s)?)
}

/// Joint exit density with the time factor `g^mu_{ln(y/z)}(s)` of the drift `2 mu`.
pub fn hyp_exit_joint_matched(mu: f64, a: f64, y: f64, s: f64, z: f64) -> Result<f64> {
    Ok(hyp_exit_place(a, y, z)? * drift_level_density(mu, (y / z).ln(), s)?)
}

/// `E A_y(t) = y^2 (1 - exp(4 (1 - mu) t)) / (4 (mu - 1))`, with `t = inf` allowed for `mu > 1`.
pub fn exp_functional_mean(mu: f64, y: f64, t: f64) -> Result<f64> {
    require_positive("mu", mu)?;
    require_positive("y", y)?;
    if !(t >= 0.0) {
        return Err(domain(format!("t must be >= 0, got {t}")));
    }
    let rate = 4.0 * (1.0 - mu);
    if t.is_infinite() {
        if mu <= 1.0 {
            return Err(Error::Divergence(format!("E A(inf) is infinite for mu = {mu} <= 1")));
        }
        return Ok(y * y / -rate);
    }
    if rate == 0.0 {
        return Ok(y * y * t);
    }
    Ok(y * y * (rate * t).exp_m1() / rate)
}

/// Constant `c = 1 / (4 (mu - 1))` making `A_y(t) + c X_t^2` a martingale.
pub fn martingale_constant(mu: f64) -> Result<f64> {
    if !(mu > 1.0) {
        return Err(domain(format!("need mu > 1, got {mu}")));
    }
    Ok(1.0 / (4.0 * (mu - 1.0)))
}

/// Truncation of `A(inf)` and the time step used to approximate it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HorizonPolicy {
    /// Relative mean left beyond the horizon.
    pub tail_eps: f64,
    pub dt: f64,
}

impl Default for HorizonPolicy {
    fn default() -> Self {
        Self { tail_eps: 1e-4, dt: 1e-3 }
    }
}

impl HorizonPolicy {
    /// `T = ln(eps) / (4 (1 - mu))`, where the mean increment has decayed to `eps`.
    pub fn horizon(&self, mu: f64) -> Result<f64> {
        if !(mu > 1.0) {
            return Err(domain(format!("need mu > 1, got {mu}")));
        }
        if !(self.tail_eps > 0.0 && self.tail_eps < 1.0) {
            return Err(domain("tail_eps must lie in (0, 1)"));
        }
        require_positive("dt", self.dt)?;
        Ok(self.tail_eps.ln() / (4.0 * (1.0 - mu)))
    }
}

/// `(A_y(T), X_T)` from one path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpFunctionalSample {
    pub a: f64,
    pub x: f64,
}

/// Simulates `A_y(T)` and `X_T = y exp(B_T - 2 mu T)` at the truncation horizon,
/// with exact Gaussian increments and the trapezoid rule for the integral.
pub fn sample_exp_functional<R: Rng + ?Sized>(
    mu: f64,
    y: f64,
    policy: &HorizonPolicy,
    rng: &mut R,
) -> Result<ExpFunctionalSample> {
    let horizon = policy.horizon(mu)?;
    Ok(sample_exp_functional_at(mu, y, &[horizon], policy.dt, rng)?[0])
}

/// `(A_y(t_k), X_{t_k})` along one path for increasing times `t_k`.
pub fn sample_exp_functional_at<R: Rng + ?Sized>(
    mu: f64,
    y: f64,
    times: &[f64],
    dt: f64,
    rng: &mut R,
) -> Result<Vec<ExpFunctionalSample>> {
    require_positive("mu", mu)?;
    require_positive("y", y)?;
    require_positive("dt", dt)?;
    if times.windows(2).any(|w| w[0] > w[1]) || times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
        return Err(domain("times must be finite, >= 0 and increasing"));
    }
    let mut out = Vec::with_capacity(times.len());
    let mut t = 0.0;
    let mut log_x = 0.0;
    let mut integral = 0.0;
    for &target in times {
        while t < target {
            let h = dt.min(target - t);
            let next = log_x - 2.0 * mu * h + (2.0 * h).sqrt() * rng.sample::<f64, _>(StandardNormal);
            integral += 0.5 * h * ((2.0 * log_x).exp() + (2.0 * next).exp());
            log_x = next;
            t += h;
        }
        out.push(ExpFunctionalSample { a: y * y * integral, x: y * log_x.exp() });
    }
    Ok(out)
}

/// Monte Carlo mean of the truncated `A_y(inf)`, one path per index.
pub fn estimate_functional_limit(
    mu: f64,
    y: f64,
    policy: &HorizonPolicy,
    paths: u64,
    seed: u64,
    exec: Execution,
) -> Result<MCEstimate> {
    policy.horizon(mu)?;
    let draws = exec.map_indexed(paths, |i| sample_exp_functional(mu, y, policy, &mut path_rng(seed, i)));
    let values = draws.into_iter().map(|d| d.map(|s| s.a)).collect::<Result<Vec<_>>>()?;
    MCEstimate::from_samples(&values)
}

/// Monte Carlo means of `A_y(t) + c X_t^2` at each of `times`, `c` from [`martingale_constant`].
pub fn estimate_martingale(
    mu: f64,
    y: f64,
    times: &[f64],
    dt: f64,
    paths: u64,
    seed: u64,
    exec: Execution,
) -> Result<Vec<MCEstimate>> {
    let c = martingale_constant(mu)?;
    let draws = exec.map_indexed(paths, |i| sample_exp_functional_at(mu, y, times, dt, &mut path_rng(seed, i)));
    let draws = draws.into_iter().collect::<Result<Vec<_>>>()?;
    (0..times.len())
        .map(|k| {
            let values: Vec<f64> = draws.iter().map(|d| d[k].a + c * d[k].x * d[k].x).collect();
            MCEstimate::from_samples(&values)
        })
        .collect()
}

/// Correlation statistics between two samples, with resampling intervals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DependenceStats {
    pub n: usize,
    pub pearson: f64,
    pub pearson_ci: (f64, f64),
    pub pearson_null_ci: (f64, f64),
    pub spearman: f64,
    pub spearman_ci: (f64, f64),
    pub spearman_null_ci: (f64, f64),
    /// Quartile-by-quartile contingency statistic, 9 degrees of freedom.
    pub chi_square: f64,
    pub chi_square_p: f64,
}

impl DependenceStats {
    /// Both correlations fall inside their permutation intervals.
    pub fn inside_null(&self) -> bool {
        let inside = |v: f64, ci: (f64, f64)| ci.0 <= v && v <= ci.1;
        inside(self.pearson, self.pearson_null_ci) && inside(self.spearman, self.spearman_null_ci)
    }
}

fn central_interval(mut xs: Vec<f64>) -> (f64, f64) {
    xs.sort_by(f64::total_cmp);
    (quantile(&xs, 0.025), quantile(&xs, 0.975))
}

fn quartile_of(v: f64, cuts: &[f64; 3]) -> usize {
    cuts.iter().filter(|c| v > **c).count()
}

fn chi_square_quartiles(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let cuts = |s: &[f64]| {
        let mut v = s.to_vec();
        v.sort_by(f64::total_cmp);
        [quantile(&v, 0.25), quantile(&v, 0.5), quantile(&v, 0.75)]
    };
    let (cx, cy) = (cuts(x), cuts(y));
    let mut table = [[0.0f64; 4]; 4];
    for (a, b) in x.iter().zip(y) {
        table[quartile_of(*a, &cx)][quartile_of(*b, &cy)] += 1.0;
    }
    let n = x.len() as f64;
    let rows: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
    let cols: Vec<f64> = (0..4).map(|j| table.iter().map(|r| r[j]).sum()).collect();
    let mut stat = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let expected = rows[i] * cols[j] / n;
            if expected > 0.0 {
                stat += (table[i][j] - expected).powi(2) / expected;
            }
        }
    }
    let dist = ChiSquared::new(9.0).map_err(|e| domain(e.to_string()))?;
    Ok((stat, 1.0 - dist.cdf(stat)))
}

/// Pearson and Spearman correlations with bootstrap and permutation intervals.
///
/// Spearman resamples reuse the full-sample ranks.
pub fn dependence_stats(x: &[f64], y: &[f64], resamples: usize, seed: u64) -> Result<DependenceStats> {
    if x.len() != y.len() || x.len() < 16 {
        return Err(domain("need two samples of equal length >= 16"));
    }
    if resamples < 40 {
        return Err(domain("need at least 40 resamples"));
    }
    let n = x.len();
    let (rx, ry) = (ranks(x), ranks(y));
    let pearson_v = pearson(x, y)?;
    let spearman_v = pearson(&rx, &ry)?;
    let mut boot = (Vec::with_capacity(resamples), Vec::with_capacity(resamples));
    let mut null = (Vec::with_capacity(resamples), Vec::with_capacity(resamples));
    let (mut bx, mut by, mut brx, mut bry) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for b in 0..resamples as u64 {
        let mut rng = path_rng(seed ^ 0xb007, b);
        for i in 0..n {
            let k = rng.random_range(0..n);
            bx[i] = x[k];
            by[i] = y[k];
            brx[i] = rx[k];
            bry[i] = ry[k];
        }
        boot.0.push(pearson(&bx, &by).unwrap_or(f64::NAN));
        boot.1.push(pearson(&brx, &bry).unwrap_or(f64::NAN));
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rng = path_rng(seed ^ 0x9e3, b);
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        for i in 0..n {
            by[i] = y[perm[i]];
            bry[i] = ry[perm[i]];
        }
        null.0.push(pearson(x, &by)?);
        null.1.push(pearson(&rx, &bry)?);
    }
    let (chi_square, chi_square_p) = chi_square_quartiles(x, y)?;
    let finite = |v: Vec<f64>| v.into_iter().filter(|x| x.is_finite()).collect::<Vec<_>>();
    Ok(DependenceStats {
        n,
        pearson: pearson_v,
        pearson_ci: central_interval(finite(boot.0)),
        pearson_null_ci: central_interval(null.0),
        spearman: spearman_v,
        spearman_ci: central_interval(finite(boot.1)),
        spearman_null_ci: central_interval(null.1),
        chi_square,
        chi_square_p,
    })
}

/// Monte Carlo probe of the dependence between `A_y(inf)` and the exit height `X` from `H_a`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DependenceReport {
    pub mu: f64,
    pub y: f64,
    pub a: f64,
    pub paths: u64,
    pub seed: u64,
    /// Paths still inside `H_a` at the censoring time; they are left out of the statistics.
    pub censored: u64,
    pub horizon: f64,
    pub stats: DependenceStats,
}

/// Parameters of [`conjecture_probe`] beyond `mu`, `y`, the path count and the seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeSettings {
    pub policy: HorizonPolicy,
    /// Exit level as a fraction of `y`.
    pub level_ratio: f64,
    pub resamples: usize,
    /// Censoring time of the exit search.
    pub exit_horizon: f64,
}

impl Default for ProbeSettings {
    fn default() -> Self {
        Self {
            policy: HorizonPolicy::default(),
            level_ratio: (-1.0f64).exp(),
            resamples: 200,
            exit_horizon: 1e12,
        }
    }
}

struct ProbePath {
    functional: f64,
    exit_height: Option<f64>,
}

fn probe_path(mu: f64, y: f64, a: f64, horizon: f64, settings: &ProbeSettings, seed: u64, id: u64) -> ProbePath {
    let cfg = MCConfig {
        paths: 1,
        step: 1e-4,
        horizon: settings.exit_horizon,
        seed: seed ^ 0x0005_eed2,
        sigma2: 2.0,
        drift_mu: mu,
    };
    let mut rng = path_rng(seed, id);
    let (mut u, mut w) = ((y / a).ln(), 0.0);
    let mut t = 0.0;
    let mut integral = 0.0;
    let mut exit = None;
    // the functional and the exit share one path until the truncation horizon
    while t < horizon {
        let h = settings.policy.dt.min(horizon - t).min(mc::step_size(&cfg, Point::new(u, w), None));
        let root = (2.0 * h).sqrt();
        let nu = u - 2.0 * mu * h + root * rng.sample::<f64, _>(StandardNormal);
        let nw = w + root * rng.sample::<f64, _>(StandardNormal);
        integral += 0.5 * h * ((2.0 * u).exp() + (2.0 * nu).exp());
        if exit.is_none() {
            if let Some(theta) = mc::crossing_fraction(w, nw, 2.0, h, &mut rng) {
                let place = u + theta * (nu - u);
                if place < 0.0 {
                    exit = Some(a * place.exp());
                }
            }
        }
        u = nu;
        w = nw;
        t += h;
    }
    if exit.is_none() {
        let rest = mc::simulate_path(&cfg, Point::new(u, w), id, None).record;
        if !rest.censored {
            exit = Some(a * rest.hit_place.exp());
        }
    }
    ProbePath { functional: a * a * integral, exit_height: exit }
}

/// Simulates `A_y(inf)` (truncated) and the exit height from `H_a`, `a = level_ratio * y`,
/// on common paths and reports their dependence. Nothing is asserted.
pub fn conjecture_probe(
    mu: f64,
    y: f64,
    paths: u64,
    seed: u64,
    settings: &ProbeSettings,
    exec: Execution,
) -> Result<DependenceReport> {
    require_positive("y", y)?;
    if !(settings.level_ratio > 0.0 && settings.level_ratio < 1.0) {
        return Err(domain("level_ratio must lie in (0, 1)"));
    }
    let horizon = settings.policy.horizon(mu)?;
    let a = settings.level_ratio * y;
    let outcomes = exec.map_indexed(paths, |i| probe_path(mu, y, a, horizon, settings, seed, i));
    let (mut fx, mut hx) = (Vec::new(), Vec::new());
    for o in &outcomes {
        if let Some(h) = o.exit_height {
            fx.push(o.functional);
            hx.push(h);
        }
    }
    let stats = dependence_stats(&fx, &hx, settings.resamples, seed)?;
    Ok(DependenceReport {
        mu,
        y,
        a,
        paths,
        seed,
        censored: paths - fx.len() as u64,
        horizon,
        stats,
    })
}

/// The dependence statistics on synthetic independent inputs shaped like the probe's.
pub fn probe_calibration(n: usize, resamples: usize, seed: u64) -> Result<DependenceStats> {
    let mut rng = path_rng(seed, u64::MAX);
    let x: Vec<f64> = (0..n).map(|_| (rng.sample::<f64, _>(StandardNormal)).exp()).collect();
    let y: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().ln()).collect();
    dependence_stats(&x, &y, resamples, seed)
}

/// Density of `ln(X / a)` at `v < 0`, `X` the exit height from `H_a`.
pub fn hyp_exit_place_log(a: f64, y: f64, v: f64) -> Result<f64> {
    require_positive("a", a)?;
    if !(y > a && y.is_finite()) {
        return Err(domain(format!("need y > a, got y={y}, a={a}")));
    }
    hit_place_density_axis((y / a).ln(), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_semiinf_with, Endpoint, Tail};
    use crate::QuadSpec;
    use std::f64::consts::E;

    fn spec() -> QuadSpec {
        QuadSpec::default()
    }

    #[test]
    fn drift_joint_value() {
        let v = drift_joint_density(1.0, 1.0, 1.0, -1.0).unwrap();
        let g2 = 2.0 * (-1.0f64).exp() / (2.0 * PI.sqrt());
        let oracle = 1.0 / (2.0 * PI) * g2 * E;
        assert!((v - oracle).abs() < 1e-14 * oracle);
        assert!((v - 0.0897936).abs() < 1e-7);
        let flat = drift_joint_density(0.0, 1.0, 0.7, -0.4).unwrap();
        let axis = crate::slit::joint_density_axis(1.0, 0.7, -0.4).unwrap();
        assert!((flat - axis).abs() < 1e-15 * axis);
        let tilted = crate::slit::joint_density_axis(1.0, 0.7, -0.4).unwrap() * (1.4f64 - 0.7).exp();
        assert!((drift_joint_density(1.0, 1.0, 0.7, -0.4).unwrap() - tilted).abs() < 1e-14 * tilted);
    }

    #[test]
    fn drift_level_is_a_density() {
        let f = |s: f64| if s <= 0.0 { 0.0 } else { drift_level_density(1.0, 1.0, s).unwrap() };
        let m = integrate_semiinf_with(f, 0.0, Tail::decay(1.0), &spec()).unwrap();
        assert!((m - 1.0).abs() < 1e-8);
        let mean = |mu: f64| {
            integrate_semiinf_with(
                |s: f64| if s <= 0.0 { 0.0 } else { s * drift_level_density(mu, 1.0, s).unwrap() },
                0.0,
                Tail::decay(mu * mu),
                &spec(),
            )
            .unwrap()
        };
        // inverse Gaussian mean a / (2 mu)
        assert!((mean(1.0) - 0.5).abs() < 1e-8);
        assert!(mean(2.0) < mean(1.0) && mean(1.0) < mean(0.5));
    }

    #[test]
    fn hyperbolic_place_values() {
        let v = hyp_exit_place(1.0, E, 1.0 / E).unwrap();
        assert!((v - E / (2.0 * PI)).abs() < 1e-15);
        assert!((v - 0.4326280).abs() < 1e-7);
        let direct = |a: f64, y: f64, z: f64| {
            ((y / a).ln() / (a / z).ln()).sqrt() / (PI * z * (y / z).ln())
        };
        for &(a, y, z) in &[(1.0, 2.0, 0.5), (2.0, 9.0, 0.01), (0.5, 0.6, 0.49)] {
            let v = hyp_exit_place(a, y, z).unwrap();
            assert!((v - direct(a, y, z)).abs() < 1e-12 * v);
        }
        assert!(hyp_exit_place(1.0, 0.5, 0.2).is_err());
        assert!(hyp_exit_place(1.0, 2.0, 1.5).is_err());
    }

    #[test]
    fn hyperbolic_place_normalized() {
        // z = a e^{v}, v < 0
        let m = integrate_semiinf_with(
            |x| if x <= 0.0 { 0.0 } else { hyp_exit_place_log(1.0, E, -x).unwrap() },
            0.0,
            Tail::default().with_start(Endpoint::InvSqrtLeft),
            &spec(),
        )
        .unwrap();
        assert!((m - 1.0).abs() < 1e-8, "{m}");
    }

    #[test]
    fn hyperbolic_joint_time_marginal_is_place() {
        // with the place law normalized, this makes the joint law a probability
        for joint in [hyp_exit_joint, hyp_exit_joint_matched] {
            for &(mu, z) in &[(0.5, 0.9), (1.0, 1.0 / E), (2.0, 1e-3)] {
                let time = integrate_semiinf_with(
                    |s| if s <= 0.0 { 0.0 } else { joint(mu, 1.0, E, s, z).unwrap() },
                    0.0,
                    Tail::default(),
                    &spec(),
                )
                .unwrap();
                let place = hyp_exit_place(1.0, E, z).unwrap();
                assert!((time - place).abs() < 1e-8 * place, "{time} vs {place}");
            }
        }
    }

    #[test]
    fn functional_mean_values() {
        assert_eq!(exp_functional_mean(2.0, 1.0, f64::INFINITY).unwrap(), 0.25);
        assert_eq!(exp_functional_mean(2.0, 1.0, 0.0).unwrap(), 0.0);
        let v = exp_functional_mean(2.0, 1.0, 1.0).unwrap();
        assert!((v - 0.2454211).abs() < 1e-7);
        assert!(matches!(exp_functional_mean(1.0, 1.0, f64::INFINITY), Err(Error::Divergence(_))));
        assert_eq!(exp_functional_mean(1.0, 2.0, 3.0).unwrap(), 12.0);
        assert!((exp_functional_mean(2.0, 3.0, 0.4).unwrap() - 9.0 * exp_functional_mean(2.0, 1.0, 0.4).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn horizon_policy() {
        let h = HorizonPolicy::default().horizon(2.0).unwrap();
        assert!((exp_functional_mean(2.0, 1.0, h).unwrap() - 0.25 * (1.0 - 1e-4)).abs() < 1e-15);
        assert!(HorizonPolicy::default().horizon(1.0).is_err());
    }

    #[test]
    fn functional_scales_with_start() {
        let pol = HorizonPolicy { tail_eps: 1e-2, dt: 1e-2 };
        let a = sample_exp_functional(2.0, 1.0, &pol, &mut path_rng(5, 0)).unwrap();
        let b = sample_exp_functional(2.0, 3.0, &pol, &mut path_rng(5, 0)).unwrap();
        assert!((b.a - 9.0 * a.a).abs() < 1e-12 * b.a);
        assert!((b.x - 3.0 * a.x).abs() < 1e-12 * b.x);
    }

    #[test]
    fn functional_mean_small_sample() {
        let pol = HorizonPolicy::default();
        let xs: Vec<f64> = (0..4000)
            .map(|i| sample_exp_functional(2.0, 1.0, &pol, &mut path_rng(9, i)).unwrap().a)
            .collect();
        let e = mc::MCEstimate::from_samples(&xs).unwrap();
        assert!(e.within_sigmas(0.25, 4.0), "{e:?}");
    }

    #[test]
    fn calibration_inside_null() {
        let stats = probe_calibration(4000, 200, 17).unwrap();
        assert!(stats.inside_null(), "{stats:?}");
        assert!(stats.chi_square_p > 1e-3);
    }

    #[test]
    fn dependence_detects_monotone_relation() {
        let x: Vec<f64> = (0..500).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| v.powi(3)).collect();
        let s = dependence_stats(&x, &y, 100, 1).unwrap();
        assert!((s.spearman - 1.0).abs() < 1e-12);
        assert!(!s.inside_null());
        assert!(s.chi_square_p < 1e-10);
    }

    #[test]
    fn probe_is_reproducible() {
        let settings = ProbeSettings { resamples: 50, ..ProbeSettings::default() };
        let a = conjecture_probe(2.0, 1.0, 300, 3, &settings, Execution::Sequential).unwrap();
        let b = conjecture_probe(2.0, 1.0, 300, 3, &settings, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(a.stats.n as u64 + a.censored == 300);
    }
}
