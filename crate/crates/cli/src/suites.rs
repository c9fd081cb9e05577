//! Named verification suites for `verify`.

use std::f64::consts::{FRAC_PI_2, PI};

use slit_core::conditioned::{conditioned_density_signed, killed_density_2d, killed_survival};
use slit_core::green::{
    green_lambda_axis, green_lambda_offaxis, green_log_axis, greenfact, killed_density_axis, killed_density_offaxis,
};
use slit_core::hyperbolic::{drift_joint_density, hyp_exit_place, hyp_exit_place_log, probe_calibration};
use slit_core::mc::{
    estimate_gauge, estimate_survival, hit_places_sorted, ks_statistic, sample_hit_places_exact, simulate_hits,
    Execution, MCConfig, MCEstimate,
};
use slit_core::quadrature::{
    fourier_at, integrate_finite, integrate_finite_with, integrate_real_line, integrate_semiinf_with, laplace_at,
    Endpoint, Tail,
};
use slit_core::slit::{
    conditional_gauge, hit_place_cdf_axis, hit_place_density, hit_place_density_axis, hit_place_density_interval,
    hit_place_density_sweep, joint_density_axis, level_hit_density,
};
use slit_core::specfun::{bessel_k, bessel_k_algebraic, bessel_k_half, bessel_k_reflection};
use slit_core::stable::{
    rel_cauchy_density, rel_cauchy_density_subordinated, rel_potential, rel_potential_by_quadrature,
    subordinator_density, RelParams,
};
use slit_core::{Convention, Error, Point, QuadSpec, Result};

pub const SUITES: &[&str] = &["kernels", "bessel", "stable", "green", "killed", "hyperbolic", "mc-agreement"];

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub convention: &'static str,
    pub value: f64,
    pub reference: f64,
    /// Allowed `|value - reference|`; for a rejection check, the distance that must be exceeded.
    pub bound: f64,
    /// `false` when the check asserts a mismatch.
    pub expect_match: bool,
}

impl Check {
    pub fn passed(&self) -> bool {
        let gap = (self.value - self.reference).abs();
        if !gap.is_finite() {
            return false;
        }
        if self.expect_match { gap <= self.bound } else { gap > self.bound }
    }
}

/// Value of a numerical result, falling back to the best estimate on a tolerance failure.
fn value_of(r: Result<f64>) -> f64 {
    match r {
        Ok(v) => v,
        Err(Error::Tolerance { estimate, .. }) => estimate,
        Err(_) => f64::NAN,
    }
}

struct Builder {
    checks: Vec<Check>,
    tol: Option<f64>,
}

impl Builder {
    fn new(tol: Option<f64>) -> Self {
        Self { checks: Vec::new(), tol }
    }

    /// Deterministic check; `--tol` replaces the default bound.
    fn exact(&mut self, name: impl Into<String>, conv: &'static str, value: Result<f64>, reference: f64, default: f64) {
        self.checks.push(Check {
            name: name.into(),
            convention: conv,
            value: value_of(value),
            reference,
            bound: self.tol.unwrap_or(default),
            expect_match: true,
        });
    }

    /// Relative deterministic check, reported as the ratio against 1.
    fn relative(&mut self, name: impl Into<String>, conv: &'static str, value: Result<f64>, reference: f64, default: f64) {
        self.exact(name, conv, value.map(|v| v / reference), 1.0, default);
    }

    /// Monte Carlo check at three standard errors.
    fn mc(&mut self, name: impl Into<String>, conv: &'static str, est: &MCEstimate, reference: f64, matches: bool) {
        self.checks.push(Check {
            name: name.into(),
            convention: conv,
            value: est.value,
            reference,
            bound: 3.0 * est.std_error,
            expect_match: matches,
        });
    }

    /// A statistic that must stay below `limit`.
    fn below(&mut self, name: impl Into<String>, conv: &'static str, value: f64, limit: f64) {
        self.checks.push(Check {
            name: name.into(),
            convention: conv,
            value,
            reference: 0.0,
            bound: limit,
            expect_match: true,
        });
    }
}

const V1: &str = "VAR1T";
const V2: &str = "VAR2T";
const NA: &str = "n/a";

fn tight() -> QuadSpec {
    QuadSpec::default().with_rel_tol(1e-12).with_abs_tol(1e-14)
}

/// `int_{z<0} f(z) dz` for an exit density with `|z|^(-1/2)` onset and `|z|^(-3/2)` tail,
/// through `z = -tan^2(th)`.
/// Like `f64::max` but a NaN on either side wins, so failed evaluations surface.
fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn slit_mass(f: impl Fn(f64) -> f64) -> Result<f64> {
    integrate_finite(
        |th: f64| {
            let tn = th.tan();
            let z = -tn * tn;
            if z >= 0.0 || !z.is_finite() {
                return 0.0;
            }
            let fz = f(z);
            // the Jacobian overflows near pi/2 where the density has already vanished
            if fz == 0.0 {
                return 0.0;
            }
            fz * 2.0 * tn / th.cos().powi(2)
        },
        0.0,
        FRAC_PI_2,
        &tight(),
    )
}

pub fn run_suite(name: &str, tol: Option<f64>, seed: u64) -> Option<Vec<Check>> {
    let mut b = Builder::new(tol);
    match name {
        "kernels" => kernels(&mut b),
        "bessel" => bessel(&mut b),
        "stable" => stable(&mut b),
        "green" => green(&mut b),
        "killed" => killed(&mut b),
        "hyperbolic" => hyperbolic(&mut b),
        "mc-agreement" => mc_agreement(&mut b, seed),
        _ => return None,
    }
    Some(b.checks)
}

fn kernels(b: &mut Builder) {
    for w in [Point::new(1.0, 0.0), Point::new(0.0, 1.0), Point::new(1.0, 1.0), Point::new(-1.0, 0.5)] {
        let mass = slit_mass(|z| hit_place_density(w, z).unwrap_or(f64::NAN));
        b.exact(format!("exit density mass from {w}"), V2, mass, 1.0, 1e-8);
    }
    b.exact("quartile law P(exit > -1) from (1,0)", V2, hit_place_cdf_axis(1.0, 1.0), 0.5, 1e-15);
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            for k in 0..10 {
                let (x, s, z) = (0.1 + 0.5 * i as f64, 0.05 * 1.6f64.powi(j), -0.05 - 0.45 * k as f64);
                let joint = joint_density_axis(x, s, z).unwrap_or(f64::NAN);
                let prod = hit_place_density_axis(x, z).unwrap_or(f64::NAN) * level_hit_density(x - z, s).unwrap_or(f64::NAN);
                if prod > 0.0 {
                    worst = nan_max(worst, (joint / prod - 1.0).abs());
                }
            }
        }
    }
    b.exact("time-place factorization, max rel err on 1000 points", V2, Ok(worst), 0.0, 1e-12);
    for w in [Point::new(1.0, 1.0), Point::new(-2.0, 0.3)] {
        let sweep = hit_place_density_sweep(w, -0.7, &tight());
        let closed = hit_place_density(w, -0.7).unwrap_or(f64::NAN);
        b.relative(format!("sweep vs closed exit density from {w}"), V2, sweep, closed, 1e-8);
    }
    // z = +-1/cos(u) on (0, pi/2) covers each ray
    let interval = integrate_finite_with(
        |u: f64| {
            let z = 1.0 / u.cos();
            if !z.is_finite() || z <= 1.0 {
                return 0.0;
            }
            let jac = u.sin() / u.cos().powi(2);
            let both = hit_place_density_interval(0.3, z).unwrap_or(f64::NAN)
                + hit_place_density_interval(0.3, -z).unwrap_or(f64::NAN);
            both * jac
        },
        0.0,
        FRAC_PI_2,
        Endpoint::Regular,
        &tight(),
    );
    b.exact("two-ray exit density mass from 0.3", V2, interval, 1.0, 1e-8);
}

fn bessel(b: &mut Builder) {
    for z in [0.1, 1.0, 10.0] {
        let closed = (PI / (2.0 * z)).sqrt() * (-z).exp();
        b.relative(format!("K_1/2({z}) vs closed form"), NA, bessel_k(0.5, z), closed, 1e-10);
    }
    for (nu, z) in [(0.0, 0.2), (0.3, 1.0), (1.0, 5.0), (2.5, 2.0)] {
        let alg = bessel_k_algebraic(nu, z, &tight()).unwrap_or(f64::NAN);
        b.relative(format!("K_{nu}({z}) vs algebraic representation"), NA, bessel_k(nu, z), alg, 1e-8);
    }
    for n in [1u32, 3] {
        let half = bessel_k_half(n, 1.5).unwrap_or(f64::NAN);
        b.relative(format!("K_{n}.5(1.5) vs finite sum"), NA, bessel_k(n as f64 + 0.5, 1.5), half, 1e-10);
    }
    let refl = bessel_k_reflection(0.3, 1.0).unwrap_or(f64::NAN);
    b.relative("K_0.3(1) vs reflection formula", NA, bessel_k(0.3, 1.0), refl, 1e-8);
}

fn stable(b: &mut Builder) {
    let mass = integrate_semiinf_with(
        |u| if u <= 0.0 { 0.0 } else { subordinator_density(1.0, u).unwrap_or(f64::NAN) },
        0.0,
        Tail::default(),
        &QuadSpec::default().with_rel_tol(1e-10),
    );
    b.exact("1/2-stable subordinator mass at t=1", V2, mass, 1.0, 1e-6);
    let p = RelParams::new(1, 1.0, 1.0).expect("valid parameters");
    let f = |x: f64| rel_cauchy_density(&p, &[x]).unwrap_or(f64::NAN);
    b.exact("relativistic Cauchy mass (d=1, m=1, t=1)", NA, integrate_real_line(f, 0.0, Tail::decay(1.0), &tight()), 1.0, 1e-6);
    let ft = fourier_at(f, 1.0, &tight()).map(|c| c.re);
    b.exact("relativistic Cauchy transform at 1", NA, ft, (1.0 - 2f64.sqrt()).exp(), 1e-6);
    let sub = rel_cauchy_density_subordinated(&p, &[0.7], &QuadSpec::default());
    b.relative("relativistic Cauchy by subordination at 0.7", NA, sub, f(0.7), 1e-7);
    let pot = rel_potential_by_quadrature(3, 1.0, 1.0, 2.0, &QuadSpec::default());
    b.relative("relativistic potential d=3 r=2 by quadrature", NA, pot, rel_potential(3, 1.0, 1.0, 2.0).unwrap_or(f64::NAN), 1e-7);
}

fn green(b: &mut Builder) {
    let q = tight();
    b.exact("lambda -> 0 limit at (1, 4)", V1, green_lambda_axis(1e-10, 1.0, 4.0, &q), 3f64.ln() / PI, 1e-8);
    let lap = laplace_at(
        |t| if t <= 0.0 { 0.0 } else { killed_density_axis(t, 1.0, 4.0).unwrap_or(f64::NAN) },
        0.5,
        &QuadSpec::default().with_rel_tol(1e-10),
    );
    b.exact("Laplace transform of killed axis density", V1, lap, green_lambda_axis(1.0, 1.0, 4.0, &q).unwrap_or(f64::NAN), 1e-6);
    let p = Point::new(1.0, 1.0);
    let fact = greenfact(p, 1.0, &QuadSpec::default()).unwrap_or(f64::NAN);
    b.relative("logarithmic Green function vs factorized form", V1, green_log_axis(1.0, p, &QuadSpec::default()), fact, 1e-6);
    let near = green_lambda_offaxis(1.0, Point::new(1.0, 1e-4), 2.0, &QuadSpec::default());
    b.relative("off-axis Green function near the axis", V1, near, green_lambda_axis(1.0, 1.0, 2.0, &q).unwrap_or(f64::NAN), 1e-3);
    for (x, w, lambda) in [(1.0, -1.0, 1.0), (0.5, -2.0, 0.3)] {
        let g = conditional_gauge(Point::new(x, 0.0), w, lambda, &QuadSpec::default());
        b.relative(format!("axis gauge at x={x}, w={w}, lambda={lambda}"), V1, g, (-lambda * (x - w)).exp(), 1e-12);
    }
    let unit = conditional_gauge(Point::new(0.3, 2.0), -4.0, 0.0, &QuadSpec::default());
    b.exact("gauge at lambda = 0", V1, unit, 1.0, 1e-10);
}

fn killed(b: &mut Builder) {
    let q = QuadSpec::default().with_rel_tol(1e-8).with_abs_tol(1e-11);
    let start = Point::new(1.0, 0.0);
    let inner = QuadSpec::default().with_rel_tol(1e-9).with_abs_tol(1e-13);
    let exited = integrate_semiinf_with(
        |x| {
            if x <= 0.0 {
                return 0.0;
            }
            value_of(integrate_finite_with(
                |s| if s <= 0.0 { 0.0 } else { joint_density_axis(1.0, s, -x).unwrap_or(f64::NAN) },
                0.0,
                1.0,
                Endpoint::Regular,
                &inner,
            ))
        },
        0.0,
        Tail::decay(0.5).with_start(Endpoint::InvSqrtLeft),
        &QuadSpec::default().with_rel_tol(1e-8),
    );
    let oracle = 1.0 - value_of(exited);
    b.exact("survival at t=1 from (1,0)", V2, killed_survival(1.0, start, &q), oracle, 1e-7);
    let (u, v) = (Point::new(1.0, 0.5), Point::new(-0.5, 1.0));
    let uv = killed_density_2d(0.7, u, v, &q);
    b.relative("killed density symmetry", V2, uv, value_of(killed_density_2d(0.7, v, u, &q)), 1e-5);
    let w = Point::new(0.5, 0.7);
    let mixed = integrate_semiinf_with(
        |x| {
            if x <= 0.0 {
                return 0.0;
            }
            value_of(conditioned_density_signed(0.5, 1.0, -x, w, &q)) * hit_place_density(start, -x).unwrap_or(f64::NAN)
        },
        0.0,
        Tail::decay(1.0).with_start(Endpoint::InvSqrtLeft),
        &QuadSpec::default().with_rel_tol(1e-7).with_abs_tol(1e-9),
    );
    b.exact("conditioned densities mix to the killed density", V2, mixed, value_of(killed_density_2d(0.5, start, w, &q)), 1e-4);
    let near = killed_density_offaxis(1.0, Point::new(1.0, 1e-3), 2.0, &QuadSpec::default());
    b.relative("off-axis killed density near the axis", V1, near, killed_density_axis(1.0, 1.0, 2.0).unwrap_or(f64::NAN), 5e-3);
}

fn hyperbolic(b: &mut Builder) {
    let mut worst: f64 = 0.0;
    for mu in [0.5, 1.0, 2.0] {
        for (y, z) in [(1.0, -1.0), (0.5, -2.0), (2.0, -0.3)] {
            let marginal = value_of(integrate_semiinf_with(
                |s| if s <= 0.0 { 0.0 } else { drift_joint_density(mu, y, s, z).unwrap_or(f64::NAN) },
                0.0,
                Tail::decay(mu * mu),
                &QuadSpec::default(),
            ));
            worst = nan_max(worst, (marginal - hit_place_density_axis(y, z).unwrap_or(f64::NAN)).abs());
        }
    }
    b.exact("drifted place marginal is the driftless law, max abs err", V2, Ok(worst), 0.0, 1e-8);
    let (a, y) = (1.0, std::f64::consts::E);
    // roughly 1% of the height law sits below the smallest normal double, so
    // integrate the law of ln(X/a) instead of the heights themselves
    let mass = slit_mass(|v| hyp_exit_place_log(a, y, v).unwrap_or(f64::NAN));
    b.exact("hyperbolic exit height mass", V2, mass, 1.0, 1e-6);
    let mut worst: f64 = 0.0;
    for z in [1e-200, 1e-3, 0.2, 0.5, 0.9, 0.999] {
        let closed = ((y / a).ln() / (a / z).ln()).sqrt() / ((y / z).ln() * std::f64::consts::PI * z);
        let rel = hyp_exit_place(a, y, z).map(|d| (d / closed - 1.0).abs()).unwrap_or(f64::NAN);
        worst = nan_max(worst, rel);
    }
    b.exact("hyperbolic exit height density vs closed form, max rel err", V2, Ok(worst), 0.0, 1e-12);
    let calib = probe_calibration(2_000, 200, 1);
    let inside = calib.map(|c| if c.inside_null() { 1.0 } else { 0.0 });
    b.exact("dependence statistics on independent inputs fall in the null band", NA, inside, 1.0, 0.0);
}

fn mc_agreement(b: &mut Builder, seed: u64) {
    let start = Point::new(1.0, 0.0);
    let exec = Execution::default();
    let exits = MCConfig::default().with_paths(20_000).with_horizon(1e12).with_seed(seed);
    match simulate_hits(&exits, start, exec) {
        Ok(recs) => {
            let (places, _) = hit_places_sorted(&recs);
            let ks = ks_statistic(&places, |z| 1.0 - hit_place_cdf_axis(1.0, (-z).max(0.0)).unwrap_or(f64::NAN));
            b.below("Euler exit places from (1,0), KS at 2e4 paths", V2, value_of(ks), 0.015);
        }
        Err(e) => b.exact("Euler exit places from (1,0)", V2, Err(e), 0.0, 0.0),
    }
    match sample_hit_places_exact(start, 1_000_000, seed, exec) {
        Ok(places) => {
            let above = places.iter().filter(|z| **z > -1.0).count() as u64;
            let est = MCEstimate::from_binomial(above, places.len() as u64).expect("nonempty sample");
            b.mc("exact sampler P(exit > -1) at 1e6 draws", V2, &est, 0.5, true);
        }
        Err(e) => b.exact("exact sampler", V2, Err(e), 0.5, 0.0),
    }
    let oracle = value_of(killed_survival(1.0, start, &QuadSpec::default()));
    if let Ok(est) = estimate_survival(&MCConfig::default().with_paths(20_000).with_seed(seed), start, 1.0, exec) {
        b.mc("survival at t=1 from (1,0)", V2, &est, oracle, true);
    }
    let gauge = value_of(slit_mass(|z| hit_place_density_axis(1.0, z).unwrap_or(f64::NAN) * (-(1.0 - z)).exp()));
    let cfg = MCConfig::default().with_paths(20_000).with_seed(seed);
    if let Ok(est) = estimate_gauge(&cfg, start, 1.0, exec) {
        b.mc("gauge E exp(-tau) with sigma2 = 2", Convention::Var2T.tag(), &est, gauge, true);
    }
    if let Ok(est) = estimate_gauge(&cfg.with_sigma2(1.0), start, 1.0, exec) {
        b.mc("gauge E exp(-tau) with sigma2 = 1 must miss", Convention::Var1T.tag(), &est, gauge, false);
    }
}
