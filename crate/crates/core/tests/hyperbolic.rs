use slit_core::hyperbolic::{
    drift_joint_density, estimate_functional_limit, estimate_martingale, exp_functional_mean, martingale_constant,
    HorizonPolicy,
};
use slit_core::mc::{hit_places_sorted, ks_statistic, simulate_hits, Execution, MCConfig};
use slit_core::quadrature::{integrate_finite_with, integrate_semiinf_with, Endpoint, Tail};
use statrs::function::erf::erfc;
use slit_core::slit::{hit_place_cdf_axis, hit_place_density_axis};
use slit_core::{Point, QuadSpec};

#[test]
fn drift_place_marginal_is_free_of_mu() {
    let spec = QuadSpec::default();
    for &mu in &[0.25, 0.5, 1.0, 2.0, 4.0] {
        for &(y, z) in &[(1.0, -1.0), (0.3, -2.5), (2.0, -0.1)] {
            let marginal = integrate_semiinf_with(
                |s| if s <= 0.0 { 0.0 } else { drift_joint_density(mu, y, s, z).unwrap() },
                0.0,
                Tail::decay(mu * mu),
                &spec,
            )
            .unwrap();
            let h = hit_place_density_axis(y, z).unwrap();
            assert!((marginal - h).abs() < 1e-8 * h.max(1.0), "mu={mu} y={y} z={z}: {marginal} vs {h}");
        }
    }
}

#[test]
fn drifted_paths_exit_with_the_driftless_place_law() {
    let cfg = MCConfig::default().with_paths(20_000).with_drift(1.0).with_horizon(1e10).with_seed(77);
    let recs = simulate_hits(&cfg, Point::new(1.0, 0.0), Execution::default()).unwrap();
    let (places, censored) = hit_places_sorted(&recs);
    // the vertical coordinate is driftless, so exits far down the slit can take very long
    assert!(censored < 20, "{censored} censored");
    let d = ks_statistic(&places, |z| 1.0 - hit_place_cdf_axis(1.0, -z).unwrap()).unwrap();
    println!("drift 1 place KS {d:.4}");
    assert!(d < 0.015, "KS {d}");
}

#[test]
fn functional_limit_mean() {
    let policy = HorizonPolicy::default();
    let est = estimate_functional_limit(2.0, 1.0, &policy, 20_000, 5, Execution::default()).unwrap();
    let exact = exp_functional_mean(2.0, 1.0, f64::INFINITY).unwrap();
    println!("E A(inf): MC {:.5} +- {:.5}, exact {exact}", est.value, est.std_error);
    assert!(est.within_sigmas(exact, 3.0));
}

#[test]
fn martingale_mean_is_constant_in_time() {
    let (mu, y) = (1.5, 1.0);
    let start = martingale_constant(mu).unwrap() * y * y;
    let ests = estimate_martingale(mu, y, &[0.25, 1.0, 3.0], 1e-3, 20_000, 9, Execution::default()).unwrap();
    for e in &ests {
        println!("A + c X^2: {:.5} +- {:.5}, start {start}", e.value, e.std_error);
        assert!(e.within_sigmas(start, 3.0));
    }
}

/// `P(T <= t)` for `a + B - 2 mu t` (VAR2T) to reach 0, the inverse Gaussian law.
fn drift_level_cdf(mu: f64, a: f64, t: f64) -> f64 {
    let phi = |x: f64| 0.5 * erfc(-x / std::f64::consts::SQRT_2);
    let root = (2.0 * t).sqrt();
    phi((2.0 * mu * t - a) / root) + (2.0 * mu * a).exp() * phi(-(2.0 * mu * t + a) / root)
}

#[test]
fn drifted_exit_times_follow_the_tilted_marginal() {
    let (mu, y) = (1.0, 1.0);
    let cfg = MCConfig::default().with_paths(20_000).with_drift(mu).with_horizon(1e10).with_seed(78);
    let recs = simulate_hits(&cfg, Point::new(y, 0.0), Execution::default()).unwrap();
    let spec = QuadSpec::default().with_rel_tol(1e-8);
    // exit time law restricted to exits in (lo, hi), from the place density and the level-hitting law
    let slice_cdf = |lo: f64, hi: f64, t: f64| {
        let mass = |g: &dyn Fn(f64) -> f64| {
            integrate_finite_with(
                |x| if x <= -hi { 0.0 } else { hit_place_density_axis(y, -x).unwrap() * g(x) },
                -hi,
                -lo,
                if hi == 0.0 { Endpoint::InvSqrtLeft } else { Endpoint::Regular },
                &spec,
            )
            .unwrap()
        };
        mass(&|x| drift_level_cdf(mu, y + x, t)) / mass(&|_| 1.0)
    };
    for &(lo, hi) in &[(-3.0, 0.0), (-1.0, -0.25)] {
        let mut times: Vec<f64> = recs
            .iter()
            .filter(|r| !r.censored && r.hit_place > lo && r.hit_place < hi)
            .map(|r| r.hit_time)
            .collect();
        times.sort_by(f64::total_cmp);
        let d = ks_statistic(&times, |t| if t <= 0.0 { 0.0 } else { slice_cdf(lo, hi, t) }).unwrap();
        println!("exit times for places in ({lo}, {hi}): n {}, KS {d:.4}", times.len());
        assert!(d < 0.02, "KS {d}");
    }
}
