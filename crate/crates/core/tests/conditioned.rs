use slit_core::conditioned::{
    conditioned_density_doob, conditioned_density_signed, killed_density_2d, killed_survival,
};
use slit_core::mc::{estimate_survival, Execution, MCConfig};
use slit_core::quadrature::{integrate_real_line, integrate_semiinf_with, Endpoint, Tail};
use slit_core::slit::hit_place_density;
use slit_core::{Point, QuadSpec};
use statrs::function::erf::erf;

fn loose() -> QuadSpec {
    QuadSpec::default().with_rel_tol(1e-6).with_abs_tol(1e-9)
}

/// `int_{R^2} f`, for `f` even in the second coordinate.
fn plane_integral(f: impl Fn(Point) -> f64, t: f64) -> f64 {
    let outer = QuadSpec::default().with_rel_tol(1e-5).with_abs_tol(1e-8);
    let scale = 1.0 / (2.0 * t.sqrt());
    let row = |x2: f64| integrate_real_line(|x1| f(Point::new(x1, x2)), 0.0, Tail::decay(scale), &outer).unwrap();
    2.0 * integrate_semiinf_with(|x2| if x2 <= 0.0 { 0.0 } else { row(x2) }, 0.0, Tail::decay(scale), &outer)
        .unwrap()
}

#[test]
fn printed_conditioned_form_disintegrates_the_killed_density() {
    let (t, y) = (0.5, 1.0);
    let start = Point::new(y, 0.0);
    for w in [Point::new(0.5, 0.7), Point::new(-1.0, 0.5), Point::new(2.0, -1.0)] {
        let mixed = integrate_semiinf_with(
            |x| {
                if x <= 0.0 {
                    return 0.0;
                }
                conditioned_density_signed(t, y, -x, w, &loose()).unwrap() * hit_place_density(start, -x).unwrap()
            },
            0.0,
            Tail::decay(1.0).with_start(Endpoint::InvSqrtLeft),
            &QuadSpec::default().with_rel_tol(1e-7).with_abs_tol(1e-9),
        )
        .unwrap();
        let killed = killed_density_2d(t, start, w, &loose()).unwrap();
        println!("w={w}: mixture {mixed:.7} killed {killed:.7}");
        assert!((mixed - killed).abs() < 1e-4);
    }
}

#[test]
fn killed_mass_is_survival() {
    let (t, start) = (0.5, Point::new(1.0, 0.0));
    let mass = plane_integral(|w| killed_density_2d(t, start, w, &loose()).unwrap(), t);
    let survival = killed_survival(t, start, &QuadSpec::default()).unwrap();
    println!("killed mass {mass:.6}, survival {survival:.6}");
    assert!((mass - survival).abs() < 1e-3 * survival);
}

#[test]
fn doob_mass_is_conditional_survival() {
    // from (y, 0) the exit time given the place z is the level-hitting time of y - z
    let (t, y, z) = (0.5, 1.0, -0.5);
    let mass = plane_integral(|w| conditioned_density_doob(t, y, z, w, &loose()).unwrap(), t);
    let expected = erf((y - z) / (2.0 * t.sqrt()));
    println!("Doob mass {mass:.6}, P(tau > t | z) {expected:.6}");
    assert!((mass - expected).abs() < 1e-3 * expected);
}

#[test]
fn killed_semigroup_spot_check() {
    let (s, t) = (0.3, 0.4);
    let (a, b) = (Point::new(1.0, 0.0), Point::new(0.5, 0.0));
    let spec = QuadSpec::default().with_rel_tol(1e-4).with_abs_tol(1e-7);
    let chained = plane_integral(
        |w| {
            let first = killed_density_2d(s, a, w, &spec).unwrap();
            if first == 0.0 || w.x2 == 0.0 {
                return 0.0;
            }
            first * killed_density_2d(t, w, b, &spec).unwrap()
        },
        s + t,
    );
    let direct = killed_density_2d(s + t, a, b, &QuadSpec::default()).unwrap();
    println!("semigroup: chained {chained:.5} direct {direct:.5}");
    assert!((chained - direct).abs() < 1e-3 * direct);
}

#[test]
fn off_axis_survival_against_monte_carlo() {
    let start = Point::new(0.0, 1.0);
    let est = estimate_survival(&MCConfig::default().with_paths(20_000).with_seed(31), start, 1.0, Execution::default())
        .unwrap();
    let exact = killed_survival(1.0, start, &QuadSpec::default()).unwrap();
    println!("survival from (0,1): MC {:.4} +- {:.4}, quadrature {exact:.5}", est.value, est.std_error);
    assert!(est.within_sigmas(exact, 3.0));
}
