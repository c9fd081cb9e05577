//! Transition densities of Brownian motion killed on the slit, and of the
//! motion conditioned to leave through a fixed slit point. Everything here is VAR2T.

use std::f64::consts::PI;

use statrs::function::erf::erfc;

use crate::error::{domain, require_negative, require_positive, Error, Result};
use crate::point::Point;
use crate::quadrature::{
    integrate_finite_with, integrate_halfline_breaks, integrate_semiinf_with, Endpoint, ErrorSlot,
    QuadSpec, Tail,
};
use crate::slit::{hit_place_density, joint_density_axis, joint_density_general, level_hit_density};

/// Planar heat kernel `exp(-|u - v|^2 / 4t) / (4 pi t)`.
pub fn free_density(t: f64, u: Point, v: Point) -> Result<f64> {
    require_positive("t", t)?;
    let d2 = (u.x1 - v.x1).powi(2) + (u.x2 - v.x2).powi(2);
    Ok((-d2 / (4.0 * t)).exp() / (4.0 * PI * t))
}

/// Joint density of exit time and place from `start` (VAR2T).
///
/// Off the axis the VAR1T general-start density is rescaled: a VAR2T path at
/// time `s` is a VAR1T path at time `2s`, so `f(s) = 2 f_1(2s)`.
pub fn exit_joint_density(start: Point, s: f64, z: f64) -> Result<f64> {
    if start.x2 == 0.0 && start.x1 > 0.0 {
        joint_density_axis(start.x1, s, z)
    } else {
        Ok(2.0 * joint_density_general(start, 2.0 * s, z)?)
    }
}

/// `r(t) = int_0^t g(y - z, s) p(t - s, (z, 0), w) ds`, with `g` the level-hitting density.
pub fn r_zd(t: f64, y: f64, z: f64, w: Point, spec: &QuadSpec) -> Result<f64> {
    require_positive("t", t)?;
    require_positive("y", y)?;
    require_negative("z", z)?;
    if !w.is_finite() {
        return Err(domain("w must be finite"));
    }
    let foot = Point::new(z, 0.0);
    let slot = ErrorSlot::new();
    let r = integrate_finite_with(
        |s| {
            if s <= 0.0 || s >= t {
                return 0.0;
            }
            slot.take(level_hit_density(y - z, s)) * slot.take(free_density(t - s, foot, w))
        },
        0.0,
        t,
        Endpoint::LogRight,
        spec,
    );
    slot.finish(r)
}

/// The conditioned density as written, `p(t, (y,0), w) h(w, z) / h(y, z) - r(t)`, without a sign check.
pub fn conditioned_density_signed(t: f64, y: f64, z: f64, w: Point, spec: &QuadSpec) -> Result<f64> {
    w.require_in_domain("w")?;
    let start = Point::new(y, 0.0);
    let ratio = hit_place_density(w, z)? / hit_place_density(start, z)?;
    Ok(free_density(t, start, w)? * ratio - r_zd(t, y, z, w, spec)?)
}

/// Density at `w` of the motion from `(y, 0)` conditioned to exit at `(z, 0)`, in the printed form
/// `p(t, (y,0), w) h(w, z) / h(y, z) - r(t)`.
///
/// This agrees with the Doob transform only after integrating against `h(y, z) dz`;
/// pointwise it can be negative, which is reported as [`Error::Consistency`].
/// [`conditioned_density_doob`] is the pointwise h-transform.
pub fn conditioned_density(t: f64, y: f64, z: f64, w: Point, spec: &QuadSpec) -> Result<f64> {
    let v = conditioned_density_signed(t, y, z, w, spec)?;
    let slack = 10.0 * spec.abs_tol;
    if v < -slack {
        return Err(Error::Consistency(format!(
            "conditioned density is {v:.6e} at t={t}, y={y}, z={z}, w={w}"
        )));
    }
    Ok(v.max(0.0))
}

/// Doob transform `p_D(t, (y,0), w) h(w, z) / h(y, z)` of the killed density.
pub fn conditioned_density_doob(t: f64, y: f64, z: f64, w: Point, spec: &QuadSpec) -> Result<f64> {
    require_positive("y", y)?;
    let start = Point::new(y, 0.0);
    let ratio = hit_place_density(w, z)? / hit_place_density(start, z)?;
    Ok(killed_density_2d(t, start, w, spec)? * ratio)
}

fn slit_peaks(points: &[Point]) -> Vec<f64> {
    points.iter().filter(|p| p.x1 < 0.0).map(|p| -p.x1).collect()
}

/// Killed transition density
/// `p(t, start, w) - int_0^t int_{z<0} f(s, z) p(t - s, (z, 0), w) dz ds`,
/// with `f` the joint exit density from [`exit_joint_density`].
pub fn killed_density_2d(t: f64, start: Point, w: Point, spec: &QuadSpec) -> Result<f64> {
    require_positive("t", t)?;
    start.require_in_domain("start")?;
    if !w.in_slit_domain() {
        return if w.is_finite() { Ok(0.0) } else { Err(domain("w must be finite")) };
    }
    let free = free_density(t, start, w)?;
    let inner = spec.loosened(100.0);
    let slot = ErrorSlot::new();
    let f = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let foot = Point::new(-x, 0.0);
        let r = integrate_finite_with(
            |s| {
                if s <= 0.0 || s >= t {
                    return 0.0;
                }
                let j = exit_joint_density(start, s, -x).unwrap_or(f64::NAN);
                let k = (-((foot.x1 - w.x1).powi(2) + w.x2 * w.x2) / (4.0 * (t - s))).exp()
                    / (4.0 * PI * (t - s));
                if j == 0.0 { 0.0 } else { j * k }
            },
            0.0,
            t,
            Endpoint::LogRight,
            &inner,
        );
        slot.take(r)
    };
    let peaks = slit_peaks(&[start, w]);
    let tail = Tail::decay(1.0 / (2.0 * t.sqrt())).with_start(Endpoint::InvSqrtLeft);
    let swept = integrate_halfline_breaks(&f, None, &peaks, tail, spec);
    let swept = slot.finish(swept)?;
    Ok((free - swept).clamp(0.0, free))
}

/// `P^start(tau_D > t)`, from the exit time law.
///
/// From the positive axis the time integral is done in closed form:
/// `1 - int h(y, z) erfc((y - z) / 2 sqrt t) dz`.
pub fn killed_survival(t: f64, start: Point, spec: &QuadSpec) -> Result<f64> {
    require_positive("t", t)?;
    start.require_in_domain("start")?;
    let slot = ErrorSlot::new();
    let tail = Tail::decay(1.0 / (2.0 * t.sqrt())).with_start(Endpoint::InvSqrtLeft);
    let peaks = slit_peaks(&[start]);
    let exited = if start.x2 == 0.0 {
        let y = start.x1;
        let f = |x: f64| {
            if x <= 0.0 {
                return 0.0;
            }
            slot.take(hit_place_density(start, -x)) * erfc((y + x) / (2.0 * t.sqrt()))
        };
        integrate_semiinf_with(f, 0.0, tail, spec)
    } else {
        let inner = spec.loosened(100.0);
        let f = |x: f64| {
            if x <= 0.0 {
                return 0.0;
            }
            let r = integrate_finite_with(
                |s| if s <= 0.0 { 0.0 } else { exit_joint_density(start, s, -x).unwrap_or(f64::NAN) },
                0.0,
                t,
                Endpoint::Regular,
                &inner,
            );
            slot.take(r)
        };
        integrate_halfline_breaks(&f, None, &peaks, tail, spec)
    };
    let exited = slot.finish(exited)?;
    Ok((1.0 - exited).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec() -> QuadSpec {
        QuadSpec::default()
    }

    #[test]
    fn free_density_values() {
        let o = Point::new(0.0, 0.0);
        assert!((free_density(1.0, o, o).unwrap() - 0.0795775).abs() < 1e-7);
        let v = free_density(1.0, o, Point::new(0.6, 0.8)).unwrap();
        assert!((v - 0.0619750).abs() < 1e-7);
        assert!(free_density(0.0, o, o).is_err());
    }

    #[test]
    fn r_zd_bounds() {
        let w = Point::new(0.0, 0.5);
        let r = r_zd(1.0, 1.0, -1.0, w, &spec()).unwrap();
        assert!(r > 0.0 && r < 1.0 / (4.0 * PI));
        assert!(r_zd(1e-4, 1.0, -1.0, w, &spec()).unwrap() < 1e-100);
        let far = Point::new(10.0, 10.0);
        let mut prev = 0.0;
        for t in [0.5, 1.0, 2.0, 4.0, 8.0] {
            let r = r_zd(t, 1.0, -1.0, far, &spec()).unwrap();
            assert!(r >= prev);
            prev = r;
        }
    }

    #[test]
    fn exit_joint_density_matches_axis_form() {
        for &(x, s, z) in &[(1.0, 0.5, -1.0), (2.0, 3.0, -0.1), (0.3, 0.05, -0.4)] {
            let a = joint_density_axis(x, s, z).unwrap();
            let b = 2.0 * joint_density_general(Point::new(x, 0.0), 2.0 * s, z).unwrap();
            assert!((a - b).abs() < 1e-13 * a.max(1e-300), "{a} vs {b}");
        }
    }

    #[test]
    fn killed_density_small_time() {
        let p = Point::new(1.0, 0.0);
        let k = killed_density_2d(0.01, p, p, &spec()).unwrap();
        let f = free_density(0.01, p, p).unwrap();
        assert!((k - f).abs() < 1e-6);
        let q = Point::new(-1.0, 0.3);
        let k = killed_density_2d(1.0, p, q, &spec()).unwrap();
        assert!(k < free_density(1.0, p, q).unwrap() && k > 0.0);
        assert_eq!(killed_density_2d(1.0, p, Point::new(-1.0, 0.0), &spec()).unwrap(), 0.0);
    }

    #[test]
    fn killed_density_symmetric() {
        let s = spec().with_rel_tol(1e-8);
        let a = Point::new(1.0, 0.5);
        let b = Point::new(-0.5, -1.0);
        let ab = killed_density_2d(1.0, a, b, &s).unwrap();
        let ba = killed_density_2d(1.0, b, a, &s).unwrap();
        assert!((ab - ba).abs() < 1e-7, "{ab} vs {ba}");
    }

    #[test]
    fn survival_forms_agree() {
        let s = spec();
        let axis = killed_survival(1.0, Point::new(1.0, 0.0), &s).unwrap();
        let nested = killed_survival(1.0, Point::new(1.0, 1e-9), &s).unwrap();
        assert!((axis - nested).abs() < 1e-6, "{axis} vs {nested}");
        assert!(killed_survival(1e-3, Point::new(1.0, 0.0), &s).unwrap() > 1.0 - 1e-12);
        let a = killed_survival(1.0, Point::new(0.0, 1.0), &s).unwrap();
        let b = killed_survival(1.0, Point::new(0.0, -1.0), &s).unwrap();
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn printed_conditioned_form_goes_negative() {
        let s = spec();
        let w = Point::new(-3.0, 2.0);
        let v = conditioned_density_signed(5.0, 1.0, -1.0, w, &s).unwrap();
        assert!(v < -1e-4);
        assert!(matches!(conditioned_density(5.0, 1.0, -1.0, w, &s), Err(Error::Consistency(_))));
        assert!(conditioned_density_doob(5.0, 1.0, -1.0, w, &s).unwrap() > 0.0);
    }

    #[test]
    fn conditioned_small_time_near_start() {
        let s = spec();
        let w = Point::new(1.05, 0.02);
        let a = conditioned_density(0.01, 1.0, -1.0, w, &s).unwrap();
        let b = conditioned_density_doob(0.01, 1.0, -1.0, w, &s).unwrap();
        assert!((a - b).abs() < 1e-6 * b, "{a} vs {b}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn killed_below_free(t in 0.1f64..3.0, x in -2.0f64..2.0, y in -2.0f64..2.0) {
            prop_assume!(y.abs() > 0.05);
            let start = Point::new(1.0, 0.0);
            let w = Point::new(x, y);
            let k = killed_density_2d(t, start, w, &spec()).unwrap();
            let f = free_density(t, start, w).unwrap();
            prop_assert!(k >= 0.0 && k <= f);
        }
    }
}
