//! Resolvent kernels and Green functions of the slit domain and the half-plane.
//!
//! The `lambda^2/2` family ([`green_lambda_axis`], [`green_lambda_offaxis`],
//! [`green_lambda_general`], [`killed_density_axis`], [`killed_density_offaxis`])
//! and the logarithmic Green functions are VAR1T. Resolvent kernels take the
//! convention explicitly.

use std::f64::consts::PI;

use statrs::function::erf::erf;

use crate::error::{domain, require_positive, Error, Result};
use crate::point::{Convention, Point};
use crate::quadrature::{
    integrate_finite, integrate_finite_with, integrate_halfline_breaks, integrate_semiinf_with,
    Endpoint, ErrorSlot, QuadSpec, Tail,
};
use crate::slit::{hit_place_density, hit_place_density_axis};
use crate::specfun::bessel_k;

/// Printed resolvent `(1/(sqrt 2 pi)) (sqrt(lambda) / r) K_1(sqrt(lambda) r)`.
///
/// This kernel behaves like `1/r^2` at the origin and is not integrable in the
/// plane, so it cannot be a resolvent density; [`resolvent_density`] is the
/// kernel the half-plane Green function uses.
pub fn potential_lambda(lambda: f64, r: f64) -> Result<f64> {
    require_positive("lambda", lambda)?;
    require_positive("r", r)?;
    let s = lambda.sqrt();
    Ok(s / (2f64.sqrt() * PI * r) * bessel_k(1.0, s * r)?)
}

/// Resolvent density `int_0^inf e^(-rate t) p_t(r) dt` of planar Brownian motion.
///
/// VAR2T: `K_0(sqrt(rate) r) / (2 pi)`. VAR1T: `K_0(sqrt(2 rate) r) / pi`.
pub fn resolvent_density(rate: f64, r: f64, conv: Convention) -> Result<f64> {
    require_positive("rate", rate)?;
    require_positive("r", r)?;
    Ok(match conv {
        Convention::Var2T => bessel_k(0.0, rate.sqrt() * r)? / (2.0 * PI),
        Convention::Var1T => bessel_k(0.0, (2.0 * rate).sqrt() * r)? / PI,
    })
}

/// Green function of a half-plane bounded by the horizontal axis for killing at `rate`,
/// by reflection: `U(|p - q|) - U(|p - q*|)`.
pub fn green_halfplane_lambda(rate: f64, p: Point, q: Point, conv: Convention) -> Result<f64> {
    if !p.is_finite() || !q.is_finite() {
        return Err(domain("points must be finite"));
    }
    if p.x2 * q.x2 < 0.0 {
        return Err(domain("points lie in different half-planes"));
    }
    if p == q {
        return Err(Error::Singular(format!("p = q = {p}")));
    }
    if p.x2 == 0.0 || q.x2 == 0.0 {
        return Ok(0.0);
    }
    let direct = resolvent_density(rate, p.dist(q), conv)?;
    let image = resolvent_density(rate, p.dist(q.reflect()), conv)?;
    Ok((direct - image).max(0.0))
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda >= 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("lambda must be finite and >= 0, got {lambda}")))
    }
}

/// `2 ln((sqrt x + sqrt y) / sqrt|x - y|)`, the upper limit of the hyperbolic angle.
fn axis_angle(x: f64, y: f64) -> f64 {
    2.0 * ((x.sqrt() + y.sqrt()) / (x - y).abs().sqrt()).ln()
}

/// Green function of the one-dimensional Cauchy process killed on leaving `(0, inf)`:
/// `(2/pi) ln((sqrt v + sqrt y) / sqrt|v - y|)`.
pub fn cauchy_halfline_green(v: f64, y: f64) -> Result<f64> {
    require_positive("v", v)?;
    require_positive("y", y)?;
    if v == y {
        return Err(Error::Singular(format!("v = y = {v}")));
    }
    Ok(axis_angle(v, y) / PI)
}

/// `lambda^2/2`-Green function of the slit domain between `(x, 0)` and `(y, 0)`:
/// `(1/pi) int_{|x-y|}^{x+y} e^(-lambda u) / sqrt(u^2 - |x-y|^2) du`,
/// evaluated as `(1/pi) int_0^{acosh((x+y)/|x-y|)} exp(-lambda |x-y| cosh th) dth`.
pub fn green_lambda_axis(lambda: f64, x: f64, y: f64, spec: &QuadSpec) -> Result<f64> {
    check_lambda(lambda)?;
    require_positive("x", x)?;
    require_positive("y", y)?;
    if x == y {
        return Err(Error::Singular(format!("x = y = {x}")));
    }
    let top = axis_angle(x, y);
    if lambda == 0.0 {
        return Ok(top / PI);
    }
    let c = (x - y).abs();
    Ok(integrate_finite(|th: f64| (-lambda * c * th.cosh()).exp(), 0.0, top, spec)? / PI)
}

/// Killed transition density between `(x, 0)` and `(y, 0)` (VAR1T):
/// `exp(-(x-y)^2 / 2t) erf(sqrt(2xy/t)) / (2 pi t)`.
pub fn killed_density_axis(t: f64, x: f64, y: f64) -> Result<f64> {
    require_positive("t", t)?;
    require_positive("x", x)?;
    require_positive("y", y)?;
    let gauss = (-(x - y).powi(2) / (2.0 * t)).exp();
    if gauss == 0.0 {
        return Ok(0.0);
    }
    Ok(gauss * erf((2.0 * x * y / t).sqrt()) / (2.0 * PI * t))
}

/// `lambda^2/2` Poisson kernel of the half-plane seen from `p` at `(w, 0)` (VAR1T).
fn killed_poisson(lambda: f64, p: Point, w: f64) -> Result<f64> {
    let r = (p.x1 - w).hypot(p.x2);
    Ok(lambda * p.x2.abs() / PI * bessel_k(1.0, lambda * r)? / r)
}

/// Break points around the foot of `p` on the axis, where the Poisson kernel peaks.
fn foot_breaks(p: Point) -> [f64; 3] {
    let a = p.x2.abs();
    [p.x1 - a, p.x1, p.x1 + a]
}

/// First-passage density of the vertical coordinate with place `(w, 0)` (VAR1T).
fn axis_passage_density(p: Point, s: f64, w: f64) -> f64 {
    let r2 = (p.x1 - w).powi(2) + p.x2 * p.x2;
    let gauss = (-r2 / (2.0 * s)).exp();
    if gauss == 0.0 {
        return 0.0;
    }
    p.x2.abs() / s * gauss / (2.0 * PI * s)
}

/// `lambda^2/2`-Green function of the slit domain between `p` (off the axis) and `(y, 0)`:
/// `int_0^inf P(p, w) G(w, y) dw` with `P` the killed half-plane Poisson kernel.
pub fn green_lambda_offaxis(lambda: f64, p: Point, y: f64, spec: &QuadSpec) -> Result<f64> {
    require_positive("lambda", lambda)?;
    require_positive("y", y)?;
    if p.x2 == 0.0 || !p.is_finite() {
        return Err(domain("p must be off the axis"));
    }
    let slot = ErrorSlot::new();
    let f = |w: f64| {
        if w <= 0.0 || w == y {
            return 0.0;
        }
        slot.take(killed_poisson(lambda, p, w)) * slot.take(green_lambda_axis(lambda, w, y, spec))
    };
    let r = integrate_halfline_breaks(&f, Some(y), &foot_breaks(p), Tail::decay(lambda), spec);
    slot.finish(r)
}

/// `lambda^2/2`-Green function of the slit domain between two off-axis points:
/// a double sweep to the axis plus the half-plane term.
pub fn green_lambda_general(lambda: f64, p: Point, q: Point, spec: &QuadSpec) -> Result<f64> {
    require_positive("lambda", lambda)?;
    if p.x2 == 0.0 || q.x2 == 0.0 {
        return Err(domain("both points must be off the axis"));
    }
    let inner = spec.loosened(100.0);
    let slot = ErrorSlot::new();
    let f = |w: f64| {
        if w <= 0.0 {
            return 0.0;
        }
        slot.take(killed_poisson(lambda, p, w)) * slot.take(green_lambda_offaxis(lambda, q, w, &inner))
    };
    let swept = integrate_halfline_breaks(&f, None, &foot_breaks(p), Tail::decay(lambda), &inner);
    let swept = slot.finish(swept)?;
    let direct = if p.x2 * q.x2 > 0.0 {
        green_halfplane_lambda(lambda * lambda / 2.0, p, q, Convention::Var1T)?
    } else {
        0.0
    };
    Ok(swept + direct)
}

/// Killed transition density from `p` (off the axis) to `(y, 0)` (VAR1T):
/// `int_0^inf int_0^t g(s, w) p_D(t - s; w, y) ds dw`, `g` the first-passage density to the axis.
pub fn killed_density_offaxis(t: f64, p: Point, y: f64, spec: &QuadSpec) -> Result<f64> {
    require_positive("t", t)?;
    require_positive("y", y)?;
    if p.x2 == 0.0 || !p.is_finite() {
        return Err(domain("p must be off the axis"));
    }
    let inner = spec.loosened(100.0);
    let slot = ErrorSlot::new();
    let f = |w: f64| {
        if w <= 0.0 {
            return 0.0;
        }
        let g = |s: f64| {
            if s <= 0.0 || s >= t {
                return 0.0;
            }
            axis_passage_density(p, s, w) * killed_density_axis(t - s, w, y).unwrap_or(0.0)
        };
        // sharp in s near 0 when p is close to (w, 0), and near t when w is close to y
        let mid = 0.5 * t;
        let early = integrate_finite_with(g, 0.0, mid, Endpoint::LogLeft, &inner);
        // the killed kernel concentrates at t - s ~ (w - y)^2
        let near = (100.0 * (w - y).powi(2)).min(0.25 * t);
        let late = integrate_finite_with(g, mid, t - near, Endpoint::Regular, &inner);
        // in the remaining time t - s, so tiny remainders keep their precision
        let last = integrate_finite_with(
            |r| {
                if r <= 0.0 || r >= t {
                    return 0.0;
                }
                axis_passage_density(p, t - r, w) * killed_density_axis(r, w, y).unwrap_or(0.0)
            },
            0.0,
            near,
            Endpoint::LogLeft,
            &inner,
        );
        slot.take(early) + slot.take(late) + slot.take(last)
    };
    let r = integrate_halfline_breaks(&f, Some(y), &foot_breaks(p), Tail::decay(1.0 / t), spec);
    slot.finish(r)
}

/// `int_0^inf f(x) dx` for `f` with an inverse square-root onset at 0 and a
/// `x^(-3/2) ln x` tail, through `x = scale (e^v - 1)`, which makes the tail exponential.
fn slit_sweep_integral(f: &dyn Fn(f64) -> f64, scale: f64, spec: &QuadSpec) -> Result<f64> {
    integrate_semiinf_with(
        |v: f64| {
            let x = scale * v.exp_m1();
            if !x.is_finite() {
                return 0.0;
            }
            f(x) * scale * v.exp()
        },
        0.0,
        Tail::decay(0.5).with_start(Endpoint::InvSqrtLeft),
        spec,
    )
}

/// Green function of the slit domain (VAR1T, compensated logarithmic potential)
/// between `a` and `p`, by sweeping the potential to the slit:
/// `(1/2pi) int h(a, z) ln(|p - (z,0)|^2 / |p - a|^2) dz`.
pub fn green_log(a: Point, p: Point, spec: &QuadSpec) -> Result<f64> {
    a.require_in_domain("a")?;
    if !p.is_finite() {
        return Err(domain("p must be finite"));
    }
    if !p.in_slit_domain() {
        return Ok(0.0);
    }
    if a == p {
        return Err(Error::Singular(format!("a = p = {a}")));
    }
    let d2 = (p.x1 - a.x1).powi(2) + (p.x2 - a.x2).powi(2);
    let scale = a.norm().max(p.norm()).max(1e-3);
    let slot = ErrorSlot::new();
    let f = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let z = -x;
        let far = (p.x1 - z).powi(2) + p.x2 * p.x2;
        slot.take(hit_place_density(a, z)) * (far / d2).ln()
    };
    let r = slit_sweep_integral(&f, scale, spec);
    Ok(slot.finish(r)? / (2.0 * PI))
}

/// Green function between `(0, y)` and `p`; see [`green_log`].
pub fn green_log_from_vertical(y: f64, p: Point, spec: &QuadSpec) -> Result<f64> {
    require_positive("y", y)?;
    green_log(Point::new(0.0, y), p, spec)
}

/// The printed vertical-start formula: logarithm ratio inverted and the axis kernel `h(y, z)`
/// in place of the kernel from `(0, y)`. Kept for comparison only.
pub fn green_log_from_vertical_printed(y: f64, p: Point, spec: &QuadSpec) -> Result<f64> {
    require_positive("y", y)?;
    let near = p.x1 * p.x1 + (p.x2 - y).powi(2);
    let slot = ErrorSlot::new();
    let f = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let z = -x;
        let far = p.x2 * p.x2 + (p.x1 - z).powi(2);
        slot.take(hit_place_density_axis(y, z)) * (near / far).ln()
    };
    let r = slit_sweep_integral(&f, y.max(p.norm()), spec);
    Ok(slot.finish(r)? / (2.0 * PI))
}

fn log_axis_integral(y: f64, p: Point, spec: &QuadSpec) -> Result<f64> {
    let a = p.x2.abs();
    let f = |z: f64| {
        if z <= 0.0 || z == y {
            return 0.0;
        }
        a / (a * a + (p.x1 - z).powi(2)) * ((z.sqrt() + y.sqrt()) / (z - y).abs().sqrt()).ln()
    };
    integrate_halfline_breaks(&f, Some(y), &foot_breaks(p), Tail::default(), spec)
}

/// Green function of the slit domain between `(y, 0)` and `p` (VAR1T):
/// `(2/pi^2) int_0^inf |x2| / (x2^2 + (x1 - z)^2) ln((sqrt z + sqrt y) / sqrt|z - y|) dz`.
///
/// On the axis this is [`cauchy_halfline_green`]. The printed prefactor is half
/// of this one; see [`green_log_axis_printed`].
pub fn green_log_axis(y: f64, p: Point, spec: &QuadSpec) -> Result<f64> {
    require_positive("y", y)?;
    if !p.is_finite() {
        return Err(domain("p must be finite"));
    }
    if p.x2 == 0.0 {
        return if p.x1 > 0.0 { cauchy_halfline_green(p.x1, y) } else { Ok(0.0) };
    }
    Ok(2.0 / (PI * PI) * log_axis_integral(y, p, spec)?)
}

/// [`green_log_axis`] with the printed prefactor `2 / (2 pi^2)`.
pub fn green_log_axis_printed(y: f64, p: Point, spec: &QuadSpec) -> Result<f64> {
    require_positive("y", y)?;
    if p.x2 == 0.0 {
        return Err(domain("p must be off the axis"));
    }
    Ok(1.0 / (PI * PI) * log_axis_integral(y, p, spec)?)
}

/// `E^p[G(B_T, y)]` with `T` the first hit of the horizontal axis and `G` the
/// half-line Cauchy Green function, integrated over the exit angle.
pub fn greenfact(p: Point, y: f64, spec: &QuadSpec) -> Result<f64> {
    require_positive("y", y)?;
    if !p.is_finite() {
        return Err(domain("p must be finite"));
    }
    if p.x2 == 0.0 {
        return if p.x1 > 0.0 { cauchy_halfline_green(p.x1, y) } else { Ok(0.0) };
    }
    // v = x1 + |x2| tan(th) turns the Poisson kernel into d(th)/pi on (th0, pi/2)
    let a = p.x2.abs();
    let lo = (-p.x1 / a).atan();
    let mid = ((y - p.x1) / a).atan();
    let hi = 0.5 * PI;
    let f = |th: f64| {
        let v = p.x1 + a * th.tan();
        if v <= 0.0 || v == y || !v.is_finite() {
            return 0.0;
        }
        axis_angle(v, y) / PI
    };
    let left = integrate_finite_with(f, lo, mid, Endpoint::LogRight, spec)?;
    let right = integrate_finite_with(f, mid, hi, Endpoint::LogLeft, spec)?;
    Ok((left + right) / PI)
}
