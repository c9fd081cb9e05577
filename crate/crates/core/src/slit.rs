//! Exit laws of planar Brownian motion from the slit domain `D = ((-inf, 0] x {0})^c`.
//!
//! Functions documented as VAR2T use `E B_t^2 = 2t` with heat kernel
//! `exp(-|u-v|^2 / 4s) / (4 pi s)`. The general-start family
//! ([`joint_laplace_general`], [`joint_density_general`], [`conditional_gauge`])
//! is VAR1T: standard Brownian motion killed at rate `lambda^2 / 2`.
//! Place densities do not depend on the time normalization.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::Rng;
use rand_distr::StandardNormal;
use statrs::function::erf::erf;
use statrs::function::gamma::gamma;

use crate::error::{domain, require_negative, require_positive, Result};
use crate::point::{HitSample, Point};
use crate::quadrature::{
    integrate_semiinf_algebraic, integrate_semiinf_with, Endpoint, ErrorSlot, QuadSpec, Tail,
};
use crate::stable::{rel_cauchy_density, RelParams};

/// Exit-place density from `(x, 0)`, `x > 0`: `(1/pi) sqrt(x / -z) / (x - z)`.
pub fn hit_place_density_axis(x: f64, z: f64) -> Result<f64> {
    require_positive("x", x)?;
    require_negative("z", z)?;
    Ok((x / -z).sqrt() / (PI * (x - z)))
}

/// `P^(x,0)(B_exit > -z0) = (2/pi) arctan(sqrt(z0 / x))`.
pub fn hit_place_cdf_axis(x: f64, z0: f64) -> Result<f64> {
    require_positive("x", x)?;
    if !(z0 >= 0.0) {
        return Err(domain(format!("z0 must be >= 0, got {z0}")));
    }
    Ok(2.0 / PI * (z0 / x).sqrt().atan())
}

/// Location and scale of the Cauchy variable `V` with exit place `-V^2`.
fn cauchy_image(w: Point) -> (f64, f64) {
    let (re, im) = w.principal_sqrt();
    (im, re)
}

/// `P^w(B_exit > -z0)` for any start in `D`, from the conformal image.
pub fn hit_place_cdf(w: Point, z0: f64) -> Result<f64> {
    w.require_in_domain("w")?;
    if !(z0 >= 0.0) {
        return Err(domain(format!("z0 must be >= 0, got {z0}")));
    }
    let (loc, scale) = cauchy_image(w);
    let r = z0.sqrt();
    Ok((((r - loc) / scale).atan() - ((-r - loc) / scale).atan()) / PI)
}

/// Exit-place density from any `w = (x, y)` in `D`:
/// `(2^(-1/2)/pi) sqrt((|w| + x) / -z) (|w| - z) / ((x - z)^2 + y^2)`.
pub fn hit_place_density(w: Point, z: f64) -> Result<f64> {
    w.require_in_domain("w")?;
    require_negative("z", z)?;
    let r = w.norm();
    let den = (w.x1 - z).powi(2) + w.x2 * w.x2;
    Ok(FRAC_1_SQRT_2 / PI * ((r + w.x1) / -z).sqrt() * (r - z) / den)
}

/// Exit-place density from `(0, y)`: `(1/(sqrt 2 pi)) sqrt(|y| / -z) (|y| - z) / (z^2 + y^2)`.
pub fn hit_place_density_vertical(y: f64, z: f64) -> Result<f64> {
    if !(y != 0.0 && y.is_finite()) {
        return Err(domain("start (0, y) needs y != 0"));
    }
    require_negative("z", z)?;
    let a = y.abs();
    Ok(FRAC_1_SQRT_2 / PI * (a / -z).sqrt() * (a - z) / (z * z + y * y))
}

/// Exit-place density by sweeping: first exit of the upper or lower half-plane,
/// then the axis law from the positive half-axis.
///
/// `(1/pi) int_0^inf |y| / ((x-v)^2 + y^2) h(v, z) dv + (1/pi) |y| / ((x-z)^2 + y^2)`.
pub fn hit_place_density_sweep(w: Point, z: f64, spec: &QuadSpec) -> Result<f64> {
    if w.x2 == 0.0 {
        return if w.x1 > 0.0 { hit_place_density_axis(w.x1, z) } else { Err(domain("w on slit")) };
    }
    w.require_in_domain("w")?;
    require_negative("z", z)?;
    let y = w.x2.abs();
    let poisson = |v: f64| y / (PI * ((w.x1 - v).powi(2) + y * y));
    let scale = w.norm().max(-z).max(1e-3);
    let slot = ErrorSlot::new();
    let swept = integrate_semiinf_algebraic(
        |v| if v <= 0.0 { 0.0 } else { poisson(v) * slot.take(hit_place_density_axis(v, z)) },
        0.0,
        scale,
        Endpoint::InvSqrtBoth,
        spec,
    );
    let swept = slot.finish(swept)?;
    Ok(swept + poisson(z))
}

/// Exit-place density of the two-ray slit `((-inf,-1] U [1,inf)) x {0}` from `(x, 0)`, `|x| < 1`:
/// `(1/pi) sqrt((1 - x^2) / (z^2 - 1)) / |x - z|`.
///
/// The printed constant `1/(2 pi)` gives total mass 1/2; see
/// [`hit_place_density_interval_printed`].
pub fn hit_place_density_interval(x: f64, z: f64) -> Result<f64> {
    Ok(2.0 * hit_place_density_interval_printed(x, z)?)
}

/// The two-ray slit kernel with the printed constant `1/(2 pi)`.
pub fn hit_place_density_interval_printed(x: f64, z: f64) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return Err(domain(format!("need |x| < 1, got {x}")));
    }
    if !(z.abs() > 1.0 && z.is_finite()) {
        return Err(domain(format!("need |z| > 1, got {z}")));
    }
    Ok(((1.0 - x * x) / (z * z - 1.0)).sqrt() / (2.0 * PI * (x - z).abs()))
}

/// Exit-place density written for a general start `zs = (z1, z2)`:
/// `(1/(sqrt 2 pi)) sqrt(|zs| + z1) / sqrt|w| (|zs| + |w|) / ((z1 - w)^2 + z2^2)`.
pub fn hit_place_density_general(zs: Point, w: f64) -> Result<f64> {
    zs.require_in_domain("start")?;
    require_negative("w", w)?;
    let r = zs.norm();
    let den = (zs.x1 - w).powi(2) + zs.x2 * zs.x2;
    Ok(FRAC_1_SQRT_2 / PI * (r + zs.x1).sqrt() / (-w).sqrt() * (r - w) / den)
}

/// Joint density of exit time and place from `(x, 0)` (VAR2T):
/// `(1/pi) sqrt(x / -z) s^(-3/2) exp(-(x-z)^2 / 4s) / (2 sqrt pi)`.
pub fn joint_density_axis(x: f64, s: f64, z: f64) -> Result<f64> {
    require_positive("x", x)?;
    require_positive("s", s)?;
    require_negative("z", z)?;
    let a = x - z;
    Ok((x / -z).sqrt() / PI * (-a * a / (4.0 * s)).exp() / (2.0 * PI.sqrt() * s.powf(1.5)))
}

/// Density of the first time a VAR2T Brownian motion started at `a > 0` reaches 0:
/// `a s^(-3/2) exp(-a^2 / 4s) / (2 sqrt pi)`.
pub fn level_hit_density(a: f64, s: f64) -> Result<f64> {
    require_positive("a", a)?;
    require_positive("s", s)?;
    Ok(a * (-a * a / (4.0 * s)).exp() / (2.0 * PI.sqrt() * s.powf(1.5)))
}

/// Which coordinate of a planar path is being stopped at zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisHit {
    /// The vertical coordinate reaches 0; the place is `(w, 0)`.
    Vertical,
    /// The horizontal coordinate reaches 0; the place is `(0, w)`.
    Horizontal,
}

/// Joint density in `(s, w)` of the first time one coordinate hits zero and the
/// other coordinate at that time (VAR2T):
/// `(|y|/s) p(s, (x,y), (w,0))` or `(|x|/s) p(s, (x,y), (0,w))`.
pub fn coordinate_hit_joint_density(start: Point, s: f64, w: f64, which: AxisHit) -> Result<f64> {
    require_positive("s", s)?;
    if !start.is_finite() || !w.is_finite() {
        return Err(domain("arguments must be finite"));
    }
    let (dist, target) = match which {
        AxisHit::Vertical => (start.x2.abs(), Point::new(w, 0.0)),
        AxisHit::Horizontal => (start.x1.abs(), Point::new(0.0, w)),
    };
    if dist == 0.0 {
        return Err(domain("start lies on the target line"));
    }
    let r2 = (start.x1 - target.x1).powi(2) + (start.x2 - target.x2).powi(2);
    Ok(dist / s * (-r2 / (4.0 * s)).exp() / (4.0 * PI * s))
}

/// `P = |zs| + |w|` and `Q = sqrt(2 |w| (|zs| - z1))` of the general-start formulas.
fn gauge_scales(zs: Point, w: f64) -> Result<(f64, f64)> {
    zs.require_in_domain("start")?;
    require_negative("w", w)?;
    let r = zs.norm();
    Ok((r - w, (-2.0 * w * (r - zs.x1).max(0.0)).sqrt()))
}

/// `int_0^inf t exp(-P sqrt(t^2 + l^2)) / sqrt(t^2 + l^2) cosh(Q t) dt`.
fn gauge_integral(p: f64, q: f64, lambda: f64, spec: &QuadSpec) -> Result<f64> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(domain(format!("lambda must be >= 0, got {lambda}")));
    }
    if q == 0.0 {
        // the integrand is an exact derivative
        return Ok((-p * lambda).exp() / p);
    }
    let gap = (p - q).max(f64::MIN_POSITIVE);
    integrate_semiinf_with(
        |t| {
            let root = t.hypot(lambda);
            if root == 0.0 {
                return 1.0;
            }
            let lead = (q * t - p * root).exp();
            t / root * lead * 0.5 * (1.0 + (-2.0 * q * t).exp())
        },
        0.0,
        Tail::decay(gap),
        spec,
    )
}

/// `E^zs[exp(-lambda^2 tau / 2); B_exit in dw] / dw` (VAR1T).
pub fn joint_laplace_general(zs: Point, lambda: f64, w: f64, spec: &QuadSpec) -> Result<f64> {
    let (p, q) = gauge_scales(zs, w)?;
    let i = gauge_integral(p, q, lambda, spec)?;
    Ok(FRAC_1_SQRT_2 / PI * (zs.norm() + zs.x1).sqrt() / (-w).sqrt() * i)
}

/// Joint density of exit time `s` and place `w` from a general start (VAR1T).
///
/// The inner integral `int_0^inf t exp(-s t^2 / 2) cosh(Q t) dt` is done in closed
/// form and merged with `exp(-P^2 / 2s)` so that only `exp((Q^2 - P^2) / 2s)` appears.
pub fn joint_density_general(zs: Point, s: f64, w: f64) -> Result<f64> {
    require_positive("s", s)?;
    let (p, q) = gauge_scales(zs, w)?;
    let gauss = (-p * p / (2.0 * s)).exp() / s;
    let bulk = if q == 0.0 {
        0.0
    } else {
        q / (2.0 * s)
            * (2.0 * PI / s).sqrt()
            * erf(q / (2.0 * s).sqrt())
            * ((q * q - p * p) / (2.0 * s)).exp()
    };
    let pref = (zs.norm() + zs.x1).sqrt() / (2.0 * PI.powf(1.5) * (-w * s).sqrt());
    Ok(pref * (gauss + bulk))
}

/// Conditional gauge `E^zs[exp(-lambda^2 tau / 2) | B_exit = w]` (VAR1T).
pub fn conditional_gauge(zs: Point, w: f64, lambda: f64, spec: &QuadSpec) -> Result<f64> {
    let (p, q) = gauge_scales(zs, w)?;
    let i = gauge_integral(p, q, lambda, spec)?;
    let d2 = (zs.x1 - w).powi(2) + zs.x2 * zs.x2;
    Ok(d2 / p * i)
}

/// Printed constant of the closed form of the off-axis gauge kernel.
pub const PSI_PRINTED_CONSTANT: f64 = FRAC_1_SQRT_2;
/// Constant that makes the closed form match the defining integral.
pub const PSI_FITTED_CONSTANT: f64 = 1.0;

/// Gauge kernel `int_0^inf e^(-s) (|y|/s) p(s, (v, y), (0, 0)) ds` (VAR2T) by quadrature.
pub fn psi_kernel(v: f64, y: f64, spec: &QuadSpec) -> Result<f64> {
    if !(y != 0.0 && y.is_finite() && v.is_finite()) {
        return Err(domain("psi kernel needs finite v and y != 0"));
    }
    let r2 = v * v + y * y;
    let a = y.abs();
    integrate_semiinf_with(
        |s| a / (4.0 * PI) * (-s - r2 / (4.0 * s)).exp() / (s * s),
        0.0,
        Tail::decay(1.0),
        spec,
    )
}

/// Closed form `constant * e^(-|y|) p_|y|(v)` with `p` the relativistic Cauchy density (d = m = 1).
pub fn psi_kernel_closed(v: f64, y: f64, constant: f64) -> Result<f64> {
    if y == 0.0 {
        return Err(domain("psi kernel needs y != 0"));
    }
    let p = RelParams::new(1, 1.0, y.abs())?;
    Ok(constant * (-y.abs()).exp() * rel_cauchy_density(&p, &[v])?)
}

/// Least-squares constant `c` fitting `psi_kernel = c * psi_kernel_closed(., ., 1)` on a grid.
pub fn fit_psi_constant(points: &[(f64, f64)], spec: &QuadSpec) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for &(v, y) in points {
        let exact = psi_kernel(v, y, spec)?;
        let shape = psi_kernel_closed(v, y, 1.0)?;
        num += exact * shape;
        den += shape * shape;
    }
    if den == 0.0 {
        return Err(domain("empty fit grid"));
    }
    Ok(num / den)
}

/// `h(z, w) e^(-(z - w))`: unit-rate gauge mass from the positive axis (VAR2T).
pub fn gauge_mass_axis(z: f64, w: f64) -> Result<f64> {
    Ok(hit_place_density_axis(z, w)? * (-(z - w)).exp())
}

/// `E^p[e^(-tau); B_exit in dw] / dw` for `p = (x, y)` off the axis (VAR2T):
/// `int_0^inf Psi(x - z, y) h(z, w) e^(-(z - w)) dz + Psi(x - w, y)`.
pub fn gauge_mass_offaxis(p: Point, w: f64, spec: &QuadSpec) -> Result<f64> {
    if p.x2 == 0.0 || !p.is_finite() {
        return Err(domain("start must be off the axis"));
    }
    require_negative("w", w)?;
    let inner = spec.with_rel_tol(spec.rel_tol.max(1e-12));
    let slot = ErrorSlot::new();
    let f = |z: f64| {
        if z <= 0.0 {
            return 0.0;
        }
        slot.take(psi_kernel(p.x1 - z, p.x2, &inner)) * slot.take(gauge_mass_axis(z, w))
    };
    // split at the kernel peak so narrow kernels are resolved
    let swept = if p.x1 > 0.0 {
        let a = crate::quadrature::integrate_finite_with(f, 0.0, p.x1, Endpoint::InvSqrtLeft, spec);
        let b = integrate_semiinf_with(f, p.x1, Tail::decay(1.0), spec);
        a.and_then(|a| b.map(|b| a + b))
    } else {
        integrate_semiinf_with(f, 0.0, Tail::decay(1.0).with_start(Endpoint::InvSqrtLeft), spec)
    };
    let swept = slot.finish(swept)?;
    Ok(swept + psi_kernel(p.x1 - w, p.x2, spec)?)
}

/// Exit density of the rotationally symmetric alpha-stable process from the half-space `x1 > 0`:
/// `C (x1 / -u1)^(alpha/2) / |x - u|^d`, `C = Gamma(d/2) sin(pi alpha/2) / pi^(1 + d/2)`.
pub fn stable_poisson_halfspace(d: usize, alpha: f64, x: &[f64], u: &[f64]) -> Result<f64> {
    if d == 0 || x.len() != d || u.len() != d {
        return Err(domain("points must have d >= 1 coordinates"));
    }
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(domain(format!("alpha must lie in (0, 2), got {alpha}")));
    }
    require_positive("x1", x[0])?;
    require_negative("u1", u[0])?;
    let df = d as f64;
    let c = gamma(df / 2.0) * (PI * alpha / 2.0).sin() / PI.powf(1.0 + df / 2.0);
    let dist = x.iter().zip(u).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    Ok(c * (x[0] / -u[0]).powf(alpha / 2.0) / dist.powi(d as i32))
}

/// Draws the exit place from `w` via the square-root map: `-V^2` with `V` Cauchy.
pub fn sample_hit_place_exact<R: Rng + ?Sized>(w: Point, rng: &mut R) -> Result<f64> {
    w.require_in_domain("w")?;
    let (loc, scale) = cauchy_image(w);
    let u: f64 = rng.random();
    let v = loc + scale * (PI * (u - 0.5)).tan();
    Ok(-(v * v))
}

/// Draws exit time and place from `(x, 0)` (VAR2T): place first, then the level-hitting time.
pub fn sample_hit_axis<R: Rng + ?Sized>(x: f64, rng: &mut R) -> Result<HitSample> {
    require_positive("x", x)?;
    let z = loop {
        let u: f64 = rng.random();
        let z = -x * (0.5 * PI * u).tan().powi(2);
        if z < 0.0 {
            break z;
        }
    };
    let a = x - z;
    let s = loop {
        let n: f64 = rng.sample(StandardNormal);
        let s = a * a / (2.0 * n * n);
        if s > 0.0 && s.is_finite() {
            break s;
        }
    };
    Ok(HitSample { s, z })
}
