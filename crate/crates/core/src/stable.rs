//! The 1/2-stable subordinator, its exponential tilt, and the relativistic Cauchy process.
//!
//! Heat kernels here follow the `E B_t^2 = 2t` normalization:
//! `g_u(x) = (4 pi u)^(-d/2) exp(-|x|^2 / 4u)`.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use crate::error::{domain, require_positive, Result};
use crate::quadrature::{integrate_semiinf_with, QuadSpec, Tail};
use crate::specfun::{bessel_k, bessel_k_scaled};

/// Density of the 1/2-stable subordinator at time `t`:
/// `t / sqrt(4 pi) u^(-3/2) exp(-t^2 / 4u)`.
pub fn subordinator_density(t: f64, u: f64) -> Result<f64> {
    require_positive("t", t)?;
    require_positive("u", u)?;
    Ok(log_subordinator(t, u).exp())
}

fn log_subordinator(t: f64, u: f64) -> f64 {
    t.ln() - 0.5 * (4.0 * PI).ln() - 1.5 * u.ln() - t * t / (4.0 * u)
}

/// Exponentially tilted subordinator: `e^(m t) theta_t(u) e^(-m^2 u)`.
pub fn tilted_subordinator_density(m: f64, t: f64, u: f64) -> Result<f64> {
    require_positive("m", m)?;
    require_positive("t", t)?;
    require_positive("u", u)?;
    Ok((log_subordinator(t, u) + m * t - m * m * u).exp())
}

/// Dimension, mass and time of a relativistic Cauchy marginal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelParams {
    pub d: usize,
    pub m: f64,
    pub t: f64,
}

impl RelParams {
    pub fn new(d: usize, m: f64, t: f64) -> Result<Self> {
        if !(1..=3).contains(&d) {
            return Err(domain(format!("dimension must be 1, 2 or 3, got {d}")));
        }
        require_positive("m", m)?;
        require_positive("t", t)?;
        Ok(Self { d, m, t })
    }
}

fn check_point(p: &RelParams, x: &[f64]) -> Result<f64> {
    let p = RelParams::new(p.d, p.m, p.t)?;
    if x.len() != p.d {
        return Err(domain(format!("point has {} coordinates, expected {}", x.len(), p.d)));
    }
    Ok(x.iter().map(|v| v * v).sum())
}

/// Transition density of the relativistic Cauchy process (alpha = 1):
/// `2 (m/2pi)^((d+1)/2) t e^(mt) K_{(d+1)/2}(m rho) / rho^((d+1)/2)`, `rho = sqrt(|x|^2 + t^2)`.
pub fn rel_cauchy_density(p: &RelParams, x: &[f64]) -> Result<f64> {
    let r2 = check_point(p, x)?;
    let nu = (p.d as f64 + 1.0) / 2.0;
    let rho = (r2 + p.t * p.t).sqrt();
    // e^(mt) K(m rho) = [e^(m rho) K(m rho)] e^(m (t - rho)) keeps large arguments finite.
    let k = bessel_k_scaled(nu, p.m * rho)? * (p.m * (p.t - rho)).exp();
    Ok(2.0 * (p.m / (2.0 * PI)).powf(nu) * p.t * k / rho.powf(nu))
}

/// The same density computed by subordination:
/// `int_0^inf g_u(x) theta_t^{1,m}(u) du`.
pub fn rel_cauchy_density_subordinated(p: &RelParams, x: &[f64], spec: &QuadSpec) -> Result<f64> {
    let r2 = check_point(p, x)?;
    let d = p.d as f64;
    integrate_semiinf_with(
        |u| {
            let log_heat = -0.5 * d * (4.0 * PI * u).ln() - r2 / (4.0 * u);
            (log_heat + log_subordinator(p.t, u) + p.m * p.t - p.m * p.m * u).exp()
        },
        0.0,
        Tail::decay(p.m * p.m),
        spec,
    )
}

fn check_potential_args(d: usize, alpha: f64, m: f64, r: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(domain(format!("alpha must lie in (0, 2), got {alpha}")));
    }
    if (d as f64) < alpha {
        return Err(domain("need d >= alpha"));
    }
    require_positive("m", m)?;
    require_positive("r", r)
}

/// `m`-potential `int_0^inf e^(-m t) p_t^m(x) dt` of the relativistic alpha-stable process at `|x| = r`.
pub fn rel_potential(d: usize, alpha: f64, m: f64, r: f64) -> Result<f64> {
    check_potential_args(d, alpha, m, r)?;
    let df = d as f64;
    let nu = (df - alpha) / 2.0;
    let c = 2f64.powf(1.0 - (df + alpha) / 2.0) / (gamma(alpha / 2.0) * PI.powf(df / 2.0));
    Ok(c * m.powf(nu / alpha) * bessel_k(nu, m.powf(1.0 / alpha) * r)? / r.powf(nu))
}

/// The `m`-potential from its subordination integral
/// `int_0^inf g_u(x) e^(-m^(2/alpha) u) u^(alpha/2 - 1) / Gamma(alpha/2) du`.
pub fn rel_potential_by_quadrature(
    d: usize,
    alpha: f64,
    m: f64,
    r: f64,
    spec: &QuadSpec,
) -> Result<f64> {
    check_potential_args(d, alpha, m, r)?;
    let df = d as f64;
    let c = m.powf(2.0 / alpha);
    let lg = gamma(alpha / 2.0).ln();
    integrate_semiinf_with(
        |u| {
            let log = -0.5 * df * (4.0 * PI * u).ln() - r * r / (4.0 * u) - c * u
                + (alpha / 2.0 - 1.0) * u.ln()
                - lg;
            log.exp()
        },
        0.0,
        Tail::decay(c),
        spec,
    )
}
