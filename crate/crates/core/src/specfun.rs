//! Modified Bessel functions of the first and second kind for real order and argument.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use crate::error::{domain, require_positive, Error, Result};
use crate::quadrature::{integrate_semiinf_with, Endpoint, QuadSpec, Tail};

/// Largest supported `|order|`.
pub const MAX_ORDER: f64 = 50.0;

/// A validated Bessel order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if nu.is_finite() && nu.abs() < MAX_ORDER {
            Ok(Self(nu))
        } else {
            Err(domain(format!("Bessel order must satisfy |nu| < {MAX_ORDER}, got {nu}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Halves are exact in binary, so `2 nu` is an odd integer iff the order is a half-integer.
    pub fn is_half_integer(self) -> bool {
        let twice = 2.0 * self.0;
        twice.fract() == 0.0 && (twice as i64).rem_euclid(2) == 1
    }

    pub fn is_integer(self) -> bool {
        self.0.fract() == 0.0
    }
}

/// `I_nu(z)` by its power series.
pub fn bessel_i(nu: f64, z: f64) -> Result<f64> {
    let order = BesselOrder::new(nu)?;
    require_positive("z", z)?;
    if z > 700.0 {
        return Err(Error::Range(format!("I_nu overflows for z = {z}")));
    }
    // I_{-n} = I_n for integer n; the series below would divide by Gamma at a pole.
    let nu = if order.is_integer() { nu.abs() } else { nu };
    let half = 0.5 * z;
    let q = half * half;
    let mut term = half.powf(nu) / gamma(nu + 1.0);
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + nu));
        sum += term;
        if k > nu.abs() + 1.0 && term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        if k > 10_000.0 {
            return Err(Error::Range("I_nu series did not settle".into()));
        }
    }
    if !sum.is_finite() {
        return Err(Error::Range(format!("I_nu({nu}, {z}) not representable")));
    }
    Ok(sum)
}

/// Returns `(T, shift)` with `e^z K_nu(z) = T * e^shift`.
///
/// Uses `K_nu(z) = int_0^inf exp(-z cosh u) cosh(nu u) du`, which is the
/// integral `2^(-nu-1) z^nu int_0^inf exp(-t - z^2/4t) t^(-nu-1) dt` after
/// `t = (z/2) e^u`. The integrand decays double-exponentially, so the
/// trapezoid rule with step halving converges geometrically.
fn k_scaled_parts(nu: f64, z: f64) -> Result<(f64, f64)> {
    BesselOrder::new(nu)?;
    require_positive("z", z)?;
    let nu = nu.abs();
    let phi = |u: f64| {
        let s = (0.5 * u).sinh();
        -2.0 * z * s * s + nu * u
    };
    let peak = (nu / z).asinh();
    let top = phi(peak);
    // the peak has width about 1/sqrt(z) for large z
    let step = (3.0 / z.sqrt()).min(1.0);
    let mut upper = peak + step;
    while phi(upper) - top > -45.0 {
        upper += step;
    }
    let g = |u: f64| {
        let s = (0.5 * u).sinh();
        let base = -2.0 * z * s * s - top;
        0.5 * ((base + nu * u).exp() + (base - nu * u).exp())
    };
    let mut h = (upper / 8.0).min(0.5);
    let mut n = (upper / h).ceil() as usize;
    let mut sum = 0.5 * g(0.0) + (1..=n).map(|k| g(k as f64 * h)).sum::<f64>();
    let mut est = h * sum;
    for level in 0..16 {
        h *= 0.5;
        n *= 2;
        sum += (1..=n).step_by(2).map(|k| g(k as f64 * h)).sum::<f64>();
        let next = h * sum;
        let settled = (next - est).abs() <= 2.0 * f64::EPSILON * next;
        est = next;
        if settled && level >= 1 {
            return Ok((est, top));
        }
    }
    Ok((est, top))
}

/// `K_nu(z)`, the Macdonald function.
pub fn bessel_k(nu: f64, z: f64) -> Result<f64> {
    let (t, shift) = k_scaled_parts(nu, z)?;
    let v = t * (shift - z).exp();
    if v == 0.0 || !v.is_finite() {
        return Err(Error::Range(format!("K_{nu}({z}) outside f64 range")));
    }
    Ok(v)
}

/// `e^z K_nu(z)`, finite for large `z` where `K_nu` underflows.
pub fn bessel_k_scaled(nu: f64, z: f64) -> Result<f64> {
    let (t, shift) = k_scaled_parts(nu, z)?;
    let v = t * shift.exp();
    if !v.is_finite() {
        return Err(Error::Range(format!("scaled K_{nu}({z}) overflows")));
    }
    Ok(v)
}

/// `K_{n+1/2}(z)` as a finite sum.
pub fn bessel_k_half(n: u32, z: f64) -> Result<f64> {
    require_positive("z", z)?;
    let n = n as usize;
    let mut coeff = 1.0; // (n+k)! / (k! (n-k)!) at k = 0
    let mut sum = 1.0;
    for k in 1..=n {
        let kf = k as f64;
        coeff *= ((n + k) as f64) * ((n - k + 1) as f64) / kf;
        sum += coeff / (2.0 * z).powi(k as i32);
    }
    Ok((PI / (2.0 * z)).sqrt() * (-z).exp() * sum)
}

/// `K_nu` from the reflection formula `pi (I_{-nu} - I_nu) / (2 sin nu pi)`.
///
/// Unstable near integer orders and for large `z` (cancellation); used as a check.
pub fn bessel_k_reflection(nu: f64, z: f64) -> Result<f64> {
    let order = BesselOrder::new(nu)?;
    if order.is_integer() {
        return Err(domain("reflection formula undefined at integer order"));
    }
    let s = (nu * PI).sin();
    Ok(PI / (2.0 * s) * (bessel_i(-nu, z)? - bessel_i(nu, z)?))
}

/// `K_nu` from `(z/2)^nu sqrt(pi)/Gamma(nu+1/2) int_1^inf e^(-zt) (t^2-1)^(nu-1/2) dt`, `nu > -1/2`.
pub fn bessel_k_algebraic(nu: f64, z: f64, spec: &QuadSpec) -> Result<f64> {
    BesselOrder::new(nu)?;
    require_positive("z", z)?;
    if nu <= -0.5 {
        return Err(domain("algebraic representation needs nu > -1/2"));
    }
    // t = 1 + x; the factor e^(-z) is pulled out front.
    let p = nu - 0.5;
    let integral = integrate_semiinf_with(
        |x| (-z * x).exp() * (x * (2.0 + x)).powf(p),
        0.0,
        Tail::decay(z).with_start(Endpoint::InvSqrtLeft),
        spec,
    )?;
    Ok((0.5 * z).powf(nu) * PI.sqrt() / gamma(nu + 0.5) * (-z).exp() * integral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn order_flags() {
        assert!(BesselOrder::new(2.5).unwrap().is_half_integer());
        assert!(BesselOrder::new(-0.5).unwrap().is_half_integer());
        assert!(!BesselOrder::new(1.0).unwrap().is_half_integer());
        assert!(!BesselOrder::new(0.25).unwrap().is_half_integer());
        assert!(BesselOrder::new(50.0).is_err());
        assert!(BesselOrder::new(f64::NAN).is_err());
    }

    #[test]
    fn i_values() {
        assert!((bessel_i(0.0, 1e-300).unwrap() - 1.0).abs() < 1e-15);
        let closed = (2.0 / PI).sqrt() * 1f64.sinh();
        assert!(rel(bessel_i(0.5, 1.0).unwrap(), closed) < 1e-14);
        // I_1(1) against its integral form (1/pi) int_0^pi e^{cos t} cos t dt
        let oracle = crate::quadrature::integrate_finite(
            |t| t.cos().exp() * t.cos() / PI,
            0.0,
            PI,
            &QuadSpec::default(),
        )
        .unwrap();
        assert!(rel(bessel_i(1.0, 1.0).unwrap(), oracle) < 1e-12);
        assert!((oracle - 0.565159).abs() < 1e-6);
        assert_eq!(bessel_i(-2.0, 1.3).unwrap(), bessel_i(2.0, 1.3).unwrap());
        assert!(matches!(bessel_i(0.0, 800.0), Err(Error::Range(_))));
    }

    #[test]
    fn k_values() {
        let k12 = (PI / 2.0).sqrt() * (-1f64).exp();
        assert!(rel(bessel_k(0.5, 1.0).unwrap(), k12) < 1e-14);
        assert!((bessel_k(1.0, 1.0).unwrap() - 0.6019072).abs() < 1e-7);
        assert!((bessel_k(1.0, 2.0).unwrap() - 0.1398658).abs() < 1e-7);
        assert!(matches!(bessel_k(1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_k(1.0, -2.0), Err(Error::Domain(_))));
        assert!(rel(bessel_k_scaled(0.0, 1e4).unwrap(), (PI / 2e4).sqrt() * (1.0 - 1.0 / 8e4)) < 1e-8);
    }

    #[test]
    fn half_integer_sum() {
        assert!(rel(bessel_k_half(0, 1.0).unwrap(), 0.4610685) < 1e-7);
        let want = (PI / 4.0).sqrt() * (-2f64).exp() * 1.5;
        assert!(rel(bessel_k_half(1, 2.0).unwrap(), want) < 1e-14);
        assert!((want - 0.179906).abs() < 1e-6);
        // leading term dominates for large z
        let z = 500.0;
        let lead = (PI / (2.0 * z)).sqrt() * (-z).exp();
        assert!((bessel_k_half(3, z).unwrap() / lead - 1.0).abs() < 0.02);
        assert!(bessel_k_half(0, 0.0).is_err());
    }

    #[test]
    fn half_integer_orders_agree() {
        for n in 0..8u32 {
            for &z in &[0.1, 0.5, 1.0, 3.0, 10.0, 40.0] {
                let a = bessel_k(n as f64 + 0.5, z).unwrap();
                let b = bessel_k_half(n, z).unwrap();
                assert!(rel(a, b) < 1e-10, "n={n} z={z}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn reflection_agrees_away_from_integers() {
        for &nu in &[0.1, 0.3, 0.5, 0.77, 1.25, 1.6, 2.4, 3.3] {
            for &z in &[0.1, 0.5, 1.0, 2.0] {
                let a = bessel_k(nu, z).unwrap();
                let b = bessel_k_reflection(nu, z).unwrap();
                assert!(rel(a, b) < 1e-8, "nu={nu} z={z}: {a} vs {b}");
            }
        }
        assert!(bessel_k_reflection(1.0, 1.0).is_err());
    }

    #[test]
    fn algebraic_representation_agrees() {
        let spec = QuadSpec::default();
        for &nu in &[0.0, 0.5, 1.0, 1.5] {
            for &z in &[0.1, 1.0, 10.0] {
                let a = bessel_k(nu, z).unwrap();
                let b = bessel_k_algebraic(nu, z, &spec).unwrap();
                assert!(rel(a, b) < 1e-8, "nu={nu} z={z}: {a} vs {b}");
            }
        }
    }

    proptest! {
        #[test]
        fn k_even_in_order(nu in 0.0f64..20.0, z in 0.01f64..50.0) {
            prop_assert_eq!(bessel_k(nu, z).unwrap(), bessel_k(-nu, z).unwrap());
        }

        #[test]
        fn k_decreasing_in_argument(nu in 0.0f64..10.0, z in 0.01f64..30.0) {
            prop_assert!(bessel_k(nu, z).unwrap() > bessel_k(nu, z * 1.01).unwrap());
        }

        #[test]
        fn k_recurrence(nu in 0.0f64..10.0, z in 0.05f64..30.0) {
            // K_{nu+1} = K_{nu-1} + (2 nu / z) K_nu
            let lhs = bessel_k(nu + 1.0, z).unwrap();
            let rhs = bessel_k(nu - 1.0, z).unwrap() + 2.0 * nu / z * bessel_k(nu, z).unwrap();
            prop_assert!(((lhs - rhs) / lhs).abs() < 1e-12);
        }

        #[test]
        fn i_positive(nu in 0.0f64..20.0, z in 1e-3f64..100.0) {
            let v = bessel_i(nu, z).unwrap();
            prop_assert!(v > 0.0 && v.is_finite());
        }
    }
}
