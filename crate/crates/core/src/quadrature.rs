//! Adaptive Gauss-Kronrod quadrature on finite and semi-infinite ranges.
//!
//! Finite integrals use global bisection driven by the 21-point Kronrod rule
//! with QUADPACK error scaling. Semi-infinite integrals are summed over panels
//! of doubling width until the geometric tail estimate drops below
//! `tail_cut` of the running total.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// Accuracy controls shared by every integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum bisection depth of any subinterval.
    pub max_depth: u32,
    /// Relative bound on the discarded tail of a semi-infinite integral.
    pub tail_cut: f64,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-10, max_depth: 60, tail_cut: 1e-11 }
    }
}

impl QuadSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: u32, tail_cut: f64) -> Result<Self> {
        let spec = Self { abs_tol, rel_tol, max_depth, tail_cut };
        spec.validate()?;
        Ok(spec)
    }

    /// Same spec with both tolerances scaled to `rel_tol` (tail cut follows).
    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        Self { rel_tol, tail_cut: self.tail_cut.min(rel_tol / 10.0), ..self }
    }

    pub fn with_abs_tol(self, abs_tol: f64) -> Self {
        Self { abs_tol, ..self }
    }

    /// A cheaper spec for integrands that are themselves computed by quadrature.
    pub fn loosened(self, factor: f64) -> Self {
        let rel_tol = (self.rel_tol * factor).min(1e-3);
        Self {
            abs_tol: (self.abs_tol * factor).min(1e-3),
            rel_tol,
            tail_cut: (self.tail_cut * factor).min(rel_tol),
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| v > 0.0 && v < 1.0;
        if !unit(self.abs_tol) || !unit(self.rel_tol) {
            return Err(domain("abs_tol and rel_tol must lie in (0, 1)"));
        }
        if self.max_depth == 0 {
            return Err(domain("max_depth must be at least 1"));
        }
        if !(self.tail_cut > 0.0 && self.tail_cut <= self.rel_tol) {
            return Err(domain("tail_cut must lie in (0, rel_tol]"));
        }
        Ok(())
    }
}

/// Value of an integral together with its error bound and the integral of `|f|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub abs_value: f64,
}

/// Endpoint behaviour the integrator should remove by a change of variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Endpoint {
    #[default]
    Regular,
    /// `(u - a)^(-1/2)` at the left end, removed by `u = a + v^2`.
    InvSqrtLeft,
    /// `(b - u)^(-1/2)` at the right end, removed by `u = b - v^2`.
    InvSqrtRight,
    /// Square-root singularities at both ends.
    InvSqrtBoth,
    /// `log(u - a)` at the left end, removed by `u = a + (b - a) e^(-v)`.
    LogLeft,
    /// `log(b - u)` at the right end, removed by `u = b - (b - a) e^(-v)`.
    LogRight,
}

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

/// Cap on the number of live subintervals in one adaptive run.
const MAX_SEGMENTS: usize = 4096;
/// Cap on doubling panels for semi-infinite ranges.
const MAX_PANELS: usize = 200;

fn gk21(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Result<Estimate> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut resk = fc * WGK[10];
    let mut resabs = resk.abs();
    let mut resg = 0.0;
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    if !resk.is_finite() || !resabs.is_finite() {
        return Err(domain(format!("integrand not finite on [{a}, {b}]")));
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let scale = half.abs();
    let resasc = resasc * scale;
    let resabs = resabs * scale;
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Estimate { value: resk * half, error: err, abs_value: resabs })
}

struct Segment {
    a: f64,
    b: f64,
    est: Estimate,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, spec: &QuadSpec) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0, abs_value: 0.0 });
    }
    let first = gk21(f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, est: first, depth: 0 });
    let mut frozen = Estimate { value: 0.0, error: 0.0, abs_value: 0.0 };
    let mut live = first;
    loop {
        let total = live.value + frozen.value;
        let error = live.error.max(0.0) + frozen.error;
        if error <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            // Re-sum to shed drift accumulated by the incremental updates.
            let mut out = frozen;
            for s in heap.iter() {
                out.value += s.est.value;
                out.error += s.est.error;
                out.abs_value += s.est.abs_value;
            }
            return Ok(out);
        }
        let Some(seg) = heap.pop() else {
            return Err(Error::Tolerance { estimate: total, error_bound: error });
        };
        let mid = 0.5 * (seg.a + seg.b);
        if seg.depth >= spec.max_depth || mid <= seg.a || mid >= seg.b {
            live.value -= seg.est.value;
            live.error -= seg.est.error;
            live.abs_value -= seg.est.abs_value;
            frozen.value += seg.est.value;
            frozen.error += seg.est.error;
            frozen.abs_value += seg.est.abs_value;
            continue;
        }
        if heap.len() + 2 > MAX_SEGMENTS {
            return Err(Error::Tolerance { estimate: total, error_bound: error });
        }
        let left = gk21(f, seg.a, mid)?;
        let right = gk21(f, mid, seg.b)?;
        live.value += left.value + right.value - seg.est.value;
        live.error += left.error + right.error - seg.est.error;
        live.abs_value += left.abs_value + right.abs_value - seg.est.abs_value;
        heap.push(Segment { a: seg.a, b: mid, est: left, depth: seg.depth + 1 });
        heap.push(Segment { a: mid, b: seg.b, est: right, depth: seg.depth + 1 });
    }
}

fn add(x: Estimate, y: Estimate) -> Estimate {
    Estimate {
        value: x.value + y.value,
        error: x.error + y.error,
        abs_value: x.abs_value + y.abs_value,
    }
}

fn finite_estimate(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    ends: Endpoint,
    spec: &QuadSpec,
) -> Result<Estimate> {
    let w = b - a;
    match ends {
        Endpoint::Regular => adaptive(f, a, b, spec),
        Endpoint::InvSqrtLeft => {
            adaptive(&|v: f64| 2.0 * v * f(a + v * v), 0.0, w.sqrt(), spec)
        }
        Endpoint::InvSqrtRight => {
            adaptive(&|v: f64| 2.0 * v * f(b - v * v), 0.0, w.sqrt(), spec)
        }
        Endpoint::InvSqrtBoth => {
            let m = 0.5 * (a + b);
            let half = QuadSpec { abs_tol: 0.5 * spec.abs_tol, ..*spec };
            let l = finite_estimate(f, a, m, Endpoint::InvSqrtLeft, &half)?;
            let r = finite_estimate(f, m, b, Endpoint::InvSqrtRight, &half)?;
            Ok(add(l, r))
        }
        Endpoint::LogLeft => semiinf_estimate(
            &|v: f64| {
                let u = a + w * (-v).exp();
                if u == a {
                    0.0
                } else {
                    (u - a) * f(u)
                }
            },
            0.0,
            Some(1.0),
            Endpoint::Regular,
            spec,
        ),
        Endpoint::LogRight => semiinf_estimate(
            &|v: f64| {
                let u = b - w * (-v).exp();
                if u == b {
                    0.0
                } else {
                    (b - u) * f(u)
                }
            },
            0.0,
            Some(1.0),
            Endpoint::Regular,
            spec,
        ),
    }
}

/// `int_a^b f(u) du` for a regular integrand.
pub fn integrate_finite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadSpec) -> Result<f64> {
    integrate_finite_with(f, a, b, Endpoint::Regular, spec)
}

/// `int_a^b f(u) du` with the variable change selected by `ends`.
pub fn integrate_finite_with<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    ends: Endpoint,
    spec: &QuadSpec,
) -> Result<f64> {
    integrate_finite_estimate(f, a, b, ends, spec).map(|e| e.value)
}

/// As [`integrate_finite_with`] but also returns the error bound.
pub fn integrate_finite_estimate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    ends: Endpoint,
    spec: &QuadSpec,
) -> Result<Estimate> {
    spec.validate()?;
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(domain(format!("need finite a <= b, got [{a}, {b}]")));
    }
    finite_estimate(&f, a, b, ends, spec)
}

/// Options for semi-infinite integration.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Tail {
    /// Exponential decay rate of the integrand, if known. Sets the panel scale.
    pub decay_rate: Option<f64>,
    /// Singularity at the finite end. Only left-sided kinds are meaningful.
    pub start: Endpoint,
}

impl Tail {
    pub fn decay(rate: f64) -> Self {
        Self { decay_rate: Some(rate), start: Endpoint::Regular }
    }

    pub fn with_start(self, start: Endpoint) -> Self {
        Self { start, ..self }
    }
}

fn semiinf_estimate(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    decay_rate: Option<f64>,
    start: Endpoint,
    spec: &QuadSpec,
) -> Result<Estimate> {
    if matches!(start, Endpoint::InvSqrtRight | Endpoint::InvSqrtBoth | Endpoint::LogRight) {
        return Err(domain("semi-infinite integrals only accept left-end singularities"));
    }
    let h0 = match decay_rate {
        Some(k) if k > 0.0 && k.is_finite() => 2.0 / k,
        Some(k) => return Err(domain(format!("decay rate must be > 0, got {k}"))),
        None => 1.0,
    };
    let mut total = add(
        Estimate { value: 0.0, error: 0.0, abs_value: 0.0 },
        finite_estimate(f, a, a + h0, start, spec)?,
    );
    let mut lo = a + h0;
    let mut width = h0;
    let mut prev_mass = total.abs_value;
    let mut growing = 0usize;
    for _ in 1..MAX_PANELS {
        let hi = lo + width;
        if !hi.is_finite() {
            break;
        }
        let panel_spec = QuadSpec {
            abs_tol: 0.25 * spec.abs_tol.max(spec.rel_tol * total.value.abs()),
            ..*spec
        };
        let panel = adaptive(f, lo, hi, &panel_spec).map_err(|e| match e {
            Error::Domain(m) => Error::Divergence(m),
            e => e,
        })?;
        total = add(total, panel);
        if !total.value.is_finite() {
            return Err(Error::Divergence("partial sums overflow".into()));
        }
        let mass = panel.abs_value;
        let bound = spec.abs_tol.max(spec.tail_cut * total.value.abs());
        if mass == 0.0 {
            if total.abs_value > 0.0 {
                return Ok(total);
            }
        } else if prev_mass > 0.0 {
            let r = mass / prev_mass;
            if r < 1.0 {
                growing = 0;
                let tail = mass * r / (1.0 - r);
                if tail <= bound {
                    total.error += tail;
                    return Ok(total);
                }
            } else {
                growing += 1;
                if growing >= 30 {
                    return Err(Error::Divergence(format!(
                        "panel mass not decaying beyond u = {hi:e}"
                    )));
                }
            }
        }
        prev_mass = mass;
        lo = hi;
        width *= 2.0;
    }
    if total.abs_value == 0.0 {
        return Ok(total);
    }
    Err(Error::Divergence(format!("tail still significant after {MAX_PANELS} panels")))
}

/// `int_a^inf f(u) du` for an eventually decaying integrand.
pub fn integrate_semiinf<F: Fn(f64) -> f64>(f: F, a: f64, spec: &QuadSpec) -> Result<f64> {
    integrate_semiinf_with(f, a, Tail::default(), spec)
}

pub fn integrate_semiinf_with<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    tail: Tail,
    spec: &QuadSpec,
) -> Result<f64> {
    spec.validate()?;
    if !a.is_finite() {
        return Err(domain("lower limit must be finite"));
    }
    semiinf_estimate(&f, a, tail.decay_rate, tail.start, spec).map(|e| e.value)
}

/// `int_a^inf f(u) du` for integrands with algebraic decay.
///
/// Maps `u = a + scale * t / (1 - t)` onto `t in (0, 1)`. `ends` refers to the
/// mapped variable: a `u^(-3/2)` tail becomes a `(1 - t)^(-1/2)` singularity,
/// so `InvSqrtBoth` suits kernels with a square-root singularity at `a` and a
/// `u^(-3/2)` tail.
pub fn integrate_semiinf_algebraic<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    scale: f64,
    ends: Endpoint,
    spec: &QuadSpec,
) -> Result<f64> {
    spec.validate()?;
    if !(scale > 0.0) || !a.is_finite() {
        return Err(domain("need finite a and scale > 0"));
    }
    let g = |t: f64| {
        let s = 1.0 - t;
        if s <= 0.0 {
            return 0.0;
        }
        scale / (s * s) * f(a + scale * t / s)
    };
    finite_estimate(&g, 0.0, 1.0, ends, spec).map(|e| e.value)
}

/// `int_R f(x) dx`, split at `centre`.
pub fn integrate_real_line<F: Fn(f64) -> f64>(
    f: F,
    centre: f64,
    tail: Tail,
    spec: &QuadSpec,
) -> Result<f64> {
    let right = integrate_semiinf_with(|u| f(centre + u), 0.0, tail, spec)?;
    let left = integrate_semiinf_with(|u| f(centre - u), 0.0, tail, spec)?;
    Ok(left + right)
}

/// Laplace transform `int_0^inf e^(-theta s) f(s) ds`.
pub fn laplace_at<F: Fn(f64) -> f64>(f: F, theta: f64, spec: &QuadSpec) -> Result<f64> {
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(domain(format!("theta must be > 0, got {theta}")));
    }
    integrate_semiinf_with(
        |s| {
            let w = (-theta * s).exp();
            if w == 0.0 {
                0.0
            } else {
                w * f(s)
            }
        },
        0.0,
        Tail::decay(theta),
        spec,
    )
}

/// Fourier transform `int_R e^(i xi x) f(x) dx`.
///
/// The cosine part integrates the even part of `f`, the sine part the odd part,
/// so an even density yields a zero imaginary part exactly.
pub fn fourier_at<F: Fn(f64) -> f64>(f: F, xi: f64, spec: &QuadSpec) -> Result<Complex64> {
    if !xi.is_finite() {
        return Err(domain("frequency must be finite"));
    }
    let re = integrate_semiinf(|x| (xi * x).cos() * (f(x) + f(-x)), 0.0, spec)?;
    let im = if xi == 0.0 {
        0.0
    } else {
        integrate_semiinf(|x| (xi * x).sin() * (f(x) - f(-x)), 0.0, spec)?
    };
    Ok(Complex64::new(re, im))
}

/// `int_0^inf f` where `f` may carry a log singularity at `log_at`, narrow
/// features at `peaks`, and square-root onset at 0.
pub(crate) fn integrate_halfline_breaks(
    f: &dyn Fn(f64) -> f64,
    log_at: Option<f64>,
    peaks: &[f64],
    tail: Tail,
    spec: &QuadSpec,
) -> Result<f64> {
    let mut breaks: Vec<f64> =
        log_at.into_iter().chain(peaks.iter().copied()).filter(|b| *b > 0.0).collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut nodes = vec![0.0];
    for b in breaks {
        let prev = *nodes.last().unwrap();
        nodes.push(0.5 * (prev + b));
        nodes.push(b);
    }
    let is_log = |u: f64| log_at == Some(u);
    let mut total = 0.0;
    for pair in nodes.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let ends = if a == 0.0 {
            Endpoint::InvSqrtLeft
        } else if is_log(a) {
            Endpoint::LogLeft
        } else if is_log(b) {
            Endpoint::LogRight
        } else {
            Endpoint::Regular
        };
        total += integrate_finite_with(f, a, b, ends, spec)?;
    }
    let last = *nodes.last().unwrap();
    let start = if last == 0.0 {
        Endpoint::InvSqrtLeft
    } else if is_log(last) {
        Endpoint::LogLeft
    } else {
        Endpoint::Regular
    };
    total += integrate_semiinf_with(f, last, tail.with_start(start), spec)?;
    Ok(total)
}

/// Collects the first error raised inside an integrand closure.
///
/// Integrands must return `f64`, so nested evaluators that fail store their
/// error here and return NaN. The outer integrator then trips on the NaN and
/// [`ErrorSlot::finish`] replaces that generic failure with the original one.
#[derive(Default)]
pub(crate) struct ErrorSlot(Cell<Option<Error>>);

impl ErrorSlot {
    pub(crate) fn new() -> Self {
        Self(Cell::new(None))
    }

    pub(crate) fn take(&self, r: Result<f64>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                let prev = self.0.take();
                self.0.set(Some(prev.unwrap_or(e)));
                f64::NAN
            }
        }
    }

    pub(crate) fn finish<T>(self, r: Result<T>) -> Result<T> {
        match self.0.into_inner() {
            Some(e) => Err(e),
            None => r,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec() -> QuadSpec {
        QuadSpec::default()
    }

    /// Composite trapezoid on a fine uniform grid.
    fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let inner: f64 = (1..n).map(|k| f(a + k as f64 * h)).sum();
        h * (0.5 * (f(a) + f(b)) + inner)
    }

    #[test]
    fn finite_examples() {
        assert!((integrate_finite(|_| 1.0, 0.0, 1.0, &spec()).unwrap() - 1.0).abs() < 1e-14);
        let v = integrate_finite_with(|u| 1.0 / u.sqrt(), 0.0, 1.0, Endpoint::InvSqrtLeft, &spec())
            .unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        let g = |u: f64| (-u * u / 2.0).exp();
        let oracle = trapezoid(g, 0.0, 2.0, 200_000);
        let v = integrate_finite(g, 0.0, 2.0, &spec()).unwrap();
        assert!((v - oracle).abs() < 1e-9, "{v} vs {oracle}");
        assert!((v - 1.19629).abs() < 1e-5);
    }

    #[test]
    fn singular_handling_matches_closed_forms() {
        let v = integrate_finite_with(
            |z| 1.0 / (-z).sqrt(),
            -1.0,
            0.0,
            Endpoint::InvSqrtRight,
            &spec(),
        )
        .unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        // int_0^1 ln u du = -1
        let v = integrate_finite_with(|u| u.ln(), 0.0, 1.0, Endpoint::LogLeft, &spec()).unwrap();
        assert!((v + 1.0).abs() < 1e-10);
        let v = integrate_finite_with(|u| (1.0 - u).ln(), 0.0, 1.0, Endpoint::LogRight, &spec())
            .unwrap();
        assert!((v + 1.0).abs() < 1e-10);
        // Beta(1/2, 1/2) = pi
        let v = integrate_finite_with(
            |u| 1.0 / (u * (1.0 - u)).sqrt(),
            0.0,
            1.0,
            Endpoint::InvSqrtBoth,
            &spec(),
        )
        .unwrap();
        assert!((v - std::f64::consts::PI).abs() < 1e-10);
    }

    #[test]
    fn semiinf_examples() {
        let v = integrate_semiinf(|u| (-u).exp(), 0.0, &spec()).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
        let v = integrate_semiinf(|u| u * (-u * u / 2.0).exp(), 0.0, &spec()).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
        let v = integrate_semiinf_with(
            |u| (-u).exp() / u.sqrt(),
            0.0,
            Tail::decay(1.0).with_start(Endpoint::InvSqrtLeft),
            &spec(),
        )
        .unwrap();
        // Gamma(1/2) from statrs as the independent reference
        assert!((v - statrs::function::gamma::gamma(0.5)).abs() < 1e-9);
    }

    #[test]
    fn divergence_is_detected() {
        let r = integrate_semiinf(|_| 1.0, 0.0, &spec());
        assert!(matches!(r, Err(Error::Divergence(_))), "{r:?}");
        let r = integrate_semiinf(|u| u.exp(), 0.0, &spec());
        assert!(matches!(r, Err(Error::Divergence(_))), "{r:?}");
    }

    #[test]
    fn tolerance_failure_carries_estimate() {
        let tight = QuadSpec { max_depth: 2, ..spec() };
        match integrate_finite(|u| 1.0 / u.sqrt(), 0.0, 1.0, &tight) {
            Err(Error::Tolerance { estimate, error_bound }) => {
                assert!(estimate > 1.0 && estimate < 2.0);
                assert!(error_bound > 0.0);
            }
            other => panic!("expected tolerance failure, got {other:?}"),
        }
    }

    #[test]
    fn algebraic_tail() {
        // int_0^inf du / (sqrt(u) (1 + u)) = pi
        let v = integrate_semiinf_algebraic(
            |u| 1.0 / (u.sqrt() * (1.0 + u)),
            0.0,
            1.0,
            Endpoint::InvSqrtBoth,
            &spec(),
        )
        .unwrap();
        assert!((v - std::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn laplace_examples() {
        let v = laplace_at(|s| (-s).exp(), 1.0, &spec()).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        // exponential density of mean eps approximates a point mass at 0
        let eps = 1e-3;
        let v = laplace_at(|s| (-s / eps).exp() / eps, 3.0, &spec()).unwrap();
        assert!((v - 1.0 / (1.0 + 3.0 * eps)).abs() < 1e-9);
        assert!((v - 1.0).abs() < 1e-2);
    }

    #[test]
    fn fourier_examples() {
        let f = |x: f64| 0.5 * (-x.abs()).exp();
        let v = fourier_at(f, 1.0, &spec()).unwrap();
        assert!((v.re - 0.5).abs() < 1e-9 && v.im == 0.0);
        let v = fourier_at(f, 0.0, &spec()).unwrap();
        assert!((v.re - 1.0).abs() < 1e-9);
        // shifted density: e^(i xi) phase
        let g = |x: f64| 0.5 * (-(x - 1.0).abs()).exp();
        let v = fourier_at(g, 1.0, &spec()).unwrap();
        assert!((v.re - 0.5 * 1f64.cos()).abs() < 1e-8);
        assert!((v.im - 0.5 * 1f64.sin()).abs() < 1e-8);
    }

    #[test]
    fn spec_validation() {
        assert!(QuadSpec::new(0.0, 1e-10, 60, 1e-11).is_err());
        assert!(QuadSpec::new(1e-12, 1e-10, 0, 1e-11).is_err());
        assert!(QuadSpec::new(1e-12, 1e-10, 60, 1e-9).is_err());
        assert!(QuadSpec::new(1e-12, 1e-10, 60, 1e-11).is_ok());
    }

    #[test]
    fn refinement_stays_within_reported_bound() {
        let f = |u: f64| (3.0 * u).sin() * (-u).exp() + u.sqrt();
        let coarse = QuadSpec::default().with_rel_tol(1e-6).with_abs_tol(1e-8);
        let fine = coarse.with_rel_tol(1e-7);
        let a = integrate_finite_estimate(f, 0.0, 5.0, Endpoint::Regular, &coarse).unwrap();
        let b = integrate_finite_estimate(f, 0.0, 5.0, Endpoint::Regular, &fine).unwrap();
        assert!((a.value - b.value).abs() <= a.error);
    }

    proptest! {
        #[test]
        fn linearity(alpha in -3.0f64..3.0, beta in -3.0f64..3.0, c in 0.1f64..4.0, k in 0.5f64..6.0) {
            let f = |u: f64| (-c * u * u).exp();
            let g = |u: f64| (k * u).cos() / (1.0 + u);
            let s = spec();
            let lhs = integrate_finite(|u| alpha * f(u) + beta * g(u), 0.0, 3.0, &s).unwrap();
            let fi = integrate_finite(f, 0.0, 3.0, &s).unwrap();
            let gi = integrate_finite(g, 0.0, 3.0, &s).unwrap();
            let rhs = alpha * fi + beta * gi;
            let tol = 2.0 * (s.abs_tol + s.rel_tol * (alpha.abs() * fi.abs() + beta.abs() * gi.abs()));
            prop_assert!((lhs - rhs).abs() <= tol, "{} vs {}", lhs, rhs);
        }

        #[test]
        fn semiinf_exponential_rate(rate in 0.01f64..50.0) {
            let v = integrate_semiinf(|u| (-rate * u).exp(), 0.0, &spec()).unwrap();
            prop_assert!((v * rate - 1.0).abs() < 1e-9);
        }
    }
}
