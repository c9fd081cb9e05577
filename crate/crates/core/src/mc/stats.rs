//! Estimators and goodness-of-fit statistics for Monte Carlo output.

use serde::Serialize;

use crate::error::{domain, Result};

const Z95: f64 = 1.959963984540054;

/// Point estimate with its standard error and a 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MCEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n: u64,
    pub ci95: (f64, f64),
}

impl MCEstimate {
    /// Sample mean with the normal interval.
    pub fn from_samples(xs: &[f64]) -> Result<Self> {
        if xs.len() < 2 {
            return Err(domain("need at least two samples"));
        }
        let n = xs.len() as f64;
        let mean = pairwise_sum(xs) / n;
        let dev: Vec<f64> = xs.iter().map(|x| (x - mean).powi(2)).collect();
        let var = pairwise_sum(&dev) / (n - 1.0);
        let se = (var / n).sqrt();
        Ok(Self { value: mean, std_error: se, n: xs.len() as u64, ci95: (mean - Z95 * se, mean + Z95 * se) })
    }

    /// Proportion with the Wilson score interval.
    pub fn from_binomial(successes: u64, n: u64) -> Result<Self> {
        if n == 0 || successes > n {
            return Err(domain(format!("invalid binomial counts {successes}/{n}")));
        }
        let nf = n as f64;
        let p = successes as f64 / nf;
        let z2 = Z95 * Z95;
        let denom = 1.0 + z2 / nf;
        let centre = (p + z2 / (2.0 * nf)) / denom;
        let half = Z95 * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
        Ok(Self {
            value: p,
            std_error: (p * (1.0 - p) / nf).sqrt(),
            n,
            ci95: ((centre - half).max(0.0), (centre + half).min(1.0)),
        })
    }

    /// `|value - target| <= k * std_error`.
    pub fn within_sigmas(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.std_error
    }

    /// Number of standard errors between the estimate and `target`.
    pub fn z_score(&self, target: f64) -> f64 {
        (self.value - target) / self.std_error
    }
}

/// Pairwise summation; error grows like `log n` rather than `n`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Kolmogorov-Smirnov distance between a sorted sample and a model CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> Result<f64> {
    if sorted.is_empty() {
        return Err(domain("empty sample"));
    }
    if sorted.windows(2).any(|w| w[0] > w[1]) {
        return Err(domain("sample must be sorted"));
    }
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}

/// Pearson correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 3 {
        return Err(domain("need two samples of equal length >= 3"));
    }
    let n = x.len() as f64;
    let mx = pairwise_sum(x) / n;
    let my = pairwise_sum(y) / n;
    let sxy: Vec<f64> = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).collect();
    let sxx: Vec<f64> = x.iter().map(|a| (a - mx).powi(2)).collect();
    let syy: Vec<f64> = y.iter().map(|b| (b - my).powi(2)).collect();
    let den = (pairwise_sum(&sxx) * pairwise_sum(&syy)).sqrt();
    if den == 0.0 {
        return Err(domain("constant sample"));
    }
    Ok(pairwise_sum(&sxy) / den)
}

/// Ranks `0..n` with ties averaged.
pub fn ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut r = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let avg = 0.5 * (i + j) as f64;
        for k in i..=j {
            r[idx[k]] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    pearson(&ranks(x), &ranks(y))
}

/// Empirical quantile by linear interpolation of a sorted sample.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}
