//! Empirical distribution tools: histograms, total variation, chi-square and KS tests.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Exact `D_{Z,s,c}` probabilities of `lo..=hi`, normalized over the whole of `Z`.
pub fn exact_z_pmf(s: f64, center: f64, lo: i64, hi: i64) -> Vec<f64> {
    let rho = |x: i64| (-PI * (x as f64 - center).powi(2) / (s * s)).exp();
    let reach = (20.0 * s).ceil() as i64 + 1;
    let c = center.round() as i64;
    let total: f64 = (c - reach..=c + reach).map(rho).sum();
    (lo..=hi).map(|x| rho(x) / total).collect()
}

/// Integer-valued histogram.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Histogram {
    pub counts: BTreeMap<i64, u64>,
    pub total: u64,
}

impl Histogram {
    pub fn add(&mut self, x: i64) {
        *self.counts.entry(x).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn frequency(&self, x: i64) -> f64 {
        self.counts.get(&x).copied().unwrap_or(0) as f64 / self.total.max(1) as f64
    }

    /// `value,count` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,count\n");
        for (v, c) in &self.counts {
            out.push_str(&format!("{v},{c}\n"));
        }
        out
    }
}

impl FromIterator<i64> for Histogram {
    fn from_iter<I: IntoIterator<Item = i64>>(iter: I) -> Self {
        let mut h = Histogram::default();
        for x in iter {
            h.add(x);
        }
        h
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Pearson chi-square test of `counts` against the uniform distribution.
pub fn chi_square_uniform(counts: &[u64]) -> Result<TestResult> {
    if counts.len() < 2 {
        return Err(Error::Parameter("chi-square needs at least two cells".into()));
    }
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    if expected <= 0.0 {
        return Err(Error::Parameter("chi-square needs samples".into()));
    }
    let statistic: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let dist = ChiSquared::new((counts.len() - 1) as f64).map_err(|e| Error::Parameter(e.to_string()))?;
    Ok(TestResult { statistic, p_value: dist.sf(statistic) })
}

/// Asymptotic Kolmogorov tail `Q(λ) = 2 Σ (-1)^{k-1} e^{-2k²λ²}`.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample Kolmogorov–Smirnov test. Sorts both inputs.
pub fn ks_two_sample(a: &mut [f64], b: &mut [f64]) -> TestResult {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = (na * nb / (na + nb)).sqrt();
    TestResult { statistic: d, p_value: kolmogorov_q((ne + 0.12 + 0.11 / ne) * d) }
}
