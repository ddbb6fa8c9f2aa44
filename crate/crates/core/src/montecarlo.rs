//! Empirical CDFs, Kolmogorov–Smirnov distances and the sampling experiment
//! that compares simulated smallest eigenvalues with the edge laws.

use serde::{Deserialize, Serialize};

use crate::edge_laws::{cdf_exact_hard_edge, cdf_limit, cdf_two_term, EXACT_MAX_ALPHA1, EXACT_MAX_N};
use crate::error::{Error, Result};
use crate::sampling::{sample, SamplerConfig, Want};

/// Asymptotic 5% critical value `1.358/√n` of the one-sample KS statistic.
pub fn ks_critical_one_sample(n: usize) -> f64 {
    1.358 / (n as f64).sqrt()
}

/// Asymptotic 5% critical value `1.358·√((n+m)/(nm))` of the two-sample statistic.
pub fn ks_critical_two_sample(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    1.358 * ((n + m) / (n * m)).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalCdf {
    values: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("empirical CDF needs at least one sample"));
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::invalid("samples contain NaN"));
        }
        let mut values = samples.to_vec();
        values.sort_by(f64::total_cmp);
        Ok(EmpiricalCdf { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `#{samples ≤ x} / n`.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.values.partition_point(|v| *v <= x) as f64 / self.len() as f64
    }
}

pub fn empirical_cdf(samples: &[f64]) -> Result<EmpiricalCdf> {
    EmpiricalCdf::new(samples)
}

/// `sup |F̂ − F|`, checked on both sides of every jump.
pub fn ks_distance<F: Fn(f64) -> f64>(ecdf: &EmpiricalCdf, cdf: F) -> f64 {
    let n = ecdf.len() as f64;
    let v = ecdf.values();
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < v.len() {
        // ties form a single jump
        let mut j = i;
        while j + 1 < v.len() && v[j + 1] == v[i] {
            j += 1;
        }
        let f = cdf(v[i]);
        d = d.max((i as f64 / n - f).abs()).max(((j + 1) as f64 / n - f).abs());
        i = j + 1;
    }
    d
}

/// Two-sample KS statistic `sup |F̂₁ − F̂₂|`.
pub fn ks_two_sample(a: &EmpiricalCdf, b: &EmpiricalCdf) -> f64 {
    let (x, y) = (a.values(), b.values());
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < x.len() && j < y.len() {
        let t = x[i].min(y[j]);
        while i < x.len() && x[i] <= t {
            i += 1;
        }
        while j < y.len() && y[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPoint {
    pub x: f64,
    pub empirical: f64,
    pub leading: f64,
    pub two_term: f64,
    pub exact: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: SamplerConfig,
    pub samples: usize,
    pub ks_leading: f64,
    pub ks_two_term: f64,
    pub ks_exact: Option<f64>,
    pub ks_critical: f64,
    pub cholesky_resamples: u64,
    pub points: Vec<ExperimentPoint>,
}

/// Which predictions an experiment compares against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Predictions {
    pub exact: bool,
}

/// Smallest eigenvalues on the hard-edge scale `N²φ₁`.
pub fn hard_edge_samples(config: &SamplerConfig, count: usize) -> Result<(Vec<f64>, u64)> {
    let mut cfg = *config;
    cfg.want = Want::SmallestOnly;
    let s = sample(&cfg, count)?;
    let n2 = (cfg.params.n * cfg.params.n) as f64;
    Ok((s.smallest().into_iter().map(|v| v * n2).collect(), s.cholesky_resamples))
}

/// Draws `count` smallest eigenvalues, tabulates the empirical CDF against
/// the limit and two-term laws on `grid`, and reports KS distances.
pub fn run_experiment(
    config: &SamplerConfig,
    count: usize,
    grid: &[f64],
    predictions: Predictions,
) -> Result<ExperimentReport> {
    config.validate()?;
    let p = config.params;
    let a1 = p.alpha1_index("the two-term comparison")?;
    let exact = predictions.exact;
    if exact && (p.n > EXACT_MAX_N || a1 > EXACT_MAX_ALPHA1) {
        return Err(Error::OutsideEnvelope(format!(
            "exact comparison needs N <= {EXACT_MAX_N} and alpha1 <= {EXACT_MAX_ALPHA1}"
        )));
    }
    let (xs, incidents) = hard_edge_samples(config, count)?;
    let ecdf = EmpiricalCdf::new(&xs)?;
    let leading = |x: f64| cdf_limit(a1, p.beta, x.max(0.0)).unwrap_or(f64::NAN);
    let two_term = |x: f64| cdf_two_term(&p, x.max(0.0)).map(|t| t.clamped()).unwrap_or(f64::NAN);
    let exact_f = |x: f64| cdf_exact_hard_edge(&p, x.max(0.0)).unwrap_or(f64::NAN);
    let points = grid
        .iter()
        .map(|&x| ExperimentPoint {
            x,
            empirical: ecdf.evaluate(x),
            leading: leading(x),
            two_term: two_term(x),
            exact: exact.then(|| exact_f(x)),
        })
        .collect();
    Ok(ExperimentReport {
        config: *config,
        samples: count,
        ks_leading: ks_distance(&ecdf, leading),
        ks_two_term: ks_distance(&ecdf, two_term),
        ks_exact: exact.then(|| ks_distance(&ecdf, exact_f)),
        ks_critical: ks_critical_one_sample(count),
        cholesky_resamples: incidents,
        points,
    })
}

/// KS distances (leading, two-term) over several seeds.
pub fn repeated_ks(config: &SamplerConfig, count: usize, seeds: &[u64]) -> Result<Vec<(f64, f64)>> {
    seeds
        .iter()
        .map(|&s| {
            let mut cfg = *config;
            cfg.seed = s;
            let r = run_experiment(&cfg, count, &[], Predictions::default())?;
            Ok((r.ks_leading, r.ks_two_term))
        })
        .collect()
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::batch_rng;
    use rand_chacha::rand_core::RngCore;

    #[test]
    fn ecdf_examples() {
        let e = empirical_cdf(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(e.evaluate(0.5), 0.0);
        assert_eq!(e.evaluate(3.0), 1.0);
        assert_eq!(e.evaluate(2.0), 2.0 / 3.0);
        assert!(empirical_cdf(&[]).is_err());
    }

    #[test]
    fn ks_examples() {
        let e = empirical_cdf(&[0.5]).unwrap();
        assert_eq!(ks_distance(&e, |x| x.clamp(0.0, 1.0)), 0.5);
        let s = [0.1, 0.4, 0.4, 0.9];
        let e = empirical_cdf(&s).unwrap();
        assert_eq!(ks_two_sample(&e, &e), 0.0);
        // against its own step function only the left limits differ: the largest jump
        assert_eq!(ks_distance(&e, |x| e.evaluate(x)), 0.5);
    }

    #[test]
    fn ks_two_sample_disjoint() {
        let a = empirical_cdf(&[0.0, 1.0]).unwrap();
        let b = empirical_cdf(&[2.0, 3.0, 4.0]).unwrap();
        assert_eq!(ks_two_sample(&a, &b), 1.0);
    }

    #[test]
    fn uniform_draws_pass_ks() {
        let mut pass = 0;
        for seed in 0..100 {
            let mut rng = batch_rng(seed, 0);
            let xs: Vec<f64> = (0..1000)
                .map(|_| (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64)
                .collect();
            let d = ks_distance(&empirical_cdf(&xs).unwrap(), |x| x);
            if d < ks_critical_one_sample(1000) {
                pass += 1;
            }
        }
        assert!(pass >= 94, "{pass} of 100 passed");
    }

    #[test]
    fn critical_values() {
        assert!((ks_critical_one_sample(1000) - 0.0430).abs() < 1e-4);
        assert!((ks_critical_two_sample(1000, 1000) - 0.0607).abs() < 1e-4);
    }

    #[test]
    fn median_rule() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
