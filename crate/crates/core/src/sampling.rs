//! Random-matrix samplers for the Jacobi β-ensemble.
//!
//! Two constructions: the tridiagonal Killip–Nenciu model (any `β > 0`) and
//! the double-Wishart (MANOVA) model for `β ∈ {1, 2}`. Every batch owns a
//! ChaCha8 stream selected by `(seed, batch index)`, so output does not
//! depend on the thread count.

use nalgebra::{Complex, DMatrix};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::near_integer;
use crate::selberg::EnsembleParams;

/// Largest `N` for the dense double-Wishart path.
pub const DENSE_MAX_N: usize = 256;
/// Largest `N` for the tridiagonal path.
pub const TRIDIAG_MAX_N: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    KillipNenciu,
    DoubleWishart,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Want {
    SmallestOnly,
    AllEigenvalues,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub params: EnsembleParams,
    pub method: Method,
    pub seed: u64,
    pub batch_size: usize,
    pub want: Want,
}

impl SamplerConfig {
    pub fn new(params: EnsembleParams, method: Method, seed: u64) -> Self {
        SamplerConfig {
            params,
            method,
            seed,
            batch_size: 250,
            want: Want::SmallestOnly,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.batch_size == 0 {
            return Err(Error::invalid("batch size must be positive"));
        }
        match self.method {
            Method::KillipNenciu => {
                if self.params.n > TRIDIAG_MAX_N {
                    return Err(Error::OutsideEnvelope(format!(
                        "tridiagonal sampler supports N <= {TRIDIAG_MAX_N}"
                    )));
                }
            }
            Method::DoubleWishart => {
                wishart_dims(&self.params)?;
            }
        }
        Ok(())
    }
}

/// Row counts `(n₁, n₂)` of the two Gaussian factors.
pub fn wishart_dims(p: &EnsembleParams) -> Result<(usize, usize)> {
    let n = p.n;
    if n > DENSE_MAX_N {
        return Err(Error::OutsideEnvelope(format!(
            "double-Wishart sampler supports N <= {DENSE_MAX_N}"
        )));
    }
    let dims = if p.beta == 1.0 {
        // n = 2α + N + 1
        let a = near_integer(2.0 * p.alpha1, 1e-12);
        let b = near_integer(2.0 * p.alpha2, 1e-12);
        match (a, b) {
            (Some(a), Some(b)) if a >= 0 && b >= 0 => Some((a as usize + n + 1, b as usize + n + 1)),
            _ => None,
        }
    } else if p.beta == 2.0 {
        let a = near_integer(p.alpha1, 1e-12);
        let b = near_integer(p.alpha2, 1e-12);
        match (a, b) {
            (Some(a), Some(b)) if a >= 0 && b >= 0 => Some((a as usize + n, b as usize + n)),
            _ => None,
        }
    } else {
        return Err(Error::mismatch(format!(
            "double-wishart sampling needs beta in {{1, 2}}, got {}",
            p.beta
        )));
    };
    dims.ok_or_else(|| {
        Error::mismatch(if p.beta == 1.0 {
            "double-wishart sampling at beta = 1 needs 2*alpha1 and 2*alpha2 to be nonnegative integers".to_string()
        } else {
            "double-wishart sampling at beta = 2 needs nonnegative integer alpha1 and alpha2".to_string()
        })
    })
}

/// Eigenvalue draws, in draw order. Each draw holds its eigenvalues in
/// ascending order (one value for [`Want::SmallestOnly`]).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub config: SamplerConfig,
    pub count: usize,
    pub per_draw: usize,
    pub values: Vec<f64>,
    /// Draws rejected because `A + B` failed to factor.
    pub cholesky_resamples: u64,
}

impl SampleSet {
    pub fn draw(&self, i: usize) -> &[f64] {
        &self.values[i * self.per_draw..(i + 1) * self.per_draw]
    }

    pub fn smallest(&self) -> Vec<f64> {
        self.values.chunks(self.per_draw).map(|c| c[0]).collect()
    }

    pub fn largest(&self) -> Vec<f64> {
        self.values.chunks(self.per_draw).map(|c| c[c.len() - 1]).collect()
    }
}

/// Generator for batch `batch` of a run seeded with `seed`.
pub fn batch_rng(seed: u64, batch: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    rng
}

/// Beta variate as `X/(X+Y)` with `X, Y` Gamma distributed.
fn beta_variate(rng: &mut ChaCha8Rng, a: f64, b: f64) -> f64 {
    let ga = Gamma::new(a, 1.0).expect("positive shape");
    let gb = Gamma::new(b, 1.0).expect("positive shape");
    loop {
        let x: f64 = ga.sample(rng);
        let y: f64 = gb.sample(rng);
        let s = x + y;
        if s > 0.0 && s.is_finite() {
            return x / s;
        }
    }
}

/// Diagonal and off-diagonal of one Killip–Nenciu tridiagonal matrix `B Bᵀ`.
pub fn killip_nenciu_tridiag(p: &EnsembleParams, rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    let n = p.n;
    let h = p.beta / 2.0;
    let a = 2.0 * (p.alpha1 + 1.0) / p.beta - 1.0;
    let b = 2.0 * (p.alpha2 + 1.0) / p.beta - 1.0;
    let mut c = Vec::with_capacity(n);
    let mut s = Vec::with_capacity(n);
    for k in (1..=n).rev() {
        let k = k as f64;
        let v = beta_variate(rng, h * (a + k), h * (b + k));
        c.push(v.sqrt());
        s.push((1.0 - v).sqrt());
    }
    let mut cp = Vec::with_capacity(n.saturating_sub(1));
    let mut sp = Vec::with_capacity(n.saturating_sub(1));
    for k in (1..n).rev() {
        let k = k as f64;
        let v = beta_variate(rng, h * k, h * (a + b + 1.0 + k));
        cp.push(v.sqrt());
        sp.push((1.0 - v).sqrt());
    }
    // B is upper bidiagonal with diagonal d and superdiagonal e
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    d[0] = c[0];
    for i in 1..n {
        d[i] = c[i] * sp[i - 1];
    }
    for i in 0..n.saturating_sub(1) {
        e[i] = -s[i] * cp[i];
    }
    let mut diag = vec![0.0; n];
    for i in 0..n {
        diag[i] = d[i] * d[i] + if i + 1 < n { e[i] * e[i] } else { 0.0 };
    }
    let off = (0..n.saturating_sub(1)).map(|i| e[i] * d[i + 1]).collect();
    (diag, off)
}

/// Number of eigenvalues strictly below `x` (Sturm sequence count).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (diag[i].abs() + x.abs() + 1e-300);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// `k`-th smallest eigenvalue (0-based) by bisection.
pub fn kth_eig_tridiag(diag: &[f64], off: &[f64], k: usize) -> f64 {
    assert!(k < diag.len(), "eigenvalue index out of range");
    assert_eq!(off.len() + 1, diag.len(), "off-diagonal length must be N - 1");
    let (mut lo, mut hi) = gershgorin(diag, off);
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    let tol = 1e-13 * scale;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Smallest eigenvalue of the symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal `off`.
pub fn smallest_eig_tridiag(diag: &[f64], off: &[f64]) -> f64 {
    kth_eig_tridiag(diag, off, 0)
}

/// All eigenvalues in ascending order.
pub fn eig_tridiag(diag: &[f64], off: &[f64]) -> Vec<f64> {
    (0..diag.len()).map(|k| kth_eig_tridiag(diag, off, k)).collect()
}

const SYMMETRY_TOL: f64 = 1e-12;

/// Ascending spectrum of a real symmetric matrix.
pub fn sym_eig_dense(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::invalid("matrix must be square"));
    }
    let scale = m.amax().max(1.0);
    let dev = (m - m.transpose()).amax();
    if dev > SYMMETRY_TOL * scale {
        return Err(Error::Asymmetric { max_deviation: dev });
    }
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Ascending spectrum of a Hermitian matrix.
pub fn herm_eig_dense(m: &DMatrix<Complex<f64>>) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::invalid("matrix must be square"));
    }
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let dev = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if dev > SYMMETRY_TOL * scale {
        return Err(Error::Asymmetric { max_deviation: dev });
    }
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

fn kn_draw(p: &EnsembleParams, want: Want, rng: &mut ChaCha8Rng, out: &mut Vec<f64>) {
    let (diag, off) = killip_nenciu_tridiag(p, rng);
    match want {
        Want::SmallestOnly => out.push(smallest_eig_tridiag(&diag, &off)),
        Want::AllEigenvalues => out.extend(eig_tridiag(&diag, &off)),
    }
}

fn real_gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

fn complex_gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex<f64>> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex::new(re, im)
    })
}

/// Spectrum of `A(A+B)⁻¹` through `L⁻¹ A L⁻ᵀ` with `A + B = L Lᵀ`.
/// Returns `None` when the Cholesky factorisation fails.
fn manova_real(a: DMatrix<f64>, b: DMatrix<f64>) -> Option<Vec<f64>> {
    let chol = (&a + b).cholesky()?;
    let l = chol.l();
    let x = l.solve_lower_triangular(&a)?;
    let y = l.solve_lower_triangular(&x.transpose())?;
    let y = (&y + y.transpose()) * 0.5;
    sym_eig_dense(&y).ok()
}

fn manova_complex(a: DMatrix<Complex<f64>>, b: DMatrix<Complex<f64>>) -> Option<Vec<f64>> {
    let chol = (&a + b).cholesky()?;
    let l = chol.l();
    let x = l.solve_lower_triangular(&a)?;
    let y = l.solve_lower_triangular(&x.adjoint())?;
    let y = (&y + y.adjoint()) * Complex::new(0.5, 0.0);
    herm_eig_dense(&y).ok()
}

fn wishart_draw(p: &EnsembleParams, dims: (usize, usize), want: Want, rng: &mut ChaCha8Rng, out: &mut Vec<f64>) -> u64 {
    let n = p.n;
    let mut incidents = 0;
    loop {
        let ev = if p.beta == 1.0 {
            let m1 = real_gaussian(dims.0, n, rng);
            let m2 = real_gaussian(dims.1, n, rng);
            manova_real(m1.transpose() * &m1, m2.transpose() * &m2)
        } else {
            let m1 = complex_gaussian(dims.0, n, rng);
            let m2 = complex_gaussian(dims.1, n, rng);
            manova_complex(m1.adjoint() * &m1, m2.adjoint() * &m2)
        };
        match ev {
            Some(ev) => {
                match want {
                    Want::SmallestOnly => out.push(ev[0]),
                    Want::AllEigenvalues => out.extend(ev),
                }
                return incidents;
            }
            None => incidents += 1,
        }
    }
}

fn run_batches<F>(config: &SamplerConfig, count: usize, draw: F) -> SampleSet
where
    F: Fn(&mut ChaCha8Rng, &mut Vec<f64>) -> u64 + Sync,
{
    let per_draw = match config.want {
        Want::SmallestOnly => 1,
        Want::AllEigenvalues => config.params.n,
    };
    let batches = count.div_ceil(config.batch_size);
    let results: Vec<(Vec<f64>, u64)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = batch_rng(config.seed, b as u64);
            let draws = config.batch_size.min(count - b * config.batch_size);
            let mut out = Vec::with_capacity(draws * per_draw);
            let mut incidents = 0;
            for _ in 0..draws {
                incidents += draw(&mut rng, &mut out);
            }
            (out, incidents)
        })
        .collect();
    let mut values = Vec::with_capacity(count * per_draw);
    let mut cholesky_resamples = 0;
    for (v, i) in results {
        values.extend(v);
        cholesky_resamples += i;
    }
    SampleSet {
        config: *config,
        count,
        per_draw,
        values,
        cholesky_resamples,
    }
}

pub fn sample_killip_nenciu(config: &SamplerConfig, count: usize) -> Result<SampleSet> {
    let mut cfg = *config;
    cfg.method = Method::KillipNenciu;
    cfg.validate()?;
    let p = cfg.params;
    Ok(run_batches(&cfg, count, |rng, out| {
        kn_draw(&p, cfg.want, rng, out);
        0
    }))
}

pub fn sample_double_wishart(config: &SamplerConfig, count: usize) -> Result<SampleSet> {
    let mut cfg = *config;
    cfg.method = Method::DoubleWishart;
    cfg.validate()?;
    let p = cfg.params;
    let dims = wishart_dims(&p)?;
    Ok(run_batches(&cfg, count, |rng, out| {
        wishart_draw(&p, dims, cfg.want, rng, out)
    }))
}

/// Draws `count` samples with the configured method.
pub fn sample(config: &SamplerConfig, count: usize) -> Result<SampleSet> {
    match config.method {
        Method::KillipNenciu => sample_killip_nenciu(config, count),
        Method::DoubleWishart => sample_double_wishart(config, count),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand_chacha::rand_core::RngCore;

    fn ep(n: usize, b: f64, a1: f64, a2: f64) -> EnsembleParams {
        EnsembleParams::new(n, b, a1, a2).unwrap()
    }

    #[test]
    fn tridiag_small_cases() {
        assert_eq!(smallest_eig_tridiag(&[3.5], &[]), 3.5);
        assert_abs_diff_eq!(smallest_eig_tridiag(&[0.0, 0.0], &[1.0]), -1.0, epsilon = 1e-13);
        let ev = eig_tridiag(&[2.0, 2.0, 2.0], &[1.0, 1.0]);
        let r = 2f64.sqrt();
        for (a, b) in ev.iter().zip([2.0 - r, 2.0, 2.0 + r]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn tridiag_matches_dense() {
        let mut rng = batch_rng(7, 0);
        let n = 50;
        let u = |r: &mut ChaCha8Rng| (r.next_u64() >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
        let diag: Vec<f64> = (0..n).map(|_| u(&mut rng)).collect();
        let off: Vec<f64> = (0..n - 1).map(|_| u(&mut rng)).collect();
        let m = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                diag[i]
            } else if i + 1 == j {
                off[i]
            } else if j + 1 == i {
                off[j]
            } else {
                0.0
            }
        });
        let dense = sym_eig_dense(&m).unwrap();
        let bis = eig_tridiag(&diag, &off);
        for (a, b) in dense.iter().zip(&bis) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-11);
        }
    }

    #[test]
    fn dense_examples() {
        assert_eq!(sym_eig_dense(&DMatrix::identity(4, 4)).unwrap(), vec![1.0; 4]);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 1.0, 2.0]));
        let ev = sym_eig_dense(&d).unwrap();
        for (a, b) in ev.iter().zip([1.0, 2.0, 3.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-14);
        }
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(sym_eig_dense(&bad), Err(Error::Asymmetric { .. })));
    }

    #[test]
    fn dense_residuals() {
        let mut rng = batch_rng(11, 0);
        let g = real_gaussian(40, 40, &mut rng);
        let a = (&g + g.transpose()) * 0.5;
        let eig = a.clone().symmetric_eigen();
        let norm = a.norm();
        for k in 0..40 {
            let v = eig.eigenvectors.column(k);
            let r = &a * v - v * eig.eigenvalues[k];
            assert!(r.norm() <= 1e-10 * norm);
        }
    }

    #[test]
    fn wishart_dimension_rules() {
        assert_eq!(wishart_dims(&ep(30, 1.0, 0.0, 3.0)).unwrap(), (31, 37));
        assert_eq!(wishart_dims(&ep(3, 2.0, 1.0, 0.0)).unwrap(), (4, 3));
        assert_eq!(wishart_dims(&ep(3, 1.0, 0.5, 0.0)).unwrap(), (5, 4));
        assert!(matches!(
            wishart_dims(&ep(3, 3.0, 1.0, 0.0)),
            Err(Error::ModeMismatch(_))
        ));
        assert!(matches!(
            wishart_dims(&ep(3, 2.0, 0.5, 0.0)),
            Err(Error::ModeMismatch(_))
        ));
        assert!(matches!(
            wishart_dims(&ep(300, 2.0, 0.0, 0.0)),
            Err(Error::OutsideEnvelope(_))
        ));
    }

    #[test]
    fn eigenvalues_in_unit_interval() {
        for method in [Method::KillipNenciu, Method::DoubleWishart] {
            for beta in [1.0, 2.0] {
                let mut cfg = SamplerConfig::new(ep(6, beta, 1.0, 2.0), method, 3);
                cfg.want = Want::AllEigenvalues;
                let s = sample(&cfg, 200).unwrap();
                assert_eq!(s.values.len(), 200 * 6);
                for i in 0..s.count {
                    let d = s.draw(i);
                    assert!(d.windows(2).all(|w| w[0] <= w[1]));
                    assert!(d.iter().all(|&x| x > 0.0 && x < 1.0));
                }
            }
        }
    }

    #[test]
    fn deterministic_and_batch_invariant_values() {
        let cfg = SamplerConfig::new(ep(8, 2.5, 1.0, 0.5), Method::KillipNenciu, 99);
        let a = sample(&cfg, 300).unwrap();
        let b = sample(&cfg, 300).unwrap();
        assert_eq!(a, b);
        let mut other = cfg;
        other.seed = 100;
        assert_ne!(a.values, sample(&other, 300).unwrap().values);
    }

    #[test]
    fn single_eigenvalue_is_beta() {
        let (a1, a2) = (2.0, 1.7);
        let cfg = SamplerConfig::new(ep(1, 3.0, a1, a2), Method::KillipNenciu, 5);
        let s = sample(&cfg, 100_000).unwrap().smallest();
        let n = s.len() as f64;
        let mean = s.iter().sum::<f64>() / n;
        let (p, q) = (a1 + 1.0, a2 + 1.0);
        let mu = p / (p + q);
        let var = p * q / ((p + q).powi(2) * (p + q + 1.0));
        assert!((mean - mu).abs() < 3.0 * (var / n).sqrt());
    }
}
