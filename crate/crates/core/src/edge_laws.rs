//! Distributions of the smallest and largest eigenvalue.
//!
//! Raw scale: `ξ ∈ [0, 1]`, the eigenvalue itself. Hard-edge scale:
//! `x = N² ξ`. "Largest" laws report `P(φ_N ≤ 1 − ξ)` and are obtained from
//! the smallest-eigenvalue laws of the reflected ensemble, so they decrease
//! in their argument.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergeom::{classical_hyp, mhg_equal_args, mhg_equal_args_ext, HypergeomSpec};
use crate::numeric::{determinant, ExtFloat};
use crate::partitions::{gen_pochhammer_ext, pochhammer_ext, Partition};
use crate::selberg::{z_n_ext, EnsembleParams};
use crate::special::{bessel_i, gamma, log_gamma, monic_jacobi, MonicJacobiParams};

/// Largest `N` accepted by the exact finite-`N` paths.
pub const EXACT_MAX_N: usize = 64;
/// Largest `α₁` accepted by the exact finite-`N` paths.
pub const EXACT_MAX_ALPHA1: usize = 6;

/// Leading term, `1/N` correction and their (unclamped) sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoTerm {
    pub leading: f64,
    pub correction: f64,
    pub total: f64,
}

impl TwoTerm {
    fn new(leading: f64, correction: f64) -> Self {
        TwoTerm {
            leading,
            correction,
            total: leading + correction,
        }
    }

    /// `total` clamped into `[0, 1]` for presentation.
    pub fn clamped(&self) -> f64 {
        self.total.clamp(0.0, 1.0)
    }
}

fn exact_alpha1(p: &EnsembleParams) -> Result<usize> {
    p.validate()?;
    let a1 = p.alpha1_index("exact mode")?;
    if p.n > EXACT_MAX_N || a1 > EXACT_MAX_ALPHA1 {
        return Err(Error::OutsideEnvelope(format!(
            "exact paths support N <= {EXACT_MAX_N} and alpha1 <= {EXACT_MAX_ALPHA1} (got N = {}, alpha1 = {a1}); use the two-term asymptotic instead",
            p.n
        )));
    }
    Ok(a1)
}

/// `P(φ₁ > ξ) = (1−ξ)^{N(1+α₂+(N−1)β/2)} ₂F₁^(β/2)(−N, 1−N−2(α₂+1)/β; 2α₁/β; ξ·1^{α₁})`.
pub fn survival_exact(p: &EnsembleParams, xi: f64) -> Result<f64> {
    let a1 = exact_alpha1(p)?;
    if xi <= 0.0 {
        return Ok(1.0);
    }
    if xi >= 1.0 {
        return Ok(0.0);
    }
    let n = p.nf();
    let pre = ExtFloat::powf(1.0 - xi, n * (1.0 + p.alpha2 + (n - 1.0) * p.beta / 2.0));
    if a1 == 0 {
        return Ok(pre.to_f64());
    }
    let spec = HypergeomSpec::new(
        vec![-n, 1.0 - n - 2.0 * (p.alpha2 + 1.0) / p.beta],
        vec![2.0 * a1 as f64 / p.beta],
        p.beta / 2.0,
        a1,
    )?;
    let (f, diag) = mhg_equal_args_ext(&spec, xi)?;
    debug_assert_eq!(diag.negative_terms, 0, "survival series has a negative term");
    Ok(f.mul(pre).to_f64())
}

/// `P(φ₁ ≤ ξ)`.
pub fn cdf_exact(p: &EnsembleParams, xi: f64) -> Result<f64> {
    Ok(1.0 - survival_exact(p, xi)?)
}

/// `P(N² φ₁ ≤ x)`.
pub fn cdf_exact_hard_edge(p: &EnsembleParams, x: f64) -> Result<f64> {
    cdf_exact(p, x / (p.nf() * p.nf()))
}

/// Marginal density of the smallest eigenvalue,
/// `Z_N φ^{α₁}(1−φ)^{α₂+(N−1)(1+α₂+Nβ/2)} ₂F₁^(β/2)(1−N, 2−N−2(α₂+1)/β; 2α₁/β+2; φ·1^{α₁})`.
pub fn density_exact(p: &EnsembleParams, phi: f64) -> Result<f64> {
    density_parts(p, phi, 1.0 - phi)
}

/// Density at `φ = 1 − q`, with `q` given exactly. Useful near `φ = 1`,
/// where `1 − φ` cannot be recovered from a rounded `φ`.
pub fn density_exact_from_right(p: &EnsembleParams, q: f64) -> Result<f64> {
    density_parts(p, 1.0 - q, q)
}

fn density_parts(p: &EnsembleParams, phi: f64, q: f64) -> Result<f64> {
    let a1 = exact_alpha1(p)?;
    if !(0.0..=1.0).contains(&phi) || !(0.0..=1.0).contains(&q) {
        return Ok(0.0);
    }
    let n = p.nf();
    let exponent = p.alpha2 + (n - 1.0) * (1.0 + p.alpha2 + n * p.beta / 2.0);
    if q == 0.0 && exponent > 0.0 {
        return Ok(0.0);
    }
    let mut v = z_n_ext(p)?.mul(ExtFloat::powf(q, exponent));
    if a1 > 0 {
        v = v.mul(ExtFloat::powi(phi, a1 as u64));
        let spec = HypergeomSpec::new(
            vec![1.0 - n, 2.0 - n - 2.0 * (p.alpha2 + 1.0) / p.beta],
            vec![2.0 * a1 as f64 / p.beta + 2.0],
            p.beta / 2.0,
            a1,
        )?;
        let (f, _) = mhg_equal_args_ext(&spec, phi)?;
        v = v.mul(f);
    }
    Ok(v.to_f64())
}

fn f01(alpha1: usize, beta: f64, shift: f64, x: f64) -> Result<f64> {
    if alpha1 == 0 {
        return Ok(1.0);
    }
    let spec = HypergeomSpec::new(vec![], vec![2.0 * alpha1 as f64 / beta + shift], beta / 2.0, alpha1)?;
    Ok(mhg_equal_args(&spec, x)?.0)
}

fn check_x(x: f64) -> Result<()> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::invalid(format!("hard-edge argument must be >= 0, got {x}")));
    }
    Ok(())
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::invalid(format!("beta must be positive, got {beta}")));
    }
    Ok(())
}

/// `F_∞(x) = 1 − e^{−βx/2} ₀F₁^(β/2)(; 2α₁/β; x·1^{α₁})`.
pub fn cdf_limit(alpha1: usize, beta: f64, x: f64) -> Result<f64> {
    check_beta(beta)?;
    check_x(x)?;
    Ok(1.0 - (-beta * x / 2.0).exp() * f01(alpha1, beta, 0.0, x)?)
}

/// Limit law plus its `1/N` correction at hard-edge scale.
pub fn cdf_two_term(p: &EnsembleParams, x: f64) -> Result<TwoTerm> {
    p.validate()?;
    let a1 = p.alpha1_index("the two-term asymptotic")?;
    check_x(x)?;
    let (b, a1f) = (p.beta, a1 as f64);
    let e = (-b * x / 2.0).exp();
    let leading = 1.0 - e * f01(a1, b, 0.0, x)?;
    let log_k = (2.0 * a1f) * (b / 2.0).ln() + log_gamma(1.0 + b / 2.0)?
        - log_gamma(1.0 + a1f)?
        - log_gamma(1.0 + a1f + b / 2.0)?;
    let correction =
        x.powf(1.0 + a1f) / p.nf() * ((a1f + p.alpha2 + 1.0) - b / 2.0) * log_k.exp() * e * f01(a1, b, 2.0, x)?;
    Ok(TwoTerm::new(leading, correction))
}

/// `F_∞(x (1 + ((2/β)(α₁+α₂+1) − 1)/N))`, the correction absorbed into a
/// rescaling of the argument.
pub fn recentred_form(p: &EnsembleParams, x: f64) -> Result<f64> {
    p.validate()?;
    let a1 = p.alpha1_index("the recentred form")?;
    let factor = 1.0 + ((2.0 / p.beta) * (p.alpha1 + p.alpha2 + 1.0) - 1.0) / p.nf();
    cdf_limit(a1, p.beta, x * factor)
}

/// `P(φ_N ≤ 1 − x/N²)` to two terms.
pub fn largest_cdf_two_term(p: &EnsembleParams, x: f64) -> Result<TwoTerm> {
    p.validate()?;
    p.alpha2_index("the largest-eigenvalue two-term asymptotic")?;
    let s = cdf_two_term(&p.swapped(), x)?;
    Ok(TwoTerm::new(1.0 - s.leading, -s.correction))
}

/// `P(φ_N ≤ 1 − ξ)`, exact.
pub fn largest_exact(p: &EnsembleParams, xi: f64) -> Result<f64> {
    p.validate()?;
    p.alpha2_index("exact mode (largest edge)")?;
    survival_exact(&p.swapped(), xi)
}

/// Exact CDF at `β = 2` as an `α₁ × α₁` determinant of monic Jacobi
/// polynomials at `−ξ/(1−ξ)`.
pub fn cdf_exact_jue_determinant(p: &EnsembleParams, xi: f64) -> Result<f64> {
    if p.beta != 2.0 {
        return Err(Error::mismatch(format!(
            "the determinant formula needs beta = 2, got {}",
            p.beta
        )));
    }
    let a1 = exact_alpha1(p)?;
    if xi <= 0.0 {
        return Ok(0.0);
    }
    if xi >= 1.0 {
        return Ok(1.0);
    }
    let n = p.n;
    let nf = p.nf();
    let y = -xi / (1.0 - xi);
    // rows scaled to unit max so the determinant stays in range
    let mut m = vec![0.0; a1 * a1];
    let mut scale = ExtFloat::ONE;
    for i in 1..=a1 {
        let mut row = vec![ExtFloat::ZERO; a1];
        for j in 1..=a1 {
            let deg = n as i64 + i as i64 - j as i64;
            if deg < 0 {
                continue;
            }
            let deg = deg as u32;
            let pv = monic_jacobi(
                MonicJacobiParams::new(deg, (j - 1) as f64, p.alpha2 + (j - 1) as f64),
                y,
            )?;
            row[j - 1] = ExtFloat::new(pv).div(pochhammer_ext(1.0, deg));
        }
        let big = row.iter().copied().max_by(|a, b| a.cmp_abs(b)).unwrap_or(ExtFloat::ONE);
        let big = if big.is_zero() { ExtFloat::ONE } else { big.abs() };
        scale = scale.mul(big);
        for j in 0..a1 {
            m[(i - 1) * a1 + j] = row[j].div(big).to_f64();
        }
    }
    let det = ExtFloat::new(determinant(m, a1)).mul(scale);
    let mut pre = ExtFloat::powf(1.0 - xi, nf * (a1 as f64 + p.alpha2 + nf));
    for i in 1..=a1 {
        pre = pre.mul(pochhammer_ext(nf + p.alpha2 + i as f64, n as u32));
    }
    if (n * a1) % 2 == 1 {
        pre = pre.neg();
    }
    Ok(1.0 - pre.mul(det).to_f64())
}

fn bessel_toeplitz_det(alpha1: usize, shift: i64, x: f64) -> Result<f64> {
    if alpha1 == 0 {
        return Ok(1.0);
    }
    let z = 2.0 * x.sqrt();
    let mut m = vec![0.0; alpha1 * alpha1];
    for i in 0..alpha1 {
        for j in 0..alpha1 {
            m[i * alpha1 + j] = bessel_i((shift + j as i64 - i as i64) as f64, z)?;
        }
    }
    Ok(determinant(m, alpha1))
}

/// Two-term law at `β = 2` in Bessel-determinant form:
/// `1 − e^{−x}det(I_{j−i}(2√x)) + (x/N)(α₁+α₂) e^{−x} det(I_{2+j−i}(2√x))`.
pub fn cdf_two_term_jue_bessel(alpha1: usize, alpha2: f64, n: usize, x: f64) -> Result<TwoTerm> {
    check_x(x)?;
    EnsembleParams::new(n, 2.0, alpha1 as f64, alpha2)?;
    let e = (-x).exp();
    let leading = 1.0 - e * bessel_toeplitz_det(alpha1, 0, x)?;
    let correction = x / n as f64 * (alpha1 as f64 + alpha2) * e * bessel_toeplitz_det(alpha1, 2, x)?;
    Ok(TwoTerm::new(leading, correction))
}

/// Two-term law at `α₁ = 0`: `1 − e^{−βx/2} + (1+α₂−β/2)(x/N)e^{−βx/2}`.
pub fn cdf_alpha1_zero(beta: f64, alpha2: f64, n: usize, x: f64) -> Result<TwoTerm> {
    EnsembleParams::new(n, beta, 0.0, alpha2)?;
    check_x(x)?;
    let e = (-beta * x / 2.0).exp();
    Ok(TwoTerm::new(1.0 - e, (1.0 + alpha2 - beta / 2.0) * x / n as f64 * e))
}

/// Exact law at `α₁ = 0`: `1 − (1 − x/N²)^{N(1+α₂+(N−1)β/2)}`.
pub fn cdf_alpha1_zero_exact(beta: f64, alpha2: f64, n: usize, x: f64) -> Result<f64> {
    EnsembleParams::new(n, beta, 0.0, alpha2)?;
    check_x(x)?;
    let nf = n as f64;
    let xi = x / (nf * nf);
    if xi >= 1.0 {
        return Ok(1.0);
    }
    Ok(1.0 - ExtFloat::powf(1.0 - xi, nf * (1.0 + alpha2 + (nf - 1.0) * beta / 2.0)).to_f64())
}

/// Two-term law at `α₁ = 1` through single Bessel functions.
pub fn cdf_alpha1_one_bessel(beta: f64, alpha2: f64, n: usize, x: f64) -> Result<TwoTerm> {
    EnsembleParams::new(n, beta, 1.0, alpha2)?;
    check_x(x)?;
    if x == 0.0 {
        return Ok(TwoTerm::new(0.0, 0.0));
    }
    let e = (-beta * x / 2.0).exp();
    let g = gamma(2.0 / beta)?;
    let z = 2.0 * x.sqrt();
    let leading = 1.0 - e * g * x.powf(0.5 - 1.0 / beta) * bessel_i(2.0 / beta - 1.0, z)?;
    let correction =
        x.powf(1.5 - 1.0 / beta) / n as f64 * e * (2.0 + alpha2 - beta / 2.0) * g * bessel_i(2.0 / beta + 1.0, z)?;
    Ok(TwoTerm::new(leading, correction))
}

/// Exact survival at `α₁ = 1` from a single monic Jacobi polynomial:
/// `(−1)^N (1−ξ)^{N(2+α₂+(N−1)β/2)} (N+2(α₂+2)/β−1)_N/(2/β)_N · p_N^{2/β−1, 2(α₂+1)/β−1}(−ξ/(1−ξ))`.
pub fn survival_alpha1_one_jacobi(beta: f64, alpha2: f64, n: usize, xi: f64) -> Result<f64> {
    EnsembleParams::new(n, beta, 1.0, alpha2)?;
    if xi <= 0.0 {
        return Ok(1.0);
    }
    if xi >= 1.0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let y = -xi / (1.0 - xi);
    let pv = monic_jacobi(
        MonicJacobiParams::new(n as u32, 2.0 / beta - 1.0, 2.0 * (alpha2 + 1.0) / beta - 1.0),
        y,
    )?;
    let mut v = ExtFloat::powf(1.0 - xi, nf * (2.0 + alpha2 + (nf - 1.0) * beta / 2.0))
        .mul(pochhammer_ext(nf + 2.0 * (alpha2 + 2.0) / beta - 1.0, n as u32))
        .div(pochhammer_ext(2.0 / beta, n as u32))
        .mul_f64(pv);
    if n % 2 == 1 {
        v = v.neg();
    }
    Ok(v.to_f64())
}

/// `1 −` [`survival_alpha1_one_jacobi`].
pub fn cdf_alpha1_one_jacobi(beta: f64, alpha2: f64, n: usize, xi: f64) -> Result<f64> {
    Ok(1.0 - survival_alpha1_one_jacobi(beta, alpha2, n, xi)?)
}

/// Exact survival at `α₁ = 1` through the classical one-variable `₂F₁`.
pub fn survival_alpha1_one_classical(beta: f64, alpha2: f64, n: usize, xi: f64) -> Result<f64> {
    EnsembleParams::new(n, beta, 1.0, alpha2)?;
    if xi <= 0.0 {
        return Ok(1.0);
    }
    if xi >= 1.0 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let f = classical_hyp(&[-nf, 1.0 - nf - 2.0 * (alpha2 + 1.0) / beta], &[2.0 / beta], xi)?;
    Ok(ExtFloat::powf(1.0 - xi, nf * (1.0 + alpha2 + (nf - 1.0) * beta / 2.0))
        .mul_f64(f)
        .to_f64())
}

/// Survival probability through the multivariable Jacobi polynomial of a
/// rectangular partition, normalised by its value at the origin. This sums
/// the un-transformed series in `−ξ/(1−ξ)` and is an independent route to
/// [`survival_exact`].
pub fn jacobi_poly_representation(p: &EnsembleParams, xi: f64) -> Result<f64> {
    let a1 = exact_alpha1(p)?;
    if xi <= 0.0 {
        return Ok(1.0);
    }
    if xi >= 1.0 {
        return Ok(0.0);
    }
    let n = p.n;
    let nf = p.nf();
    let beta = p.beta;
    let prefactor = ExtFloat::powf(1.0 - xi, nf * (1.0 + p.alpha1 + p.alpha2 + (nf - 1.0) * beta / 2.0));
    if a1 == 0 {
        return Ok(prefactor.to_f64());
    }
    let s = beta / 2.0;
    let k = a1 as f64;
    let a = -1.0 + 2.0 / beta;
    let b = -1.0 + 2.0 * (p.alpha2 + 1.0) / beta;
    let big_a = -nf;
    let big_b = nf + 1.0 + a + b + (k - 1.0) / s;
    let big_c = a + 1.0 + (k - 1.0) / s;
    let spec = HypergeomSpec::new(vec![big_a, big_b], vec![big_c], s, a1)?;
    let y = -xi / (1.0 - xi);
    let (f, _) = mhg_equal_args_ext(&spec, y)?;
    let rect = Partition::rectangle(n as u32, a1);
    let poly = f
        .mul(gen_pochhammer_ext(big_c, &rect, s))
        .mul(pochhammer_ext(1.0, (n * a1) as u32))
        .div(gen_pochhammer_ext(big_a, &rect, s))
        .div(gen_pochhammer_ext(big_b, &rect, s));
    let mut at_zero = pochhammer_ext(1.0, a1 as u32)
        .mul(pochhammer_ext(1.0, (n * a1) as u32))
        .mul(pochhammer_ext(1.0 + 2.0 * k / beta, (n - 1) as u32))
        .div(pochhammer_ext(1.0, (n - 1) as u32))
        .div(pochhammer_ext(nf * beta / 2.0, a1 as u32));
    for i in 1..=a1 {
        at_zero = at_zero.div(pochhammer_ext(
            nf - 1.0 + 2.0 * (p.alpha2 + 1.0 + i as f64) / beta,
            n as u32,
        ));
    }
    if (n * a1) % 2 == 1 {
        at_zero = at_zero.neg();
    }
    Ok(prefactor.mul(poly).div(at_zero).to_f64())
}

/// Which extreme eigenvalue a curve describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Edge {
    Smallest,
    Largest,
}

/// Abscissa convention of a curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scale {
    /// `ξ ∈ [0, 1]`.
    Raw,
    /// `x = N² ξ`.
    HardEdge,
}

/// Which prediction a curve tabulates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveMode {
    /// Two-term columns plus the exact finite-`N` value.
    Exact,
    TwoTerm,
    Limit,
    /// `β = 2` determinant formulas (Jacobi determinant and Bessel two-term).
    JueDet,
    Recentred,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub abscissa: f64,
    pub leading: f64,
    pub correction: f64,
    /// `leading + correction`, unclamped.
    pub total: f64,
    pub exact: Option<f64>,
}

impl CurvePoint {
    pub fn clamped_total(&self) -> f64 {
        self.total.clamp(0.0, 1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeCurve {
    pub params: EnsembleParams,
    pub edge: Edge,
    pub scale: Scale,
    pub mode: CurveMode,
    pub points: Vec<CurvePoint>,
}

/// Default hard-edge grid: 201 points on `[0, 10]`.
pub fn default_grid() -> Vec<f64> {
    linear_grid(0.0, 10.0, 201)
}

pub fn linear_grid(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

fn two_term_for(p: &EnsembleParams, edge: Edge, x: f64) -> Result<TwoTerm> {
    match edge {
        Edge::Smallest => cdf_two_term(p, x),
        Edge::Largest => largest_cdf_two_term(p, x),
    }
}

fn point(p: &EnsembleParams, edge: Edge, scale: Scale, mode: CurveMode, t: f64) -> Result<CurvePoint> {
    let n2 = p.nf() * p.nf();
    let (x, xi) = match scale {
        Scale::HardEdge => (t, t / n2),
        Scale::Raw => (t * n2, t),
    };
    let mirror = |v: f64| match edge {
        Edge::Smallest => v,
        Edge::Largest => 1.0 - v,
    };
    let oriented = match edge {
        Edge::Smallest => *p,
        Edge::Largest => p.swapped(),
    };
    let mk = |tt: TwoTerm, exact: Option<f64>| CurvePoint {
        abscissa: t,
        leading: tt.leading,
        correction: tt.correction,
        total: tt.total,
        exact,
    };
    Ok(match mode {
        CurveMode::TwoTerm => mk(two_term_for(p, edge, x)?, None),
        CurveMode::Exact => {
            let exact = match edge {
                Edge::Smallest => cdf_exact(p, xi)?,
                Edge::Largest => largest_exact(p, xi)?,
            };
            mk(two_term_for(p, edge, x)?, Some(exact))
        }
        CurveMode::Limit => {
            let a1 = oriented.alpha1_index("limit mode")?;
            let l = mirror(cdf_limit(a1, p.beta, x)?);
            mk(TwoTerm::new(l, 0.0), None)
        }
        CurveMode::Recentred => {
            let a1 = oriented.alpha1_index("recentred mode")?;
            let l = mirror(cdf_limit(a1, p.beta, x)?);
            let r = mirror(recentred_form(&oriented, x)?);
            mk(TwoTerm::new(l, r - l), None)
        }
        CurveMode::JueDet => {
            if p.beta != 2.0 {
                return Err(Error::mismatch(format!("jue-det mode needs beta = 2, got {}", p.beta)));
            }
            let a1 = oriented.alpha1_index("jue-det mode")?;
            let tt = cdf_two_term_jue_bessel(a1, oriented.alpha2, p.n, x)?;
            let tt = match edge {
                Edge::Smallest => tt,
                Edge::Largest => TwoTerm::new(1.0 - tt.leading, -tt.correction),
            };
            let exact = mirror(cdf_exact_jue_determinant(&oriented, xi)?);
            mk(tt, Some(exact))
        }
    })
}

/// Tabulates a curve; grid points are evaluated in parallel and returned in
/// grid order.
pub fn tabulate(p: &EnsembleParams, edge: Edge, scale: Scale, mode: CurveMode, grid: &[f64]) -> Result<EdgeCurve> {
    p.validate()?;
    if let Some(bad) = grid.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
        return Err(Error::invalid(format!(
            "grid values must be finite and >= 0, got {bad}"
        )));
    }
    if scale == Scale::Raw {
        if let Some(bad) = grid.iter().find(|t| **t > 1.0) {
            return Err(Error::invalid(format!(
                "raw-scale grid values must lie in [0, 1], got {bad}"
            )));
        }
    }
    // validate once up front so mode errors are reported even for empty grids
    point(p, edge, scale, mode, 0.0)?;
    let points = grid
        .par_iter()
        .map(|&t| point(p, edge, scale, mode, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(EdgeCurve {
        params: *p,
        edge,
        scale,
        mode,
        points,
    })
}
