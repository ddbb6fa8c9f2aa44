//! Hypergeometric functions of matrix argument `ₚF_q^(σ)`.
//!
//! At equal arguments `x·1ⁿ` the series collapses to a power series
//! `Σ_k c_k x^k` whose layer coefficients `c_k` sum the partition terms of
//! weight `k`. Those layers are built once per parameter set by a depth-first
//! walk over partitions (each child differs from its parent by one box, so
//! every term is a cheap ratio update) and cached, which makes tabulating a
//! curve over many `x` essentially free.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jack::{monomial_eval, weight_table, MAX_MONOMIAL_WEIGHT};
use crate::numeric::{determinant, near_integer, ExtFloat, ScaledSum};
use crate::partitions::{gen_pochhammer, Partition};
use crate::special::{bessel_i, gamma};

/// How an infinite series is cut off.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Truncation {
    /// Sum every nonzero term; needs an upper parameter `−M`, `M ∈ ℕ`.
    Terminating,
    /// Stop once `consecutive` successive weight layers are each below
    /// `eps · |partial sum|`; fail past `max_weight`.
    RelativeTail {
        eps: f64,
        max_weight: u32,
        consecutive: u32,
    },
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::RelativeTail {
            eps: 1e-14,
            max_weight: 200,
            consecutive: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypergeomSpec {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
    pub sigma: f64,
    pub n: usize,
    pub truncation: Truncation,
}

impl HypergeomSpec {
    /// Builds and validates a spec; the series is marked terminating when an
    /// upper parameter is a nonpositive integer.
    pub fn new(upper: Vec<f64>, lower: Vec<f64>, sigma: f64, n: usize) -> Result<Self> {
        let terminating = upper.iter().any(|&a| nonpositive_integer(a).is_some());
        let spec = HypergeomSpec {
            upper,
            lower,
            sigma,
            n,
            truncation: if terminating {
                Truncation::Terminating
            } else {
                Truncation::default()
            },
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_truncation(mut self, truncation: Truncation) -> Result<Self> {
        self.truncation = truncation;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(Error::invalid(format!("sigma must be positive, got {}", self.sigma)));
        }
        if self.upper.iter().chain(&self.lower).any(|v| !v.is_finite()) {
            return Err(Error::invalid("hypergeometric parameters must be finite"));
        }
        for &b in &self.lower {
            for i in 0..self.n {
                let shifted = b - i as f64 / self.sigma;
                if nonpositive_integer(shifted).is_some() {
                    return Err(Error::LowerParameterPole(format!(
                        "lower parameter {b} shifted by -{i}/sigma is the nonpositive integer {shifted}"
                    )));
                }
            }
        }
        if self.truncation == Truncation::Terminating && self.box_size().is_none() {
            return Err(Error::invalid(
                "terminating truncation needs an upper parameter equal to a nonpositive integer",
            ));
        }
        Ok(())
    }

    /// Largest admissible first part for a terminating series.
    pub fn box_size(&self) -> Option<u32> {
        self.upper.iter().filter_map(|&a| nonpositive_integer(a)).min()
    }

    fn cache_key(&self, bound: u32) -> SeriesKey {
        SeriesKey {
            upper: self.upper.iter().map(|v| v.to_bits()).collect(),
            lower: self.lower.iter().map(|v| v.to_bits()).collect(),
            sigma: self.sigma.to_bits(),
            n: self.n,
            bound,
            terminating: self.truncation == Truncation::Terminating,
        }
    }
}

fn nonpositive_integer(a: f64) -> Option<u32> {
    match near_integer(a, 1e-12) {
        Some(k) if k <= 0 => Some((-k) as u32),
        _ => None,
    }
}

/// Summary of how a series value was obtained.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SeriesDiagnostics {
    pub terminating: bool,
    /// Nonzero partition terms summed.
    pub terms: usize,
    /// Terms with a negative sign (before the `x^k` factor).
    pub negative_terms: usize,
    /// Highest weight included.
    pub max_weight: u32,
    /// Magnitude of the last included layer relative to the sum.
    pub last_layer_relative: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue {
    pub value: ExtFloat,
}

impl SeriesValue {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// Layer coefficients `c_k` of an equal-argument series.
#[derive(Clone, Debug)]
pub struct LayerSeries {
    pub coeffs: Vec<ExtFloat>,
    pub terms: usize,
    pub negative_terms: usize,
    pub terminating: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct SeriesKey {
    upper: Vec<u64>,
    lower: Vec<u64>,
    sigma: u64,
    n: usize,
    bound: u32,
    terminating: bool,
}

fn layer_cache() -> &'static RwLock<HashMap<SeriesKey, Arc<LayerSeries>>> {
    static CACHE: OnceLock<RwLock<HashMap<SeriesKey, Arc<LayerSeries>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Cached layer coefficients: all partitions with at most `n` parts and
/// either first part `<= box` (terminating) or weight `<= bound`.
pub fn layers(spec: &HypergeomSpec, bound: u32) -> Arc<LayerSeries> {
    let key = spec.cache_key(bound);
    if let Some(v) = layer_cache().read().expect("series cache poisoned").get(&key) {
        return Arc::clone(v);
    }
    let computed = Arc::new(compute_layers(spec, bound));
    let mut w = layer_cache().write().expect("series cache poisoned");
    Arc::clone(w.entry(key).or_insert(computed))
}

struct Walker<'a> {
    up: &'a [f64],
    lo: &'a [f64],
    sigma: f64,
    n: usize,
    max_part: u32,
    max_weight: u32,
    layers: Vec<ScaledSum>,
}

impl Walker<'_> {
    /// Term ratio for adding a box at the end of row `r` (0-based), where the
    /// row is the last nonzero row or a new one.
    fn ratio(&self, parts: &[u32], r: usize) -> f64 {
        let s = self.sigma;
        let m = parts.get(r).copied().unwrap_or(0) as f64;
        let shift = m - r as f64 / s;
        let mut num = 1.0;
        for &a in self.up {
            num *= a + shift;
        }
        if num == 0.0 {
            return 0.0;
        }
        let mut den = 1.0;
        for &b in self.lo {
            den *= b + shift;
        }
        // C_λ(1ⁿ)/|λ|! update: new box, the row to its left, and the column above
        num *= self.n as f64 - r as f64 + s * m;
        den *= (m + 1.0) * (1.0 + s * m);
        for (t, &pt) in parts.iter().enumerate().take(r) {
            let leg = (r - t - 1) as f64;
            let arm = pt as f64 - m - 1.0;
            num *= (leg + s * (arm + 1.0)) * (leg + 1.0 + s * arm);
            den *= (leg + 1.0 + s * (arm + 1.0)) * (leg + 2.0 + s * arm);
        }
        num / den
    }

    fn visit(&mut self, parts: &mut Vec<u32>, term: ExtFloat, weight: u32, grow_first: bool) {
        self.layers[weight as usize].add(term);
        if weight >= self.max_weight {
            return;
        }
        let l = parts.len();
        if l >= 1 {
            let last = parts[l - 1];
            let may_grow = if l == 1 { grow_first } else { last < parts[l - 2] };
            if may_grow && last < self.max_part {
                let q = self.ratio(parts, l - 1);
                if q != 0.0 {
                    parts[l - 1] += 1;
                    self.visit(parts, term.mul_f64(q), weight + 1, grow_first);
                    parts[l - 1] -= 1;
                }
            }
        }
        if l < self.n && self.max_part >= 1 && (l >= 1 || grow_first) {
            let q = self.ratio(parts, l);
            if q != 0.0 {
                parts.push(1);
                self.visit(parts, term.mul_f64(q), weight + 1, grow_first);
                parts.pop();
            }
        }
    }
}

fn compute_layers(spec: &HypergeomSpec, bound: u32) -> LayerSeries {
    let terminating = spec.truncation == Truncation::Terminating;
    let (max_part, max_weight) = if terminating {
        let m = spec.box_size().expect("validated terminating spec");
        (m, m * spec.n as u32)
    } else {
        (bound, bound)
    };
    let new_walker = || Walker {
        up: &spec.upper,
        lo: &spec.lower,
        sigma: spec.sigma,
        n: spec.n,
        max_part,
        max_weight,
        layers: vec![ScaledSum::new(); max_weight as usize + 1],
    };
    // First-row heads (m), each rooting the subtree of partitions with λ₁ = m.
    let mut heads = Vec::new();
    if spec.n > 0 {
        let probe = new_walker();
        let mut term = ExtFloat::ONE;
        let mut parts = vec![0u32];
        for m in 1..=max_part.min(max_weight) {
            let q = probe.ratio(&parts, 0);
            if q == 0.0 {
                break;
            }
            term = term.mul_f64(q);
            parts[0] = m;
            heads.push((m, term));
        }
    }
    let partials: Vec<(Vec<ExtFloat>, usize, usize)> = heads
        .par_iter()
        .map(|&(m, term)| {
            let mut w = new_walker();
            let mut parts = vec![m];
            w.visit(&mut parts, term, m, false);
            let terms = w.layers.iter().map(|s| s.terms()).sum();
            let neg = w.layers.iter().map(|s| s.negative_terms()).sum();
            (w.layers.iter().map(|s| s.value()).collect(), terms, neg)
        })
        .collect();
    let mut acc = vec![ScaledSum::new(); max_weight as usize + 1];
    acc[0].add(ExtFloat::ONE);
    let mut terms = 1;
    let mut negative_terms = 0;
    for (layer_vals, t, neg) in partials {
        terms += t;
        negative_terms += neg;
        for (k, v) in layer_vals.into_iter().enumerate() {
            acc[k].add(v);
        }
    }
    LayerSeries {
        coeffs: acc.iter().map(|s| s.value()).collect(),
        terms,
        negative_terms,
        terminating,
    }
}

/// `Σ_k k^deriv c_k x^k` over the available layers, returning the sum and
/// per-layer magnitudes.
fn sum_layers(coeffs: &[ExtFloat], x: f64, deriv: u32) -> (ExtFloat, Vec<ExtFloat>) {
    let mut s = ScaledSum::new();
    let mut mags = Vec::with_capacity(coeffs.len());
    let xe = ExtFloat::new(x);
    let mut xk = ExtFloat::ONE;
    for (k, c) in coeffs.iter().enumerate() {
        let mut t = c.mul(xk);
        if deriv > 0 {
            t = t.mul_f64((k as f64).powi(deriv as i32));
        }
        s.add(t);
        mags.push(t.abs());
        xk = xk.mul(xe);
    }
    (s.value(), mags)
}

fn evaluate(spec: &HypergeomSpec, x: f64, deriv: u32) -> Result<(SeriesValue, SeriesDiagnostics)> {
    spec.validate()?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("series argument must be finite, got {x}")));
    }
    if spec.n == 0 || (x == 0.0 && deriv == 0) {
        return Ok((
            SeriesValue { value: ExtFloat::ONE },
            SeriesDiagnostics {
                terminating: spec.truncation == Truncation::Terminating,
                terms: 1,
                ..Default::default()
            },
        ));
    }
    match spec.truncation {
        Truncation::Terminating => {
            let l = layers(spec, 0);
            let (v, mags) = sum_layers(&l.coeffs, x, deriv);
            let last = mags
                .iter()
                .rev()
                .find(|m| !m.is_zero())
                .copied()
                .unwrap_or(ExtFloat::ZERO);
            Ok((
                SeriesValue { value: v },
                SeriesDiagnostics {
                    terminating: true,
                    terms: l.terms,
                    negative_terms: l.negative_terms,
                    max_weight: (l.coeffs.len() - 1) as u32,
                    last_layer_relative: relative(last, v),
                },
            ))
        }
        Truncation::RelativeTail {
            eps,
            max_weight,
            consecutive,
        } => {
            let p = spec.upper.len();
            let q = spec.lower.len();
            if p > q + 1 {
                return Err(Error::Divergence(format!(
                    "{p}F{q} with no terminating parameter diverges"
                )));
            }
            if p == q + 1 && x.abs() >= 1.0 {
                return Err(Error::Divergence(format!("{p}F{q} needs |x| < 1, got {x}")));
            }
            let mut bound = 32.min(max_weight).max(1);
            loop {
                let l = layers(spec, bound);
                let (v, mags) = sum_layers(&l.coeffs, x, deriv);
                // partial sums from the front; find the first run of small layers
                let mut s = ScaledSum::new();
                let mut run = 0u32;
                let mut stop = None;
                for (k, m) in mags.iter().enumerate() {
                    s.add(if deriv == 0 {
                        l.coeffs[k].mul(ExtFloat::powi(x, k as u64))
                    } else {
                        l.coeffs[k]
                            .mul(ExtFloat::powi(x, k as u64))
                            .mul_f64((k as f64).powi(deriv as i32))
                    });
                    let partial = s.value();
                    if k > 0 && m.cmp_abs(&partial.abs().mul_f64(eps)) != std::cmp::Ordering::Greater {
                        run += 1;
                        if run >= consecutive {
                            stop = Some(k);
                            break;
                        }
                    } else {
                        run = 0;
                    }
                }
                if let Some(k) = stop {
                    let value = s.value();
                    return Ok((
                        SeriesValue { value },
                        SeriesDiagnostics {
                            terminating: false,
                            terms: l.terms,
                            negative_terms: l.negative_terms,
                            max_weight: k as u32,
                            last_layer_relative: relative(mags[k], value),
                        },
                    ));
                }
                if bound >= max_weight {
                    let last = mags.last().copied().unwrap_or(ExtFloat::ZERO);
                    return Err(Error::TruncationFailure {
                        max_weight: max_weight as usize,
                        last_layer: last.to_f64(),
                        partial_sum: v.to_f64(),
                    });
                }
                bound = (bound * 2).min(max_weight);
            }
        }
    }
}

fn relative(layer: ExtFloat, total: ExtFloat) -> f64 {
    if total.is_zero() {
        if layer.is_zero() {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        layer.div(total).abs().to_f64()
    }
}

/// `ₚF_q^(σ)(a; b; x·1ⁿ)`.
pub fn mhg_equal_args(spec: &HypergeomSpec, x: f64) -> Result<(f64, SeriesDiagnostics)> {
    let (v, d) = evaluate(spec, x, 0)?;
    Ok((v.to_f64(), d))
}

/// Extended-range variant of [`mhg_equal_args`].
pub fn mhg_equal_args_ext(spec: &HypergeomSpec, x: f64) -> Result<(ExtFloat, SeriesDiagnostics)> {
    let (v, d) = evaluate(spec, x, 0)?;
    Ok((v.value, d))
}

/// `x d/dx ₚF_q^(σ)(a; b; x·1ⁿ)`, the Euler operator applied term by term.
pub fn mhg_equal_args_euler(spec: &HypergeomSpec, x: f64) -> Result<f64> {
    Ok(evaluate(spec, x, 1)?.0.to_f64())
}

/// `ₚF_q^(σ)(a; b; x)` at a general point through the monomial expansion
/// of each Jack polynomial (small `n` only).
pub fn mhg_general_args(spec: &HypergeomSpec, x: &[f64]) -> Result<(f64, SeriesDiagnostics)> {
    spec.validate()?;
    if x.len() != spec.n {
        return Err(Error::invalid(format!(
            "argument has {} entries but the spec has n = {}",
            x.len(),
            spec.n
        )));
    }
    if x.iter().all(|&v| v == 0.0) {
        return Ok((
            1.0,
            SeriesDiagnostics {
                terms: 1,
                ..Default::default()
            },
        ));
    }
    let n = spec.n;
    let (max_part, max_weight, tail) = match spec.truncation {
        Truncation::Terminating => {
            let m = spec.box_size().expect("validated");
            (m, (m as usize * n) as u32, None)
        }
        Truncation::RelativeTail {
            eps,
            max_weight,
            consecutive,
        } => (u32::MAX, max_weight, Some((eps, consecutive))),
    };
    if tail.is_some() {
        let p = spec.upper.len();
        let q = spec.lower.len();
        if p > q + 1 || (p == q + 1 && x.iter().any(|v| v.abs() >= 1.0)) {
            return Err(Error::Divergence(format!("{p}F{q} outside its convergence region")));
        }
    }
    let mut total = 0.0f64;
    let mut comp = 0.0f64;
    let mut diag = SeriesDiagnostics {
        terminating: tail.is_none(),
        ..Default::default()
    };
    let mut run = 0u32;
    let mut factorial = 1.0f64;
    for k in 0..=max_weight {
        if k > 0 {
            factorial *= k as f64;
        }
        if k > MAX_MONOMIAL_WEIGHT {
            return Err(Error::TruncationFailure {
                max_weight: MAX_MONOMIAL_WEIGHT as usize,
                last_layer: f64::NAN,
                partial_sum: total + comp,
            });
        }
        let table = weight_table(k, n, spec.sigma)?;
        let mons: Vec<f64> = table.partitions.iter().map(|mu| monomial_eval(mu, x)).collect();
        let mut layer = 0.0;
        for (l, lam) in table.partitions.iter().enumerate() {
            if lam.part(0) > max_part {
                continue;
            }
            let coef = poch_ratio(spec, lam);
            if coef == 0.0 {
                continue;
            }
            diag.terms += 1;
            if coef < 0.0 {
                diag.negative_terms += 1;
            }
            let c: f64 = table.coeffs[l].iter().zip(&mons).map(|(b, m)| b * m).sum();
            layer += coef * c / factorial;
        }
        let t = total + layer;
        if total.abs() >= layer.abs() {
            comp += (total - t) + layer;
        } else {
            comp += (layer - t) + total;
        }
        total = t;
        diag.max_weight = k;
        diag.last_layer_relative = (layer / (total + comp)).abs();
        if let Some((eps, consecutive)) = tail {
            if k > 0 && layer.abs() <= eps * (total + comp).abs() {
                run += 1;
                if run >= consecutive {
                    return Ok((total + comp, diag));
                }
            } else {
                run = 0;
            }
            if k == max_weight {
                return Err(Error::TruncationFailure {
                    max_weight: max_weight as usize,
                    last_layer: layer,
                    partial_sum: total + comp,
                });
            }
        }
    }
    Ok((total + comp, diag))
}

fn poch_ratio(spec: &HypergeomSpec, lam: &Partition) -> f64 {
    let mut r = 1.0;
    for &a in &spec.upper {
        r *= gen_pochhammer(a, lam, spec.sigma);
    }
    for &b in &spec.lower {
        r /= gen_pochhammer(b, lam, spec.sigma);
    }
    r
}

/// Right side of the Pfaff-type transformation,
/// `(1−x)^{−a n} ₂F₁^(σ)(a, c−b; c; −x/(1−x)·1ⁿ)`.
pub fn pfaff_transform(a: f64, b: f64, c: f64, sigma: f64, n: usize, x: f64) -> Result<f64> {
    if x == 1.0 {
        return Err(Error::Domain("Pfaff transformation is singular at x = 1".into()));
    }
    let spec = HypergeomSpec::new(vec![a, c - b], vec![c], sigma, n)?;
    let y = -x / (1.0 - x);
    let (f, _) = mhg_equal_args_ext(&spec, y)?;
    Ok(f.mul(ExtFloat::powf(1.0 - x, -a * n as f64)).to_f64())
}

/// Classical one-variable `ₚF_q(a; b; z)`.
pub fn classical_hyp(upper: &[f64], lower: &[f64], z: f64) -> Result<f64> {
    let terminating = upper.iter().any(|&a| nonpositive_integer(a).is_some());
    let p = upper.len();
    let q = lower.len();
    if !terminating && z != 0.0 && (p > q + 1 || (p == q + 1 && z.abs() >= 1.0)) {
        return Err(Error::Divergence(format!("{p}F{q} diverges at z = {z}")));
    }
    for &b in lower {
        if nonpositive_integer(b).is_some() {
            return Err(Error::LowerParameterPole(format!("lower parameter {b}")));
        }
    }
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    let mut small = 0;
    for k in 0..100_000u32 {
        let kf = k as f64;
        let mut r = z / (kf + 1.0);
        for &a in upper {
            r *= a + kf;
        }
        for &b in lower {
            r /= b + kf;
        }
        term *= r;
        if term == 0.0 {
            return Ok(sum + comp);
        }
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        if !terminating && term.abs() <= 1e-17 * sum.abs() {
            small += 1;
            if small >= 3 {
                return Ok(sum + comp);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::TruncationFailure {
        max_weight: 100_000,
        last_layer: term,
        partial_sum: sum,
    })
}

/// `₀F₁^(1)(; c; x·1ⁿ)` as a Toeplitz determinant of Bessel functions:
/// `x^{n(n−c)/2} ∏Γ(c+1−i)/∏_{j<n} j! · det(I_{c−n+j−i}(2√x))`.
pub fn bessel_determinant_equal(c: f64, n: usize, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("x must be nonnegative, got {x}")));
    }
    for i in 0..n {
        if nonpositive_integer(c - i as f64).is_some() {
            return Err(Error::LowerParameterPole(format!("c - {i} = {}", c - i as f64)));
        }
    }
    if n == 0 || x == 0.0 {
        return Ok(1.0);
    }
    let z = 2.0 * x.sqrt();
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = bessel_i(c - n as f64 + j as f64 - i as f64, z)?;
        }
    }
    let mut log_pre = (n * n) as f64 / 2.0 * x.ln() - n as f64 * c / 2.0 * x.ln();
    let mut sign = 1.0;
    for i in 1..=n {
        let g = gamma(c + 1.0 - i as f64)?;
        sign *= g.signum();
        log_pre += g.abs().ln();
    }
    for j in 1..n {
        log_pre -= (1..=j).map(|v| (v as f64).ln()).sum::<f64>();
    }
    Ok(sign * log_pre.exp() * determinant(m, n))
}

/// `₀F₁^(1)(; c; x)` for distinct `x` as a Bessel determinant over a
/// Vandermonde:
/// `(−1)^{⌊n/2⌋} ∏Γ(c+1−i) ∏x_i^{n−c/2} / Δ(x) · det(x_j^{−i/2} I_{c+i−2n}(2√x_j))`.
pub fn bessel_determinant_general(c: f64, x: &[f64]) -> Result<f64> {
    let n = x.len();
    for i in 0..n {
        if nonpositive_integer(c - i as f64).is_some() {
            return Err(Error::LowerParameterPole(format!("c - {i} = {}", c - i as f64)));
        }
    }
    if x.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Domain("entries must be positive".into()));
    }
    let scale = x.iter().fold(0.0f64, |m, v| m.max(*v));
    let mut vandermonde = 1.0;
    for i in 0..n {
        for j in i + 1..n {
            let d = x[j] - x[i];
            if d.abs() < 1e-7 * scale {
                return Err(Error::IllConditioned(format!(
                    "entries {} and {} nearly coincide",
                    x[i], x[j]
                )));
            }
            vandermonde *= d;
        }
    }
    let mut m = vec![0.0; n * n];
    for i in 1..=n {
        for j in 0..n {
            m[(i - 1) * n + j] =
                x[j].powf(-(i as f64) / 2.0) * bessel_i(c + i as f64 - 2.0 * n as f64, 2.0 * x[j].sqrt())?;
        }
    }
    let mut pre = if (n / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    for i in 1..=n {
        pre *= gamma(c + 1.0 - i as f64)? * x[i - 1].powf(n as f64 - c / 2.0);
    }
    Ok(pre / vandermonde * determinant(m, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_argument_is_one() {
        let s = HypergeomSpec::new(vec![1.5, -0.3], vec![2.2], 0.7, 3).unwrap();
        assert_eq!(mhg_equal_args(&s, 0.0).unwrap().0, 1.0);
        assert_eq!(mhg_general_args(&s, &[0.0; 3]).unwrap().0, 1.0);
    }

    #[test]
    fn terminating_one_variable() {
        let s = HypergeomSpec::new(vec![-2.0, -2.0], vec![3.0], 1.0, 1).unwrap();
        let (v, d) = mhg_equal_args(&s, 1.0).unwrap();
        // 1 + 4/3 + 4/24, which Chu–Vandermonde gives as (5)_2/(3)_2
        assert_relative_eq!(v, 1.0 + 4.0 / 3.0 + 1.0 / 6.0, max_relative = 1e-15);
        assert_relative_eq!(v, 30.0 / 12.0, max_relative = 1e-15);
        assert!(d.terminating);
        assert_eq!(d.negative_terms, 0);
    }

    #[test]
    fn classical_examples() {
        assert_eq!(classical_hyp(&[], &[2.5], 0.0).unwrap(), 1.0);
        let (b, c, z) = (1.7, 2.9, 0.35);
        assert_relative_eq!(
            classical_hyp(&[-1.0, b], &[c], z).unwrap(),
            1.0 - b * z / c,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            classical_hyp(&[], &[2.0], 1.0).unwrap(),
            1.590636854637329,
            max_relative = 1e-14
        );
        assert!(classical_hyp(&[0.5, 0.5], &[1.5], 1.2).is_err());
    }

    #[test]
    fn bessel_determinant_oracles() {
        // series values computed independently at 30 digits
        assert_relative_eq!(
            bessel_determinant_equal(4.0, 2, 1.0).unwrap(),
            1.635_095_327_586_578_3,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            bessel_determinant_equal(6.0, 3, 2.5).unwrap(),
            3.413_542_147_436_342_3,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            bessel_determinant_general(5.0, &[1.0, 2.0]).unwrap(),
            1.798_970_534_857_563_5,
            max_relative = 1e-10
        );
    }

    #[test]
    fn lower_pole_rejected() {
        // 1.5 − 1/σ with σ = 2/3 is zero
        assert!(matches!(
            HypergeomSpec::new(vec![], vec![1.5], 2.0 / 3.0, 2),
            Err(Error::LowerParameterPole(_))
        ));
        assert!(matches!(
            HypergeomSpec::new(vec![], vec![-1.0], 1.0, 1),
            Err(Error::LowerParameterPole(_))
        ));
    }

    #[test]
    fn equal_and_general_paths_agree() {
        for &(ref up, ref lo, s, n, x) in &[
            (vec![], vec![3.2], 1.0, 2usize, 0.8),
            (vec![], vec![2.5], 0.5, 3, 1.3),
            (vec![-3.0, 1.4], vec![2.7], 1.5, 2, 0.6),
            (vec![-2.0, -4.5], vec![1.9], 2.0, 3, 0.45),
            (vec![0.7, 1.1], vec![2.3], 1.5, 2, 0.3),
        ] {
            let spec = HypergeomSpec::new(up.clone(), lo.clone(), s, n).unwrap();
            let (e, _) = mhg_equal_args(&spec, x).unwrap();
            let (g, _) = mhg_general_args(&spec, &vec![x; n]).unwrap();
            assert_relative_eq!(e, g, max_relative = 1e-12);
        }
    }

    #[test]
    fn truncation_failure_reported() {
        let spec = HypergeomSpec::new(vec![], vec![2.5], 1.0, 2)
            .unwrap()
            .with_truncation(Truncation::RelativeTail {
                eps: 1e-14,
                max_weight: 3,
                consecutive: 3,
            })
            .unwrap();
        assert!(matches!(
            mhg_equal_args(&spec, 5.0),
            Err(Error::TruncationFailure { .. })
        ));
    }
}
