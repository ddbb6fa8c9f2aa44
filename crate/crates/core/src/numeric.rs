//! Extended-range arithmetic and compensated summation.
//!
//! Finite-N distribution formulas multiply astronomically large series
//! coefficients by astronomically small prefactors, e.g. `(1-ξ)^{N²β/2}`
//! against `[−N]_λ [b]_λ`. [`ExtFloat`] keeps a double mantissa with a
//! separate binary exponent so those products never overflow on the way.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

const LN_2: f64 = std::f64::consts::LN_2;

/// Splits a finite nonzero `x` into `m * 2^e` with `0.5 <= |m| < 1`.
pub(crate) fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    if raw_exp == 0 {
        // subnormal: lift into the normal range first
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let mant_bits = (bits & !(0x7ffu64 << 52)) | (1022u64 << 52);
    (f64::from_bits(mant_bits), raw_exp - 1022)
}

/// `m * 2^e`, saturating to `±inf` / `0`.
pub(crate) fn ldexp(m: f64, e: i64) -> f64 {
    if m == 0.0 || !m.is_finite() {
        return m;
    }
    let mut m = m;
    let mut e = e;
    while e > 1000 {
        m *= 2f64.powi(1000);
        e -= 1000;
        if !m.is_finite() {
            return m;
        }
    }
    while e < -1000 {
        m *= 2f64.powi(-1000);
        e += 1000;
        if m == 0.0 {
            return m;
        }
    }
    m * 2f64.powi(e as i32)
}

/// A real number stored as `mantissa * 2^exponent`.
///
/// The mantissa is kept normalised to `0.5 <= |m| < 1` (or exactly zero), so
/// multiplication and division never overflow and lose nothing beyond the
/// usual double rounding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtFloat {
    mant: f64,
    exp: i64,
}

#[allow(clippy::should_implement_trait)]
impl ExtFloat {
    pub const ZERO: ExtFloat = ExtFloat { mant: 0.0, exp: 0 };
    pub const ONE: ExtFloat = ExtFloat { mant: 0.5, exp: 1 };

    pub fn new(x: f64) -> Self {
        let (mant, exp) = frexp(x);
        ExtFloat { mant, exp }
    }

    /// Builds `sign * exp(ln_abs)`.
    pub fn from_ln(sign: f64, ln_abs: f64) -> Self {
        if sign == 0.0 || ln_abs == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let e = (ln_abs / LN_2).floor();
        let r = ln_abs - e * LN_2;
        let m = sign.signum() * r.exp();
        let (mant, de) = frexp(m);
        ExtFloat {
            mant,
            exp: e as i64 + de,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.mant.is_finite()
    }

    pub fn signum(&self) -> f64 {
        if self.mant == 0.0 {
            0.0
        } else {
            self.mant.signum()
        }
    }

    /// Natural log of the magnitude; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.mant == 0.0 {
            return f64::NEG_INFINITY;
        }
        self.mant.abs().ln() + self.exp as f64 * LN_2
    }

    pub fn to_f64(&self) -> f64 {
        ldexp(self.mant, self.exp)
    }

    pub fn mantissa(&self) -> f64 {
        self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn mul_f64(self, r: f64) -> Self {
        let (m, e) = frexp(self.mant * r);
        ExtFloat {
            mant: m,
            exp: if m == 0.0 { 0 } else { self.exp + e },
        }
    }

    pub fn mul(self, other: ExtFloat) -> Self {
        let (m, e) = frexp(self.mant * other.mant);
        ExtFloat {
            mant: m,
            exp: if m == 0.0 { 0 } else { self.exp + other.exp + e },
        }
    }

    pub fn div(self, other: ExtFloat) -> Self {
        let (m, e) = frexp(self.mant / other.mant);
        ExtFloat {
            mant: m,
            exp: if m == 0.0 { 0 } else { self.exp - other.exp + e },
        }
    }

    pub fn recip(self) -> Self {
        ExtFloat::ONE.div(self)
    }

    pub fn neg(self) -> Self {
        ExtFloat {
            mant: -self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(self) -> Self {
        ExtFloat {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// `x^k` computed by repeated squaring in the extended range.
    pub fn powi(x: f64, k: u64) -> Self {
        let mut base = ExtFloat::new(x);
        let mut acc = ExtFloat::ONE;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            k >>= 1;
        }
        acc
    }

    /// `x^p` for positive `x` and real `p`, via logarithms.
    pub fn powf(x: f64, p: f64) -> Self {
        if x == 0.0 {
            return if p == 0.0 { ExtFloat::ONE } else { ExtFloat::ZERO };
        }
        ExtFloat::from_ln(x.signum(), p * x.abs().ln())
    }

    pub fn add(self, other: ExtFloat) -> Self {
        let mut s = ScaledSum::new();
        s.add(self);
        s.add(other);
        s.value()
    }

    pub fn sub(self, other: ExtFloat) -> Self {
        self.add(other.neg())
    }

    /// Compares magnitudes.
    pub fn cmp_abs(&self, other: &ExtFloat) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self
                .exp
                .cmp(&other.exp)
                .then(self.mant.abs().total_cmp(&other.mant.abs())),
        }
    }
}

impl From<f64> for ExtFloat {
    fn from(x: f64) -> Self {
        ExtFloat::new(x)
    }
}

impl fmt::Display for ExtFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_f64();
        if v.is_finite() && (v == 0.0 || v.abs() > 1e-300) {
            write!(f, "{v:e}")
        } else {
            let l10 = self.ln_abs() / std::f64::consts::LN_10;
            let e = l10.floor();
            write!(f, "{}e{}", self.signum() * 10f64.powf(l10 - e), e as i64)
        }
    }
}

/// Neumaier-compensated sum of [`ExtFloat`] terms.
///
/// The running sum is held relative to the largest exponent seen so far;
/// rescaling by powers of two is exact, so the result depends only on the
/// order in which terms are added.
#[derive(Clone, Debug, Default)]
pub struct ScaledSum {
    exp: i64,
    sum: f64,
    comp: f64,
    started: bool,
    terms: usize,
    negative_terms: usize,
    max_term: Option<ExtFloat>,
}

impl ScaledSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, term: ExtFloat) {
        if term.is_zero() {
            return;
        }
        self.terms += 1;
        if term.mant < 0.0 {
            self.negative_terms += 1;
        }
        match self.max_term {
            Some(m) if m.cmp_abs(&term) != Ordering::Less => {}
            _ => self.max_term = Some(term.abs()),
        }
        if !self.started {
            self.started = true;
            self.exp = term.exp;
        } else if term.exp > self.exp {
            let shift = self.exp - term.exp;
            self.sum = ldexp(self.sum, shift);
            self.comp = ldexp(self.comp, shift);
            self.exp = term.exp;
        }
        let v = ldexp(term.mant, term.exp - self.exp);
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn add_f64(&mut self, x: f64) {
        self.add(ExtFloat::new(x));
    }

    pub fn value(&self) -> ExtFloat {
        if !self.started {
            return ExtFloat::ZERO;
        }
        let (m, e) = frexp(self.sum + self.comp);
        ExtFloat {
            mant: m,
            exp: if m == 0.0 { 0 } else { self.exp + e },
        }
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn negative_terms(&self) -> usize {
        self.negative_terms
    }

    /// Largest term magnitude added so far.
    pub fn max_term(&self) -> ExtFloat {
        self.max_term.unwrap_or(ExtFloat::ZERO)
    }
}

/// Plain Neumaier summation of doubles.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(items: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in items {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// True when `x` is within `tol` of an integer.
pub(crate) fn near_integer(x: f64, tol: f64) -> Option<i64> {
    let r = x.round();
    if (x - r).abs() <= tol * r.abs().max(1.0) {
        Some(r as i64)
    } else {
        None
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(mut a: Vec<f64>, n: usize) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut det = 1.0;
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r * n + col].abs() > a[piv * n + col].abs() {
                piv = r;
            }
        }
        if a[piv * n + col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            for c in 0..n {
                a.swap(piv * n + c, col * n + c);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for r in col + 1..n {
            let f = a[r * n + col] / p;
            if f != 0.0 {
                for c in col..n {
                    a[r * n + c] -= f * a[col * n + c];
                }
            }
        }
    }
    det
}
