//! Integer partitions, hook lengths and Pochhammer symbols.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::ExtFloat;

/// A weakly decreasing tuple of nonnegative integers.
///
/// Trailing zeros are dropped on construction, so `(2,1)` and `(2,1,0)`
/// compare equal. The derived ordering on same-weight partitions is
/// lexicographic, which is also the order [`enumerate_partitions`] reverses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: impl Into<Vec<u32>>) -> Result<Self> {
        let mut parts = parts.into();
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid(format!(
                "partition parts must be weakly decreasing: {parts:?}"
            )));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// `(m, m, ..., m)` with `rows` rows.
    pub fn rectangle(m: u32, rows: usize) -> Self {
        if m == 0 {
            Partition::empty()
        } else {
            Partition(vec![m; rows])
        }
    }

    pub(crate) fn from_parts_unchecked(mut parts: Vec<u32>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition(parts)
    }

    /// Nonzero parts.
    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Part `i` (0-based), zero past the length.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.part(0);
        Partition(
            (1..=first)
                .map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32)
                .collect(),
        )
    }

    /// Dominance order: `self <= other` iff every partial sum of `self` is at
    /// most the matching partial sum of `other` (same weight required).
    pub fn dominated_by(&self, other: &Partition) -> bool {
        if self.weight() != other.weight() {
            return false;
        }
        let n = self.len().max(other.len());
        let (mut a, mut b) = (0u32, 0u32);
        for i in 0..n {
            a += self.part(i);
            b += other.part(i);
            if a > b {
                return false;
            }
        }
        true
    }

    /// Multiplicities of each distinct nonzero part.
    pub fn multiplicities(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let mut j = i;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            out.push((j - i) as u32);
            i = j;
        }
        out
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `weight` with at most `max_parts` parts, each at most
/// `max_part` (`None` = unbounded), in reverse-lexicographic order.
pub fn enumerate_partitions(weight: u32, max_parts: usize, max_part: Option<u32>) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let cap = max_part.unwrap_or(weight).min(weight);
    fill(weight, max_parts, cap, &mut cur, &mut out);
    out
}

fn fill(rest: u32, slots: usize, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition(cur.clone()));
        return;
    }
    if slots == 0 || (cap as u64) * (slots as u64) < rest as u64 {
        return;
    }
    for p in (1..=cap.min(rest)).rev() {
        cur.push(p);
        fill(rest - p, slots - 1, p, cur, out);
        cur.pop();
    }
}

/// `∏_i (λ_i + ℓ − i)! / ∏_{i<j} (λ_i − λ_j − i + j)`, an exact integer.
pub fn hook_length(lambda: &Partition) -> BigUint {
    let l = lambda.len();
    let mut num = BigUint::one();
    for (i, &p) in lambda.parts().iter().enumerate() {
        let top = p as usize + l - 1 - i;
        for f in 2..=top {
            num *= f as u64;
        }
    }
    let mut den = BigUint::one();
    let parts = lambda.parts();
    for i in 0..l {
        for j in i + 1..l {
            den *= (parts[i] - parts[j]) as u64 + (j - i) as u64;
        }
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

/// The rising factorial `(a)_n`.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    let mut r = 1.0;
    for j in 0..n {
        r *= a + j as f64;
    }
    r
}

/// `(a)_n` in extended range, safe for large `n`.
pub fn pochhammer_ext(a: f64, n: u32) -> ExtFloat {
    let mut r = ExtFloat::ONE;
    for j in 0..n {
        r = r.mul_f64(a + j as f64);
    }
    r
}

/// The generalised Pochhammer symbol `∏_i (a − (i−1)/σ)_{λ_i}`.
pub fn gen_pochhammer(a: f64, lambda: &Partition, sigma: f64) -> f64 {
    lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| pochhammer(a - i as f64 / sigma, p))
        .product()
}

pub fn gen_pochhammer_ext(a: f64, lambda: &Partition, sigma: f64) -> ExtFloat {
    let mut r = ExtFloat::ONE;
    for (i, &p) in lambda.parts().iter().enumerate() {
        r = r.mul(pochhammer_ext(a - i as f64 / sigma, p));
    }
    r
}

/// `ρ_λ = Σ_i λ_i (λ_i − 1 − (2/σ)(i−1))`, the eigenvalue data of `D₂`.
pub fn rho(lambda: &Partition, sigma: f64, n: usize) -> f64 {
    debug_assert!(lambda.len() <= n);
    lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let p = p as f64;
            p * (p - 1.0 - 2.0 / sigma * i as f64)
        })
        .sum()
}
