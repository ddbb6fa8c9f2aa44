//! Jack polynomials `C_λ^(σ)` in the C-normalisation.
//!
//! Two evaluation routes:
//!
//! * a monomial-basis construction (eigenvector of the Laplace–Beltrami type
//!   operator `D₂`, normalised so that `Σ_{|λ|=k} C_λ = p₁^k`), used for
//!   general arguments and as an oracle;
//! * a product formula for `C_λ(1ⁿ)`, used by every equal-argument series.
//!
//! The construction is generic over the scalar so that exact rationals can
//! certify the double-precision tables.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, ToPrimitive};

use crate::error::{Error, Result};
use crate::numeric::{determinant, ExtFloat};
use crate::partitions::{enumerate_partitions, Partition};

/// Largest variable count for the monomial-basis construction.
pub const MAX_MONOMIAL_VARS: usize = 8;
/// Largest weight for the monomial-basis construction.
pub const MAX_MONOMIAL_WEIGHT: u32 = 40;

/// Scalars the monomial construction can run over.
pub trait JackScalar: Clone + Num + FromPrimitive + PartialOrd + std::fmt::Debug {}
impl<T: Clone + Num + FromPrimitive + PartialOrd + std::fmt::Debug> JackScalar for T {}

/// All C-normalised Jack polynomials of one weight in `n` variables.
#[derive(Clone, Debug)]
pub struct WeightTable<T> {
    pub weight: u32,
    pub n: usize,
    /// Partitions of `weight` with at most `n` parts, reverse-lexicographic.
    pub partitions: Vec<Partition>,
    /// `coeffs[l][m]`: coefficient of `m_{partitions[m]}` in `C_{partitions[l]}`.
    pub coeffs: Vec<Vec<T>>,
}

impl<T: JackScalar> WeightTable<T> {
    pub fn index_of(&self, lambda: &Partition) -> Option<usize> {
        self.partitions.iter().position(|p| p == lambda)
    }

    /// The expansion of `C_λ` as a map `μ → b_{μλ}` with zero entries dropped.
    pub fn expansion(&self, lambda: &Partition) -> Option<BTreeMap<Partition, T>> {
        let l = self.index_of(lambda)?;
        Some(
            self.partitions
                .iter()
                .zip(&self.coeffs[l])
                .filter(|(_, c)| !c.is_zero())
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        )
    }
}

fn check_limits(weight: u32, n: usize) -> Result<()> {
    if n > MAX_MONOMIAL_VARS || weight > MAX_MONOMIAL_WEIGHT {
        return Err(Error::invalid(format!(
            "monomial Jack construction limited to n <= {MAX_MONOMIAL_VARS}, weight <= {MAX_MONOMIAL_WEIGHT} (got n = {n}, weight = {weight})"
        )));
    }
    Ok(())
}

/// Builds every `C_λ^(σ)` with `|λ| = weight`, `ℓ(λ) <= n`.
pub fn build_weight_table<T: JackScalar>(weight: u32, n: usize, sigma: T) -> Result<WeightTable<T>> {
    check_limits(weight, n)?;
    if sigma <= T::zero() {
        return Err(Error::invalid("Jack parameter sigma must be positive"));
    }
    let parts = enumerate_partitions(weight, n, None);
    let np = parts.len();
    let index: HashMap<&Partition, usize> = parts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let int = |v: i64| T::from_i64(v).expect("integer conversion");
    let two_over_sigma = int(2) / sigma.clone();
    let rho = |p: &Partition| {
        let mut r = T::zero();
        for (i, &v) in p.parts().iter().enumerate() {
            let v = v as i64;
            r = r + int(v * (v - 1)) - two_over_sigma.clone() * int(v * i as i64);
        }
        r
    };
    let rhos: Vec<T> = parts.iter().map(rho).collect();

    // For each ν, the partitions μ reachable by the D₂ raising step together
    // with the weight (a − b) of that step.
    let raises: Vec<Vec<(usize, i64)>> = parts
        .iter()
        .map(|nu| {
            let v = nu.parts();
            let mut out = Vec::new();
            for i in 0..v.len() {
                for j in i + 1..v.len() {
                    let lo = v[i].min(v[j]);
                    for b in 0..lo {
                        let a = v[i] + v[j] - b;
                        let mut mu = v.to_vec();
                        mu[i] = a;
                        mu[j] = b;
                        mu.sort_unstable_by(|x, y| y.cmp(x));
                        let mu = Partition::from_parts_unchecked(mu);
                        out.push((index[&mu], (a - b) as i64));
                    }
                }
            }
            out
        })
        .collect();

    // monic P_λ
    let mut monic: Vec<Vec<T>> = Vec::with_capacity(np);
    for l in 0..np {
        let mut c = vec![T::zero(); np];
        c[l] = T::one();
        for v in l + 1..np {
            if !parts[v].dominated_by(&parts[l]) {
                continue;
            }
            let mut s = T::zero();
            for &(m, w) in &raises[v] {
                if !c[m].is_zero() {
                    s = s + int(w) * c[m].clone();
                }
            }
            if s.is_zero() {
                continue;
            }
            let gap = rhos[l].clone() - rhos[v].clone();
            if gap.is_zero() {
                return Err(Error::DegenerateEigenvalue {
                    lambda: parts[l].to_string(),
                    mu: parts[v].to_string(),
                    sigma: f64::NAN,
                });
            }
            c[v] = two_over_sigma.clone() * s / gap;
        }
        monic.push(c);
    }

    // κ_λ from Σ κ_λ P_λ = p₁^k, a triangular solve in reverse-lex order
    let mut factorial = vec![BigInt::from(1)];
    for i in 1..=weight as usize {
        let next = &factorial[i - 1] * BigInt::from(i);
        factorial.push(next);
    }
    let mut kappa: Vec<T> = Vec::with_capacity(np);
    for m in 0..np {
        let mut den = BigInt::from(1);
        for &v in parts[m].parts() {
            den *= &factorial[v as usize];
        }
        let multinomial = &factorial[weight as usize] / den;
        let mut rhs = big_to_scalar::<T>(&multinomial);
        for l in 0..m {
            if !monic[l][m].is_zero() {
                rhs = rhs - kappa[l].clone() * monic[l][m].clone();
            }
        }
        kappa.push(rhs);
    }
    let coeffs = monic
        .into_iter()
        .zip(&kappa)
        .map(|(row, k)| row.into_iter().map(|c| c * k.clone()).collect())
        .collect();
    Ok(WeightTable {
        weight,
        n,
        partitions: parts,
        coeffs,
    })
}

fn big_to_scalar<T: JackScalar>(v: &BigInt) -> T {
    if let Some(i) = v.to_i64() {
        return T::from_i64(i).expect("integer conversion");
    }
    // split into 2^32 limbs
    let base = T::from_u64(1u64 << 32).expect("integer conversion");
    let (sign, digits) = v.to_u32_digits();
    let mut acc = T::zero();
    for d in digits.iter().rev() {
        acc = acc * base.clone() + T::from_u32(*d).expect("integer conversion");
    }
    if sign == num_bigint::Sign::Minus {
        T::zero() - acc
    } else {
        acc
    }
}

type TableKey = (u32, usize, u64);

fn table_cache() -> &'static RwLock<HashMap<TableKey, Arc<WeightTable<f64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<TableKey, Arc<WeightTable<f64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Cached double-precision weight table.
pub fn weight_table(weight: u32, n: usize, sigma: f64) -> Result<Arc<WeightTable<f64>>> {
    let key = (weight, n, sigma.to_bits());
    if let Some(t) = table_cache().read().expect("jack cache poisoned").get(&key) {
        return Ok(Arc::clone(t));
    }
    let t = Arc::new(build_weight_table(weight, n, sigma)?);
    let mut w = table_cache().write().expect("jack cache poisoned");
    Ok(Arc::clone(w.entry(key).or_insert(t)))
}

/// Monomial coefficients of `C_λ^(σ)` in `n` variables.
pub fn jack_monomial_expansion(lambda: &Partition, n: usize, sigma: f64) -> Result<BTreeMap<Partition, f64>> {
    if lambda.len() > n {
        return Err(Error::invalid(format!("partition {lambda} has more than {n} parts")));
    }
    let t = weight_table(lambda.weight(), n, sigma)?;
    Ok(t.expansion(lambda).expect("partition present in its weight table"))
}

/// Exact-rational variant of [`jack_monomial_expansion`].
pub fn jack_monomial_expansion_exact(
    lambda: &Partition,
    n: usize,
    sigma: &BigRational,
) -> Result<BTreeMap<Partition, BigRational>> {
    if lambda.len() > n {
        return Err(Error::invalid(format!("partition {lambda} has more than {n} parts")));
    }
    let t = build_weight_table(lambda.weight(), n, sigma.clone())?;
    Ok(t.expansion(lambda).expect("partition present in its weight table"))
}

/// `m_μ(1ⁿ) = n! / (∏ mult! · (n − ℓ(μ))!)`.
pub fn monomial_at_ones(mu: &Partition, n: usize) -> f64 {
    if mu.len() > n {
        return 0.0;
    }
    let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
    let den: f64 = mu.multiplicities().iter().map(|&m| fact(m as usize)).product::<f64>() * fact(n - mu.len());
    fact(n) / den
}

/// `m_μ(x)`: the sum of `x^α` over distinct rearrangements `α` of `μ`.
pub fn monomial_eval(mu: &Partition, x: &[f64]) -> f64 {
    let n = x.len();
    if mu.len() > n {
        return 0.0;
    }
    let mut exps: Vec<u32> = mu.parts().to_vec();
    exps.resize(n, 0);
    // distinct values with multiplicities
    let mut vals: Vec<(u32, usize)> = Vec::new();
    for &e in &exps {
        match vals.iter_mut().find(|(v, _)| *v == e) {
            Some(slot) => slot.1 += 1,
            None => vals.push((e, 1)),
        }
    }
    fn rec(pos: usize, x: &[f64], vals: &mut [(u32, usize)], acc: f64) -> f64 {
        if pos == x.len() {
            return acc;
        }
        let mut s = 0.0;
        for k in 0..vals.len() {
            if vals[k].1 == 0 {
                continue;
            }
            vals[k].1 -= 1;
            s += rec(pos + 1, x, vals, acc * x[pos].powi(vals[k].0 as i32));
            vals[k].1 += 1;
        }
        s
    }
    rec(0, x, &mut vals, 1.0)
}

/// `C_λ^(σ)(x)` for a general argument through the monomial expansion.
pub fn jack_eval(lambda: &Partition, sigma: f64, x: &[f64]) -> Result<f64> {
    let exp = jack_monomial_expansion(lambda, x.len(), sigma)?;
    Ok(exp.iter().map(|(mu, c)| c * monomial_eval(mu, x)).sum())
}

/// `C_λ^(σ)(1ⁿ) / |λ|!` from the product formula
/// `σ^k ∏_{(i,j)∈λ} (n − (i−1) + σ(j−1)) / ∏_{(i,j)∈λ} (l + σ(a+1))(l + 1 + σ a)`,
/// with `a`, `l` the arm and leg of each box.
pub fn jack_at_ones_over_factorial(lambda: &Partition, n: usize, sigma: f64) -> ExtFloat {
    if lambda.len() > n {
        return ExtFloat::ZERO;
    }
    let conj = lambda.conjugate();
    let mut r = ExtFloat::ONE;
    for (i, &li) in lambda.parts().iter().enumerate() {
        for j in 0..li as usize {
            let arm = (li as usize - j - 1) as f64;
            let leg = (conj.part(j) as usize - i - 1) as f64;
            let num = sigma * (n as f64 - i as f64 + sigma * j as f64);
            let den = (leg + sigma * (arm + 1.0)) * (leg + 1.0 + sigma * arm);
            r = r.mul_f64(num / den);
        }
    }
    r
}

/// `C_λ^(σ)(1ⁿ)` in extended range.
pub fn jack_at_ones(lambda: &Partition, n: usize, sigma: f64) -> ExtFloat {
    let mut f = ExtFloat::ONE;
    for k in 2..=lambda.weight() {
        f = f.mul_f64(k as f64);
    }
    jack_at_ones_over_factorial(lambda, n, sigma).mul(f)
}

/// `C_λ^(σ)(x·1ⁿ) = x^{|λ|} C_λ^(σ)(1ⁿ)`.
pub fn jack_equal_args(lambda: &Partition, n: usize, sigma: f64, x: f64) -> Result<f64> {
    if lambda.len() > n {
        return Err(Error::invalid(format!("partition {lambda} has more than {n} parts")));
    }
    if !(sigma > 0.0) {
        return Err(Error::invalid("Jack parameter sigma must be positive"));
    }
    if lambda.is_empty() {
        return Ok(1.0);
    }
    Ok(jack_at_ones(lambda, n, sigma)
        .mul(ExtFloat::powi(x, lambda.weight() as u64))
        .to_f64())
}

/// Relative spacing below which the bialternant is considered unreliable.
pub const SCHUR_SPACING_TOL: f64 = 1e-7;

/// Schur polynomial via the bialternant `det(x_j^{λ_i+n−i}) / Δ(x)`.
pub fn schur_at(lambda: &Partition, x: &[f64]) -> Result<f64> {
    let n = x.len();
    if lambda.len() > n {
        return Err(Error::invalid(format!("partition {lambda} has more than {n} parts")));
    }
    if lambda.is_empty() {
        return Ok(1.0);
    }
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    for i in 0..n {
        for j in i + 1..n {
            if (x[i] - x[j]).abs() < SCHUR_SPACING_TOL * scale {
                return Err(Error::IllConditioned(format!(
                    "entries {} and {} nearly coincide",
                    x[i], x[j]
                )));
            }
        }
    }
    let mut num = vec![0.0; n * n];
    let mut van = vec![0.0; n * n];
    for i in 0..n {
        let e = lambda.part(i) as i32 + (n - 1 - i) as i32;
        for j in 0..n {
            num[i * n + j] = x[j].powi(e);
            van[i * n + j] = x[j].powi((n - 1 - i) as i32);
        }
    }
    Ok(determinant(num, n) / determinant(van, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn expansion_examples() {
        let e = jack_monomial_expansion(&p(&[1]), 2, 1.0).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[&p(&[1])], 1.0);
        let c2 = jack_eval(&p(&[2]), 1.0, &[1.0, 1.0]).unwrap();
        assert!((c2 - 3.0).abs() < 1e-13);
        let c11 = jack_eval(&p(&[1, 1]), 1.0, &[1.0, 1.0]).unwrap();
        assert!((c11 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn equal_args_examples() {
        for &s in &[0.5, 1.0, 2.7] {
            assert!((jack_equal_args(&p(&[1]), 3, s, 0.4).unwrap() - 1.2).abs() < 1e-15);
            assert_eq!(jack_equal_args(&p(&[2, 1]), 3, s, 0.0).unwrap(), 0.0);
        }
        assert!((jack_equal_args(&p(&[2]), 2, 1.0, 1.0).unwrap() - 3.0).abs() < 1e-13);
    }

    #[test]
    fn schur_examples() {
        assert_eq!(schur_at(&Partition::empty(), &[0.3, 0.9]).unwrap(), 1.0);
        assert!((schur_at(&p(&[1]), &[0.3, 0.9]).unwrap() - 1.2).abs() < 1e-14);
        assert!((schur_at(&p(&[2]), &[1.0, 2.0]).unwrap() - 7.0).abs() < 1e-12);
        assert!(schur_at(&p(&[2]), &[1.0, 1.0]).is_err());
    }

    #[test]
    fn product_formula_matches_monomial_path() {
        for n in 1..=4usize {
            for k in 0..=7u32 {
                for &s in &[0.5, 1.0, 1.5, 2.0, 3.3] {
                    let t = weight_table(k, n, s).unwrap();
                    for (l, lam) in t.partitions.iter().enumerate() {
                        let via_monomials: f64 = t
                            .partitions
                            .iter()
                            .zip(&t.coeffs[l])
                            .map(|(mu, c)| c * monomial_at_ones(mu, n))
                            .sum();
                        let closed = jack_at_ones(lam, n, s).to_f64();
                        assert!(
                            (via_monomials - closed).abs() <= 1e-11 * closed.abs().max(1.0),
                            "{lam} n={n} s={s}: {via_monomials} vs {closed}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn exact_table_certifies_doubles() {
        let sigma = BigRational::new(BigInt::from(3), BigInt::from(2));
        for k in 1..=6u32 {
            let exact = build_weight_table(k, 3, sigma.clone()).unwrap();
            let float = weight_table(k, 3, 1.5).unwrap();
            for (re, rf) in exact.coeffs.iter().zip(&float.coeffs) {
                for (e, f) in re.iter().zip(rf) {
                    let e = e.to_f64().unwrap();
                    assert!((e - f).abs() <= 1e-12 * e.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn exact_normalisation() {
        // Σ_λ C_λ = p₁^k coefficientwise: Σ_λ b_{μλ} = k!/∏μ_i!
        let sigma = BigRational::new(BigInt::from(1), BigInt::from(2));
        let t = build_weight_table(5, 4, sigma).unwrap();
        for (m, mu) in t.partitions.iter().enumerate() {
            let s = t
                .coeffs
                .iter()
                .fold(BigRational::zero(), |acc, row| acc + row[m].clone());
            let mut den = BigInt::one();
            for &v in mu.parts() {
                for f in 2..=v {
                    den *= BigInt::from(f);
                }
            }
            assert_eq!(s, BigRational::from_integer(BigInt::from(120) / den));
        }
    }

    #[test]
    fn limits_enforced() {
        assert!(build_weight_table(41, 2, 1.0).is_err());
        assert!(build_weight_table(3, 9, 1.0).is_err());
        assert!(build_weight_table(3, 2, -1.0).is_err());
    }
}
