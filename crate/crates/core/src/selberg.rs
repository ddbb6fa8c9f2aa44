//! Ensemble parameters, the Selberg integral and the density constant `Z_N`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{near_integer, ExtFloat};
use crate::special::{log_gamma, signed_log_gamma};

/// `(N, β, α₁, α₂)` of a Jacobi β-ensemble with density proportional to
/// `∏ x_i^{α₁}(1−x_i)^{α₂} ∏_{j<k}|x_k − x_j|^β` on `[0,1]^N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub n: usize,
    pub beta: f64,
    pub alpha1: f64,
    pub alpha2: f64,
}

impl EnsembleParams {
    pub fn new(n: usize, beta: f64, alpha1: f64, alpha2: f64) -> Result<Self> {
        let p = EnsembleParams {
            n,
            beta,
            alpha1,
            alpha2,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("N must be a positive integer"));
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(Error::invalid(format!("beta must be positive, got {}", self.beta)));
        }
        if !(self.alpha1 > -1.0) || !self.alpha1.is_finite() {
            return Err(Error::invalid(format!("alpha1 must exceed -1, got {}", self.alpha1)));
        }
        if !(self.alpha2 > -1.0) || !self.alpha2.is_finite() {
            return Err(Error::invalid(format!("alpha2 must exceed -1, got {}", self.alpha2)));
        }
        Ok(())
    }

    /// Parameters of the reflected ensemble `x ↦ 1 − x`.
    pub fn swapped(&self) -> Self {
        EnsembleParams {
            alpha1: self.alpha2,
            alpha2: self.alpha1,
            ..*self
        }
    }

    /// `α₁` as a nonnegative integer, or a mode-mismatch error naming `what`.
    pub fn alpha1_index(&self, what: &str) -> Result<usize> {
        integer_param(self.alpha1, "alpha1", what)
    }

    pub fn alpha2_index(&self, what: &str) -> Result<usize> {
        integer_param(self.alpha2, "alpha2", what)
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }
}

pub(crate) fn integer_param(v: f64, name: &str, what: &str) -> Result<usize> {
    match near_integer(v, 0.0) {
        Some(k) if k >= 0 => Ok(k as usize),
        _ => Err(Error::mismatch(format!(
            "{name} must be a nonnegative integer for {what}"
        ))),
    }
}

fn add_lgamma(acc: &mut (f64, f64), x: f64, power: f64) -> Result<()> {
    let (s, l) = signed_log_gamma(x)?;
    if s < 0.0 && power.abs() % 2.0 == 1.0 {
        acc.0 = -acc.0;
    }
    acc.1 += power * l;
    Ok(())
}

/// `S_N(a, b, c) = ∏_{i=0}^{N−1} Γ(1+(i+1)c)Γ(a+ic)Γ(b+ic) / (Γ(1+c)Γ(a+b+(N+i−1)c))`
/// in extended range.
pub fn selberg_s_ext(n: usize, a: f64, b: f64, c: f64) -> Result<ExtFloat> {
    let mut acc = (1.0, 0.0);
    for i in 0..n {
        let i = i as f64;
        add_lgamma(&mut acc, 1.0 + (i + 1.0) * c, 1.0)?;
        add_lgamma(&mut acc, a + i * c, 1.0)?;
        add_lgamma(&mut acc, b + i * c, 1.0)?;
        add_lgamma(&mut acc, 1.0 + c, -1.0)?;
        add_lgamma(&mut acc, a + b + (n as f64 + i - 1.0) * c, -1.0)?;
    }
    Ok(ExtFloat::from_ln(acc.0, acc.1))
}

pub fn selberg_s(n: usize, a: f64, b: f64, c: f64) -> Result<f64> {
    Ok(selberg_s_ext(n, a, b, c)?.to_f64())
}

/// `ln S_N(a, b, c)` for positive values.
pub fn selberg_s_log(n: usize, a: f64, b: f64, c: f64) -> Result<f64> {
    let v = selberg_s_ext(n, a, b, c)?;
    if v.signum() <= 0.0 {
        return Err(Error::Domain("Selberg value is not positive".into()));
    }
    Ok(v.ln_abs())
}

/// `Z_N` in extended range, from the telescoped gamma-ratio form.
pub fn z_n_ext(p: &EnsembleParams) -> Result<ExtFloat> {
    p.validate()?;
    let n = p.nf();
    let (b, a1, a2) = (p.beta, p.alpha1, p.alpha2);
    let l = n.ln()
        + log_gamma(1.0 + b / 2.0)?
        + log_gamma(a1 + 1.0 + n * b / 2.0)?
        + log_gamma(a1 + a2 + 2.0 + (n - 1.0) * b / 2.0)?
        - log_gamma(1.0 + n * b / 2.0)?
        - log_gamma(a1 + 1.0)?
        - log_gamma(a1 + 1.0 + b / 2.0)?
        - log_gamma(a2 + 1.0 + (n - 1.0) * b / 2.0)?;
    Ok(ExtFloat::from_ln(1.0, l))
}

pub fn z_n(p: &EnsembleParams) -> Result<f64> {
    Ok(z_n_ext(p)?.to_f64())
}

/// `Z_N` as the defining ratio `N S_{N−1}(α₁+1+β, α₂+1, β/2) / S_N(α₁+1, α₂+1, β/2)`.
pub fn z_n_from_selberg(p: &EnsembleParams) -> Result<f64> {
    p.validate()?;
    let c = p.beta / 2.0;
    let num = selberg_s_ext(p.n - 1, p.alpha1 + 1.0 + p.beta, p.alpha2 + 1.0, c)?;
    let den = selberg_s_ext(p.n, p.alpha1 + 1.0, p.alpha2 + 1.0, c)?;
    Ok(num.div(den).mul_f64(p.nf()).to_f64())
}

/// Large-`N` asymptote
/// `Γ(1+β/2)(β/2)^{2α₁+1} / (Γ(1+α₁)Γ(1+α₁+β/2)) · N^{2(α₁+1)}`.
pub fn z_n_asymptotic(alpha1: f64, _alpha2: f64, beta: f64, n: usize) -> Result<f64> {
    let h = beta / 2.0;
    let l =
        log_gamma(1.0 + h)? + (2.0 * alpha1 + 1.0) * h.ln() - log_gamma(1.0 + alpha1)? - log_gamma(1.0 + alpha1 + h)?
            + 2.0 * (alpha1 + 1.0) * (n as f64).ln();
    Ok(l.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_2d;
    use approx::assert_relative_eq;

    #[test]
    fn single_factor_is_beta_function() {
        for &c in &[0.1, 0.5, 2.0] {
            let (a, b) = (2.3, 0.7);
            let beta = (log_gamma(a).unwrap() + log_gamma(b).unwrap() - log_gamma(a + b).unwrap()).exp();
            assert_relative_eq!(selberg_s(1, a, b, c).unwrap(), beta, max_relative = 1e-13);
        }
    }

    #[test]
    fn two_dimensional_quadrature() {
        assert_relative_eq!(selberg_s(2, 1.0, 1.0, 0.5).unwrap(), 1.0 / 3.0, max_relative = 1e-13);
        let q = integrate_2d(|x, y| x * y * (y - x).powi(2), 0.0, 1.0, 1e-12);
        assert_relative_eq!(selberg_s(2, 2.0, 1.0, 1.0).unwrap(), q, max_relative = 1e-8);
    }

    #[test]
    fn symmetric_in_a_b() {
        assert_eq!(
            selberg_s_ext(4, 1.3, 2.9, 0.8).unwrap(),
            selberg_s_ext(4, 2.9, 1.3, 0.8).unwrap()
        );
    }

    #[test]
    fn z_n_examples() {
        let p = EnsembleParams::new(1, 1.7, 2.0, 0.5).unwrap();
        let b = (log_gamma(3.0).unwrap() + log_gamma(1.5).unwrap() - log_gamma(4.5).unwrap()).exp();
        assert_relative_eq!(z_n(&p).unwrap(), 1.0 / b, max_relative = 1e-13);
        // exact rational values
        assert_relative_eq!(
            z_n(&EnsembleParams::new(3, 1.0, 1.0, 0.0).unwrap()).unwrap(),
            30.0,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            z_n(&EnsembleParams::new(5, 2.0, 2.0, 1.0).unwrap()).unwrap(),
            5880.0,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            z_n(&EnsembleParams::new(4, 3.0, 2.0, 1.7).unwrap()).unwrap(),
            6952.5504,
            max_relative = 1e-12
        );
    }

    #[test]
    fn asymptote_beta_two_alpha_zero() {
        for n in [5usize, 40, 300] {
            assert_relative_eq!(
                z_n_asymptotic(0.0, 0.0, 2.0, n).unwrap(),
                (n * n) as f64,
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn invalid_params() {
        assert!(EnsembleParams::new(0, 1.0, 0.0, 0.0).is_err());
        assert!(EnsembleParams::new(3, 0.0, 0.0, 0.0).is_err());
        assert!(EnsembleParams::new(3, 1.0, -1.0, 0.0).is_err());
        assert!(EnsembleParams::new(3, 1.0, 0.0, -1.5).is_err());
        let p = EnsembleParams::new(3, 1.0, 0.5, 0.0).unwrap();
        assert_eq!(
            p.alpha1_index("exact mode").unwrap_err().to_string(),
            "alpha1 must be a nonnegative integer for exact mode"
        );
    }
}
