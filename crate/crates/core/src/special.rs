//! Scalar special functions: gamma family, modified Bessel `I_ν`, and monic
//! Jacobi polynomials on `[0, 1]`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma as sg;

use crate::error::{Error, Result};
use crate::numeric::near_integer;
use crate::partitions::pochhammer;

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma needs x > 0, got {x}")));
    }
    Ok(sg::ln_gamma(x))
}

/// `Γ(x)` on the whole real line; poles are reported as errors.
pub fn gamma(x: f64) -> Result<f64> {
    if x <= 0.0 && x == x.round() {
        return Err(Error::Domain(format!("gamma pole at {x}")));
    }
    Ok(sg::gamma(x))
}

/// `(sign Γ(x), ln|Γ(x)|)` for any non-pole real `x`.
pub fn signed_log_gamma(x: f64) -> Result<(f64, f64)> {
    if x > 0.0 {
        return Ok((1.0, sg::ln_gamma(x)));
    }
    if x == x.round() {
        return Err(Error::Domain(format!("gamma pole at {x}")));
    }
    // Γ(x) Γ(1−x) = π / sin(πx)
    let s = (PI * x).sin();
    let ln = PI.ln() - s.abs().ln() - sg::ln_gamma(1.0 - x);
    Ok((s.signum(), ln))
}

/// `1/Γ(x)`, zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    match signed_log_gamma(x) {
        Ok((s, l)) => s * (-l).exp(),
        Err(_) => 0.0,
    }
}

/// `Γ(a + z) / Γ(b + z)` through log-gamma differences.
pub fn gamma_ratio(a: f64, b: f64, z: f64) -> Result<f64> {
    let (sa, la) = signed_log_gamma(a + z)?;
    let (sb, lb) = signed_log_gamma(b + z)?;
    Ok(sa * sb * (la - lb).exp())
}

/// Leading large-`z` behaviour `z^{a−b}` of [`gamma_ratio`].
pub fn gamma_ratio_asymptote(a: f64, b: f64, z: f64) -> f64 {
    z.powf(a - b)
}

/// `ln B(a, b)` for positive arguments.
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    Ok(log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?)
}

/// Above this argument (and for moderate order) `I_ν` switches to the
/// large-argument expansion.
pub const BESSEL_ASYMPTOTIC_THRESHOLD: f64 = 40.0;

/// Modified Bessel function of the first kind, `I_ν(z)` for `z >= 0`.
///
/// Integer negative orders follow `I_{−n} = I_n`.
pub fn bessel_i(nu: f64, z: f64) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::Domain(format!("bessel_i needs z >= 0, got {z}")));
    }
    if z > 700.0 {
        return Err(Error::Domain(format!("bessel_i overflows at z = {z}")));
    }
    let nu = match near_integer(nu, 0.0) {
        Some(k) if k < 0 => -nu,
        _ => nu,
    };
    if z == 0.0 {
        return if nu == 0.0 {
            Ok(1.0)
        } else if nu > 0.0 {
            Ok(0.0)
        } else {
            Err(Error::Domain(format!(
                "I_{nu}(0) is infinite for negative non-integer order"
            )))
        };
    }
    if z > BESSEL_ASYMPTOTIC_THRESHOLD && 4.0 * nu * nu < z {
        Ok(bessel_i_asymptotic(nu, z))
    } else {
        Ok(bessel_i_series(nu, z))
    }
}

/// Power series `Σ (z/2)^{ν+2k} / (k! Γ(ν+k+1))`.
pub fn bessel_i_series(nu: f64, z: f64) -> f64 {
    let h = 0.5 * z;
    let q = h * h;
    // start the recursion at the first k where Γ(ν+k+1) is finite
    let mut k0 = 0u32;
    while nu + k0 as f64 + 1.0 <= 0.0 && (nu + k0 as f64 + 1.0).fract() == 0.0 {
        k0 += 1;
    }
    let (sg0, lg0) = match signed_log_gamma(nu + k0 as f64 + 1.0) {
        Ok(v) => v,
        Err(_) => return f64::NAN,
    };
    let ln_t0 = (nu + 2.0 * k0 as f64) * h.ln() - sg::ln_gamma(k0 as f64 + 1.0) - lg0;
    let mut term = sg0 * ln_t0.exp();
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut k = k0;
    loop {
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        k += 1;
        term *= q / (k as f64 * (nu + k as f64));
        if term.abs() <= 1e-17 * sum.abs() && (k as f64) > h {
            break;
        }
        if k > 10_000 {
            break;
        }
    }
    sum + comp
}

/// Large-argument expansion `e^z/√(2πz) Σ (−1)^k a_k(ν) z^{−k}`.
pub fn bessel_i_asymptotic(nu: f64, z: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= -(mu - odd * odd) / (k as f64 * 8.0 * z);
        if term.abs() >= prev {
            break;
        }
        sum += term;
        prev = term.abs();
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    z.exp() / (2.0 * PI * z).sqrt() * sum
}

/// Degree and exponents of a monic Jacobi polynomial orthogonal against
/// `x^a (1−x)^b` on `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonicJacobiParams {
    pub m: u32,
    pub a: f64,
    pub b: f64,
}

impl MonicJacobiParams {
    pub fn new(m: u32, a: f64, b: f64) -> Self {
        MonicJacobiParams { m, a, b }
    }
}

/// Evaluates `p_m^{a,b}(x)` through the three-term recurrence, falling back to
/// the explicit finite sum when a recurrence coefficient is singular.
pub fn monic_jacobi(params: MonicJacobiParams, x: f64) -> Result<f64> {
    let MonicJacobiParams { m, a, b } = params;
    if m == 0 {
        return Ok(1.0);
    }
    match recurrence(m, a, b, x) {
        Some(v) => Ok(v),
        None => monic_jacobi_direct(params, x),
    }
}

/// Recurrence `p_{k+1} = (x − A_k) p_k − B_k p_{k−1}`; `None` on a singular
/// coefficient.
fn recurrence(m: u32, a: f64, b: f64, x: f64) -> Option<f64> {
    // Jacobi on [-1,1] with the x ↦ (1+t)/2 map: weight exponent b at t=1
    // and a at t=-1.
    let (al, be) = (b, a);
    let s = al + be;
    let mut p_prev = 0.0;
    let mut p = 1.0;
    for k in 0..m {
        let kf = k as f64;
        let ak = if k == 0 {
            let d = s + 2.0;
            if d == 0.0 {
                return None;
            }
            (be - al) / d
        } else {
            let d = (2.0 * kf + s) * (2.0 * kf + s + 2.0);
            if d == 0.0 {
                return None;
            }
            (be * be - al * al) / d
        };
        let bk = match k {
            0 => 0.0,
            1 => {
                let d = (2.0 + s) * (2.0 + s) * (3.0 + s);
                if d == 0.0 {
                    return None;
                }
                4.0 * (1.0 + al) * (1.0 + be) / d
            }
            _ => {
                let t = 2.0 * kf + s;
                let d = t * t * (t + 1.0) * (t - 1.0);
                if d == 0.0 {
                    return None;
                }
                4.0 * kf * (kf + al) * (kf + be) * (kf + s) / d
            }
        };
        let next = (x - 0.5 * (1.0 + ak)) * p - 0.25 * bk * p_prev;
        p_prev = p;
        p = next;
    }
    if p.is_finite() {
        Some(p)
    } else {
        None
    }
}

/// The explicit form `((−1)^m m!/(m+a+b+1)_m) binom(m+a, m) ₂F₁(−m, m+a+b+1; a+1; x)`,
/// with the binomial folded into the sum so `a + 1` may be a nonpositive integer.
pub fn monic_jacobi_direct(params: MonicJacobiParams, x: f64) -> Result<f64> {
    let MonicJacobiParams { m, a, b } = params;
    let c = m as f64 + a + b + 1.0;
    let norm = pochhammer(c, m);
    if norm == 0.0 {
        return Err(Error::Domain(format!(
            "monic Jacobi normaliser (m+a+b+1)_m vanishes for m={m}, a={a}, b={b}"
        )));
    }
    let mut sum = 0.0;
    let mut xk = 1.0;
    let mut fact = 1.0;
    for k in 0..=m {
        let t = pochhammer(-(m as f64), k) * pochhammer(c, k) * pochhammer(a + 1.0 + k as f64, m - k) / fact * xk;
        sum += t;
        xk *= x;
        fact *= (k + 1) as f64;
    }
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * sum / norm)
}

/// `d/dx p_m^{a,b}(x) = m p_{m−1}^{a+1,b+1}(x)`.
pub fn monic_jacobi_derivative(params: MonicJacobiParams, x: f64) -> Result<f64> {
    let MonicJacobiParams { m, a, b } = params;
    if m == 0 {
        return Ok(0.0);
    }
    Ok(m as f64 * monic_jacobi(MonicJacobiParams::new(m - 1, a + 1.0, b + 1.0), x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn log_gamma_examples() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-15);
        assert_relative_eq!(log_gamma(0.5).unwrap(), 0.5723649429247001, max_relative = 1e-14);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
    }

    #[test]
    fn gamma_ratio_examples() {
        let z = 17.25;
        assert_relative_eq!(gamma_ratio(2.0, 1.0, z).unwrap(), z + 1.0, max_relative = 1e-12);
        assert_eq!(gamma_ratio_asymptote(2.0, 1.0, z), z);
    }

    #[test]
    fn signed_log_gamma_negative() {
        let (s, l) = signed_log_gamma(-0.5).unwrap();
        assert_eq!(s, -1.0);
        assert_relative_eq!(l.exp(), 2.0 * PI.sqrt(), max_relative = 1e-13);
        assert!(signed_log_gamma(-2.0).is_err());
        assert_eq!(rgamma(-3.0), 0.0);
    }

    #[test]
    fn bessel_examples() {
        assert_eq!(bessel_i(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(2.5, 0.0).unwrap(), 0.0);
        assert_relative_eq!(bessel_i(1.0, 2.0).unwrap(), 1.590636854637329, max_relative = 1e-14);
        assert_eq!(bessel_i(-3.0, 1.7).unwrap(), bessel_i(3.0, 1.7).unwrap());
        // I_{1/2}(z) = sqrt(2/(πz)) sinh z
        let z = 3.3;
        assert_relative_eq!(
            bessel_i(0.5, z).unwrap(),
            (2.0 / (PI * z)).sqrt() * z.sinh(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            bessel_i(-0.5, z).unwrap(),
            (2.0 / (PI * z)).sqrt() * z.cosh(),
            max_relative = 1e-14
        );
        assert!(bessel_i(1.0, -1.0).is_err());
    }

    #[test]
    fn bessel_branches_agree_at_threshold() {
        for &nu in &[0.0, 0.5, 1.0, 2.0, 2.0 / 3.0 + 1.0] {
            for &z in &[40.0, 45.0, 60.0] {
                let s = bessel_i_series(nu, z);
                let a = bessel_i_asymptotic(nu, z);
                assert_relative_eq!(s, a, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn monic_jacobi_examples() {
        let x = 0.37;
        assert_eq!(monic_jacobi(MonicJacobiParams::new(0, 1.2, -0.4), x).unwrap(), 1.0);
        let (a, b) = (1.3, 0.6);
        assert_relative_eq!(
            monic_jacobi(MonicJacobiParams::new(1, a, b), x).unwrap(),
            x - (a + 1.0) / (a + b + 2.0),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            monic_jacobi(MonicJacobiParams::new(2, 0.0, 0.0), x).unwrap(),
            x * x - x + 1.0 / 6.0,
            max_relative = 1e-13
        );
    }

    #[test]
    fn recurrence_matches_direct_sum() {
        for m in 0..=20u32 {
            for &(a, b) in &[(0.0, 0.0), (1.5, 2.25), (-0.5, 3.0), (2.0, -14.0), (0.7, -30.5)] {
                for &x in &[-3.0, -0.4, 0.2, 0.9] {
                    let p = MonicJacobiParams::new(m, a, b);
                    let Ok(d) = monic_jacobi_direct(p, x) else {
                        continue;
                    };
                    let r = monic_jacobi(p, x).unwrap();
                    let scale = (1.0 + x.abs()).powi(m as i32);
                    assert!(
                        (r - d).abs() <= 1e-9 * scale.max(d.abs()),
                        "m={m} a={a} b={b} x={x}: {r} vs {d}"
                    );
                }
            }
        }
    }

    #[test]
    fn degenerate_recurrence_falls_back() {
        // a + b + 2 = 0 makes the first recurrence coefficient singular
        let p = MonicJacobiParams::new(3, -0.5, -1.5);
        assert_eq!(monic_jacobi(p, 0.3).unwrap(), monic_jacobi_direct(p, 0.3).unwrap());
    }
}
