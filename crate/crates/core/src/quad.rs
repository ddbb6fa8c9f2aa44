//! Adaptive quadrature on finite intervals (tanh-sinh, split into panels).

/// `∫_a^b f` to roughly `tol` absolute error.
///
/// The interval is bisected until each panel converges; endpoint
/// singularities of integrable type are handled by the double-exponential rule.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    panel(&f, a, b, tol, 0)
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let out = quadrature::double_exponential::integrate(f, a, b, tol);
    if out.error_estimate <= tol || depth >= 12 {
        return out.integral;
    }
    let m = 0.5 * (a + b);
    panel(f, a, m, 0.5 * tol, depth + 1) + panel(f, m, b, 0.5 * tol, depth + 1)
}

/// `∫_{a}^{b} ∫_{a}^{b} f(x, y) dy dx` by nested one-dimensional rules.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    integrate(|x| integrate(|y| f(x, y), a, b, 0.1 * tol), a, b, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_singular() {
        assert!((integrate(|x| x * x, 0.0, 1.0, 1e-12) - 1.0 / 3.0).abs() < 1e-12);
        assert!((integrate(|x| x.powf(-0.5), 0.0, 1.0, 1e-10) - 2.0).abs() < 1e-8);
    }

    #[test]
    fn kinked_two_dimensional() {
        let v = integrate_2d(|x, y| (x - y).abs(), 0.0, 1.0, 1e-10);
        assert!((v - 1.0 / 3.0).abs() < 1e-8, "{v}");
    }
}
