use std::collections::BTreeSet;

use jacobi_edge::edge_laws::{self, CurveMode, Edge, Scale};
use jacobi_edge::hypergeom::{classical_hyp, mhg_equal_args, HypergeomSpec};
use jacobi_edge::jack::{jack_at_ones, jack_equal_args, jack_eval, schur_at};
use jacobi_edge::partitions::{enumerate_partitions, gen_pochhammer, gen_pochhammer_ext, hook_length, pochhammer};
use jacobi_edge::selberg::{selberg_s, z_n, z_n_from_selberg};
use jacobi_edge::{EnsembleParams, ExtFloat, Partition};
use num_bigint::BigUint;
use proptest::prelude::*;

fn brute_partitions(weight: u32, max_parts: usize, max_part: Option<u32>) -> BTreeSet<Vec<u32>> {
    let cap = max_part.unwrap_or(weight);
    let mut out = BTreeSet::new();
    let mut v = vec![0u32; max_parts];
    loop {
        if v.iter().sum::<u32>() == weight {
            let mut s: Vec<u32> = v.iter().copied().filter(|&p| p > 0).collect();
            s.sort_unstable_by(|a, b| b.cmp(a));
            out.insert(s);
        }
        // odometer over [0, cap]^max_parts
        let mut i = 0;
        loop {
            if i == max_parts {
                return out;
            }
            if v[i] < cap {
                v[i] += 1;
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

fn factorial(k: u32) -> BigUint {
    (1..=k as u64).product()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partitions_match_brute_force(weight in 0u32..9, max_parts in 1usize..5, cap in prop::option::of(1u32..6)) {
        let got = enumerate_partitions(weight, max_parts, cap);
        let set: BTreeSet<Vec<u32>> = got.iter().map(|p| p.parts().to_vec()).collect();
        prop_assert_eq!(set.len(), got.len());
        prop_assert_eq!(set, brute_partitions(weight, max_parts, cap));
        prop_assert!(got.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn conjugation_is_an_involution(weight in 0u32..12) {
        for p in enumerate_partitions(weight, 12, None) {
            let c = p.conjugate();
            prop_assert_eq!(c.weight(), weight);
            prop_assert_eq!(c.conjugate(), p.clone());
            prop_assert_eq!(c.len() as u32, p.part(0));
        }
    }

    #[test]
    fn pochhammer_properties(a in -5.0f64..5.0, sigma in 0.2f64..4.0, weight in 1u32..7) {
        for lambda in enumerate_partitions(weight, 4, None) {
            let direct = gen_pochhammer(a, &lambda, sigma);
            let ext = gen_pochhammer_ext(a, &lambda, sigma).to_f64();
            prop_assert!((direct - ext).abs() <= 1e-12 * direct.abs().max(1e-300));
            // peel off the last row
            let parts = lambda.parts();
            let l = parts.len();
            let head = Partition::new(parts[..l - 1].to_vec()).unwrap();
            let last = pochhammer(a - (l - 1) as f64 / sigma, parts[l - 1]);
            let rebuilt = gen_pochhammer(a, &head, sigma) * last;
            prop_assert!((direct - rebuilt).abs() <= 1e-12 * direct.abs().max(1e-300));
        }
        let single = Partition::new(vec![weight]).unwrap();
        prop_assert_eq!(gen_pochhammer(a, &single, sigma), pochhammer(a, weight));
        prop_assert_eq!(pochhammer(a, weight), pochhammer(a, weight - 1) * (a + (weight - 1) as f64));
    }

    #[test]
    fn jack_sum_is_power_sum(sigma in 0.25f64..4.0, k in 1u32..6, x in prop::collection::vec(-1.5f64..1.5, 1..4)) {
        let n = x.len();
        let total: f64 = enumerate_partitions(k, n, None)
            .iter()
            .map(|l| jack_eval(l, sigma, &x).unwrap())
            .sum();
        let expected = x.iter().sum::<f64>().powi(k as i32);
        prop_assert!((total - expected).abs() <= 1e-10 * (1.0 + expected.abs()), "{total} vs {expected}");
    }

    #[test]
    fn jack_at_equal_arguments(sigma in 0.25f64..4.0, k in 1u32..6, n in 1usize..4, t in -2.0f64..2.0) {
        for lambda in enumerate_partitions(k, n, None) {
            let via_eval = jack_eval(&lambda, sigma, &vec![t; n]).unwrap();
            let closed = jack_equal_args(&lambda, n, sigma, t).unwrap();
            prop_assert!((via_eval - closed).abs() <= 1e-10 * (1.0 + closed.abs()));
        }
    }

    #[test]
    fn jack_at_sigma_one_is_scaled_schur(k in 1u32..6, x in prop::collection::vec(0.1f64..2.0, 3)) {
        let mut x = x;
        x.sort_by(f64::total_cmp);
        prop_assume!(x.windows(2).all(|w| w[1] - w[0] > 0.05));
        for lambda in enumerate_partitions(k, 3, None) {
            let f = (factorial(k) / hook_length(&lambda)).to_string().parse::<f64>().unwrap();
            let c = jack_eval(&lambda, 1.0, &x).unwrap();
            let s = schur_at(&lambda, &x).unwrap();
            prop_assert!(rel(c, f * s) < 1e-9, "{lambda}: {c} vs {}", f * s);
        }
    }

    #[test]
    fn selberg_symmetry(n in 1usize..8, a in 0.2f64..5.0, b in 0.2f64..5.0, c in 0.1f64..2.0) {
        let s = selberg_s(n, a, b, c).unwrap();
        let t = selberg_s(n, b, a, c).unwrap();
        prop_assert!(rel(s, t) < 1e-12);
        prop_assert!(s > 0.0);
    }

    #[test]
    fn selberg_single_variable_is_beta(a in 0.2f64..6.0, b in 0.2f64..6.0, c in 0.1f64..2.0) {
        let beta = statrs::function::beta::beta(a, b);
        prop_assert!(rel(selberg_s(1, a, b, c).unwrap(), beta) < 1e-12);
    }

    #[test]
    fn normalisation_routes_agree(n in 1usize..10, beta in 0.5f64..4.0, a1 in -0.9f64..4.0, a2 in -0.9f64..4.0) {
        let p = EnsembleParams::new(n, beta, a1, a2).unwrap();
        prop_assert!(rel(z_n(&p).unwrap(), z_n_from_selberg(&p).unwrap()) < 1e-10);
    }

    #[test]
    fn one_variable_series_is_classical(a in -3.0f64..3.0, b in -3.0f64..3.0, c in 0.3f64..4.0, x in -0.5f64..0.5) {
        let spec = HypergeomSpec::new(vec![a, b], vec![c], 0.7, 1).unwrap();
        let (m, _) = mhg_equal_args(&spec, x).unwrap();
        let cl = classical_hyp(&[a, b], &[c], x).unwrap();
        prop_assert!((m - cl).abs() <= 1e-12 * (1.0 + cl.abs()), "{m} vs {cl}");
    }

    #[test]
    fn ext_float_round_trip(x in -1e300f64..1e300, y in 1e-200f64..1e200) {
        prop_assert_eq!(ExtFloat::new(x).to_f64(), x);
        let p = ExtFloat::new(x).mul(ExtFloat::new(y)).div(ExtFloat::new(y)).to_f64();
        prop_assert!((p - x).abs() <= 1e-15 * x.abs());
    }

    #[test]
    fn single_eigenvalue_mirror(a1 in 0u32..5, a2 in 0u32..5, beta in 0.5f64..4.0, xi in 0.01f64..0.99) {
        let p = EnsembleParams::new(1, beta, a1 as f64, a2 as f64).unwrap();
        let lower = edge_laws::cdf_exact(&p, xi).unwrap();
        let upper = edge_laws::cdf_exact(&p.swapped(), 1.0 - xi).unwrap();
        prop_assert!((lower + upper - 1.0).abs() < 1e-12, "{lower} + {upper}");
    }

    #[test]
    fn exact_curves_are_monotone(n in 1usize..12, a1 in 0u32..4, a2 in -0.5f64..3.0, beta in 0.5f64..4.0) {
        let p = EnsembleParams::new(n, beta, a1 as f64, a2).unwrap();
        let grid = edge_laws::linear_grid(0.0, 1.0, 41);
        let c = edge_laws::tabulate(&p, Edge::Smallest, Scale::Raw, CurveMode::Exact, &grid).unwrap();
        let tot: Vec<f64> = c.points.iter().map(|pt| pt.exact.unwrap()).collect();
        prop_assert!(tot.iter().all(|v| (-1e-9..=1.0 + 1e-9).contains(v)), "{tot:?}");
        prop_assert!(tot.windows(2).all(|w| w[1] >= w[0] - 1e-9), "{tot:?}");
        prop_assert!(tot[0].abs() < 1e-12);
        prop_assert!((tot[40] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn limit_curves_are_monotone(a1 in 0u32..6, beta in 0.5f64..6.0) {
        let grid = edge_laws::default_grid();
        let v: Vec<f64> = grid.iter().map(|&x| edge_laws::cdf_limit(a1 as usize, beta, x).unwrap()).collect();
        prop_assert!(v.windows(2).all(|w| w[1] >= w[0] - 1e-13));
        prop_assert!(v.iter().all(|x| (-1e-13..=1.0).contains(x)));
    }

    #[test]
    fn two_term_clamped_stays_in_unit_interval(n in 2usize..60, a1 in 0u32..4, a2 in -0.9f64..4.0, beta in 0.5f64..4.0, x in 0.0f64..15.0) {
        let p = EnsembleParams::new(n, beta, a1 as f64, a2).unwrap();
        let t = edge_laws::cdf_two_term(&p, x).unwrap();
        prop_assert!((0.0..=1.0).contains(&t.clamped()));
        prop_assert!((t.leading + t.correction - t.total).abs() < 1e-15);
    }
}

#[test]
fn partition_counts() {
    // p(n) for n = 0..15
    let p = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176];
    for (n, &count) in p.iter().enumerate() {
        assert_eq!(enumerate_partitions(n as u32, n.max(1), None).len(), count);
    }
}

#[test]
fn squared_dimensions_sum_to_factorial() {
    for k in 1..=10u32 {
        let total: BigUint = enumerate_partitions(k, k as usize, None)
            .iter()
            .map(|l| {
                let f = factorial(k) / hook_length(l);
                &f * &f
            })
            .sum();
        assert_eq!(total, factorial(k));
    }
}

#[test]
fn jack_at_ones_sums_to_power() {
    for &sigma in &[0.5, 1.0, 2.0, 3.7] {
        for n in 1..=5usize {
            let k = 6u32;
            let total: f64 = enumerate_partitions(k, n, None)
                .iter()
                .map(|l| jack_at_ones(l, n, sigma).to_f64())
                .sum();
            assert!(rel(total, (n as f64).powi(k as i32)) < 1e-12);
        }
    }
}
