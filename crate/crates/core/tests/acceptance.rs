//! End-to-end acceptance criteria. Every threshold is pinned here rather than
//! taken from the checks themselves, and each criterion prints one line. Runs
//! without the libtest harness so the lines always show.

use std::time::{Duration, Instant};

use jacobi_edge::validate::{
    bessel_form_agreement, density_checks, identity_checks, sampler_gates, tridiagonal_two_term_gate, triple_agreement,
    two_term_rate, wishart_two_term_gate, Check,
};

const SEED: u64 = 2024;
/// `1.358/√1000`, the 5% one-sample KS critical value at 10³ samples.
const KS_ONE_SAMPLE: f64 = 0.0430;
/// `1.358·√(2/1000)`, the 5% two-sample critical value at 10³ + 10³ samples.
const KS_TWO_SAMPLE: f64 = 0.0607;

/// Pinned tolerance for each identity check, by name prefix.
const IDENTITY_TOLERANCES: &[(&str, f64)] = &[
    ("Pfaff transformation", 1e-10),
    ("Jacobi derivative lowering", 1e-6),
    ("Jacobi contiguous relation", 1e-10),
    ("0F1 exponential derivative identity", 1e-8),
    ("Bessel three-term recurrence", 1e-10),
    ("Bessel combination at alpha1=1", 1e-10),
    ("0F1 to Bessel I bridge", 1e-12),
    ("Kaneko integral, one variable", 1e-8),
    ("Selberg integral N=2 by quadrature", 1e-8),
    ("Z_N closed form vs Selberg ratio", 1e-10),
    ("Z_N large-N asymptote at N=4000", 5e-3),
    ("Jack", 1e-12),
];

struct Outcome {
    ok: bool,
    detail: String,
}

fn find<'a>(checks: &'a [Check], prefix: &str) -> &'a Check {
    checks
        .iter()
        .find(|c| c.name.starts_with(prefix))
        .unwrap_or_else(|| panic!("no check named '{prefix}...'"))
}

fn worst(checks: &[Check]) -> f64 {
    checks.iter().map(|c| c.value).fold(f64::NEG_INFINITY, f64::max)
}

fn criterion<F>(id: u32, title: &str, budget: Duration, f: F) -> bool
where
    F: FnOnce() -> Outcome,
{
    let t = Instant::now();
    let out = f();
    let elapsed = t.elapsed();
    let ok = out.ok && elapsed <= budget;
    println!(
        "[{}] criterion {id}: {title}: {} ({:.2} s, budget {} s)",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    ok
}

fn wishart_vs_two_term() -> Outcome {
    let c = wishart_two_term_gate(SEED).unwrap();
    let ks = find(&c, "N=30 beta=1 double-Wishart KS to two-term").value;
    let ratio = find(&c, "N=30 beta=1 median KS(two-term) over median KS(leading)").value;
    Outcome {
        ok: ks < KS_ONE_SAMPLE && ratio < 1.0,
        detail: format!("KS(two-term) = {ks:.4} < {KS_ONE_SAMPLE}; median ratio two-term/leading = {ratio:.3} < 1"),
    }
}

fn tridiagonal_vs_two_term() -> Outcome {
    let c = tridiagonal_two_term_gate(SEED).unwrap();
    let ks = find(&c, "N=20 beta=3 median KS to two-term").value;
    let ks_exact = find(&c, "N=20 beta=3 median KS to exact").value;
    Outcome {
        ok: ks < KS_ONE_SAMPLE && ks_exact < KS_ONE_SAMPLE,
        detail: format!("median KS(two-term) = {ks:.4}, median KS(exact) = {ks_exact:.4}, both < {KS_ONE_SAMPLE}"),
    }
}

fn rate() -> Outcome {
    let c = two_term_rate().unwrap();
    let ratios: Vec<f64> = c.iter().map(|c| c.value).collect();
    Outcome {
        ok: ratios.len() == 3 && ratios.iter().all(|r| (3.0..=5.0).contains(r)),
        detail: format!("E(16)/E(32) = {ratios:.3?}, each in [3, 5]"),
    }
}

fn triple() -> Outcome {
    let c = triple_agreement().unwrap();
    let w = worst(&c);
    Outcome {
        ok: c.len() == 3 && w <= 1e-9,
        detail: format!("largest pairwise difference {w:.2e} <= 1e-9"),
    }
}

fn bessel_forms() -> Outcome {
    let c = bessel_form_agreement().unwrap();
    let w = worst(&c);
    Outcome {
        ok: c.len() == 7 && w <= 1e-10,
        detail: format!("largest difference over {} comparisons {w:.2e} <= 1e-10", c.len()),
    }
}

fn identities() -> Outcome {
    let c = identity_checks().unwrap();
    let mut failed = Vec::new();
    for check in &c {
        let tol = IDENTITY_TOLERANCES
            .iter()
            .find(|(p, _)| check.name.starts_with(p))
            .map(|(_, t)| *t);
        // a check without a pinned tolerance fails
        let ok = tol.is_some_and(|t| check.value <= t);
        if !ok {
            failed.push(format!("{} = {:e}", check.name, check.value));
        }
    }
    Outcome {
        ok: failed.is_empty() && !c.is_empty(),
        detail: if failed.is_empty() {
            format!("{} identity checks within tolerance", c.len())
        } else {
            format!("failed: {}", failed.join("; "))
        },
    }
}

fn density() -> Outcome {
    let c = density_checks().unwrap();
    let norm = find(&c, "density integrates to one").value;
    let deriv = find(&c, "density equals minus the survival derivative").value;
    Outcome {
        ok: norm <= 1e-8 && deriv <= 1e-6,
        detail: format!("normalisation error {norm:.2e} <= 1e-8, derivative error {deriv:.2e} <= 1e-6"),
    }
}

fn samplers() -> Outcome {
    let c = sampler_gates(SEED).unwrap();
    let moment = find(&c, "N=1 mean deviation").value;
    let two: Vec<f64> = c
        .iter()
        .filter(|c| c.name.contains("two-sample KS between samplers"))
        .map(|c| c.value)
        .collect();
    let deterministic = find(&c, "fixed seed reproduces identical bytes").value == 1.0;
    let one_sample = c
        .iter()
        .filter(|c| c.name.contains("median KS to"))
        .all(|c| c.value < KS_ONE_SAMPLE);
    let autocorr = find(&c, "lag-1 autocorrelation").value;
    Outcome {
        ok: moment <= 3.0
            && two.len() == 2
            && two.iter().all(|d| *d < KS_TWO_SAMPLE)
            && deterministic
            && one_sample
            && autocorr <= 3.0,
        detail: format!(
            "N=1 mean off by {moment:.2} s.e. (<= 3); two-sample KS {two:.4?} < {KS_TWO_SAMPLE}; \
             byte-exact replay {deterministic}"
        ),
    }
}

fn main() {
    let results = [
        criterion(
            1,
            "N=30 beta=1 double-Wishart vs two-term law",
            Duration::from_secs(120),
            wishart_vs_two_term,
        ),
        criterion(
            2,
            "N=20 beta=3 tridiagonal vs two-term law",
            Duration::from_secs(300),
            tridiagonal_vs_two_term,
        ),
        criterion(
            3,
            "two-term error falls fourfold per doubling of N",
            Duration::from_secs(60),
            rate,
        ),
        criterion(
            4,
            "beta=2 series, determinant and Jacobi forms agree",
            Duration::from_secs(60),
            triple,
        ),
        criterion(
            5,
            "beta=2 and alpha1=1 Bessel forms equal the two-term law",
            Duration::from_secs(60),
            bessel_forms,
        ),
        criterion(6, "identity suite", Duration::from_secs(180), identities),
        criterion(
            7,
            "density normalisation and derivative",
            Duration::from_secs(60),
            density,
        ),
        criterion(8, "sampler gates", Duration::from_secs(300), samplers),
    ];
    let passed = results.iter().filter(|r| **r).count();
    println!("{passed}/{} acceptance criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
