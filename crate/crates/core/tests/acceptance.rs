//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//!
//! Run with `cargo test -p knumpar --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use knumpar::combinat::{omega_count, omega_hat_count, verify_bounds, Composition};
use knumpar::knum::{hermitian_interval, radius, range_boundary, support};
use knumpar::linalg::sample::{ginibre, haar_unitary, random_projection};
use knumpar::linalg::{Complex64, ComplexMatrix, Projection, SeededRng, Space};
use knumpar::parallel::{pointed_cone_check, span_dimension};
use knumpar::preservers::{
    canonical_to_map, find_violation, non_canonical_panel, perturbed_identity, preserves_pairs, random_form,
    recover_form, trace_coupling, unital_range_check, Family, PairMode, SearchOptions,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Largest `|Σ_{j∈S} z_j|` over `k`-subsets `S`, by bitmask enumeration.
fn max_subset_sum_modulus(z: &[Complex64], k: usize) -> f64 {
    let n = z.len();
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| z[i]).sum::<Complex64>().norm())
        .fold(0.0, f64::max)
}

fn normal_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = SeededRng::new(101);
    let mut worst = 0.0f64;
    for trial in 0..200 {
        let n = 2 + trial % 5;
        let eig: Vec<Complex64> = (0..n).map(|_| rng.complex_normal()).collect();
        let u = haar_unitary(n, &mut rng);
        let a = ComplexMatrix::from_diagonal(&eig).conjugate_by(&u);
        for k in 1..n {
            let w = radius(&a, k).unwrap().value;
            worst = worst.max((w - max_subset_sum_modulus(&eig, k)).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(worst <= 1e-8 && secs < 10.0, format!("max error {worst:.2e}, {secs:.2} s"))
}

fn hermitian_intervals() -> Outcome {
    let mut rng = SeededRng::new(102);
    let mut worst = 0.0f64;
    for trial in 0..200 {
        let n = 2 + trial % 7;
        let mut lambda: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        let u = haar_unitary(n, &mut rng);
        let h = ComplexMatrix::from_real_diagonal(&lambda).conjugate_by(&u);
        lambda.sort_by(|a, b| b.total_cmp(a));
        for k in 1..n {
            let hi: f64 = lambda[..k].iter().sum();
            let lo: f64 = lambda[n - k..].iter().sum();
            let (l, r) = hermitian_interval(&h, k).unwrap();
            worst = worst.max((l - lo).abs()).max((r - hi).abs());
        }
    }
    outcome(worst <= 1e-10, format!("max error {worst:.2e}"))
}

fn disk_example() -> Outcome {
    let c = Complex64::new;
    let a0 = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 0.5)], vec![c(0.0, 0.5), c(0.0, 0.0)]]).unwrap();
    let w = radius(&a0, 1).unwrap().value;
    let worst = range_boundary(&a0, 1, 720)
        .unwrap()
        .iter()
        .map(|b| ((b.point - c(0.5, 0.0)).norm() - 0.5).abs())
        .fold(0.0, f64::max);
    outcome((w - 1.0).abs() <= 1e-8 && worst <= 1e-6, format!("w_1 = {w:.12}, circle deviation {worst:.2e}"))
}

fn affine_dimensions() -> Outcome {
    let mut rng = SeededRng::new(104);
    let cases = [(Space::Mn, 3, 1, 13), (Space::Mn, 4, 2, 23), (Space::Hn, 4, 2, 8), (Space::Hn, 2, 1, 2)];
    let mut detail = Vec::new();
    let mut pass = true;
    for (space, n, k, expected) in cases {
        let p = random_projection(n, k, &mut rng).unwrap();
        let got = span_dimension(&[(p, 0.0)], space, expected + 10, &mut rng).unwrap();
        pass &= got == expected;
        detail.push(format!("{space}({n},{k})={got}"));
    }
    outcome(pass, detail.join(" "))
}

fn translation_covariance() -> Outcome {
    let mut rng = SeededRng::new(105);
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let n = 2 + trial % 5;
        let k = 1 + rng.below(n - 1);
        let a = ginibre(n, &mut rng);
        let nu = rng.complex_normal();
        let theta = rng.uniform_in(0.0, std::f64::consts::TAU);
        let shifted = &a + &ComplexMatrix::identity(n).scale(nu);
        let expected = support(&a, k, theta).unwrap() + k as f64 * (Complex64::from_polar(1.0, theta) * nu).re;
        worst = worst.max((support(&shifted, k, theta).unwrap() - expected).abs());
    }
    outcome(worst <= 1e-10, format!("max error {worst:.2e}"))
}

fn forward_direction() -> Outcome {
    let mut rng = SeededRng::new(106);
    let cases = [(Space::Mn, 3, 1), (Space::Mn, 4, 2), (Space::Hn, 2, 1), (Space::Hn, 4, 2), (Space::Hn, 3, 1)];
    let mut failures = 0;
    let mut checked = 0;
    let mut families = 0;
    for (space, n, k) in cases {
        for family in Family::ALL.into_iter().filter(|f| f.admissible(space, n, k)) {
            families += 1;
            let form = random_form(family, space, n, k, &mut rng).unwrap();
            let t = canonical_to_map(&form, n, k).unwrap();
            for mode in [PairMode::Parallel, PairMode::Tea] {
                let r = preserves_pairs(&t, k, mode, 100, 1e-7, &mut rng).unwrap();
                failures += r.failures.len();
                checked += r.checked;
            }
        }
    }
    outcome(failures == 0, format!("{families} families, {checked} image pairs checked, {failures} failures"))
}

fn violation_detection() -> Outcome {
    let mut rng = SeededRng::new(107);
    let d_similarity = non_canonical_panel(Space::Mn, 3, &mut rng).unwrap().remove(0).1;
    let panel = [
        ("d_similarity (3,1)", d_similarity, 1),
        ("perturbed identity 0.1 Hn (4,2)", perturbed_identity(Space::Hn, 4, 0.1, &mut rng).unwrap(), 2),
        ("trace coupling (3,1)", trace_coupling(Space::Mn, 3).unwrap(), 1),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, t, k) in panel {
        let opts = SearchOptions { budget: 10_000, ..SearchOptions::default() };
        let found = find_violation(&t, k, PairMode::Parallel, opts, &mut rng).unwrap();
        pass &= found.is_some();
        detail.push(match found {
            Some(v) => format!("{name}: found after {}", v.evaluations),
            None => format!("{name}: none"),
        });
    }
    outcome(pass, detail.join("; "))
}

fn form_recovery() -> Outcome {
    let mut rng = SeededRng::new(108);
    let setting = |family: Family| match family {
        Family::Conjugation | Family::TransposeConjugation => vec![(Space::Mn, 3, 1), (Space::Hn, 3, 1)],
        Family::TraceAdjustConjugation | Family::TraceAdjustTransposeConjugation => {
            vec![(Space::Mn, 4, 2), (Space::Hn, 4, 2)]
        }
        Family::HermTraceZeroScaled | Family::HermTraceZeroScaledTranspose => vec![(Space::Hn, 4, 2)],
        Family::HermUnitalTracePreserving2 => vec![(Space::Hn, 2, 1)],
    };
    let mut worst = 0.0f64;
    let mut wrong = 0;
    let mut total = 0;
    for family in Family::ALL {
        for (space, n, k) in setting(family) {
            for _ in 0..50 {
                total += 1;
                let form = random_form(family, space, n, k, &mut rng).unwrap();
                let t = canonical_to_map(&form, n, k).unwrap();
                match recover_form(&t, k, 1e-8) {
                    Some(got) if got.family == family => {
                        worst = worst.max(canonical_to_map(&got, n, k).unwrap().operator_distance(&t));
                    }
                    _ => wrong += 1,
                }
            }
        }
    }
    outcome(wrong == 0 && worst <= 1e-8, format!("{total} forms, {wrong} not recovered, max residual {worst:.2e}"))
}

fn combinatorics() -> Outcome {
    let example = omega_count(&Composition::new(vec![2, 2, 2, 1, 1, 1, 1]).unwrap(), 9).unwrap();
    let bounds = verify_bounds(12).unwrap();
    let hat_ones = omega_hat_count(&Composition::ones(4), 2).unwrap();
    let pass = example == 4 && bounds.passed() && bounds.hat_cases > 0 && hat_ones == 3;
    outcome(pass, format!("example count {example}, {} cases, {} hat cases", bounds.cases, bounds.hat_cases))
}

fn unital_ranges() -> Outcome {
    let mut rng = SeededRng::new(110);
    let mut worst = 0.0f64;
    let mut maps = 0;
    for (n, k) in [(3, 1), (4, 2)] {
        for family in [
            Family::Conjugation,
            Family::TransposeConjugation,
            Family::TraceAdjustConjugation,
            Family::TraceAdjustTransposeConjugation,
        ] {
            if !family.admissible(Space::Mn, n, k) {
                continue;
            }
            maps += 1;
            let mut form = random_form(family, Space::Mn, n, k, &mut rng).unwrap();
            form.scalar = Complex64::new(1.0, 0.0);
            let t = canonical_to_map(&form, n, k).unwrap();
            worst = worst.max(unital_range_check(&t, family, k, 50, &mut rng).unwrap().worst_error);
        }
    }
    outcome(worst <= 1e-7, format!("{maps} unital maps, max endpoint error {worst:.2e}"))
}

fn pointedness() -> Outcome {
    let mut rng = SeededRng::new(111);
    let mut pass = true;
    let mut detail = Vec::new();
    for (n, k) in [(2, 1), (4, 2)] {
        let p: Projection = random_projection(n, k, &mut rng).unwrap();
        let r = pointed_cone_check(&p, 100, 1e-8, &mut rng).unwrap();
        pass &= r.passed();
        detail.push(format!("({n},{k}): {} pointed, {} failed", r.pointed, r.failed));
    }
    outcome(pass, detail.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("normal-matrix oracle", normal_oracle),
        ("hermitian interval", hermitian_intervals),
        ("disk example", disk_example),
        ("affine dimensions", affine_dimensions),
        ("translation covariance", translation_covariance),
        ("canonical families preserve pairs", forward_direction),
        ("non-preserver detection", violation_detection),
        ("form recovery", form_recovery),
        ("combinatorics", combinatorics),
        ("unital range property", unital_ranges),
        ("pointed cones", pointedness),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status} {name}: {} [{:.1} s]", i + 1, o.detail, start.elapsed().as_secs_f64());
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
