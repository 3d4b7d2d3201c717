//! The `verify` property suites.

use serde::Serialize;
use serde_json::{json, Value};

use knumpar::combinat::verify_bounds;
use knumpar::knum::{hermitian_interval, radius_value, support};
use knumpar::linalg::sample::{ginibre, gue, haar_unitary, random_normal, random_projection};
use knumpar::linalg::{hermitian_eigenvalues, Complex64, ComplexMatrix};
use knumpar::parallel::{base_recipes, is_parallel, pointed_cone_check, sample_s, span_dimension, Recipe};
use knumpar::preservers::{canonical_to_map, random_form, recover_form, theorem_harness, Family};
use knumpar::{Error, Result, SeededRng, Space};

const MAX_N: usize = 8;
const BOUNDS_N: usize = 12;

#[derive(Serialize)]
pub struct Suite {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub space: Option<Space>,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Serialize)]
pub struct Summary {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub trials: usize,
    pub budget: usize,
    pub suites: Vec<Suite>,
    pub passed: bool,
}

fn suite(name: &str, space: Option<Space>, passed: bool, detail: Value) -> Suite {
    Suite { name: name.to_string(), space, passed, detail }
}

/// Largest `|Σ_{j∈S} z_j|` over `k`-subsets by bitmask.
fn max_subset_modulus(z: &[Complex64], k: usize) -> f64 {
    let n = z.len();
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| z[i]).sum::<Complex64>().norm())
        .fold(0.0, f64::max)
}

fn radius_suite(n: usize, k: usize, trials: usize, rng: &mut SeededRng) -> Result<Suite> {
    let (mut oracle, mut invariance, mut translation, mut interval) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..trials {
        let (a, eig) = random_normal(n, rng);
        oracle = oracle.max((radius_value(&a, k)? - max_subset_modulus(&eig, k)).abs());

        let g = ginibre(n, rng);
        let u = haar_unitary(n, rng);
        let w = radius_value(&g, k)?;
        invariance = invariance.max((radius_value(&g.conjugate_by(&u), k)? - w).abs() / (1.0 + w));

        let nu = rng.complex_normal();
        let theta = rng.uniform_in(0.0, std::f64::consts::TAU);
        let shifted = &g + &ComplexMatrix::identity(n).scale(nu);
        let expected = support(&g, k, theta)? + k as f64 * (Complex64::from_polar(1.0, theta) * nu).re;
        translation = translation.max((support(&shifted, k, theta)? - expected).abs());

        let h = gue(n, rng);
        let mut lambda = hermitian_eigenvalues(&h)?;
        lambda.sort_by(|a, b| b.total_cmp(a));
        let (lo, hi) = hermitian_interval(&h, k)?;
        let top: f64 = lambda[..k].iter().sum();
        let bottom: f64 = lambda[n - k..].iter().sum();
        interval = interval.max((hi - top).abs()).max((lo - bottom).abs());
    }
    let passed = oracle <= 1e-8 && invariance <= 1e-9 && translation <= 1e-10 && interval <= 1e-10;
    Ok(suite(
        "radius",
        None,
        passed,
        json!({
            "trials": trials,
            "normal_oracle_error": oracle,
            "unitary_invariance_error": invariance,
            "translation_error": translation,
            "hermitian_interval_error": interval,
        }),
    ))
}

fn parallel_suite(n: usize, k: usize, space: Space, trials: usize, rng: &mut SeededRng) -> Result<Suite> {
    let mut recipes = base_recipes(space, k);
    recipes.push(Recipe::Mix);
    let (mut constructed_failures, mut invalid_certificates, mut asymmetric, mut compared) = (0, 0, 0, 0);
    for _ in 0..trials {
        let p = random_projection(n, k, rng)?;
        let a = sample_s(&p, space, recipes[rng.below(recipes.len())], rng)?;
        let b = sample_s(&p, space, recipes[rng.below(recipes.len())], rng)?;
        let b = match space {
            Space::Mn => b.scale(rng.unimodular()),
            Space::Hn => b.scale_real(rng.sign()),
        };
        let v = is_parallel(&a, &b, k, space, 1e-7)?;
        if !v.holds {
            constructed_failures += 1;
        } else if !v.certificate.as_ref().map_or(Ok(false), |c| c.validate(&a, &b, 1e-7))? {
            invalid_certificates += 1;
        }

        let (x, y) = match space {
            Space::Mn => (ginibre(n, rng), ginibre(n, rng)),
            Space::Hn => (gue(n, rng), gue(n, rng)),
        };
        let xy = is_parallel(&x, &y, k, space, 1e-7)?;
        let yx = is_parallel(&y, &x, k, space, 1e-7)?;
        if !xy.uncertain && !yx.uncertain {
            compared += 1;
            asymmetric += usize::from(xy.holds != yx.holds);
        }
    }
    let passed = constructed_failures == 0 && invalid_certificates == 0 && asymmetric == 0;
    Ok(suite(
        "parallel",
        Some(space),
        passed,
        json!({
            "trials": trials,
            "constructed_failures": constructed_failures,
            "invalid_certificates": invalid_certificates,
            "symmetry_compared": compared,
            "asymmetric": asymmetric,
        }),
    ))
}

fn cone_suite(n: usize, k: usize, space: Space, trials: usize, rng: &mut SeededRng) -> Result<Suite> {
    let blocks = k * k + (n - k) * (n - k);
    let expected = match space {
        Space::Mn => blocks + n * n - 1,
        Space::Hn => blocks,
    };
    let p = random_projection(n, k, rng)?;
    let dimension = span_dimension(&[(p.clone(), 0.0)], space, expected + 10, rng)?;
    let mut detail = json!({ "dimension": dimension, "expected": expected });
    let mut passed = dimension == expected;
    if space == Space::Hn && n == 2 * k {
        let r = pointed_cone_check(&p, trials, 1e-8, rng)?;
        passed &= r.passed();
        detail["pointed"] = serde_json::to_value(r).expect("serializable");
    }
    Ok(suite("cones", Some(space), passed, detail))
}

fn recovery_suite(n: usize, k: usize, space: Space, trials: usize, rng: &mut SeededRng) -> Result<Suite> {
    let mut families = Vec::new();
    let mut passed = true;
    for family in Family::ALL.into_iter().filter(|f| f.admissible(space, n, k)) {
        let (mut recovered, mut same_family, mut worst) = (0, 0, 0.0f64);
        let forms = trials.clamp(1, 20);
        for _ in 0..forms {
            let form = random_form(family, space, n, k, rng)?;
            let t = canonical_to_map(&form, n, k)?;
            // Families overlap on H_2, so only the reproduced map is required.
            if let Some(got) = recover_form(&t, k, 1e-8) {
                recovered += 1;
                same_family += usize::from(got.family == family);
                worst = worst.max(canonical_to_map(&got, n, k)?.operator_distance(&t));
            }
        }
        passed &= recovered == forms;
        families.push(json!({
            "family": family,
            "forms": forms,
            "recovered": recovered,
            "same_family": same_family,
            "max_residual": worst,
        }));
    }
    Ok(suite("recovery", Some(space), passed, Value::Array(families)))
}

pub fn run(n: usize, k: usize, space: Option<Space>, trials: usize, budget: usize, seed: u64) -> Result<Summary> {
    if !(2..=MAX_N).contains(&n) {
        return Err(Error::BadDimension(format!("verify needs 2 <= n <= {MAX_N}, got {n}")));
    }
    if k == 0 || k >= n {
        return Err(Error::BadK { k, n });
    }
    let trials = trials.max(1);
    let spaces = match space {
        Some(s) => vec![s],
        None => vec![Space::Mn, Space::Hn],
    };
    let mut stream = 0u64;
    let mut next_rng = || {
        stream += 1;
        SeededRng::stream(seed, stream)
    };

    let mut suites = vec![radius_suite(n, k, trials, &mut next_rng())?];
    for &space in &spaces {
        suites.push(parallel_suite(n, k, space, trials, &mut next_rng())?);
        suites.push(cone_suite(n, k, space, trials, &mut next_rng())?);
        suites.push(recovery_suite(n, k, space, trials, &mut next_rng())?);
        let h = theorem_harness(n, k, space, trials, budget, &mut next_rng())?;
        suites.push(suite("theorem_harness", Some(space), h.passed, serde_json::to_value(&h).expect("serializable")));
    }
    let bounds = verify_bounds(BOUNDS_N)?;
    suites.push(suite("bounds", None, bounds.passed(), serde_json::to_value(&bounds).expect("serializable")));

    let passed = suites.iter().all(|s| s.passed);
    Ok(Summary { n, k, seed, trials, budget, suites, passed })
}
