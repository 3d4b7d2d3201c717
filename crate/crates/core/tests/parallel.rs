use knumpar::linalg::sample::{ginibre, gue, haar_unitary, random_projection};
use knumpar::linalg::{Complex64, ComplexMatrix, Projection, SeededRng, Space};
use knumpar::parallel::{
    base_recipes, is_parallel, is_parallel_by_grid, is_tea, membership_s, pointed_cone_check, sample_s, scalar_test,
    span_dimension, GridRoute, Recipe,
};
use proptest::prelude::*;

fn random_in(space: Space, n: usize, rng: &mut SeededRng) -> ComplexMatrix {
    match space {
        Space::Mn => ginibre(n, rng),
        Space::Hn => gue(n, rng),
    }
}

fn space_of(flag: bool) -> Space {
    if flag {
        Space::Hn
    } else {
        Space::Mn
    }
}

/// Two draws from `S(P)` for a random `P`, rotated apart on request.
fn shared_cone_pair(
    space: Space,
    n: usize,
    k: usize,
    rng: &mut SeededRng,
) -> (Projection, ComplexMatrix, ComplexMatrix) {
    let p = random_projection(n, k, rng).unwrap();
    let mut recipes = base_recipes(space, k);
    recipes.push(Recipe::Mix);
    let a = sample_s(&p, space, recipes[rng.below(recipes.len())], rng).unwrap();
    let b = sample_s(&p, space, recipes[rng.below(recipes.len())], rng).unwrap();
    (p, a, b)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn verdict_is_symmetric(seed in any::<u64>(), n in 2usize..5, herm in any::<bool>(), shared in any::<bool>()) {
        let mut rng = SeededRng::new(seed);
        let space = space_of(herm);
        let k = 1 + rng.below(n - 1);
        let (a, b) = if shared {
            let (_, a, b) = shared_cone_pair(space, n, k, &mut rng);
            (a, b)
        } else {
            (random_in(space, n, &mut rng), random_in(space, n, &mut rng))
        };
        let ab = is_parallel(&a, &b, k, space, 1e-7).unwrap();
        let ba = is_parallel(&b, &a, k, space, 1e-7).unwrap();
        if !ab.uncertain && !ba.uncertain {
            prop_assert_eq!(ab.holds, ba.holds);
        }
    }

    #[test]
    fn cone_is_closed_under_positive_combinations(seed in any::<u64>(), n in 2usize..6, herm in any::<bool>()) {
        let mut rng = SeededRng::new(seed);
        let space = space_of(herm);
        let k = 1 + rng.below(n - 1);
        let (p, a, b) = shared_cone_pair(space, n, k, &mut rng);
        let (s, t) = (rng.uniform_in(0.0, 3.0), rng.uniform_in(0.0, 3.0));
        let c = &a.scale_real(s) + &b.scale_real(t);
        let r = membership_s(&c, &p, space, 1e-7).unwrap();
        prop_assert!(r.member, "{r:?}");
    }

    #[test]
    fn certificates_satisfy_both_equalities(seed in any::<u64>(), n in 2usize..5, herm in any::<bool>()) {
        let mut rng = SeededRng::new(seed);
        let space = space_of(herm);
        let k = 1 + rng.below(n - 1);
        let (_, a, mut b) = shared_cone_pair(space, n, k, &mut rng);
        if space == Space::Mn {
            b = b.scale(rng.unimodular());
        }
        let v = is_parallel(&a, &b, k, space, 1e-7).unwrap();
        prop_assert!(v.holds);
        let cert = v.certificate.unwrap();
        prop_assert!(cert.validate(&a, &b, 1e-7).unwrap());
        prop_assert!(cert.attainment_error() <= 1e-7 * (1.0 + cert.w_a + cert.w_b));
    }

    #[test]
    fn verdict_is_unitarily_covariant(seed in any::<u64>(), n in 2usize..5, herm in any::<bool>(), shared in any::<bool>()) {
        let mut rng = SeededRng::new(seed);
        let space = space_of(herm);
        let k = 1 + rng.below(n - 1);
        let (a, b) = if shared {
            let (_, a, b) = shared_cone_pair(space, n, k, &mut rng);
            (a, b)
        } else {
            (random_in(space, n, &mut rng), random_in(space, n, &mut rng))
        };
        let u = haar_unitary(n, &mut rng);
        let before = is_parallel(&a, &b, k, space, 1e-7).unwrap();
        let after = is_parallel(&a.conjugate_by(&u), &b.conjugate_by(&u), k, space, 1e-7).unwrap();
        if !before.uncertain && !after.uncertain {
            prop_assert_eq!(before.holds, after.holds);
        }
    }
}

#[test]
fn maximizer_route_agrees_with_mu_grid() {
    let mut rng = SeededRng::new(21);
    let route = GridRoute { mu_grid: 128, theta_grid: 180, mu_width: 1e-9 };
    let mut compared = 0;
    for trial in 0..24 {
        let n = 2 + trial % 2;
        let k = 1 + rng.below(n - 1);
        let (a, b) = match trial % 3 {
            0 => (ginibre(n, &mut rng), ginibre(n, &mut rng)),
            1 => {
                let (_, a, b) = shared_cone_pair(Space::Mn, n, k, &mut rng);
                (a, b.scale(rng.unimodular()))
            }
            _ => {
                let (_, a, b) = shared_cone_pair(Space::Mn, n, k, &mut rng);
                (a, &b + &ginibre(n, &mut rng).scale_real(1e-2))
            }
        };
        let fast = is_parallel(&a, &b, k, Space::Mn, 1e-7).unwrap();
        let grid = is_parallel_by_grid(&a, &b, k, Space::Mn, 1e-7, route).unwrap();
        if fast.uncertain || grid.uncertain {
            continue;
        }
        compared += 1;
        assert_eq!(fast.holds, grid.holds, "trial {trial}: {} vs {}", fast.defect, grid.defect);
    }
    assert!(compared >= 16);
}

#[test]
fn distinct_diagonal_units_are_not_parallel() {
    let a = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
    let b = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
    for space in [Space::Mn, Space::Hn] {
        assert!(!is_parallel(&a, &b, 1, space, 1e-7).unwrap().holds);
        assert!(!is_tea(&a, &b, 1, space, 1e-7).unwrap().holds);
        assert!(is_tea(&a, &a, 1, space, 1e-7).unwrap().holds);
    }
}

#[test]
fn scalar_matrices_are_parallel_to_everything() {
    let mut rng = SeededRng::new(22);
    let a = ComplexMatrix::identity(3).scale_real(2.0);
    for _ in 0..10 {
        assert!(is_parallel(&a, &ginibre(3, &mut rng), 1, Space::Mn, 1e-7).unwrap().holds);
    }
    assert!(scalar_test(&a, 1, Space::Mn, 50, 1e-7, &mut rng).unwrap().scalar);
}

#[test]
fn near_scalar_fails_the_scalar_test() {
    let mut rng = SeededRng::new(23);
    let a = &ComplexMatrix::identity(3) + &ComplexMatrix::unit(3, 0, 0).scale_real(0.1);
    let r = scalar_test(&a, 1, Space::Mn, 200, 1e-7, &mut rng).unwrap();
    assert!(!r.scalar);
    assert!(r.probes <= 200 + 3);
    let witness = r.witness.unwrap();
    assert!(!is_parallel(&a, &witness.matrix(), 1, Space::Mn, 1e-7).unwrap().holds);
}

#[test]
fn two_cones_span_more_than_one() {
    let mut rng = SeededRng::new(24);
    let p = random_projection(3, 1, &mut rng).unwrap();
    let q = random_projection(3, 1, &mut rng).unwrap();
    let one = span_dimension(&[(p.clone(), 0.0)], Space::Mn, 20, &mut rng).unwrap();
    let two = span_dimension(&[(p, 0.0), (q, 0.0)], Space::Mn, 20, &mut rng).unwrap();
    assert_eq!(one, 13);
    assert!(two >= 14);
}

#[test]
fn pointed_cones_in_dimension_two() {
    let mut rng = SeededRng::new(25);
    let p = random_projection(2, 1, &mut rng).unwrap();
    let r = pointed_cone_check(&p, 100, 1e-8, &mut rng).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.pointed + r.dependent, 100);
}

#[test]
fn shared_cone_pair_is_tea_with_mu_one() {
    let mut rng = SeededRng::new(26);
    for _ in 0..20 {
        let (_, a, b) = shared_cone_pair(Space::Mn, 4, 2, &mut rng);
        let v = is_tea(&a, &b, 2, Space::Mn, 1e-7).unwrap();
        assert!(v.holds);
        assert!((v.certificate.unwrap().mu - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
    }
}
