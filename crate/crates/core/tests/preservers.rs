use knumpar::knum::radius_in;
use knumpar::linalg::sample::{ginibre, gue, haar_unitary};
use knumpar::linalg::{Complex64, ComplexMatrix, SeededRng, Space};
use knumpar::preservers::{
    canonical_to_map, find_violation, is_scalar_isometry, non_canonical_panel, preserves_pairs, random_form,
    recover_form, structural_flags, theorem_harness, trace_adjust, trace_coupling, CanonicalForm, Family, PairMode,
    SearchOptions,
};
use proptest::prelude::*;

/// A setting where `family` is admissible.
fn setting(family: Family, pick: usize) -> (Space, usize, usize) {
    let options: &[(Space, usize, usize)] = match family {
        Family::Conjugation | Family::TransposeConjugation => {
            &[(Space::Mn, 3, 1), (Space::Mn, 4, 2), (Space::Hn, 3, 1), (Space::Hn, 2, 1)]
        }
        Family::TraceAdjustConjugation | Family::TraceAdjustTransposeConjugation => {
            &[(Space::Mn, 4, 2), (Space::Hn, 4, 2), (Space::Hn, 2, 1)]
        }
        Family::HermTraceZeroScaled | Family::HermTraceZeroScaledTranspose => &[(Space::Hn, 4, 2), (Space::Hn, 2, 1)],
        Family::HermUnitalTracePreserving2 => &[(Space::Hn, 2, 1)],
    };
    options[pick % options.len()]
}

fn family_strategy() -> impl Strategy<Value = Family> {
    (0..Family::ALL.len()).prop_map(|i| Family::ALL[i])
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn recovery_round_trips(seed in any::<u64>(), family in family_strategy(), pick in 0usize..4) {
        let mut rng = SeededRng::new(seed);
        let (space, n, k) = setting(family, pick);
        let form = random_form(family, space, n, k, &mut rng).unwrap();
        let t = canonical_to_map(&form, n, k).unwrap();
        let got = recover_form(&t, k, 1e-8);
        prop_assert!(got.is_some(), "{family:?} at ({n}, {k}) on {space} not recovered");
        let back = canonical_to_map(&got.unwrap(), n, k).unwrap();
        prop_assert!(back.operator_distance(&t) <= 1e-8 * t.operator_norm().max(1.0));
    }

    #[test]
    fn conjugation_families_scale_the_radius_by_the_scalar(seed in any::<u64>(), pick in 0usize..8) {
        let mut rng = SeededRng::new(seed);
        let family = [
            Family::Conjugation,
            Family::TransposeConjugation,
            Family::TraceAdjustConjugation,
            Family::TraceAdjustTransposeConjugation,
        ][pick % 4];
        let (space, n, k) = setting(family, pick / 4);
        let form = random_form(family, space, n, k, &mut rng).unwrap();
        let t = canonical_to_map(&form, n, k).unwrap();
        let est = is_scalar_isometry(&t, k, 10, &mut rng).unwrap();
        if space == Space::Mn || matches!(family, Family::Conjugation | Family::TransposeConjugation) {
            prop_assert!(est.isometry, "{est:?}");
            prop_assert!((est.factor - form.scalar.norm()).abs() <= 1e-6 * form.scalar.norm());
        }
    }

    #[test]
    fn trace_zero_scaling_acts_on_trace_zero_part(seed in any::<u64>(), transpose in any::<bool>()) {
        let mut rng = SeededRng::new(seed);
        let family = if transpose { Family::HermTraceZeroScaledTranspose } else { Family::HermTraceZeroScaled };
        let form = random_form(family, Space::Hn, 4, 2, &mut rng).unwrap();
        let t = canonical_to_map(&form, 4, 2).unwrap();
        let h = gue(4, &mut rng);
        let z = (&h - &ComplexMatrix::identity(4).scale(h.trace() / 4.0)).hermitian_part();
        let w = radius_in(&z, 2, Space::Hn).unwrap();
        let image = radius_in(&t.apply(&z).unwrap(), 2, Space::Hn).unwrap();
        prop_assert!((image - form.scalar.norm() * w).abs() <= 1e-9 * (1.0 + image));
    }

    #[test]
    fn trace_adjust_is_an_involution_at_half_rank(seed in any::<u64>(), k in 1usize..4) {
        let mut rng = SeededRng::new(seed);
        let a = ginibre(2 * k, &mut rng);
        prop_assert!(trace_adjust(&trace_adjust(&a, k), k).distance(&a) <= 1e-12);
    }
}

#[test]
fn unital_trace_preserving_maps_in_dimension_two_preserve_tea() {
    let mut rng = SeededRng::new(31);
    for _ in 0..5 {
        let form = random_form(Family::HermUnitalTracePreserving2, Space::Hn, 2, 1, &mut rng).unwrap();
        let t = canonical_to_map(&form, 2, 1).unwrap();
        let r = preserves_pairs(&t, 1, PairMode::Tea, 100, 1e-7, &mut rng).unwrap();
        assert!(r.passed(), "{} failures", r.failures.len());
        assert!(r.checked >= 90);
    }
}

#[test]
fn scaled_conjugation_has_factor_three() {
    let mut rng = SeededRng::new(32);
    let form = CanonicalForm::new(Family::Conjugation, Space::Mn, haar_unitary(3, &mut rng), Complex64::new(3.0, 0.0));
    let t = canonical_to_map(&form, 3, 1).unwrap();
    let est = is_scalar_isometry(&t, 1, 20, &mut rng).unwrap();
    assert!(est.isometry);
    assert!((est.factor - 3.0).abs() <= 1e-6);
}

#[test]
fn d_similarity_is_not_an_isometry() {
    let mut rng = SeededRng::new(33);
    let t = non_canonical_panel(Space::Mn, 3, &mut rng).unwrap().remove(0).1;
    assert!(!is_scalar_isometry(&t, 1, 20, &mut rng).unwrap().isometry);
    assert!(recover_form(&t, 1, 1e-8).is_none());
}

#[test]
fn trace_coupling_breaks_preservation() {
    let mut rng = SeededRng::new(34);
    let t = trace_coupling(Space::Mn, 3).unwrap();
    let par = preserves_pairs(&t, 1, PairMode::Parallel, 100, 1e-7, &mut rng).unwrap();
    let tea = preserves_pairs(&t, 1, PairMode::Tea, 100, 1e-7, &mut rng).unwrap();
    assert!(!par.passed() || !tea.passed());
    assert!(!structural_flags(&t, 10, &mut rng).unwrap().unital);
}

#[test]
fn trace_zero_scaled_flags() {
    let mut rng = SeededRng::new(35);
    let mut form =
        CanonicalForm::new(Family::HermTraceZeroScaled, Space::Hn, haar_unitary(4, &mut rng), Complex64::new(3.0, 0.0));
    form.identity_scale = Some(1.0);
    let t = canonical_to_map(&form, 4, 2).unwrap();
    let flags = structural_flags(&t, 10, &mut rng).unwrap();
    assert!(flags.unital && flags.trace_preserving && flags.trace_zero_invariant);
    assert_eq!(flags.complex_linear, None);
}

#[test]
fn conjugation_survives_the_violation_search() {
    let mut rng = SeededRng::new(36);
    for (space, n, k, budget) in [(Space::Hn, 4, 2, 10_000), (Space::Mn, 3, 1, 1_000)] {
        let form = random_form(Family::Conjugation, space, n, k, &mut rng).unwrap();
        let t = canonical_to_map(&form, n, k).unwrap();
        for mode in [PairMode::Parallel, PairMode::Tea] {
            let opts = SearchOptions { budget, ..SearchOptions::default() };
            let found = find_violation(&t, k, mode, opts, &mut rng).unwrap();
            assert!(found.is_none(), "{space} {mode:?}: spurious violation");
        }
    }
}

#[test]
fn harness_on_three_by_three_matrices() {
    let mut rng = SeededRng::new(37);
    let r = theorem_harness(3, 1, Space::Mn, 30, 500, &mut rng).unwrap();
    assert!(r.passed, "{r:?}");
    assert_eq!(r.families.len(), 2);
    assert_eq!(r.panel.len(), 5);
    assert!(r.panel.iter().all(|p| p.violated));
}

#[test]
fn harness_on_hermitian_half_rank() {
    let mut rng = SeededRng::new(38);
    let r = theorem_harness(4, 2, Space::Hn, 30, 500, &mut rng).unwrap();
    assert!(r.passed, "{r:?}");
    assert!(r.families.iter().any(|f| f.family == Family::HermTraceZeroScaled));
}

#[test]
fn harness_on_hermitian_two_by_two() {
    let mut rng = SeededRng::new(39);
    let r = theorem_harness(2, 1, Space::Hn, 30, 500, &mut rng).unwrap();
    assert!(r.passed, "{r:?}");
    assert!(r.families.iter().any(|f| f.family == Family::HermUnitalTracePreserving2));
}
