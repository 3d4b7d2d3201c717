use knumpar::combinat::{binomial, omega_count, omega_hat_count, verify_bounds, Composition};
use proptest::prelude::*;

fn by_bitmask(parts: &[usize], k: usize) -> u128 {
    let s = parts.len();
    (0u32..1 << s).filter(|m| (0..s).filter(|i| m >> i & 1 == 1).map(|i| parts[i]).sum::<usize>() == k).count() as u128
}

fn parts_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..5, 2..12).prop_filter("n >= 2", |p| p.iter().sum::<usize>() >= 2)
}

proptest! {
    #[test]
    fn count_matches_enumeration(parts in parts_strategy(), pick in any::<usize>()) {
        let n: usize = parts.iter().sum();
        let k = 1 + pick % (n - 1);
        let c = Composition::new(parts.clone()).unwrap();
        prop_assert_eq!(omega_count(&c, k).unwrap(), by_bitmask(&parts, k));
        prop_assert!(omega_count(&c, k).unwrap() <= binomial(n, k));
    }

    #[test]
    fn count_ignores_part_order(parts in parts_strategy(), pick in any::<usize>(), shift in any::<usize>()) {
        let n: usize = parts.iter().sum();
        let k = 1 + pick % (n - 1);
        let mut permuted = parts.clone();
        permuted.rotate_left(shift % parts.len());
        permuted.swap(0, parts.len() - 1);
        let a = omega_count(&Composition::new(parts).unwrap(), k).unwrap();
        let b = omega_count(&Composition::new(permuted).unwrap(), k).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn count_is_symmetric_under_complement(parts in parts_strategy(), pick in any::<usize>()) {
        let n: usize = parts.iter().sum();
        let k = 1 + pick % (n - 1);
        let c = Composition::new(parts).unwrap();
        prop_assert_eq!(omega_count(&c, k).unwrap(), omega_count(&c, n - k).unwrap());
    }

    #[test]
    fn pairs_are_half_the_half_rank_count(parts in parts_strategy()) {
        let n: usize = parts.iter().sum();
        prop_assume!(n.is_multiple_of(2) && n >= 4);
        let c = Composition::new(parts).unwrap();
        let k = n / 2;
        prop_assert_eq!(2 * omega_hat_count(&c, k).unwrap(), omega_count(&c, k).unwrap());
    }
}

#[test]
fn example_composition() {
    let c: Composition = "2,2,2,1,1,1,1".parse().unwrap();
    assert_eq!(omega_count(&c, 9).unwrap(), 4);
    assert_eq!(omega_count(&Composition::ones(10), 5).unwrap(), 252);
}

#[test]
fn exhaustive_bounds_up_to_twelve() {
    let r = verify_bounds(12).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.compositions, (2..=12).map(|n| 1usize << (n - 1)).sum::<usize>());
}
