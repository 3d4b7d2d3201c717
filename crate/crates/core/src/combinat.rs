//! Counting index subsets of a composition whose parts sum to `k`.

use serde::Serialize;

use crate::error::{check_k, Error, Result};

/// An ordered tuple of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Composition(Vec<usize>);

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidInput(format!("composition parts must be positive, got {parts:?}")));
        }
        Ok(Self(parts))
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_all_ones(&self) -> bool {
        self.0.iter().all(|&p| p == 1)
    }
}

impl std::str::FromStr for Composition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidInput(format!("bad composition {s:?}: {e}")))?;
        Self::new(parts)
    }
}

/// Number of index subsets per part-sum, `0..=max`, over `parts`.
fn subset_sums(parts: &[usize], max: usize) -> Vec<u128> {
    let mut ways = vec![0u128; max + 1];
    ways[0] = 1;
    for &p in parts {
        for s in (p..=max).rev() {
            ways[s] += ways[s - p];
        }
    }
    ways
}

/// Number of index sets `{i_1, ..., i_r}` with `n_{i_1} + ... + n_{i_r} = k`.
pub fn omega_count(c: &Composition, k: usize) -> Result<u128> {
    check_k(k, c.n())?;
    Ok(subset_sums(c.parts(), k)[k])
}

/// Number of unordered pairs `{S, S^c}` with both part-sums equal to `k`,
/// for `n = 2k ≥ 4`.
pub fn omega_hat_count(c: &Composition, k: usize) -> Result<u128> {
    let n = c.n();
    if n != 2 * k || n < 4 {
        return Err(Error::RequiresN2k { n, k });
    }
    // Each pair has exactly one member containing index 0.
    let first = c.parts()[0];
    Ok(if first > k { 0 } else { subset_sums(&c.parts()[1..], k - first)[k - first] })
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// All compositions of `n`, in lexicographic order of parts.
pub fn compositions(n: usize) -> Vec<Composition> {
    fn extend(rest: usize, prefix: &mut Vec<usize>, out: &mut Vec<Composition>) {
        if rest == 0 {
            out.push(Composition(prefix.clone()));
            return;
        }
        for p in 1..=rest {
            prefix.push(p);
            extend(rest - p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        extend(n, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub n_max: usize,
    pub compositions: usize,
    pub cases: usize,
    pub bound_violations: usize,
    pub equality_mismatches: usize,
    pub hat_cases: usize,
    pub hat_bound_violations: usize,
    pub hat_equality_mismatches: usize,
}

impl BoundsReport {
    pub fn passed(&self) -> bool {
        self.bound_violations == 0
            && self.equality_mismatches == 0
            && self.hat_bound_violations == 0
            && self.hat_equality_mismatches == 0
    }
}

pub const MAX_VERIFY_N: usize = 14;

/// Exhausts every composition of every `n ≤ n_max` and every `1 ≤ k < n`,
/// checking `Ω ≤ C(n, k)` and, for `n = 2k ≥ 4`, `2Ω̂ ≤ C(n, k)`, with
/// equality exactly at the all-ones composition.
pub fn verify_bounds(n_max: usize) -> Result<BoundsReport> {
    if n_max > MAX_VERIFY_N {
        return Err(Error::InvalidInput(format!("n_max = {n_max} exceeds {MAX_VERIFY_N}")));
    }
    let mut r = BoundsReport {
        n_max,
        compositions: 0,
        cases: 0,
        bound_violations: 0,
        equality_mismatches: 0,
        hat_cases: 0,
        hat_bound_violations: 0,
        hat_equality_mismatches: 0,
    };
    for n in 2..=n_max {
        for c in compositions(n) {
            r.compositions += 1;
            let ways = subset_sums(c.parts(), n);
            for k in 1..n {
                r.cases += 1;
                let bound = binomial(n, k);
                let count = ways[k];
                r.bound_violations += usize::from(count > bound);
                r.equality_mismatches += usize::from((count == bound) != c.is_all_ones());
            }
            if n % 2 == 0 && n >= 4 {
                let k = n / 2;
                r.hat_cases += 1;
                let hat = omega_hat_count(&c, k)?;
                let bound = binomial(n, k);
                r.hat_bound_violations += usize::from(2 * hat > bound);
                r.hat_equality_mismatches += usize::from((2 * hat == bound) != c.is_all_ones());
            }
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(parts: &[usize]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(omega_count(&comp(&[2, 2, 2, 1, 1, 1, 1]), 9).unwrap(), 4);
        assert_eq!(omega_count(&comp(&[5]), 3).unwrap(), 0);
        assert_eq!(omega_count(&Composition::ones(7), 3).unwrap(), 35);
        assert_eq!(omega_hat_count(&comp(&[1, 1, 1, 1]), 2).unwrap(), 3);
        assert_eq!(omega_hat_count(&comp(&[2, 2]), 2).unwrap(), 1);
        assert_eq!(omega_hat_count(&comp(&[4]), 2).unwrap(), 0);
        assert!(matches!(omega_count(&comp(&[2, 1]), 3), Err(Error::BadK { .. })));
        assert!(matches!(omega_hat_count(&comp(&[1, 1, 1]), 1), Err(Error::RequiresN2k { .. })));
        assert!(matches!(omega_hat_count(&comp(&[1, 1]), 1), Err(Error::RequiresN2k { .. })));
    }

    #[test]
    fn parsing() {
        assert_eq!("2, 2,1".parse::<Composition>().unwrap(), comp(&[2, 2, 1]));
        assert!("2,0".parse::<Composition>().is_err());
        assert!("a".parse::<Composition>().is_err());
    }

    #[test]
    fn composition_counts() {
        for n in 1..10 {
            assert_eq!(compositions(n).len(), 1 << (n - 1));
        }
        assert_eq!(binomial(10, 9), 10);
        assert_eq!(binomial(12, 6), 924);
    }

    #[test]
    fn small_bounds() {
        for n_max in [4, 6, 10] {
            let r = verify_bounds(n_max).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        assert!(verify_bounds(15).is_err());
    }
}
