//! One-dimensional maximization of periodic functions: a uniform grid
//! followed by golden-section refinement of the best grid cells.

use std::f64::consts::TAU;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a maximum of `f` on `[lo, hi]`, stopping once
/// the bracket is narrower than `width`. Returns `(x, f(x))`.
pub fn golden_max(f: &mut impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, width: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > width {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Grid settings for [`periodic_maxima`].
#[derive(Clone, Copy, Debug)]
pub struct GridSearch {
    pub grid: usize,
    pub width: f64,
    /// Grid local maxima more than `slack * (1 + |best|)` below the best grid
    /// value are not refined.
    pub slack: f64,
    /// Upper bound on the number of refined cells.
    pub max_refined: usize,
}

impl GridSearch {
    pub const fn new(grid: usize, width: f64) -> Self {
        Self { grid, width, slack: 1e-2, max_refined: 32 }
    }
}

/// A refined local maximum of a `2π`-periodic function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalMax {
    pub theta: f64,
    pub value: f64,
}

/// Values closer than this (relative) count as ties, broken by smaller angle.
pub const TIE_TOL: f64 = 1e-12;

/// All refined local maxima of a `2π`-periodic `f`, best first.
///
/// Angles are reported in `[0, 2π)`. Ties within [`TIE_TOL`] are ordered by
/// the smaller angle, so the first entry is deterministic.
pub fn periodic_maxima(f: &mut impl FnMut(f64) -> f64, search: GridSearch) -> Vec<LocalMax> {
    periodic_profile(f, search).1
}

/// Grid values (at `2π i / grid`) together with the refined maxima.
pub fn periodic_profile(f: &mut impl FnMut(f64) -> f64, search: GridSearch) -> (Vec<f64>, Vec<LocalMax>) {
    let m = search.grid.max(3);
    let step = TAU / m as f64;
    let values: Vec<f64> = (0..m).map(|i| f(i as f64 * step)).collect();
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let floor = best - search.slack * (1.0 + best.abs());

    let mut cells: Vec<usize> = (0..m)
        .filter(|&i| {
            let prev = values[(i + m - 1) % m];
            let next = values[(i + 1) % m];
            values[i] >= prev && values[i] >= next && values[i] >= floor
        })
        .collect();
    // Highest cells first; index order among equal values.
    cells.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    cells.truncate(search.max_refined);

    let mut maxima: Vec<LocalMax> = cells
        .into_iter()
        .map(|i| {
            let centre = i as f64 * step;
            let (t, v) = golden_max(f, centre - step, centre + step, search.width);
            if v > values[i] {
                LocalMax { theta: t.rem_euclid(TAU), value: v }
            } else {
                LocalMax { theta: centre, value: values[i] }
            }
        })
        .collect();
    sort_maxima(&mut maxima);
    (values, maxima)
}

pub fn sort_maxima(maxima: &mut [LocalMax]) {
    maxima.sort_by(|a, b| {
        let scale = 1.0 + a.value.abs().max(b.value.abs());
        if (a.value - b.value).abs() <= TIE_TOL * scale {
            a.theta.total_cmp(&b.theta)
        } else {
            b.value.total_cmp(&a.value)
        }
    });
}
