//! k-numerical range `W_k(A)` and radius `w_k(A)`.
//!
//! Orientation: `support(A, k, θ) = Σ_{j≤k} λ_j((e^{iθ}A + e^{-iθ}A*)/2)`
//! is the largest value of `Re(e^{iθ} z)` over `z ∈ W_k(A)`, i.e. the
//! support function of `W_k(A)` in the direction `e^{-iθ}`. The boundary
//! point touching that supporting line is `tr(A P_θ)` where `P_θ` projects
//! onto the top-`k` eigenspace of the real part.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_k, Error, Result};
use crate::linalg::projection::{projection_from_topk_with_tol, DEFAULT_GAP_TOL};
use crate::linalg::{hermitian_eig, hermitian_eigenvalues, ComplexMatrix, Projection, Space};
use crate::optimize::{periodic_maxima, periodic_profile, GridSearch, LocalMax};

/// θ-maximization settings.
#[derive(Clone, Copy, Debug)]
pub struct RadiusOptions {
    pub grid: usize,
    pub theta_width: f64,
    pub gap_tol: f64,
}

impl Default for RadiusOptions {
    fn default() -> Self {
        Self { grid: 720, theta_width: 1e-10, gap_tol: DEFAULT_GAP_TOL }
    }
}

impl RadiusOptions {
    fn search(&self) -> GridSearch {
        GridSearch::new(self.grid, self.theta_width)
    }
}

#[derive(Clone, Debug)]
pub struct RadiusResult {
    pub value: f64,
    pub theta_star: f64,
    pub attaining: Projection,
    pub degenerate: bool,
}

pub fn support(a: &ComplexMatrix, k: usize, theta: f64) -> Result<f64> {
    check_k(k, a.n())?;
    Ok(support_unchecked(a, k, theta))
}

pub(crate) fn support_unchecked(a: &ComplexMatrix, k: usize, theta: f64) -> f64 {
    top_sum(&a.re_part(theta), k)
}

/// Sum of the `k` largest eigenvalues of a tagged Hermitian matrix.
pub(crate) fn top_sum(h: &ComplexMatrix, k: usize) -> f64 {
    let values = hermitian_eigenvalues(h).expect("Jacobi converges on desk-scale Hermitian input");
    values[..k].iter().sum()
}

pub fn radius(a: &ComplexMatrix, k: usize) -> Result<RadiusResult> {
    radius_with(a, k, &RadiusOptions::default())
}

pub fn radius_with(a: &ComplexMatrix, k: usize, opts: &RadiusOptions) -> Result<RadiusResult> {
    check_k(k, a.n())?;
    let maxima = maximizing_angles(a, k, opts);
    let best = maxima[0];
    let e = hermitian_eig(&a.re_part(best.theta))?;
    let top = projection_from_topk_with_tol(&e, k, opts.gap_tol)?;
    Ok(RadiusResult {
        value: e.top_sum(k),
        theta_star: best.theta,
        attaining: top.projection,
        degenerate: top.degenerate,
    })
}

/// Radius value alone.
pub fn radius_value(a: &ComplexMatrix, k: usize) -> Result<f64> {
    check_k(k, a.n())?;
    Ok(maximizing_angles(a, k, &RadiusOptions::default())[0].value)
}

/// Refined local maxima of `θ ↦ support(A, k, θ)`, best first.
pub(crate) fn maximizing_angles(a: &ComplexMatrix, k: usize, opts: &RadiusOptions) -> Vec<LocalMax> {
    periodic_maxima(&mut |t| support_unchecked(a, k, t), opts.search())
}

/// Maximizing directions of the support function.
#[derive(Clone, Debug)]
pub(crate) struct SupportProfile {
    pub value: f64,
    /// Refined local maxima close to the maximum, then grid angles on a
    /// plateau of the maximum.
    pub angles: Vec<f64>,
    /// More than two grid angles attain the maximum.
    pub plateau: bool,
}

const NEAR_MAX_REFINED: f64 = 1e-6;
const NEAR_MAX_GRID: f64 = 1e-9;

pub(crate) fn support_profile(a: &ComplexMatrix, k: usize, opts: &RadiusOptions) -> SupportProfile {
    let (values, maxima) = periodic_profile(&mut |t| support_unchecked(a, k, t), opts.search());
    let w = maxima[0].value;
    let mut angles: Vec<f64> =
        maxima.iter().filter(|m| m.value >= w - NEAR_MAX_REFINED * (1.0 + w.abs())).map(|m| m.theta).collect();
    let step = TAU / values.len() as f64;
    let flat: Vec<f64> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v >= w - NEAR_MAX_GRID * (1.0 + w.abs()))
        .map(|(i, _)| i as f64 * step)
        .collect();
    let plateau = flat.len() > 2;
    if plateau {
        angles.extend(flat);
    }
    SupportProfile { value: w, angles, plateau }
}

/// `W_k(H) = [lo, hi]` for Hermitian `H`.
pub fn hermitian_interval(h: &ComplexMatrix, k: usize) -> Result<(f64, f64)> {
    h.require_hermitian()?;
    check_k(k, h.n())?;
    let values = hermitian_eigenvalues(h)?;
    let n = values.len();
    Ok((values[n - k..].iter().sum(), values[..k].iter().sum()))
}

/// `w_k` of a Hermitian matrix with an attaining projection, read off the
/// extreme eigenvalue sums.
pub fn hermitian_radius(h: &ComplexMatrix, k: usize) -> Result<(f64, Projection)> {
    check_k(k, h.n())?;
    let e = hermitian_eig(h)?;
    let n = e.n();
    let (hi, lo) = (e.top_sum(k), e.bottom_sum(k));
    let cols = if hi >= -lo { 0 } else { n - k };
    let p = Projection::from_basis(e.vectors.columns(cols, k).into_owned())?;
    Ok((hi.max(-lo), p))
}

/// `w_k(A)`, using the eigenvalue formula on `H_n`.
pub fn radius_in(a: &ComplexMatrix, k: usize, space: Space) -> Result<f64> {
    match space {
        Space::Hn => Ok(hermitian_radius(a, k)?.0),
        Space::Mn => radius_value(a, k),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub theta: f64,
    pub point: Complex64,
    /// Endpoint of a flat edge, sampled just either side of a direction where
    /// `λ_k = λ_{k+1}`.
    pub flat_edge: bool,
}

/// Offset used to resolve the two endpoints of a flat edge.
const FLAT_EDGE_OFFSET: f64 = 1e-7;

pub fn range_boundary(a: &ComplexMatrix, k: usize, m: usize) -> Result<Vec<BoundaryPoint>> {
    check_k(k, a.n())?;
    if m < 8 {
        return Err(Error::InvalidInput(format!("need at least 8 boundary directions, got {m}")));
    }
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let theta = TAU * i as f64 / m as f64;
        let (point, degenerate) = boundary_point(a, k, theta)?;
        if degenerate {
            for t in [theta - FLAT_EDGE_OFFSET, theta + FLAT_EDGE_OFFSET] {
                let (p, _) = boundary_point(a, k, t)?;
                out.push(BoundaryPoint { theta: t.rem_euclid(TAU), point: p, flat_edge: true });
            }
        } else {
            out.push(BoundaryPoint { theta, point, flat_edge: false });
        }
    }
    Ok(out)
}

fn boundary_point(a: &ComplexMatrix, k: usize, theta: f64) -> Result<(Complex64, bool)> {
    let e = hermitian_eig(&a.re_part(theta))?;
    let top = projection_from_topk_with_tol(&e, k, DEFAULT_GAP_TOL)?;
    Ok((top.projection.trace_with(a), top.degenerate))
}

/// Which rank-`k` projections attain `w_k(A)`.
#[derive(Clone, Debug)]
pub enum AttainingSet {
    Unique(Projection),
    /// `n = 2k` and the radius is attained at `P` and at `I - P` only.
    ComplementPair(Projection),
    /// Several isolated attaining projections.
    Multiple(Vec<Projection>),
    /// Some maximizing direction has `λ_k = λ_{k+1}`.
    Degenerate,
}

const SAME_PROJECTION_TOL: f64 = 1e-5;

pub fn attaining_projections(a: &ComplexMatrix, k: usize, tol: f64) -> Result<AttainingSet> {
    let n = a.n();
    check_k(k, n)?;
    let opts = RadiusOptions::default();
    let maxima = maximizing_angles(a, k, &opts);
    let w = maxima[0].value;
    let threshold = w - tol * (1.0 + w);

    let mut found: Vec<Projection> = Vec::new();
    for m in maxima.iter().filter(|m| m.value >= threshold) {
        let e = hermitian_eig(&a.re_part(m.theta))?;
        let top = projection_from_topk_with_tol(&e, k, opts.gap_tol)?;
        if top.degenerate {
            return Ok(AttainingSet::Degenerate);
        }
        if !found.iter().any(|p| p.distance(&top.projection) <= SAME_PROJECTION_TOL) {
            found.push(top.projection);
        }
    }

    let complement_attains = |p: &Projection| {
        let rest = a.trace() - p.trace_with(a);
        rest.norm() >= w - tol * (1.0 + w)
    };
    Ok(match found.len() {
        1 if n == 2 * k && complement_attains(&found[0]) => AttainingSet::ComplementPair(found.swap_remove(0)),
        1 => AttainingSet::Unique(found.swap_remove(0)),
        2 if n == 2 * k && found[0].complement().distance(&found[1]) <= SAME_PROJECTION_TOL => {
            AttainingSet::ComplementPair(found.swap_remove(0))
        }
        _ => AttainingSet::Multiple(found),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum RangeShape {
    Singleton { point: Complex64 },
    Segment { start: Complex64, end: Complex64 },
    Body { boundary: Vec<Complex64> },
}

pub const SINGLETON_TOL: f64 = 1e-9;
pub const SEGMENT_TOL: f64 = 1e-8;

/// Singleton iff `A = (ξ/k) I`; segment iff `A = cI + dH` with `|d| = 1`
/// and `H` Hermitian non-scalar; otherwise a two-dimensional body.
pub fn classify_range(a: &ComplexMatrix, k: usize) -> Result<RangeShape> {
    let n = a.n();
    check_k(k, n)?;
    let mean = a.trace() / n as f64;
    let xi = mean * k as f64;
    let centred = a - &ComplexMatrix::identity(n).scale(mean);
    let scale = 1.0 + a.frobenius();
    if centred.frobenius() <= SINGLETON_TOL * scale {
        return Ok(RangeShape::Singleton { point: xi });
    }

    // ||e^{-iφ}B - (e^{-iφ}B)*||_F^2 = 2||B||_F^2 - 2 Re(e^{-2iφ} tr B²), so the
    // minimizing phase is φ = arg(tr B²) / 2.
    let tr_sq = (&centred * &centred).trace();
    let phi = tr_sq.arg() / 2.0;
    let rotated = centred.scale(Complex64::from_polar(1.0, -phi));
    let residual = (&rotated - &rotated.adjoint()).frobenius();
    if residual <= SEGMENT_TOL * scale {
        let h = rotated.hermitian_part();
        let (lo, hi) = hermitian_interval(&h, k)?;
        let d = Complex64::from_polar(1.0, phi);
        return Ok(RangeShape::Segment { start: xi + d * hi, end: xi + d * lo });
    }

    let boundary = range_boundary(a, k, 720)?.into_iter().map(|b| b.point).collect();
    Ok(RangeShape::Body { boundary })
}

/// `w_r(X)` with the conventions `w_0 = 0` and `w_n(X) = |tr X|`.
fn radius_any_rank(x: &ComplexMatrix, r: usize) -> Result<f64> {
    if r == 0 {
        Ok(0.0)
    } else if r == x.n() {
        Ok(x.trace().norm())
    } else {
        radius_value(x, r)
    }
}

/// Support function of `W_r(X)` at `θ`, any `0 ≤ r ≤ n`.
fn support_any_rank(x: &ComplexMatrix, r: usize, theta: f64) -> f64 {
    if r == 0 {
        0.0
    } else if r == x.n() {
        (Complex64::from_polar(1.0, theta) * x.trace()).re
    } else {
        support_unchecked(x, r, theta)
    }
}

fn boundary_any_rank(x: &ComplexMatrix, r: usize, theta: f64) -> Result<Complex64> {
    if r == 0 {
        Ok(Complex64::new(0.0, 0.0))
    } else if r == x.n() {
        Ok(x.trace())
    } else {
        Ok(boundary_point(x, r, theta)?.0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectSumReport {
    pub radius: f64,
    /// `max_r w_r(A1) + w_{k-r}(A2)`.
    pub bound: f64,
    pub bound_holds: bool,
    pub bound_attained: bool,
    /// `max_θ |h_direct(θ) - max_r (h_r(A1, θ) + h_{k-r}(A2, θ))|`; this is the
    /// Hausdorff distance between the two convex sets over sampled directions.
    pub support_deviation: f64,
    /// Worst half-plane violation of sampled boundary points, both ways.
    pub containment_violation: f64,
    pub consistent: bool,
}

pub fn direct_sum_consistency(
    a1: &ComplexMatrix,
    a2: &ComplexMatrix,
    k: usize,
    directions: usize,
    tol: f64,
) -> Result<DirectSumReport> {
    let (n1, n2) = (a1.n(), a2.n());
    let sum = a1.direct_sum(a2);
    check_k(k, n1 + n2)?;
    let ranks: Vec<usize> = (k.saturating_sub(n2)..=k.min(n1)).collect();

    let mut bound = f64::NEG_INFINITY;
    for &r in &ranks {
        bound = bound.max(radius_any_rank(a1, r)? + radius_any_rank(a2, k - r)?);
    }
    let w = radius_value(&sum, k)?;

    let m = directions.max(8);
    let thetas: Vec<f64> = (0..m).map(|i| TAU * i as f64 / m as f64).collect();
    let mut direct_support = Vec::with_capacity(m);
    let mut minkowski_support = Vec::with_capacity(m);
    let mut direct_points = Vec::with_capacity(m);
    let mut minkowski_points = Vec::new();
    for &t in &thetas {
        direct_support.push(support_unchecked(&sum, k, t));
        direct_points.push(boundary_point(&sum, k, t)?.0);
        let mut best = f64::NEG_INFINITY;
        for &r in &ranks {
            let h = support_any_rank(a1, r, t) + support_any_rank(a2, k - r, t);
            best = best.max(h);
            minkowski_points.push(boundary_any_rank(a1, r, t)? + boundary_any_rank(a2, k - r, t)?);
        }
        minkowski_support.push(best);
    }

    let support_deviation =
        direct_support.iter().zip(&minkowski_support).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    let violation = |points: &[Complex64], support: &[f64]| {
        let mut worst = 0.0f64;
        for p in points {
            for (t, h) in thetas.iter().zip(support) {
                worst = worst.max((Complex64::from_polar(1.0, *t) * p).re - h);
            }
        }
        worst
    };
    let containment_violation =
        violation(&direct_points, &minkowski_support).max(violation(&minkowski_points, &direct_support));

    let scale = tol * (1.0 + bound.abs());
    let bound_holds = w <= bound + scale;
    let bound_attained = (w - bound).abs() <= scale;
    Ok(DirectSumReport {
        radius: w,
        bound,
        bound_holds,
        bound_attained,
        support_deviation,
        containment_violation,
        consistent: bound_holds && support_deviation <= scale && containment_violation <= scale,
    })
}
