//! Parallel and TEA pairs for `w_k`, and the cones
//! `S(P) = {B : tr(BP) = w_k(B)}`.
//!
//! `A ‖ B` means `w_k(A + μB) = w_k(A) + w_k(B)` for some unimodular `μ`
//! (`μ = ±1` on `H_n`); a TEA pair is the case `μ = 1`.
//!
//! The Mn test works from the support functions: `w_k(A + μB)` is the
//! maximum over `α` of `Σtop_k(re_part(A, α) + re_part(B, α + arg μ))`, and
//! by Ky Fan this is at most `h_A(α) + h_B(β)`. Equality forces `α` and `β`
//! to be maximizers, so it is enough to scan pairs of maximizing
//! directions. [`is_parallel_by_grid`] evaluates the definition directly on a
//! grid of `μ`.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knum::{hermitian_radius, radius_value, radius_with, support_profile, top_sum, RadiusOptions};
use crate::linalg::projection::projection_from_topk_with_tol;
use crate::linalg::sample::{ginibre, gue, random_projection};
use crate::linalg::{encode, hermitian_eig, ComplexMatrix, Projection, SeededRng, Space};
use crate::optimize::{golden_max, periodic_maxima, GridSearch};

pub const DEFAULT_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq)]
pub struct ParallelCertificate {
    pub mu: Complex64,
    pub projection: Projection,
    pub w_a: f64,
    pub w_b: f64,
    pub tr_ap: Complex64,
    pub tr_bp: Complex64,
}

impl ParallelCertificate {
    /// Largest violation among `|tr AP| = w_A`, `|tr BP| = w_B` and
    /// `|tr AP + μ tr BP| = w_A + w_B`.
    pub fn attainment_error(&self) -> f64 {
        let sum = self.tr_ap + self.mu * self.tr_bp;
        (self.w_a - self.tr_ap.norm())
            .abs()
            .max((self.w_b - self.tr_bp.norm()).abs())
            .max((self.w_a + self.w_b - sum.norm()).abs())
    }

    /// Recomputes the certificate's traces and radii from the matrices.
    pub fn validate(&self, a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<bool> {
        let k = self.projection.rank();
        let (wa, wb) = (radius_value(a, k)?, radius_value(b, k)?);
        let (ta, tb) = (self.projection.trace_with(a), self.projection.trace_with(b));
        let scale = tol * (1.0 + wa + wb);
        let aligned = (ta + self.mu * tb).norm();
        Ok((ta.norm() - wa).abs() <= scale
            && (tb.norm() - wb).abs() <= scale
            && (aligned - wa - wb).abs() <= scale
            && (self.mu.norm() - 1.0).abs() <= 1e-12)
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub holds: bool,
    /// The defect is within a factor 10 of the threshold.
    pub uncertain: bool,
    /// `w_A + w_B - max_μ w_k(A + μB)` as found by the search, clamped at 0.
    pub defect: f64,
    pub threshold: f64,
    pub certificate: Option<ParallelCertificate>,
}

fn verdict(defect: f64, threshold: f64, certificate: ParallelCertificate) -> Verdict {
    let defect = defect.max(0.0);
    let holds = defect <= threshold;
    Verdict {
        holds,
        uncertain: defect > threshold / 10.0 && defect < 10.0 * threshold,
        defect,
        threshold,
        certificate: holds.then_some(certificate),
    }
}

fn check_pair(a: &ComplexMatrix, b: &ComplexMatrix, k: usize, space: Space) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), got: b.n() });
    }
    crate::error::check_k(k, a.n())?;
    if space == Space::Hn {
        a.require_hermitian()?;
        b.require_hermitian()?;
    }
    Ok(())
}

fn certificate(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    mu: Complex64,
    projection: Projection,
    w_a: f64,
    w_b: f64,
) -> ParallelCertificate {
    let tr_ap = projection.trace_with(a);
    let tr_bp = projection.trace_with(b);
    ParallelCertificate { mu, projection, w_a, w_b, tr_ap, tr_bp }
}

/// Attaining projection of `A + μB`, taken from the top-`k` eigenspace of
/// its real part at `theta`. When that eigenspace is degenerate nearby
/// angles are tried and the projection with the best attainment is kept.
fn certify_at(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    k: usize,
    mu: Complex64,
    theta: f64,
    w_a: f64,
    w_b: f64,
) -> Result<ParallelCertificate> {
    let sum = a + &b.scale(mu);
    let mut best: Option<ParallelCertificate> = None;
    for offset in [0.0, 1e-7, -1e-7, 1e-5, -1e-5, 1e-3, -1e-3] {
        let e = hermitian_eig(&sum.re_part(theta + offset))?;
        let top = projection_from_topk_with_tol(&e, k, 0.0)?;
        let cert = certificate(a, b, mu, top.projection, w_a, w_b);
        let better = best.as_ref().is_none_or(|c| cert.attainment_error() < c.attainment_error());
        if better {
            best = Some(cert);
        }
        let err = best.as_ref().map_or(f64::INFINITY, |c| c.attainment_error());
        if !top.degenerate || err <= 1e-12 * (1.0 + w_a + w_b) {
            break;
        }
    }
    Ok(best.expect("at least one angle tried"))
}

fn thin(angles: &[f64], cap: usize) -> Vec<f64> {
    if angles.len() <= cap {
        return angles.to_vec();
    }
    let stride = angles.len().div_ceil(cap);
    angles.iter().step_by(stride).copied().collect()
}

const MAX_ANGLES: usize = 64;

pub fn is_parallel(a: &ComplexMatrix, b: &ComplexMatrix, k: usize, space: Space, tol: f64) -> Result<Verdict> {
    check_pair(a, b, k, space)?;
    match space {
        Space::Hn => hermitian_verdict(a, b, k, tol, &[1.0, -1.0]),
        Space::Mn => complex_parallel(a, b, k, tol),
    }
}

pub fn is_tea(a: &ComplexMatrix, b: &ComplexMatrix, k: usize, space: Space, tol: f64) -> Result<Verdict> {
    check_pair(a, b, k, space)?;
    match space {
        Space::Hn => hermitian_verdict(a, b, k, tol, &[1.0]),
        Space::Mn => {
            let opts = RadiusOptions::default();
            let wa = radius_value(a, k)?;
            let wb = radius_value(b, k)?;
            let r = radius_with(&(a + b), k, &opts)?;
            let one = Complex64::new(1.0, 0.0);
            let cert = certify_at(a, b, k, one, r.theta_star, wa, wb)?;
            Ok(verdict(wa + wb - r.value, tol * (1.0 + wa + wb), cert))
        }
    }
}

fn hermitian_verdict(a: &ComplexMatrix, b: &ComplexMatrix, k: usize, tol: f64, signs: &[f64]) -> Result<Verdict> {
    let (wa, _) = hermitian_radius(a, k)?;
    let (wb, _) = hermitian_radius(b, k)?;
    let mut best: Option<(f64, f64, Projection)> = None;
    for &s in signs {
        let (w, p) = hermitian_radius(&(a + &b.scale_real(s)), k)?;
        if best.as_ref().is_none_or(|(bw, _, _)| w > *bw) {
            best = Some((w, s, p));
        }
    }
    let (w, s, p) = best.expect("non-empty sign list");
    let cert = certificate(a, b, Complex64::new(s, 0.0), p, wa, wb);
    Ok(verdict(wa + wb - w, tol * (1.0 + wa + wb), cert))
}

fn complex_parallel(a: &ComplexMatrix, b: &ComplexMatrix, k: usize, tol: f64) -> Result<Verdict> {
    let opts = RadiusOptions::default();
    let pa = support_profile(a, k, &opts);
    let pb = support_profile(b, k, &opts);
    let (wa, wb) = (pa.value, pb.value);
    let threshold = tol * (1.0 + wa + wb);

    let alphas = thin(&pa.angles, MAX_ANGLES);
    let betas = thin(&pb.angles, MAX_ANGLES);
    let parts_a: Vec<ComplexMatrix> = alphas.iter().map(|&t| a.re_part(t)).collect();
    let parts_b: Vec<ComplexMatrix> = betas.iter().map(|&t| b.re_part(t)).collect();
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for (ra, &al) in parts_a.iter().zip(&alphas) {
        for (rb, &be) in parts_b.iter().zip(&betas) {
            let g = top_sum(&(ra + rb), k);
            if g > best.0 {
                best = (g, al, be);
            }
        }
    }
    let (mut value, alpha, beta) = best;
    let mut phi = beta - alpha;
    let mut theta = alpha;

    if wa + wb - value > threshold / 10.0 && (pa.plateau || pb.plateau) {
        // Plateau angles come from the grid; polish the rotation directly.
        let step = TAU / opts.grid as f64;
        let mut objective =
            |p: f64| radius_value(&(a + &b.scale(Complex64::from_polar(1.0, p))), k).unwrap_or(f64::NEG_INFINITY);
        let (p, v) = golden_max(&mut objective, phi - step, phi + step, 1e-9);
        if v > value {
            let r = radius_with(&(a + &b.scale(Complex64::from_polar(1.0, p))), k, &opts)?;
            value = v;
            phi = p;
            theta = r.theta_star;
        }
    }

    let mu = Complex64::from_polar(1.0, phi.rem_euclid(TAU));
    let cert = certify_at(a, b, k, mu, theta, wa, wb)?;
    Ok(verdict(wa + wb - value, threshold, cert))
}

/// Settings for the direct μ-grid evaluation of the definition.
#[derive(Clone, Copy, Debug)]
pub struct GridRoute {
    pub mu_grid: usize,
    pub theta_grid: usize,
    pub mu_width: f64,
}

impl Default for GridRoute {
    fn default() -> Self {
        Self { mu_grid: 1024, theta_grid: 720, mu_width: 1e-9 }
    }
}

/// Parallel test by maximizing `φ ↦ w_k(A + e^{iφ}B)` over a grid of `φ`
/// with golden-section refinement. Slow; the reference for [`is_parallel`].
pub fn is_parallel_by_grid(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    k: usize,
    space: Space,
    tol: f64,
    route: GridRoute,
) -> Result<Verdict> {
    check_pair(a, b, k, space)?;
    if space == Space::Hn {
        return hermitian_verdict(a, b, k, tol, &[1.0, -1.0]);
    }
    let opts = RadiusOptions { grid: route.theta_grid, ..RadiusOptions::default() };
    let wa = radius_with(a, k, &opts)?.value;
    let wb = radius_with(b, k, &opts)?.value;
    let rotated = |p: f64| a + &b.scale(Complex64::from_polar(1.0, p));
    let mut search = GridSearch::new(route.mu_grid, route.mu_width);
    search.max_refined = 4;
    let maxima =
        periodic_maxima(&mut |p| radius_with(&rotated(p), k, &opts).map_or(f64::NEG_INFINITY, |r| r.value), search);
    let phi = maxima[0].theta;
    let r = radius_with(&rotated(phi), k, &opts)?;
    let mu = Complex64::from_polar(1.0, phi);
    let cert = certify_at(a, b, k, mu, r.theta_star, wa, wb)?;
    Ok(verdict(wa + wb - r.value, tol * (1.0 + wa + wb), cert))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeReport {
    pub member: bool,
    pub attained_trace: Complex64,
    pub block_residual: f64,
    pub radius: f64,
}

/// Off-diagonal blocks `(B_12, B_21)` of `B` in coordinates adapted to `P`.
fn off_diagonal_blocks(b: &ComplexMatrix, p: &Projection) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let (n, k) = (p.n(), p.rank());
    let u = p.completion();
    let local = u.adjoint() * b.as_dmatrix() * &u;
    (local.view((0, k), (k, n - k)).into_owned(), local.view((k, 0), (n - k, k)).into_owned())
}

pub fn membership_s(b: &ComplexMatrix, p: &Projection, space: Space, tol: f64) -> Result<ConeReport> {
    if b.n() != p.n() {
        return Err(Error::DimensionMismatch { expected: p.n(), got: b.n() });
    }
    let k = p.rank();
    if space == Space::Hn {
        b.require_hermitian()?;
    }
    let w = match space {
        Space::Hn => hermitian_radius(b, k)?.0,
        Space::Mn => radius_value(b, k)?,
    };
    let attained_trace = p.trace_with(b);
    let (b12, b21) = off_diagonal_blocks(b, p);
    let block_residual = match space {
        Space::Mn => (b21 + b12.adjoint()).norm(),
        Space::Hn => b12.norm(),
    };
    let scale = tol * (1.0 + w);
    let member =
        (attained_trace - Complex64::new(w, 0.0)).norm() <= scale && block_residual <= tol * (1.0 + b.frobenius());
    Ok(ConeReport { member, attained_trace, block_residual, radius: w })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Recipe {
    Case1,
    Case2,
    Case3,
    Mix,
}

impl std::str::FromStr for Recipe {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "case1" => Ok(Recipe::Case1),
            "case2" => Ok(Recipe::Case2),
            "case3" => Ok(Recipe::Case3),
            "mix" => Ok(Recipe::Mix),
            _ => Err(Error::BadRecipe(s.to_string())),
        }
    }
}

/// Recipes usable for `(space, k)`, excluding `Mix`.
pub fn base_recipes(space: Space, k: usize) -> Vec<Recipe> {
    match space {
        Space::Hn => vec![Recipe::Case1],
        Space::Mn if k > 1 => vec![Recipe::Case1, Recipe::Case2, Recipe::Case3],
        Space::Mn => vec![Recipe::Case1, Recipe::Case2],
    }
}

/// Brings a matrix given in `P`-adapted coordinates back to the standard basis.
fn from_local(p: &Projection, local: ComplexMatrix) -> ComplexMatrix {
    let u = ComplexMatrix::wrap(p.completion());
    local.conjugate_by(&u.adjoint())
}

pub fn sample_s(p: &Projection, space: Space, recipe: Recipe, rng: &mut SeededRng) -> Result<ComplexMatrix> {
    let (n, k) = (p.n(), p.rank());
    match recipe {
        Recipe::Case1 => {
            let g = ginibre(k, rng);
            let w = (&g * &g.adjoint()).hermitian_part().scale_real(1.0 / k as f64);
            let tail = match space {
                Space::Mn => ginibre(n - k, rng),
                Space::Hn => gue(n - k, rng),
            };
            let shift = tail.spectral_norm() + rng.uniform_in(0.1, 1.0);
            let head = &w + &ComplexMatrix::identity(k).scale_real(shift);
            Ok(from_local(p, head.direct_sum(&tail)))
        }
        Recipe::Case2 => {
            let row = rng.below(k);
            let col = k + rng.below(n - k);
            let mu = rng.unimodular() * 0.5;
            case2_sample(p, space, row, col, mu)
        }
        Recipe::Case3 => {
            let c = ginibre(k, rng);
            let c = &c - &ComplexMatrix::identity(k).scale(c.trace() / k as f64);
            case3_sample(p, space, &c)
        }
        Recipe::Mix => {
            let options = base_recipes(space, k);
            let count = 2 + rng.below(3);
            let mut acc = ComplexMatrix::zeros(n);
            for _ in 0..count {
                let part = sample_s(p, space, options[rng.below(options.len())], rng)?;
                acc = &acc + &part.scale_real(rng.uniform_in(0.05, 1.0));
            }
            Ok(acc)
        }
    }
}

/// `(I_k ⊕ 0) + i(μE_{row,col} + μ̄E_{col,row})` in `P`-coordinates, with
/// `row < k ≤ col` and `|μ| = 1/2`.
pub fn case2_sample(p: &Projection, space: Space, row: usize, col: usize, mu: Complex64) -> Result<ComplexMatrix> {
    let (n, k) = (p.n(), p.rank());
    if space != Space::Mn {
        return Err(Error::BadRecipe("case2 needs the Mn space".into()));
    }
    if row >= k || col < k || col >= n || (mu.norm() - 0.5).abs() > 1e-12 {
        return Err(Error::BadRecipe(format!("case2 needs row < {k} <= col < {n} and |mu| = 1/2")));
    }
    let i = Complex64::i();
    let local = ComplexMatrix::from_fn(n, |r, c| {
        let mut z = if r == c && r < k { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
        if (r, c) == (row, col) {
            z += i * mu;
        }
        if (r, c) == (col, row) {
            z += i * mu.conj();
        }
        z
    });
    Ok(from_local(p, local))
}

/// `(I_k + εC) ⊕ 0` in `P`-coordinates with `tr C = 0` and `ε = 1/(2k‖C‖)`.
pub fn case3_sample(p: &Projection, space: Space, c: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (n, k) = (p.n(), p.rank());
    if space != Space::Mn {
        return Err(Error::BadRecipe("case3 needs the Mn space".into()));
    }
    if k < 2 || c.n() != k {
        return Err(Error::BadRecipe(format!("case3 needs k > 1 and a {k}x{k} block")));
    }
    let norm = c.spectral_norm();
    if c.trace().norm() > 1e-12 * (1.0 + norm) || norm == 0.0 {
        return Err(Error::BadRecipe("case3 needs a nonzero trace-zero block".into()));
    }
    let eps = 1.0 / (2.0 * k as f64 * norm);
    let head = &ComplexMatrix::identity(k) + &c.scale_real(eps);
    Ok(from_local(p, head.direct_sum(&ComplexMatrix::zeros(n - k))))
}

#[derive(Clone, Debug)]
pub struct ScalarTest {
    pub scalar: bool,
    pub witness: Option<Projection>,
    pub probes: usize,
}

const MAX_COORDINATE_PROBES: usize = 64;

fn k_subsets(n: usize, k: usize, cap: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        if out.len() == cap {
            return out;
        }
        let Some(i) = (0..k).rev().find(|&i| current[i] < n - k + i) else {
            return out;
        };
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// Whether `A` is parallel to every probed rank-`k` projection: the
/// coordinate projections first, then `trials` random ones.
pub fn scalar_test(
    a: &ComplexMatrix,
    k: usize,
    space: Space,
    trials: usize,
    tol: f64,
    rng: &mut SeededRng,
) -> Result<ScalarTest> {
    let n = a.n();
    crate::error::check_k(k, n)?;
    let mut probes = 0;
    let mut check = |p: Projection| -> Result<Option<Projection>> {
        probes += 1;
        let v = is_parallel(a, &p.matrix(), k, space, tol)?;
        Ok((!v.holds).then_some(p))
    };
    for subset in k_subsets(n, k, MAX_COORDINATE_PROBES) {
        if let Some(w) = check(Projection::coordinate(n, &subset)?)? {
            return Ok(ScalarTest { scalar: false, witness: Some(w), probes });
        }
    }
    for _ in 0..trials {
        if let Some(w) = check(random_projection(n, k, rng)?)? {
            return Ok(ScalarTest { scalar: false, witness: Some(w), probes });
        }
    }
    Ok(ScalarTest { scalar: true, witness: None, probes })
}

/// Numeric rank threshold relative to the largest singular value.
pub const RANK_TOL: f64 = 1e-8;

/// Numeric rank of the real coordinate vectors given as rows.
pub fn numeric_rank(rows: &[nalgebra::DVector<f64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let d = rows[0].len();
    let m = DMatrix::from_fn(rows.len(), d, |i, j| rows[i][j]);
    let sv = m.singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_TOL * max).count()
}

/// A draw spread over the whole span of `S(P)`: a positive combination of
/// one case-1 draw, a case-2 draw at every off-diagonal position and a
/// case-3 draw (on `M_n`, where available).
fn spanning_sample(p: &Projection, space: Space, rng: &mut SeededRng) -> Result<ComplexMatrix> {
    let (n, k) = (p.n(), p.rank());
    let mut acc = sample_s(p, space, Recipe::Case1, rng)?.scale_real(rng.uniform_in(0.1, 1.0));
    if space == Space::Mn {
        for row in 0..k {
            for col in k..n {
                let b = case2_sample(p, space, row, col, rng.unimodular() * 0.5)?;
                acc = &acc + &b.scale_real(rng.uniform_in(0.1, 1.0));
            }
        }
        if k > 1 {
            let b = sample_s(p, space, Recipe::Case3, rng)?;
            acc = &acc + &b.scale_real(rng.uniform_in(0.1, 1.0));
        }
    }
    Ok(acc)
}

/// Real dimension of the span of `e^{iθ} S(P)` over the given cones. On
/// `H_n` the angle only contributes its sign, `cos θ ≥ 0` or not.
pub fn span_dimension(cones: &[(Projection, f64)], space: Space, samples: usize, rng: &mut SeededRng) -> Result<usize> {
    let mut rows = Vec::with_capacity(cones.len() * samples);
    for (p, theta) in cones {
        for _ in 0..samples {
            let b = spanning_sample(p, space, rng)?;
            let rotated = match space {
                Space::Mn => b.scale(Complex64::from_polar(1.0, *theta)),
                Space::Hn => b.scale_real(if theta.cos() >= 0.0 { 1.0 } else { -1.0 }),
            };
            rows.push(encode(&rotated, space)?);
        }
    }
    Ok(numeric_rank(&rows))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointedOutcome {
    /// `A + tB` is nonzero and lies in neither `S(P)` nor `-S(P)`.
    Pointed,
    /// `A + tB ≈ 0` and `A`, `B` are linearly dependent.
    Dependent,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointedReport {
    pub trials: usize,
    pub pointed: usize,
    pub dependent: usize,
    pub failed: usize,
}

impl PointedReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

fn require_n2k(p: &Projection) -> Result<()> {
    let (n, k) = (p.n(), p.rank());
    if n != 2 * k {
        return Err(Error::RequiresN2k { n, k });
    }
    Ok(())
}

/// Checks one pair `A, B ∈ S(P)` on `H_n`, `n = 2k`: with
/// `t = -tr(AP)/tr(BP)`, the matrix `A + tB` has `tr((A + tB)P) = 0`.
pub fn pointed_pair(p: &Projection, a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<PointedOutcome> {
    require_n2k(p)?;
    let t = -p.trace_with(a).re / p.trace_with(b).re;
    let c = a + &b.scale_real(t);
    let scale = 1.0 + a.frobenius() + b.frobenius();
    let w = hermitian_radius(&c, p.rank())?.0;
    let plus = membership_s(&c, p, Space::Hn, tol)?;
    let minus = membership_s(&c.scale_real(-1.0), p, Space::Hn, tol)?;
    if w > tol * scale && !plus.member && !minus.member {
        return Ok(PointedOutcome::Pointed);
    }
    let dependent = numeric_rank(&[encode(a, Space::Hn)?, encode(b, Space::Hn)?]) < 2;
    if c.frobenius() <= 1e-9 * scale && dependent {
        Ok(PointedOutcome::Dependent)
    } else {
        Ok(PointedOutcome::Failed)
    }
}

pub fn pointed_cone_check(p: &Projection, trials: usize, tol: f64, rng: &mut SeededRng) -> Result<PointedReport> {
    require_n2k(p)?;
    let mut report = PointedReport { trials, pointed: 0, dependent: 0, failed: 0 };
    for _ in 0..trials {
        let a = sample_s(p, Space::Hn, Recipe::Case1, rng)?;
        let b = sample_s(p, Space::Hn, Recipe::Case1, rng)?;
        match pointed_pair(p, &a, &b, tol)? {
            PointedOutcome::Pointed => report.pointed += 1,
            PointedOutcome::Dependent => report.dependent += 1,
            PointedOutcome::Failed => report.failed += 1,
        }
    }
    Ok(report)
}
