//! Real-linear maps on `M_n` / `H_n`, the canonical preserver forms, and
//! numerical probes of whether a map preserves parallel or TEA pairs.

use std::f64::consts::SQRT_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_k, Error, Result};
use crate::knum::{hermitian_interval, radius_in};
use crate::linalg::coords::basis_element;
use crate::linalg::sample::{ginibre, gue, haar_unitary, random_projection};
use crate::linalg::{decode, encode, hermitian_eig, ComplexMatrix, Projection, SeededRng, Space};
use crate::parallel::{
    base_recipes, is_parallel, is_parallel_by_grid, is_tea, numeric_rank, sample_s, GridRoute, Recipe, Verdict,
};

/// Dense real matrix of a real-linear map in the `encode` coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct RealLinearMap {
    space: Space,
    n: usize,
    matrix: DMatrix<f64>,
}

impl RealLinearMap {
    pub fn new(space: Space, n: usize, matrix: DMatrix<f64>) -> Result<Self> {
        let d = space.real_dim(n);
        if n == 0 || matrix.shape() != (d, d) {
            return Err(Error::BadDimension(format!(
                "map on {space} with n = {n} needs a {d}x{d} matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("map matrix has non-finite entries".into()));
        }
        Ok(Self { space, n, matrix })
    }

    /// Tabulates `f` on the coordinate basis.
    pub fn from_fn(space: Space, n: usize, mut f: impl FnMut(&ComplexMatrix) -> ComplexMatrix) -> Result<Self> {
        let d = space.real_dim(n);
        let mut matrix = DMatrix::zeros(d, d);
        for j in 0..d {
            let mut image = f(&basis_element(n, j, space));
            if space == Space::Hn {
                image = image.into_hermitian()?;
            }
            matrix.set_column(j, &encode(&image, space)?);
        }
        Self::new(space, n, matrix)
    }

    pub fn identity(space: Space, n: usize) -> Self {
        let d = space.real_dim(n);
        Self { space, n, matrix: DMatrix::identity(d, d) }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<DVector<f64>> = self.matrix.row_iter().map(|r| r.transpose()).collect();
        numeric_rank(&rows)
    }

    pub fn is_bijective(&self) -> bool {
        self.rank() == self.matrix.nrows()
    }

    pub fn require_bijective(&self) -> Result<()> {
        let (rank, dim) = (self.rank(), self.matrix.nrows());
        if rank == dim {
            Ok(())
        } else {
            Err(Error::NotBijective { rank, dim })
        }
    }

    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: a.n() });
        }
        decode(&(&self.matrix * encode(a, self.space)?), self.space)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.require_bijective()?;
        let inv = self
            .matrix
            .clone()
            .try_inverse()
            .ok_or(Error::NotBijective { rank: self.rank(), dim: self.matrix.nrows() })?;
        Ok(Self { matrix: inv, ..self.clone() })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.space != other.space || self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        Ok(Self { matrix: &self.matrix * &other.matrix, ..self.clone() })
    }

    /// Largest singular value of `self - other`; the coordinates are
    /// orthonormal for the Frobenius inner product.
    pub fn operator_distance(&self, other: &Self) -> f64 {
        (&self.matrix - &other.matrix).singular_values().iter().copied().fold(0.0, f64::max)
    }

    pub fn operator_norm(&self) -> f64 {
        self.matrix.singular_values().iter().copied().fold(0.0, f64::max)
    }
}

pub fn apply_map(t: &RealLinearMap, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    t.apply(a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Conjugation,
    TransposeConjugation,
    TraceAdjustConjugation,
    TraceAdjustTransposeConjugation,
    HermTraceZeroScaled,
    HermTraceZeroScaledTranspose,
    HermUnitalTracePreserving2,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Conjugation,
        Family::TransposeConjugation,
        Family::TraceAdjustConjugation,
        Family::TraceAdjustTransposeConjugation,
        Family::HermTraceZeroScaled,
        Family::HermTraceZeroScaledTranspose,
        Family::HermUnitalTracePreserving2,
    ];

    fn transposes(self) -> bool {
        matches!(
            self,
            Family::TransposeConjugation
                | Family::TraceAdjustTransposeConjugation
                | Family::HermTraceZeroScaledTranspose
        )
    }

    /// Whether the family exists for `(space, n, k)`.
    pub fn admissible(self, space: Space, n: usize, k: usize) -> bool {
        match self {
            Family::Conjugation | Family::TransposeConjugation => true,
            Family::TraceAdjustConjugation | Family::TraceAdjustTransposeConjugation => {
                n == 2 * k && (space == Space::Hn || n > 2)
            }
            Family::HermTraceZeroScaled | Family::HermTraceZeroScaledTranspose => space == Space::Hn && n == 2 * k,
            Family::HermUnitalTracePreserving2 => space == Space::Hn && n == 2,
        }
    }
}

/// A canonical preserver.
///
/// * `Conjugation`: `A ↦ s U*AU`; `TransposeConjugation`: `A ↦ s U*AᵗU`.
/// * `TraceAdjust*`: `A ↦ s((tr A / k) I - U*A⁽ᵗ⁾U)`.
/// * `HermTraceZeroScaled*`: `A ↦ a (tr A / n) I + s U*(A - (tr A / n) I)⁽ᵗ⁾U`.
/// * `HermUnitalTracePreserving2`: `A ↦ a (tr A / 2) I + L(A - (tr A / 2) I)`
///   where `L` acts on trace-zero coordinates by `trace_zero_action`.
///
/// Here `s = scalar` and `a = identity_scale`.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalForm {
    pub family: Family,
    pub space: Space,
    pub u: ComplexMatrix,
    pub scalar: Complex64,
    pub identity_scale: Option<f64>,
    pub trace_zero_action: Option<DMatrix<f64>>,
}

const UNITARY_TOL: f64 = 1e-12;

impl CanonicalForm {
    pub fn new(family: Family, space: Space, u: ComplexMatrix, scalar: Complex64) -> Self {
        Self { family, space, u, scalar, identity_scale: None, trace_zero_action: None }
    }

    pub fn validate(&self, k: usize) -> Result<()> {
        let n = self.u.n();
        check_k(k, n)?;
        let bad = |msg: String| Err(Error::FormConstraintViolated(msg));
        let defect = (&(&self.u.adjoint() * &self.u) - &ComplexMatrix::identity(n)).max_abs();
        if !(defect <= UNITARY_TOL * n as f64) {
            return bad(format!("U is not unitary (defect {defect:e})"));
        }
        if self.family != Family::HermUnitalTracePreserving2 && !(self.scalar.norm() > 0.0) {
            return bad("scalar must be nonzero".into());
        }
        if self.space == Space::Hn && self.scalar.im.abs() > 1e-14 * self.scalar.norm() {
            return bad("scalar must be real on Hn".into());
        }
        if !self.family.admissible(self.space, n, k) {
            return bad(format!("{:?} is not admissible for {} with (n, k) = ({n}, {k})", self.family, self.space));
        }
        let needs_identity_scale = matches!(
            self.family,
            Family::HermTraceZeroScaled | Family::HermTraceZeroScaledTranspose | Family::HermUnitalTracePreserving2
        );
        if needs_identity_scale {
            match self.identity_scale {
                Some(a) if a != 0.0 && a.is_finite() => {}
                _ => return bad("identity_scale must be a nonzero real".into()),
            }
        }
        if self.family == Family::HermUnitalTracePreserving2 {
            let Some(m) = &self.trace_zero_action else {
                return bad("trace_zero_action is required".into());
            };
            if m.shape() != (3, 3) || m.clone().try_inverse().is_none() || m.determinant().abs() < 1e-12 {
                return bad("trace_zero_action must be an invertible 3x3 matrix".into());
            }
        }
        Ok(())
    }

    /// Evaluates the form on one matrix.
    pub fn eval(&self, a: &ComplexMatrix, k: usize) -> ComplexMatrix {
        let n = a.n();
        let moved = |x: &ComplexMatrix| {
            let x = if self.family.transposes() { x.transpose() } else { x.clone() };
            x.conjugate_by(&self.u)
        };
        let id = ComplexMatrix::identity(n);
        let s = self.scalar;
        match self.family {
            Family::Conjugation | Family::TransposeConjugation => moved(a).scale(s),
            Family::TraceAdjustConjugation | Family::TraceAdjustTransposeConjugation => {
                (&id.scale(a.trace() / k as f64) - &moved(a)).scale(s)
            }
            Family::HermTraceZeroScaled | Family::HermTraceZeroScaledTranspose => {
                let mean = a.trace() / n as f64;
                let zero = a - &id.scale(mean);
                let a_scale = self.identity_scale.unwrap_or(1.0);
                &id.scale(mean * a_scale) + &moved(&zero).scale(s)
            }
            Family::HermUnitalTracePreserving2 => {
                let m = self.trace_zero_action.as_ref().expect("validated form");
                let mean = a.trace() / 2.0;
                let a_scale = self.identity_scale.unwrap_or(1.0);
                &id.scale(mean * a_scale) + &decode_trace_zero(&(m * encode_trace_zero(a)))
            }
        }
    }
}

/// Orthonormal coordinates of the trace-zero part of a `2x2` Hermitian
/// matrix: `((a11 - a22)/√2, √2 Re a12, √2 Im a12)`.
pub fn encode_trace_zero(a: &ComplexMatrix) -> DVector<f64> {
    let d = (a.get(0, 0).re - a.get(1, 1).re) / SQRT_2;
    let z = a.get(0, 1);
    DVector::from_vec(vec![d, SQRT_2 * z.re, SQRT_2 * z.im])
}

pub fn decode_trace_zero(v: &DVector<f64>) -> ComplexMatrix {
    let d = Complex64::new(v[0] / SQRT_2, 0.0);
    let z = Complex64::new(v[1], v[2]) / SQRT_2;
    ComplexMatrix::from_rows(&[vec![d, z], vec![z.conj(), -d]])
        .expect("2x2 rows")
        .into_hermitian()
        .expect("Hermitian by construction")
}

pub fn canonical_to_map(form: &CanonicalForm, n: usize, k: usize) -> Result<RealLinearMap> {
    if form.u.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: form.u.n() });
    }
    form.validate(k)?;
    RealLinearMap::from_fn(form.space, n, |a| form.eval(a, k))
}

/// `ι(A) = (tr A / k) I - A`, an involution when `n = 2k`.
pub fn trace_adjust(a: &ComplexMatrix, k: usize) -> ComplexMatrix {
    &ComplexMatrix::identity(a.n()).scale(a.trace() / k as f64) - a
}

/// Draws a random admissible instance of `family`.
pub fn random_form(family: Family, space: Space, n: usize, k: usize, rng: &mut SeededRng) -> Result<CanonicalForm> {
    if !family.admissible(space, n, k) {
        return Err(Error::FormConstraintViolated(format!("{family:?} not admissible at ({n}, {k}) on {space}")));
    }
    let u = haar_unitary(n, rng);
    let magnitude = rng.uniform_in(0.5, 2.0);
    let scalar = match space {
        Space::Mn => rng.unimodular() * magnitude,
        Space::Hn => Complex64::new(rng.sign() * magnitude, 0.0),
    };
    let mut form = CanonicalForm::new(family, space, u, scalar);
    match family {
        Family::HermTraceZeroScaled | Family::HermTraceZeroScaledTranspose => {
            // Keep |s / a| away from 1, where the form coincides with a
            // conjugation or trace-adjust form.
            let a = rng.sign() * rng.uniform_in(0.5, 2.0);
            let ratio = if rng.uniform() < 0.5 { rng.uniform_in(0.2, 0.7) } else { rng.uniform_in(1.5, 3.0) };
            form.identity_scale = Some(a);
            form.scalar = Complex64::new(a * ratio * rng.sign(), 0.0);
        }
        Family::HermUnitalTracePreserving2 => {
            form.identity_scale = Some(rng.sign() * rng.uniform_in(0.5, 2.0));
            form.scalar = Complex64::new(1.0, 0.0);
            let m = loop {
                let m = DMatrix::from_fn(3, 3, |_, _| rng.normal());
                let sv = m.singular_values();
                let (hi, lo) = (sv.max(), sv.min());
                if lo > 0.2 * hi {
                    break m;
                }
            };
            form.trace_zero_action = Some(m);
        }
        _ => {}
    }
    form.validate(k)?;
    Ok(form)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairMode {
    Parallel,
    Tea,
}

impl std::str::FromStr for PairMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "parallel" => Ok(PairMode::Parallel),
            "tea" | "TEA" => Ok(PairMode::Tea),
            _ => Err(Error::InvalidInput(format!("unknown mode {s}"))),
        }
    }
}

fn pair_verdict(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    k: usize,
    space: Space,
    mode: PairMode,
    tol: f64,
) -> Result<Verdict> {
    match mode {
        PairMode::Parallel => is_parallel(a, b, k, space, tol),
        PairMode::Tea => is_tea(a, b, k, space, tol),
    }
}

/// A pair that holds by construction: two draws from a shared `S(P)`, the
/// second rotated by a random unimodular (`±1` on `H_n`) in parallel mode.
fn constructed_pair(
    n: usize,
    k: usize,
    space: Space,
    mode: PairMode,
    rng: &mut SeededRng,
) -> Result<(Projection, ComplexMatrix, ComplexMatrix)> {
    let p = random_projection(n, k, rng)?;
    let mut recipes = base_recipes(space, k);
    recipes.push(Recipe::Mix);
    let a = sample_s(&p, space, recipes[rng.below(recipes.len())], rng)?;
    let mut b = sample_s(&p, space, recipes[rng.below(recipes.len())], rng)?;
    if mode == PairMode::Parallel && rng.uniform() < 0.5 {
        b = match space {
            Space::Mn => b.scale(rng.unimodular()),
            Space::Hn => b.scale_real(-1.0),
        };
    }
    Ok((p, a, b))
}

#[derive(Clone, Debug)]
pub struct PairFailure {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub image: Verdict,
}

#[derive(Clone, Debug)]
pub struct PreservationReport {
    pub trials: usize,
    pub checked: usize,
    pub discarded: usize,
    pub failures: Vec<PairFailure>,
}

impl PreservationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn preserves_pairs(
    t: &RealLinearMap,
    k: usize,
    mode: PairMode,
    trials: usize,
    tol: f64,
    rng: &mut SeededRng,
) -> Result<PreservationReport> {
    t.require_bijective()?;
    let (n, space) = (t.n(), t.space());
    check_k(k, n)?;
    let mut report = PreservationReport { trials, checked: 0, discarded: 0, failures: Vec::new() };
    for _ in 0..trials {
        let (_, a, b) = constructed_pair(n, k, space, mode, rng)?;
        let source = pair_verdict(&a, &b, k, space, mode, tol)?;
        if !source.holds || source.uncertain {
            report.discarded += 1;
            continue;
        }
        report.checked += 1;
        let (ta, tb) = (t.apply(&a)?, t.apply(&b)?);
        let image = pair_verdict(&ta, &tb, k, space, mode, tol)?;
        if !image.holds {
            report.failures.push(PairFailure { a, b, image });
        }
    }
    Ok(report)
}

fn random_in_space(space: Space, n: usize, rng: &mut SeededRng) -> ComplexMatrix {
    match space {
        Space::Mn => ginibre(n, rng),
        Space::Hn => gue(n, rng),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IsometryEstimate {
    pub isometry: bool,
    pub factor: f64,
    pub spread: f64,
}

pub const ISOMETRY_SPREAD: f64 = 1e-6;

/// Samples `w_k(T(A)) / w_k(A)`; a scalar multiple of an isometry has a
/// constant ratio.
pub fn is_scalar_isometry(t: &RealLinearMap, k: usize, trials: usize, rng: &mut SeededRng) -> Result<IsometryEstimate> {
    t.require_bijective()?;
    let (n, space) = (t.n(), t.space());
    let mut ratios = Vec::with_capacity(trials.max(1));
    for _ in 0..trials.max(1) {
        let a = random_in_space(space, n, rng);
        ratios.push(radius_in(&t.apply(&a)?, k, space)? / radius_in(&a, k, space)?);
    }
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let factor = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let spread = (hi - lo) / hi;
    Ok(IsometryEstimate { isometry: spread <= ISOMETRY_SPREAD, factor, spread })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralFlags {
    pub unital: bool,
    pub trace_preserving: bool,
    /// `None` on `H_n`.
    pub complex_linear: Option<bool>,
    pub trace_zero_invariant: bool,
    pub inverse_preserves_commutativity: bool,
}

pub const FLAG_TOL: f64 = 1e-8;

/// Trace-zero spanning set: off-diagonal basis elements and `E_11 - E_jj`.
fn trace_zero_spanning(n: usize, space: Space) -> Vec<ComplexMatrix> {
    let mut out = Vec::new();
    for j in 1..n {
        out.push(&ComplexMatrix::unit(n, 0, 0) - &ComplexMatrix::unit(n, j, j));
    }
    for i in n..space.real_dim(n) {
        let e = basis_element(n, i, space);
        if e.trace().norm() == 0.0 {
            out.push(e);
        }
    }
    if space == Space::Mn {
        let diag = out.clone();
        out.extend(diag.iter().take(n - 1).map(|e| e.scale(Complex64::i())));
    }
    out
}

pub fn structural_flags(t: &RealLinearMap, trials: usize, rng: &mut SeededRng) -> Result<StructuralFlags> {
    t.require_bijective()?;
    let (n, space) = (t.n(), t.space());
    let id = ComplexMatrix::identity(n);
    let unital = t.apply(&id)?.distance(&id) <= FLAG_TOL * n as f64;

    let basis: Vec<ComplexMatrix> = (0..space.real_dim(n)).map(|i| basis_element(n, i, space)).collect();
    let mut trace_preserving = true;
    for e in &basis {
        trace_preserving &= (t.apply(e)?.trace() - e.trace()).norm() <= FLAG_TOL;
    }

    let complex_linear = match space {
        Space::Hn => None,
        Space::Mn => {
            let mut ok = true;
            for e in &basis {
                let lhs = t.apply(&e.scale(Complex64::i()))?;
                let rhs = t.apply(e)?.scale(Complex64::i());
                ok &= lhs.distance(&rhs) <= FLAG_TOL * (1.0 + rhs.frobenius());
            }
            Some(ok)
        }
    };

    let mut trace_zero_invariant = true;
    for z in trace_zero_spanning(n, space) {
        let image = t.apply(&z)?;
        trace_zero_invariant &= image.trace().norm() <= FLAG_TOL * (1.0 + image.frobenius());
    }

    let inv = t.inverse()?;
    let mut commuting = true;
    for _ in 0..trials {
        let u = haar_unitary(n, rng);
        let x: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        let a = ComplexMatrix::from_real_diagonal(&x).conjugate_by(&u);
        let b = ComplexMatrix::from_real_diagonal(&y).conjugate_by(&u);
        let (ia, ib) = (inv.apply(&a)?, inv.apply(&b)?);
        commuting &= ia.commutator(&ib).frobenius() <= 1e-7 * (1.0 + ia.frobenius() * ib.frobenius());
    }

    Ok(StructuralFlags {
        unital,
        trace_preserving,
        complex_linear,
        trace_zero_invariant,
        inverse_preserves_commutativity: commuting,
    })
}

/// Tolerance of the per-image eigenvalue checks inside [`recover_form`];
/// the final operator-norm comparison is the real acceptance test.
const SHAPE_TOL: f64 = 1e-6;

/// Finds `U` with `f(A) = U*AU` or `U*AᵗU` for a complex-linear `f`.
fn recover_unitary(f: &dyn Fn(&ComplexMatrix) -> Result<ComplexMatrix>, n: usize) -> Option<(ComplexMatrix, bool)> {
    let mut ys: Vec<DVector<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let image = f(&ComplexMatrix::unit(n, j, j)).ok()?;
        if image.hermitian_defect() > SHAPE_TOL {
            return None;
        }
        let e = hermitian_eig(&image.hermitian_part()).ok()?;
        let rank_one = (e.values[0] - 1.0).abs() <= SHAPE_TOL && e.values[1..].iter().all(|v| v.abs() <= SHAPE_TOL);
        if !rank_one {
            return None;
        }
        ys.push(e.vectors.column(0).into_owned());
    }
    let image = f(&ComplexMatrix::unit(n, 0, 1)).ok()?;
    let x = image.as_dmatrix();
    let forward = (ys[0].adjoint() * x * &ys[1])[(0, 0)];
    let backward = (ys[1].adjoint() * x * &ys[0])[(0, 0)];
    let transpose = if (forward.norm() - 1.0).abs() <= SHAPE_TOL {
        false
    } else if (backward.norm() - 1.0).abs() <= SHAPE_TOL {
        true
    } else {
        return None;
    };
    for j in 1..n {
        let image = f(&ComplexMatrix::unit(n, 0, j)).ok()?;
        let x = image.as_dmatrix();
        let phase = if transpose {
            (ys[j].adjoint() * x * &ys[0])[(0, 0)]
        } else {
            (ys[0].adjoint() * x * &ys[j])[(0, 0)].conj()
        };
        if (phase.norm() - 1.0).abs() > SHAPE_TOL {
            return None;
        }
        ys[j] *= phase / phase.norm();
    }
    let y = DMatrix::from_fn(n, n, |r, c| ys[c][r]);
    Some((ComplexMatrix::from_dmatrix(y.adjoint()).ok()?, transpose))
}

/// `T(H) + i T(K)` for `A = H + iK`, the complex-linear extension of a map
/// on `H_n`.
fn complexified(t: &RealLinearMap) -> impl Fn(&ComplexMatrix) -> Result<ComplexMatrix> + '_ {
    move |a: &ComplexMatrix| match t.space() {
        Space::Mn => t.apply(a),
        Space::Hn => {
            let h = a.hermitian_part();
            let k = (a - &a.adjoint()).scale(Complex64::new(0.0, -0.5)).hermitian_part();
            Ok(&t.apply(&h)? + &t.apply(&k)?.scale(Complex64::i()))
        }
    }
}

fn verified(form: CanonicalForm, t: &RealLinearMap, k: usize, tol: f64) -> Option<CanonicalForm> {
    let candidate = canonical_to_map(&form, t.n(), k).ok()?;
    (candidate.operator_distance(t) <= tol * t.operator_norm().max(1.0)).then_some(form)
}

/// Recovers a canonical form of `t`, or `None` when `t` is not canonical.
///
/// Candidates are tried in the order conjugation, transpose conjugation,
/// trace-adjust, trace-zero-scaled, unital trace-preserving (`n = 2`), so a
/// map with several descriptions gets the first one.
pub fn recover_form(t: &RealLinearMap, k: usize, tol: f64) -> Option<CanonicalForm> {
    t.require_bijective().ok()?;
    let (n, space) = (t.n(), t.space());
    check_k(k, n).ok()?;
    let id = ComplexMatrix::identity(n);
    let t_id = t.apply(&id).ok()?;
    let s = t_id.trace() / n as f64;
    if t_id.distance(&id.scale(s)) > SHAPE_TOL * (1.0 + s.norm()) || s.norm() == 0.0 {
        return None;
    }
    let s = if space == Space::Hn { Complex64::new(s.re, 0.0) } else { s };
    let base = complexified(t);
    let normalized = |a: &ComplexMatrix| Ok(base(a)?.scale(s.inv()));

    let build = |family: Family, u: ComplexMatrix, transpose: bool, scalar: Complex64| {
        let family = match (family, transpose) {
            (Family::Conjugation, true) => Family::TransposeConjugation,
            (Family::TraceAdjustConjugation, true) => Family::TraceAdjustTransposeConjugation,
            (Family::HermTraceZeroScaled, true) => Family::HermTraceZeroScaledTranspose,
            (f, _) => f,
        };
        CanonicalForm::new(family, space, u, scalar)
    };

    if let Some((u, tr)) = recover_unitary(&normalized, n) {
        if let Some(form) = verified(build(Family::Conjugation, u, tr, s), t, k, tol) {
            return Some(form);
        }
    }

    if n == 2 * k && Family::TraceAdjustConjugation.admissible(space, n, k) {
        let adjusted = |a: &ComplexMatrix| normalized(&trace_adjust(a, k));
        if let Some((u, tr)) = recover_unitary(&adjusted, n) {
            if let Some(form) = verified(build(Family::TraceAdjustConjugation, u, tr, s), t, k, tol) {
                return Some(form);
            }
        }
    }

    if space == Space::Hn && n == 2 * k && n > 2 {
        // Unital after dividing by a = s; trace-zero part scaled by ±r.
        let x0 = &ComplexMatrix::unit(n, 0, 0) - &ComplexMatrix::unit(n, 1, 1);
        let r = normalized(&x0).ok()?.frobenius() / x0.frobenius();
        for sign in [-1.0, 1.0] {
            let c = sign * r;
            let rescaled = |a: &ComplexMatrix| -> Result<ComplexMatrix> {
                let mean = id.scale(a.trace() / n as f64);
                let image = normalized(a)?;
                Ok(&mean + &(&image - &mean).scale_real(1.0 / c))
            };
            if let Some((u, tr)) = recover_unitary(&rescaled, n) {
                let mut form = build(Family::HermTraceZeroScaled, u, tr, Complex64::new(c * s.re, 0.0));
                form.identity_scale = Some(s.re);
                if let Some(form) = verified(form, t, k, tol) {
                    return Some(form);
                }
            }
        }
    }

    if space == Space::Hn && n == 2 {
        let mut m = DMatrix::zeros(3, 3);
        for j in 0..3 {
            let mut e = DVector::zeros(3);
            e[j] = 1.0;
            let image = t.apply(&decode_trace_zero(&e)).ok()?;
            if image.trace().norm() > SHAPE_TOL * (1.0 + image.frobenius()) {
                return None;
            }
            m.set_column(j, &encode_trace_zero(&image));
        }
        let mut form =
            CanonicalForm::new(Family::HermUnitalTracePreserving2, space, id.clone(), Complex64::new(1.0, 0.0));
        form.identity_scale = Some(s.re);
        form.trace_zero_action = Some(m);
        return verified(form, t, k, tol);
    }
    None
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub source: Verdict,
    pub image: Verdict,
    pub evaluations: usize,
}

/// Search settings for [`find_violation`].
#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub budget: usize,
    pub tol: f64,
    /// Hill-climbing steps without improvement before a restart.
    pub patience: usize,
    pub confirm: GridRoute,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: 10_000,
            tol: crate::parallel::DEFAULT_TOL,
            patience: 20,
            confirm: GridRoute { mu_grid: 256, theta_grid: 360, mu_width: 1e-9 },
        }
    }
}

/// Small random unitary close to the identity.
fn near_identity_unitary(n: usize, step: f64, rng: &mut SeededRng) -> ComplexMatrix {
    let g = ginibre(n, rng).scale_real(step);
    let m = (&ComplexMatrix::identity(n) + &g).into_dmatrix();
    let qr = m.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    ComplexMatrix::from_dmatrix(q).expect("finite unitary")
}

fn relative_defect(v: &Verdict) -> f64 {
    v.defect / v.threshold
}

/// Searches for a constructed parallel (or TEA) pair whose image under `t`
/// is not one. Each image check counts as one evaluation.
pub fn find_violation(
    t: &RealLinearMap,
    k: usize,
    mode: PairMode,
    opts: SearchOptions,
    rng: &mut SeededRng,
) -> Result<Option<Violation>> {
    t.require_bijective()?;
    let (n, space) = (t.n(), t.space());
    check_k(k, n)?;
    let mut evaluations = 0;
    let image_of = |a: &ComplexMatrix, b: &ComplexMatrix| -> Result<Verdict> {
        pair_verdict(&t.apply(a)?, &t.apply(b)?, k, space, mode, opts.tol)
    };
    let confirm = |a: &ComplexMatrix, b: &ComplexMatrix, image: &Verdict| -> Result<bool> {
        if mode == PairMode::Tea || space == Space::Hn {
            return Ok(true);
        }
        let check = is_parallel_by_grid(&t.apply(a)?, &t.apply(b)?, k, space, opts.tol, opts.confirm)?;
        Ok(check.defect > 10.0 * image.threshold)
    };

    while evaluations < opts.budget {
        let (mut p, mut a, mut b) = constructed_pair(n, k, space, mode, rng)?;
        let mut current = image_of(&a, &b)?;
        evaluations += 1;
        let mut stale = 0;
        loop {
            if current.defect > 10.0 * current.threshold {
                let source = pair_verdict(&a, &b, k, space, mode, opts.tol)?;
                if source.holds && !source.uncertain && confirm(&a, &b, &current)? {
                    return Ok(Some(Violation { a, b, source, image: current, evaluations }));
                }
                break;
            }
            if evaluations >= opts.budget || stale >= opts.patience {
                break;
            }
            let step = 0.3 * rng.uniform();
            // Moves stay inside the cone: rotate (P, A, B) together, or add
            // a fresh element of S(P) to one side.
            let (np, na, nb) = match rng.below(3) {
                0 => {
                    let w = near_identity_unitary(n, step, rng);
                    (p.conjugated_by(&w), a.conjugate_by(&w), b.conjugate_by(&w))
                }
                1 => {
                    let extra = sample_s(&p, space, Recipe::Case1, rng)?;
                    (p.clone(), &a + &extra.scale_real(step), b.clone())
                }
                _ => {
                    let extra = sample_s(&p, space, Recipe::Case1, rng)?;
                    (p.clone(), a.clone(), &b + &extra.scale_real(step))
                }
            };
            let candidate = image_of(&na, &nb)?;
            evaluations += 1;
            if relative_defect(&candidate) > relative_defect(&current) {
                p = np;
                a = na;
                b = nb;
                current = candidate;
                stale = 0;
            } else {
                stale += 1;
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyCheck {
    pub family: Family,
    pub parallel_failures: usize,
    pub tea_failures: usize,
    pub checked: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PanelCheck {
    pub name: String,
    pub violated: bool,
    pub evaluations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitalRangeCheck {
    pub family: Family,
    pub samples: usize,
    pub worst_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HarnessReport {
    pub n: usize,
    pub k: usize,
    pub space: Space,
    pub families: Vec<FamilyCheck>,
    pub panel: Vec<PanelCheck>,
    pub unital_range: Vec<UnitalRangeCheck>,
    pub passed: bool,
}

/// Non-canonical bijections used to exercise the violation search.
pub fn non_canonical_panel(space: Space, n: usize, rng: &mut SeededRng) -> Result<Vec<(String, RealLinearMap)>> {
    let mut d = vec![1.0; n];
    d[0] = 2.0;
    let dm = ComplexMatrix::from_real_diagonal(&d);
    let dm_inv = ComplexMatrix::from_real_diagonal(&d.iter().map(|x| 1.0 / x).collect::<Vec<_>>());
    let mut panel = Vec::new();
    match space {
        Space::Mn => {
            panel.push(("d_similarity".to_string(), RealLinearMap::from_fn(space, n, |a| &(&dm * a) * &dm_inv)?))
        }
        Space::Hn => panel.push((
            "d_congruence".to_string(),
            RealLinearMap::from_fn(space, n, |a| (&(&dm * a) * &dm).hermitian_part())?,
        )),
    }
    panel.push(("trace_coupling".to_string(), trace_coupling(space, n)?));
    for eps in [0.05, 0.1, 0.5] {
        panel.push((format!("perturbed_identity_{eps}"), perturbed_identity(space, n, eps, rng)?));
    }
    Ok(panel)
}

/// `A ↦ A + tr(A) E_11`.
pub fn trace_coupling(space: Space, n: usize) -> Result<RealLinearMap> {
    let e11 = ComplexMatrix::unit(n, 0, 0);
    RealLinearMap::from_fn(space, n, |a| &a.clone() + &e11.scale(a.trace()))
}

/// `I + ε G` with `G` a Gaussian matrix normalized to operator norm 1.
pub fn perturbed_identity(space: Space, n: usize, eps: f64, rng: &mut SeededRng) -> Result<RealLinearMap> {
    let d = space.real_dim(n);
    let g = DMatrix::from_fn(d, d, |_, _| rng.normal());
    let norm = g.singular_values().max();
    let matrix = DMatrix::identity(d, d) + g * (eps / norm);
    RealLinearMap::new(space, n, matrix)
}

pub fn theorem_harness(
    n: usize,
    k: usize,
    space: Space,
    trials: usize,
    budget: usize,
    rng: &mut SeededRng,
) -> Result<HarnessReport> {
    check_k(k, n)?;
    let tol = crate::parallel::DEFAULT_TOL;
    let mut families = Vec::new();
    for family in Family::ALL.into_iter().filter(|f| f.admissible(space, n, k)) {
        let form = random_form(family, space, n, k, rng)?;
        let t = canonical_to_map(&form, n, k)?;
        let par = preserves_pairs(&t, k, PairMode::Parallel, trials, tol, rng)?;
        let tea = preserves_pairs(&t, k, PairMode::Tea, trials, tol, rng)?;
        families.push(FamilyCheck {
            family,
            parallel_failures: par.failures.len(),
            tea_failures: tea.failures.len(),
            checked: par.checked + tea.checked,
        });
    }

    let mut panel = Vec::new();
    for (name, t) in non_canonical_panel(space, n, rng)? {
        let opts = SearchOptions { budget, ..SearchOptions::default() };
        let found = find_violation(&t, k, PairMode::Tea, opts, rng)?;
        panel.push(PanelCheck {
            name,
            violated: found.is_some(),
            evaluations: found.map_or(budget, |v| v.evaluations),
        });
    }

    let mut unital_range = Vec::new();
    if space == Space::Mn {
        for family in [Family::Conjugation, Family::TransposeConjugation, Family::TraceAdjustConjugation] {
            if !family.admissible(space, n, k) {
                continue;
            }
            let mut form = random_form(family, space, n, k, rng)?;
            form.scalar = Complex64::new(1.0, 0.0);
            let t = canonical_to_map(&form, n, k)?;
            unital_range.push(unital_range_check(&t, family, k, trials.min(50), rng)?);
        }
    }

    let passed = families.iter().all(|f| f.parallel_failures == 0 && f.tea_failures == 0)
        && panel.iter().all(|p| p.violated)
        && unital_range.iter().all(|u| u.worst_error <= 1e-7);
    Ok(HarnessReport { n, k, space, families, panel, unital_range, passed })
}

/// For Hermitian `A` rescaled so that `W_k(A) = [-1, 1]`, measures how far
/// `W_k(T^{-1}(A))` is from `[-1, 1]`.
pub fn unital_range_check(
    t: &RealLinearMap,
    family: Family,
    k: usize,
    samples: usize,
    rng: &mut SeededRng,
) -> Result<UnitalRangeCheck> {
    let n = t.n();
    let inv = t.inverse()?;
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let h = gue(n, rng);
        let (lo, hi) = hermitian_interval(&h, k)?;
        let alpha = 2.0 / (hi - lo);
        let beta = -(hi + lo) / (hi - lo) / k as f64;
        let a = (&h.scale_real(alpha) + &ComplexMatrix::identity(n).scale_real(beta)).hermitian_part();
        let pre = inv.apply(&a)?;
        if pre.hermitian_defect() > 1e-9 {
            worst = f64::INFINITY;
            continue;
        }
        let (plo, phi) = hermitian_interval(&pre.hermitian_part(), k)?;
        worst = worst.max((plo + 1.0).abs()).max((phi - 1.0).abs());
    }
    Ok(UnitalRangeCheck { family, samples, worst_error: worst })
}
