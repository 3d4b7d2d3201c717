//! Random matrix ensembles.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::ComplexMatrix;
use super::projection::Projection;
use super::rng::SeededRng;
use crate::error::{check_k, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    Ginibre,
    GueHermitian,
    HaarUnitary,
    RankKProjection,
}

#[derive(Clone, Debug)]
pub enum Sample {
    Matrix(ComplexMatrix),
    Projection(Projection),
}

/// Seeded entry point over all ensembles.
pub fn random_sample(kind: SampleKind, n: usize, k: Option<usize>, seed: u64) -> Result<Sample> {
    if n == 0 || n > 64 {
        return Err(Error::BadDimension(format!("n = {n} must lie in 1..=64")));
    }
    let mut rng = SeededRng::new(seed);
    Ok(match kind {
        SampleKind::Ginibre => Sample::Matrix(ginibre(n, &mut rng)),
        SampleKind::GueHermitian => Sample::Matrix(gue(n, &mut rng)),
        SampleKind::HaarUnitary => Sample::Matrix(haar_unitary(n, &mut rng)),
        SampleKind::RankKProjection => {
            let k = k.ok_or_else(|| Error::BadDimension("rank_k_projection needs k".into()))?;
            check_k(k, n).map_err(|_| Error::BadDimension(format!("need 1 <= k < n, got k={k}, n={n}")))?;
            Sample::Projection(random_projection(n, k, &mut rng)?)
        }
    })
}

/// i.i.d. standard complex Gaussian entries.
pub fn ginibre(n: usize, rng: &mut SeededRng) -> ComplexMatrix {
    // Row-major fill so the stream order does not depend on storage layout.
    let mut data = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            data[(i, j)] = rng.complex_normal();
        }
    }
    ComplexMatrix::wrap(data)
}

/// `(G + G*) / 2` for a Ginibre `G`.
pub fn gue(n: usize, rng: &mut SeededRng) -> ComplexMatrix {
    ginibre(n, rng).hermitian_part()
}

/// Real symmetric Gaussian matrix (a GOE-type sample), tagged Hermitian.
pub fn goe(n: usize, rng: &mut SeededRng) -> ComplexMatrix {
    let mut data = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            data[(i, j)] = Complex64::new(rng.normal(), 0.0);
        }
    }
    ComplexMatrix::wrap(data).hermitian_part()
}

/// Haar unitary: Householder QR of a Ginibre sample, with the columns of `Q`
/// rephased so that `R` has a positive diagonal.
pub fn haar_unitary(n: usize, rng: &mut SeededRng) -> ComplexMatrix {
    let g = ginibre(n, rng).into_dmatrix();
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    ComplexMatrix::wrap(q)
}

/// First `k` columns of a Haar unitary.
pub fn random_projection(n: usize, k: usize, rng: &mut SeededRng) -> Result<Projection> {
    check_k(k, n)?;
    let u = haar_unitary(n, rng).into_dmatrix();
    Projection::from_basis(u.columns(0, k).into_owned())
}

/// `U diag(z) U*` with complex Gaussian eigenvalues `z`.
pub fn random_normal(n: usize, rng: &mut SeededRng) -> (ComplexMatrix, Vec<Complex64>) {
    let eig: Vec<Complex64> = (0..n).map(|_| rng.complex_normal()).collect();
    let u = haar_unitary(n, rng);
    let d = ComplexMatrix::from_diagonal(&eig);
    (d.conjugate_by(&u.adjoint()), eig)
}
