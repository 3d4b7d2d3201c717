use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::eig::EigenSystem;
use super::matrix::ComplexMatrix;
use crate::error::{check_k, Error, Result};

/// Orthonormality tolerance for stored bases.
pub const BASIS_TOL: f64 = 1e-12;
/// Default spectral gap tolerance, relative to `λ_1 - λ_n`.
pub const DEFAULT_GAP_TOL: f64 = 1e-7;

/// Rank-`k` orthogonal projection stored as an `n x k` orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Projection {
    basis: DMatrix<Complex64>,
}

impl Projection {
    pub fn from_basis(basis: DMatrix<Complex64>) -> Result<Self> {
        let (n, k) = basis.shape();
        check_k(k, n)?;
        let gram = basis.adjoint() * &basis - DMatrix::<Complex64>::identity(k, k);
        let defect = gram.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(defect <= BASIS_TOL) {
            return Err(Error::InvalidInput(format!("projection basis is not orthonormal (defect {defect:e})")));
        }
        Ok(Self { basis })
    }

    /// Orthonormalizes the columns first (Gram–Schmidt, twice).
    pub fn from_spanning_columns(columns: DMatrix<Complex64>) -> Result<Self> {
        let (n, k) = columns.shape();
        check_k(k, n)?;
        let mut basis = DMatrix::<Complex64>::zeros(n, k);
        for j in 0..k {
            let mut v: DVector<Complex64> = columns.column(j).into_owned();
            for _ in 0..2 {
                for i in 0..j {
                    let b = basis.column(i);
                    let proj = b.dotc(&v);
                    v -= b * proj;
                }
            }
            let norm = v.norm();
            if norm < 1e-10 {
                return Err(Error::InvalidInput("projection columns are linearly dependent".into()));
            }
            basis.set_column(j, &(v / Complex64::new(norm, 0.0)));
        }
        Self::from_basis(basis)
    }

    /// Sum of `E_jj` over `indices`.
    pub fn coordinate(n: usize, indices: &[usize]) -> Result<Self> {
        let k = indices.len();
        check_k(k, n)?;
        let mut basis = DMatrix::zeros(n, k);
        for (col, &i) in indices.iter().enumerate() {
            if i >= n || indices[..col].contains(&i) {
                return Err(Error::InvalidInput(format!("bad coordinate index list {indices:?}")));
            }
            basis[(i, col)] = Complex64::new(1.0, 0.0);
        }
        Ok(Self { basis })
    }

    /// `I_k ⊕ 0_{n-k}`.
    pub fn leading(n: usize, k: usize) -> Result<Self> {
        Self::coordinate(n, &(0..k).collect::<Vec<_>>())
    }

    pub fn n(&self) -> usize {
        self.basis.nrows()
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<Complex64> {
        &self.basis
    }

    /// `P = V V*`, tagged Hermitian.
    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::wrap(&self.basis * self.basis.adjoint()).hermitian_part()
    }

    /// `tr(A P) = tr(V* A V)`.
    pub fn trace_with(&self, a: &ComplexMatrix) -> Complex64 {
        (self.basis.adjoint() * a.as_dmatrix() * &self.basis).trace()
    }

    /// `||P - Q||_F` computed from bases.
    pub fn distance(&self, other: &Projection) -> f64 {
        self.matrix().distance(&other.matrix())
    }

    /// Unitary `n x n` matrix whose first `k` columns are the stored basis.
    pub fn completion(&self) -> DMatrix<Complex64> {
        let (n, k) = self.basis.shape();
        let mut u = DMatrix::<Complex64>::zeros(n, n);
        u.view_mut((0, 0), (n, k)).copy_from(&self.basis);
        let mut filled = k;
        let mut used = vec![false; n];
        while filled < n {
            let mut best: Option<(usize, DVector<Complex64>, f64)> = None;
            for (i, taken) in used.iter().enumerate() {
                if *taken {
                    continue;
                }
                let mut v = DVector::<Complex64>::zeros(n);
                v[i] = Complex64::new(1.0, 0.0);
                for _ in 0..2 {
                    for c in 0..filled {
                        let b = u.column(c);
                        let proj = b.dotc(&v);
                        v -= b * proj;
                    }
                }
                let norm = v.norm();
                if best.as_ref().is_none_or(|(_, _, bn)| norm > *bn) {
                    best = Some((i, v, norm));
                }
            }
            let (i, v, norm) = best.expect("a standard basis vector remains");
            used[i] = true;
            u.set_column(filled, &(v / Complex64::new(norm, 0.0)));
            filled += 1;
        }
        u
    }

    /// `I - P` as a rank-`(n-k)` projection.
    pub fn complement(&self) -> Projection {
        let k = self.rank();
        let u = self.completion();
        Projection { basis: u.columns(k, self.n() - k).into_owned() }
    }

    /// Projection `U* P U`, i.e. basis `U* V`.
    pub fn conjugated_by(&self, u: &ComplexMatrix) -> Projection {
        Projection { basis: u.as_dmatrix().adjoint() * &self.basis }
    }
}

/// Top-`k` eigenprojection of an [`EigenSystem`].
#[derive(Clone, Debug)]
pub struct TopK {
    pub projection: Projection,
    pub degenerate: bool,
    pub gap: f64,
}

pub fn projection_from_topk(e: &EigenSystem, k: usize) -> Result<TopK> {
    projection_from_topk_with_tol(e, k, DEFAULT_GAP_TOL)
}

pub fn projection_from_topk_with_tol(e: &EigenSystem, k: usize, gap_tol: f64) -> Result<TopK> {
    let n = e.n();
    check_k(k, n)?;
    let spread = e.values[0] - e.values[n - 1];
    let gap = e.values[k - 1] - e.values[k];
    let basis = e.vectors.columns(0, k).into_owned();
    Ok(TopK { projection: Projection { basis }, degenerate: gap <= gap_tol * spread, gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eig::hermitian_eig;

    #[test]
    fn topk_of_diagonal() {
        let e = hermitian_eig(&ComplexMatrix::from_real_diagonal(&[3.0, 2.0, 1.0])).unwrap();
        let t = projection_from_topk(&e, 1).unwrap();
        assert!(!t.degenerate);
        assert!(t.projection.matrix().distance(&ComplexMatrix::unit(3, 0, 0)) < 1e-15);
    }

    #[test]
    fn topk_detects_repeated_eigenvalue() {
        let e = hermitian_eig(&ComplexMatrix::from_real_diagonal(&[2.0, 1.0, 1.0])).unwrap();
        assert!(projection_from_topk(&e, 2).unwrap().degenerate);
        assert!(!projection_from_topk(&e, 1).unwrap().degenerate);
    }

    #[test]
    fn topk_two_by_two() {
        let e = hermitian_eig(&ComplexMatrix::from_real_diagonal(&[1.0, -1.0])).unwrap();
        let t = projection_from_topk(&e, 1).unwrap();
        assert!(t.projection.matrix().distance(&ComplexMatrix::unit(2, 0, 0)) < 1e-15);
        assert!(matches!(projection_from_topk(&e, 2), Err(Error::BadK { .. })));
    }

    #[test]
    fn completion_is_unitary_and_extends_basis() {
        let cols = DMatrix::from_fn(4, 2, |i, j| Complex64::new((i + 2 * j) as f64, (i * j) as f64 - 1.0));
        let p = Projection::from_spanning_columns(cols).unwrap();
        let u = p.completion();
        let defect = (u.adjoint() * &u - DMatrix::<Complex64>::identity(4, 4)).norm();
        assert!(defect < 1e-13);
        assert_eq!(u.columns(0, 2).into_owned(), p.basis().clone());
        let sum = &p.matrix() + &p.complement().matrix();
        assert!(sum.distance(&ComplexMatrix::identity(4)) < 1e-13);
    }

    #[test]
    fn rejects_non_orthonormal_basis() {
        let b = DMatrix::from_element(3, 1, Complex64::new(1.0, 0.0));
        assert!(Projection::from_basis(b).is_err());
    }

    #[test]
    fn trace_with_matches_dense_product() {
        let p = Projection::coordinate(3, &[0, 2]).unwrap();
        let a = ComplexMatrix::from_fn(3, |i, j| Complex64::new(i as f64, j as f64 + 1.0));
        let dense = (&a * &p.matrix()).trace();
        assert!((dense - p.trace_with(&a)).norm() < 1e-14);
    }
}
