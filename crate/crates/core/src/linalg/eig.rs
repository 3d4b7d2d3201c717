//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Each step annihilates one off-diagonal pair `(p, q)` with a complex plane
//! rotation `G = D R`: `D` rotates the phase of `a_pq` onto the real axis and
//! `R` is the classical real Jacobi rotation. Sweeps stop once the
//! off-diagonal Frobenius mass drops below `1e-14 * ||H||_F`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 60;
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Eigenvalues sorted descending with matching unitary eigenvector columns.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

impl EigenSystem {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Sum of the `k` largest eigenvalues.
    pub fn top_sum(&self, k: usize) -> f64 {
        self.values[..k].iter().sum()
    }

    /// Sum of the `k` smallest eigenvalues.
    pub fn bottom_sum(&self, k: usize) -> f64 {
        self.values[self.n() - k..].iter().sum()
    }

    /// `||H V - V diag(values)||_F`.
    pub fn residual(&self, h: &ComplexMatrix) -> f64 {
        let hv = h.as_dmatrix() * &self.vectors;
        let mut vl = self.vectors.clone();
        for (j, &l) in self.values.iter().enumerate() {
            vl.column_mut(j).scale_mut(l);
        }
        (hv - vl).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `||V* V - I||_F`.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.n();
        let g = self.vectors.adjoint() * &self.vectors - DMatrix::<Complex64>::identity(n, n);
        g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

pub fn hermitian_eig(h: &ComplexMatrix) -> Result<EigenSystem> {
    h.require_hermitian()?;
    let (values, vectors) = jacobi(h.as_dmatrix().clone(), true)?;
    Ok(EigenSystem { values, vectors: vectors.expect("vectors requested") })
}

/// Eigenvalues only, sorted descending.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    h.require_hermitian()?;
    Ok(jacobi(h.as_dmatrix().clone(), false)?.0)
}

fn off_diagonal_mass(a: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(mut a: DMatrix<Complex64>, want_vectors: bool) -> Result<(Vec<f64>, Option<DMatrix<Complex64>>)> {
    let n = a.nrows();
    let mut v = want_vectors.then(|| DMatrix::<Complex64>::identity(n, n));
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = OFF_DIAGONAL_TOL * scale;

    let mut converged = off_diagonal_mass(&a) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, v.as_mut(), p, q);
            }
        }
        converged = off_diagonal_mass(&a) <= threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    // Stable sort keeps the original index order among ties, which keeps the
    // output deterministic for repeated eigenvalues.
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = v.map(|v| DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]));
    Ok((values, vectors))
}

fn rotate(a: &mut DMatrix<Complex64>, v: Option<&mut DMatrix<Complex64>>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let b = apq.norm();
    if b == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Skip entries already negligible against both diagonal entries.
    if b < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = Complex64::new(0.0, 0.0);
        a[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }
    let e = apq / b;
    let tau = (aqq - app) / (2.0 * b);
    let t = if tau >= 0.0 { 1.0 / (tau + (1.0 + tau * tau).sqrt()) } else { -1.0 / (-tau + (1.0 + tau * tau).sqrt()) };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let ec = e.conj();
    // G = [[c, s], [-s ē, c ē]] on coordinates (p, q).
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -ec * s;
    let g_qq = ec * c;

    let n = a.nrows();
    // A <- A G (columns p, q)
    for r in 0..n {
        let arp = a[(r, p)];
        let arq = a[(r, q)];
        a[(r, p)] = arp * g_pp + arq * g_qp;
        a[(r, q)] = arp * g_pq + arq * g_qq;
    }
    // A <- G* A (rows p, q)
    for col in 0..n {
        let apc = a[(p, col)];
        let aqc = a[(q, col)];
        a[(p, col)] = g_pp.conj() * apc + g_qp.conj() * aqc;
        a[(q, col)] = g_pq.conj() * apc + g_qq.conj() * aqc;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    if let Some(v) = v {
        for r in 0..n {
            let vrp = v[(r, p)];
            let vrq = v[(r, q)];
            v[(r, p)] = vrp * g_pp + vrq * g_qp;
            v[(r, q)] = vrp * g_pq + vrq * g_qq;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rng::SeededRng;
    use crate::linalg::sample::gue;

    #[test]
    fn diagonal_input() {
        let h = ComplexMatrix::from_real_diagonal(&[3.0, 2.0, 1.0]);
        let e = hermitian_eig(&h).unwrap();
        assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((e.vectors[(i, j)].norm() - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn unsorted_diagonal_input_is_permuted() {
        let h = ComplexMatrix::from_real_diagonal(&[1.0, 3.0, 2.0]);
        let e = hermitian_eig(&h).unwrap();
        assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
        assert!((e.vectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_x() {
        let h = ComplexMatrix::from_real_diagonal(&[0.0, 0.0]);
        let mut m = h.into_dmatrix();
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        m[(1, 0)] = Complex64::new(1.0, 0.0);
        let h = ComplexMatrix::from_dmatrix(m).unwrap().into_hermitian().unwrap();
        let e = hermitian_eig(&h).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15);
        assert!((e.values[1] + 1.0).abs() < 1e-15);
        assert!(e.residual(&h) < 1e-14);
    }

    #[test]
    fn zero_matrix() {
        let e = hermitian_eig(&ComplexMatrix::zeros(3)).unwrap();
        assert_eq!(e.values, vec![0.0; 3]);
    }

    #[test]
    fn rejects_untagged() {
        let a = ComplexMatrix::unit(2, 0, 1);
        assert!(matches!(hermitian_eig(&a), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn gue_residuals_and_orthonormality() {
        let mut rng = SeededRng::new(11);
        for trial in 0..200 {
            let n = 1 + trial % 8;
            let h = gue(n, &mut rng);
            let e = hermitian_eig(&h).unwrap();
            let bound = 1e-10 * (1.0 + h.frobenius());
            assert!(e.residual(&h) <= bound, "residual {} n={n}", e.residual(&h));
            assert!(e.orthonormality_defect() <= 1e-12);
            assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
            let only = hermitian_eigenvalues(&h).unwrap();
            for (a, b) in only.iter().zip(&e.values) {
                assert!((a - b).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn deterministic() {
        let mut rng = SeededRng::new(5);
        let h = gue(6, &mut rng);
        let a = hermitian_eig(&h).unwrap();
        let b = hermitian_eig(&h).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.vectors, b.vectors);
    }
}
