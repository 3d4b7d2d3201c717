//! Real coordinates on `M_n` and `H_n`.
//!
//! `M_n` (dimension `2n²`): real parts of the entries in row-major order,
//! then imaginary parts in row-major order.
//!
//! `H_n` (dimension `n²`): the diagonal units `E_11..E_nn`, then for `p < q`
//! in row-major order the symmetric units `(E_pq + E_qp)/√2`, then in the
//! same order the antisymmetric units `i(E_pq - E_qp)/√2`.
//!
//! Both bases are orthonormal for the Frobenius inner product, so the
//! Euclidean norm of the coordinates equals `||X||_F`.

use std::f64::consts::SQRT_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    /// All complex matrices, as a real vector space.
    Mn,
    /// Hermitian matrices.
    Hn,
}

impl Space {
    pub fn real_dim(self, n: usize) -> usize {
        match self {
            Space::Mn => 2 * n * n,
            Space::Hn => n * n,
        }
    }

    /// Recover `n` from a coordinate dimension.
    pub fn n_for_dim(self, d: usize) -> Option<usize> {
        let n2 = match self {
            Space::Mn if d.is_multiple_of(2) => d / 2,
            Space::Mn => return None,
            Space::Hn => d,
        };
        let n = (n2 as f64).sqrt().round() as usize;
        (n * n == n2 && n > 0).then_some(n)
    }
}

impl std::str::FromStr for Space {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Mn" | "mn" | "M" => Ok(Space::Mn),
            "Hn" | "hn" | "H" => Ok(Space::Hn),
            other => Err(Error::InvalidInput(format!("unknown space {other:?} (use Mn or Hn)"))),
        }
    }
}

impl std::fmt::Display for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Space::Mn => "Mn",
            Space::Hn => "Hn",
        })
    }
}

pub fn encode(x: &ComplexMatrix, space: Space) -> Result<DVector<f64>> {
    let n = x.n();
    match space {
        Space::Mn => {
            let mut v = DVector::zeros(2 * n * n);
            for i in 0..n {
                for j in 0..n {
                    let z = x.get(i, j);
                    v[i * n + j] = z.re;
                    v[n * n + i * n + j] = z.im;
                }
            }
            Ok(v)
        }
        Space::Hn => {
            x.require_hermitian()?;
            let mut v = DVector::zeros(n * n);
            let pairs = n * (n - 1) / 2;
            for i in 0..n {
                v[i] = x.get(i, i).re;
            }
            let mut idx = 0;
            for p in 0..n {
                for q in (p + 1)..n {
                    let z = x.get(p, q);
                    v[n + idx] = SQRT_2 * z.re;
                    v[n + pairs + idx] = SQRT_2 * z.im;
                    idx += 1;
                }
            }
            Ok(v)
        }
    }
}

pub fn decode(v: &DVector<f64>, space: Space) -> Result<ComplexMatrix> {
    let n = space
        .n_for_dim(v.len())
        .ok_or_else(|| Error::BadDimension(format!("{} coordinates do not match any {space}", v.len())))?;
    match space {
        Space::Mn => {
            let data = DMatrix::from_fn(n, n, |i, j| Complex64::new(v[i * n + j], v[n * n + i * n + j]));
            ComplexMatrix::from_dmatrix(data)
        }
        Space::Hn => {
            let pairs = n * (n - 1) / 2;
            let mut data = DMatrix::zeros(n, n);
            for i in 0..n {
                data[(i, i)] = Complex64::new(v[i], 0.0);
            }
            let mut idx = 0;
            for p in 0..n {
                for q in (p + 1)..n {
                    let z = Complex64::new(v[n + idx], v[n + pairs + idx]) / SQRT_2;
                    data[(p, q)] = z;
                    data[(q, p)] = z.conj();
                    idx += 1;
                }
            }
            ComplexMatrix::from_dmatrix(data)?.into_hermitian()
        }
    }
}

/// The matrix represented by the `index`-th coordinate vector.
pub fn basis_element(n: usize, index: usize, space: Space) -> ComplexMatrix {
    let mut v = DVector::zeros(space.real_dim(n));
    v[index] = 1.0;
    decode(&v, space).expect("unit coordinate vector decodes")
}
