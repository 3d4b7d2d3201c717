use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Entrywise tolerance for accepting a Hermitian tag.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Dense square complex matrix.
///
/// The `hermitian` tag is only ever set after the entries were checked and
/// then symmetrized exactly, so tagged matrices satisfy `A == A*` bitwise.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    data: DMatrix<Complex64>,
    hermitian: bool,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix(n={}, hermitian={})", self.n(), self.hermitian)?;
        for i in 0..self.n() {
            write!(f, "\n  ")?;
            for j in 0..self.n() {
                let z = self.data[(i, j)];
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
        }
        Ok(())
    }
}

impl ComplexMatrix {
    pub fn from_dmatrix(data: DMatrix<Complex64>) -> Result<Self> {
        if data.nrows() != data.ncols() || data.nrows() == 0 {
            return Err(Error::BadDimension(format!(
                "expected a nonempty square matrix, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        Ok(Self { data, hermitian: false })
    }

    /// Wraps without validation; callers guarantee a square finite matrix.
    pub(crate) fn wrap(data: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(data.nrows(), data.ncols());
        Self { data, hermitian: false }
    }

    pub fn zeros(n: usize) -> Self {
        Self { data: DMatrix::zeros(n, n), hermitian: true }
    }

    pub fn identity(n: usize) -> Self {
        Self { data: DMatrix::identity(n, n), hermitian: true }
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self::wrap(DMatrix::from_fn(n, n, f))
    }

    /// Matrix unit `E_ij`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n);
        m.data[(i, j)] = Complex64::new(1.0, 0.0);
        m.hermitian = i == j;
        m
    }

    pub fn from_real_diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n);
        for (i, &v) in values.iter().enumerate() {
            m.data[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn from_diagonal(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut data = DMatrix::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            data[(i, i)] = v;
        }
        let hermitian = values.iter().all(|z| z.im == 0.0);
        Self { data, hermitian }
    }

    /// Builds from row-major real and imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let n = re.len();
        if im.len() != n || re.iter().chain(im.iter()).any(|row| row.len() != n) {
            return Err(Error::BadDimension(format!("re/im must both be {n}x{n} row arrays")));
        }
        Self::from_dmatrix(DMatrix::from_fn(n, n, |i, j| Complex64::new(re[i][j], im[i][j])))
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::BadDimension("rows must form a square array".into()));
        }
        Self::from_dmatrix(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Checks `max |A - A*| <= 1e-12`, symmetrizes exactly and sets the tag.
    pub fn into_hermitian(mut self) -> Result<Self> {
        let defect = self.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        self.symmetrize();
        Ok(self)
    }

    fn symmetrize(&mut self) {
        let n = self.n();
        for i in 0..n {
            let d = self.data[(i, i)].re;
            self.data[(i, i)] = Complex64::new(d, 0.0);
            for j in (i + 1)..n {
                let avg = (self.data[(i, j)] + self.data[(j, i)].conj()) * 0.5;
                self.data[(i, j)] = avg;
                self.data[(j, i)] = avg.conj();
            }
        }
        self.hermitian = true;
    }

    /// Exact Hermitian projection `(A + A*)/2`, tagged.
    pub fn hermitian_part(&self) -> Self {
        let mut m = self.clone();
        m.symmetrize();
        m
    }

    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn require_hermitian(&self) -> Result<()> {
        if self.hermitian {
            Ok(())
        } else {
            Err(Error::NotHermitian(self.hermitian_defect()))
        }
    }

    /// Largest entrywise deviation `max |a_ij - conj(a_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        Self { data: self.data.adjoint(), hermitian: self.hermitian }
    }

    pub fn transpose(&self) -> Self {
        Self { data: self.data.transpose(), hermitian: self.hermitian }
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let hermitian = self.hermitian && c.im == 0.0;
        Self { data: &self.data * c, hermitian }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self { data: &self.data * Complex64::new(c, 0.0), hermitian: self.hermitian }
    }

    /// `U* A U`; the Hermitian tag survives (re-symmetrized).
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        let mut m = Self::wrap(u.data.adjoint() * &self.data * &u.data);
        if self.hermitian {
            m.symmetrize();
        }
        m
    }

    pub fn direct_sum(&self, other: &ComplexMatrix) -> Self {
        let (a, b) = (self.n(), other.n());
        let mut data = DMatrix::zeros(a + b, a + b);
        data.view_mut((0, 0), (a, a)).copy_from(&self.data);
        data.view_mut((a, a), (b, b)).copy_from(&other.data);
        Self { data, hermitian: self.hermitian && other.hermitian }
    }

    pub fn commutator(&self, other: &ComplexMatrix) -> Self {
        Self::wrap(&self.data * &other.data - &other.data * &self.data)
    }

    /// `(e^{iθ} A + e^{-iθ} A*) / 2`, always tagged Hermitian.
    pub fn re_part(&self, theta: f64) -> Self {
        let n = self.n();
        let (s, c) = theta.sin_cos();
        let phase = Complex64::new(c, s);
        let mut data = DMatrix::zeros(n, n);
        for i in 0..n {
            let d = (phase * self.data[(i, i)]).re;
            data[(i, i)] = Complex64::new(d, 0.0);
            for j in (i + 1)..n {
                let z = (phase * self.data[(i, j)] + (phase * self.data[(j, i)]).conj()) * 0.5;
                data[(i, j)] = z;
                data[(j, i)] = z.conj();
            }
        }
        Self { data, hermitian: true }
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        self.data.clone().singular_values().max()
    }

    /// Frobenius norm of `A - B`.
    pub fn distance(&self, other: &ComplexMatrix) -> f64 {
        (&self.data - &other.data).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix { data: &self.data + &rhs.data, hermitian: self.hermitian && rhs.hermitian }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix { data: &self.data - &rhs.data, hermitian: self.hermitian && rhs.hermitian }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::wrap(&self.data * &rhs.data)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix { data: -&self.data, hermitian: self.hermitian }
    }
}
