//! JSON forms of matrices, projections, maps, canonical forms and
//! certificates.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Projection, Space};
use crate::parallel::ParallelCertificate;
use crate::preservers::{CanonicalForm, Family, RealLinearMap};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hermitian: Option<bool>,
}

impl MatrixJson {
    pub fn from_matrix(a: &ComplexMatrix) -> Self {
        let n = a.n();
        let rows = |f: fn(Complex64) -> f64| (0..n).map(|i| (0..n).map(|j| f(a.get(i, j))).collect()).collect();
        Self { n, re: rows(|z| z.re), im: rows(|z| z.im), hermitian: a.is_hermitian().then_some(true) }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == self.n && rows.iter().all(|r| r.len() == self.n);
        if !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(Error::BadDimension(format!("matrix arrays must be {0}x{0}", self.n)));
        }
        let a = ComplexMatrix::from_parts(&self.re, &self.im)?;
        if self.hermitian == Some(true) {
            a.into_hermitian()
        } else {
            Ok(a)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionJson {
    pub n: usize,
    pub k: usize,
    pub basis_re: Vec<Vec<f64>>,
    pub basis_im: Vec<Vec<f64>>,
}

impl ProjectionJson {
    pub fn from_projection(p: &Projection) -> Self {
        let b = p.basis();
        let rows =
            |f: fn(&Complex64) -> f64| (0..p.n()).map(|i| (0..p.rank()).map(|j| f(&b[(i, j)])).collect()).collect();
        Self { n: p.n(), k: p.rank(), basis_re: rows(|z| z.re), basis_im: rows(|z| z.im) }
    }

    pub fn to_projection(&self) -> Result<Projection> {
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == self.n && rows.iter().all(|r| r.len() == self.k);
        if !shape_ok(&self.basis_re) || !shape_ok(&self.basis_im) {
            return Err(Error::BadDimension(format!("projection basis arrays must be {}x{}", self.n, self.k)));
        }
        let basis = DMatrix::from_fn(self.n, self.k, |i, j| Complex64::new(self.basis_re[i][j], self.basis_im[i][j]));
        Projection::from_basis(basis)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapJson {
    pub space: Space,
    pub n: usize,
    pub k: usize,
    pub matrix: Vec<Vec<f64>>,
}

impl MapJson {
    pub fn from_map(t: &RealLinearMap, k: usize) -> Self {
        let m = t.matrix();
        let matrix = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect();
        Self { space: t.space(), n: t.n(), k, matrix }
    }

    pub fn to_map(&self) -> Result<RealLinearMap> {
        let d = self.space.real_dim(self.n);
        if self.matrix.len() != d || self.matrix.iter().any(|r| r.len() != d) {
            return Err(Error::BadDimension(format!(
                "map matrix must be {d}x{d} for n = {} on {}",
                self.n, self.space
            )));
        }
        crate::error::check_k(self.k, self.n)?;
        RealLinearMap::new(self.space, self.n, DMatrix::from_fn(d, d, |i, j| self.matrix[i][j]))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalFormJson {
    pub family: Family,
    pub space: Space,
    #[serde(rename = "U")]
    pub u: MatrixJson,
    pub scalar_re: f64,
    pub scalar_im: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity_scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_zero_action: Option<Vec<Vec<f64>>>,
}

impl CanonicalFormJson {
    pub fn from_form(f: &CanonicalForm) -> Self {
        Self {
            family: f.family,
            space: f.space,
            u: MatrixJson::from_matrix(&f.u),
            scalar_re: f.scalar.re,
            scalar_im: f.scalar.im,
            identity_scale: f.identity_scale,
            trace_zero_action: f
                .trace_zero_action
                .as_ref()
                .map(|m| (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()),
        }
    }

    pub fn to_form(&self) -> Result<CanonicalForm> {
        let action = match &self.trace_zero_action {
            None => None,
            Some(rows) if rows.len() == 3 && rows.iter().all(|r| r.len() == 3) => {
                Some(DMatrix::from_fn(3, 3, |i, j| rows[i][j]))
            }
            Some(_) => return Err(Error::BadDimension("trace_zero_action must be 3x3".into())),
        };
        Ok(CanonicalForm {
            family: self.family,
            space: self.space,
            u: self.u.to_matrix()?,
            scalar: Complex64::new(self.scalar_re, self.scalar_im),
            identity_scale: self.identity_scale,
            trace_zero_action: action,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub mu_re: f64,
    pub mu_im: f64,
    pub projection: ProjectionJson,
    #[serde(rename = "wA")]
    pub w_a: f64,
    #[serde(rename = "wB")]
    pub w_b: f64,
    #[serde(rename = "trAP")]
    pub tr_ap: [f64; 2],
    #[serde(rename = "trBP")]
    pub tr_bp: [f64; 2],
}

impl CertificateJson {
    pub fn from_certificate(c: &ParallelCertificate) -> Self {
        Self {
            mu_re: c.mu.re,
            mu_im: c.mu.im,
            projection: ProjectionJson::from_projection(&c.projection),
            w_a: c.w_a,
            w_b: c.w_b,
            tr_ap: [c.tr_ap.re, c.tr_ap.im],
            tr_bp: [c.tr_bp.re, c.tr_bp.im],
        }
    }

    pub fn to_certificate(&self) -> Result<ParallelCertificate> {
        Ok(ParallelCertificate {
            mu: Complex64::new(self.mu_re, self.mu_im),
            projection: self.projection.to_projection()?,
            w_a: self.w_a,
            w_b: self.w_b,
            tr_ap: Complex64::new(self.tr_ap[0], self.tr_ap[1]),
            tr_bp: Complex64::new(self.tr_bp[0], self.tr_bp[1]),
        })
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("JSON parse error: {e}")))
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    parse::<MatrixJson>(text)?.to_matrix()
}

pub fn parse_projection(text: &str) -> Result<Projection> {
    parse::<ProjectionJson>(text)?.to_projection()
}

/// Reads a map and its `k`.
pub fn parse_map(text: &str) -> Result<(RealLinearMap, usize)> {
    let m = parse::<MapJson>(text)?;
    Ok((m.to_map()?, m.k))
}

pub fn parse_form(text: &str) -> Result<CanonicalForm> {
    parse::<CanonicalFormJson>(text)?.to_form()
}

pub fn matrix_to_json(a: &ComplexMatrix) -> String {
    serde_json::to_string(&MatrixJson::from_matrix(a)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sample::{ginibre, gue, random_projection};
    use crate::linalg::SeededRng;

    #[test]
    fn matrix_round_trip_is_identical() {
        let mut rng = SeededRng::new(1);
        for a in [ginibre(3, &mut rng), gue(3, &mut rng)] {
            let text = matrix_to_json(&a);
            let back = parse_matrix(&text).unwrap();
            assert_eq!(back, a);
            assert_eq!(matrix_to_json(&back), text);
        }
    }

    #[test]
    fn hermitian_tag_is_checked() {
        let text = r#"{"n":2,"re":[[0,1],[0,0]],"im":[[0,0],[0,0]],"hermitian":true}"#;
        assert!(matches!(parse_matrix(text), Err(Error::NotHermitian(_))));
        let text = r#"{"n":2,"re":[[0,1],[1,0]],"im":[[0,0],[0,0]],"hermitian":true}"#;
        assert!(parse_matrix(text).unwrap().is_hermitian());
    }

    #[test]
    fn wrong_map_dimension_rejected() {
        let text = r#"{"space":"Hn","n":2,"k":1,"matrix":[[1,0],[0,1]]}"#;
        assert!(matches!(parse_map(text), Err(Error::BadDimension(_))));
        assert!(matches!(parse_map("{"), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn projection_round_trip() {
        let mut rng = SeededRng::new(2);
        let p = random_projection(4, 2, &mut rng).unwrap();
        let text = serde_json::to_string(&ProjectionJson::from_projection(&p)).unwrap();
        assert_eq!(parse_projection(&text).unwrap(), p);
    }
}
