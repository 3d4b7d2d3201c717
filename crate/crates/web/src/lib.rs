//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes and returns JSON text; errors come back as a message
//! string (a rejected `Result` on the JavaScript side).

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use knumpar::combinat::{binomial, omega_count, omega_hat_count, Composition};
use knumpar::io::{parse_matrix, CertificateJson, MatrixJson};
use knumpar::knum::{radius, range_boundary};
use knumpar::linalg::sample::{random_sample, Sample, SampleKind};
use knumpar::parallel::{is_parallel, is_tea};
use knumpar::Space;

fn text(v: Value) -> String {
    v.to_string()
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Boundary points of `W_k(A)` over `grid` directions, with `w_k(A)`.
#[wasm_bindgen]
pub fn k_range(matrix: &str, k: usize, grid: usize) -> Result<String, String> {
    let a = parse_matrix(matrix).map_err(err)?;
    let r = radius(&a, k).map_err(err)?;
    let points = range_boundary(&a, k, grid).map_err(err)?;
    let attained = r.attaining.trace_with(&a);
    Ok(text(json!({
        "radius": r.value,
        "theta_star": r.theta_star,
        "attained": [attained.re, attained.im],
        "points": points.iter().map(|p| [p.point.re, p.point.im]).collect::<Vec<_>>(),
    })))
}

/// Parallel test (`mode = "parallel"`) or triangle-equality test
/// (`mode = "tea"`) of `A` and `B` in `space` (`"Mn"` or `"Hn"`).
#[wasm_bindgen]
pub fn pair_test(a: &str, b: &str, k: usize, space: &str, mode: &str, tol: f64) -> Result<String, String> {
    let space: Space = space.parse().map_err(err)?;
    let read = |s: &str| {
        let m = parse_matrix(s).map_err(err)?;
        if space == Space::Hn && !m.is_hermitian() {
            m.into_hermitian().map_err(err)
        } else {
            Ok(m)
        }
    };
    let (a, b) = (read(a)?, read(b)?);
    let v = match mode {
        "parallel" => is_parallel(&a, &b, k, space, tol),
        "tea" => is_tea(&a, &b, k, space, tol),
        other => return Err(format!("unknown mode {other:?}")),
    }
    .map_err(err)?;
    Ok(text(json!({
        "holds": v.holds,
        "uncertain": v.uncertain,
        "defect": v.defect,
        "threshold": v.threshold,
        "certificate": v.certificate.as_ref().map(CertificateJson::from_certificate),
    })))
}

/// Number of index subsets of `parts` (comma-separated) with part-sum `k`,
/// or of complementary pairs when `pairs` is set.
#[wasm_bindgen]
pub fn omega(parts: &str, k: usize, pairs: bool) -> Result<String, String> {
    let c: Composition = parts.parse().map_err(err)?;
    let n = c.n();
    let (count, bound) = if pairs {
        (omega_hat_count(&c, k).map_err(err)?, binomial(n, k) / 2)
    } else {
        (omega_count(&c, k).map_err(err)?, binomial(n, k))
    };
    // u128 does not fit a JavaScript number; counts go out as strings.
    Ok(text(json!({
        "count": count.to_string(),
        "bound": bound.to_string(),
        "equality": count == bound,
    })))
}

/// Seeded random matrix (`"ginibre"` or `"gue"`) as matrix JSON.
#[wasm_bindgen]
pub fn sample_matrix(kind: &str, n: usize, seed: u32) -> Result<String, String> {
    let kind = match kind {
        "ginibre" => SampleKind::Ginibre,
        "gue" => SampleKind::GueHermitian,
        other => return Err(format!("unknown kind {other:?}")),
    };
    match random_sample(kind, n, None, u64::from(seed)).map_err(err)? {
        Sample::Matrix(a) => Ok(serde_json::to_string(&MatrixJson::from_matrix(&a)).map_err(err)?),
        Sample::Projection(_) => unreachable!("matrix ensembles only"),
    }
}
