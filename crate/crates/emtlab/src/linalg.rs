//! Dense complex matrix services: operator norms by singular values,
//! null-space projectors, and an independent power-iteration cross-check.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Relative singular-value cutoff below which a direction counts as null.
pub const NULL_THRESHOLD: f64 = 1e-10;

/// Operator norm (largest singular value).
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.iter().all(|c| c.norm_sqr() == 0.0) {
        return 0.0;
    }
    m.clone()
        .try_svd(false, false, f64::EPSILON, 0)
        .map(|svd| svd.singular_values.max())
        .unwrap_or_else(|| hermitian_norm(m))
}

/// Fallback norm via the largest eigenvalue of m†m.
fn hermitian_norm(m: &CMatrix) -> f64 {
    let gram = m.adjoint() * m;
    gram.symmetric_eigen().eigenvalues.max().max(0.0).sqrt()
}

/// Commutator a·b − b·a.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Orthogonal projector onto the kernel of `m`, detected by singular values
/// below [`NULL_THRESHOLD`] times the largest one.
///
/// Also reports whether singular values cluster near the cutoff (within a
/// factor of 10 on either side), which makes the projector ill-determined.
pub fn null_projector(m: &CMatrix) -> Result<(CMatrix, bool)> {
    let n = m.nrows();
    let svd = m
        .clone()
        .try_svd(false, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::InvalidParameter("SVD did not converge".into()))?;
    let v_t = svd.v_t.expect("requested v_t");
    let sigma_max = svd.singular_values.max();
    if sigma_max == 0.0 {
        return Ok((CMatrix::identity(n, n), false));
    }
    let cut = NULL_THRESHOLD * sigma_max;
    let ambiguous = svd
        .singular_values
        .iter()
        .any(|&s| s > cut * 0.1 && s < cut * 10.0 && s != 0.0);
    let mut proj = CMatrix::zeros(n, n);
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s <= cut {
            let row = v_t.row(i);
            let col = row.adjoint();
            proj += &col * row;
        }
    }
    Ok((proj, ambiguous))
}

/// Independent estimate of the operator norm by power iteration on m†m.
pub fn power_iteration_norm(m: &CMatrix, iters: usize, rng: &mut impl Rng) -> f64 {
    let n = m.ncols();
    let mut v = nalgebra::DVector::from_fn(n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let gram = m.adjoint() * m;
    let mut lambda = 0.0f64;
    for _ in 0..iters {
        let w = &gram * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        lambda = norm;
        v = w / Complex64::new(norm, 0.0);
    }
    lambda.sqrt()
}

/// Random matrix with entries uniform in the complex unit square.
pub fn random_matrix(n: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// Dense complex matrix as nested [re, im] pairs.
pub fn matrix_to_json(m: &CMatrix) -> String {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    serde_json::to_string(&rows).expect("matrix serialization cannot fail")
}

pub fn matrix_from_json(s: &str) -> Result<CMatrix> {
    let rows: Vec<Vec<[f64; 2]>> =
        serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Serialization("matrix must be square and nonempty".into()));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}
