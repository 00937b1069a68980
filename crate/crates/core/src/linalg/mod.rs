// Copyright 2026 The fgauss Authors
// SPDX-License-Identifier: Apache-2.0

//! Real antisymmetric matrix calculus.
//!
//! Everything in the crate reduces to three kernels that live here:
//! Householder tridiagonalization of an antisymmetric matrix (which yields
//! the Pfaffian directly), the block canonical form `M = Oᵀ (β ⊗ J) O` with
//! `O ∈ SO(2n)` and `J = [[0, -1], [1, 0]]`, and spectral odd/even matrix
//! functions evaluated on the Williamson values of that form.

mod antisym;
mod canonical;
mod eigen;
mod functions;
mod pfaffian;
mod tridiag;

pub use antisym::AntisymmetricMatrix;
pub use canonical::{canonical_decompose, CanonicalForm};
pub use eigen::hermitian_eigen;
pub use functions::{even_function, odd_function, support_pseudo_apply, Parity, SingularPoint};
pub use pfaffian::{pfaffian, pfaffian_log, pfaffian_of, LogValue};
pub use tridiag::{tridiagonalize, Tridiagonal};

use nalgebra::DMatrix;

/// Dense real matrix, column-major.
pub type Mat = DMatrix<f64>;

/// Tolerance for the antisymmetry check at construction.
pub const ANTISYMMETRY_TOL: f64 = 1e-12;
/// Tolerance for orthogonality checks on rotations.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;
/// Williamson values within this distance of a singular point are treated as singular.
pub const SINGULAR_TOL: f64 = 1e-10;

/// Largest absolute entry.
pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(libm::fabs(*x)))
}

/// Largest absolute entrywise difference. Panics on shape mismatch.
pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max(libm::fabs(x - y)))
}

/// Sign and natural log of |det(m)| via partial-pivot LU.
pub fn log_det(m: &Mat) -> LogValue {
    assert!(m.is_square(), "log_det of a non-square matrix");
    let n = m.nrows();
    let lu = m.clone().lu();
    let u = lu.u();
    let mut sign = if lu.p().determinant::<f64>() < 0.0 { -1.0 } else { 1.0 };
    let mut log_abs = 0.0;
    for i in 0..n {
        let d = u[(i, i)];
        if d == 0.0 {
            return LogValue::ZERO;
        }
        if d < 0.0 {
            sign = -sign;
        }
        log_abs += libm::log(libm::fabs(d));
    }
    LogValue { sign, log_abs }
}

/// Determinant via LU.
pub fn det(m: &Mat) -> f64 {
    m.clone().determinant()
}

/// Largest singular value. The library value is sharpened by a few power
/// steps from its leading right singular vector, whose Rayleigh quotient is
/// accurate to second order.
pub fn spectral_norm(m: &Mat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let svd = m.clone().svd(false, true);
    let lead = svd.singular_values.imax();
    let mut x = svd.v_t.expect("Vᵀ requested").row(lead).transpose();
    let mut estimate = 0.0;
    for _ in 0..3 {
        let y = m * &x;
        estimate = y.norm();
        let z = m.transpose() * y;
        let norm = z.norm();
        if norm == 0.0 {
            break;
        }
        x = z / norm;
    }
    estimate
}

/// max |RᵀR - I| and |det R - 1|, whichever is larger.
pub fn special_orthogonal_deviation(r: &Mat) -> f64 {
    if !r.is_square() {
        return f64::INFINITY;
    }
    let n = r.nrows();
    let gram = r.transpose() * r;
    let orth = max_abs_diff(&gram, &Mat::identity(n, n));
    orth.max(libm::fabs(det(r) - 1.0))
}

/// `(m - mᵀ) / 2`.
pub(crate) fn antisymmetric_part(m: &Mat) -> Mat {
    (m - m.transpose()) * 0.5
}

/// `(m + mᵀ) / 2`.
pub(crate) fn symmetric_part(m: &Mat) -> Mat {
    (m + m.transpose()) * 0.5
}

/// Matrix square root of a symmetric positive-semidefinite matrix. Negative
/// eigenvalues from rounding are clipped to zero.
pub fn sym_psd_sqrt(m: &Mat) -> Mat {
    let (vals, v) = hermitian_eigen(m);
    let vals = vals.map(|v| libm::sqrt(v.max(0.0)));
    &v * Mat::from_diagonal(&vals) * v.transpose()
}
