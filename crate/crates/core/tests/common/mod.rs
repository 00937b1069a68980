// Copyright 2026 The fgauss Authors
// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use fgauss_core::dense::{dense_covariance_of, dense_state_from_covariance, DenseOperator};
use fgauss_core::linalg::{max_abs_diff, AntisymmetricMatrix, Mat};
use fgauss_core::random::{random_special_orthogonal, SeededRng};
use fgauss_core::CovarianceMatrix;

pub fn dense(g: &CovarianceMatrix) -> DenseOperator {
    dense_state_from_covariance(g).unwrap()
}

/// Covariance of a dense operator after normalizing its trace.
pub fn covariance(x: &DenseOperator) -> AntisymmetricMatrix {
    fgauss_core::dense::normalized_covariance(x).unwrap().0
}

pub fn raw_covariance(x: &DenseOperator) -> AntisymmetricMatrix {
    dense_covariance_of(x).unwrap()
}

pub fn diff(a: &AntisymmetricMatrix, b: &AntisymmetricMatrix) -> f64 {
    max_abs_diff(a.as_matrix(), b.as_matrix())
}

/// `(R₁ ⊕ I) · R₂` style stacking helper: embeds `r` in the leading block.
pub fn embed(r: &Mat, dim: usize) -> Mat {
    let mut out = Mat::identity(dim, dim);
    out.view_mut((0, 0), (r.nrows(), r.ncols())).copy_from(r);
    out
}

/// Rotation in `SO(2(n + m))` exchanging system mode `k` with environment mode `0`.
pub fn mode_swap(n: usize, m: usize, k: usize) -> Mat {
    let dim = 2 * (n + m);
    let mut r = Mat::identity(dim, dim);
    for i in 0..2 {
        let (a, b) = (2 * k + i, 2 * n + i);
        r[(a, a)] = 0.0;
        r[(b, b)] = 0.0;
        r[(a, b)] = 1.0;
        r[(b, a)] = 1.0;
    }
    r
}

pub fn haar(r: &mut SeededRng, dim: usize) -> Mat {
    random_special_orthogonal(r, dim)
}
