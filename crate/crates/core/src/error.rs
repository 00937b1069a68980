// Copyright 2026 The fgauss Authors
// SPDX-License-Identifier: Apache-2.0

use alloc::vec::Vec;

/// Errors raised by the covariance-level calculus and the dense oracle.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix dimension {0} is odd; antisymmetric mode matrices must be 2n x 2n")]
    OddDimension(usize),

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not antisymmetric: max |M + M^T| = {deviation:e}")]
    NotAntisymmetric { deviation: f64 },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("function is singular at Williamson value {value}")]
    Domain { value: f64 },

    #[error("no finite limit at singular Williamson value {value}")]
    Singularity { value: f64 },

    #[error("covariance bound G^T G <= I violated by Williamson values {offending:?}")]
    InvalidState { offending: Vec<f64> },

    #[error("state is not strictly positive: mode {mode} has Williamson value {value}")]
    NotStrictlyPositive { mode: usize, value: f64 },

    #[error("output state N(sigma) is not faithful: pure modes {pure_modes:?} in its canonical basis")]
    NotFaithful { pure_modes: Vec<usize> },

    #[error("matrix is not special orthogonal: deviation {deviation:e}")]
    NotSpecialOrthogonal { deviation: f64 },

    #[error("Majorana index {0} repeated or out of order")]
    BadIndices(usize),

    #[error("parameter {name} = {value} out of range")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("channel output violates the covariance bound (max Williamson value {max_value}); channel data is not CP")]
    NotCp { max_value: f64 },

    #[error("dense oracle limited to {cap} modes, requested {modes}")]
    SizeCap { modes: usize, cap: usize },

    #[error("operator is rank deficient: smallest eigenvalue {min_eigenvalue:e}")]
    RankDeficient { min_eigenvalue: f64 },

    #[error("regularized limit unstable: successive extrapolations differ by {spread:e}")]
    RegularizationUnstable { spread: f64 },

    #[error("numerical inconsistency: {what} = {value:e}")]
    Numerical { what: &'static str, value: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
