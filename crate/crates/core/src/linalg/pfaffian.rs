// Copyright 2026 The fgauss Authors
// SPDX-License-Identifier: Apache-2.0

use super::{tridiagonalize, AntisymmetricMatrix, Mat};
use crate::error::Result;

/// A real number held as sign and log-magnitude, so products of many
/// Pfaffian or determinant factors do not overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    /// `+1`, `-1`, or `0` for an exact zero.
    pub sign: f64,
    pub log_abs: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        sign: 0.0,
        log_abs: f64::NEG_INFINITY,
    };
    pub const ONE: LogValue = LogValue {
        sign: 1.0,
        log_abs: 0.0,
    };

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: if x < 0.0 { -1.0 } else { 1.0 },
                log_abs: libm::log(libm::fabs(x)),
            }
        }
    }

    pub fn value(&self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * libm::exp(self.log_abs)
        }
    }

    pub fn mul(self, other: Self) -> Self {
        if self.sign == 0.0 || other.sign == 0.0 {
            return Self::ZERO;
        }
        Self {
            sign: self.sign * other.sign,
            log_abs: self.log_abs + other.log_abs,
        }
    }

    pub fn powf(self, p: f64) -> Self {
        debug_assert!(self.sign >= 0.0, "fractional power of a negative value");
        if self.sign == 0.0 {
            return Self::ZERO;
        }
        Self {
            sign: 1.0,
            log_abs: self.log_abs * p,
        }
    }
}

/// Pfaffian by Householder tridiagonalization, `O(n³)`.
///
/// With `M = Q T Qᵀ`, `Pf(M) = det(Q) Pf(T)` and the Pfaffian of an
/// antisymmetric tridiagonal matrix is the product of its even-indexed
/// superdiagonal entries.
pub fn pfaffian_log(m: &AntisymmetricMatrix) -> LogValue {
    let tri = tridiagonalize(m, false);
    let mut acc = if tri.reflections.is_multiple_of(2) {
        LogValue::ONE
    } else {
        LogValue {
            sign: -1.0,
            log_abs: 0.0,
        }
    };
    for e in tri.superdiag.iter().step_by(2) {
        acc = acc.mul(LogValue::from_f64(*e));
    }
    acc
}

/// Pfaffian as a plain product; use [`pfaffian_log`] when it may overflow.
pub fn pfaffian(m: &AntisymmetricMatrix) -> f64 {
    let tri = tridiagonalize(m, false);
    let sign = if tri.reflections.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * tri.superdiag.iter().step_by(2).product::<f64>()
}

/// Pfaffian of a raw square matrix, validating antisymmetry first.
pub fn pfaffian_of(m: &Mat) -> Result<f64> {
    Ok(pfaffian(&AntisymmetricMatrix::new(m.clone())?))
}
