// Copyright 2026 The fgauss Authors
// SPDX-License-Identifier: Apache-2.0

use super::{max_abs, Mat, ANTISYMMETRY_TOL};
use crate::error::{Error, Result};

/// Real `2n x 2n` matrix with `Mᵀ = -M` exactly as stored.
#[derive(Debug, Clone, PartialEq)]
pub struct AntisymmetricMatrix {
    m: Mat,
}

impl AntisymmetricMatrix {
    /// Validates shape and antisymmetry (relative tolerance 1e-12), then stores
    /// the exact antisymmetric part.
    pub fn new(m: Mat) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if !m.nrows().is_multiple_of(2) {
            return Err(Error::OddDimension(m.nrows()));
        }
        let deviation = max_abs(&(&m + m.transpose()));
        if deviation > ANTISYMMETRY_TOL * max_abs(&m).max(1.0) {
            return Err(Error::NotAntisymmetric { deviation });
        }
        Ok(Self::from_antisymmetric_part(&m))
    }

    /// Stores `(m - mᵀ)/2` without checking. `m` must be square of even size.
    pub(crate) fn from_antisymmetric_part(m: &Mat) -> Self {
        debug_assert!(m.is_square() && m.nrows().is_multiple_of(2));
        Self {
            m: super::antisymmetric_part(m),
        }
    }

    /// Row-major constructor, convenient in tests and IO.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: r.len(),
                });
            }
        }
        Self::new(Mat::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn zeros(modes: usize) -> Self {
        Self {
            m: Mat::zeros(2 * modes, 2 * modes),
        }
    }

    /// `diag(values) ⊗ J` with `J = [[0, -1], [1, 0]]`.
    pub fn canonical(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Mat::zeros(2 * n, 2 * n);
        for (k, v) in values.iter().enumerate() {
            m[(2 * k, 2 * k + 1)] = -v;
            m[(2 * k + 1, 2 * k)] = *v;
        }
        Self { m }
    }

    /// Number of modes `n` (the matrix is `2n x 2n`).
    pub fn modes(&self) -> usize {
        self.m.nrows() / 2
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn as_matrix(&self) -> &Mat {
        &self.m
    }

    pub fn into_matrix(self) -> Mat {
        self.m
    }

    /// `B M Bᵀ` for a (possibly rectangular) `B` with an even number of rows.
    pub fn congruence(&self, b: &Mat) -> Result<Self> {
        if b.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "congruence",
                expected: self.dim(),
                found: b.ncols(),
            });
        }
        if !b.nrows().is_multiple_of(2) {
            return Err(Error::OddDimension(b.nrows()));
        }
        Ok(Self::from_antisymmetric_part(&(b * &self.m * b.transpose())))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { m: &self.m * s }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                context: "antisymmetric sum",
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self {
            m: &self.m + &other.m,
        })
    }

    pub fn neg(&self) -> Self {
        Self { m: -&self.m }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_and_symmetric() {
        assert_eq!(
            AntisymmetricMatrix::new(Mat::zeros(3, 3)),
            Err(Error::OddDimension(3))
        );
        let s = Mat::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(matches!(
            AntisymmetricMatrix::new(s),
            Err(Error::NotAntisymmetric { .. })
        ));
    }

    #[test]
    fn symmetrizes_within_tolerance() {
        let m = Mat::from_row_slice(2, 2, &[1e-14, 2.0, -2.0 + 1e-13, 0.0]);
        let a = AntisymmetricMatrix::new(m).unwrap();
        let raw = a.as_matrix();
        assert_eq!(raw[(0, 1)], -raw[(1, 0)]);
        assert_eq!(raw[(0, 0)], 0.0);
    }

    #[test]
    fn canonical_layout() {
        let a = AntisymmetricMatrix::canonical(&[0.7]);
        assert_eq!(a.as_matrix()[(0, 1)], -0.7);
        assert_eq!(a.as_matrix()[(1, 0)], 0.7);
    }
}
