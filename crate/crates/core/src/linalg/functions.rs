// Copyright 2026 The fgauss Authors
// SPDX-License-Identifier: Apache-2.0

//! Spectral functions of antisymmetric matrices.
//!
//! For `X = Oᵀ (χ ⊗ J) O`, an odd scalar `f` induces
//! `f*(X) = Oᵀ (f(χ) ⊗ J) O = -i f(iX)` and an even scalar `g` induces
//! `g*(X) = Oᵀ (g(χ) ⊗ I₂) O = g(iX)`. Note `(iX)² = -X²`, so e.g.
//! `g(x) = √(1 - x²)` yields the matrix `√(I + X²)`.

use super::{AntisymmetricMatrix, CanonicalForm, Mat, SINGULAR_TOL};
use crate::error::{Error, Result};

/// Parity of a scalar function applied through the canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

/// A Williamson value where a scalar function is singular, together with
/// the value of its continuous extension there (if one exists).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPoint {
    /// Nonnegative location compared against unsigned Williamson values.
    pub at: f64,
    /// Value used at `+at`; odd functions use `-limit` at `-at`.
    pub limit: Option<f64>,
}

impl SingularPoint {
    pub const fn with_limit(at: f64, limit: f64) -> Self {
        Self {
            at,
            limit: Some(limit),
        }
    }

    pub const fn without_limit(at: f64) -> Self {
        Self { at, limit: None }
    }
}

fn checked(value: f64, at: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain { value: at })
    }
}

impl CanonicalForm {
    /// `f*(M)` for odd `f`, evaluated on the signed values.
    pub fn map_odd(&self, f: impl Fn(f64) -> f64) -> Result<AntisymmetricMatrix> {
        let vals = self
            .signed_values()
            .into_iter()
            .map(|x| checked(f(x), x))
            .collect::<Result<alloc::vec::Vec<_>>>()?;
        Ok(AntisymmetricMatrix::from_antisymmetric_part(
            &self.synthesize(|k| [0.0, -vals[k], vals[k], 0.0]),
        ))
    }

    /// `g*(M)` for even `g`; the result is symmetric.
    pub fn map_even(&self, g: impl Fn(f64) -> f64) -> Result<Mat> {
        let vals = self
            .williamson()
            .iter()
            .map(|x| checked(g(*x), *x))
            .collect::<Result<alloc::vec::Vec<_>>>()?;
        let m = self.synthesize(|k| [vals[k], 0.0, 0.0, vals[k]]);
        Ok(super::symmetric_part(&m))
    }

    /// Applies `f` blockwise, substituting declared limits at singular points.
    pub fn map_with_limits(
        &self,
        parity: Parity,
        f: impl Fn(f64) -> f64,
        singular: &[SingularPoint],
    ) -> Result<Mat> {
        let mut vals = alloc::vec::Vec::with_capacity(self.modes());
        for (beta, s) in self.williamson().iter().zip(self.orientation()) {
            let hit = singular
                .iter()
                .find(|p| libm::fabs(beta - p.at) <= SINGULAR_TOL);
            let unsigned = match hit {
                Some(p) => p.limit.ok_or(Error::Singularity { value: *beta })?,
                None => checked(f(*beta), *beta)?,
            };
            vals.push(match parity {
                Parity::Odd => s * unsigned,
                Parity::Even => unsigned,
            });
        }
        Ok(match parity {
            Parity::Odd => {
                super::antisymmetric_part(&self.synthesize(|k| [0.0, -vals[k], vals[k], 0.0]))
            }
            Parity::Even => {
                super::symmetric_part(&self.synthesize(|k| [vals[k], 0.0, 0.0, vals[k]]))
            }
        })
    }
}

/// `f*(M) = Oᵀ (f(χ) ⊗ J) O` for an odd scalar function `f`.
pub fn odd_function(m: &AntisymmetricMatrix, f: impl Fn(f64) -> f64) -> Result<AntisymmetricMatrix> {
    super::canonical_decompose(m).map_odd(f)
}

/// `g*(M) = Oᵀ (g(χ) ⊗ I₂) O` for an even scalar function `g`.
pub fn even_function(m: &AntisymmetricMatrix, g: impl Fn(f64) -> f64) -> Result<Mat> {
    super::canonical_decompose(m).map_even(g)
}

/// Spectral application with a perturb-then-limit rule: Williamson values
/// within `1e-10` of a declared singular point take the declared limit
/// value, which is the continuous extension of the regularized result.
/// With `f(x) = -1/x` (odd) and limit `0` at `0` this is the Moore–Penrose
/// inverse on the support.
pub fn support_pseudo_apply(
    m: &AntisymmetricMatrix,
    parity: Parity,
    f: impl Fn(f64) -> f64,
    singular: &[SingularPoint],
) -> Result<Mat> {
    super::canonical_decompose(m).map_with_limits(parity, f, singular)
}
