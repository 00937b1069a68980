// Copyright 2026 The fgauss Authors
// SPDX-License-Identifier: Apache-2.0

//! Gaussian states as covariance matrices.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    canonical_decompose, pfaffian, AntisymmetricMatrix, CanonicalForm, Mat, SINGULAR_TOL,
};

/// Slack allowed above the covariance bound before a state is rejected.
pub const COVARIANCE_TOL: f64 = 1e-10;
/// Williamson values within this distance of 1 are pure modes.
pub const PURITY_TOL: f64 = 1e-10;
/// Largest `|t|` accepted by [`power_rotation`].
pub const MAX_ROTATION_TIME: f64 = 50.0;

/// Covariance matrix `Gᵢⱼ = (i/2) tr(ρ[γᵢ, γⱼ])` of a Gaussian state, with its
/// canonical form cached. Every Williamson value lies in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    g: AntisymmetricMatrix,
    form: CanonicalForm,
}

impl CovarianceMatrix {
    /// Validates `GᵀG ≤ I`. Values in `(1, 1 + 1e-10]` are clipped to 1.
    pub fn new(g: AntisymmetricMatrix) -> Result<Self> {
        let form = canonical_decompose(&g);
        let offending: Vec<f64> = form
            .williamson()
            .iter()
            .copied()
            .filter(|v| *v > 1.0 + COVARIANCE_TOL)
            .collect();
        if !offending.is_empty() {
            return Err(Error::InvalidState { offending });
        }
        if form.max_williamson() <= 1.0 {
            return Ok(Self { g, form });
        }
        let clipped = form.williamson().iter().map(|v| v.min(1.0)).collect();
        let form = CanonicalForm::from_parts(
            form.rotation().clone(),
            clipped,
            form.orientation().to_vec(),
        );
        Ok(Self {
            g: form.reconstruct(),
            form,
        })
    }

    pub fn from_matrix(m: Mat) -> Result<Self> {
        Self::new(AntisymmetricMatrix::new(m)?)
    }

    /// `I / 2ⁿ`.
    pub fn maximally_mixed(modes: usize) -> Self {
        Self::new(AntisymmetricMatrix::zeros(modes)).expect("zero is a valid covariance")
    }

    /// `⊕ₖ λₖ J`, the product state `2⁻ⁿ ∏ (1 - iλₖ γ₂ₖγ₂ₖ₊₁)`.
    pub fn product(signed_values: &[f64]) -> Result<Self> {
        Self::new(AntisymmetricMatrix::canonical(signed_values))
    }

    pub fn matrix(&self) -> &AntisymmetricMatrix {
        &self.g
    }

    pub fn as_matrix(&self) -> &Mat {
        self.g.as_matrix()
    }

    pub fn canonical(&self) -> &CanonicalForm {
        &self.form
    }

    pub fn modes(&self) -> usize {
        self.g.modes()
    }

    pub fn williamson(&self) -> &[f64] {
        self.form.williamson()
    }

    /// Index (in canonical order) and value of the first pure mode, if any.
    pub fn first_pure_mode(&self) -> Option<(usize, f64)> {
        self.williamson()
            .iter()
            .position(|v| *v >= 1.0 - PURITY_TOL)
            .map(|k| (k, self.williamson()[k]))
    }

    /// Fails with [`Error::NotStrictlyPositive`] if any mode is pure.
    pub fn require_strictly_positive(&self) -> Result<()> {
        match self.first_pure_mode() {
            Some((mode, value)) => Err(Error::NotStrictlyPositive { mode, value }),
            None => Ok(()),
        }
    }
}

/// See [`CovarianceMatrix::new`].
pub fn validate_covariance(g: AntisymmetricMatrix) -> Result<CovarianceMatrix> {
    CovarianceMatrix::new(g)
}

/// Inverse temperature of a thermal state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InverseTemperature {
    Finite(f64),
    /// Zero-temperature limit: the ground state, with zero-energy modes left
    /// maximally mixed.
    Infinite,
}

impl InverseTemperature {
    pub fn finite(beta: f64) -> Result<Self> {
        if beta.is_finite() && beta >= 0.0 {
            Ok(Self::Finite(beta))
        } else {
            Err(Error::OutOfRange {
                name: "beta",
                value: beta,
            })
        }
    }
}

/// `H = (i/2) Σᵢⱼ Mᵢⱼ γᵢ γⱼ` at inverse temperature `β`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticHamiltonian {
    pub m: AntisymmetricMatrix,
    pub beta: InverseTemperature,
}

impl QuadraticHamiltonian {
    pub fn new(m: AntisymmetricMatrix, beta: InverseTemperature) -> Self {
        Self { m, beta }
    }
}

/// Covariance matrix of `e^{-βH} / tr e^{-βH}`, i.e. `G = i tanh(iβM)`:
/// the odd function `x ↦ -tanh(βx)` applied to `M`.
pub fn state_from_hamiltonian(h: &QuadraticHamiltonian) -> CovarianceMatrix {
    let form = canonical_decompose(&h.m);
    let g = match h.beta {
        InverseTemperature::Finite(beta) => form.map_odd(|x| -libm::tanh(beta * x)),
        InverseTemperature::Infinite => form.map_odd(|x| {
            if libm::fabs(x) <= SINGULAR_TOL {
                0.0
            } else if x > 0.0 {
                -1.0
            } else {
                1.0
            }
        }),
    }
    .expect("tanh is finite");
    CovarianceMatrix::new(g).expect("|tanh| <= 1")
}

/// Williamson values with a purity flag per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct PuritySpectrum {
    pub values: Vec<f64>,
    pub pure: Vec<bool>,
}

impl PuritySpectrum {
    pub fn is_pure(&self) -> bool {
        self.pure.iter().all(|p| *p)
    }
}

pub fn purity_spectrum(g: &CovarianceMatrix) -> PuritySpectrum {
    let values = g.williamson().to_vec();
    let pure = values
        .iter()
        .map(|v| libm::fabs(v - 1.0) <= PURITY_TOL)
        .collect();
    PuritySpectrum { values, pure }
}

/// `tr(ρ γ_{i₁} ⋯ γ_{i₂ₖ})` by Wick's theorem, with 0-based ascending indices.
///
/// Each contraction is `⟨γᵢγⱼ⟩ = -i Gᵢⱼ`, so the result is `(-i)ᵏ Pf(G|ᵢ)`.
pub fn wick_expectation(g: &CovarianceMatrix, indices: &[usize]) -> Result<Complex64> {
    let dim = 2 * g.modes();
    for (pos, &i) in indices.iter().enumerate() {
        if i >= dim {
            return Err(Error::DimensionMismatch {
                context: "Majorana index",
                expected: dim,
                found: i,
            });
        }
        if pos > 0 && indices[pos - 1] >= i {
            return Err(Error::BadIndices(i));
        }
    }
    if indices.len() % 2 == 1 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let k = indices.len() / 2;
    let sub = Mat::from_fn(indices.len(), indices.len(), |a, b| {
        g.as_matrix()[(indices[a], indices[b])]
    });
    let pf = pfaffian(&AntisymmetricMatrix::from_antisymmetric_part(&sub));
    let phase = match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    Ok(phase * pf)
}

/// Williamson value of `σ^{1/2}` (normalized) for a mode of `σ` with value `λ`:
/// `(1 - √(1 - λ²)) / λ`, written as `λ / (1 + √(1 - λ²))` so that the
/// `λ → 0` limit is exact.
pub fn sqrt_state_spectrum(lambda: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&lambda) {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
        });
    }
    Ok(lambda / (1.0 + libm::sqrt(1.0 - lambda * lambda)))
}

/// `B_{σ,t} = exp(-2t arctanh G)`: covariance-level action of
/// `X ↦ σ^{it} X σ^{-it}`. In the canonical frame each block is
/// `[[cos 2ta, sin 2ta], [-sin 2ta, cos 2ta]]` with `a = arctanh λ`.
pub fn power_rotation(g: &CovarianceMatrix, t: f64) -> Result<Mat> {
    if !(libm::fabs(t) <= MAX_ROTATION_TIME) {
        return Err(Error::OutOfRange { name: "t", value: t });
    }
    g.require_strictly_positive()?;
    if t == 0.0 {
        let dim = 2 * g.modes();
        return Ok(Mat::identity(dim, dim));
    }
    let chi = g.canonical().signed_values();
    Ok(g
        .canonical()
        .rotation_exp(|k| -2.0 * t * libm::atanh(chi[k])))
}
