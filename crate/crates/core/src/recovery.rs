// Copyright 2026 The fgauss Authors
// SPDX-License-Identifier: Apache-2.0

//! Petz and rotated recovery maps for Gaussian channels.
//!
//! For a reference state `σ` and channel `N` with output `N(σ)`, the Petz map
//! `X ↦ σ^{1/2} N*(N(σ)^{-1/2} X N(σ)^{-1/2}) σ^{1/2}` is the Gaussian channel
//!
//! ```text
//! B_P = √(I + G_σ²) Bᵀ √(I + G_N²)⁻¹
//! A_P = G_σ - B_P G_N B_Pᵀ
//! ```
//!
//! and the rotated map `σ^{it} P(N(σ)^{-it} X N(σ)^{it}) σ^{-it}` conjugates it
//! by `B_{σ,t}` and `B_{N(σ),-t}`.

use alloc::vec::Vec;

use crate::channel::{
    adjoint, apply, compose, compose_regularized, pure_modes, sandwich_inv_sqrt, sandwich_sqrt,
    sqrt_one_plus_square, GaussianChannelData, GaussianCptpChannel,
};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::state::{power_rotation, CovarianceMatrix};

fn check_reference(sigma: &CovarianceMatrix, ch: &GaussianCptpChannel) -> Result<()> {
    if sigma.modes() != ch.n_in() {
        return Err(Error::DimensionMismatch {
            context: "reference state vs channel input",
            expected: ch.n_in(),
            found: sigma.modes(),
        });
    }
    Ok(())
}

/// `√(I + G²)⁻¹` for a faithful state.
fn inv_sqrt_one_plus_square(g: &CovarianceMatrix) -> Mat {
    g.canonical()
        .map_even(|x| 1.0 / libm::sqrt(1.0 - x * x))
        .expect("faithful state")
}

fn petz_from_output(
    sigma: &CovarianceMatrix,
    ch: &GaussianCptpChannel,
    n_sigma: &CovarianceMatrix,
) -> Result<GaussianCptpChannel> {
    let pure = pure_modes(n_sigma);
    if !pure.is_empty() {
        return Err(Error::NotFaithful { pure_modes: pure });
    }
    let b_p = sqrt_one_plus_square(sigma) * ch.b().transpose() * inv_sqrt_one_plus_square(n_sigma);
    let recovered = n_sigma.matrix().congruence(&b_p)?;
    let a_p = sigma.matrix().add(&recovered.neg())?;
    GaussianCptpChannel::new_unchecked(a_p, b_p)
}

/// The Petz recovery map of `ch` with respect to `σ`.
///
/// Requires `N(σ)` to be faithful (all Williamson values `< 1 - 1e-10`);
/// otherwise returns [`Error::NotFaithful`], and [`petz_on_support`] applies.
pub fn petz(sigma: &CovarianceMatrix, ch: &GaussianCptpChannel) -> Result<GaussianCptpChannel> {
    check_reference(sigma, ch)?;
    let n_sigma = apply(ch, sigma)?;
    petz_from_output(sigma, ch, &n_sigma)
}

/// Petz map restricted to the support of a non-faithful `N(σ)`.
///
/// In the canonical frame `O` of `G_N`, the output splits into mixed modes
/// (the support region) and pure modes. The map acts on the mixed modes only:
/// it is the Petz map of the channel followed by discarding the pure modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportPetz {
    /// Channel from the mixed output modes back to the full input.
    pub channel: GaussianCptpChannel,
    /// Canonical frame of `G_N`; rows `2k, 2k+1` span mode `k`.
    pub frame: Mat,
    pub mixed_modes: Vec<usize>,
    pub pure_modes: Vec<usize>,
}

impl SupportPetz {
    /// Covariance of the mixed-mode marginal of `g` in the canonical frame.
    pub fn restrict(&self, g: &CovarianceMatrix) -> Result<CovarianceMatrix> {
        let rows = select_rows(&self.frame, &self.mixed_modes);
        CovarianceMatrix::new(g.matrix().congruence(&rows)?)
    }

    /// Applies the map to a state supported on the support of `N(σ)`.
    pub fn apply(&self, g: &CovarianceMatrix) -> Result<CovarianceMatrix> {
        apply(&self.channel, &self.restrict(g)?)
    }
}

fn select_rows(m: &Mat, modes: &[usize]) -> Mat {
    Mat::from_fn(2 * modes.len(), m.ncols(), |r, c| {
        m[(2 * modes[r / 2] + r % 2, c)]
    })
}

/// Support-projection Petz map. Works for faithful `N(σ)` too, in which case
/// the channel equals [`petz`] up to the frame rotation.
pub fn petz_on_support(sigma: &CovarianceMatrix, ch: &GaussianCptpChannel) -> Result<SupportPetz> {
    check_reference(sigma, ch)?;
    let n_sigma = apply(ch, sigma)?;
    let pure = pure_modes(&n_sigma);
    let mixed: Vec<usize> = (0..n_sigma.modes()).filter(|k| !pure.contains(k)).collect();
    let frame = n_sigma.canonical().rotation().clone();
    let rows = select_rows(&frame, &mixed);
    let reduced = GaussianCptpChannel::new_unchecked(ch.a().congruence(&rows)?, &rows * ch.b())?;
    let reduced_output = CovarianceMatrix::new(n_sigma.matrix().congruence(&rows)?)?;
    let channel = petz_from_output(sigma, &reduced, &reduced_output)?;
    Ok(SupportPetz {
        channel,
        frame,
        mixed_modes: mixed,
        pure_modes: pure,
    })
}

/// Which composition routine the three-map construction uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositionPath {
    /// [`compose`]: inverse-free form, regularizing only if `I + A₁D₂` is singular.
    InverseFree,
    /// [`compose_regularized`]: the literal rule with `ε`-regularized `A₁`.
    Regularized,
}

/// Builds the Petz map as `N₃ ∘ N₂ ∘ N₁` with `N₁: X ↦ N(σ)^{-1/2} X N(σ)^{-1/2}`,
/// `N₂ = N*`, `N₃: X ↦ σ^{1/2} X σ^{1/2}`. The full data is returned so the
/// caller can inspect `C` (which squares to 1) and `D` (which vanishes).
pub fn petz_via_composition(
    sigma: &CovarianceMatrix,
    ch: &GaussianCptpChannel,
) -> Result<GaussianChannelData> {
    petz_via_composition_using(sigma, ch, CompositionPath::InverseFree)
}

pub fn petz_via_composition_using(
    sigma: &CovarianceMatrix,
    ch: &GaussianCptpChannel,
    path: CompositionPath,
) -> Result<GaussianChannelData> {
    check_reference(sigma, ch)?;
    let n_sigma = apply(ch, sigma)?;
    let n1 = sandwich_inv_sqrt(&n_sigma)?;
    let n2 = adjoint(&ch.data());
    let n3 = sandwich_sqrt(sigma);
    let compose_with = match path {
        CompositionPath::InverseFree => compose,
        CompositionPath::Regularized => compose_regularized,
    };
    compose_with(&n3, &compose_with(&n2, &n1)?)
}

/// Rotated Petz map at parameter `t`:
/// `A = B_{σ,t} A_P B_{σ,t}ᵀ`, `B = B_{σ,t} B_P B_{N(σ),-t}` with
/// `B_{σ,t} = exp(-2t arctanh G_σ)`. Both `σ` and `N(σ)` must be strictly
/// positive and `|t| ≤ 50`.
pub fn rotated_petz(
    sigma: &CovarianceMatrix,
    ch: &GaussianCptpChannel,
    t: f64,
) -> Result<GaussianCptpChannel> {
    check_reference(sigma, ch)?;
    sigma.require_strictly_positive()?;
    let n_sigma = apply(ch, sigma)?;
    n_sigma.require_strictly_positive()?;
    let p = petz_from_output(sigma, ch, &n_sigma)?;
    let b_sigma = power_rotation(sigma, t)?;
    let b_n = power_rotation(&n_sigma, -t)?;
    let a = p.a().congruence(&b_sigma)?;
    let b = &b_sigma * p.b() * b_n;
    GaussianCptpChannel::new_unchecked(a, b)
}

/// Residual `max |P(N(σ)) - G_σ|` of a recovery channel on its reference.
pub fn recovery_residual(
    sigma: &CovarianceMatrix,
    ch: &GaussianCptpChannel,
    recovery: &GaussianCptpChannel,
) -> Result<f64> {
    let out = apply(ch, sigma)?;
    let back = out.matrix().congruence(recovery.b())?.add(recovery.a())?;
    Ok(crate::linalg::max_abs_diff(back.as_matrix(), sigma.as_matrix()))
}
