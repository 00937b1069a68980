// Copyright 2026 The fgauss Authors
// SPDX-License-Identifier: Apache-2.0

//! Fidelity and overlap between Gaussian states.

use crate::channel::{apply, GaussianCptpChannel};
use crate::error::{Error, Result};
use crate::linalg::{canonical_decompose, log_det, AntisymmetricMatrix, Mat, SINGULAR_TOL};
use crate::state::CovarianceMatrix;

use core::cmp::Ordering;

/// Negative values of manifestly nonnegative quantities down to this are
/// treated as rounding and clipped to zero.
pub const NONNEGATIVE_TOL: f64 = 1e-10;

/// Williamson values this close to 1 count as exactly pure inside the
/// fidelity formula. Without it, rounding of order `1e-16` in a pure value
/// becomes an error of order `1e-8` through `√(1 - x²)`.
pub const PURE_SNAP: f64 = 1e-13;

fn pure_gap(x: f64) -> f64 {
    if 1.0 - libm::fabs(x) <= PURE_SNAP {
        0.0
    } else {
        1.0 - x * x
    }
}

fn check_modes(rho: &CovarianceMatrix, sigma: &CovarianceMatrix) -> Result<()> {
    if rho.modes() != sigma.modes() {
        return Err(Error::DimensionMismatch {
            context: "fidelity operands",
            expected: rho.modes(),
            found: sigma.modes(),
        });
    }
    Ok(())
}

/// `det(I - G_ρ G_σ)` as `(value, log)`, or `None` when it vanishes to `1e-10`.
fn overlap_determinant(rho: &CovarianceMatrix, sigma: &CovarianceMatrix) -> Result<Option<(Mat, f64)>> {
    let dim = 2 * rho.modes();
    let m = Mat::identity(dim, dim) - rho.as_matrix() * sigma.as_matrix();
    let ld = log_det(&m);
    let value = ld.value();
    if ld.sign == 0.0 || libm::fabs(value) <= SINGULAR_TOL {
        return Ok(None);
    }
    if ld.sign < 0.0 {
        return Err(Error::Numerical {
            what: "det(I - G_rho G_sigma)",
            value,
        });
    }
    Ok(Some((m, ld.log_abs)))
}

/// `tr(ρσ) = 2⁻ⁿ det(I - G_ρ G_σ)^{1/2}`.
pub fn overlap(rho: &CovarianceMatrix, sigma: &CovarianceMatrix) -> Result<f64> {
    check_modes(rho, sigma)?;
    let n = rho.modes() as f64;
    Ok(match overlap_determinant(rho, sigma)? {
        None => 0.0,
        Some((_, log_det)) => libm::exp(0.5 * log_det - n * core::f64::consts::LN_2),
    })
}

/// Ordering that puts the purer state second. Pure modes of `σ` make
/// `√(I + G_σ²)` vanish exactly there, which keeps `1 - μ²` free of
/// cancellation; the tie-break on entries makes the choice independent of
/// argument order.
fn purer(a: &CovarianceMatrix, b: &CovarianceMatrix) -> Ordering {
    let key = |g: &CovarianceMatrix| {
        let w = g.williamson();
        let pure = w.iter().filter(|v| 1.0 - **v <= SINGULAR_TOL).count();
        (pure, w.iter().map(|v| v * v).sum::<f64>())
    };
    let (ka, kb) = (key(a), key(b));
    ka.0.cmp(&kb.0)
        .then(ka.1.total_cmp(&kb.1))
        .then_with(|| {
            a.as_matrix()
                .iter()
                .zip(b.as_matrix().iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
}

/// `F(ρ, σ) = tr √(σ^{1/2} ρ σ^{1/2})`.
///
/// With `S = √(I + G_σ²)`, the operator `σ^{1/2} ρ σ^{1/2}` is
/// `tr(ρσ)` times a Gaussian state with covariance
/// `G' = G_σ + S (I - G_ρ G_σ)⁻¹ G_ρ S`. If `μₖ` are its Williamson values,
///
/// ```text
/// F = 2^{-n/2} det(I - G_ρ G_σ)^{1/4} ∏ₖ (1 + √(1 - μₖ²))^{1/2},
/// ```
///
/// which equals `2^{-n/2} det(I - G_ρG_σ)^{1/4} det(I + √(I + G̃²))^{1/4}` with
/// `G̃ = (G_σ + G_ρ)(I - G_σ G_ρ)⁻¹`. A vanishing `det(I - G_ρ G_σ)` (within
/// `1e-10`) means orthogonal supports and returns exactly 0. The formula is
/// evaluated with the purer argument in the `σ` slot.
pub fn fidelity(rho: &CovarianceMatrix, sigma: &CovarianceMatrix) -> Result<f64> {
    check_modes(rho, sigma)?;
    let n = rho.modes();
    if n == 0 {
        return Ok(1.0);
    }
    let (rho, sigma) = if purer(rho, sigma).is_gt() { (sigma, rho) } else { (rho, sigma) };
    let Some((m, log_det)) = overlap_determinant(rho, sigma)? else {
        return Ok(0.0);
    };
    let s = sigma
        .canonical()
        .map_even(|x| libm::sqrt(pure_gap(x).max(0.0)))
        .expect("finite on [0, 1]");
    // (I - G_ρ G_σ)⁻¹ G_ρ S
    let y = m
        .lu()
        .solve(&(rho.as_matrix() * &s))
        .ok_or(Error::Singularity { value: 0.0 })?;
    let g_prime = sigma.as_matrix() + &s * y;
    let form = canonical_decompose(&AntisymmetricMatrix::from_antisymmetric_part(&g_prime));
    let mut log_f = 0.25 * log_det - 0.5 * (n as f64) * core::f64::consts::LN_2;
    for mu in form.williamson() {
        let gap = pure_gap(*mu);
        if gap < -NONNEGATIVE_TOL {
            return Err(Error::Numerical {
                what: "1 - mu^2",
                value: gap,
            });
        }
        log_f += 0.5 * libm::log(1.0 + libm::sqrt(gap.max(0.0)));
    }
    Ok(libm::exp(log_f))
}

/// `F(N(ρ), N(σ)) - F(ρ, σ)`; nonnegative up to rounding for every channel.
pub fn monotonicity_margin(
    rho: &CovarianceMatrix,
    sigma: &CovarianceMatrix,
    ch: &GaussianCptpChannel,
) -> Result<f64> {
    let before = fidelity(rho, sigma)?;
    let after = fidelity(&apply(ch, rho)?, &apply(ch, sigma)?)?;
    Ok(after - before)
}
