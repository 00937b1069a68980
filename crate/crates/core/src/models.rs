// Copyright 2026 The fgauss Authors
// SPDX-License-Identifier: Apache-2.0

//! Channel constructors: unitaries, dilations, attenuators, random channels.

use crate::channel::GaussianCptpChannel;
use crate::error::{Error, Result};
use crate::linalg::{special_orthogonal_deviation, AntisymmetricMatrix, Mat, ORTHOGONALITY_TOL};
use crate::random::{random_mixed_covariance, random_special_orthogonal, rng};
use crate::state::CovarianceMatrix;

fn require_special_orthogonal(r: &Mat) -> Result<()> {
    let deviation = special_orthogonal_deviation(r);
    if deviation > ORTHOGONALITY_TOL {
        return Err(Error::NotSpecialOrthogonal { deviation });
    }
    Ok(())
}

/// Stinespring-type realization: system modes `0..n` and environment modes
/// `n..n+m` evolve by `R ∈ SO(2(n+m))`, the environment starts in `G_E`, and
/// is traced out afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct Dilation {
    r: Mat,
    g_e: CovarianceMatrix,
    n: usize,
    m: usize,
}

impl Dilation {
    pub fn new(r: Mat, g_e: CovarianceMatrix, n: usize) -> Result<Self> {
        let m = g_e.modes();
        if r.nrows() != 2 * (n + m) || !r.is_square() {
            return Err(Error::DimensionMismatch {
                context: "dilation rotation",
                expected: 2 * (n + m),
                found: r.nrows(),
            });
        }
        require_special_orthogonal(&r)?;
        Ok(Self { r, g_e, n, m })
    }

    pub fn rotation(&self) -> &Mat {
        &self.r
    }

    pub fn environment(&self) -> &CovarianceMatrix {
        &self.g_e
    }

    pub fn system_modes(&self) -> usize {
        self.n
    }

    pub fn environment_modes(&self) -> usize {
        self.m
    }

    /// The system–system block `R_SS`.
    pub fn system_block(&self) -> Mat {
        self.r.view((0, 0), (2 * self.n, 2 * self.n)).into_owned()
    }

    /// The system–environment block `R_SE`.
    pub fn coupling_block(&self) -> Mat {
        self.r
            .view((0, 2 * self.n), (2 * self.n, 2 * self.m))
            .into_owned()
    }
}

/// `A = 0`, `B = R` for `R ∈ SO(2n)`.
pub fn unitary_channel(r: Mat) -> Result<GaussianCptpChannel> {
    if !r.is_square() {
        return Err(Error::NotSquare {
            rows: r.nrows(),
            cols: r.ncols(),
        });
    }
    require_special_orthogonal(&r)?;
    GaussianCptpChannel::new_unchecked(AntisymmetricMatrix::zeros(r.nrows() / 2), r)
}

/// `G ↦ [R (G ⊕ G_E) Rᵀ]_SS`, i.e. `B = R_SS`, `A = R_SE G_E R_SEᵀ`.
pub fn dilation_channel(d: &Dilation) -> GaussianCptpChannel {
    let a = d
        .g_e
        .matrix()
        .congruence(&d.coupling_block())
        .expect("coupling block shape");
    GaussianCptpChannel::new_unchecked(a, d.system_block()).expect("block shapes")
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value })
    }
}

/// Beam-splitter dilation of the single-mode attenuator: transmissivity `η`,
/// environment `λ_E J`.
pub fn attenuator_dilation(eta: f64, lambda_e: f64) -> Result<Dilation> {
    check_unit("eta", eta)?;
    check_unit("lambda_e", lambda_e)?;
    let (c, s) = (libm::sqrt(eta), libm::sqrt(1.0 - eta));
    let mut r = Mat::zeros(4, 4);
    for i in 0..2 {
        r[(i, i)] = c;
        r[(i + 2, i + 2)] = c;
        r[(i, i + 2)] = -s;
        r[(i + 2, i)] = s;
    }
    Dilation::new(r, CovarianceMatrix::product(&[lambda_e])?, 1)
}

/// Single-mode attenuator: `B = √η I₂`, `A = (1 - η) λ_E J`.
pub fn attenuator(eta: f64, lambda_e: f64) -> Result<GaussianCptpChannel> {
    Ok(dilation_channel(&attenuator_dilation(eta, lambda_e)?))
}

/// Dilation that exchanges system and environment (`n = m`).
pub fn swap_dilation(g_e: CovarianceMatrix) -> Dilation {
    let n = g_e.modes();
    let mut r = Mat::zeros(4 * n, 4 * n);
    for i in 0..2 * n {
        r[(i, i + 2 * n)] = 1.0;
        r[(i + 2 * n, i)] = 1.0;
    }
    // 2n transpositions, so det R = +1.
    Dilation::new(r, g_e, n).expect("permutation is orthogonal")
}

/// Random dilation: Haar `R ∈ SO(2(n+m))`, environment with Williamson values
/// in `[0, 0.95]`. Deterministic per seed.
pub fn random_dilation(seed: u64, n: usize, m: usize) -> Dilation {
    let mut r = rng(seed);
    let rot = random_special_orthogonal(&mut r, 2 * (n + m));
    let g_e = random_mixed_covariance(&mut r, m);
    Dilation::new(rot, g_e, n).expect("Haar draw is special orthogonal")
}

pub fn random_channel(seed: u64, n: usize, m: usize) -> GaussianCptpChannel {
    dilation_channel(&random_dilation(seed, n, m))
}
