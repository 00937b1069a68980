// Copyright 2026 The fgauss Authors
// SPDX-License-Identifier: Apache-2.0

//! Seeded random draws. All randomness takes an explicit generator.

use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{det, AntisymmetricMatrix, Mat};
use crate::state::CovarianceMatrix;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer, used to derive independent per-trial seeds.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Antisymmetric matrix with independent standard normal entries above the diagonal.
pub fn random_antisymmetric<R: Rng + ?Sized>(rng: &mut R, modes: usize) -> AntisymmetricMatrix {
    let g = gaussian_matrix(rng, 2 * modes, 2 * modes);
    AntisymmetricMatrix::from_antisymmetric_part(&(&g - g.transpose()))
}

/// Haar-distributed element of SO(dim): QR of a Gaussian matrix with the
/// diagonal of R made positive, then two columns swapped if `det = -1`.
pub fn random_special_orthogonal<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Mat {
    if dim == 0 {
        return Mat::zeros(0, 0);
    }
    let qr = gaussian_matrix(rng, dim, dim).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if dim > 1 && det(&q) < 0.0 {
        q.swap_columns(0, 1);
    }
    q
}

/// Random Gaussian state with Williamson values uniform in `[lo, hi]`, random
/// block orientations, and a Haar-random frame.
pub fn random_covariance<R: Rng + ?Sized>(
    rng: &mut R,
    modes: usize,
    lo: f64,
    hi: f64,
) -> CovarianceMatrix {
    let values: Vec<f64> = (0..modes)
        .map(|_| {
            let v = rng.gen_range(lo..=hi);
            if rng.gen::<bool>() {
                v
            } else {
                -v
            }
        })
        .collect();
    let o = random_special_orthogonal(rng, 2 * modes);
    let g = AntisymmetricMatrix::canonical(&values)
        .congruence(&o)
        .expect("square rotation");
    CovarianceMatrix::new(g).expect("spectrum within the unit interval")
}

/// Random mixed state with Williamson values in `[0, 0.95]`.
pub fn random_mixed_covariance<R: Rng + ?Sized>(rng: &mut R, modes: usize) -> CovarianceMatrix {
    random_covariance(rng, modes, 0.0, 0.95)
}

/// Random pure state.
pub fn random_pure_covariance<R: Rng + ?Sized>(rng: &mut R, modes: usize) -> CovarianceMatrix {
    random_covariance(rng, modes, 1.0, 1.0)
}
