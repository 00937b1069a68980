// Copyright 2026 The fgauss Authors
// SPDX-License-Identifier: Apache-2.0

//! Fermionic Gaussian states and channels at the covariance-matrix level.
//!
//! A Gaussian state on `n` modes is a real antisymmetric `2n x 2n`
//! covariance matrix `G` with `Gᵢⱼ = (i/2) tr(ρ[γᵢ, γⱼ])`. A Gaussian channel
//! carries the data `(A, B, C, D)` of its Grassmann integral representation;
//! CPTP channels have `C = 1`, `D = 0` and act as `G ↦ B G Bᵀ + A`.
//!
//! The crate provides:
//!
//! - [`linalg`]: canonical block form, Pfaffians, odd/even spectral functions.
//! - [`state`]: covariance matrices, thermal states, Wick correlators, state powers.
//! - [`channel`]: CP/TP/unital checks, composition, adjoints, sandwich maps.
//! - [`recovery`]: the Petz recovery map, its three-map composition, and the rotated map.
//! - [`fidelity`]: closed-form fidelity and overlap.
//! - [`models`]: dilation, attenuator, unitary and random channel constructors.
//! - [`dense`]: a brute-force `2ⁿ`-dimensional operator oracle for cross-checks.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod channel;
pub mod dense;
pub mod error;
pub mod fidelity;
pub mod linalg;
pub mod models;
pub mod random;
pub mod recovery;
pub mod state;

pub use channel::{GaussianChannelData, GaussianCptpChannel};
pub use error::{Error, Result};
pub use linalg::{AntisymmetricMatrix, CanonicalForm, Mat};
pub use state::{CovarianceMatrix, InverseTemperature, QuadraticHamiltonian};
