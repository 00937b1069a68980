// Copyright 2026 The fgauss Authors
// SPDX-License-Identifier: Apache-2.0

use alloc::vec;
use alloc::vec::Vec;

use super::{det, tridiagonalize, AntisymmetricMatrix, LogValue, Mat, SINGULAR_TOL};

/// `M = Oᵀ (diag(s ∘ β) ⊗ J) O` with `O ∈ SO(2n)`, `β` sorted descending and
/// nonnegative, and `s ∈ {±1}` the block orientation.
///
/// Row `2k` of `O` is the vector `o₁` of block `k`, row `2k+1` is `o₂`, so
/// that `M o₁ = sβ o₂` and `M o₂ = -sβ o₁`. When every `β` is nonzero the
/// sign of `Pf(M)` fixes `det O` once all orientations are positive; in that
/// case the last (smallest) block carries `s = -1`. All other blocks have
/// `s = +1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalForm {
    rotation: Mat,
    williamson: Vec<f64>,
    orientation: Vec<f64>,
}

/// Tie tolerance for grouping degenerate Williamson values.
const DEGENERACY_TOL: f64 = 1e-10;

/// Block canonical form of an antisymmetric matrix.
///
/// The matrix is reduced to antisymmetric tridiagonal form `T = Qᵀ M Q`.
/// Reordering `T` into even and odd indices gives `[[0, K], [-Kᵀ, 0]]` with
/// `K` lower bidiagonal, so the SVD `K = U Σ Vᵀ` supplies the 2-planes:
/// `o₁ = Q (V e_k on odd slots)`, `o₂ = Q (U e_k on even slots)`.
pub fn canonical_decompose(m: &AntisymmetricMatrix) -> CanonicalForm {
    let dim = m.dim();
    let n = m.modes();
    if n == 0 {
        return CanonicalForm {
            rotation: Mat::zeros(0, 0),
            williamson: Vec::new(),
            orientation: Vec::new(),
        };
    }
    let tri = tridiagonalize(m, true);
    let q = tri.q.expect("accumulated Q requested");
    let e = &tri.superdiag;

    let mut k = Mat::zeros(n, n);
    for a in 0..n {
        k[(a, a)] = e[2 * a];
        if a > 0 {
            k[(a, a - 1)] = -e[2 * a - 1];
        }
    }
    let (u, sigma, v) = refined_svd(&k);

    let q_even = Mat::from_fn(dim, n, |r, a| q[(r, 2 * a)]);
    let q_odd = Mat::from_fn(dim, n, |r, a| q[(r, 2 * a + 1)]);
    let o1 = q_odd * v;
    let o2 = q_even * u;

    let mut blocks: Vec<Block> = (0..n)
        .map(|j| {
            let mut b = Block {
                value: sigma[j].max(0.0),
                o1: o1.column(j).iter().copied().collect(),
                o2: o2.column(j).iter().copied().collect(),
            };
            b.normalize_sign();
            b
        })
        .collect();

    // Descending values; within a degenerate run order by the position of the
    // leading component of o₁ so identical inputs give identical pairings.
    blocks.sort_by(|x, y| y.value.total_cmp(&x.value));
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && blocks[end - 1].value - blocks[end].value <= DEGENERACY_TOL {
            end += 1;
        }
        blocks[start..end].sort_by_key(|b| b.leading_index());
        start = end;
    }

    let mut rotation = Mat::zeros(dim, dim);
    for (j, b) in blocks.iter().enumerate() {
        for c in 0..dim {
            rotation[(2 * j, c)] = b.o1[c];
            rotation[(2 * j + 1, c)] = b.o2[c];
        }
    }
    let williamson: Vec<f64> = blocks.iter().map(|b| b.value).collect();
    let mut orientation = vec![1.0; n];

    if det(&rotation) < 0.0 {
        let last = n - 1;
        if williamson[last] <= SINGULAR_TOL {
            for c in 0..dim {
                rotation[(2 * last + 1, c)] = -rotation[(2 * last + 1, c)];
            }
        } else {
            rotation.swap_rows(2 * last, 2 * last + 1);
            orientation[last] = -1.0;
        }
    }

    CanonicalForm {
        rotation,
        williamson,
        orientation,
    }
}

/// SVD `K = U diag(σ) Vᵀ` to working precision. The library SVD leaves
/// reconstruction errors near `1e-9` on clustered spectra, so its `V` only
/// seeds one-sided Jacobi sweeps on `W = K V`, which converge in a few passes.
fn refined_svd(k: &Mat) -> (Mat, Vec<f64>, Mat) {
    let n = k.ncols();
    let seed = k.clone().svd(true, true);
    let mut v = seed.v_t.expect("Vᵀ requested").transpose();
    let mut w = k * &v;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dot(&w.column(q));
                if libm::fabs(gamma) <= JACOBI_TOL * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (libm::fabs(zeta) + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                for m in [&mut w, &mut v] {
                    for r in 0..n {
                        let (x, y) = (m[(r, p)], m[(r, q)]);
                        m[(r, p)] = c * x - s * y;
                        m[(r, q)] = s * x + c * y;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let sigma: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    let scale = sigma.iter().copied().fold(0.0, f64::max);
    let mut u = Mat::zeros(n, n);
    let mut missing = Vec::new();
    for j in 0..n {
        if sigma[j] > scale * 1e-300 && sigma[j] > 0.0 {
            u.set_column(j, &(w.column(j) / sigma[j]));
        } else {
            missing.push(j);
        }
    }
    // Null directions: complete U from the seed's columns by Gram–Schmidt.
    let seed_u = seed.u.expect("U requested");
    let mut candidates = (0..n).map(|j| seed_u.column(j).into_owned()).chain(
        (0..n).map(|j| {
            let mut e = nalgebra::DVector::zeros(n);
            e[j] = 1.0;
            e
        }),
    );
    for j in missing {
        loop {
            let mut x = candidates.next().expect("basis spans the space");
            for _ in 0..2 {
                for c in 0..n {
                    if c == j || u.column(c).norm() == 0.0 {
                        continue;
                    }
                    let proj = u.column(c).dot(&x);
                    x -= u.column(c) * proj;
                }
            }
            let norm = x.norm();
            if norm > 0.5 {
                u.set_column(j, &(x / norm));
                break;
            }
        }
    }
    (u, sigma, v)
}

const JACOBI_MAX_SWEEPS: usize = 60;
const JACOBI_TOL: f64 = 1e-15;

struct Block {
    value: f64,
    o1: Vec<f64>,
    o2: Vec<f64>,
}

impl Block {
    fn leading_index(&self) -> usize {
        self.o1
            .iter()
            .position(|x| libm::fabs(*x) > 1e-12)
            .unwrap_or(self.o1.len())
    }

    fn normalize_sign(&mut self) {
        let i = self.leading_index();
        if i < self.o1.len() && self.o1[i] < 0.0 {
            self.o1.iter_mut().for_each(|x| *x = -*x);
            self.o2.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

impl CanonicalForm {
    /// Builds a form from parts. `rotation` must be special orthogonal.
    pub fn from_parts(rotation: Mat, williamson: Vec<f64>, orientation: Vec<f64>) -> Self {
        assert_eq!(rotation.nrows(), 2 * williamson.len());
        assert_eq!(williamson.len(), orientation.len());
        Self {
            rotation,
            williamson,
            orientation,
        }
    }

    pub fn rotation(&self) -> &Mat {
        &self.rotation
    }

    pub fn williamson(&self) -> &[f64] {
        &self.williamson
    }

    pub fn orientation(&self) -> &[f64] {
        &self.orientation
    }

    pub fn modes(&self) -> usize {
        self.williamson.len()
    }

    /// `sₖ βₖ`: the values `χ` with `M = Oᵀ (χ ⊗ J) O`.
    pub fn signed_values(&self) -> Vec<f64> {
        self.williamson
            .iter()
            .zip(&self.orientation)
            .map(|(b, s)| b * s)
            .collect()
    }

    /// `Oᵀ (⊕ₖ blockₖ) O` for arbitrary 2x2 blocks, given row-major as
    /// `[b00, b01, b10, b11]`.
    pub fn synthesize(&self, mut block: impl FnMut(usize) -> [f64; 4]) -> Mat {
        let dim = self.rotation.nrows();
        let mut w = Mat::zeros(dim, dim);
        for k in 0..self.modes() {
            let [b00, b01, b10, b11] = block(k);
            let o1 = self.rotation.row(2 * k);
            let o2 = self.rotation.row(2 * k + 1);
            for r in 0..dim {
                w[(r, 2 * k)] = o1[r] * b00 + o2[r] * b10;
                w[(r, 2 * k + 1)] = o1[r] * b01 + o2[r] * b11;
            }
        }
        w * &self.rotation
    }

    pub fn reconstruct(&self) -> AntisymmetricMatrix {
        let chi = self.signed_values();
        AntisymmetricMatrix::from_antisymmetric_part(
            &self.synthesize(|k| [0.0, -chi[k], chi[k], 0.0]),
        )
    }

    /// `Pf(M) = det(O) Pf(χ ⊗ J) = (-1)^n ∏ χₖ`.
    pub fn pfaffian_log(&self) -> LogValue {
        let mut acc = if self.modes().is_multiple_of(2) {
            LogValue::ONE
        } else {
            LogValue {
                sign: -1.0,
                log_abs: 0.0,
            }
        };
        for chi in self.signed_values() {
            acc = acc.mul(LogValue::from_f64(chi));
        }
        acc
    }

    pub fn min_williamson(&self) -> f64 {
        self.williamson.last().copied().unwrap_or(f64::INFINITY)
    }

    pub fn max_williamson(&self) -> f64 {
        self.williamson.first().copied().unwrap_or(0.0)
    }

    /// `Oᵀ (⊕ₖ [[cos θₖ, -sin θₖ], [sin θₖ, cos θₖ]]) O`, i.e. `exp` of the
    /// antisymmetric matrix with signed values `θ`.
    pub fn rotation_exp(&self, mut angle: impl FnMut(usize) -> f64) -> Mat {
        self.synthesize(|k| {
            let t = angle(k);
            let (s, c) = (libm::sin(t), libm::cos(t));
            [c, -s, s, c]
        })
    }
}
