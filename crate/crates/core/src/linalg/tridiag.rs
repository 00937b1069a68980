// Copyright 2026 The fgauss Authors
// SPDX-License-Identifier: Apache-2.0

use alloc::vec;
use alloc::vec::Vec;

use super::{AntisymmetricMatrix, Mat};

/// Antisymmetric tridiagonal reduction `M = Q T Qᵀ`.
///
/// `T` is stored through its superdiagonal: `T[i][i+1] = superdiag[i]`,
/// `T[i+1][i] = -superdiag[i]`.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub superdiag: Vec<f64>,
    /// Accumulated orthogonal factor, present when requested.
    pub q: Option<Mat>,
    /// Number of nontrivial Householder reflections, so `det Q = (-1)^reflections`.
    pub reflections: usize,
}

/// Householder reduction of an antisymmetric matrix to antisymmetric
/// tridiagonal form. `O(n³)`; the trailing updates preserve exact
/// antisymmetry of the working copy.
pub fn tridiagonalize(m: &AntisymmetricMatrix, accumulate_q: bool) -> Tridiagonal {
    let n = m.dim();
    let mut a: Vec<f64> = m.as_matrix().as_slice().to_vec();
    let mut q = if accumulate_q {
        Some(Mat::identity(n, n))
    } else {
        None
    };
    let mut reflections = 0;
    let idx = |i: usize, j: usize| i + j * n;

    let mut v = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut t = vec![0.0; n];

    for i in 0..n.saturating_sub(2) {
        let len = n - i - 1;
        let x0 = a[idx(i + 1, i)];
        let sigma: f64 = (i + 2..n).map(|r| a[idx(r, i)] * a[idx(r, i)]).sum();
        if sigma == 0.0 {
            continue;
        }
        let norm = libm::sqrt(x0 * x0 + sigma);
        let v = &mut v[..len];
        for (k, r) in (i + 1..n).enumerate() {
            v[k] = a[idx(r, i)];
        }
        let alpha = if x0 <= 0.0 {
            v[0] -= norm;
            norm
        } else {
            v[0] += norm;
            -norm
        };
        let vn = libm::sqrt(v.iter().map(|x| x * x).sum::<f64>());
        v.iter_mut().for_each(|x| *x /= vn);
        reflections += 1;

        a[idx(i + 1, i)] = alpha;
        a[idx(i, i + 1)] = -alpha;
        for r in i + 2..n {
            a[idx(r, i)] = 0.0;
            a[idx(i, r)] = 0.0;
        }

        // w = 2 S v on the trailing block S = a[i+1.., i+1..].
        let w = &mut w[..len];
        w.iter_mut().for_each(|x| *x = 0.0);
        for (c, vc) in v.iter().enumerate() {
            if *vc == 0.0 {
                continue;
            }
            let col = &a[idx(i + 1, i + 1 + c)..idx(i + 1, i + 1 + c) + len];
            for (wr, s) in w.iter_mut().zip(col) {
                *wr += 2.0 * s * vc;
            }
        }
        // S += v wᵀ - w vᵀ
        for c in 0..len {
            let (vc, wc) = (v[c], w[c]);
            let start = idx(i + 1, i + 1 + c);
            let col = &mut a[start..start + len];
            for r in 0..len {
                col[r] += v[r] * wc - w[r] * vc;
            }
        }

        if let Some(q) = q.as_mut() {
            // Q[:, i+1..] -= 2 (Q[:, i+1..] v) vᵀ
            let qs = q.as_mut_slice();
            let t = &mut t[..n];
            t.iter_mut().for_each(|x| *x = 0.0);
            for (c, vc) in v.iter().enumerate() {
                let start = (i + 1 + c) * n;
                for (tr, qv) in t.iter_mut().zip(&qs[start..start + n]) {
                    *tr += qv * vc;
                }
            }
            for (c, vc) in v.iter().enumerate() {
                let start = (i + 1 + c) * n;
                for (qv, tr) in qs[start..start + n].iter_mut().zip(t.iter()) {
                    *qv -= 2.0 * tr * vc;
                }
            }
        }
    }

    let superdiag = (0..n.saturating_sub(1)).map(|i| a[idx(i, i + 1)]).collect();
    Tridiagonal {
        superdiag,
        q,
        reflections,
    }
}

impl Tridiagonal {
    /// Dense `T`.
    pub fn to_matrix(&self) -> Mat {
        let n = self.superdiag.len() + 1;
        let mut t = Mat::zeros(n, n);
        for (i, e) in self.superdiag.iter().enumerate() {
            t[(i, i + 1)] = *e;
            t[(i + 1, i)] = -*e;
        }
        t
    }
}
