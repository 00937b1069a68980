// Copyright 2026 The fgauss Authors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::{ComplexField, DMatrix, DVector, SymmetricEigen};

const MAX_SWEEPS: usize = 60;
const OFF_DIAGONAL_TOL: f64 = 1e-16;

/// Eigendecomposition `H = V diag(λ) Vᴴ` of a Hermitian matrix (real
/// symmetric or complex), with `V` unitary.
///
/// The library eigensolver can leave residuals near `1e-9` when eigenvalues
/// cluster, so its vectors only seed cyclic Jacobi sweeps on `Vᴴ H V`.
/// Only the Hermitian part of `m` is used.
pub fn hermitian_eigen<T>(m: &DMatrix<T>) -> (DVector<f64>, DMatrix<T>)
where
    T: ComplexField<RealField = f64> + Copy,
{
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "hermitian_eigen of a non-square matrix");
    let half = T::from_real(0.5);
    let herm = (m + m.adjoint()) * half;
    let mut v = SymmetricEigen::new(herm.clone()).eigenvectors;
    let mut a = v.adjoint() * &herm * &v;
    let scale = a.iter().map(|x| x.modulus_squared()).sum::<f64>().sqrt();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let size = apq.modulus();
                let (app, aqq) = (a[(p, p)].real(), a[(q, q)].real());
                if size <= OFF_DIAGONAL_TOL * (app.abs() * aqq.abs()).sqrt() || size <= 1e-300 * scale || size == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = apq.unscale(size);
                let zeta = (aqq - app) / (2.0 * size);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (cc, sp, sq) = (T::from_real(c), phase.scale(s), phase.conjugate().scale(s));
                // A ← A J, V ← V J with J[p,p] = J[q,q] = c, J[p,q] = s e^{iφ}, J[q,p] = -s e^{-iφ}.
                for mat in [&mut a, &mut v] {
                    for r in 0..n {
                        let (x, y) = (mat[(r, p)], mat[(r, q)]);
                        mat[(r, p)] = cc * x - sq * y;
                        mat[(r, q)] = sp * x + cc * y;
                    }
                }
                // A ← Jᴴ A.
                for col in 0..n {
                    let (x, y) = (a[(p, col)], a[(q, col)]);
                    a[(p, col)] = cc * x - sp * y;
                    a[(q, col)] = sq * x + cc * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (DVector::from_fn(n, |k, _| a[(k, k)].real()), v)
}
