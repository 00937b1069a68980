// Copyright 2026 The fgauss Authors
// SPDX-License-Identifier: Apache-2.0

//! Gaussian linear maps in the Grassmann integral representation.
//!
//! A map is described by `(A, B, C, D)`: `A` acts on output modes, `D` on
//! input modes, `B` couples them (`2n_out x 2n_in`), and `C` is a scalar.
//! On a normalized Gaussian input with covariance `G` the output is
//! `C √det(I + DG)` times the Gaussian state with covariance
//! `A + B G (I + DG)⁻¹ Bᵀ`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    canonical_decompose, log_det, max_abs, pfaffian_log, spectral_norm, AntisymmetricMatrix,
    CanonicalForm, LogValue, Mat, SINGULAR_TOL,
};
use crate::state::{CovarianceMatrix, PURITY_TOL};

/// Slack in the contraction test `‖N‖ ≤ 1`.
pub const CP_TOL: f64 = 1e-10;
/// Tolerance for `C = 1`, `D = 0`, `A = 0` checks.
pub const EXACT_TOL: f64 = 1e-12;
/// Regularization nodes for singular composition, finest last. Rounding in
/// the literal rule grows like `u / ε²`, so the nodes stay large and the
/// limit comes from quadratic extrapolation.
pub const REGULARIZATION_STEPS: [f64; 3] = [3e-2, 3e-3, 3e-4];
/// The nodes are scaled by this factor for the independent check estimate.
pub const REGULARIZATION_CHECK_SCALE: f64 = 0.316_227_766_016_837_94;
/// Canonical blocks of `A₁` at or below this value are regularized.
pub const NULL_BLOCK_TOL: f64 = 1e-6;
/// Allowed spread between the two extrapolated estimates.
pub const REGULARIZATION_TOL: f64 = 1e-7;

/// The quadruple `(A, B, C, D)` of a Gaussian linear map.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannelData {
    a: AntisymmetricMatrix,
    b: Mat,
    c: Complex64,
    d: AntisymmetricMatrix,
}

impl GaussianChannelData {
    pub fn new(a: AntisymmetricMatrix, b: Mat, c: Complex64, d: AntisymmetricMatrix) -> Result<Self> {
        if b.nrows() != a.dim() {
            return Err(Error::DimensionMismatch {
                context: "rows of B vs A",
                expected: a.dim(),
                found: b.nrows(),
            });
        }
        if b.ncols() != d.dim() {
            return Err(Error::DimensionMismatch {
                context: "columns of B vs D",
                expected: d.dim(),
                found: b.ncols(),
            });
        }
        Ok(Self { a, b, c, d })
    }

    /// `A = 0`, `B = I`, `C = 1`, `D = 0`.
    pub fn identity(modes: usize) -> Self {
        GaussianCptpChannel::identity(modes).into_data()
    }

    pub fn a(&self) -> &AntisymmetricMatrix {
        &self.a
    }

    pub fn b(&self) -> &Mat {
        &self.b
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    pub fn d(&self) -> &AntisymmetricMatrix {
        &self.d
    }

    pub fn n_in(&self) -> usize {
        self.d.modes()
    }

    pub fn n_out(&self) -> usize {
        self.a.modes()
    }

    /// `N = [[A, B], [-Bᵀ, D]]`.
    pub fn block_matrix(&self) -> Mat {
        let (p, q) = (self.a.dim(), self.d.dim());
        let mut n = Mat::zeros(p + q, p + q);
        n.view_mut((0, 0), (p, p)).copy_from(self.a.as_matrix());
        n.view_mut((0, p), (p, q)).copy_from(&self.b);
        n.view_mut((p, 0), (q, p)).copy_from(&(-self.b.transpose()));
        n.view_mut((p, p), (q, q)).copy_from(self.d.as_matrix());
        n
    }

    /// Reinterprets as a CPTP channel if `C = 1` and `D = 0` within `1e-12`.
    /// Complete positivity is checked separately by [`validate_cp`].
    pub fn to_cptp(&self) -> Option<GaussianCptpChannel> {
        validate_tp(self).then(|| GaussianCptpChannel {
            a: self.a.clone(),
            b: self.b.clone(),
        })
    }
}

/// A trace-preserving Gaussian channel, `G ↦ B G Bᵀ + A`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianCptpChannel {
    a: AntisymmetricMatrix,
    b: Mat,
}

impl GaussianCptpChannel {
    /// Checks shapes and the contraction bound `‖[[A, B], [-Bᵀ, 0]]‖ ≤ 1 + 1e-10`.
    pub fn new(a: AntisymmetricMatrix, b: Mat) -> Result<Self> {
        let ch = Self::new_unchecked(a, b)?;
        let verdict = validate_cp(&ch.data());
        if verdict.is_cp() {
            Ok(ch)
        } else {
            Err(Error::NotCp {
                max_value: verdict.max_singular_value,
            })
        }
    }

    /// Checks shapes only.
    pub fn new_unchecked(a: AntisymmetricMatrix, b: Mat) -> Result<Self> {
        if b.nrows() != a.dim() {
            return Err(Error::DimensionMismatch {
                context: "rows of B vs A",
                expected: a.dim(),
                found: b.nrows(),
            });
        }
        if !b.ncols().is_multiple_of(2) {
            return Err(Error::OddDimension(b.ncols()));
        }
        Ok(Self { a, b })
    }

    pub fn identity(modes: usize) -> Self {
        Self {
            a: AntisymmetricMatrix::zeros(modes),
            b: Mat::identity(2 * modes, 2 * modes),
        }
    }

    /// `B = 0`, `A = G_fix`: discards the input and prepares a fixed state.
    pub fn replacement(n_in: usize, output: &CovarianceMatrix) -> Self {
        Self {
            a: output.matrix().clone(),
            b: Mat::zeros(2 * output.modes(), 2 * n_in),
        }
    }

    pub fn a(&self) -> &AntisymmetricMatrix {
        &self.a
    }

    pub fn b(&self) -> &Mat {
        &self.b
    }

    pub fn n_in(&self) -> usize {
        self.b.ncols() / 2
    }

    pub fn n_out(&self) -> usize {
        self.a.modes()
    }

    pub fn data(&self) -> GaussianChannelData {
        GaussianChannelData {
            a: self.a.clone(),
            b: self.b.clone(),
            c: Complex64::new(1.0, 0.0),
            d: AntisymmetricMatrix::zeros(self.n_in()),
        }
    }

    pub fn into_data(self) -> GaussianChannelData {
        let d = AntisymmetricMatrix::zeros(self.n_in());
        GaussianChannelData {
            a: self.a,
            b: self.b,
            c: Complex64::new(1.0, 0.0),
            d,
        }
    }
}

/// Outcome of the complete-positivity test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpVerdict {
    pub max_singular_value: f64,
    pub c_nonnegative: bool,
}

impl CpVerdict {
    pub fn is_cp(&self) -> bool {
        self.c_nonnegative && self.max_singular_value <= 1.0 + CP_TOL
    }
}

/// CP iff `C ≥ 0` and the block matrix `N` is a contraction.
pub fn validate_cp(ch: &GaussianChannelData) -> CpVerdict {
    CpVerdict {
        max_singular_value: spectral_norm(&ch.block_matrix()),
        c_nonnegative: libm::fabs(ch.c.im) <= EXACT_TOL && ch.c.re >= -EXACT_TOL,
    }
}

/// TP iff `C = 1` and `D = 0`.
pub fn validate_tp(ch: &GaussianChannelData) -> bool {
    (ch.c - 1.0).norm() <= EXACT_TOL && max_abs(ch.d.as_matrix()) <= EXACT_TOL
}

/// Unital iff `C = 1` and `A = 0`.
pub fn validate_unital(ch: &GaussianChannelData) -> bool {
    (ch.c - 1.0).norm() <= EXACT_TOL && max_abs(ch.a.as_matrix()) <= EXACT_TOL
}

fn check_input(expected: usize, g: &CovarianceMatrix) -> Result<()> {
    if g.modes() != expected {
        return Err(Error::DimensionMismatch {
            context: "channel input modes",
            expected,
            found: g.modes(),
        });
    }
    Ok(())
}

/// `B G Bᵀ + A`, validated as a covariance matrix.
pub fn apply(ch: &GaussianCptpChannel, g: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    check_input(ch.n_in(), g)?;
    let out = g.matrix().congruence(&ch.b)?.add(&ch.a)?;
    CovarianceMatrix::new(out).map_err(|e| match e {
        Error::InvalidState { offending } => Error::NotCp {
            max_value: offending.iter().copied().fold(0.0, f64::max),
        },
        other => other,
    })
}

/// Image of a normalized Gaussian input under a general Gaussian map.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianImage {
    /// Covariance of the normalized output, `A + B G (I + DG)⁻¹ Bᵀ`.
    pub covariance: AntisymmetricMatrix,
    /// Trace of the output, `C √det(I + DG)`.
    pub trace: Complex64,
}

pub fn gaussian_action(ch: &GaussianChannelData, g: &CovarianceMatrix) -> Result<GaussianImage> {
    check_input(ch.n_in(), g)?;
    let dim = g.matrix().dim();
    let m = Mat::identity(dim, dim) + ch.d.as_matrix() * g.as_matrix();
    let ld = log_det(&m);
    if ld.sign == 0.0 || ld.log_abs < libm::log(SINGULAR_TOL) {
        return Ok(GaussianImage {
            covariance: AntisymmetricMatrix::zeros(ch.n_out()),
            trace: Complex64::new(0.0, 0.0),
        });
    }
    if ld.sign < 0.0 {
        return Err(Error::Numerical {
            what: "det(I + DG)",
            value: ld.value(),
        });
    }
    // G (I + DG)⁻¹ Bᵀ = G · solve(I + DG, Bᵀ)
    let y = m
        .lu()
        .solve(&ch.b.transpose())
        .ok_or(Error::Singularity { value: 0.0 })?;
    let cov = ch.a.as_matrix() + &ch.b * g.as_matrix() * y;
    Ok(GaussianImage {
        covariance: AntisymmetricMatrix::from_antisymmetric_part(&cov),
        trace: ch.c * ld.powf(0.5).value(),
    })
}

/// `N*` with `⟨X, N(Y)⟩ = ⟨N*(X), Y⟩`: `(A, B, C, D) ↦ (D†, B†, C̄, A†)`.
/// For real data `D† = -D`, so a CPTP channel maps to `(0, Bᵀ, 1, -A)`.
pub fn adjoint(ch: &GaussianChannelData) -> GaussianChannelData {
    GaussianChannelData {
        a: ch.d.neg(),
        b: ch.b.transpose(),
        c: ch.c.conj(),
        d: ch.a.neg(),
    }
}

fn compose_dims(second: &GaussianChannelData, first: &GaussianChannelData) -> Result<()> {
    if second.n_in() != first.n_out() {
        return Err(Error::DimensionMismatch {
            context: "compose inner modes",
            expected: first.n_out(),
            found: second.n_in(),
        });
    }
    Ok(())
}

/// `K = I + A₁D₂`.
fn inner_matrix(second: &GaussianChannelData, first: &GaussianChannelData) -> Mat {
    let p = first.a.dim();
    Mat::identity(p, p) + first.a.as_matrix() * second.d.as_matrix()
}

fn inner_min_singular_value(second: &GaussianChannelData, first: &GaussianChannelData) -> f64 {
    inner_matrix(second, first)
        .svd(false, false)
        .singular_values
        .iter()
        .fold(f64::INFINITY, |acc, s| acc.min(*s))
}

fn sign_power(m: usize) -> f64 {
    if m.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `(-1)^m Pf(A₁) Pf(D₂ + A₁⁻¹)`, written as the single Pfaffian
/// `(-1)^m Pf([[A₁, I], [-I, D₂]])`, which stays finite when `A₁` is singular.
fn composite_pfaffian(a1: &Mat, d2: &Mat) -> LogValue {
    let p = a1.nrows();
    let mut z = Mat::zeros(2 * p, 2 * p);
    z.view_mut((0, 0), (p, p)).copy_from(a1);
    z.view_mut((p, p), (p, p)).copy_from(d2);
    for i in 0..p {
        z[(i, p + i)] = 1.0;
        z[(p + i, i)] = -1.0;
    }
    let pf = pfaffian_log(&AntisymmetricMatrix::from_antisymmetric_part(&z));
    pf.mul(LogValue::from_f64(sign_power(p / 2)))
}

/// Composite `second ∘ first`.
///
/// With `K = I + A₁D₂` the composition rule reads
/// `A = A₂ + B₂ K⁻¹ A₁ B₂ᵀ`, `B = B₂ K⁻¹ B₁`, `D = D₁ + B₁ᵀ D₂ K⁻¹ B₁`,
/// `C = C₁C₂ (-1)^m Pf(A₁) Pf(D₂ + A₁⁻¹)`. These forms contain no inverse of
/// `A₁`, so singular `A₁` needs no special handling. When `K` itself is
/// singular the result is the ε-regularized limit of [`compose_regularized`].
pub fn compose(second: &GaussianChannelData, first: &GaussianChannelData) -> Result<GaussianChannelData> {
    compose_dims(second, first)?;
    let smallest = inner_min_singular_value(second, first);
    if smallest <= SINGULAR_TOL {
        return compose_regularized(second, first);
    }
    let k = inner_matrix(second, first);
    let lu = k.lu();
    let solve = |rhs: &Mat| lu.solve(rhs).ok_or(Error::Singularity { value: smallest });
    let kb1 = solve(&first.b)?;
    let ka1b2t = solve(&(first.a.as_matrix() * second.b.transpose()))?;

    let a = second.a.as_matrix() + &second.b * ka1b2t;
    let b = &second.b * &kb1;
    let d = first.d.as_matrix() + first.b.transpose() * second.d.as_matrix() * &kb1;
    let pf = composite_pfaffian(first.a.as_matrix(), second.d.as_matrix());
    Ok(GaussianChannelData {
        a: AntisymmetricMatrix::from_antisymmetric_part(&a),
        b,
        c: first.c * second.c * pf.value(),
        d: AntisymmetricMatrix::from_antisymmetric_part(&d),
    })
}

/// The composition rule evaluated literally, with explicit `A₁⁻¹` and
/// `(D₂ + A₁⁻¹)⁻¹`, at a regularized `A₁(ε)`.
///
/// Canonical blocks of `A₁` with Williamson value `≤ 1e-6` have their signed
/// value shifted by `ε`, so the limit `ε → 0` is the rule at the exact `A₁`.
/// If `D₂ + A₁⁻¹` is singular (equivalently `I + A₁D₂`), every block is
/// shifted instead. With neither singularity the rule is evaluated directly.
/// The limit is the quadratic extrapolation to `ε = 0` through
/// `ε ∈ {3e-2, 3e-3, 3e-4}`, cross-checked against the same extrapolation
/// through those nodes scaled by `1/√10`; a spread above `1e-7` (relative to
/// the entry scale) raises [`Error::RegularizationUnstable`].
pub fn compose_regularized(
    second: &GaussianChannelData,
    first: &GaussianChannelData,
) -> Result<GaussianChannelData> {
    compose_dims(second, first)?;
    let form = canonical_decompose(&first.a);
    let has_null = form.williamson().iter().any(|v| *v <= NULL_BLOCK_TOL);
    let k_singular = inner_min_singular_value(second, first) <= SINGULAR_TOL;
    if !has_null && !k_singular {
        return literal_compose(second, first, first.a.as_matrix()).map(Parts::into_data);
    }
    let limit = |scale: f64| -> Result<Parts> {
        let nodes = REGULARIZATION_STEPS.map(|eps| eps * scale);
        let parts = nodes
            .iter()
            .map(|eps| literal_compose(second, first, &regularize(&form, *eps, k_singular)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Parts::extrapolate(&nodes, &parts))
    };
    let estimate = limit(1.0)?;
    let check = limit(REGULARIZATION_CHECK_SCALE)?;
    let spread = estimate.spread(&check);
    if !(spread <= REGULARIZATION_TOL) {
        return Err(Error::RegularizationUnstable { spread });
    }
    Ok(estimate.into_data())
}

fn regularize(form: &CanonicalForm, eps: f64, shift_all: bool) -> Mat {
    let chi = form.signed_values();
    form.synthesize(|k| {
        let v = if shift_all || form.williamson()[k] <= NULL_BLOCK_TOL {
            chi[k] + eps
        } else {
            chi[k]
        };
        [0.0, -v, v, 0.0]
    })
}

struct Parts {
    a: Mat,
    b: Mat,
    c: Complex64,
    d: Mat,
}

impl Parts {
    fn into_data(self) -> GaussianChannelData {
        GaussianChannelData {
            a: AntisymmetricMatrix::from_antisymmetric_part(&self.a),
            b: self.b,
            c: self.c,
            d: AntisymmetricMatrix::from_antisymmetric_part(&self.d),
        }
    }

    /// Value at `ε = 0` of the interpolating polynomial through `(εₖ, partsₖ)`.
    fn extrapolate(nodes: &[f64; 3], parts: &[Parts]) -> Parts {
        let weights: Vec<f64> = (0..3)
            .map(|k| {
                (0..3)
                    .filter(|j| *j != k)
                    .map(|j| nodes[j] / (nodes[j] - nodes[k]))
                    .product()
            })
            .collect();
        let mix = |get: &dyn Fn(&Parts) -> Mat| {
            let mut acc = get(&parts[0]) * weights[0];
            for (p, w) in parts.iter().zip(&weights).skip(1) {
                acc += get(p) * *w;
            }
            acc
        };
        Parts {
            a: mix(&|p| p.a.clone()),
            b: mix(&|p| p.b.clone()),
            c: parts.iter().zip(&weights).map(|(p, w)| p.c * *w).sum(),
            d: mix(&|p| p.d.clone()),
        }
    }

    fn spread(&self, other: &Parts) -> f64 {
        let rel = |x: &Mat, y: &Mat| {
            let scale = max_abs(x).max(1.0);
            crate::linalg::max_abs_diff(x, y) / scale
        };
        let c = (self.c - other.c).norm() / self.c.norm().max(1.0);
        rel(&self.a, &other.a)
            .max(rel(&self.b, &other.b))
            .max(rel(&self.d, &other.d))
            .max(c)
    }
}

fn literal_compose(
    second: &GaussianChannelData,
    first: &GaussianChannelData,
    a1: &Mat,
) -> Result<Parts> {
    let singular = || Error::Singularity { value: 0.0 };
    let a1_inv = a1.clone().try_inverse().ok_or_else(singular)?;
    let x = second.d.as_matrix() + &a1_inv;
    let x_inv = x.clone().try_inverse().ok_or_else(singular)?;
    let xa = &x_inv * &a1_inv;

    let a = second.a.as_matrix() + &second.b * &x_inv * second.b.transpose();
    let b = &second.b * &xa * &first.b;
    let d = first.d.as_matrix() + first.b.transpose() * second.d.as_matrix() * &xa * &first.b;

    let m = a1.nrows() / 2;
    let pf = pfaffian_log(&AntisymmetricMatrix::from_antisymmetric_part(a1))
        .mul(pfaffian_log(&AntisymmetricMatrix::from_antisymmetric_part(&x)))
        .mul(LogValue::from_f64(sign_power(m)));
    let c = first.c * second.c * pf.value();
    if !c.re.is_finite() || !c.im.is_finite() {
        return Err(singular());
    }
    Ok(Parts { a, b, c, d })
}

/// `√(I + G²)`, the even function `√(1 - x²)` of `G`.
pub fn sqrt_one_plus_square(g: &CovarianceMatrix) -> Mat {
    g.canonical()
        .map_even(|x| libm::sqrt((1.0 - x * x).max(0.0)))
        .expect("finite on [0, 1]")
}

/// `X ↦ σ^{1/2} X σ^{1/2}`: `(G, √(I + G²), 2⁻ⁿ, -G)`.
pub fn sandwich_sqrt(sigma: &CovarianceMatrix) -> GaussianChannelData {
    let n = sigma.modes();
    GaussianChannelData {
        a: sigma.matrix().clone(),
        b: sqrt_one_plus_square(sigma),
        c: Complex64::new(libm::exp2(-(n as f64)), 0.0),
        d: sigma.matrix().neg(),
    }
}

/// Pure modes of a state in its canonical order.
pub(crate) fn pure_modes(g: &CovarianceMatrix) -> Vec<usize> {
    g.williamson()
        .iter()
        .enumerate()
        .filter(|(_, v)| **v >= 1.0 - PURITY_TOL)
        .map(|(k, _)| k)
        .collect()
}

/// `X ↦ τ^{-1/2} X τ^{-1/2}`: `(-G, √(I + G²), 2ⁿ det(I + G²)^{-1/2}, G)`.
/// Requires a faithful `τ`; pure modes raise [`Error::NotFaithful`].
pub fn sandwich_inv_sqrt(tau: &CovarianceMatrix) -> Result<GaussianChannelData> {
    let pure = pure_modes(tau);
    if !pure.is_empty() {
        return Err(Error::NotFaithful { pure_modes: pure });
    }
    let n = tau.modes();
    // det(I + G²)^{-1/2} = ∏ (1 - λₖ²)^{-1}
    let log_c = (n as f64) * core::f64::consts::LN_2
        - tau
            .williamson()
            .iter()
            .map(|v| libm::log1p(-v * v))
            .sum::<f64>();
    Ok(GaussianChannelData {
        a: tau.matrix().neg(),
        b: sqrt_one_plus_square(tau),
        c: Complex64::new(libm::exp(log_c), 0.0),
        d: tau.matrix().clone(),
    })
}
