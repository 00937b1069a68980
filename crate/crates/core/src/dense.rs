// Copyright 2026 The fgauss Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense `2ⁿ x 2ⁿ` operator oracle.
//!
//! Majoranas follow the Jordan–Wigner chain `γ₂ₖ = Z⋯Z X_k`,
//! `γ₂ₖ₊₁ = Z⋯Z Y_k` (0-based, qubit 0 is the most significant bit of a basis
//! index). Superoperators are `d_out² x d_in²` matrices acting on
//! column-stacked operators, so the Hilbert–Schmidt adjoint is the conjugate
//! transpose.
//!
//! Peak memory sits at the superoperator cap: a 5-mode superoperator is a
//! `1024 x 1024` complex matrix (16 MiB), and intermediate products in
//! [`dense_petz`] hold a few of those at once.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, AntisymmetricMatrix, Mat};
use crate::models::Dilation;
use crate::state::{CovarianceMatrix, InverseTemperature, QuadraticHamiltonian};

/// Complex dense matrix.
pub type CMat = DMatrix<Complex64>;

/// Largest mode count for dense states and superoperators.
pub const STATE_CAP: usize = 5;
/// Largest mode count for a bare dense unitary.
pub const UNITARY_CAP: usize = 10;
/// Eigenvalues at or below this are treated as zero.
pub const EIGEN_CUTOFF: f64 = 1e-10;
/// Tolerance for the density-operator checks.
pub const DENSITY_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn check_cap(modes: usize, cap: usize) -> Result<()> {
    if modes == 0 || modes > cap {
        return Err(Error::SizeCap { modes, cap });
    }
    Ok(())
}

/// Operator on `n` modes, stored as a `2ⁿ x 2ⁿ` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    n: usize,
    matrix: CMat,
}

impl DenseOperator {
    pub fn new(n: usize, matrix: CMat) -> Result<Self> {
        let dim = 1usize << n;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                context: "dense operator",
                expected: dim,
                found: matrix.nrows(),
            });
        }
        Ok(Self { n, matrix })
    }

    pub fn identity(n: usize) -> Self {
        let dim = 1usize << n;
        Self {
            n,
            matrix: CMat::identity(dim, dim),
        }
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `A ⊗ B`, with `self` on the leading modes.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            n: self.n + other.n,
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }

    /// Traces out the trailing `m` modes.
    pub fn partial_trace_tail(&self, m: usize) -> Result<Self> {
        if m > self.n {
            return Err(Error::DimensionMismatch {
                context: "partial trace",
                expected: self.n,
                found: m,
            });
        }
        let de = 1usize << m;
        let ds = 1usize << (self.n - m);
        let out = CMat::from_fn(ds, ds, |r, c| {
            (0..de).map(|e| self.matrix[(r * de + e, c * de + e)]).sum()
        });
        Ok(Self {
            n: self.n - m,
            matrix: out,
        })
    }

    /// Hermitian, unit trace and positive, each within `1e-10`.
    pub fn is_density_operator(&self) -> bool {
        let herm = max_abs(&(&self.matrix - self.matrix.adjoint()));
        if herm > DENSITY_TOL || (self.trace() - ONE).norm() > DENSITY_TOL {
            return false;
        }
        let vals = hermitian_eigen(&self.matrix).0;
        vals.iter().all(|v| *v >= -DENSITY_TOL)
    }
}

fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `½ ‖A - B‖₁` for Hermitian operators.
pub fn trace_distance(a: &DenseOperator, b: &DenseOperator) -> f64 {
    let diff = a.matrix() - b.matrix();
    let herm = (&diff + diff.adjoint()) * Complex64::new(0.5, 0.0);
    0.5 * hermitian_eigen(&herm)
        .0
        .iter()
        .map(|v| libm::fabs(*v))
        .sum::<f64>()
}

/// `f(M)` for Hermitian `M` through its eigendecomposition.
pub fn hermitian_function(m: &CMat, f: impl Fn(f64) -> Complex64) -> CMat {
    let eig = hermitian_eigen(m);
    let vals = DVector::from_iterator(eig.0.len(), eig.0.iter().map(|v| f(*v)));
    let v = &eig.1;
    v * CMat::from_diagonal(&vals) * v.adjoint()
}

fn min_eigenvalue(m: &CMat) -> f64 {
    hermitian_eigen(m).0.min()
}

/// `P|c⟩ = phase[c] |target[c]⟩`: products of Majoranas stay in this form.
#[derive(Debug, Clone)]
struct Monomial {
    target: Vec<usize>,
    phase: Vec<Complex64>,
}

impl Monomial {
    fn majorana(n: usize, i: usize) -> Self {
        let dim = 1usize << n;
        let k = i / 2;
        let mask = 1usize << (n - 1 - k);
        let mut target = Vec::with_capacity(dim);
        let mut phase = Vec::with_capacity(dim);
        for c in 0..dim {
            let string = if (c >> (n - k)).count_ones().is_multiple_of(2) { ONE } else { -ONE };
            let local = if i.is_multiple_of(2) {
                ONE
            } else if c & mask == 0 {
                I
            } else {
                -I
            };
            target.push(c ^ mask);
            phase.push(string * local);
        }
        Self { target, phase }
    }

    /// `self · other`.
    fn mul(&self, other: &Self) -> Self {
        let target = other.target.iter().map(|t| self.target[*t]).collect();
        let phase = other
            .phase
            .iter()
            .zip(&other.target)
            .map(|(q, t)| q * self.phase[*t])
            .collect();
        Self { target, phase }
    }

    fn to_dense(&self) -> CMat {
        let dim = self.target.len();
        let mut m = CMat::zeros(dim, dim);
        for (c, (t, p)) in self.target.iter().zip(&self.phase).enumerate() {
            m[(*t, c)] = *p;
        }
        m
    }

    /// `(cos φ - sin φ · P) M`.
    fn rotate_left(&self, phi: f64, m: &CMat) -> CMat {
        let (s, c) = (libm::sin(phi), libm::cos(phi));
        let mut out = m * Complex64::new(c, 0.0);
        for (row, (t, p)) in self.target.iter().zip(&self.phase).enumerate() {
            let factor = *p * (-s);
            for col in 0..m.ncols() {
                out[(*t, col)] += factor * m[(row, col)];
            }
        }
        out
    }
}

/// The `2n` Jordan–Wigner Majoranas, for `1 ≤ n ≤ 5`.
pub fn majorana_operators(n: usize) -> Result<Vec<DenseOperator>> {
    check_cap(n, STATE_CAP)?;
    Ok((0..2 * n)
        .map(|i| DenseOperator {
            n,
            matrix: Monomial::majorana(n, i).to_dense(),
        })
        .collect())
}

/// `γ̃ᵢ = Σⱼ Oᵢⱼ γⱼ`.
fn rotated_majoranas(gammas: &[DenseOperator], o: &Mat) -> Vec<CMat> {
    let dim = gammas[0].dim();
    (0..gammas.len())
        .map(|i| {
            let mut acc = CMat::zeros(dim, dim);
            for (j, g) in gammas.iter().enumerate() {
                let w = o[(i, j)];
                if w != 0.0 {
                    acc += g.matrix() * Complex64::new(w, 0.0);
                }
            }
            acc
        })
        .collect()
}

/// `2⁻ⁿ ∏ₖ (1 - iχₖ γ̃₂ₖ γ̃₂ₖ₊₁)` in the canonical frame of `G`.
pub fn dense_state_from_covariance(g: &CovarianceMatrix) -> Result<DenseOperator> {
    let n = g.modes();
    let gammas = majorana_operators(n)?;
    let form = g.canonical();
    let tilde = rotated_majoranas(&gammas, form.rotation());
    let dim = 1usize << n;
    let mut rho = CMat::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0);
    for (k, chi) in form.signed_values().into_iter().enumerate() {
        let pair = &tilde[2 * k] * &tilde[2 * k + 1];
        let factor = CMat::identity(dim, dim) - pair * (I * chi);
        rho *= factor;
    }
    Ok(DenseOperator { n, matrix: rho })
}

/// `Gᵢⱼ = (i/2) tr(ρ[γᵢ, γⱼ])`. No Gaussianity check is made.
pub fn dense_covariance_of(rho: &DenseOperator) -> Result<AntisymmetricMatrix> {
    let n = rho.modes();
    let gammas = majorana_operators(n)?;
    let dim = 2 * n;
    let mut g = Mat::zeros(dim, dim);
    for i in 0..dim {
        for j in i + 1..dim {
            let comm = gammas[i].matrix() * gammas[j].matrix() - gammas[j].matrix() * gammas[i].matrix();
            let value = (I * 0.5 * (rho.matrix() * comm).trace()).re;
            g[(i, j)] = value;
            g[(j, i)] = -value;
        }
    }
    AntisymmetricMatrix::new(g)
}

/// `tr(ρ X)`.
pub fn dense_expectation(rho: &DenseOperator, x: &DenseOperator) -> Complex64 {
    (rho.matrix() * x.matrix()).trace()
}

/// `H = (i/2) Σᵢⱼ Mᵢⱼ γᵢ γⱼ`.
pub fn dense_hamiltonian(m: &AntisymmetricMatrix) -> Result<DenseOperator> {
    let n = m.modes();
    let gammas = majorana_operators(n)?;
    let dim = 1usize << n;
    let mut h = CMat::zeros(dim, dim);
    for i in 0..2 * n {
        for j in 0..2 * n {
            let w = m.as_matrix()[(i, j)];
            if i != j && w != 0.0 {
                h += gammas[i].matrix() * gammas[j].matrix() * (I * (0.5 * w));
            }
        }
    }
    Ok(DenseOperator { n, matrix: h })
}

/// `e^{-βH} / tr e^{-βH}`; at `β = ∞` the normalized ground-space projector.
pub fn dense_thermal_state(h: &QuadraticHamiltonian) -> Result<DenseOperator> {
    let ham = dense_hamiltonian(&h.m)?;
    let eig = hermitian_eigen(ham.matrix());
    let e0 = eig.0.min();
    let weights: Vec<f64> = eig
        .0
        .iter()
        .map(|e| match h.beta {
            InverseTemperature::Finite(beta) => libm::exp(-beta * (e - e0)),
            InverseTemperature::Infinite => {
                if e - e0 <= 1e-9 {
                    1.0
                } else {
                    0.0
                }
            }
        })
        .collect();
    let z: f64 = weights.iter().sum();
    let diag = DVector::from_iterator(weights.len(), weights.iter().map(|w| Complex64::new(w / z, 0.0)));
    let v = &eig.1;
    Ok(DenseOperator {
        n: ham.n,
        matrix: v * CMat::from_diagonal(&diag) * v.adjoint(),
    })
}

/// Plane rotation in coordinates `(a, b)`: `[[cos θ, -sin θ], [sin θ, cos θ]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneRotation {
    pub a: usize,
    pub b: usize,
    pub theta: f64,
}

impl PlaneRotation {
    pub fn matrix(&self, dim: usize) -> Mat {
        let mut q = Mat::identity(dim, dim);
        let (s, c) = (libm::sin(self.theta), libm::cos(self.theta));
        q[(self.a, self.a)] = c;
        q[(self.b, self.b)] = c;
        q[(self.a, self.b)] = -s;
        q[(self.b, self.a)] = s;
        q
    }
}

/// Factors `R = Q₁ Q₂ ⋯ Q_k` of a special orthogonal matrix into plane
/// rotations. Leftover `-1` pairs on the diagonal become rotations by `π`.
pub fn plane_rotations(r: &Mat) -> Result<Vec<PlaneRotation>> {
    let deviation = crate::linalg::special_orthogonal_deviation(r);
    if deviation > crate::linalg::ORTHOGONALITY_TOL {
        return Err(Error::NotSpecialOrthogonal { deviation });
    }
    let dim = r.nrows();
    let mut w = r.clone();
    let mut factors = Vec::new();
    for j in 0..dim {
        for i in (j + 1..dim).rev() {
            let (x, y) = (w[(j, j)], w[(i, j)]);
            if y == 0.0 {
                continue;
            }
            let h = libm::hypot(x, y);
            let (c, s) = (x / h, y / h);
            for col in 0..dim {
                let (p, q) = (w[(j, col)], w[(i, col)]);
                w[(j, col)] = c * p + s * q;
                w[(i, col)] = -s * p + c * q;
            }
            factors.push(PlaneRotation {
                a: j,
                b: i,
                theta: libm::atan2(s, c),
            });
        }
    }
    let negatives: Vec<usize> = (0..dim).filter(|k| w[(*k, *k)] < 0.0).collect();
    for pair in negatives.chunks(2) {
        if let [a, b] = pair {
            factors.push(PlaneRotation {
                a: *a,
                b: *b,
                theta: core::f64::consts::PI,
            });
        }
    }
    Ok(factors)
}

fn unitary_from_factors(n: usize, factors: &[PlaneRotation], c: f64) -> CMat {
    let dim = 1usize << n;
    let gammas: Vec<Monomial> = (0..2 * n).map(|i| Monomial::majorana(n, i)).collect();
    let mut u = CMat::identity(dim, dim);
    for q in factors.iter().rev() {
        let pair = gammas[q.a].mul(&gammas[q.b]);
        // exp(c Σ hᵢⱼ γᵢγⱼ) with h the generator of Q is exp(-2cθ γ_a γ_b).
        u = pair.rotate_left(2.0 * c * q.theta, &u);
    }
    u
}

/// The constant `c` in `U = exp(c Σᵢⱼ hᵢⱼ γᵢ γⱼ)` for which `R = exp(h)`
/// satisfies `U† γ U = R γ`, found by matching a single-mode rotation among
/// the usual candidates.
pub fn generator_constant() -> f64 {
    let theta = 0.7;
    let q = PlaneRotation { a: 0, b: 1, theta };
    let r = q.matrix(2);
    let gammas: Vec<CMat> = (0..2).map(|i| Monomial::majorana(1, i).to_dense()).collect();
    let mut best = (f64::INFINITY, 0.0);
    for c in [0.25, -0.25, 0.5, -0.5] {
        let u = unitary_from_factors(1, &[q], c);
        let mut err: f64 = 0.0;
        for i in 0..2 {
            let lhs = u.adjoint() * &gammas[i] * &u;
            let rhs = &gammas[0] * Complex64::new(r[(i, 0)], 0.0) + &gammas[1] * Complex64::new(r[(i, 1)], 0.0);
            err = err.max(max_abs(&(lhs - rhs)));
        }
        if err < best.0 {
            best = (err, c);
        }
    }
    best.1
}

/// Dense unitary with `U† γᵢ U = Σⱼ Rᵢⱼ γⱼ` for `R ∈ SO(2n)`, `n ≤ 10`.
/// Conjugation `ρ ↦ U ρ U†` then maps `G ↦ R G Rᵀ`.
pub fn dense_unitary(r: &Mat) -> Result<DenseOperator> {
    if !r.is_square() || r.nrows() % 2 == 1 {
        return Err(Error::OddDimension(r.nrows()));
    }
    let n = r.nrows() / 2;
    check_cap(n, UNITARY_CAP)?;
    let factors = plane_rotations(r)?;
    Ok(DenseOperator {
        n,
        matrix: unitary_from_factors(n, &factors, generator_constant()),
    })
}

/// Linear map between operator spaces as a `d_out² x d_in²` matrix on
/// column-stacked operators.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    n_in: usize,
    n_out: usize,
    matrix: CMat,
}

impl Superoperator {
    pub fn new(n_in: usize, n_out: usize, matrix: CMat) -> Result<Self> {
        let (din, dout) = (1usize << (2 * n_in), 1usize << (2 * n_out));
        if matrix.nrows() != dout || matrix.ncols() != din {
            return Err(Error::DimensionMismatch {
                context: "superoperator",
                expected: dout,
                found: matrix.nrows(),
            });
        }
        Ok(Self {
            n_in,
            n_out,
            matrix,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_cap(n, STATE_CAP)?;
        let d = 1usize << (2 * n);
        Ok(Self {
            n_in: n,
            n_out: n,
            matrix: CMat::identity(d, d),
        })
    }

    /// Builds the matrix of `f` by applying it to each matrix unit.
    pub fn from_fn(
        n_in: usize,
        n_out: usize,
        mut f: impl FnMut(&DenseOperator) -> Result<DenseOperator>,
    ) -> Result<Self> {
        check_cap(n_in, STATE_CAP)?;
        check_cap(n_out, STATE_CAP)?;
        let (din, dout) = (1usize << n_in, 1usize << n_out);
        let mut matrix = CMat::zeros(dout * dout, din * din);
        for b in 0..din {
            for a in 0..din {
                let mut unit = CMat::zeros(din, din);
                unit[(a, b)] = ONE;
                let image = f(&DenseOperator { n: n_in, matrix: unit })?;
                matrix
                    .column_mut(a + b * din)
                    .copy_from_slice(image.matrix().as_slice());
            }
        }
        Ok(Self {
            n_in,
            n_out,
            matrix,
        })
    }

    /// `X ↦ L X R`.
    pub fn sandwich(left: &DenseOperator, right: &DenseOperator) -> Self {
        Self {
            n_in: left.n,
            n_out: left.n,
            matrix: right.matrix().transpose().kronecker(left.matrix()),
        }
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn apply(&self, x: &DenseOperator) -> Result<DenseOperator> {
        if x.n != self.n_in {
            return Err(Error::DimensionMismatch {
                context: "superoperator input",
                expected: self.n_in,
                found: x.n,
            });
        }
        let d = 1usize << self.n_out;
        let v = &self.matrix * DVector::from_column_slice(x.matrix().as_slice());
        Ok(DenseOperator {
            n: self.n_out,
            matrix: CMat::from_column_slice(d, d, v.as_slice()),
        })
    }

    /// Hilbert–Schmidt adjoint: `tr(A† N(B)) = tr(N*(A)† B)`.
    pub fn adjoint(&self) -> Self {
        Self {
            n_in: self.n_out,
            n_out: self.n_in,
            matrix: self.matrix.adjoint(),
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Self) -> Result<Self> {
        if first.n_out != self.n_in {
            return Err(Error::DimensionMismatch {
                context: "superoperator composition",
                expected: self.n_in,
                found: first.n_out,
            });
        }
        Ok(Self {
            n_in: first.n_in,
            n_out: self.n_out,
            matrix: &self.matrix * &first.matrix,
        })
    }
}

/// `X ↦ Tr_E[U (X ⊗ ρ_E) U†]` for a dilation with `n + m ≤ 5`.
pub fn dense_channel(d: &Dilation) -> Result<Superoperator> {
    let (n, m) = (d.system_modes(), d.environment_modes());
    check_cap(n + m, STATE_CAP)?;
    let u = dense_unitary(d.rotation())?;
    let env = if m == 0 {
        None
    } else {
        Some(dense_state_from_covariance(d.environment())?)
    };
    Superoperator::from_fn(n, n, |x| {
        let joint = match &env {
            Some(e) => x.tensor(e),
            None => x.clone(),
        };
        let evolved = DenseOperator {
            n: n + m,
            matrix: u.matrix() * joint.matrix() * u.matrix().adjoint(),
        };
        evolved.partial_trace_tail(m)
    })
}

/// `X ↦ U X U†` for `R ∈ SO(2n)`, `n ≤ 5`.
pub fn dense_unitary_channel(r: &Mat) -> Result<Superoperator> {
    let u = dense_unitary(r)?;
    check_cap(u.n, STATE_CAP)?;
    let ud = DenseOperator {
        n: u.n,
        matrix: u.matrix().adjoint(),
    };
    Ok(Superoperator::sandwich(&u, &ud))
}

fn positive_power(rho: &DenseOperator, p: f64, support: bool) -> Result<DenseOperator> {
    let lo = min_eigenvalue(rho.matrix());
    if p < 0.0 && lo <= EIGEN_CUTOFF && !support {
        return Err(Error::RankDeficient { min_eigenvalue: lo });
    }
    let matrix = hermitian_function(rho.matrix(), |v| {
        if v <= EIGEN_CUTOFF {
            ZERO
        } else {
            Complex64::new(libm::pow(v, p), 0.0)
        }
    });
    Ok(DenseOperator { n: rho.n, matrix })
}

/// `ρ^{it}` on a full-rank density operator.
pub fn imaginary_power(rho: &DenseOperator, t: f64) -> Result<DenseOperator> {
    let lo = min_eigenvalue(rho.matrix());
    if lo <= EIGEN_CUTOFF {
        return Err(Error::RankDeficient { min_eigenvalue: lo });
    }
    let matrix = hermitian_function(rho.matrix(), |v| Complex64::new(0.0, t * libm::log(v)).exp());
    Ok(DenseOperator { n: rho.n, matrix })
}

/// `X ↦ σ^{1/2} N*(N(σ)^{-1/2} X N(σ)^{-1/2}) σ^{1/2}`. With `support`, the
/// inverse root is taken on the support of `N(σ)` (eigenvalue cutoff
/// `1e-10`); otherwise a rank-deficient `N(σ)` is an error.
pub fn dense_petz(sigma: &DenseOperator, ch: &Superoperator, support: bool) -> Result<Superoperator> {
    let tau = ch.apply(sigma)?;
    let inv = positive_power(&tau, -0.5, support)?;
    let root = positive_power(sigma, 0.5, true)?;
    let post = Superoperator::sandwich(&root, &root);
    let pre = Superoperator::sandwich(&inv, &inv);
    post.after(&ch.adjoint())?.after(&pre)
}

/// `X ↦ ρ^{it} X ρ^{-it}`.
pub fn dense_conjugation(rho: &DenseOperator, t: f64) -> Result<Superoperator> {
    Ok(Superoperator::sandwich(
        &imaginary_power(rho, t)?,
        &imaginary_power(rho, -t)?,
    ))
}

/// `U_{σ,t} ∘ P ∘ U_{N(σ),-t}` with `U_{ρ,t}(X) = ρ^{it} X ρ^{-it}`.
pub fn dense_rotated_petz(sigma: &DenseOperator, ch: &Superoperator, t: f64) -> Result<Superoperator> {
    let tau = ch.apply(sigma)?;
    let p = dense_petz(sigma, ch, false)?;
    dense_conjugation(sigma, t)?
        .after(&p)?
        .after(&dense_conjugation(&tau, -t)?)
}

/// `tr √(σ^{1/2} ρ σ^{1/2})`, evaluated as the trace norm `‖ρ^{1/2} σ^{1/2}‖₁`
/// so that small eigenvalues of the product are not square-rooted.
pub fn dense_fidelity(rho: &DenseOperator, sigma: &DenseOperator) -> Result<f64> {
    if rho.n != sigma.n {
        return Err(Error::DimensionMismatch {
            context: "fidelity operands",
            expected: rho.n,
            found: sigma.n,
        });
    }
    let a = positive_power(rho, 0.5, true)?;
    let b = positive_power(sigma, 0.5, true)?;
    Ok((a.matrix() * b.matrix()).singular_values().iter().sum())
}

fn entropy_term(rho: &CMat, sigma: &CMat) -> Option<f64> {
    let eig = hermitian_eigen(sigma);
    let v = &eig.1;
    let rotated = v.adjoint() * rho * v;
    let mut acc = 0.0;
    for (k, s) in eig.0.iter().enumerate() {
        let weight = rotated[(k, k)].re;
        if *s <= EIGEN_CUTOFF {
            if weight > EIGEN_CUTOFF {
                return None;
            }
            continue;
        }
        acc += weight * libm::log(*s);
    }
    Some(acc)
}

/// `S(ρ‖σ) = tr ρ log ρ - tr ρ log σ` in nats; `+∞` when `supp ρ ⊄ supp σ`.
pub fn dense_relative_entropy(rho: &DenseOperator, sigma: &DenseOperator) -> f64 {
    let Some(cross) = entropy_term(rho.matrix(), sigma.matrix()) else {
        return f64::INFINITY;
    };
    let own: f64 = hermitian_eigen(rho.matrix())
        .0
        .iter()
        .filter(|v| **v > EIGEN_CUTOFF)
        .map(|v| v * libm::log(*v))
        .sum();
    own - cross
}

/// Von Neumann entropy in nats.
pub fn dense_entropy(rho: &DenseOperator) -> f64 {
    -hermitian_eigen(rho.matrix())
        .0
        .iter()
        .filter(|v| **v > EIGEN_CUTOFF)
        .map(|v| v * libm::log(*v))
        .sum::<f64>()
}

/// Covariance and trace of a Hermitian operator proportional to a state.
pub fn normalized_covariance(x: &DenseOperator) -> Result<(AntisymmetricMatrix, f64)> {
    let tr = x.trace().re;
    if libm::fabs(tr) <= EIGEN_CUTOFF {
        return Err(Error::Singularity { value: tr });
    }
    let scaled = DenseOperator {
        n: x.n,
        matrix: x.matrix() * Complex64::new(1.0 / tr, 0.0),
    };
    Ok((dense_covariance_of(&scaled)?, tr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::random::{random_mixed_covariance, random_special_orthogonal, rng};

    fn anticommutator(a: &CMat, b: &CMat) -> CMat {
        a * b + b * a
    }

    #[test]
    fn single_mode_paulis() {
        let g = majorana_operators(1).unwrap();
        let x = CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let y = CMat::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]);
        assert_eq!(g[0].matrix(), &x);
        assert_eq!(g[1].matrix(), &y);
    }

    #[test]
    fn majorana_algebra() {
        for n in [3, 4] {
            let g = majorana_operators(n).unwrap();
            let dim = 1usize << n;
            for i in 0..2 * n {
                assert!(max_abs(&(g[i].matrix() - g[i].matrix().adjoint())) < 1e-14);
                for j in 0..2 * n {
                    let expected = if i == j { CMat::identity(dim, dim) * Complex64::new(2.0, 0.0) } else { CMat::zeros(dim, dim) };
                    assert!(max_abs(&(anticommutator(g[i].matrix(), g[j].matrix()) - expected)) < 1e-14);
                }
            }
        }
        assert!(majorana_operators(0).is_err());
        assert!(majorana_operators(6).is_err());
    }

    #[test]
    fn state_roundtrip() {
        let mut r = rng(1);
        for n in 1..=4 {
            let g = random_mixed_covariance(&mut r, n);
            let rho = dense_state_from_covariance(&g).unwrap();
            assert!(rho.is_density_operator());
            let back = dense_covariance_of(&rho).unwrap();
            assert!(max_abs_diff(back.as_matrix(), g.as_matrix()) < 1e-9);
        }
    }

    #[test]
    fn trivial_states() {
        let rho = dense_state_from_covariance(&CovarianceMatrix::maximally_mixed(2)).unwrap();
        assert!(max_abs(&(rho.matrix() - CMat::identity(4, 4) * Complex64::new(0.25, 0.0))) < 1e-15);
        let pure = dense_state_from_covariance(&CovarianceMatrix::product(&[1.0]).unwrap()).unwrap();
        assert!(max_abs(&(pure.matrix() * pure.matrix() - pure.matrix())) < 1e-14);
    }

    #[test]
    fn generator_constant_is_a_quarter() {
        assert_eq!(generator_constant(), 0.25);
    }

    #[test]
    fn plane_rotations_reproduce_rotation() {
        let mut r = rng(2);
        let rot = random_special_orthogonal(&mut r, 6);
        let factors = plane_rotations(&rot).unwrap();
        let product = factors.iter().fold(Mat::identity(6, 6), |acc, q| acc * q.matrix(6));
        assert!(max_abs_diff(&product, &rot) < 1e-12);
    }

    #[test]
    fn unitary_conjugates_majoranas() {
        let mut r = rng(3);
        let rot = random_special_orthogonal(&mut r, 6);
        let u = dense_unitary(&rot).unwrap();
        let g = majorana_operators(3).unwrap();
        for i in 0..6 {
            let lhs = u.matrix().adjoint() * g[i].matrix() * u.matrix();
            let mut rhs = CMat::zeros(8, 8);
            for j in 0..6 {
                rhs += g[j].matrix() * Complex64::new(rot[(i, j)], 0.0);
            }
            assert!(max_abs(&(lhs - rhs)) < 1e-12);
        }
    }

    #[test]
    fn thermal_state_values() {
        let h = QuadraticHamiltonian::new(
            AntisymmetricMatrix::canonical(&[1.0]),
            InverseTemperature::Finite(0.5),
        );
        let rho = dense_thermal_state(&h).unwrap();
        let g = dense_covariance_of(&rho).unwrap();
        assert!((g.as_matrix()[(1, 0)] + libm::tanh(0.5)).abs() < 1e-12);
    }

    #[test]
    fn identity_and_trace_checks() {
        let id = Superoperator::identity(2).unwrap();
        let rho = dense_state_from_covariance(&random_mixed_covariance(&mut rng(4), 2)).unwrap();
        assert_eq!(id.apply(&rho).unwrap(), rho);
        assert!(trace_distance(&rho, &rho) < 1e-15);
        assert!(dense_relative_entropy(&rho, &rho).abs() < 1e-10);
        assert!((dense_fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn orthogonal_pure_states() {
        let up = dense_state_from_covariance(&CovarianceMatrix::product(&[1.0]).unwrap()).unwrap();
        let down = dense_state_from_covariance(&CovarianceMatrix::product(&[-1.0]).unwrap()).unwrap();
        assert!(dense_fidelity(&up, &down).unwrap() < 1e-7);
        assert_eq!(dense_relative_entropy(&up, &down), f64::INFINITY);
    }

    #[test]
    fn rank_deficient_petz_needs_support_mode() {
        let pure = dense_state_from_covariance(&CovarianceMatrix::product(&[1.0]).unwrap()).unwrap();
        let id = Superoperator::identity(1).unwrap();
        assert!(matches!(dense_petz(&pure, &id, false), Err(Error::RankDeficient { .. })));
        assert!(dense_petz(&pure, &id, true).is_ok());
    }
}
