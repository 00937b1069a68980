//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use fgauss_core::channel::{
    adjoint, apply, compose, gaussian_action, validate_cp, validate_tp, validate_unital,
};
use fgauss_core::dense::{
    dense_channel, dense_covariance_of, dense_fidelity, dense_relative_entropy, dense_rotated_petz,
    dense_state_from_covariance, dense_thermal_state, dense_petz, majorana_operators,
    normalized_covariance, CMat, DenseOperator, Superoperator,
};
use fgauss_core::fidelity::{fidelity, monotonicity_margin, overlap};
use fgauss_core::linalg::{
    canonical_decompose, even_function, log_det, max_abs, max_abs_diff, odd_function, pfaffian,
    pfaffian_log, sym_psd_sqrt, AntisymmetricMatrix, Mat,
};
use fgauss_core::models::{
    attenuator, attenuator_dilation, dilation_channel, random_channel, random_dilation,
    swap_dilation, unitary_channel, Dilation,
};
use fgauss_core::random::{
    random_antisymmetric, random_covariance, random_mixed_covariance, random_pure_covariance,
    random_special_orthogonal, rng, SeededRng,
};
use fgauss_core::recovery::{
    petz, petz_on_support, petz_via_composition, petz_via_composition_using, recovery_residual,
    rotated_petz, CompositionPath,
};
use fgauss_core::state::{power_rotation, state_from_hamiltonian};
use fgauss_core::{
    CovarianceMatrix, GaussianChannelData, GaussianCptpChannel, InverseTemperature,
    QuadraticHamiltonian,
};
use num_complex::Complex64;
use rand::Rng;

/// Result of one criterion: the worst observed quantity, its bound, and any
/// extra requirement that failed.
struct Outcome {
    worst: f64,
    bound: f64,
    /// `true` when `worst` must stay at or above `bound` instead of below it.
    lower: bool,
    limit: Option<Duration>,
    problems: Vec<String>,
}

impl Outcome {
    fn at_most(bound: f64) -> Self {
        Self {
            worst: 0.0,
            bound,
            lower: false,
            limit: None,
            problems: Vec::new(),
        }
    }

    fn at_least(bound: f64) -> Self {
        Self {
            worst: f64::INFINITY,
            lower: true,
            ..Self::at_most(bound)
        }
    }

    fn within(mut self, limit: Duration) -> Self {
        self.limit = Some(limit);
        self
    }

    fn record(&mut self, value: f64) {
        self.worst = if self.lower {
            self.worst.min(value)
        } else if value.is_nan() {
            f64::NAN
        } else {
            self.worst.max(value)
        };
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.problems.push(what.into());
        }
    }

    fn value_ok(&self) -> bool {
        if self.lower {
            self.worst >= self.bound
        } else {
            self.worst <= self.bound
        }
    }
}

fn dense(g: &CovarianceMatrix) -> DenseOperator {
    dense_state_from_covariance(g).unwrap()
}

fn diff(a: &AntisymmetricMatrix, b: &AntisymmetricMatrix) -> f64 {
    max_abs_diff(a.as_matrix(), b.as_matrix())
}

fn rotated(g: &CovarianceMatrix, r: &mut SeededRng) -> CovarianceMatrix {
    let q = random_special_orthogonal(r, 2 * g.modes());
    CovarianceMatrix::new(g.matrix().congruence(&q).unwrap()).unwrap()
}

fn exact_recovery() -> Outcome {
    let mut out = Outcome::at_most(1e-11).within(Duration::from_secs(10));
    let mut r = rng(1001);
    for k in 0..200 {
        let n = 1 + k % 4;
        let sigma = random_mixed_covariance(&mut r, n);
        let ch = random_channel(r.gen(), n, 1 + k % 3);
        let p = petz(&sigma, &ch).unwrap();
        let back = apply(&p, &apply(&ch, &sigma).unwrap()).unwrap();
        out.record(diff(back.matrix(), sigma.matrix()));
    }
    out
}

fn dense_petz_equivalence() -> Outcome {
    let mut out = Outcome::at_most(1e-8).within(Duration::from_secs(300));
    let mut r = rng(1002);
    for k in 0..25 {
        let n = 1 + k % 3;
        let m = 1 + (k / 3) % 2;
        let d = if k == 0 {
            attenuator_dilation(0.64, 0.9).unwrap()
        } else {
            random_dilation(r.gen(), n, m)
        };
        let n = d.system_modes();
        let sigma = random_mixed_covariance(&mut r, n);
        let ch = dilation_channel(&d);
        let p = petz(&sigma, &ch).unwrap();
        let map = dense_channel(&d).unwrap();
        let dense_p = dense_petz(&dense(&sigma), &map, false).unwrap();
        for _ in 0..5 {
            let rho = random_mixed_covariance(&mut r, n);
            let expected = apply(&p, &apply(&ch, &rho).unwrap()).unwrap();
            let got = dense_p.apply(&map.apply(&dense(&rho)).unwrap()).unwrap();
            out.record(diff(&dense_covariance_of(&got).unwrap(), expected.matrix()));
            out.record((got.trace() - Complex64::new(1.0, 0.0)).norm());
        }
    }
    out
}

fn two_path_error(direct: &GaussianCptpChannel, chain: &GaussianChannelData) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    [
        max_abs_diff(chain.b(), direct.b()),
        diff(chain.a(), direct.a()),
        max_abs(chain.d().as_matrix()),
        (chain.c() * chain.c() - one).norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

fn two_paths() -> Outcome {
    let mut out = Outcome::at_most(1e-7).within(Duration::from_secs(30));
    let mut r = rng(1003);
    for k in 0..80 {
        let n = 1 + k % 4;
        let sigma = random_mixed_covariance(&mut r, n);
        let ch = random_channel(r.gen(), n, 1 + k % 2);
        let direct = petz(&sigma, &ch).unwrap();
        out.record(two_path_error(&direct, &petz_via_composition(&sigma, &ch).unwrap()));
    }
    // A zero Williamson value of σ, or a unitary channel, makes an A-block of
    // the chain singular; the literal rule then needs regularization.
    for k in 0..20 {
        let n = 1 + k % 4;
        let ch = if k % 2 == 0 {
            unitary_channel(random_special_orthogonal(&mut r, 2 * n)).unwrap()
        } else {
            random_channel(r.gen(), n, 1)
        };
        let mut values: Vec<f64> = (0..n).map(|_| r.gen_range(0.1..0.9)).collect();
        values[0] = 0.0;
        let sigma = rotated(&CovarianceMatrix::product(&values).unwrap(), &mut r);
        let direct = petz(&sigma, &ch).unwrap();
        match petz_via_composition_using(&sigma, &ch, CompositionPath::Regularized) {
            Ok(chain) => out.record(two_path_error(&direct, &chain)),
            Err(e) => out.require(false, format!("regularized chain failed: {e}")),
        }
    }
    out
}

/// Linear block of a dense map: `B_kj = 2⁻ⁿ tr(γ_k M(γ_j))`.
fn dense_linear_block(map: &Superoperator) -> Mat {
    let gammas = majorana_operators(map.n_in()).unwrap();
    let scale = 1.0 / (1u64 << map.n_in()) as f64;
    let images: Vec<_> = gammas.iter().map(|g| map.apply(g).unwrap()).collect();
    Mat::from_fn(gammas.len(), gammas.len(), |k, j| {
        (gammas[k].matrix() * images[j].matrix()).trace().re * scale
    })
}

/// Rotated map built with `exp(-2t arctan G)` in place of `exp(-2t arctanh G)`.
fn arctan_rotated(sigma: &CovarianceMatrix, ch: &GaussianCptpChannel, t: f64) -> GaussianCptpChannel {
    let rotation = |g: &CovarianceMatrix, t: f64| {
        let chi = g.canonical().signed_values();
        g.canonical().rotation_exp(|k| -2.0 * t * chi[k].atan())
    };
    let n_sigma = apply(ch, sigma).unwrap();
    let p = petz(sigma, ch).unwrap();
    let b_sigma = rotation(sigma, t);
    let a = p.a().congruence(&b_sigma).unwrap();
    let b = &b_sigma * p.b() * rotation(&n_sigma, -t);
    GaussianCptpChannel::new_unchecked(a, b).unwrap()
}

fn rotated_map_adjudication() -> Outcome {
    let mut out = Outcome::at_most(1e-7).within(Duration::from_secs(10));
    let mut r = rng(1004);
    let sigma = CovarianceMatrix::product(&[0.5]).unwrap();
    let dilations = [attenuator_dilation(0.64, 0.9).unwrap(), random_dilation(r.gen(), 1, 1)];
    let mut arctan_gap = f64::INFINITY;
    for d in &dilations {
        let ch = dilation_channel(d);
        let map = dense_channel(d).unwrap();
        for t in [0.1, 0.3, 1.0] {
            // The atanh rotation helper reproduces the rotated map's frame.
            let chi = sigma.canonical().signed_values();
            let helper = sigma.canonical().rotation_exp(|k| -2.0 * t * chi[k].atanh());
            out.record(max_abs_diff(&helper, &power_rotation(&sigma, t).unwrap()));

            let rot = rotated_petz(&sigma, &ch, t).unwrap();
            let wrong = arctan_rotated(&sigma, &ch, t);
            let dense_rot = dense_rotated_petz(&dense(&sigma), &map, t).unwrap();
            // A one-mode rotation commutes with every one-mode covariance, so
            // outputs on states cannot tell the two exponents apart; the
            // linear block can.
            let linear = dense_linear_block(&dense_rot);
            out.record(max_abs_diff(&linear, rot.b()));
            let mut wrong_err = max_abs_diff(&linear, wrong.b());
            for _ in 0..4 {
                let rho = random_mixed_covariance(&mut r, 1);
                let output = apply(&ch, &rho).unwrap();
                let got = dense_covariance_of(&dense_rot.apply(&dense(&output)).unwrap()).unwrap();
                out.record(diff(&got, apply(&rot, &output).unwrap().matrix()));
                wrong_err = wrong_err.max(diff(&got, apply(&wrong, &output).unwrap().matrix()));
            }
            if t == 1.0 {
                arctan_gap = arctan_gap.min(wrong_err);
            }
        }
    }
    println!("     arctan variant off by {arctan_gap:.3e} at t = 1");
    out.require(
        arctan_gap >= 1e-2,
        format!("arctan variant deviates by only {arctan_gap:.3e} at t = 1"),
    );
    out
}

/// Fidelity pairs at n ≤ 3 with mixed, near-pure and pure members.
fn fidelity_pairs() -> Vec<(CovarianceMatrix, CovarianceMatrix)> {
    let mut r = rng(1005);
    let mut pairs: Vec<_> = (0..100)
        .map(|k| {
            let n = 1 + k % 3;
            let (hi_a, hi_b) = match k % 4 {
                0 => (1.0, 1.0),
                1 => (0.95, 0.99),
                2 => (0.5, 0.9),
                _ => (0.99, 0.99),
            };
            let a = random_covariance(&mut r, n, 0.0, hi_a);
            let b = if k % 10 == 9 {
                random_pure_covariance(&mut r, n)
            } else {
                random_covariance(&mut r, n, 0.0, hi_b)
            };
            (a, b)
        })
        .collect();
    pairs.extend(singular_pairs());
    pairs
}

/// Pairs with `det(I - G_σ G_ρ) = 0`: a pure mode of one state meets the
/// opposite pure mode of the other.
fn singular_pairs() -> Vec<(CovarianceMatrix, CovarianceMatrix)> {
    let mut r = rng(1006);
    (1..=3)
        .flat_map(|n| {
            let pure = random_pure_covariance(&mut r, n);
            let flipped = CovarianceMatrix::new(pure.matrix().neg()).unwrap();
            let mut a: Vec<f64> = (0..n).map(|_| r.gen_range(-0.9..0.9)).collect();
            let mut b: Vec<f64> = (0..n).map(|_| r.gen_range(-0.9..0.9)).collect();
            a[0] = 1.0;
            b[0] = -1.0;
            let q = random_special_orthogonal(&mut r, 2 * n);
            let frame = |v: &[f64]| {
                CovarianceMatrix::new(CovarianceMatrix::product(v).unwrap().matrix().congruence(&q).unwrap()).unwrap()
            };
            [(pure, flipped), (frame(&a), frame(&b))]
        })
        .collect()
}

fn fidelity_equivalence() -> Outcome {
    let mut out = Outcome::at_most(1e-9).within(Duration::from_secs(120));
    for (a, b) in fidelity_pairs() {
        let f = fidelity(&a, &b).unwrap();
        out.record((f - dense_fidelity(&dense(&a), &dense(&b)).unwrap()).abs());
    }
    for (a, b) in singular_pairs() {
        let f = fidelity(&a, &b).unwrap();
        out.require(f == 0.0, format!("singular pair gave F = {f:e}"));
    }
    out
}

fn overlap_formula() -> Outcome {
    let mut out = Outcome::at_most(1e-10);
    for (a, b) in fidelity_pairs() {
        let expected = (dense(&a).matrix() * dense(&b).matrix()).trace().re;
        out.record((overlap(&a, &b).unwrap() - expected).abs());
    }
    out
}

fn random_operator(r: &mut SeededRng, n: usize) -> DenseOperator {
    let d = 1usize << n;
    let m = CMat::from_fn(d, d, |_, _| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)));
    DenseOperator::new(n, m).unwrap()
}

fn hs(a: &DenseOperator, b: &DenseOperator) -> Complex64 {
    (a.matrix().adjoint() * b.matrix()).trace()
}

fn closure_and_adjoint() -> Outcome {
    let mut out = Outcome::at_most(1e-9);
    let mut r = rng(1007);
    for k in 0..100 {
        let n = 1 + k % 4;
        let first = random_channel(r.gen(), n, 1 + k % 3);
        let second = random_channel(r.gen(), n, 1);
        let composite = compose(&second.data(), &first.data()).unwrap();
        let verdict = validate_cp(&composite);
        out.require(verdict.is_cp() && validate_tp(&composite), format!("composite {k} not CPTP"));
        out.record((verdict.max_singular_value - 1.0).max(0.0));
        out.require(validate_unital(&adjoint(&first.data())), format!("adjoint {k} not unital"));
    }
    for k in 0..12 {
        let (n, m) = [(1, 1), (2, 1), (2, 2), (3, 1)][k % 4];
        let d = random_dilation(r.gen(), n, m);
        let map = dense_channel(&d).unwrap();
        let adj = map.adjoint();
        for _ in 0..3 {
            let x = random_operator(&mut r, n);
            let y = random_operator(&mut r, n);
            let lhs = hs(&x, &map.apply(&y).unwrap());
            let rhs = hs(&adj.apply(&x).unwrap(), &y);
            out.record((lhs - rhs).norm() / lhs.norm().max(1.0));
            // The covariance-level adjoint acts on Gaussian operators like the dense one.
            let g = random_mixed_covariance(&mut r, n);
            let image = gaussian_action(&adjoint(&dilation_channel(&d).data()), &g).unwrap();
            let dense_out = adj.apply(&dense(&g)).unwrap();
            let (cov, trace) = normalized_covariance(&dense_out).unwrap();
            out.record(diff(&cov, &image.covariance));
            out.record((Complex64::new(trace, 0.0) - image.trace).norm() / trace.abs().max(1.0));
        }
    }
    out
}

fn linalg_kernels() -> Outcome {
    let mut out = Outcome::at_most(1e-9);
    let mut r = rng(1008);
    for n in 1..=32 {
        let m = random_antisymmetric(&mut r, n);
        let (pf, d) = (pfaffian_log(&m), log_det(m.as_matrix()));
        let rel = (2.0 * pf.log_abs - d.log_abs).exp_m1().abs();
        out.require(rel <= 1e-8 && d.sign > 0.0, format!("Pf^2 vs det at 2n = {}: {rel:e}", 2 * n));
        if n <= 8 {
            let direct = pfaffian(&m);
            let det = d.value();
            out.require(
                (direct * direct - det).abs() <= 1e-8 * det.abs(),
                format!("direct Pf^2 vs det at 2n = {}", 2 * n),
            );
        }
        let form = canonical_decompose(&m);
        out.record(max_abs_diff(form.reconstruct().as_matrix(), m.as_matrix()));
    }
    for n in 1..=6 {
        let m = random_antisymmetric(&mut r, n);
        let cube = odd_function(&m, |x| -x * x * x).unwrap();
        let direct = m.as_matrix() * m.as_matrix() * m.as_matrix();
        out.record(max_abs_diff(cube.as_matrix(), &direct) / max_abs(&direct).max(1.0));
        let g = even_function(&m, f64::cos).unwrap();
        let h = even_function(&m, |x| (-x * x).exp()).unwrap();
        let gh = even_function(&m, |x| x.cos() * (-x * x).exp()).unwrap();
        out.record(max_abs_diff(&(&g * &h), &gh));

        let cov = random_covariance(&mut r, n, 0.0, 1.0);
        let dim = 2 * n;
        let sq = cov.as_matrix() * cov.as_matrix();
        let root = even_function(cov.matrix(), |x| (1.0 - x * x).max(0.0).sqrt()).unwrap();
        out.record(max_abs_diff(&root, &sym_psd_sqrt(&(Mat::identity(dim, dim) + &sq))));
    }
    for n in 1..=3 {
        let m = random_antisymmetric(&mut r, n);
        for beta in [0.0, 0.7, 2.5] {
            let h = QuadraticHamiltonian::new(m.clone(), InverseTemperature::finite(beta).unwrap());
            let rho = dense_thermal_state(&h).unwrap();
            out.record(diff(state_from_hamiltonian(&h).matrix(), &dense_covariance_of(&rho).unwrap()));
        }
    }
    out
}

fn degenerate_regime() -> Outcome {
    let mut out = Outcome::at_most(10.0);
    let mut r = rng(1009);
    for n in 1..=3 {
        let sigma = random_mixed_covariance(&mut r, n);
        let swap = dilation_channel(&swap_dilation(random_mixed_covariance(&mut r, n)));
        let p = petz(&sigma, &swap).unwrap();
        out.require(max_abs(p.b()) == 0.0, format!("swap family B_P != 0 at n = {n}"));
        out.require(diff(p.a(), sigma.matrix()) <= 1e-15, format!("swap family A_P != G at n = {n}"));
    }
    let lambda = 0.5;
    let sigma = CovarianceMatrix::product(&[lambda]).unwrap();
    for k in 3..=6 {
        let gap = 10f64.powi(-k);
        let ch = attenuator(gap / (1.0 - lambda), 1.0).unwrap();
        let p = petz(&sigma, &ch).unwrap();
        out.record(max_abs(p.b()));
        let residual = recovery_residual(&sigma, &ch, &p).unwrap();
        out.require(residual <= 1e-9, format!("near-pure residual {residual:e} at k = {k}"));
    }
    // One output mode replaced by a pure environment mode, then scrambled.
    for n in 1..=3 {
        let env = CovarianceMatrix::product(&[1.0]).unwrap();
        let dim = 2 * (n + 1);
        let mut frame = Mat::identity(dim, dim);
        frame
            .view_mut((0, 0), (2 * n, 2 * n))
            .copy_from(&random_special_orthogonal(&mut r, 2 * n));
        let mut swap = Mat::identity(dim, dim);
        for i in 0..2 {
            let (a, b) = (2 * (n - 1) + i, 2 * n + i);
            swap[(a, a)] = 0.0;
            swap[(b, b)] = 0.0;
            swap[(a, b)] = 1.0;
            swap[(b, a)] = 1.0;
        }
        let d = Dilation::new(frame * swap, env, n).unwrap();
        let ch = dilation_channel(&d);
        let sigma = random_mixed_covariance(&mut r, n);
        out.require(petz(&sigma, &ch).is_err(), "pure output accepted without support mode");
        let support = petz_on_support(&sigma, &ch).unwrap();
        let data = support.channel.data();
        out.require(
            validate_cp(&data).is_cp() && validate_tp(&data),
            format!("support map not CPTP at n = {n}"),
        );
        out.require(support.pure_modes.len() == 1, "expected one pure output mode");
        let back = support.apply(&apply(&ch, &sigma).unwrap()).unwrap();
        out.require(diff(back.matrix(), sigma.matrix()) <= 1e-10, "support map misses the reference");
    }
    out
}

fn monotonicity() -> Outcome {
    let mut out = Outcome::at_least(-1e-9);
    let mut r = rng(1010);
    for k in 0..100 {
        let n = 1 + k % 3;
        let ch = random_channel(r.gen(), n, 1 + k % 2);
        let (a, b) = (random_mixed_covariance(&mut r, n), random_mixed_covariance(&mut r, n));
        out.record(monotonicity_margin(&a, &b, &ch).unwrap());
    }
    let mut entropy_worst = f64::INFINITY;
    for k in 0..100 {
        let n = 1 + k % 2;
        let d = random_dilation(r.gen(), n, 1);
        let map = dense_channel(&d).unwrap();
        let rho = dense(&random_mixed_covariance(&mut r, n));
        let sigma = dense(&random_mixed_covariance(&mut r, n));
        let before = dense_relative_entropy(&rho, &sigma);
        let after = dense_relative_entropy(&map.apply(&rho).unwrap(), &map.apply(&sigma).unwrap());
        entropy_worst = entropy_worst.min(before - after);
    }
    out.require(
        entropy_worst >= -1e-8,
        format!("relative entropy margin {entropy_worst:e} below -1e-8"),
    );
    out
}

fn seconds(f: impl FnOnce()) -> f64 {
    let start = Instant::now();
    f();
    start.elapsed().as_secs_f64()
}

/// Best-of-`reps` wall time of one Pfaffian at `modes`.
fn pfaffian_time(modes: usize, reps: usize) -> f64 {
    let m = random_antisymmetric(&mut rng(modes as u64), modes);
    let batch = (2048 / (modes * modes)).max(1);
    (0..reps)
        .map(|_| {
            seconds(|| {
                for _ in 0..batch {
                    std::hint::black_box(pfaffian(std::hint::black_box(&m)));
                }
            }) / batch as f64
        })
        .fold(f64::INFINITY, f64::min)
}

fn performance() -> Outcome {
    let mut out = Outcome::at_most(3.5);
    let n = 256;
    let mut r = rng(1011);
    let sigma = random_mixed_covariance(&mut r, n);
    let other = random_mixed_covariance(&mut r, n);
    let ch = random_channel(r.gen(), n, 1);
    let petz_s = seconds(|| {
        std::hint::black_box(petz(&sigma, &ch).unwrap());
    });
    let fid_s = seconds(|| {
        std::hint::black_box(fidelity(&sigma, &other).unwrap());
    });
    out.require(petz_s < 10.0, format!("petz at n = 256 took {petz_s:.2} s"));
    out.require(fid_s < 10.0, format!("fidelity at n = 256 took {fid_s:.2} s"));
    let points: Vec<(f64, f64)> = [8, 32, 128]
        .iter()
        .map(|&m| ((2 * m) as f64, pfaffian_time(m, 7)))
        .map(|(x, t)| (x.ln(), t.ln()))
        .collect();
    let mx = points.iter().map(|p| p.0).sum::<f64>() / points.len() as f64;
    let my = points.iter().map(|p| p.1).sum::<f64>() / points.len() as f64;
    let slope = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / points.iter().map(|(x, _)| (x - mx).powi(2)).sum::<f64>();
    out.record(slope);
    println!("     petz {petz_s:.3} s, fidelity {fid_s:.3} s, pfaffian exponent {slope:.2}");
    out
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("exact reference recovery", exact_recovery),
        ("Petz dense-oracle equivalence", dense_petz_equivalence),
        ("two-path Petz agreement", two_paths),
        ("rotated-map adjudication", rotated_map_adjudication),
        ("fidelity equivalence", fidelity_equivalence),
        ("overlap formula", overlap_formula),
        ("CP/TP closure and adjoint", closure_and_adjoint),
        ("linear-algebra kernels", linalg_kernels),
        ("degenerate regimes", degenerate_regime),
        ("monotonicity spot checks", monotonicity),
        ("performance", performance),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let late = out.limit.is_some_and(|limit| elapsed > limit);
        let pass = out.value_ok() && out.problems.is_empty() && !late;
        failed += usize::from(!pass);
        let relation = if out.lower { ">=" } else { "<=" };
        println!(
            "{} {:>2} {:<31} worst {:.3e} {relation} {:e}  {:.2} s",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            name,
            out.worst,
            out.bound,
            elapsed.as_secs_f64(),
        );
        if late {
            println!("     over time limit of {} s", out.limit.unwrap().as_secs());
        }
        for problem in &out.problems {
            println!("     {problem}");
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
