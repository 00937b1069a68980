// Copyright 2026 The fgauss Authors
// SPDX-License-Identifier: Apache-2.0

//! Randomized property suite behind `fgauss verify`.
//!
//! Every property maps a seeded generator and a mode count to a nonnegative
//! residual that must not exceed its tolerance. Trial `k` of property `p`
//! draws from `derive_seed(derive_seed(master, k), p)`, so the report does
//! not depend on how trials are scheduled.

use std::fmt;

use fgauss_core::channel::{adjoint, apply, compose, validate_cp, GaussianChannelData};
use fgauss_core::dense::{
    dense_channel, dense_covariance_of, dense_fidelity, dense_petz, dense_relative_entropy,
    dense_state_from_covariance, dense_unitary_channel, DenseOperator, Superoperator,
};
use fgauss_core::fidelity::{fidelity, monotonicity_margin, overlap};
use fgauss_core::linalg::{
    canonical_decompose, even_function, log_det, max_abs, max_abs_diff, odd_function, pfaffian_log,
    sym_psd_sqrt,
};
use fgauss_core::models::{random_channel, random_dilation, unitary_channel};
use fgauss_core::random::{
    derive_seed, random_antisymmetric, random_covariance, random_mixed_covariance, random_special_orthogonal,
    rng, SeededRng,
};
use fgauss_core::recovery::{
    petz, petz_via_composition_using, recovery_residual, rotated_petz, CompositionPath,
};
use fgauss_core::state::power_rotation;
use fgauss_core::{CovarianceMatrix, GaussianCptpChannel, Mat};
use rand::Rng;
use rayon::prelude::*;

/// Largest mode count accepted with `--dense`.
pub const DENSE_MODE_CAP: usize = 5;

type Check = fn(&mut SeededRng, usize) -> Result<f64, String>;

struct Property {
    name: &'static str,
    tol: f64,
    dense: bool,
    check: Check,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub modes: usize,
    pub trials: usize,
    pub dense: bool,
    /// Replaces every property tolerance when set.
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub worst: f64,
    pub tol: f64,
    pub failures: usize,
    /// First error message, if a trial raised one.
    pub error: Option<String>,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub config: VerifyConfig,
    pub outcomes: Vec<PropertyOutcome>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(PropertyOutcome::passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(
            f,
            "verify: seed {}, n {}, trials {}, dense {}",
            c.seed,
            c.modes,
            c.trials,
            if c.dense { "on" } else { "off" }
        )?;
        let width = self.outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
        for o in &self.outcomes {
            write!(
                f,
                "{} {:width$}  worst {:.3e}  tol {:.0e}",
                if o.passed() { "PASS" } else { "FAIL" },
                o.name,
                o.worst,
                o.tol,
            )?;
            if o.failures > 0 {
                write!(f, "  ({} of {} trials failed)", o.failures, c.trials)?;
            }
            if let Some(e) = &o.error {
                write!(f, "  error: {e}")?;
            }
            writeln!(f)?;
        }
        let failed = self.outcomes.iter().filter(|o| !o.passed()).count();
        writeln!(f, "{} passed, {} failed", self.outcomes.len() - failed, failed)
    }
}

fn err(e: fgauss_core::Error) -> String {
    e.to_string()
}

fn mixed_pair(r: &mut SeededRng, n: usize) -> (CovarianceMatrix, GaussianCptpChannel) {
    let sigma = random_mixed_covariance(r, n);
    let m = r.gen_range(1..=2);
    (sigma, random_channel(r.gen(), n, m))
}

/// `max(‖N‖ - 1, 0)` together with the TP deviation.
fn cptp_defect(ch: &GaussianChannelData) -> f64 {
    let sv = validate_cp(ch).max_singular_value;
    (sv - 1.0)
        .max(0.0)
        .max((ch.c() - 1.0).norm())
        .max(max_abs(ch.d().as_matrix()))
}

fn canonical_reconstruction(r: &mut SeededRng, n: usize) -> Result<f64, String> {
    let m = random_antisymmetric(r, n);
    let form = canonical_decompose(&m);
    Ok(max_abs_diff(form.reconstruct().as_matrix(), m.as_matrix()))
}

fn pfaffian_squared_det(r: &mut SeededRng, n: usize) -> Result<f64, String> {
    let m = random_antisymmetric(r, n);
    let pf = pfaffian_log(&m);
    let det = log_det(m.as_matrix());
    if det.sign < 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((2.0 * pf.log_abs - det.log_abs).exp_m1().abs())
}

fn even_root_identity(r: &mut SeededRng, n: usize) -> Result<f64, String> {
    let g = random_covariance(r, n, 0.0, 1.0);
    let dim = 2 * n;
    let root = even_function(g.matrix(), |x| (1.0 - x * x).max(0.0).sqrt()).map_err(err)?;
    let square = g.as_matrix() * g.as_matrix();
    Ok(max_abs_diff(&root, &sym_psd_sqrt(&(Mat::identity(dim, dim) + square))))
}

fn odd_cube_identity(r: &mut SeededRng, n: usize) -> Result<f64, String> {
    let m = random_antisymmetric(r, n);
    let cube = odd_function(&m, |x| -x * x * x).map_err(err)?;
    let direct = m.as_matrix() * m.as_matrix() * m.as_matrix();
    Ok(max_abs_diff(cube.as_matrix(), &direct) / max_abs(&direct).max(1.0))
}

fn channel_output_valid(r: &mut SeededRng, n: usize) -> Result<f64, String> {
    let (sigma, ch) = mixed_pair(r, n);
    let out = apply(&ch, &sigma).map_err(err)?;
    Ok(out.williamson().iter().fold(0.0_f64, |acc, v| acc.max(v - 1.0)))
}

fn composition_closure(r: &mut SeededRng, n: usize) -> Result<f64, String> {
    let first = random_channel(r.gen(), n, r.gen_range(1..=2));
    let second = random_channel(r.gen(), n, r.gen_range(1..=2));
    Ok(cptp_defect(&compose(&second.data(), &first.data()).map_err(err)?))
}

fn adjoint_unital(r: &mut SeededRng, n: usize) -> Result<f64, String> {
    let ch = random_channel(r.gen(), n, r.gen_range(1..=2));
    let adj = adjoint(&ch.data());
    Ok(max_abs(adj.a().as_matrix()).max((adj.c() - 1.0).norm()))
}

fn petz_recovers_reference(r: &mut SeededRng, n: usize) -> Result<f64, String> {
    let (sigma, ch) = mixed_pair(r, n);
    let p = petz(&sigma, &ch).map_err(err)?;
    recovery_residual(&sigma, &ch, &p).map_err(err)
}

fn petz_is_cptp(r: &mut SeededRng, n: usize) -> Result<f64, String> {
    let (sigma, ch) = mixed_pair(r, n);
    Ok(cptp_defect(&petz(&sigma, &ch).map_err(err)?.data()))
}

fn petz_two_paths(r: &mut SeededRng, n: usize) -> Result<f64, String> {
    let (sigma, ch) = mixed_pair(r, n);
    let direct = petz(&sigma, &ch).map_err(err)?;
    let mut worst = 0.0_f64;
    for path in [CompositionPath::InverseFree, CompositionPath::Regularized] {
        let chain = petz_via_composition_using(&sigma, &ch, path).map_err(err)?;
        worst = worst
            .max(max_abs_diff(chain.a().as_matrix(), direct.a().as_matrix()))
            .max(max_abs_diff(chain.b(), direct.b()));
    }
    Ok(worst)
}

fn rotated_recovers_reference(r: &mut SeededRng, n: usize) -> Result<f64, String> {
    let (sigma, ch) = mixed_pair(r, n);
    let t = r.gen_range(-2.0..2.0);
    let rot = rotated_petz(&sigma, &ch, t).map_err(err)?;
    Ok(recovery_residual(&sigma, &ch, &rot).map_err(err)?.max(cptp_defect(&rot.data())))
}

fn power_rotation_group(r: &mut SeededRng, n: usize) -> Result<f64, String> {
    let g = random_mixed_covariance(r, n);
    let (s, t) = (r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
    let product = power_rotation(&g, s).map_err(err)? * power_rotation(&g, t).map_err(err)?;
    Ok(max_abs_diff(&product, &power_rotation(&g, s + t).map_err(err)?))
}

fn state_pair(r: &mut SeededRng, n: usize) -> (CovarianceMatrix, CovarianceMatrix) {
    let a = random_covariance(r, n, 0.0, 1.0);
    let b = if r.gen_bool(0.25) {
        random_covariance(r, n, 1.0, 1.0)
    } else {
        random_mixed_covariance(r, n)
    };
    (a, b)
}

fn fidelity_symmetry(r: &mut SeededRng, n: usize) -> Result<f64, String> {
    let (a, b) = state_pair(r, n);
    let f = fidelity(&a, &b).map_err(err)?;
    let range = (f - 1.0).max(-f).max(0.0);
    Ok((f - fidelity(&b, &a).map_err(err)?).abs().max(range))
}

fn fidelity_monotone(r: &mut SeededRng, n: usize) -> Result<f64, String> {
    let (a, b) = state_pair(r, n);
    let ch = random_channel(r.gen(), n, r.gen_range(1..=2));
    Ok((-monotonicity_margin(&a, &b, &ch).map_err(err)?).max(0.0))
}

fn overlap_bound(r: &mut SeededRng, n: usize) -> Result<f64, String> {
    let (a, b) = state_pair(r, n);
    let f = fidelity(&a, &b).map_err(err)?;
    Ok((overlap(&a, &b).map_err(err)? - f * f).max(0.0))
}

fn dense(g: &CovarianceMatrix) -> Result<DenseOperator, String> {
    dense_state_from_covariance(g).map_err(err)
}

/// A random channel with its dense superoperator, keeping system plus
/// environment within the dense cap.
fn dense_pair(r: &mut SeededRng, n: usize) -> Result<(GaussianCptpChannel, Superoperator), String> {
    let m = 2.min(DENSE_MODE_CAP - n);
    if m == 0 {
        let rot = random_special_orthogonal(r, 2 * n);
        let map = dense_unitary_channel(&rot).map_err(err)?;
        return Ok((unitary_channel(rot).map_err(err)?, map));
    }
    let d = random_dilation(r.gen(), n, m);
    let map = dense_channel(&d).map_err(err)?;
    Ok((fgauss_core::models::dilation_channel(&d), map))
}

fn covariance_gap(rho: &DenseOperator, g: &CovarianceMatrix) -> Result<f64, String> {
    let dense_g = dense_covariance_of(rho).map_err(err)?;
    Ok(max_abs_diff(dense_g.as_matrix(), g.as_matrix()))
}

fn dense_state_roundtrip(r: &mut SeededRng, n: usize) -> Result<f64, String> {
    let g = random_covariance(r, n, 0.0, 1.0);
    covariance_gap(&dense(&g)?, &g)
}

fn dense_channel_action(r: &mut SeededRng, n: usize) -> Result<f64, String> {
    let (ch, map) = dense_pair(r, n)?;
    let g = random_mixed_covariance(r, n);
    let out = map.apply(&dense(&g)?).map_err(err)?;
    covariance_gap(&out, &apply(&ch, &g).map_err(err)?)
}

fn dense_petz_action(r: &mut SeededRng, n: usize) -> Result<f64, String> {
    let (ch, map) = dense_pair(r, n)?;
    let sigma = random_mixed_covariance(r, n);
    let p = petz(&sigma, &ch).map_err(err)?;
    let dense_p = dense_petz(&dense(&sigma)?, &map, false).map_err(err)?;
    let rho = random_mixed_covariance(r, n);
    let out = apply(&ch, &rho).map_err(err)?;
    let back = dense_p.apply(&dense(&out)?).map_err(err)?;
    covariance_gap(&back, &apply(&p, &out).map_err(err)?)
}

fn dense_fidelity_agreement(r: &mut SeededRng, n: usize) -> Result<f64, String> {
    let (a, b) = state_pair(r, n);
    let d = dense_fidelity(&dense(&a)?, &dense(&b)?).map_err(err)?;
    Ok((fidelity(&a, &b).map_err(err)? - d).abs())
}

fn dense_overlap_agreement(r: &mut SeededRng, n: usize) -> Result<f64, String> {
    let (a, b) = state_pair(r, n);
    let trace = (dense(&a)?.matrix() * dense(&b)?.matrix()).trace().re;
    Ok((overlap(&a, &b).map_err(err)? - trace).abs())
}

fn dense_relative_entropy_monotone(r: &mut SeededRng, n: usize) -> Result<f64, String> {
    let (_, map) = dense_pair(r, n)?;
    let rho = dense(&random_mixed_covariance(r, n))?;
    let sigma = dense(&random_mixed_covariance(r, n))?;
    let before = dense_relative_entropy(&rho, &sigma);
    let after = dense_relative_entropy(&map.apply(&rho).map_err(err)?, &map.apply(&sigma).map_err(err)?);
    Ok((after - before).max(0.0))
}

const PROPERTIES: &[Property] = &[
    Property { name: "canonical_reconstruction", tol: 1e-9, dense: false, check: canonical_reconstruction },
    Property { name: "pfaffian_squared_is_det", tol: 1e-8, dense: false, check: pfaffian_squared_det },
    Property { name: "even_function_root", tol: 1e-9, dense: false, check: even_root_identity },
    Property { name: "odd_function_cube", tol: 1e-9, dense: false, check: odd_cube_identity },
    Property { name: "channel_output_valid", tol: 1e-10, dense: false, check: channel_output_valid },
    Property { name: "composition_cptp", tol: 1e-10, dense: false, check: composition_closure },
    Property { name: "adjoint_unital", tol: 1e-12, dense: false, check: adjoint_unital },
    Property { name: "petz_recovers_reference", tol: 1e-11, dense: false, check: petz_recovers_reference },
    Property { name: "petz_cptp", tol: 1e-10, dense: false, check: petz_is_cptp },
    Property { name: "petz_two_paths", tol: 1e-7, dense: false, check: petz_two_paths },
    Property { name: "rotated_recovers_reference", tol: 1e-10, dense: false, check: rotated_recovers_reference },
    Property { name: "power_rotation_group", tol: 1e-9, dense: false, check: power_rotation_group },
    Property { name: "fidelity_symmetric_in_range", tol: 1e-10, dense: false, check: fidelity_symmetry },
    Property { name: "fidelity_monotone", tol: 1e-9, dense: false, check: fidelity_monotone },
    Property { name: "overlap_below_fidelity_squared", tol: 1e-9, dense: false, check: overlap_bound },
    Property { name: "dense_state_roundtrip", tol: 1e-10, dense: true, check: dense_state_roundtrip },
    Property { name: "dense_channel_action", tol: 1e-9, dense: true, check: dense_channel_action },
    Property { name: "dense_petz", tol: 1e-8, dense: true, check: dense_petz_action },
    Property { name: "dense_fidelity", tol: 1e-9, dense: true, check: dense_fidelity_agreement },
    Property { name: "dense_overlap", tol: 1e-10, dense: true, check: dense_overlap_agreement },
    Property {
        name: "dense_relative_entropy_monotone",
        tol: 1e-8,
        dense: true,
        check: dense_relative_entropy_monotone,
    },
];

/// Runs the suite. Trials run in parallel.
pub fn run(config: &VerifyConfig) -> Report {
    let selected: Vec<&Property> = PROPERTIES.iter().filter(|p| config.dense || !p.dense).collect();
    let residuals: Vec<Vec<Result<f64, String>>> = (0..config.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let trial_seed = derive_seed(config.seed, trial);
            PROPERTIES
                .iter()
                .enumerate()
                .filter(|(_, p)| config.dense || !p.dense)
                .map(|(index, p)| (p.check)(&mut rng(derive_seed(trial_seed, index as u64)), config.modes))
                .collect()
        })
        .collect();

    let outcomes = selected
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let tol = config.tol.unwrap_or(p.tol);
            let mut outcome = PropertyOutcome {
                name: p.name,
                worst: 0.0,
                tol,
                failures: 0,
                error: None,
            };
            for trial in &residuals {
                match &trial[k] {
                    Ok(v) if *v <= tol => outcome.worst = outcome.worst.max(*v),
                    Ok(v) => {
                        outcome.failures += 1;
                        outcome.worst = if v.is_nan() { f64::NAN } else { outcome.worst.max(*v) };
                    }
                    Err(e) => {
                        outcome.failures += 1;
                        outcome.worst = f64::INFINITY;
                        outcome.error.get_or_insert_with(|| e.clone());
                    }
                }
            }
            outcome
        })
        .collect();
    Report {
        config: config.clone(),
        outcomes,
    }
}
