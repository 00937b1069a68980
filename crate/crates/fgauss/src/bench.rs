// Copyright 2026 The fgauss Authors
// SPDX-License-Identifier: Apache-2.0

//! Timing of the covariance-level kernels.

use std::io::Write;
use std::time::Instant;

use fgauss_core::fidelity::fidelity;
use fgauss_core::linalg::{canonical_decompose, pfaffian};
use fgauss_core::models::random_channel;
use fgauss_core::random::{derive_seed, random_antisymmetric, random_mixed_covariance, rng};
use fgauss_core::recovery::petz;
use rand::Rng;

pub const OPS: [&str; 4] = ["canonical_decompose", "pfaffian", "petz", "fidelity"];

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Timing {
    pub op: &'static str,
    pub n: usize,
    pub mean_ms: f64,
    pub std_ms: f64,
}

fn time_ms(reps: usize, mut f: impl FnMut()) -> (f64, f64) {
    let samples: Vec<f64> = (0..reps.max(1))
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed().as_secs_f64() * 1e3
        })
        .collect();
    let k = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / k;
    let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (k - 1.0).max(1.0);
    (mean, var.sqrt())
}

/// Times one operation at `n` modes on inputs drawn from `seed`.
pub fn time_op(op: &str, n: usize, reps: usize, seed: u64) -> Timing {
    let mut r = rng(derive_seed(seed, n as u64));
    let (mean_ms, std_ms) = match op {
        "canonical_decompose" => {
            let m = random_antisymmetric(&mut r, n);
            time_ms(reps, || {
                std::hint::black_box(canonical_decompose(&m));
            })
        }
        "pfaffian" => {
            let m = random_antisymmetric(&mut r, n);
            time_ms(reps, || {
                std::hint::black_box(pfaffian(&m));
            })
        }
        "petz" => {
            let sigma = random_mixed_covariance(&mut r, n);
            let ch = random_channel(r.gen(), n, n);
            time_ms(reps, || {
                std::hint::black_box(petz(&sigma, &ch).expect("mixed reference"));
            })
        }
        "fidelity" => {
            let a = random_mixed_covariance(&mut r, n);
            let b = random_mixed_covariance(&mut r, n);
            time_ms(reps, || {
                std::hint::black_box(fidelity(&a, &b).expect("equal sizes"));
            })
        }
        other => panic!("unknown benchmark op {other}"),
    };
    let op = OPS.iter().copied().find(|o| *o == op).expect("known op");
    Timing { op, n, mean_ms, std_ms }
}

/// All operations over all sizes, in `OPS` order.
pub fn run(sizes: &[usize], reps: usize, seed: u64) -> Vec<Timing> {
    OPS.iter()
        .flat_map(|op| sizes.iter().map(move |n| time_op(op, *n, reps, seed)))
        .collect()
}

/// Least-squares slope of `log(mean_ms)` against `log(2n)` for one operation.
pub fn fitted_exponent(rows: &[Timing], op: &str) -> Option<f64> {
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|t| t.op == op && t.mean_ms > 0.0)
        .map(|t| ((2.0 * t.n as f64).ln(), t.mean_ms.ln()))
        .collect();
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let (mx, my) = (
        points.iter().map(|p| p.0).sum::<f64>() / k,
        points.iter().map(|p| p.1).sum::<f64>() / k,
    );
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn write_csv<W: Write>(out: W, rows: &[Timing]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
