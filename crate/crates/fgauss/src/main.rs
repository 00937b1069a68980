// Copyright 2026 The fgauss Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fgauss::io::{self, Document, FileError, ReadError};
use fgauss::{bench, verify};
use fgauss_core::channel::{
    apply, compose, compose_regularized, validate_cp, GaussianChannelData, CP_TOL, EXACT_TOL,
};
use fgauss_core::fidelity::{fidelity, overlap};
use fgauss_core::linalg::{canonical_decompose, max_abs, max_abs_diff};
use fgauss_core::models::{dilation_channel, random_dilation};
use fgauss_core::random::{random_covariance, random_mixed_covariance, random_pure_covariance, rng};
use fgauss_core::recovery::{petz, petz_on_support, recovery_residual, rotated_petz};
use fgauss_core::state::COVARIANCE_TOL;
use fgauss_core::{AntisymmetricMatrix, CovarianceMatrix, Error, GaussianCptpChannel};

/// Fermionic Gaussian states and channels at the covariance-matrix level.
#[derive(Parser)]
#[command(name = "fgauss", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a state, channel or dilation file.
    Validate {
        path: PathBuf,
        /// Tolerance for the covariance bound, CP and TP checks.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Write the Petz (or rotated) recovery map of a channel for a reference state.
    Petz {
        sigma: PathBuf,
        channel: PathBuf,
        /// Rotation parameter; gives the rotated map.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
        /// Restrict to the support of N(sigma) when it is not faithful.
        #[arg(long, conflicts_with = "t")]
        support: bool,
        /// With --support, where to write the canonical frame and mode split.
        #[arg(long, requires = "support")]
        frame: Option<PathBuf>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Fidelity and overlap of two states.
    Fidelity {
        a: PathBuf,
        b: PathBuf,
        /// Print both values as JSON at full precision.
        #[arg(long)]
        json: bool,
    },
    /// Apply a channel to a state.
    Apply {
        channel: PathBuf,
        state: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compose two maps: SECOND after FIRST.
    Compose {
        second: PathBuf,
        first: PathBuf,
        /// Use the literal rule with regularization.
        #[arg(long)]
        regularized: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Emit a seeded random state, channel or dilation.
    Random(RandomArgs),
    /// Run the randomized property suite.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Include dense-oracle properties (n <= 5).
        #[arg(long)]
        dense: bool,
        /// Replace every property tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Time the covariance-level kernels and write CSV.
    Bench {
        /// Mode counts.
        #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RandomKind {
    State,
    Channel,
    Dilation,
}

#[derive(Args)]
struct RandomArgs {
    kind: RandomKind,
    #[arg(long)]
    n: usize,
    /// Environment modes for channels and dilations.
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Pure state (Williamson values 1).
    #[arg(long, conflicts_with = "full_range")]
    pure: bool,
    /// Williamson values uniform in [0, 1] instead of [0, 0.95].
    #[arg(long)]
    full_range: bool,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

/// Error with its exit code: 1 for I/O and parse errors, 2 for invalid
/// input, 3 for unfaithful references, 4 for verification failures.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Self::new(2, message)
    }
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        Self::new(1, e.to_string())
    }
}

impl From<ReadError> for Failure {
    fn from(e: ReadError) -> Self {
        match e {
            ReadError::File(e) => e.into(),
            ReadError::Invalid(e) => Self::invalid(e.to_string()),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => Ok(io::write_text(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn validate_state(g: fgauss_core::Mat, tol: f64) -> Outcome {
    let g = match AntisymmetricMatrix::new(g) {
        Ok(g) => g,
        Err(e) => {
            println!("state: invalid ({e})");
            return Ok(2);
        }
    };
    let form = canonical_decompose(&g);
    let values = form.williamson();
    println!("state: n = {}", g.dim() / 2);
    println!("Williamson values: {values:?}");
    let offending: Vec<f64> = values.iter().copied().filter(|v| *v > 1.0 + tol).collect();
    if !offending.is_empty() {
        println!("covariance bound: violated (values above 1: {offending:?})");
        return Ok(2);
    }
    println!("covariance bound: ok");
    let pure = values.iter().filter(|v| 1.0 - **v <= tol).count();
    println!("pure modes: {pure} of {}", values.len());
    Ok(0)
}

fn validate_channel(ch: &GaussianChannelData, tol: Option<f64>) -> u8 {
    let verdict = validate_cp(ch);
    let cp = verdict.c_nonnegative && verdict.max_singular_value <= 1.0 + tol.unwrap_or(CP_TOL);
    let exact = tol.unwrap_or(EXACT_TOL);
    let tp = (ch.c() - 1.0).norm() <= exact && max_abs(ch.d().as_matrix()) <= exact;
    println!("channel: n_in = {}, n_out = {}", ch.n_in(), ch.n_out());
    println!("max singular value: {}", verdict.max_singular_value);
    println!("C: {} {:+}i", ch.c().re, ch.c().im);
    println!("max |D|: {:e}", max_abs(ch.d().as_matrix()));
    println!("CP: {}, TP: {}", yes_no(cp), yes_no(tp));
    if cp && tp {
        0
    } else {
        2
    }
}

fn cmd_validate(path: &Path, tol: Option<f64>) -> Outcome {
    match io::read_document(path)? {
        Document::State(_, g) => validate_state(g, tol.unwrap_or(COVARIANCE_TOL)),
        Document::Channel(raw) => match raw.to_data() {
            Ok(ch) => Ok(validate_channel(&ch, tol)),
            Err(e) => {
                println!("channel: invalid ({e})");
                Ok(2)
            }
        },
        Document::Dilation(raw) => match raw.to_dilation() {
            Ok(d) => {
                println!("dilation: n = {}, m = {}", raw.n, raw.m);
                Ok(validate_channel(&dilation_channel(&d).into_data(), tol))
            }
            Err(e) => {
                println!("dilation: invalid ({e})");
                Ok(2)
            }
        },
    }
}

fn read_cptp(path: &Path) -> Result<GaussianCptpChannel, Failure> {
    let data = io::read_channel(path)?;
    let verdict = validate_cp(&data);
    match data.to_cptp() {
        Some(ch) if verdict.is_cp() => Ok(ch),
        _ => Err(Failure::invalid(format!(
            "{}: channel is not CPTP (max singular value {})",
            path.display(),
            verdict.max_singular_value
        ))),
    }
}

fn recovery_failure(e: Error, sigma: &CovarianceMatrix, ch: &GaussianCptpChannel) -> Failure {
    match e {
        Error::NotFaithful { .. } | Error::NotStrictlyPositive { .. } => {
            let report = apply(ch, sigma)
                .map(|out| format!("Williamson values of N(sigma): {:?}", out.williamson()))
                .unwrap_or_default();
            Failure::new(3, format!("{e}\n{report}\nrerun with --support to restrict to the support of N(sigma)"))
        }
        other => Failure::invalid(other.to_string()),
    }
}

fn cmd_petz(sigma: &Path, channel: &Path, t: Option<f64>, support: bool, frame: Option<&Path>, out: &Path) -> Outcome {
    let sigma = io::read_state(sigma)?;
    let ch = read_cptp(channel)?;
    if support {
        let map = petz_on_support(&sigma, &ch).map_err(|e| recovery_failure(e, &sigma, &ch))?;
        let back = map
            .apply(&apply(&ch, &sigma).map_err(|e| Failure::invalid(e.to_string()))?)
            .map_err(|e| Failure::invalid(e.to_string()))?;
        io::write_channel(out, &map.channel.data())?;
        if let Some(frame) = frame {
            io::write_text(frame, &io::frame_json(&map.frame, &map.mixed_modes, &map.pure_modes))?;
        }
        println!("mixed modes: {:?}", map.mixed_modes);
        println!("pure modes: {:?}", map.pure_modes);
        println!("recovery residual: {:e}", max_abs_diff(back.as_matrix(), sigma.as_matrix()));
        return Ok(0);
    }
    let map = match t {
        Some(t) => rotated_petz(&sigma, &ch, t),
        None => petz(&sigma, &ch),
    }
    .map_err(|e| recovery_failure(e, &sigma, &ch))?;
    let residual = recovery_residual(&sigma, &ch, &map).map_err(|e| Failure::invalid(e.to_string()))?;
    io::write_channel(out, &map.data())?;
    println!("recovery residual: {residual:e}");
    Ok(0)
}

fn format_fidelity(f: f64) -> String {
    if f == 0.0 {
        "0".into()
    } else if f >= 0.1 {
        format!("{f:.12}")
    } else {
        format!("{f:.11e}")
    }
}

fn cmd_fidelity(a: &Path, b: &Path, json: bool) -> Outcome {
    let a = io::read_state(a)?;
    let b = io::read_state(b)?;
    if a.modes() != b.modes() {
        return Err(Failure::invalid(format!(
            "dimension mismatch: {} modes vs {} modes",
            a.modes(),
            b.modes()
        )));
    }
    let invalid = |e: Error| Failure::invalid(e.to_string());
    let f = fidelity(&a, &b).map_err(invalid)?;
    let o = overlap(&a, &b).map_err(invalid)?;
    if json {
        println!("{}", serde_json::json!({ "fidelity": f, "overlap": o }));
    } else {
        println!("F = {}", format_fidelity(f));
        println!("overlap = {o:e}");
    }
    Ok(0)
}

fn cmd_apply(channel: &Path, state: &Path, out: Option<&Path>) -> Outcome {
    let ch = read_cptp(channel)?;
    let g = io::read_state(state)?;
    let image = apply(&ch, &g).map_err(|e| Failure::invalid(e.to_string()))?;
    emit(out, &io::state_json(&image))?;
    Ok(0)
}

fn cmd_compose(second: &Path, first: &Path, regularized: bool, out: Option<&Path>) -> Outcome {
    let second = io::read_channel(second)?;
    let first = io::read_channel(first)?;
    let composite = if regularized {
        compose_regularized(&second, &first)
    } else {
        compose(&second, &first)
    }
    .map_err(|e| Failure::invalid(e.to_string()))?;
    emit(out, &io::channel_json(&composite))?;
    Ok(0)
}

fn cmd_random(args: &RandomArgs) -> Outcome {
    if args.n == 0 {
        return Err(Failure::invalid("--n must be at least 1"));
    }
    let text = match args.kind {
        RandomKind::State => {
            let mut r = rng(args.seed);
            let g = if args.pure {
                random_pure_covariance(&mut r, args.n)
            } else if args.full_range {
                random_covariance(&mut r, args.n, 0.0, 1.0)
            } else {
                random_mixed_covariance(&mut r, args.n)
            };
            io::state_json(&g)
        }
        RandomKind::Channel => io::channel_json(&dilation_channel(&random_dilation(args.seed, args.n, args.m)).into_data()),
        RandomKind::Dilation => io::dilation_json(&random_dilation(args.seed, args.n, args.m)),
    };
    emit(args.out.as_deref(), &text)?;
    Ok(0)
}

fn cmd_verify(config: verify::VerifyConfig) -> Outcome {
    if config.modes == 0 {
        return Err(Failure::invalid("--n must be at least 1"));
    }
    if config.dense && config.modes > verify::DENSE_MODE_CAP {
        return Err(Failure::invalid(format!(
            "--dense supports n <= {}, got {}",
            verify::DENSE_MODE_CAP,
            config.modes
        )));
    }
    let report = verify::run(&config);
    print!("{report}");
    Ok(if report.passed() { 0 } else { 4 })
}

fn cmd_bench(sizes: &[usize], reps: usize, seed: u64, out: Option<&Path>) -> Outcome {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Failure::invalid("sizes must be at least 1"));
    }
    let rows = bench::run(sizes, reps, seed);
    let mut csv = Vec::new();
    bench::write_csv(&mut csv, &rows).map_err(|e| Failure::new(1, e.to_string()))?;
    emit(out, &String::from_utf8(csv).expect("csv output is UTF-8"))?;
    for op in bench::OPS {
        if let Some(slope) = bench::fitted_exponent(&rows, op) {
            let line = format!("fitted exponent vs 2n: {op} {slope:.2}");
            if out.is_some() {
                println!("{line}");
            } else {
                eprintln!("{line}");
            }
        }
    }
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { path, tol } => cmd_validate(&path, tol),
        Command::Petz {
            sigma,
            channel,
            t,
            support,
            frame,
            out,
        } => cmd_petz(&sigma, &channel, t, support, frame.as_deref(), &out),
        Command::Fidelity { a, b, json } => cmd_fidelity(&a, &b, json),
        Command::Apply { channel, state, out } => cmd_apply(&channel, &state, out.as_deref()),
        Command::Compose {
            second,
            first,
            regularized,
            out,
        } => cmd_compose(&second, &first, regularized, out.as_deref()),
        Command::Random(args) => cmd_random(&args),
        Command::Verify {
            seed,
            n,
            trials,
            dense,
            tol,
        } => cmd_verify(verify::VerifyConfig {
            seed,
            modes: n,
            trials,
            dense,
            tol,
        }),
        Command::Bench { sizes, reps, seed, out } => cmd_bench(&sizes, reps, seed, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
