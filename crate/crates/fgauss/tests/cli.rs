use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fgauss::io;
use fgauss_core::fidelity::{fidelity, overlap};
use fgauss_core::models::attenuator;
use fgauss_core::random::{random_mixed_covariance, rng};
use fgauss_core::{CovarianceMatrix, GaussianCptpChannel};
use tempfile::TempDir;

fn fgauss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fgauss"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn residual(out: &Output) -> f64 {
    let text = stdout(out);
    let line = text
        .lines()
        .find_map(|l| l.strip_prefix("recovery residual: "))
        .expect("residual line");
    line.trim().parse().unwrap()
}

const IDENTITY_1: &str = r#"{"n_in": 1, "n_out": 1, "A": [[0, 0], [0, 0]], "B": [[1, 0], [0, 1]]}"#;

#[test]
fn validate_identity_channel() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "id.json", IDENTITY_1);
    let out = fgauss(&["validate", p(&path)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("CP: yes, TP: yes"));
}

#[test]
fn validate_rejects_expanding_channel() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "big.json",
        r#"{"n_in": 1, "n_out": 1, "A": [[0, 0], [0, 0]], "B": [[1.2, 0], [0, 1.2]]}"#,
    );
    let out = fgauss(&["validate", p(&path)]);
    assert_eq!(code(&out), 2);
    let text = stdout(&out);
    assert!(text.contains("max singular value: 1.2"), "{text}");
    assert!(text.contains("CP: no"));
}

#[test]
fn validate_states() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.json", r#"{"n": 1, "G": [[0, 0.5], [-0.5, 0]]}"#);
    assert_eq!(code(&fgauss(&["validate", p(&good)])), 0);
    let bad = write(&dir, "bad.json", r#"{"n": 1, "G": [[0, 1.5], [-1.5, 0]]}"#);
    let out = fgauss(&["validate", p(&bad)]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("violated"));
    let skew = write(&dir, "skew.json", r#"{"n": 1, "G": [[0, 0.5], [0.4, 0]]}"#);
    assert_eq!(code(&fgauss(&["validate", p(&skew)])), 2);
}

#[test]
fn malformed_input_exits_one() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "cut.json", "{\"n\": 1, \"G\": [[0, 0.5],");
    let out = fgauss(&["validate", p(&path)]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cut.json"));
    assert_eq!(code(&fgauss(&["validate", "/nonexistent/file.json"])), 1);
}

#[test]
fn petz_of_identity_is_exact() {
    let dir = TempDir::new().unwrap();
    let sigma = write(&dir, "s.json", r#"{"n": 1, "G": [[0, 0.5], [-0.5, 0]]}"#);
    let ch = write(&dir, "id.json", IDENTITY_1);
    let out_path = dir.path().join("p.json");
    let out = fgauss(&["petz", p(&sigma), p(&ch), "--out", p(&out_path)]);
    assert_eq!(code(&out), 0);
    assert_eq!(residual(&out), 0.0);
    let map = io::read_channel(&out_path).unwrap();
    assert_eq!(map.b(), GaussianCptpChannel::identity(1).b());
}

#[test]
fn petz_of_attenuator_recovers_reference() {
    let dir = TempDir::new().unwrap();
    let ch = attenuator(0.64, 0.9).unwrap();
    let sigma = CovarianceMatrix::product(&[0.5]).unwrap();
    let ch_path = dir.path().join("att.json");
    let sigma_path = dir.path().join("s.json");
    io::write_channel(&ch_path, &ch.data()).unwrap();
    io::write_state(&sigma_path, &sigma).unwrap();
    let out_path = dir.path().join("p.json");
    let out = fgauss(&["petz", p(&sigma_path), p(&ch_path), "--out", p(&out_path)]);
    assert_eq!(code(&out), 0);
    assert!(residual(&out) <= 1e-12);
    let rotated = fgauss(&["petz", p(&sigma_path), p(&ch_path), "--t", "-0.4", "--out", p(&out_path)]);
    assert_eq!(code(&rotated), 0);
    assert!(residual(&rotated) <= 1e-12);
}

#[test]
fn petz_with_pure_output_needs_support_mode() {
    let dir = TempDir::new().unwrap();
    let sigma = write(&dir, "s.json", r#"{"n": 1, "G": [[0, 1], [-1, 0]]}"#);
    let ch = write(&dir, "id.json", IDENTITY_1);
    let out_path = dir.path().join("p.json");
    let out = fgauss(&["petz", p(&sigma), p(&ch), "--out", p(&out_path)]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not faithful"));
    assert!(!out_path.exists());

    let frame = dir.path().join("frame.json");
    let out = fgauss(&["petz", p(&sigma), p(&ch), "--support", "--frame", p(&frame), "--out", p(&out_path)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(residual(&out) <= 1e-12);
    assert!(frame.exists());
    assert_eq!(code(&fgauss(&["validate", p(&out_path)])), 0);
}

#[test]
fn petz_rejects_non_cptp_channel() {
    let dir = TempDir::new().unwrap();
    let sigma = write(&dir, "s.json", r#"{"n": 1, "G": [[0, 0.5], [-0.5, 0]]}"#);
    let ch = write(
        &dir,
        "big.json",
        r#"{"n_in": 1, "n_out": 1, "A": [[0, 0], [0, 0]], "B": [[1.2, 0], [0, 1.2]]}"#,
    );
    let out = fgauss(&["petz", p(&sigma), p(&ch), "--out", p(&dir.path().join("x.json"))]);
    assert_eq!(code(&out), 2);
}

#[test]
fn fidelity_output() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", r#"{"n": 1, "G": [[0, 0.3], [-0.3, 0]]}"#);
    let out = fgauss(&["fidelity", p(&a), p(&a)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("F = 1.000000000000"));

    let up = write(&dir, "up.json", r#"{"n": 1, "G": [[0, 1], [-1, 0]]}"#);
    let down = write(&dir, "down.json", r#"{"n": 1, "G": [[0, -1], [1, 0]]}"#);
    let out = fgauss(&["fidelity", p(&up), p(&down)]);
    assert!(stdout(&out).lines().any(|l| l == "F = 0"));

    let wide = write(&dir, "wide.json", r#"{"n": 2, "G": [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]}"#);
    assert_eq!(code(&fgauss(&["fidelity", p(&a), p(&wide)])), 2);
}

#[test]
fn fidelity_json_matches_library_bitwise() {
    let dir = TempDir::new().unwrap();
    let mut r = rng(11);
    let a = random_mixed_covariance(&mut r, 3);
    let b = random_mixed_covariance(&mut r, 3);
    let (pa, pb) = (dir.path().join("a.json"), dir.path().join("b.json"));
    io::write_state(&pa, &a).unwrap();
    io::write_state(&pb, &b).unwrap();
    let out = fgauss(&["fidelity", p(&pa), p(&pb), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["fidelity"].as_f64().unwrap().to_bits(), fidelity(&a, &b).unwrap().to_bits());
    assert_eq!(v["overlap"].as_f64().unwrap().to_bits(), overlap(&a, &b).unwrap().to_bits());
}

#[test]
fn random_apply_compose_pipeline() {
    let dir = TempDir::new().unwrap();
    let s = dir.path().join("s.json");
    let c = dir.path().join("c.json");
    let d = dir.path().join("d.json");
    assert_eq!(code(&fgauss(&["random", "state", "--n", "2", "--seed", "3", "--out", p(&s)])), 0);
    assert_eq!(code(&fgauss(&["random", "channel", "--n", "2", "--m", "2", "--seed", "4", "--out", p(&c)])), 0);
    assert_eq!(code(&fgauss(&["random", "dilation", "--n", "2", "--m", "1", "--seed", "5", "--out", p(&d)])), 0);
    for f in [&s, &c, &d] {
        assert_eq!(code(&fgauss(&["validate", p(f)])), 0);
    }
    // Same seed, same bytes.
    let again = fgauss(&["random", "state", "--n", "2", "--seed", "3"]);
    assert_eq!(again.stdout, std::fs::read(&s).unwrap());

    let applied = dir.path().join("out.json");
    assert_eq!(code(&fgauss(&["apply", p(&d), p(&s), "--out", p(&applied)])), 0);
    assert_eq!(code(&fgauss(&["validate", p(&applied)])), 0);

    let composed = dir.path().join("cc.json");
    assert_eq!(code(&fgauss(&["compose", p(&c), p(&d), "--out", p(&composed)])), 0);
    assert_eq!(code(&fgauss(&["validate", p(&composed)])), 0);
    let regularized = fgauss(&["compose", p(&c), p(&d), "--regularized"]);
    assert_eq!(code(&regularized), 0);
    let a = io::read_channel(&composed).unwrap();
    let path = write(&dir, "reg.json", &stdout(&regularized));
    let b = io::read_channel(&path).unwrap();
    let diff = (a.block_matrix() - b.block_matrix()).abs().max();
    assert!(diff <= 1e-7, "{diff}");
}

#[test]
fn io_round_trip_is_exact() {
    let dir = TempDir::new().unwrap();
    let g = random_mixed_covariance(&mut rng(8), 4);
    let path = dir.path().join("g.json");
    io::write_state(&path, &g).unwrap();
    let back = io::read_state(&path).unwrap();
    assert_eq!(back.as_matrix(), g.as_matrix());
    // apply with the identity channel writes the same state back.
    let id = dir.path().join("id.json");
    io::write_channel(&id, &GaussianCptpChannel::identity(4).data()).unwrap();
    let out = fgauss(&["apply", p(&id), p(&path)]);
    assert_eq!(out.stdout, std::fs::read(&path).unwrap());
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--seed", "7", "--n", "2", "--trials", "4", "--dense"];
    let first = fgauss(&args);
    let second = fgauss(&args);
    assert_eq!(code(&first), 0, "{}", stdout(&first));
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).contains("0 failed"));
}

#[test]
fn verify_failures_and_limits() {
    let out = fgauss(&["verify", "--n", "2", "--trials", "2", "--tol", "1e-30"]);
    assert_eq!(code(&out), 4);
    assert!(stdout(&out).contains("FAIL"));
    assert_eq!(code(&fgauss(&["verify", "--n", "6", "--trials", "1", "--dense"])), 2);
}

#[test]
fn bench_writes_csv() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("bench.csv");
    let out = fgauss(&["bench", "--sizes", "2,4,8", "--reps", "2", "--out", p(&csv)]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("op,n,mean_ms,std_ms"));
    assert_eq!(lines.count(), 12);
    assert!(stdout(&out).contains("fitted exponent"));
}
