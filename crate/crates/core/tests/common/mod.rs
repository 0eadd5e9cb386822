#![allow(dead_code)]

use std::path::PathBuf;

use clap::Parser;
use kchaos::cli::{output::strip_timestamp, run, Cli, Output};

/// Seeded commands pinned by golden files.
pub const GOLDEN_CASES: &[(&str, &[&str])] = &[
    ("analyze_pauli_x", &["analyze", "--gate", "x", "--k-max", "4"]),
    ("analyze_d4", &["analyze", "--gate", "d4", "--k-max", "8"]),
    ("analyze_d8", &["analyze", "--gate", "d8", "--k-max", "8"]),
    ("analyze_identity", &["analyze", "--gate", "id", "--k-max", "4"]),
    ("construct_chaotic_k5", &["construct", "chaotic-order-k", "--k", "5"]),
    (
        "construct_rational_d8",
        &["construct", "rational", "--phase1", "1/32", "--phase2", "17/32", "--global", "23/32"],
    ),
    ("construct_lucas_t3", &["construct", "quadratic", "--a", "-1", "--b", "-1", "--t", "3"]),
    (
        "construct_quadratic_traversing",
        &["construct", "quadratic", "--a", "-2", "--b", "-101", "--t", "8"],
    ),
    ("scan_t_gate", &["scan", "--gate", "t", "--k-max", "16"]),
    ("census", &["--seed", "1", "census", "--n", "100000"]),
    (
        "simulate_s_gate_x_basis",
        &["--seed", "7", "simulate", "--phi", "0", "--psi", "1/2", "--basis", "x", "--steps", "1000000"],
    ),
    (
        "simulate_pauli_x_k2",
        &["--seed", "2", "simulate", "--gate", "x", "--basis", "computational", "--k", "2", "--steps", "100000"],
    ),
    (
        "noise_edge",
        &["--seed", "3", "noise", "--su2-psi", "3/4", "--eps", "0.1", "--steps", "1000"],
    ),
    (
        "optimize_random",
        &["--seed", "4", "--restarts", "8", "optimize", "--phi", "rad:0.3", "--psi", "rad:2.2"],
    ),
];

pub fn cli(args: &[&str]) -> Cli {
    Cli::try_parse_from(std::iter::once("kchaos").chain(args.iter().copied())).expect("valid arguments")
}

pub fn run_with_threads(args: &[&str], threads: usize) -> Output {
    let mut c = cli(args);
    c.common.threads = Some(threads);
    run(&c).expect("command succeeds")
}

/// Pretty JSON without the timestamp, as stored in golden files.
pub fn canonical(out: &Output) -> String {
    let mut doc = out.doc.clone();
    strip_timestamp(&mut doc);
    serde_json::to_string_pretty(&doc).unwrap() + "\n"
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
        .join(format!("{name}.json"))
}

/// Compares with the stored file; `KCHAOS_BLESS=1` rewrites it instead.
pub fn check_golden(name: &str, text: &str) -> Result<(), String> {
    let path = golden_path(name);
    if std::env::var_os("KCHAOS_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).map_err(|e| e.to_string())?;
        std::fs::write(&path, text).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let stored = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if stored == text {
        Ok(())
    } else {
        Err(format!("{name}: output differs from {}", path.display()))
    }
}
