//! Command-line interface: argument definitions and command execution.
//!
//! Every command produces a JSON document with an embedded [`RunManifest`]
//! and numbers rounded to 12 significant digits. Table-shaped results can
//! also be emitted as CSV, which keeps full round-trip precision.

pub mod input;
pub mod output;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::chaoticity::{
    chaoticity_scan, exact_chaoticity_scan, exact_verdict_at_order, first_nonchaotic_order,
    idempotency_summary, ChaoticityReport,
};
use crate::constructions::{
    build_chaotic_order_k, build_quadratic_unitary_with, classify_phase_rationality, idempotency_of_source,
    ConstructionSpec, PrecisionPolicy, QuadraticSeed,
};
use crate::entropy::{
    markov_entropy_rate, pvm_entropy_optimize, qubit_entropy_closed, OptimizerOptions, PvmBasis, UnitaryD,
};
use crate::error::{Error, Result};
use crate::phases::{ExactUnitarySpec, RationalPhase};
use crate::simulate::{
    empirical_entropy_rate, monte_carlo_chaotic_fraction, noisy_phase_walk, sample_trajectory, statistical_tolerance,
    BasisChoice, InitialState, NoiseConfig, OptimizerOptionsSeed, TrajectoryConfig, UnitarySource, VerdictCounts,
};
use input::{parse_angle, parse_matrix, resolve_subject, Subject, SubjectArgs};
pub use output::RunManifest;
use output::finalize;

/// Largest strict idempotency order reported before giving up.
const ORDER_CAP: u64 = 1 << 50;

#[derive(Debug, Parser)]
#[command(name = "kchaos", version, about = "Chaoticity analysis of qubit unitaries under repeated measurement")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CommonArgs {
    /// Seed for all randomness.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Emit JSON (the default).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub json: bool,
    /// Emit CSV for table-shaped results.
    #[arg(long, global = true, conflicts_with = "json")]
    #[serde(skip)]
    pub csv: bool,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Fractional bits for quadratic constructions; automatic when omitted.
    #[arg(long, global = true)]
    pub precision_bits: Option<u32>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, global = true, default_value_t = 2000)]
    pub max_iters: usize,
    /// Tolerance between optimized and closed-form entropy.
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub match_tol: f64,
    /// Allow positive quadratic coefficients.
    #[arg(long, global = true)]
    pub allow_positive_coeffs: bool,
}

/// One way of naming a qubit unitary.
#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct SubjectOpts {
    /// Named gate: id, x, y, z, h, s, t, sx, d4, d8.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate: Option<String>,
    /// First eigenphase in units of π ("1/2") or radians ("rad:1.57").
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    /// Second eigenphase.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<String>,
    /// Global phase multiplying both eigenvalues.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub global: Option<String>,
    /// SU(2) element with eigenphases (−ψ, ψ).
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub su2_psi: Option<String>,
    /// Row-major matrix entries "re,im,re,im,...".
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<String>,
    /// Construction spec JSON file.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<PathBuf>,
}

impl SubjectOpts {
    fn as_args(&self, allow_positive: bool) -> SubjectArgs<'_> {
        SubjectArgs {
            gate: self.gate.as_deref(),
            phi: self.phi.as_deref(),
            psi: self.psi.as_deref(),
            global: self.global.as_deref(),
            su2_psi: self.su2_psi.as_deref(),
            matrix: self.matrix.as_deref(),
            spec: self.spec.as_deref(),
            allow_positive,
        }
    }

    fn is_empty(&self) -> bool {
        self.gate.is_none()
            && self.phi.is_none()
            && self.psi.is_none()
            && self.su2_psi.is_none()
            && self.matrix.is_none()
            && self.spec.is_none()
    }
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Scan, entropy and idempotency of a unitary.
    Analyze {
        #[command(flatten)]
        subject: SubjectOpts,
        #[arg(long, default_value_t = 8)]
        k_max: u64,
    },
    /// Build a unitary from a construction and analyze it.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Per-order chaoticity table.
    Scan {
        #[command(flatten)]
        subject: SubjectOpts,
        #[arg(long, default_value_t = 16)]
        k_max: u64,
    },
    /// Fraction of uniformly drawn SU(2) elements that are chaotic.
    Census {
        #[arg(long, default_value_t = 100_000)]
        n: u64,
    },
    /// Sample a measurement outcome sequence.
    Simulate {
        #[command(flatten)]
        subject: SubjectOpts,
        #[arg(long, value_enum, default_value_t = BasisArg::X)]
        basis: BasisArg,
        #[arg(long, default_value_t = 1_000_000)]
        steps: usize,
        /// Measure after every K-th application.
        #[arg(long = "k", default_value_t = 1)]
        k: u64,
        /// Initial state: "mixed" or a basis index.
        #[arg(long, default_value = "mixed")]
        initial: String,
        /// Block length of the entropy-rate estimator.
        #[arg(long, default_value_t = 8)]
        block_len: usize,
    },
    /// Verdicts along a phase-noise walk around a base unitary.
    Noise {
        #[command(flatten)]
        subject: SubjectOpts,
        /// Noise amplitude in units of π.
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
    },
    /// Maximize the measurement entropy over bases numerically.
    Optimize {
        #[command(flatten)]
        subject: SubjectOpts,
    },
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ConstructKind {
    /// `e^{iπ·global}·Diag(e^{iπ·phase1}, e^{iπ·phase2})`.
    Rational {
        #[arg(long, allow_hyphen_values = true)]
        phase1: String,
        #[arg(long, allow_hyphen_values = true)]
        phase2: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        global: String,
        #[arg(long, default_value_t = 8)]
        k_max: u64,
    },
    /// SU(2) unitary that is chaotic at order K.
    ChaoticOrderK {
        #[arg(long = "k")]
        k: u64,
        /// Scan range; defaults to K.
        #[arg(long)]
        k_max: Option<u64>,
    },
    /// Irrational eigenphases from the roots of x² + a·x + b.
    Quadratic {
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
        #[arg(long)]
        t: u64,
        #[arg(long, default_value_t = 8)]
        k_max: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisArg {
    Computational,
    /// `{|+⟩, |−⟩}` in the computational frame.
    X,
    /// `{|+⟩, |−⟩}` in the eigenframe of the unitary.
    XEigenframe,
    Optimized,
}

/// Result of a command before it is written anywhere.
#[derive(Debug, Clone)]
pub struct Output {
    pub doc: Value,
    pub csv: Option<String>,
    /// Raw outcome bytes of a trajectory.
    pub stream: Option<Vec<u8>>,
}

impl Cli {
    fn optimizer_options(&self) -> OptimizerOptions {
        OptimizerOptions {
            restarts: self.common.restarts,
            max_iters: self.common.max_iters,
            match_tol: self.common.match_tol,
            seed: self.common.seed,
            ..Default::default()
        }
    }

    fn subject(&self, opts: &SubjectOpts) -> Result<Subject> {
        resolve_subject(&opts.as_args(self.common.allow_positive_coeffs))
    }

    fn manifest(&self, uses_seed: bool) -> RunManifest {
        let (name, params) = match serde_json::to_value(&self.command).expect("command serializes") {
            Value::Object(o) => o.into_iter().next().expect("one variant"),
            other => (String::new(), other),
        };
        let params = json!({ "command": params, "common": self.common });
        RunManifest::new(&name, params, uses_seed.then_some(self.common.seed))
    }
}

/// Runs the command, honouring `--threads`.
pub fn run(cli: &Cli) -> Result<Output> {
    match cli.common.threads {
        Some(0) => Err(Error::ZeroCount("threads")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?
            .install(|| dispatch(cli)),
        None => dispatch(cli),
    }
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let (body, csv, stream, uses_seed) = match &cli.command {
        Command::Analyze { subject, k_max } => {
            let s = cli.subject(subject)?;
            let (body, report) = analysis(&s, *k_max)?;
            (body, Some(report.to_csv()?), None, false)
        }
        Command::Scan { subject, k_max } => {
            let s = cli.subject(subject)?;
            let report = scan_of(&s, *k_max)?;
            let body = json!({ "subject": s.summary(), "scan": report });
            (body, Some(report.to_csv()?), None, false)
        }
        Command::Construct { kind } => {
            let (body, csv) = construct(cli, kind)?;
            (body, Some(csv), None, false)
        }
        Command::Census { n } => {
            let r = monte_carlo_chaotic_fraction(*n, cli.common.seed)?;
            let csv = format!(
                "N,chaotic_count,fraction,half_width_3sigma\n{},{},{},{}\n",
                r.n, r.chaotic_count, r.fraction, r.half_width_3sigma
            );
            (serde_json::to_value(r).expect("census serializes"), Some(csv), None, true)
        }
        Command::Simulate {
            subject,
            basis,
            steps,
            k,
            initial,
            block_len,
        } => {
            let (body, stream) = simulate(cli, subject, *basis, *steps, *k, initial, *block_len)?;
            (body, None, Some(stream), true)
        }
        Command::Noise { subject, eps, steps } => {
            let (body, csv) = noise(cli, subject, *eps, *steps)?;
            (body, Some(csv), None, true)
        }
        Command::Optimize { subject } => (optimize(cli, subject)?, None, None, true),
    };
    Ok(Output {
        doc: finalize(&cli.manifest(uses_seed), body),
        csv,
        stream,
    })
}

fn scan_of(s: &Subject, k_max: u64) -> Result<ChaoticityReport> {
    match &s.exact {
        Some(spec) => exact_chaoticity_scan(spec, k_max),
        None => chaoticity_scan(&s.pair, k_max),
    }
}

fn analysis(s: &Subject, k_max: u64) -> Result<(Value, ChaoticityReport)> {
    let report = scan_of(s, k_max)?;
    let idempotency = match &s.exact {
        Some(spec) => Some(serde_json::to_value(idempotency_summary(spec, ORDER_CAP)?).expect("serializes")),
        None => idempotency_of_source(&s.source, ORDER_CAP)?.map(|r| json!({ "strict": r })),
    };
    let chaotic_orders = report.records.iter().filter(|r| r.verdict.is_chaotic_or_boundary()).count();
    let mut body = json!({
        "subject": s.summary(),
        "entropy": qubit_entropy_closed(&s.pair),
        "rationality": classify_phase_rationality(&s.source),
        "idempotency": idempotency,
        "first_nonchaotic_order": first_nonchaotic_order(&s.pair, k_max),
        "chaotic_orders": chaotic_orders,
        "scan": report,
    });
    if let Some(q) = &s.quadratic {
        body["quadratic"] = serde_json::to_value(q).expect("serializes");
    }
    Ok((body, report))
}

fn rational(text: &str) -> Result<RationalPhase> {
    parse_angle(text)?
        .exact()
        .ok_or_else(|| Error::Parse(format!("{text:?} must be an exact multiple of π")))
}

fn construct(cli: &Cli, kind: &ConstructKind) -> Result<(Value, String)> {
    let (mut body, csv) = match kind {
        ConstructKind::Rational {
            phase1,
            phase2,
            global,
            k_max,
        } => {
            let spec = ExactUnitarySpec::new(rational(phase1)?, rational(phase2)?, rational(global)?);
            let (analysis, report) = analysis(&Subject::from_exact(spec), *k_max)?;
            (
                json!({ "construction": ConstructionSpec::from_exact(&spec), "analysis": analysis }),
                report.to_csv()?,
            )
        }
        ConstructKind::ChaoticOrderK { k, k_max } => {
            let c = build_chaotic_order_k(*k)?;
            let (analysis, report) = analysis(&Subject::from_exact(c.spec), k_max.unwrap_or(*k))?;
            (
                json!({
                    "construction": ConstructionSpec::from_exact(&c.spec),
                    "chaotic_order_k": c,
                    "verdict_at_k": exact_verdict_at_order(&c.spec, *k)?,
                    "analysis": analysis,
                }),
                report.to_csv()?,
            )
        }
        ConstructKind::Quadratic { a, b, t, k_max } => {
            let seed = QuadraticSeed::new(*a, *b)?;
            let policy = match cli.common.precision_bits {
                Some(bits) => PrecisionPolicy::new(bits),
                None => PrecisionPolicy::auto(&seed, *t),
            };
            let q = build_quadratic_unitary_with(&seed, *t, &policy, cli.common.allow_positive_coeffs)?;
            let construction = ConstructionSpec::Quadratic {
                a: *a,
                b: *b,
                t: *t,
                precision_bits: policy.bits,
            };
            let cos_psi = q.pair.psi.cos().abs();
            let (analysis, report) = analysis(&Subject::from_quadratic(q)?, *k_max)?;
            (
                json!({ "construction": construction, "abs_cos_psi": cos_psi, "analysis": analysis }),
                report.to_csv()?,
            )
        }
    };
    body["verdict"] = body["analysis"]["scan"][0]["verdict"].clone();
    Ok((body, csv))
}

fn resolve_initial(text: &str) -> Result<InitialState> {
    match text {
        "mixed" => Ok(InitialState::MaximallyMixed),
        idx => idx
            .parse()
            .map(InitialState::BasisIndex)
            .map_err(|_| Error::Parse(format!("initial state {idx:?}: expected \"mixed\" or an index"))),
    }
}

fn simulate(
    cli: &Cli,
    subject: &SubjectOpts,
    basis: BasisArg,
    steps: usize,
    k: u64,
    initial: &str,
    block_len: usize,
) -> Result<(Value, Vec<u8>)> {
    let s = cli.subject(subject)?;
    let choice = match basis {
        BasisArg::Computational => BasisChoice::Computational,
        BasisArg::X => BasisChoice::Explicit(PvmBasis::x_basis()),
        BasisArg::XEigenframe => BasisChoice::XEigenframe,
        BasisArg::Optimized => BasisChoice::Optimized(OptimizerOptionsSeed(cli.common.seed)),
    };
    let cfg = TrajectoryConfig {
        initial: resolve_initial(initial)?,
        ..TrajectoryConfig::new(UnitarySource::Matrix(s.matrix), choice, steps, k, cli.common.seed)
    };
    let traj = sample_trajectory(&cfg)?;
    let predicted = markov_entropy_rate(&traj.transitions);
    let (empirical, note) = match empirical_entropy_rate(&traj.outcomes, 2, block_len) {
        Ok(h) => (Some(h), None),
        Err(e @ Error::InsufficientData { .. }) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let tolerance = 3.0 * statistical_tolerance(steps, 2, block_len);
    let ones = traj.outcomes.iter().filter(|&&b| b == 1).count();
    let rows: Vec<Vec<f64>> = (0..2)
        .map(|i| (0..2).map(|j| traj.transitions.get(i, j)).collect())
        .collect();
    let body = json!({
        "subject": s.summary(),
        "basis": traj.basis,
        "transition_matrix": rows,
        "steps": steps,
        "k": k,
        "block_len": block_len,
        "symbol_counts": [steps - ones, ones],
        "empirical_rate": empirical,
        "predicted_rate": predicted,
        "delta": empirical.map(|h| (h - predicted).abs()),
        "tolerance": tolerance,
        "within_tolerance": empirical.map(|h| (h - predicted).abs() <= tolerance),
        "note": note,
    });
    Ok((body, traj.outcomes))
}

fn noise(cli: &Cli, subject: &SubjectOpts, eps: f64, steps: usize) -> Result<(Value, String)> {
    let s = cli.subject(subject)?;
    let cfg = NoiseConfig {
        epsilon: eps,
        steps,
        seed: cli.common.seed,
    };
    let walk = noisy_phase_walk(&s.pair, &cfg)?;
    let counts = VerdictCounts::tally(walk.iter().map(|w| &w.verdict.kind));
    let switches = walk.windows(2).filter(|w| w[0].verdict.kind != w[1].verdict.kind).count();
    let mut csv = String::from("step,lambda,phi,psi,trace_mag,verdict\n");
    for (i, w) in walk.iter().enumerate() {
        let verdict = serde_json::to_value(w.verdict.kind).expect("serializes");
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            i,
            w.lambda,
            w.pair.phi,
            w.pair.psi,
            w.verdict.trace_mag,
            verdict.as_str().unwrap_or_default()
        )
        .expect("string write");
    }
    let body = json!({
        "subject": s.summary(),
        "base_verdict": crate::chaoticity::verdict_of(&s.pair),
        "epsilon": eps,
        "steps": steps,
        "counts": counts,
        "chaotic_fraction": if steps > 0 { (counts.chaotic + counts.boundary) as f64 / steps as f64 } else { 0.0 },
        "verdict_switches": switches,
    });
    Ok((body, csv))
}

fn optimize(cli: &Cli, subject: &SubjectOpts) -> Result<Value> {
    let opts = cli.optimizer_options();
    // qutrit matrices bypass the qubit subject
    let (u, pair) = match &subject.matrix {
        Some(m) if subject.is_single_matrix() => {
            let u = parse_matrix(m)?;
            let pair = if u.dim() == 2 { Some(cli.subject(subject)?.pair) } else { None };
            (u, pair)
        }
        _ => {
            let s = cli.subject(subject)?;
            (UnitaryD::from(&s.matrix), Some(s.pair))
        }
    };
    let r = pvm_entropy_optimize(&u, &opts)?;
    let closed = pair.map(|p| qubit_entropy_closed(&p).value);
    Ok(json!({
        "dimension": u.dim(),
        "entropy": r,
        "closed_form": closed,
        "difference": closed.map(|c| (c - r.value).abs()),
        "within_match_tol": closed.map(|c| (c - r.value).abs() <= opts.match_tol),
        "options": opts,
    }))
}

impl SubjectOpts {
    fn is_single_matrix(&self) -> bool {
        self.matrix.is_some() && SubjectOpts { matrix: None, ..self.clone() }.is_empty()
    }
}

/// Runs the command and writes its output; returns the text for stdout.
pub fn execute(cli: &Cli) -> Result<String> {
    let out = run(cli)?;
    let json_text = serde_json::to_string_pretty(&out.doc).expect("json serializes") + "\n";
    let text = if cli.common.csv {
        out.csv
            .clone()
            .ok_or_else(|| Error::Parse("--csv is not available for this command".into()))?
    } else {
        json_text.clone()
    };
    let Some(path) = &cli.common.out else {
        return Ok(text);
    };
    if let Some(stream) = &out.stream {
        std::fs::write(path, stream)?;
        std::fs::write(sidecar(path, "json"), &json_text)?;
        return Ok(json_text);
    }
    std::fs::write(path, &text)?;
    if cli.common.csv {
        let manifest = serde_json::to_string_pretty(&out.doc["manifest"]).expect("json serializes") + "\n";
        std::fs::write(sidecar(path, "manifest.json"), manifest)?;
    }
    Ok(String::new())
}

fn sidecar(path: &Path, ext: &str) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".");
    name.push(ext);
    PathBuf::from(name)
}
