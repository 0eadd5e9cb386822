//! Outcome-sequence simulation and Monte Carlo experiments.
//!
//! A trajectory applies `U` K times between projective measurements; the
//! outcomes form a Markov chain with transition matrix `P(U^K, basis)`. All
//! randomness comes from [`crate::rng::stream_rng`], so every routine here is
//! a pure function of its inputs and seed.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chaoticity::{verdict_of, Verdict, VerdictKind};
use crate::entropy::{
    markov_entropy_rate, measurement_probabilities, pvm_entropy_optimize, transition_matrix,
    OptimizerOptions, PvmBasis, TransitionMatrix, UnitaryD,
};
use crate::error::{Error, Result};
use crate::phases::{eigenphases_of, EigenphasePair, ExactUnitarySpec, Unitary2};
use crate::rng::stream_rng;

/// Trials per census work unit; each unit draws from its own stream.
const CENSUS_CHUNK: u64 = 4096;
const MAX_BLOCK_TABLE: usize = 1 << 26;

#[derive(Debug, Clone, PartialEq)]
pub enum UnitarySource {
    /// Diagonal unitary with these eigenphases.
    Pair(EigenphasePair),
    Spec(ExactUnitarySpec),
    Matrix(Unitary2),
}

impl UnitarySource {
    pub fn unitary(&self) -> Unitary2 {
        match self {
            UnitarySource::Pair(p) => Unitary2::diagonal(p),
            UnitarySource::Spec(s) => s.to_unitary(),
            UnitarySource::Matrix(m) => *m,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BasisChoice {
    Computational,
    /// `{|+⟩, |−⟩}` expressed in the eigenframe of `U`.
    XEigenframe,
    /// Basis returned by the PVM entropy optimizer for `U^K`.
    Optimized(OptimizerOptionsSeed),
    Explicit(PvmBasis),
}

/// Seed for the optimizer when the basis is chosen by optimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OptimizerOptionsSeed(pub u64);

impl BasisChoice {
    pub fn resolve(&self, u: &Unitary2, k: u64) -> Result<PvmBasis> {
        match self {
            BasisChoice::Computational => Ok(PvmBasis::computational(2)),
            BasisChoice::XEigenframe => {
                let (_, v) = eigenphases_of(u)?;
                let vm = DMatrix::from_iterator(2, 2, v.m.iter().copied());
                PvmBasis::x_basis().rotated(&vm)
            }
            BasisChoice::Optimized(seed) => {
                let opts = OptimizerOptions {
                    seed: seed.0,
                    ..Default::default()
                };
                let r = pvm_entropy_optimize(&UnitaryD::from(&u.pow(k)), &opts)?;
                Ok(r.optimal_basis.expect("optimizer returns a basis"))
            }
            BasisChoice::Explicit(b) => {
                if b.dim() != 2 {
                    return Err(Error::DimensionMismatch(b.dim(), 2));
                }
                Ok(b.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// `I/d`: the first outcome is uniform.
    MaximallyMixed,
    BasisIndex(usize),
    Density(DMatrix<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryConfig {
    pub source: UnitarySource,
    pub basis: BasisChoice,
    /// Number of measurements.
    pub steps: usize,
    /// Measurement period: measure after every K-th application of `U`.
    pub k: u64,
    pub seed: u64,
    pub initial: InitialState,
}

impl TrajectoryConfig {
    pub fn new(source: UnitarySource, basis: BasisChoice, steps: usize, k: u64, seed: u64) -> Self {
        Self {
            source,
            basis,
            steps,
            k,
            seed,
            initial: InitialState::MaximallyMixed,
        }
    }
}

/// A resolved trajectory: the chain it samples from, plus the outcomes.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub basis: PvmBasis,
    pub transitions: TransitionMatrix,
    pub outcomes: Vec<u8>,
}

fn initial_density(initial: &InitialState, basis: &PvmBasis) -> Result<DMatrix<Complex64>> {
    let d = basis.dim();
    match initial {
        InitialState::MaximallyMixed => Ok(DMatrix::identity(d, d) / Complex64::new(d as f64, 0.0)),
        InitialState::BasisIndex(j) => {
            if *j >= d {
                return Err(Error::DimensionMismatch(*j, d));
            }
            let v = basis.columns().column(*j);
            Ok(&v * v.adjoint())
        }
        InitialState::Density(rho) => Ok(rho.clone()),
    }
}

fn draw(rng: &mut impl Rng, probs: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (j, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return j;
        }
    }
    // u landed in the rounding gap above the last partial sum
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(probs.len() - 1)
}

pub fn sample_trajectory(cfg: &TrajectoryConfig) -> Result<Trajectory> {
    if cfg.steps == 0 {
        return Err(Error::ZeroCount("steps"));
    }
    if cfg.k == 0 {
        return Err(Error::ZeroCount("K"));
    }
    let u = cfg.source.unitary();
    let basis = cfg.basis.resolve(&u, cfg.k)?;
    let transitions = transition_matrix(&UnitaryD::from(&u.pow(cfg.k)), &basis)?;
    let rho = initial_density(&cfg.initial, &basis)?;
    let first = measurement_probabilities(&rho, &basis)?;

    let d = basis.dim();
    let rows: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|j| transitions.get(i, j)).collect())
        .collect();

    let mut rng = stream_rng(cfg.seed, 0);
    let mut outcomes = Vec::with_capacity(cfg.steps);
    let mut state = draw(&mut rng, &first);
    outcomes.push(state as u8);
    for _ in 1..cfg.steps {
        state = draw(&mut rng, &rows[state]);
        outcomes.push(state as u8);
    }
    Ok(Trajectory {
        basis,
        transitions,
        outcomes,
    })
}

/// Empirical transition frequencies `count(i→j) / count(i→·)`.
pub fn empirical_transitions(seq: &[u8], alphabet: usize) -> DMatrix<f64> {
    let mut counts = DMatrix::<f64>::zeros(alphabet, alphabet);
    for w in seq.windows(2) {
        counts[(w[0] as usize, w[1] as usize)] += 1.0;
    }
    for mut row in counts.row_iter_mut() {
        let total: f64 = row.sum();
        if total > 0.0 {
            row /= total;
        }
    }
    counts
}

fn block_entropy(seq: &[u8], alphabet: usize, len: usize) -> f64 {
    if len == 0 {
        return 0.0;
    }
    let table = alphabet.pow(len as u32);
    let mut counts = vec![0u64; table];
    let mut code = 0usize;
    for (i, &s) in seq.iter().enumerate() {
        code = (code * alphabet + s as usize) % table;
        if i + 1 >= len {
            counts[code] += 1;
        }
    }
    let total = (seq.len() + 1 - len) as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum()
}

/// Plug-in conditional block entropy `H_{L+1} − H_L` in bits per symbol.
///
/// Requires at least `100·d^L` symbols.
pub fn empirical_entropy_rate(seq: &[u8], alphabet: usize, block_len: usize) -> Result<f64> {
    if alphabet < 2 {
        return Err(Error::DimensionMismatch(alphabet, 2));
    }
    let table = (alphabet as u128).checked_pow(block_len as u32 + 1);
    if table.is_none_or(|t| t > MAX_BLOCK_TABLE as u128) {
        return Err(Error::Overflow("block table"));
    }
    let needed = 100 * alphabet.pow(block_len as u32);
    if seq.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            got: seq.len(),
        });
    }
    if let Some(&bad) = seq.iter().find(|&&s| s as usize >= alphabet) {
        return Err(Error::DimensionMismatch(bad as usize, alphabet));
    }
    let h = block_entropy(seq, alphabet, block_len + 1) - block_entropy(seq, alphabet, block_len);
    Ok(h.clamp(0.0, (alphabet as f64).log2()))
}

/// Tolerance used for comparing an empirical rate with its prediction:
/// the plug-in bias bound `d^{L+1}/(n·ln 2)` plus one `log₂d/√n` spread.
pub fn statistical_tolerance(n: usize, alphabet: usize, block_len: usize) -> f64 {
    let cells = (alphabet as f64).powi(block_len as i32 + 1);
    let n = n as f64;
    (cells + 1.0) / (n * std::f64::consts::LN_2) + (alphabet as f64).log2() / n.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CensusResult {
    #[serde(rename = "N")]
    pub n: u64,
    pub chaotic_count: u64,
    pub fraction: f64,
    /// `3·√(0.25/N)`.
    pub half_width_3sigma: f64,
}

/// Fraction of SU(2) elements with uniformly drawn `ψ ∈ [0, 2π)` that are
/// chaotic; boundary verdicts count as chaotic.
pub fn monte_carlo_chaotic_fraction(n: u64, seed: u64) -> Result<CensusResult> {
    if n == 0 {
        return Err(Error::ZeroCount("N"));
    }
    let chunks = n.div_ceil(CENSUS_CHUNK);
    let chaotic_count: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c);
            let len = CENSUS_CHUNK.min(n - c * CENSUS_CHUNK);
            (0..len)
                .filter(|_| {
                    let psi = rng.random_range(0.0..TAU);
                    EigenphasePair::su2_from_psi(psi)
                        .map(|p| verdict_of(&p).kind.is_chaotic_or_boundary())
                        .unwrap_or(false)
                })
                .count() as u64
        })
        .sum();
    Ok(CensusResult {
        n,
        chaotic_count,
        fraction: chaotic_count as f64 / n as f64,
        half_width_3sigma: 3.0 * (0.25 / n as f64).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    /// Perturbations are drawn from `[−ε·π, ε·π]`.
    pub epsilon: f64,
    pub steps: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoisyStep {
    pub lambda: f64,
    pub pair: EigenphasePair,
    pub verdict: Verdict,
}

/// Each step perturbs the base pair to `(φ+λ, ψ−λ)`, which keeps the phase sum.
pub fn noisy_phase_walk(base: &EigenphasePair, cfg: &NoiseConfig) -> Result<Vec<NoisyStep>> {
    if !cfg.epsilon.is_finite() || cfg.epsilon < 0.0 {
        return Err(Error::InvalidSeed(format!("epsilon = {} must be ≥ 0", cfg.epsilon)));
    }
    let mut rng = stream_rng(cfg.seed, 0);
    let half = cfg.epsilon * PI;
    (0..cfg.steps)
        .map(|_| {
            let lambda = if half > 0.0 {
                rng.random_range(-half..=half)
            } else {
                0.0
            };
            let pair = EigenphasePair::new(base.phi + lambda, base.psi - lambda)?;
            Ok(NoisyStep {
                lambda,
                pair,
                verdict: verdict_of(&pair),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct VerdictCounts {
    pub chaotic: usize,
    pub non_chaotic: usize,
    pub boundary: usize,
}

impl VerdictCounts {
    pub fn tally<'a>(kinds: impl IntoIterator<Item = &'a VerdictKind>) -> Self {
        let mut c = Self::default();
        for k in kinds {
            match k {
                VerdictKind::Chaotic => c.chaotic += 1,
                VerdictKind::NonChaotic => c.non_chaotic += 1,
                VerdictKind::Boundary => c.boundary += 1,
            }
        }
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentBasis {
    XBasis,
    Optimized,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub empirical: f64,
    pub predicted: f64,
    pub delta: f64,
    pub tolerance: f64,
    pub within_tolerance: bool,
}

/// Simulates the chain of `pair` in the chosen basis and compares the plug-in
/// rate with the exact rate of the transition matrix.
pub fn entropy_rate_experiment(
    pair: &EigenphasePair,
    basis: ExperimentBasis,
    length: usize,
    block_len: usize,
    seed: u64,
) -> Result<ExperimentResult> {
    let choice = match basis {
        ExperimentBasis::XBasis => BasisChoice::XEigenframe,
        ExperimentBasis::Optimized => BasisChoice::Optimized(OptimizerOptionsSeed(seed)),
    };
    let cfg = TrajectoryConfig::new(UnitarySource::Pair(*pair), choice, length, 1, seed);
    let traj = sample_trajectory(&cfg)?;
    let empirical = empirical_entropy_rate(&traj.outcomes, 2, block_len)?;
    let predicted = markov_entropy_rate(&traj.transitions);
    let delta = (empirical - predicted).abs();
    let tolerance = 3.0 * statistical_tolerance(length, 2, block_len);
    Ok(ExperimentResult {
        empirical,
        predicted,
        delta,
        tolerance,
        within_tolerance: delta <= tolerance,
    })
}
