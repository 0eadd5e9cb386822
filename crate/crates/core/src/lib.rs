//! Chaoticity of qubit unitaries under repeated projective measurement.
//!
//! A unitary is reduced to its eigenphase pair `(φ, ψ)`; the measurement
//! entropy, chaoticity verdicts at every period, idempotency orders and
//! explicit constructions all follow from that pair.

pub mod chaoticity;
pub mod cli;
pub mod constructions;
pub mod entropy;
pub mod error;
pub mod interval;
pub mod nelder_mead;
pub mod phases;
pub mod rng;
pub mod simulate;

pub use chaoticity::{
    chaoticity_scan, exact_chaoticity_scan, idempotency_order, idempotency_summary, verdict_at_order,
    verdict_of, ChaoticityRecord, ChaoticityReport, IdempotencyResult, Verdict, VerdictKind,
};
pub use constructions::{
    build_chaotic_order_k, build_quadratic_unitary, build_rational_unitary, quadratic_trace_sequence,
    ConstructionSpec, PrecisionPolicy, QuadraticPair, QuadraticSeed,
};
pub use entropy::{
    markov_entropy_rate, pvm_entropy_optimize, qubit_entropy_closed, transition_matrix, EntropyResult,
    OptimizerOptions, PvmBasis, TransitionMatrix, UnitaryD,
};
pub use error::{Error, Result};
pub use phases::{eigenphases_of, EigenphasePair, ExactUnitarySpec, RationalPhase, Unitary2};
pub use simulate::{
    empirical_entropy_rate, monte_carlo_chaotic_fraction, noisy_phase_walk, sample_trajectory,
    CensusResult, NoiseConfig, TrajectoryConfig,
};
