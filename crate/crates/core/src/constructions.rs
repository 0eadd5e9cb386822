//! Builders for the unitary families: rational-phase idempotent unitaries,
//! unitaries chaotic at a prescribed order, and non-idempotent SU(2) series
//! generated by integer quadratics.
//!
//! For a quadratic `x² + a·x + b = 0` with roots `α > β`, the power sums
//! `s_t = α^t + β^t` are integers obeying `s_{t+1} = −a·s_t − b·s_{t−1}`.
//! When `s_t` is even, the phases `(α^t mod 2)·π` and `(β^t mod 2)·π` sum to a
//! multiple of 2π, i.e. they are the eigenphases of an SU(2) element. If the
//! discriminant is not a perfect square both phases are irrational multiples
//! of π and the element is never idempotent.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::chaoticity::{self, IdempotencyResult};
use crate::error::{Error, Result};
use crate::interval::{mod2_distance, FixedInterval};
use crate::phases::{EigenphasePair, ExactUnitarySpec, RationalPhase};

/// Largest prime tried by [`build_chaotic_order_k`].
pub const PRIME_CAP: u64 = 10_000;
/// Required agreement of the two residue routes, and maximal residue width.
pub const SELF_CHECK_TOL: f64 = 1.0 / 4_294_967_296.0;
pub const GUARD_BITS: u32 = 64;
pub const DEFAULT_PRECISION_BITS: u32 = 256;

pub fn build_rational_unitary(
    phase1: RationalPhase,
    phase2: RationalPhase,
    global: RationalPhase,
) -> ExactUnitarySpec {
    ExactUnitarySpec::new(phase1, phase2, global)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, Serialize)]
pub struct ChaoticConstruction {
    pub k: u64,
    pub p2: u64,
    pub spec: ExactUnitarySpec,
    pub idempotency: IdempotencyResult,
}

/// SU(2) unitary with `ψ = π/p₂` for the smallest prime `p₂ ∤ K` such that
/// `|cos(πK/p₂)| ≤ 2^{-1/2}`; `φ = 2π − π/p₂`.
///
/// The cosine condition is decided exactly: with `r = K mod p₂` it holds iff
/// `p₂ ≤ 4r ≤ 3p₂`.
pub fn build_chaotic_order_k(k: u64) -> Result<ChaoticConstruction> {
    if k == 0 {
        return Err(Error::ZeroCount("K"));
    }
    let p2 = (2..=PRIME_CAP)
        .filter(|&p| is_prime(p) && k % p != 0)
        .find(|&p| {
            let r = k % p;
            p <= 4 * r && 4 * r <= 3 * p
        })
        .ok_or(Error::PrimeSearchExhausted { k, cap: PRIME_CAP })?;
    let p = p2 as i64;
    let spec = ExactUnitarySpec::new(
        RationalPhase::new(2 * p - 1, p)?,
        RationalPhase::new(1, p)?,
        RationalPhase::ZERO,
    );
    let idempotency = chaoticity::idempotency_order(&spec, u64::MAX)?;
    Ok(ChaoticConstruction {
        k,
        p2,
        spec,
        idempotency,
    })
}

/// Integers `(a, b)` of `x² + a·x + b = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticSeed {
    a: i64,
    b: i64,
}

impl QuadraticSeed {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::InvalidSeed("a and b must be nonzero".into()));
        }
        Ok(Self { a, b })
    }

    /// Golden-ratio seed `x² − x − 1`, whose power sums are the Lucas numbers.
    pub fn lucas() -> Self {
        Self { a: -1, b: -1 }
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn discriminant(&self) -> BigInt {
        BigInt::from(self.a) * self.a - BigInt::from(self.b) * 4
    }

    pub fn has_square_discriminant(&self) -> bool {
        let d = self.discriminant();
        !d.is_negative() && {
            let r = d.sqrt();
            &r * &r == d
        }
    }

    /// Floating approximations of `(α, β)`, `α ≥ β`, when the roots are real.
    pub fn approx_roots(&self) -> Option<(f64, f64)> {
        let d = self.discriminant().to_f64()?;
        if d < 0.0 {
            return None;
        }
        let r = d.sqrt();
        let a = self.a as f64;
        Some(((-a + r) / 2.0, (-a - r) / 2.0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceSequence {
    pub seed: QuadraticSeed,
    /// `s_0 ..= s_{t_max}`.
    pub values: Vec<BigInt>,
    pub even_flags: Vec<bool>,
}

impl TraceSequence {
    pub fn get(&self, t: usize) -> Option<&BigInt> {
        self.values.get(t)
    }
}

/// Exact power sums `s_t = α^t + β^t` for `t = 0..=t_max`.
pub fn quadratic_trace_sequence(seed: &QuadraticSeed, t_max: u64) -> Result<TraceSequence> {
    if t_max == 0 {
        return Err(Error::ZeroCount("t_max"));
    }
    let len = usize::try_from(t_max).map_err(|_| Error::Overflow("t_max"))? + 1;
    let neg_a = BigInt::from(-seed.a);
    let b = BigInt::from(seed.b);
    let mut values = Vec::with_capacity(len);
    values.push(BigInt::from(2));
    values.push(neg_a.clone());
    while values.len() < len {
        let n = values.len();
        let next = &neg_a * &values[n - 1] - &b * &values[n - 2];
        values.push(next);
    }
    let even_flags = values.iter().map(|v| v.is_even()).collect();
    Ok(TraceSequence {
        seed: *seed,
        values,
        even_flags,
    })
}

/// Working precision (fractional bits) for evaluating `α^t` and `β^t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub bits: u32,
}

impl PrecisionPolicy {
    pub fn new(bits: u32) -> Self {
        Self { bits }
    }

    /// `ceil(t·log₂ max(|α|, |β|, 1)) + 64`.
    pub fn required(seed: &QuadraticSeed, t: u64) -> u32 {
        let m = seed
            .approx_roots()
            .map(|(x, y)| x.abs().max(y.abs()))
            .unwrap_or(1.0)
            .max(1.0);
        (t as f64 * m.log2()).ceil() as u32 + GUARD_BITS
    }

    /// The larger of the default 256 bits and the requirement.
    pub fn auto(seed: &QuadraticSeed, t: u64) -> Self {
        Self::new(DEFAULT_PRECISION_BITS.max(Self::required(seed, t)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    /// `|β| < 1`: `β^t → 0` and the elements approach the identity.
    ConvergingToIdentity,
    /// `β < −1`.
    Traversing,
    Unclassified,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuadraticPair {
    pub a: i64,
    pub b: i64,
    pub t: u64,
    pub pair: EigenphasePair,
    /// `α^t mod 2`, so that `φ = x·π`.
    pub x_residue: f64,
    /// `β^t mod 2`, so that `ψ = y·π`.
    pub y_residue: f64,
    #[serde(serialize_with = "serialize_bigint")]
    pub s_t: BigInt,
    pub series: SeriesKind,
    pub precision_bits: u32,
    /// Width of the enclosure of `α^t`.
    pub residue_width: f64,
    /// Disagreement between the two routes to `β^t mod 2`.
    pub self_check_error: f64,
}

fn serialize_bigint<S: serde::Serializer>(
    v: &BigInt,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Eigenphase pair `((α^t mod 2)·π, (β^t mod 2)·π)` restricted to `a, b ≤ 0`.
pub fn build_quadratic_unitary(
    seed: &QuadraticSeed,
    t: u64,
    policy: &PrecisionPolicy,
) -> Result<QuadraticPair> {
    build_quadratic_unitary_with(seed, t, policy, false)
}

/// As [`build_quadratic_unitary`]; `allow_positive` lifts the `a, b ≤ 0`
/// restriction.
///
/// `α^t` is enclosed by interval binary exponentiation and `β^t mod 2` is
/// taken as `(s_t − α^t) mod 2` with the exact integer `s_t`. An independent
/// enclosure of `β^t` must agree within 2^-32, and the enclosure width must
/// not exceed 2^-32, or the call fails with [`Error::Precision`].
pub fn build_quadratic_unitary_with(
    seed: &QuadraticSeed,
    t: u64,
    policy: &PrecisionPolicy,
    allow_positive: bool,
) -> Result<QuadraticPair> {
    if t == 0 {
        return Err(Error::ZeroCount("t"));
    }
    if !allow_positive && (seed.a > 0 || seed.b > 0) {
        return Err(Error::InvalidSeed(format!(
            "a = {}, b = {}: coefficients must be ≤ 0 (override to explore)",
            seed.a, seed.b
        )));
    }
    let disc = seed.discriminant();
    if disc.is_negative() {
        return Err(Error::InvalidSeed(format!(
            "discriminant {disc} is negative; roots are not real"
        )));
    }
    if seed.has_square_discriminant() {
        return Err(Error::SquareDiscriminant(disc.to_string()));
    }
    let seq = quadratic_trace_sequence(seed, t)?;
    let s_t = seq.values[t as usize].clone();
    if s_t.is_odd() {
        return Err(Error::OddTrace {
            t,
            value: s_t.to_string(),
        });
    }
    if policy.bits == 0 {
        return Err(Error::Precision("zero working precision".into()));
    }

    let f = policy.bits;
    let sqrt_d = FixedInterval::sqrt(&disc, f);
    let neg_a = FixedInterval::from_int(&BigInt::from(-seed.a), f);
    let alpha = neg_a.add(&sqrt_d).half();
    let beta = neg_a.sub(&sqrt_d).half();

    let alpha_t = alpha.pow(t);
    let beta_t_via_sum = FixedInterval::from_int(&s_t, f).sub(&alpha_t);
    let beta_t_direct = beta.pow(t);

    let (x_residue, width) = alpha_t.residue_mod2();
    let (y_residue, y_width) = beta_t_via_sum.residue_mod2();
    let (y_direct, direct_width) = beta_t_direct.residue_mod2();
    let self_check_error = mod2_distance(y_residue, y_direct);

    let worst = width.max(y_width).max(direct_width);
    if !worst.is_finite() || worst > SELF_CHECK_TOL || self_check_error > SELF_CHECK_TOL {
        return Err(Error::Precision(format!(
            "enclosure width {worst:.3e}, route disagreement {self_check_error:.3e} at {f} bits \
             (need ≥ {} bits)",
            PrecisionPolicy::required(seed, t)
        )));
    }

    let series = match seed.approx_roots() {
        Some((_, beta)) if beta.abs() < 1.0 => SeriesKind::ConvergingToIdentity,
        Some((_, beta)) if beta < -1.0 => SeriesKind::Traversing,
        _ => SeriesKind::Unclassified,
    };

    Ok(QuadraticPair {
        a: seed.a,
        b: seed.b,
        t,
        pair: EigenphasePair::new(x_residue * PI, y_residue * PI)?,
        x_residue,
        y_residue,
        s_t,
        series,
        precision_bits: f,
        residue_width: width,
        self_check_error,
    })
}

/// Where a pair of phases came from, which determines what can be certified
/// about their rationality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseSource {
    Exact(ExactUnitarySpec),
    Quadratic { seed: QuadraticSeed, t: u64 },
    Float(EigenphasePair),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rationality {
    Rational,
    IrrationalCertified,
    Unknown,
}

pub fn classify_phase_rationality(source: &PhaseSource) -> Rationality {
    match source {
        PhaseSource::Exact(_) => Rationality::Rational,
        PhaseSource::Quadratic { seed, .. } => {
            let d = seed.discriminant();
            if d.is_negative() {
                Rationality::Unknown
            } else if seed.has_square_discriminant() {
                // integer roots: phases are 0 or π
                Rationality::Rational
            } else {
                Rationality::IrrationalCertified
            }
        }
        PhaseSource::Float(_) => Rationality::Unknown,
    }
}

/// Idempotency as far as it can be decided for the source.
pub fn idempotency_of_source(source: &PhaseSource, n_cap: u64) -> Result<Option<IdempotencyResult>> {
    match (source, classify_phase_rationality(source)) {
        (PhaseSource::Exact(spec), _) => chaoticity::idempotency_order(spec, n_cap).map(Some),
        (_, Rationality::IrrationalCertified) => Ok(Some(IdempotencyResult::NonIdempotent {
            reason: chaoticity::NonIdempotentReason::IrrationalPhase,
        })),
        _ => Ok(None),
    }
}

/// Serialized description of a construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstructionSpec {
    Rational {
        m1: i64,
        p1: i64,
        m2: i64,
        p2: i64,
        g_m: i64,
        g_p: i64,
    },
    Quadratic {
        a: i64,
        b: i64,
        t: u64,
        precision_bits: u32,
    },
}

impl ConstructionSpec {
    pub fn from_exact(spec: &ExactUnitarySpec) -> Self {
        ConstructionSpec::Rational {
            m1: spec.phase1.numer(),
            p1: spec.phase1.denom(),
            m2: spec.phase2.numer(),
            p2: spec.phase2.denom(),
            g_m: spec.global.numer(),
            g_p: spec.global.denom(),
        }
    }

    pub fn to_exact(&self) -> Result<Option<ExactUnitarySpec>> {
        match *self {
            ConstructionSpec::Rational {
                m1,
                p1,
                m2,
                p2,
                g_m,
                g_p,
            } => Ok(Some(build_rational_unitary(
                RationalPhase::new(m1, p1)?,
                RationalPhase::new(m2, p2)?,
                RationalPhase::new(g_m, g_p)?,
            ))),
            ConstructionSpec::Quadratic { .. } => Ok(None),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain struct serializes")
    }
}
