//! Chaoticity verdicts at every order K, K-scans, and exact idempotency.
//!
//! A qubit unitary is chaotic iff `|tr U| ≤ √2`, and chaotic to order K iff
//! `U^K` is. The threshold is applied with a tolerance band so that unitaries
//! sitting exactly on `√2` are reported as `boundary` instead of being
//! silently classified either way.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::entropy::qubit_entropy_from_theta;
use crate::error::{Error, Result};
use crate::phases::{EigenphasePair, ExactUnitarySpec, RationalPhase};

/// Half-width of the boundary band around `√2`.
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    Chaotic,
    NonChaotic,
    Boundary,
}

impl VerdictKind {
    /// Chaotic in the non-strict sense (`|tr| ≤ √2`), which counts the boundary.
    pub fn is_chaotic_or_boundary(self) -> bool {
        !matches!(self, VerdictKind::NonChaotic)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub trace_mag: f64,
    pub margin: f64,
}

impl Verdict {
    pub fn from_trace_magnitude(trace_mag: f64) -> Self {
        let kind = if trace_mag < SQRT_2 - BOUNDARY_TOL {
            VerdictKind::Chaotic
        } else if trace_mag > SQRT_2 + BOUNDARY_TOL {
            VerdictKind::NonChaotic
        } else {
            VerdictKind::Boundary
        };
        Self {
            kind,
            trace_mag,
            margin: (trace_mag - SQRT_2).abs(),
        }
    }
}

pub fn verdict_of(pair: &EigenphasePair) -> Verdict {
    Verdict::from_trace_magnitude(pair.trace_magnitude())
}

pub fn verdict_at_order(pair: &EigenphasePair, k: u64) -> Result<Verdict> {
    Ok(verdict_of(&pair.power(k)?))
}

/// One row of a K-scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChaoticityRecord {
    #[serde(rename = "K")]
    pub k: u64,
    pub theta: f64,
    #[serde(rename = "H")]
    pub entropy: f64,
    pub trace_mag: f64,
    pub verdict: VerdictKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChaoticityReport {
    pub records: Vec<ChaoticityRecord>,
}

impl ChaoticityReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.records {
            w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let records = r
            .deserialize()
            .collect::<std::result::Result<Vec<ChaoticityRecord>, _>>()
            .map_err(|e| Error::Parse(e.to_string()))?;
        Ok(Self { records })
    }

    pub fn get(&self, k: u64) -> Option<&ChaoticityRecord> {
        self.records.iter().find(|r| r.k == k)
    }
}

pub fn chaoticity_scan(pair: &EigenphasePair, k_max: u64) -> Result<ChaoticityReport> {
    if k_max == 0 {
        return Err(Error::ZeroCount("K_max"));
    }
    let records = (1..=k_max)
        .map(|k| {
            let pk = pair.power(k)?;
            let v = verdict_of(&pk);
            let theta = pk.theta();
            Ok(ChaoticityRecord {
                k,
                theta,
                entropy: qubit_entropy_from_theta(theta),
                trace_mag: v.trace_mag,
                verdict: v.kind,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChaoticityReport { records })
}

/// Phase gap `K·(phase1 − phase2)` reduced to `[0, 2π)`, exactly.
fn exact_gap(spec: &ExactUnitarySpec, k: u64) -> Result<RationalPhase> {
    spec.phase1.checked_sub(&spec.phase2)?.checked_mul(k)
}

/// Verdict of `U^K` for a rational spec, decided by exact arithmetic.
///
/// With gap `x·π`, `x ∈ [0, 2)`, the trace magnitude is `2|cos(xπ/2)|` and
/// the chaotic window is `1/2 ≤ x ≤ 3/2`; the endpoints are exactly the
/// boundary.
pub fn exact_verdict_at_order(spec: &ExactUnitarySpec, k: u64) -> Result<Verdict> {
    if k == 0 {
        return Err(Error::ZeroCount("K"));
    }
    let gap = exact_gap(spec, k)?;
    let (m, p) = (gap.numer(), gap.denom());
    let kind = match ((2 * m).cmp(&p), (2 * m).cmp(&(3 * p))) {
        (std::cmp::Ordering::Equal, _) | (_, std::cmp::Ordering::Equal) => VerdictKind::Boundary,
        (std::cmp::Ordering::Greater, std::cmp::Ordering::Less) => VerdictKind::Chaotic,
        _ => VerdictKind::NonChaotic,
    };
    let trace_mag = match (m, p) {
        (0, _) => 2.0,
        (1, 1) => 0.0,
        (1, 2) | (3, 2) => SQRT_2,
        _ => 2.0 * (gap.radians() / 2.0).cos().abs(),
    };
    Ok(Verdict {
        kind,
        trace_mag,
        margin: if kind == VerdictKind::Boundary {
            0.0
        } else {
            (trace_mag - SQRT_2).abs()
        },
    })
}

/// Exact eigenphase gap `θ_K` in radians for a rational spec.
pub fn exact_theta_at_order(spec: &ExactUnitarySpec, k: u64) -> Result<f64> {
    let gap = exact_gap(spec, k)?;
    let (m, p) = (gap.numer(), gap.denom());
    // θ = min(x, 2 − x)·π with x = m/p
    let folded = if m <= p { m } else { 2 * p - m };
    Ok(if folded == 0 {
        0.0
    } else if folded == p {
        PI
    } else {
        folded as f64 * PI / p as f64
    })
}

/// K-scan of a rational spec with exact verdicts and exact zero/π gaps.
pub fn exact_chaoticity_scan(spec: &ExactUnitarySpec, k_max: u64) -> Result<ChaoticityReport> {
    if k_max == 0 {
        return Err(Error::ZeroCount("K_max"));
    }
    let records = (1..=k_max)
        .map(|k| {
            let v = exact_verdict_at_order(spec, k)?;
            let theta = exact_theta_at_order(spec, k)?;
            Ok(ChaoticityRecord {
                k,
                theta,
                entropy: qubit_entropy_from_theta(theta),
                trace_mag: v.trace_mag,
                verdict: v.kind,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChaoticityReport { records })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonIdempotentReason {
    IrrationalPhase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum IdempotencyResult {
    /// `U^n = I` exactly, with `n` minimal.
    Order { n: u64 },
    NonIdempotent { reason: NonIdempotentReason },
}

/// Strict idempotency order (global phase included), exact.
pub fn idempotency_order(spec: &ExactUnitarySpec, n_cap: u64) -> Result<IdempotencyResult> {
    let (a, b) = spec.exact_eigenphases()?;
    let n = a.order().lcm(&b.order());
    if n > n_cap {
        return Err(Error::OrderCapExceeded { cap: n_cap });
    }
    Ok(IdempotencyResult::Order { n })
}

/// Smallest `n` with `U^n ∝ I`: the order of the phase gap.
pub fn projective_order(spec: &ExactUnitarySpec) -> Result<u64> {
    Ok(spec.phase1.checked_sub(&spec.phase2)?.order())
}

/// `lcm(p₁, p₂)` of the two inner phase denominators. For large primes with
/// `m = 1` this is the order quoted for such constructions; it coincides with
/// the strict order only for suitable global phases.
pub fn lcm_of_denominators(spec: &ExactUnitarySpec) -> u64 {
    (spec.phase1.denom() as u64).lcm(&(spec.phase2.denom() as u64))
}

#[derive(Debug, Clone, Serialize)]
pub struct IdempotencySummary {
    pub strict: IdempotencyResult,
    pub projective_order: u64,
    pub lcm_of_denominators: u64,
}

pub fn idempotency_summary(spec: &ExactUnitarySpec, n_cap: u64) -> Result<IdempotencySummary> {
    Ok(IdempotencySummary {
        strict: idempotency_order(spec, n_cap)?,
        projective_order: projective_order(spec)?,
        lcm_of_denominators: lcm_of_denominators(spec),
    })
}

/// Smallest `K ≤ k_bound` at which `U^K` is non-chaotic. `None` only means
/// none was found below the bound.
pub fn first_nonchaotic_order(pair: &EigenphasePair, k_bound: u64) -> Option<u64> {
    (1..=k_bound).find(|&k| {
        pair.power(k)
            .map(|p| verdict_of(&p).kind == VerdictKind::NonChaotic)
            .unwrap_or(false)
    })
}

/// Number of `K ∈ 1..=n` with `|tr U^K| ≤ √2` (boundary counted as chaotic).
pub fn chaotic_order_count(pair: &EigenphasePair, n: u64) -> u64 {
    (1..=n)
        .filter(|&k| {
            pair.power(k)
                .map(|p| verdict_of(&p).kind.is_chaotic_or_boundary())
                .unwrap_or(false)
        })
        .count() as u64
}

/// SU(2) form of the criterion: `|cos ψ| ≤ 2^{-1/2}`.
pub fn su2_condition(psi: f64) -> bool {
    psi.cos().abs() <= FRAC_1_SQRT_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    fn pair(phi: f64, psi: f64) -> EigenphasePair {
        EigenphasePair::new(phi, psi).unwrap()
    }

    fn rp(m: i64, p: i64) -> RationalPhase {
        RationalPhase::new(m, p).unwrap()
    }

    fn pauli_x() -> EigenphasePair {
        pair(0.0, PI)
    }

    #[test]
    fn verdict_examples() {
        let v = verdict_of(&pauli_x());
        assert_eq!(v.kind, VerdictKind::Chaotic);
        assert_abs_diff_eq!(v.trace_mag, 0.0, epsilon = 1e-15);

        let v = verdict_of(&pair(0.0, 0.0));
        assert_eq!(v.kind, VerdictKind::NonChaotic);
        assert_eq!(v.trace_mag, 2.0);

        let v = verdict_of(&pair(0.7416, 5.5415));
        assert_eq!(v.kind, VerdictKind::NonChaotic);
        assert_abs_diff_eq!(v.trace_mag, 1.4747, epsilon = 5e-4);
    }

    #[test]
    fn boundary_band() {
        assert_eq!(Verdict::from_trace_magnitude(SQRT_2).kind, VerdictKind::Boundary);
        assert_eq!(Verdict::from_trace_magnitude(SQRT_2 + 5e-10).kind, VerdictKind::Boundary);
        assert_eq!(Verdict::from_trace_magnitude(SQRT_2 - 2e-9).kind, VerdictKind::Chaotic);
        assert_eq!(Verdict::from_trace_magnitude(SQRT_2 + 2e-9).kind, VerdictKind::NonChaotic);
        // θ = π/2 construction sits on the boundary
        assert_eq!(verdict_of(&pair(0.0, FRAC_PI_2)).kind, VerdictKind::Boundary);
    }

    #[test]
    fn verdict_at_order_examples() {
        let v = verdict_at_order(&pauli_x(), 2).unwrap();
        assert_eq!(v.kind, VerdictKind::NonChaotic);
        assert_abs_diff_eq!(v.trace_mag, 2.0, epsilon = 1e-12);
        assert_eq!(verdict_at_order(&pauli_x(), 3).unwrap().kind, VerdictKind::Chaotic);

        let u = pair(3.0 * FRAC_PI_2, FRAC_PI_2);
        let v = verdict_at_order(&u, 5).unwrap();
        assert_eq!(v.kind, VerdictKind::Chaotic);
        assert_abs_diff_eq!(u.power(5).unwrap().theta(), PI, epsilon = 1e-12);
        assert!(verdict_at_order(&u, 0).is_err());
    }

    #[test]
    fn scan_pauli_x() {
        let r = chaoticity_scan(&pauli_x(), 4).unwrap();
        assert_eq!(r.records.len(), 4);
        for rec in &r.records {
            if rec.k % 2 == 1 {
                assert_eq!(rec.verdict, VerdictKind::Chaotic);
                assert_eq!(rec.entropy, 1.0);
            } else {
                assert_eq!(rec.verdict, VerdictKind::NonChaotic);
                assert!(rec.entropy < 1e-12);
            }
        }
        assert!(chaoticity_scan(&pauli_x(), 0).is_err());
    }

    #[test]
    fn scan_identity_all_zero() {
        let r = chaoticity_scan(&pair(0.0, 0.0), 16).unwrap();
        assert!(r
            .records
            .iter()
            .all(|rec| rec.verdict == VerdictKind::NonChaotic && rec.entropy == 0.0));
    }

    #[test]
    fn exact_scan_d8() {
        let d8 = ExactUnitarySpec::new(rp(1, 32), rp(17, 32), rp(23, 32));
        let r = exact_chaoticity_scan(&d8, 8).unwrap();
        let first = r.get(1).unwrap();
        assert_eq!(first.theta, FRAC_PI_2);
        assert_eq!(first.entropy, 1.0);
        assert_eq!(first.verdict, VerdictKind::Boundary);
        let eighth = r.get(8).unwrap();
        assert_eq!(eighth.theta, 0.0);
        assert_eq!(eighth.entropy, 0.0);
        assert_eq!(eighth.trace_mag, 2.0);

        // floating scan of the inner phases agrees
        let f = chaoticity_scan(&pair(PI / 32.0, 17.0 * PI / 32.0), 8).unwrap();
        assert!(f.get(8).unwrap().theta < 1e-12);
        assert!(f.get(8).unwrap().entropy < 1e-12);
    }

    #[test]
    fn idempotency_examples() {
        let d4 = ExactUnitarySpec::new(rp(1, 4), rp(5, 4), rp(1, 4));
        assert_eq!(idempotency_order(&d4, 1000).unwrap(), IdempotencyResult::Order { n: 4 });
        let d8 = ExactUnitarySpec::new(rp(1, 32), rp(17, 32), rp(23, 32));
        assert_eq!(idempotency_order(&d8, 1000).unwrap(), IdempotencyResult::Order { n: 8 });
        let x = ExactUnitarySpec::new(RationalPhase::ZERO, rp(1, 1), RationalPhase::ZERO);
        assert_eq!(idempotency_order(&x, 1000).unwrap(), IdempotencyResult::Order { n: 2 });
        assert!(matches!(
            idempotency_order(&d8, 7),
            Err(Error::OrderCapExceeded { cap: 7 })
        ));
    }

    #[test]
    fn projective_and_lcm_reported_separately() {
        // m = 1 over two primes, no global phase: strict order is 2·lcm(p₁, p₂)
        let s = ExactUnitarySpec::new(rp(1, 7), rp(1, 11), RationalPhase::ZERO);
        assert_eq!(idempotency_order(&s, 10_000).unwrap(), IdempotencyResult::Order { n: 154 });
        assert_eq!(lcm_of_denominators(&s), 77);
        // gap π/7 − π/11 = 4π/77
        assert_eq!(projective_order(&s).unwrap(), 77);
    }

    /// Brute-force oracle: smallest n with n·(g+φ_i)/π even for both i.
    fn brute_force_order(spec: &ExactUnitarySpec) -> u64 {
        let (a, b) = spec.exact_eigenphases().unwrap();
        (1..)
            .find(|&n: &u64| {
                [a, b].iter().all(|r| {
                    let num = r.numer() as i128 * n as i128;
                    num % (2 * r.denom() as i128) == 0
                })
            })
            .unwrap()
    }

    #[test]
    fn idempotency_matches_brute_force() {
        for p1 in 1..12 {
            for m1 in 0..2 * p1 {
                for (m2, p2) in [(1, 3), (5, 6), (0, 1), (3, 4)] {
                    for (gm, gp) in [(0, 1), (1, 5), (7, 8)] {
                        let spec = ExactUnitarySpec::new(rp(m1, p1), rp(m2, p2), rp(gm, gp));
                        let IdempotencyResult::Order { n } = idempotency_order(&spec, 1 << 20).unwrap() else {
                            panic!("rational spec must have an order");
                        };
                        assert_eq!(n, brute_force_order(&spec));
                    }
                }
            }
        }
    }

    #[test]
    fn idempotency_excludes_chaoticity() {
        for (m1, p1, m2, p2, gm, gp) in [(1, 4, 5, 4, 1, 4), (1, 32, 17, 32, 23, 32), (1, 7, 3, 5, 0, 1), (2, 9, 1, 3, 1, 2)] {
            let spec = ExactUnitarySpec::new(rp(m1, p1), rp(m2, p2), rp(gm, gp));
            let IdempotencyResult::Order { n } = idempotency_order(&spec, 1 << 20).unwrap() else {
                unreachable!()
            };
            for k in [n, 2 * n, 3 * n] {
                let v = exact_verdict_at_order(&spec, k).unwrap();
                assert_eq!(v.kind, VerdictKind::NonChaotic);
                assert_eq!(v.trace_mag, 2.0);
                assert_eq!(exact_theta_at_order(&spec, k).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn exact_and_float_verdicts_agree_off_boundary() {
        for p in 1..40 {
            for m in 0..2 * p {
                let spec = ExactUnitarySpec::new(rp(m, p), RationalPhase::ZERO, rp(1, 3));
                for k in 1..10 {
                    let e = exact_verdict_at_order(&spec, k).unwrap();
                    let f = verdict_at_order(&spec.pair(), k).unwrap();
                    assert_eq!(e.kind, f.kind, "m={m} p={p} k={k}");
                    assert_abs_diff_eq!(e.trace_mag, f.trace_mag, epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn first_nonchaotic_examples() {
        assert_eq!(first_nonchaotic_order(&pair(0.7416, 5.5415), 10), Some(1));
        assert_eq!(first_nonchaotic_order(&pair(3.0 * FRAC_PI_2, FRAC_PI_2), 10), Some(2));
        // Pauli X at K = 1 only: nothing found
        assert_eq!(first_nonchaotic_order(&pauli_x(), 1), None);
    }

    #[test]
    fn su2_condition_matches_trace_criterion() {
        for i in 0..1000 {
            let psi = i as f64 * 0.00731 * PI;
            let p = EigenphasePair::su2_from_psi(psi).unwrap();
            let v = verdict_of(&p);
            if v.kind != VerdictKind::Boundary {
                assert_eq!(v.kind == VerdictKind::Chaotic, su2_condition(psi));
            }
        }
    }

    #[test]
    fn csv_round_trip() {
        let r = chaoticity_scan(&pair(0.123456789, 4.56789), 20).unwrap();
        let back = ChaoticityReport::from_csv(&r.to_csv().unwrap()).unwrap();
        for (a, b) in r.records.iter().zip(&back.records) {
            assert_eq!(a.k, b.k);
            assert_eq!(a.verdict, b.verdict);
            assert_abs_diff_eq!(a.theta, b.theta, epsilon = 1e-12);
            assert_abs_diff_eq!(a.entropy, b.entropy, epsilon = 1e-12);
            assert_abs_diff_eq!(a.trace_mag, b.trace_mag, epsilon = 1e-12);
        }
    }
}
