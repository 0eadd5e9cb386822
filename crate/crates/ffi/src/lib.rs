//! C ABI over the `kchaos` library.
//!
//! Objects cross the boundary as opaque handles that the caller releases
//! with the matching `kc_*_free`. Every fallible call returns a [`KcStatus`];
//! on failure `kc_last_error_message` describes the most recent error on the
//! calling thread. Panics never unwind into C.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kchaos::chaoticity::{self, ChaoticityReport, IdempotencyResult, VerdictKind};
use kchaos::constructions::{self, PrecisionPolicy, QuadraticSeed};
use kchaos::phases::{EigenphasePair, ExactUnitarySpec, RationalPhase};
use kchaos::{entropy, simulate, Error};

/// Status codes; values 1 to 3 match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KcStatus {
    Ok = 0,
    Io = 1,
    InvalidArgument = 2,
    Precision = 3,
    NullPointer = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KcVerdictKind {
    Chaotic = 0,
    NonChaotic = 1,
    Boundary = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KcVerdict {
    pub kind: KcVerdictKind,
    pub trace_mag: f64,
    /// Distance of the trace magnitude from √2; zero on the boundary.
    pub margin: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KcRecord {
    pub k: u64,
    pub theta: f64,
    pub entropy: f64,
    pub trace_mag: f64,
    pub verdict: KcVerdictKind,
}

/// `e^{iπ·gm/gp}·Diag(e^{iπ·m1/p1}, e^{iπ·m2/p2})`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KcRationalSpec {
    pub m1: i64,
    pub p1: i64,
    pub m2: i64,
    pub p2: i64,
    pub gm: i64,
    pub gp: i64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KcCensus {
    pub n: u64,
    pub chaotic_count: u64,
    pub fraction: f64,
    pub half_width_3sigma: f64,
}

/// Opaque eigenphase pair.
pub struct KcPair(EigenphasePair);

/// Opaque per-order chaoticity table.
pub struct KcReport(ChaoticityReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> KcStatus {
    match e.exit_code() {
        1 => KcStatus::Io,
        3 => KcStatus::Precision,
        _ => KcStatus::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (KcStatus, String)>) -> KcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            KcStatus::Panic
        }
    }
}

fn lib<T>(r: kchaos::Result<T>) -> Result<T, (KcStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (KcStatus, String) {
    (KcStatus::NullPointer, format!("{what} is null"))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), (KcStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn pair_ref<'a>(p: *const KcPair) -> Result<&'a EigenphasePair, (KcStatus, String)> {
    p.as_ref().map(|p| &p.0).ok_or_else(|| null("pair"))
}

fn kind(k: VerdictKind) -> KcVerdictKind {
    match k {
        VerdictKind::Chaotic => KcVerdictKind::Chaotic,
        VerdictKind::NonChaotic => KcVerdictKind::NonChaotic,
        VerdictKind::Boundary => KcVerdictKind::Boundary,
    }
}

fn boxed_pair(out: *mut *mut KcPair, pair: EigenphasePair) -> Result<(), (KcStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    unsafe { out.write(Box::into_raw(Box::new(KcPair(pair)))) };
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn kc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn kc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Pair with eigenphases `phi`, `psi` in radians, reduced to `[0, 2π)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kc_pair_new(phi: f64, psi: f64, out: *mut *mut KcPair) -> KcStatus {
    guard(|| boxed_pair(out, lib(EigenphasePair::new(phi, psi))?))
}

/// SU(2) pair `(−psi, psi)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kc_pair_su2(psi: f64, out: *mut *mut KcPair) -> KcStatus {
    guard(|| boxed_pair(out, lib(EigenphasePair::su2_from_psi(psi))?))
}

/// Eigenphases of `x² + a·x + b` roots raised to `t`; `precision_bits = 0`
/// picks the working precision automatically.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kc_pair_quadratic(a: i64, b: i64, t: u64, precision_bits: u32, out: *mut *mut KcPair) -> KcStatus {
    guard(|| {
        let seed = lib(QuadraticSeed::new(a, b))?;
        let policy = match precision_bits {
            0 => PrecisionPolicy::auto(&seed, t),
            bits => PrecisionPolicy::new(bits),
        };
        let q = lib(constructions::build_quadratic_unitary(&seed, t, &policy))?;
        boxed_pair(out, q.pair)
    })
}

/// Pair of `U^k`.
///
/// # Safety
/// `pair` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kc_pair_power(pair: *const KcPair, k: u64, out: *mut *mut KcPair) -> KcStatus {
    guard(|| boxed_pair(out, lib(pair_ref(pair)?.power(k))?))
}

/// Releases a pair; null is ignored.
///
/// # Safety
/// `pair` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kc_pair_free(pair: *mut KcPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// # Safety
/// `pair` must be a live handle; `phi` and `psi` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kc_pair_phases(pair: *const KcPair, phi: *mut f64, psi: *mut f64) -> KcStatus {
    guard(|| {
        let p = pair_ref(pair)?;
        write(phi, p.phi, "phi")?;
        write(psi, p.psi, "psi")
    })
}

/// `|tr U| = 2|cos((φ − ψ)/2)|`.
///
/// # Safety
/// `pair` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kc_pair_trace_magnitude(pair: *const KcPair, out: *mut f64) -> KcStatus {
    guard(|| write(out, pair_ref(pair)?.trace_magnitude(), "out"))
}

/// Circular distance between the eigenphases, in `[0, π]`.
///
/// # Safety
/// `pair` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kc_pair_theta(pair: *const KcPair, out: *mut f64) -> KcStatus {
    guard(|| write(out, pair_ref(pair)?.theta(), "out"))
}

/// Maximal measurement entropy in bits (closed form).
///
/// # Safety
/// `pair` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kc_pair_entropy(pair: *const KcPair, out: *mut f64) -> KcStatus {
    guard(|| write(out, entropy::qubit_entropy_closed(pair_ref(pair)?).value, "out"))
}

/// Chaoticity verdict of `U^k`.
///
/// # Safety
/// `pair` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kc_pair_verdict_at_order(pair: *const KcPair, k: u64, out: *mut KcVerdict) -> KcStatus {
    guard(|| {
        let v = lib(chaoticity::verdict_at_order(pair_ref(pair)?, k))?;
        write(
            out,
            KcVerdict {
                kind: kind(v.kind),
                trace_mag: v.trace_mag,
                margin: v.margin,
            },
            "out",
        )
    })
}

/// Verdicts for `K = 1..=k_max`.
///
/// # Safety
/// `pair` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kc_scan(pair: *const KcPair, k_max: u64, out: *mut *mut KcReport) -> KcStatus {
    guard(|| {
        let report = lib(chaoticity::chaoticity_scan(pair_ref(pair)?, k_max))?;
        write(out, Box::into_raw(Box::new(KcReport(report))), "out")
    })
}

/// Number of rows; zero for a null report.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kc_report_len(report: *const KcReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.records.len())
}

/// # Safety
/// `report` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kc_report_row(report: *const KcReport, index: usize, out: *mut KcRecord) -> KcStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        let rec = r.0.records.get(index).ok_or_else(|| {
            (
                KcStatus::InvalidArgument,
                format!("row {index} out of range for {} rows", r.0.records.len()),
            )
        })?;
        write(
            out,
            KcRecord {
                k: rec.k,
                theta: rec.theta,
                entropy: rec.entropy,
                trace_mag: rec.trace_mag,
                verdict: kind(rec.verdict),
            },
            "out",
        )
    })
}

/// Releases a report; null is ignored.
///
/// # Safety
/// `report` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kc_report_free(report: *mut KcReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

fn exact_spec(s: &KcRationalSpec) -> Result<ExactUnitarySpec, (KcStatus, String)> {
    Ok(ExactUnitarySpec::new(
        lib(RationalPhase::new(s.m1, s.p1))?,
        lib(RationalPhase::new(s.m2, s.p2))?,
        lib(RationalPhase::new(s.gm, s.gp))?,
    ))
}

/// Smallest `n` with `U^n = I` exactly, global phase included.
///
/// # Safety
/// `spec` must be valid for reads and `out` for writes.
#[no_mangle]
pub unsafe extern "C" fn kc_rational_idempotency_order(spec: *const KcRationalSpec, out: *mut u64) -> KcStatus {
    guard(|| {
        let s = exact_spec(spec.as_ref().ok_or_else(|| null("spec"))?)?;
        match lib(chaoticity::idempotency_order(&s, u64::MAX))? {
            IdempotencyResult::Order { n } => write(out, n, "out"),
            IdempotencyResult::NonIdempotent { .. } => unreachable!("rational specs are idempotent"),
        }
    })
}

/// Exact verdict of `U^k` for a rational spec.
///
/// # Safety
/// `spec` must be valid for reads and `out` for writes.
#[no_mangle]
pub unsafe extern "C" fn kc_rational_verdict_at_order(spec: *const KcRationalSpec, k: u64, out: *mut KcVerdict) -> KcStatus {
    guard(|| {
        let s = exact_spec(spec.as_ref().ok_or_else(|| null("spec"))?)?;
        let v = lib(chaoticity::exact_verdict_at_order(&s, k))?;
        write(
            out,
            KcVerdict {
                kind: kind(v.kind),
                trace_mag: v.trace_mag,
                margin: v.margin,
            },
            "out",
        )
    })
}

/// SU(2) unitary that is chaotic at order `k`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kc_chaotic_order_k(k: u64, out: *mut KcRationalSpec) -> KcStatus {
    guard(|| {
        let c = lib(constructions::build_chaotic_order_k(k))?;
        let s = c.spec;
        write(
            out,
            KcRationalSpec {
                m1: s.phase1.numer(),
                p1: s.phase1.denom(),
                m2: s.phase2.numer(),
                p2: s.phase2.denom(),
                gm: s.global.numer(),
                gp: s.global.denom(),
            },
            "out",
        )
    })
}

/// Monte Carlo fraction of chaotic SU(2) elements.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kc_census(n: u64, seed: u64, out: *mut KcCensus) -> KcStatus {
    guard(|| {
        let r = lib(simulate::monte_carlo_chaotic_fraction(n, seed))?;
        write(
            out,
            KcCensus {
                n: r.n,
                chaotic_count: r.chaotic_count,
                fraction: r.fraction,
                half_width_3sigma: r.half_width_3sigma,
            },
            "out",
        )
    })
}
