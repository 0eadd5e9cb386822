//! Eigenphase representations of 2×2 unitaries.
//!
//! A two-level unitary is characterized, up to a change of basis, by its pair
//! of eigenphases `(phi, psi)`. Everything downstream (entropy, chaoticity,
//! constructions) works on that pair. Exact rational phases `m·π/p` are kept
//! as integer pairs so that idempotency can be decided without rounding.

use std::f64::consts::{PI, TAU};
use std::fmt;

use nalgebra::Matrix2;
use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `U†U = I` (max absolute entry deviation).
pub const UNITARY_TOL: f64 = 1e-12;
/// Tolerance on the unimodular phase-sum condition.
pub const PHASE_TOL: f64 = 1e-12;

/// Reduce an angle to the canonical representative in `[0, 2π)`.
pub fn reduce_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed circular distance of `x` from `0 mod 2π`, in `(-π, π]`.
pub fn circular_offset(x: f64) -> f64 {
    let r = reduce_angle(x);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// The eigenphases of a 2×2 unitary, both in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenphasePair {
    pub phi: f64,
    pub psi: f64,
}

impl EigenphasePair {
    pub fn new(phi: f64, psi: f64) -> Result<Self> {
        if !phi.is_finite() || !psi.is_finite() {
            return Err(Error::NonFinite("eigenphase"));
        }
        Ok(Self {
            phi: reduce_angle(phi),
            psi: reduce_angle(psi),
        })
    }

    /// The SU(2) pair determined by a single phase: `phi = -psi mod 2π`.
    pub fn su2_from_psi(psi: f64) -> Result<Self> {
        if !psi.is_finite() {
            return Err(Error::NonFinite("psi"));
        }
        let psi = reduce_angle(psi);
        Ok(Self {
            phi: reduce_angle(TAU - psi),
            psi,
        })
    }

    /// Eigenphases of `U^K`.
    pub fn power(&self, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroCount("K"));
        }
        Ok(Self {
            phi: mul_angle(self.phi, k),
            psi: mul_angle(self.psi, k),
        })
    }

    /// `|e^{iφ} + e^{iψ}| = 2|cos((φ−ψ)/2)|`, in `[0, 2]`.
    pub fn trace_magnitude(&self) -> f64 {
        (2.0 * ((self.phi - self.psi) / 2.0).cos().abs()).min(2.0)
    }

    /// Circular distance between the two phases, in `[0, π]`.
    pub fn theta(&self) -> f64 {
        let d = (self.phi - self.psi).abs();
        d.min(TAU - d).max(0.0)
    }

    pub fn swapped(&self) -> Self {
        Self {
            phi: self.psi,
            psi: self.phi,
        }
    }

    /// Distance of `phi + psi` from `0 mod 2π`.
    pub fn phase_sum_residual(&self) -> f64 {
        circular_offset(self.phi + self.psi).abs()
    }

    pub fn is_unimodular(&self) -> bool {
        self.phase_sum_residual() <= PHASE_TOL
    }

    /// Representative with half the phase sum divided out, so that the
    /// corresponding matrix has unit determinant.
    pub fn unimodular(&self) -> Self {
        let half = (self.phi + self.psi) / 2.0;
        Self {
            phi: reduce_angle(self.phi - half),
            psi: reduce_angle(self.psi - half),
        }
    }

    /// Both phases shifted by a common global phase.
    pub fn with_global_phase(&self, g: f64) -> Self {
        Self {
            phi: reduce_angle(self.phi + g),
            psi: reduce_angle(self.psi + g),
        }
    }
}

/// `k·x mod 2π` for `x` already in `[0, 2π)`, split to limit rounding for large `k`.
fn mul_angle(x: f64, k: u64) -> f64 {
    if k < (1 << 20) {
        return reduce_angle(x * k as f64);
    }
    let hi = k >> 20;
    let lo = k & ((1 << 20) - 1);
    let a = reduce_angle(x * (1u64 << 20) as f64);
    reduce_angle(mul_angle(a, hi) + x * lo as f64)
}

/// An exact phase `m·π/p`, normalized so that `gcd(m, p) = 1` and `0 ≤ m/p < 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalPhase {
    m: i64,
    p: i64,
}

impl RationalPhase {
    pub const ZERO: RationalPhase = RationalPhase { m: 0, p: 1 };

    /// Normalizing constructor. Non-normalized input is reduced, never rejected;
    /// only `p = 0` is an error.
    pub fn new(m: i64, p: i64) -> Result<Self> {
        if p == 0 {
            return Err(Error::ZeroCount("phase denominator"));
        }
        let (m, p) = if p < 0 {
            (
                m.checked_neg().ok_or(Error::Overflow("phase"))?,
                p.checked_neg().ok_or(Error::Overflow("phase"))?,
            )
        } else {
            (m, p)
        };
        let two_p = p.checked_mul(2).ok_or(Error::Overflow("phase"))?;
        let m = m.rem_euclid(two_p);
        let g = m.gcd(&p);
        Ok(Self { m: m / g, p: p / g })
    }

    pub fn numer(&self) -> i64 {
        self.m
    }

    pub fn denom(&self) -> i64 {
        self.p
    }

    pub fn radians(&self) -> f64 {
        self.m as f64 * PI / self.p as f64
    }

    /// Smallest `n ≥ 1` with `n·m/p` an even integer, i.e. the multiplicative
    /// order of `e^{imπ/p}`.
    pub fn order(&self) -> u64 {
        let two_p = 2 * self.p;
        (two_p / self.m.gcd(&two_p)) as u64
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let l = self.p.lcm(&other.p);
        let a = self
            .m
            .checked_mul(l / self.p)
            .ok_or(Error::Overflow("phase sum"))?;
        let b = other
            .m
            .checked_mul(l / other.p)
            .ok_or(Error::Overflow("phase sum"))?;
        Self::new(a.checked_add(b).ok_or(Error::Overflow("phase sum"))?, l)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&Self::new(-other.m, other.p)?)
    }

    /// `k` times this phase, reduced.
    pub fn checked_mul(&self, k: u64) -> Result<Self> {
        let k = i64::try_from(k).map_err(|_| Error::Overflow("phase multiple"))?;
        // reduce k modulo the order first so the product stays small
        let k = k % self.order() as i64;
        Self::new(
            self.m.checked_mul(k).ok_or(Error::Overflow("phase multiple"))?,
            self.p,
        )
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0
    }
}

impl fmt::Display for RationalPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.m, self.p) {
            (0, _) => write!(f, "0"),
            (1, 1) => write!(f, "π"),
            (m, 1) => write!(f, "{m}π"),
            (1, p) => write!(f, "π/{p}"),
            (m, p) => write!(f, "{m}π/{p}"),
        }
    }
}

/// `e^{i·global}·Diag(e^{i·phase1}, e^{i·phase2})` with exact rational phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactUnitarySpec {
    pub phase1: RationalPhase,
    pub phase2: RationalPhase,
    pub global: RationalPhase,
}

impl ExactUnitarySpec {
    pub fn new(phase1: RationalPhase, phase2: RationalPhase, global: RationalPhase) -> Self {
        Self {
            phase1,
            phase2,
            global,
        }
    }

    /// Full eigenphases of the matrix, global phase included.
    pub fn exact_eigenphases(&self) -> Result<(RationalPhase, RationalPhase)> {
        Ok((
            self.global.checked_add(&self.phase1)?,
            self.global.checked_add(&self.phase2)?,
        ))
    }

    /// Floating eigenphase pair of the full matrix.
    pub fn pair(&self) -> EigenphasePair {
        let (a, b) = self
            .exact_eigenphases()
            .unwrap_or((self.phase1, self.phase2));
        EigenphasePair {
            phi: a.radians(),
            psi: b.radians(),
        }
    }

    pub fn to_unitary(&self) -> Unitary2 {
        let pair = EigenphasePair {
            phi: self.phase1.radians(),
            psi: self.phase2.radians(),
        };
        let g = self.global.radians();
        let mut u = Unitary2::diagonal(&pair);
        u.m *= Complex64::from_polar(1.0, g);
        u.global_phase = Some(g);
        u
    }
}

/// A dense 2×2 unitary. `global_phase` records a prefactor when the matrix was
/// assembled from a recipe; it is informational and already folded into `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    pub m: Matrix2<Complex64>,
    pub global_phase: Option<f64>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Unitary2 {
    /// Wrap a matrix, rejecting it if `U†U` deviates from the identity by more
    /// than [`UNITARY_TOL`].
    pub fn new(m: Matrix2<Complex64>) -> Result<Self> {
        let u = Self {
            m,
            global_phase: None,
        };
        let residual = u.unitarity_residual();
        if !residual.is_finite() || residual > UNITARY_TOL {
            return Err(Error::NotUnitary {
                residual,
                tol: UNITARY_TOL,
            });
        }
        Ok(u)
    }

    pub(crate) fn from_matrix_unchecked(m: Matrix2<Complex64>) -> Self {
        Self {
            m,
            global_phase: None,
        }
    }

    pub fn identity() -> Self {
        Self::from_matrix_unchecked(Matrix2::identity())
    }

    pub fn pauli_x() -> Self {
        Self::from_matrix_unchecked(Matrix2::new(c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)))
    }

    pub fn pauli_y() -> Self {
        Self::from_matrix_unchecked(Matrix2::new(c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)))
    }

    pub fn pauli_z() -> Self {
        Self::from_matrix_unchecked(Matrix2::new(c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)))
    }

    pub fn hadamard() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_matrix_unchecked(Matrix2::new(c(s, 0.), c(s, 0.), c(s, 0.), c(-s, 0.)))
    }

    pub fn diagonal(pair: &EigenphasePair) -> Self {
        Self::from_matrix_unchecked(Matrix2::new(
            Complex64::from_polar(1.0, pair.phi),
            c(0., 0.),
            c(0., 0.),
            Complex64::from_polar(1.0, pair.psi),
        ))
    }

    /// `V · Diag(e^{iφ}, e^{iψ}) · V†`.
    pub fn from_eigen(pair: &EigenphasePair, basis: &Unitary2) -> Self {
        let d = Self::diagonal(pair).m;
        Self::from_matrix_unchecked(basis.m * d * basis.m.adjoint())
    }

    pub fn unitarity_residual(&self) -> f64 {
        let g = self.m.adjoint() * self.m - Matrix2::identity();
        g.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        self.m[(0, 0)] + self.m[(1, 1)]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_matrix_unchecked(self.m.adjoint())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_matrix_unchecked(self.m * other.m)
    }

    /// `U^k` by binary exponentiation.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.m;
        let mut acc = Matrix2::identity();
        while k > 0 {
            if k & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            k >>= 1;
        }
        Self::from_matrix_unchecked(acc)
    }

    /// Max absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.m - other.m)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Diagonalize a 2×2 unitary: returns the eigenphases and an orthonormal
/// eigenbasis `V` with `U = V·Diag(e^{iφ}, e^{iψ})·V†`. A scalar matrix gets the
/// computational basis.
pub fn eigenphases_of(u: &Unitary2) -> Result<(EigenphasePair, Unitary2)> {
    let residual = u.unitarity_residual();
    if !residual.is_finite() || residual > UNITARY_TOL {
        return Err(Error::NotUnitary {
            residual,
            tol: UNITARY_TOL,
        });
    }
    let (a, b, cc, d) = (u.m[(0, 0)], u.m[(0, 1)], u.m[(1, 0)], u.m[(1, 1)]);

    let diagonal = b.norm() == 0.0 && cc.norm() == 0.0;
    let half_gap = (a - d) / 2.0;
    let s = (half_gap * half_gap + b * cc).sqrt();
    let lambda1 = (a + d) / 2.0 + s;

    // two candidate eigenvectors for lambda1; take the better conditioned one
    let v = [b, lambda1 - a];
    let w = [lambda1 - d, cc];
    let nv = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let nw = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();

    let basis = if diagonal || nv.max(nw) < 1e-14 {
        Matrix2::identity()
    } else {
        let (e, n) = if nv >= nw { (v, nv) } else { (w, nw) };
        let e0 = e[0] / n;
        let e1 = e[1] / n;
        Matrix2::new(e0, -e1.conj(), e1, e0.conj())
    };

    // phases from Rayleigh quotients in the chosen basis
    let dm = basis.adjoint() * u.m * basis;
    let pair = EigenphasePair::new(dm[(0, 0)].arg(), dm[(1, 1)].arg())?;
    Ok((pair, Unitary2::from_matrix_unchecked(basis)))
}
