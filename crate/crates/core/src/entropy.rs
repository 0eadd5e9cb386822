//! Entropy primitives for measurement-interrupted unitary dynamics.
//!
//! A unitary `U` followed by a projective measurement in an orthonormal basis
//! induces a Markov chain on the outcomes with transition probabilities
//! `P[i→j] = |⟨φ_j|U|φ_i⟩|²`. These matrices are unistochastic, hence doubly
//! stochastic, so the stationary distribution is uniform and the entropy rate
//! is `(1/d)·Σ η(P[i→j])`. The PVM entropy of `U` is the maximum of that rate
//! over bases; for qubits it has a closed form in the eigenphase gap `θ`.
//!
//! All logarithms are base 2.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::nelder_mead::{self, NelderMeadOptions};
use crate::phases::{EigenphasePair, Unitary2, UNITARY_TOL};
use crate::rng::stream_rng;

const ETA_CLAMP: f64 = 1e-12;
const GRAM_TOL: f64 = 1e-10;
const STATE_TOL: f64 = 1e-10;
const STOCHASTIC_TOL: f64 = 1e-8;

/// `η(x) = −x·log₂x` with `η(0) = 0`. Inputs within 1e-12 outside `[0, 1]` are clamped.
pub fn eta(x: f64) -> Result<f64> {
    if !(-ETA_CLAMP..=1.0 + ETA_CLAMP).contains(&x) {
        return Err(Error::OutOfUnitInterval(x));
    }
    Ok(eta_clamped(x))
}

pub(crate) fn eta_clamped(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    if x == 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Circular distance between the eigenphases, `min(|φ−ψ|, 2π−|φ−ψ|)`.
pub fn theta_of(pair: &EigenphasePair) -> f64 {
    pair.theta()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyMethod {
    ClosedForm,
    Optimized,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyResult {
    /// Bits per measurement step.
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimal_basis: Option<PvmBasis>,
    pub method: EntropyMethod,
}

/// Qubit PVM entropy as a function of the eigenphase gap.
pub fn qubit_entropy_from_theta(theta: f64) -> f64 {
    if theta >= std::f64::consts::FRAC_PI_2 {
        1.0
    } else {
        let c = (theta / 2.0).cos().powi(2);
        let s = (theta / 2.0).sin().powi(2);
        eta_clamped(c) + eta_clamped(s)
    }
}

pub fn qubit_entropy_closed(pair: &EigenphasePair) -> EntropyResult {
    EntropyResult {
        value: qubit_entropy_from_theta(pair.theta()),
        optimal_basis: None,
        method: EntropyMethod::ClosedForm,
    }
}

/// A d×d unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryD(DMatrix<Complex64>);

fn unitarity_residual(m: &DMatrix<Complex64>) -> f64 {
    let d = m.nrows();
    let g = m.adjoint() * m - DMatrix::<Complex64>::identity(d, d);
    g.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl UnitaryD {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch(m.nrows(), m.ncols()));
        }
        let residual = unitarity_residual(&m);
        if !residual.is_finite() || residual > UNITARY_TOL {
            return Err(Error::NotUnitary {
                residual,
                tol: UNITARY_TOL,
            });
        }
        Ok(Self(m))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let d = self.dim();
        let mut base = self.0.clone();
        let mut acc = DMatrix::<Complex64>::identity(d, d);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        Self(acc)
    }
}

impl From<&Unitary2> for UnitaryD {
    fn from(u: &Unitary2) -> Self {
        Self(DMatrix::from_iterator(2, 2, u.m.iter().copied()))
    }
}

/// An orthonormal measurement basis; the columns are the states `|φ_j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct PvmBasis {
    columns: DMatrix<Complex64>,
}

impl PvmBasis {
    pub fn new(columns: DMatrix<Complex64>) -> Result<Self> {
        if columns.nrows() != columns.ncols() {
            return Err(Error::DimensionMismatch(columns.nrows(), columns.ncols()));
        }
        let residual = unitarity_residual(&columns);
        if !residual.is_finite() || residual > GRAM_TOL {
            return Err(Error::NotOrthonormal(residual));
        }
        Ok(Self { columns })
    }

    pub fn computational(d: usize) -> Self {
        Self {
            columns: DMatrix::identity(d, d),
        }
    }

    /// `{(|0⟩+|1⟩)/√2, (|0⟩−|1⟩)/√2}`.
    pub fn x_basis() -> Self {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            columns: DMatrix::from_row_slice(2, 2, &[s, s, s, -s]),
        }
    }

    pub fn from_unitary2(v: &Unitary2) -> Result<Self> {
        Self::new(DMatrix::from_iterator(2, 2, v.m.iter().copied()))
    }

    /// The basis `{V|φ_j⟩}`.
    pub fn rotated(&self, v: &DMatrix<Complex64>) -> Result<Self> {
        if v.nrows() != self.dim() {
            return Err(Error::DimensionMismatch(v.nrows(), self.dim()));
        }
        Self::new(v * &self.columns)
    }

    pub fn dim(&self) -> usize {
        self.columns.nrows()
    }

    pub fn columns(&self) -> &DMatrix<Complex64> {
        &self.columns
    }

    pub fn to_unitary2(&self) -> Option<Unitary2> {
        (self.dim() == 2).then(|| {
            Unitary2::from_matrix_unchecked(Matrix2::from_iterator(self.columns.iter().copied()))
        })
    }
}

impl Serialize for PvmBasis {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let cols: Vec<Vec<[f64; 2]>> = self
            .columns
            .column_iter()
            .map(|c| c.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        let mut s = serializer.serialize_struct("PvmBasis", 2)?;
        s.serialize_field("d", &self.dim())?;
        s.serialize_field("columns", &cols)?;
        s.end()
    }
}

/// A doubly stochastic transition matrix `P[i→j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    entries: DMatrix<f64>,
}

impl TransitionMatrix {
    /// Validates entries in `[0, 1]` and unit row and column sums within 1e-8.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch(entries.nrows(), entries.ncols()));
        }
        if let Some(&bad) = entries
            .iter()
            .find(|&&x| !(-ETA_CLAMP..=1.0 + ETA_CLAMP).contains(&x))
        {
            return Err(Error::OutOfUnitInterval(bad));
        }
        let dev = stochastic_deviation(&entries);
        if !dev.is_finite() || dev > STOCHASTIC_TOL {
            return Err(Error::NotDoublyStochastic(dev));
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.entries[(from, to)]
    }

    /// Largest deviation of any row or column sum from 1.
    pub fn deviation(&self) -> f64 {
        stochastic_deviation(&self.entries)
    }
}

fn stochastic_deviation(m: &DMatrix<f64>) -> f64 {
    let rows = m.row_iter().map(|r| (r.sum() - 1.0).abs());
    let cols = m.column_iter().map(|c| (c.sum() - 1.0).abs());
    rows.chain(cols).fold(0.0, f64::max)
}

fn validate_state(state: &DMatrix<Complex64>) -> Result<()> {
    let herm = (state - state.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if !herm.is_finite() || herm > STATE_TOL {
        return Err(Error::InvalidState(format!("not Hermitian ({herm:.3e})")));
    }
    let tr = state.trace();
    if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
        return Err(Error::InvalidState(format!("trace {tr} is not 1")));
    }
    let min_ev = state
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min_ev < -STATE_TOL {
        return Err(Error::InvalidState(format!(
            "not positive semidefinite (min eigenvalue {min_ev:.3e})"
        )));
    }
    Ok(())
}

/// Outcome probabilities `p_j = ⟨φ_j|ρ|φ_j⟩` of a PVM.
pub fn measurement_probabilities(state: &DMatrix<Complex64>, basis: &PvmBasis) -> Result<Vec<f64>> {
    if state.nrows() != basis.dim() || state.ncols() != basis.dim() {
        return Err(Error::DimensionMismatch(state.nrows(), basis.dim()));
    }
    validate_state(state)?;
    let b = basis.columns();
    let rotated = b.adjoint() * state * b;
    Ok((0..basis.dim())
        .map(|j| rotated[(j, j)].re.clamp(0.0, 1.0))
        .collect())
}

/// `P[i→j] = |⟨φ_j|U|φ_i⟩|²`.
pub fn transition_matrix(u: &UnitaryD, basis: &PvmBasis) -> Result<TransitionMatrix> {
    if u.dim() != basis.dim() {
        return Err(Error::DimensionMismatch(u.dim(), basis.dim()));
    }
    let b = basis.columns();
    let m = b.adjoint() * u.matrix() * b;
    let d = u.dim();
    let entries = DMatrix::from_fn(d, d, |i, j| m[(j, i)].norm_sqr());
    TransitionMatrix::new(entries)
}

/// Entropy rate `(1/d)·Σ η(P[i→j])` of the stationary chain.
pub fn markov_entropy_rate(p: &TransitionMatrix) -> f64 {
    let d = p.dim() as f64;
    p.entries().iter().map(|&x| eta_clamped(x)).sum::<f64>() / d
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimizerOptions {
    pub restarts: usize,
    pub max_iters: usize,
    /// Agreement tolerance against the qubit closed form.
    pub match_tol: f64,
    pub diameter_tol: f64,
    pub seed: u64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iters: 2000,
            match_tol: 1e-3,
            diameter_tol: 1e-10,
            seed: 0,
        }
    }
}

fn plane_pairs(d: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            pairs.push((i, j));
        }
    }
    pairs
}

/// Generic unitary from `d²` real angles: `d(d−1)/2` rotation angles, then as
/// many rotation phases, then `d` diagonal phases applied on the right.
/// Shorter slices leave the trailing parameters at zero.
pub fn unitary_from_angles(d: usize, params: &[f64]) -> DMatrix<Complex64> {
    let pairs = plane_pairs(d);
    let n = pairs.len();
    let get = |k: usize| params.get(k).copied().unwrap_or(0.0);
    let mut v = DMatrix::<Complex64>::identity(d, d);
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let (s, c) = get(k).sin_cos();
        let e = Complex64::from_polar(1.0, get(n + k));
        let mut g = DMatrix::<Complex64>::identity(d, d);
        g[(i, i)] = Complex64::new(c, 0.0);
        g[(j, j)] = Complex64::new(c, 0.0);
        g[(i, j)] = -e.conj() * s;
        g[(j, i)] = e * s;
        v = v * g;
    }
    for col in 0..d {
        let ph = Complex64::from_polar(1.0, get(2 * n + col));
        for row in 0..d {
            v[(row, col)] *= ph;
        }
    }
    v
}

fn basis_objective(u: &DMatrix<Complex64>, v: &DMatrix<Complex64>) -> f64 {
    let m = v.adjoint() * u * v;
    m.iter().map(|z| eta_clamped(z.norm_sqr())).sum::<f64>() / u.nrows() as f64
}

/// Best-found PVM entropy over orthonormal bases, by multi-start simplex search.
///
/// The objective is invariant under right multiplication of `V` by a diagonal
/// unitary, so only the `d(d−1)` rotation parameters are searched. Restart `i`
/// always starts from the same seeded point, which makes the result
/// non-decreasing in `restarts`.
pub fn pvm_entropy_optimize(u: &UnitaryD, opts: &OptimizerOptions) -> Result<EntropyResult> {
    let d = u.dim();
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    if opts.restarts == 0 {
        return Err(Error::ZeroCount("restarts"));
    }
    let dims = d * (d - 1);
    let nm = NelderMeadOptions {
        max_iters: opts.max_iters,
        diameter_tol: opts.diameter_tol,
        initial_step: 0.5,
    };
    let um = u.matrix();

    let runs: Vec<(f64, Vec<f64>)> = (0..opts.restarts as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(opts.seed, i);
            let x0: Vec<f64> = (0..dims)
                .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
                .collect();
            let r = nelder_mead::minimize(
                |x| -basis_objective(um, &unitary_from_angles(d, x)),
                &x0,
                &nm,
            );
            (-r.fmin, r.xmin)
        })
        .collect();

    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.0 > runs[best].0 {
            best = i;
        }
    }
    let (value, x) = &runs[best];
    let basis = PvmBasis::new(unitary_from_angles(d, x))?;
    Ok(EntropyResult {
        value: value.max(0.0),
        optimal_basis: Some(basis),
        method: EntropyMethod::Optimized,
    })
}
