//! Parsing of command-line angles, gates, matrices and spec files into a
//! [`Subject`] that the commands analyze.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use serde::Serialize;

use crate::constructions::{
    build_quadratic_unitary_with, ConstructionSpec, PhaseSource, PrecisionPolicy, QuadraticPair, QuadraticSeed,
};
use crate::entropy::UnitaryD;
use crate::error::{Error, Result};
use crate::phases::{eigenphases_of, EigenphasePair, ExactUnitarySpec, RationalPhase, Unitary2};

/// An angle given either as an exact multiple of π or in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    Exact(RationalPhase),
    Radians(f64),
}

impl Angle {
    pub fn radians(&self) -> f64 {
        match self {
            Angle::Exact(r) => r.radians(),
            Angle::Radians(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<RationalPhase> {
        match self {
            Angle::Exact(r) => Some(*r),
            Angle::Radians(_) => None,
        }
    }
}

/// `"m/p"` or `"m"` in units of π, a decimal multiple of π, or `"rad:x"`.
pub fn parse_angle(text: &str) -> Result<Angle> {
    let text = text.trim();
    let bad = || Error::Parse(format!("malformed angle {text:?}"));
    if let Some(raw) = text.strip_prefix("rad:") {
        let x: f64 = raw.trim().parse().map_err(|_| bad())?;
        if !x.is_finite() {
            return Err(Error::NonFinite("angle"));
        }
        return Ok(Angle::Radians(x));
    }
    if let Some((m, p)) = text.split_once('/') {
        let m: i64 = m.trim().parse().map_err(|_| bad())?;
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        return Ok(Angle::Exact(RationalPhase::new(m, p)?));
    }
    if let Ok(m) = text.parse::<i64>() {
        return Ok(Angle::Exact(RationalPhase::new(m, 1)?));
    }
    let x: f64 = text.parse().map_err(|_| bad())?;
    if !x.is_finite() {
        return Err(Error::NonFinite("angle"));
    }
    Ok(Angle::Radians(x * std::f64::consts::PI))
}

pub const GATE_NAMES: &[&str] = &["id", "x", "y", "z", "h", "s", "t", "sx", "d4", "d8"];

/// Exact eigenphase description of a named gate.
pub fn named_gate(name: &str) -> Result<ExactUnitarySpec> {
    let r = |m, p| RationalPhase::new(m, p).expect("nonzero denominator");
    let (p1, p2, g) = match name.to_ascii_lowercase().as_str() {
        "id" | "i" | "identity" => ((0, 1), (0, 1), (0, 1)),
        "x" | "y" | "z" | "h" => ((0, 1), (1, 1), (0, 1)),
        "s" | "sx" => ((0, 1), (1, 2), (0, 1)),
        "t" => ((0, 1), (1, 4), (0, 1)),
        "d4" => ((1, 4), (5, 4), (1, 4)),
        "d8" => ((1, 32), (17, 32), (23, 32)),
        _ => {
            return Err(Error::Parse(format!(
                "unknown gate {name:?}; expected one of {}",
                GATE_NAMES.join(", ")
            )))
        }
    };
    Ok(ExactUnitarySpec::new(r(p1.0, p1.1), r(p2.0, p2.1), r(g.0, g.1)))
}

/// Matrix of a named gate in the computational basis.
pub fn gate_matrix(name: &str) -> Result<Unitary2> {
    let spec = named_gate(name)?;
    let c = |re, im| Complex64::new(re, im);
    Ok(match name.to_ascii_lowercase().as_str() {
        "x" => Unitary2::pauli_x(),
        "y" => Unitary2::pauli_y(),
        "z" => Unitary2::pauli_z(),
        "h" => Unitary2::hadamard(),
        "sx" => Unitary2::new(Matrix2::new(c(0.5, 0.5), c(0.5, -0.5), c(0.5, -0.5), c(0.5, 0.5)))?,
        _ => spec.to_unitary(),
    })
}

/// Matrix entry list `re,im,re,im,...` in row-major order.
pub fn parse_matrix(text: &str) -> Result<UnitaryD> {
    let values: Vec<f64> = text
        .split([',', ';', ' '])
        .filter(|s| !s.is_empty())
        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("malformed number {s:?}"))))
        .collect::<Result<_>>()?;
    let d = match values.len() {
        8 => 2,
        18 => 3,
        n => return Err(Error::Parse(format!("expected 8 or 18 numbers for a matrix, got {n}"))),
    };
    let entries = values.chunks(2).map(|c| Complex64::new(c[0], c[1]));
    UnitaryD::new(DMatrix::from_row_iterator(d, d, entries))
}

/// A qubit unitary under analysis, with whatever exact information its
/// source provides.
#[derive(Debug, Clone)]
pub struct Subject {
    pub pair: EigenphasePair,
    pub exact: Option<ExactUnitarySpec>,
    pub source: PhaseSource,
    pub matrix: Unitary2,
    pub quadratic: Option<QuadraticPair>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubjectSummary {
    pub pair: EigenphasePair,
    pub theta: f64,
    pub trace_mag: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ConstructionSpec>,
}

impl Subject {
    pub fn from_exact(spec: ExactUnitarySpec) -> Self {
        Self {
            pair: spec.pair(),
            exact: Some(spec),
            source: PhaseSource::Exact(spec),
            matrix: spec.to_unitary(),
            quadratic: None,
        }
    }

    pub fn from_pair(pair: EigenphasePair) -> Self {
        Self {
            pair,
            exact: None,
            source: PhaseSource::Float(pair),
            matrix: Unitary2::diagonal(&pair),
            quadratic: None,
        }
    }

    pub fn from_matrix(u: Unitary2) -> Result<Self> {
        let (pair, _) = eigenphases_of(&u)?;
        Ok(Self {
            matrix: u,
            ..Self::from_pair(pair)
        })
    }

    pub fn from_quadratic(q: QuadraticPair) -> Result<Self> {
        Ok(Self {
            source: PhaseSource::Quadratic {
                seed: QuadraticSeed::new(q.a, q.b)?,
                t: q.t,
            },
            quadratic: Some(q.clone()),
            ..Self::from_pair(q.pair)
        })
    }

    pub fn from_construction(spec: &ConstructionSpec, allow_positive: bool) -> Result<Self> {
        match *spec {
            ConstructionSpec::Rational { .. } => Ok(Self::from_exact(spec.to_exact()?.expect("rational spec"))),
            ConstructionSpec::Quadratic {
                a,
                b,
                t,
                precision_bits,
            } => {
                let seed = QuadraticSeed::new(a, b)?;
                let q = build_quadratic_unitary_with(&seed, t, &PrecisionPolicy::new(precision_bits), allow_positive)?;
                Self::from_quadratic(q)
            }
        }
    }

    pub fn summary(&self) -> SubjectSummary {
        SubjectSummary {
            pair: self.pair,
            theta: self.pair.theta(),
            trace_mag: self.pair.trace_magnitude(),
            exact: self.exact.as_ref().map(ConstructionSpec::from_exact),
        }
    }
}

/// Builds a subject from the mutually exclusive ways of naming a unitary.
#[derive(Debug, Clone, Copy)]
pub struct SubjectArgs<'a> {
    pub gate: Option<&'a str>,
    pub phi: Option<&'a str>,
    pub psi: Option<&'a str>,
    pub global: Option<&'a str>,
    pub su2_psi: Option<&'a str>,
    pub matrix: Option<&'a str>,
    pub spec: Option<&'a std::path::Path>,
    pub allow_positive: bool,
}

pub fn resolve_subject(args: &SubjectArgs) -> Result<Subject> {
    let given = [
        args.gate.is_some(),
        args.phi.is_some() || args.psi.is_some(),
        args.su2_psi.is_some(),
        args.matrix.is_some(),
        args.spec.is_some(),
    ]
    .iter()
    .filter(|&&b| b)
    .count();
    if given != 1 {
        return Err(Error::Parse(
            "give exactly one of --gate, --phi/--psi, --su2-psi, --matrix, --spec".into(),
        ));
    }
    if args.global.is_some() && args.phi.is_none() {
        return Err(Error::Parse("--global requires --phi and --psi".into()));
    }
    if let Some(g) = args.gate {
        return Ok(Subject {
            matrix: gate_matrix(g)?,
            ..Subject::from_exact(named_gate(g)?)
        });
    }
    if let Some(s) = args.su2_psi {
        let psi = parse_angle(s)?;
        return match psi.exact() {
            Some(r) => Ok(Subject::from_exact(ExactUnitarySpec::new(
                RationalPhase::new(-r.numer(), r.denom())?,
                r,
                RationalPhase::ZERO,
            ))),
            None => Ok(Subject::from_pair(EigenphasePair::su2_from_psi(psi.radians())?)),
        };
    }
    if let Some(m) = args.matrix {
        let u = parse_matrix(m)?;
        if u.dim() != 2 {
            return Err(Error::UnsupportedDimension(u.dim()));
        }
        let m = u.matrix();
        return Subject::from_matrix(Unitary2::new(Matrix2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]))?);
    }
    if let Some(path) = args.spec {
        let text = std::fs::read_to_string(path)?;
        return Subject::from_construction(&ConstructionSpec::from_json(&text)?, args.allow_positive);
    }
    let (Some(phi), Some(psi)) = (args.phi, args.psi) else {
        return Err(Error::Parse("--phi and --psi must be given together".into()));
    };
    let (phi, psi) = (parse_angle(phi)?, parse_angle(psi)?);
    let global = args.global.map(parse_angle).transpose()?.unwrap_or(Angle::Exact(RationalPhase::ZERO));
    match (phi.exact(), psi.exact(), global.exact()) {
        (Some(a), Some(b), Some(g)) => Ok(Subject::from_exact(ExactUnitarySpec::new(a, b, g))),
        _ => Ok(Subject::from_pair(
            EigenphasePair::new(phi.radians(), psi.radians())?.with_global_phase(global.radians()),
        )),
    }
}
