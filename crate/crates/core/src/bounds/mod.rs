//! Closed-form lower bounds on implementation cost, evaluated from supplied scalars.
//!
//! Evaluators never run optimisers. Every input they read is copied into the report's
//! intermediates, so a report can be re-evaluated from its own contents.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::channels::Povm;
use crate::qcore::linalg::{self, CMat};
use crate::qcore::Observable;
use crate::resources::HolderConstants;

#[derive(Debug, Error, PartialEq)]
pub enum BoundError {
    #[error("missing input `{0}`")]
    Missing(&'static str),
    #[error("invalid input `{name}` = {value}: {reason}")]
    Invalid { name: &'static str, value: f64, reason: &'static str },
    #[error("Hoelder exponents need a + b > 1, got a = {0}, b = {1}")]
    Exponents(f64, f64),
    #[error("unknown bound `{0}`")]
    UnknownKind(String),
}

/// `4x + x^2`.
pub fn f(x: f64) -> f64 {
    4.0 * x + x * x
}

/// `(1/(a+b))^{1/(a+b-1)} (1 - 1/(a+b))`.
pub fn g(a: f64, b: f64) -> f64 {
    let s = a + b;
    (1.0 / s).powf(1.0 / (s - 1.0)) * (1.0 - 1.0 / s)
}

pub fn plus_part(x: f64) -> f64 {
    x.max(0.0)
}

macro_rules! bound_inputs {
    ($($(#[$doc:meta])* $field:ident),* $(,)?) => {
        /// Scalars consumed by the evaluators. Units follow the measure in use.
        #[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct BoundInput {
            $($(#[$doc])* #[serde(default, skip_serializing_if = "Option::is_none")] pub $field: Option<f64>,)*
        }

        impl BoundInput {
            pub const NAMES: &'static [&'static str] = &[$(stringify!($field)),*];

            pub fn get(&self, name: &str) -> Option<f64> {
                match name {
                    $(stringify!($field) => self.$field,)*
                    _ => None,
                }
            }

            /// Sets a named input; returns `false` for an unknown name.
            pub fn set(&mut self, name: &str, value: f64) -> bool {
                match name {
                    $(stringify!($field) => { self.$field = Some(value); true })*
                    _ => false,
                }
            }
        }
    };
}

bound_inputs! {
    /// Resource gain obtainable by discriminating the input ensemble.
    m_em,
    /// Power needed to discriminate the image ensemble optimally.
    m_cos,
    /// Power of a specific measurement channel on the output (or the probe).
    power,
    /// Irreversibility of the channel on the test ensemble.
    delta,
    /// Approximation error.
    epsilon,
    /// Failure probability of a fixed POVM on the image ensemble.
    p_fail,
    /// Energy-conservation defect between the two test states.
    c_quantity,
    k,
    a,
    b,
    a_prime,
    c_max,
    beta,
    /// Spectral spread of the input Hamiltonian.
    spread_in,
    /// Spectral spread of the output Hamiltonian.
    spread_out,
    /// `max_k ||[P_k, H]||_op` of a projective measurement.
    commutator_norm,
    /// Spectral spread of `H - V^dagger H V` for a gate `V`.
    generator_spread,
    /// `|E_j - E_j'|` for coherence erasure.
    level_gap,
}

impl BoundInput {
    pub fn with_constants(mut self, c: &HolderConstants) -> Self {
        self.k = Some(c.k);
        self.a = Some(c.a);
        self.b = Some(c.b);
        self.a_prime = c.a_prime;
        self.c_max = Some(c.c_max);
        self
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        let known = self.set(name, value);
        debug_assert!(known, "unknown input {name}");
        self
    }

    fn from_map(map: &BTreeMap<String, f64>) -> Self {
        let mut out = BoundInput::default();
        for (k, v) in map {
            out.set(k, *v);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundKind {
    General,
    Simplified,
    FailureProbability,
    Conversion,
    EnergyIrreversibility,
    EnergyError,
    ProjectiveMeasurement,
    UnitaryGate,
    Athermality,
    AthermalityError,
    Work,
    ErasureGap,
    Way,
}

impl BoundKind {
    pub const ALL: [BoundKind; 13] = [
        BoundKind::General,
        BoundKind::Simplified,
        BoundKind::FailureProbability,
        BoundKind::Conversion,
        BoundKind::EnergyIrreversibility,
        BoundKind::EnergyError,
        BoundKind::ProjectiveMeasurement,
        BoundKind::UnitaryGate,
        BoundKind::Athermality,
        BoundKind::AthermalityError,
        BoundKind::Work,
        BoundKind::ErasureGap,
        BoundKind::Way,
    ];

    pub fn id(self) -> &'static str {
        match self {
            BoundKind::General => "general",
            BoundKind::Simplified => "simplified",
            BoundKind::FailureProbability => "pfail",
            BoundKind::Conversion => "conversion",
            BoundKind::EnergyIrreversibility => "energy-irrev",
            BoundKind::EnergyError => "energy-error",
            BoundKind::ProjectiveMeasurement => "proj-meas",
            BoundKind::UnitaryGate => "unitary",
            BoundKind::Athermality => "athermality",
            BoundKind::AthermalityError => "athermality-error",
            BoundKind::Work => "work",
            BoundKind::ErasureGap => "erasure-gap",
            BoundKind::Way => "way",
        }
    }

    /// The input that plays the role of the error; the bound diverges as it reaches zero.
    pub fn error_parameter(self) -> Option<&'static str> {
        match self {
            BoundKind::General | BoundKind::Simplified | BoundKind::EnergyIrreversibility | BoundKind::Athermality => {
                Some("delta")
            }
            BoundKind::FailureProbability => Some("p_fail"),
            BoundKind::ErasureGap => None,
            _ => Some("epsilon"),
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for BoundKind {
    type Err = BoundError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BoundKind::ALL.into_iter().find(|k| k.id() == s).ok_or_else(|| BoundError::UnknownKind(s.to_owned()))
    }
}

impl Serialize for BoundKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

impl<'de> Deserialize<'de> for BoundKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A bound value, or the statement that the cost is unbounded.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundValue {
    Finite(f64),
    Divergent,
}

impl BoundValue {
    pub fn is_divergent(self) -> bool {
        matches!(self, BoundValue::Divergent)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            BoundValue::Finite(x) => Some(x),
            BoundValue::Divergent => None,
        }
    }

    /// Ordering with divergence above every finite value.
    pub fn le(self, other: BoundValue, tol: f64) -> bool {
        match (self, other) {
            (_, BoundValue::Divergent) => true,
            (BoundValue::Divergent, BoundValue::Finite(_)) => false,
            (BoundValue::Finite(x), BoundValue::Finite(y)) => x <= y + tol,
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Finite(x) => write!(f, "{x}"),
            BoundValue::Divergent => f.write_str("divergent"),
        }
    }
}

impl Serialize for BoundValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            BoundValue::Finite(x) => s.serialize_f64(*x),
            BoundValue::Divergent => s.serialize_str("divergent"),
        }
    }
}

impl<'de> Deserialize<'de> for BoundValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(BoundValue::Finite(x)),
            Raw::Text(t) if t == "divergent" => Ok(BoundValue::Divergent),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("expected a number or \"divergent\", got {t:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem: BoundKind,
    pub value: BoundValue,
    pub intermediates: BTreeMap<String, f64>,
    #[serde(default)]
    pub flags: Vec<String>,
}

impl BoundReport {
    /// Re-evaluates the bound from the inputs stored in the intermediates.
    pub fn recompute(&self) -> Result<BoundReport, BoundError> {
        let mut again = evaluate(self.theorem, &BoundInput::from_map(&self.intermediates))?;
        again.flags = self.flags.clone();
        Ok(again)
    }
}

struct Builder<'a> {
    input: &'a BoundInput,
    used: BTreeMap<String, f64>,
    flags: Vec<String>,
}

impl<'a> Builder<'a> {
    fn new(input: &'a BoundInput) -> Self {
        Builder { input, used: BTreeMap::new(), flags: Vec::new() }
    }

    fn opt(&mut self, name: &'static str) -> Option<f64> {
        let v = self.input.get(name)?;
        self.used.insert(name.to_owned(), v);
        Some(v)
    }

    fn req(&mut self, name: &'static str) -> Result<f64, BoundError> {
        let v = self.opt(name).ok_or(BoundError::Missing(name))?;
        if v.is_nan() {
            return Err(BoundError::Invalid { name, value: v, reason: "not a number" });
        }
        Ok(v)
    }

    fn nonneg(&mut self, name: &'static str) -> Result<f64, BoundError> {
        let v = self.req(name)?;
        if !(v >= 0.0 && v.is_finite()) {
            return Err(BoundError::Invalid { name, value: v, reason: "must be finite and nonnegative" });
        }
        Ok(v)
    }

    fn positive(&mut self, name: &'static str) -> Result<f64, BoundError> {
        let v = self.req(name)?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(BoundError::Invalid { name, value: v, reason: "must be finite and positive" });
        }
        Ok(v)
    }

    fn probability(&mut self, name: &'static str) -> Result<f64, BoundError> {
        let v = self.nonneg(name)?;
        if v > 1.0 {
            return Err(BoundError::Invalid { name, value: v, reason: "must lie in [0, 1]" });
        }
        Ok(v)
    }

    /// `|m_em - other|_+`, with `other` defaulting to zero for `power`.
    fn gap(&mut self, other: &'static str) -> Result<f64, BoundError> {
        let em = self.req("m_em")?;
        let sub = if other == "power" { self.opt(other).unwrap_or(0.0) } else { self.req(other)? };
        let gap = plus_part(em - sub);
        self.used.insert("gap".into(), gap);
        Ok(gap)
    }

    fn finish(mut self, theorem: BoundKind, value: BoundValue, terms: &[(&str, f64)]) -> BoundReport {
        for (name, v) in terms {
            self.used.insert((*name).to_owned(), *v);
        }
        BoundReport { theorem, value, intermediates: self.used, flags: self.flags }
    }
}

/// `leading - offset`, or divergence when the driving quantity is positive at zero error.
fn assemble(b: Builder<'_>, kind: BoundKind, drive: f64, error: f64, leading: impl Fn() -> f64, offset: f64) -> BoundReport {
    if error == 0.0 && drive > 0.0 {
        return b.finish(kind, BoundValue::Divergent, &[("offset", offset)]);
    }
    let lead = if drive > 0.0 { leading() } else { 0.0 };
    b.finish(kind, BoundValue::Finite(lead - offset), &[("leading", lead), ("offset", offset)])
}

fn check_k(b: &mut Builder<'_>, gap: f64) -> Result<f64, BoundError> {
    let k = b.nonneg("k")?;
    if k == 0.0 && gap > 0.0 {
        return Err(BoundError::Invalid { name: "k", value: k, reason: "must be positive when the gap is positive" });
    }
    Ok(k)
}

/// Hoelder-exponent form shared by the irreversibility, failure-probability and conversion bounds.
fn general_form(mut b: Builder<'_>, kind: BoundKind, gap: f64, error: f64) -> Result<BoundReport, BoundError> {
    let k = check_k(&mut b, gap)?;
    let a = b.req("a")?;
    let bexp = b.positive("b")?;
    let c_max = b.nonneg("c_max")?;
    let fe = f(error);
    if a.is_infinite() {
        let ap = b.nonneg("a_prime")?;
        let s = ap + bexp;
        let offset = gap * (1.0 + 1.0 / s) + c_max;
        let lead = move || gap / s * (gap / (k * fe.powf(bexp) * s)).ln();
        return Ok(assemble(b, kind, gap, error, lead, offset));
    }
    let s = a + bexp;
    if s <= 1.0 {
        return Err(BoundError::Exponents(a, bexp));
    }
    let offset = gap + c_max;
    let lead = move || g(a, bexp) * gap.powf(s / (s - 1.0)) / (k * fe.powf(bexp)).powf(1.0 / (s - 1.0));
    Ok(assemble(b, kind, gap, error, lead, offset))
}

/// Unit-exponent form `gap^2 / (16 K e) - c_max - gap - gap^2 / (64 K)`.
fn simplified_form(mut b: Builder<'_>, kind: BoundKind, gap: f64, error: f64) -> Result<BoundReport, BoundError> {
    let k = check_k(&mut b, gap)?;
    let c_max = b.nonneg("c_max")?;
    let offset = c_max + gap + if gap > 0.0 { gap * gap / (64.0 * k) } else { 0.0 };
    Ok(assemble(b, kind, gap, error, move || gap * gap / (16.0 * k * error), offset))
}

/// Unit exponents use the simplified form; anything else falls back to the general one.
fn simplified_or_general(mut b: Builder<'_>, kind: BoundKind, gap: f64, error: f64) -> Result<BoundReport, BoundError> {
    let a = b.opt("a").unwrap_or(1.0);
    let bexp = b.opt("b").unwrap_or(1.0);
    if a == 1.0 && bexp == 1.0 {
        simplified_form(b, kind, gap, error)
    } else {
        b.flags.push("general-form".into());
        general_form(b, kind, gap, error)
    }
}

/// Irreversibility error, or the approximation error when the channel is exactly reversible.
fn irreversibility_error(b: &mut Builder<'_>, gap: f64) -> Result<f64, BoundError> {
    let delta = b.opt("delta");
    match (delta, b.input.epsilon) {
        (Some(d), Some(_)) if d == 0.0 && gap > 0.0 => {
            b.flags.push("approximate-implementation".into());
            b.probability("epsilon")
        }
        (None, Some(_)) => {
            b.flags.push("approximate-implementation".into());
            b.probability("epsilon")
        }
        _ => b.probability("delta"),
    }
}

pub fn general_tradeoff_bound(input: &BoundInput) -> Result<BoundReport, BoundError> {
    let mut b = Builder::new(input);
    let gap = b.gap("m_cos")?;
    let e = irreversibility_error(&mut b, gap)?;
    general_form(b, BoundKind::General, gap, e)
}

pub fn simplified_tradeoff_bound(input: &BoundInput) -> Result<BoundReport, BoundError> {
    let mut b = Builder::new(input);
    let gap = b.gap("m_cos")?;
    let e = irreversibility_error(&mut b, gap)?;
    simplified_or_general(b, BoundKind::Simplified, gap, e)
}

pub fn failure_probability_bound(input: &BoundInput) -> Result<BoundReport, BoundError> {
    let mut b = Builder::new(input);
    let gap = b.gap("power")?;
    let e = b.probability("p_fail")?.sqrt();
    simplified_or_general(b, BoundKind::FailureProbability, gap, e)
}

pub fn conversion_bound(input: &BoundInput) -> Result<BoundReport, BoundError> {
    let mut b = Builder::new(input);
    let gap = b.gap("m_cos")?;
    let e = b.probability("epsilon")?;
    simplified_or_general(b, BoundKind::Conversion, gap, e)
}

fn spreads(b: &mut Builder<'_>) -> Result<(f64, f64), BoundError> {
    let s_in = b.nonneg("spread_in")?;
    let s_out = b.nonneg("spread_out")?;
    if s_in + s_out <= 0.0 {
        return Err(BoundError::Invalid { name: "spread_in", value: s_in, reason: "total spread must be positive" });
    }
    Ok((s_in, s_out))
}

/// `C^2 / (2 (spread_in + spread_out) f(delta)) - C`.
pub fn energy_irrev_bound(input: &BoundInput) -> Result<BoundReport, BoundError> {
    let mut b = Builder::new(input);
    let c = b.nonneg("c_quantity")?;
    let (s_in, s_out) = spreads(&mut b)?;
    let d = b.probability("delta")?;
    Ok(assemble(b, BoundKind::EnergyIrreversibility, c, d, || c * c / (2.0 * (s_in + s_out) * f(d)), c))
}

/// `C^2 / (8 (spread_in + spread_out) eps) - 2C - 3 spread_out eps`.
pub fn energy_error_bound(input: &BoundInput) -> Result<BoundReport, BoundError> {
    let mut b = Builder::new(input);
    let c = b.nonneg("c_quantity")?;
    let (s_in, s_out) = spreads(&mut b)?;
    let e = b.probability("epsilon")?;
    Ok(assemble(b, BoundKind::EnergyError, c, e, || c * c / (8.0 * (s_in + s_out) * e), 2.0 * c + 3.0 * s_out * e))
}

/// `max_k ||[P_k, H]||^2 / (2 spread eps) - 2 spread`.
pub fn proj_meas_energy_bound(input: &BoundInput) -> Result<BoundReport, BoundError> {
    let mut b = Builder::new(input);
    let comm = b.nonneg("commutator_norm")?;
    let s = b.positive("spread_in")?;
    let e = b.probability("epsilon")?;
    Ok(assemble(b, BoundKind::ProjectiveMeasurement, comm, e, || comm * comm / (2.0 * s * e), 2.0 * s))
}

/// `spread(H - V^dagger H V)^2 / (64 spread eps) - spread (2 + 3 eps)`.
pub fn unitary_energy_bound(input: &BoundInput) -> Result<BoundReport, BoundError> {
    let mut b = Builder::new(input);
    let gs = b.nonneg("generator_spread")?;
    let s = b.positive("spread_in")?;
    let e = b.probability("epsilon")?;
    Ok(assemble(b, BoundKind::UnitaryGate, gs, e, || gs * gs / (64.0 * s * e), s * (2.0 + 3.0 * e)))
}

/// `(1/beta) ln 2 + gap + gap^2 / (64 K)`.
fn athermality_offset(b: &mut Builder<'_>, gap: f64) -> Result<(f64, f64, f64), BoundError> {
    let k = check_k(b, gap)?;
    let beta = b.positive("beta")?;
    let offset = std::f64::consts::LN_2 / beta + gap + if gap > 0.0 { gap * gap / (64.0 * k) } else { 0.0 };
    Ok((k, beta, offset))
}

pub fn athermality_bound(input: &BoundInput) -> Result<BoundReport, BoundError> {
    let mut b = Builder::new(input);
    let gap = b.gap("m_cos")?;
    let (k, _, offset) = athermality_offset(&mut b, gap)?;
    let d = b.probability("delta")?;
    Ok(assemble(b, BoundKind::Athermality, gap, d, || gap * gap / (16.0 * k * d), offset))
}

pub fn athermality_error_bound(input: &BoundInput) -> Result<BoundReport, BoundError> {
    let mut b = Builder::new(input);
    let gap = b.gap("m_cos")?;
    let (k, _, offset) = athermality_offset(&mut b, gap)?;
    let e = b.probability("epsilon")?;
    Ok(assemble(b, BoundKind::AthermalityError, gap, e, || gap * gap / (16.0 * k * e), offset))
}

/// Work cost: the approximate athermality bound less one bit of free energy.
pub fn work_bound(input: &BoundInput) -> Result<BoundReport, BoundError> {
    let mut b = Builder::new(input);
    let gap = b.gap("m_cos")?;
    let (k, beta, offset) = athermality_offset(&mut b, gap)?;
    let e = b.probability("epsilon")?;
    let offset = offset + std::f64::consts::LN_2 / beta;
    Ok(assemble(b, BoundKind::Work, gap, e, || gap * gap / (16.0 * k * e), offset))
}

/// Lower estimate of the discrimination gain margin when erasing coherence between two levels:
/// `|E_j - E_j'| / 2 - (2/beta) ln 2`.
pub fn c_erase_gap_bound(input: &BoundInput) -> Result<BoundReport, BoundError> {
    let mut b = Builder::new(input);
    let lg = b.nonneg("level_gap")?;
    let beta = b.positive("beta")?;
    let v = 0.5 * lg - 2.0 * std::f64::consts::LN_2 / beta;
    Ok(b.finish(BoundKind::ErasureGap, BoundValue::Finite(v), &[]))
}

/// Probe resource needed by a free-unitary measurement of error `eps`:
/// `gap^2 / (16 K eps) - gap - c_max` with `gap = |m_em - power|_+`.
pub fn way_bound(input: &BoundInput) -> Result<BoundReport, BoundError> {
    let mut b = Builder::new(input);
    let gap = b.gap("power")?;
    let k = check_k(&mut b, gap)?;
    let c_max = b.nonneg("c_max")?;
    let e = b.probability("epsilon")?;
    Ok(assemble(b, BoundKind::Way, gap, e, || gap * gap / (16.0 * k * e), gap + c_max))
}

pub fn evaluate(kind: BoundKind, input: &BoundInput) -> Result<BoundReport, BoundError> {
    match kind {
        BoundKind::General => general_tradeoff_bound(input),
        BoundKind::Simplified => simplified_tradeoff_bound(input),
        BoundKind::FailureProbability => failure_probability_bound(input),
        BoundKind::Conversion => conversion_bound(input),
        BoundKind::EnergyIrreversibility => energy_irrev_bound(input),
        BoundKind::EnergyError => energy_error_bound(input),
        BoundKind::ProjectiveMeasurement => proj_meas_energy_bound(input),
        BoundKind::UnitaryGate => unitary_energy_bound(input),
        BoundKind::Athermality => athermality_bound(input),
        BoundKind::AthermalityError => athermality_error_bound(input),
        BoundKind::Work => work_bound(input),
        BoundKind::ErasureGap => c_erase_gap_bound(input),
        BoundKind::Way => way_bound(input),
    }
}

/// Evaluates a bound along a grid of its error parameter.
pub fn sweep(kind: BoundKind, input: &BoundInput, grid: &[f64]) -> Result<Vec<(f64, BoundReport)>, BoundError> {
    let name = kind.error_parameter().ok_or(BoundError::Missing("error parameter"))?;
    sweep_over(kind, input, name, grid)
}

/// Evaluates a bound along a grid of any named input.
pub fn sweep_over(kind: BoundKind, input: &BoundInput, name: &str, grid: &[f64]) -> Result<Vec<(f64, BoundReport)>, BoundError> {
    grid.iter()
        .map(|&e| {
            let mut inp = input.clone();
            if !inp.set(name, e) {
                return Err(BoundError::UnknownKind(name.to_owned()));
            }
            Ok((e, evaluate(kind, &inp)?))
        })
        .collect()
}

/// `max_k ||[P_k, H]||_op`.
pub fn projective_commutator_norm(pvm: &Povm, h: &Observable) -> f64 {
    pvm.effects().iter().map(|p| linalg::op_norm(&linalg::commutator(p, h.matrix()))).fold(0.0, f64::max)
}

/// Spectral spread of `H - V^dagger H V`.
pub fn unitary_generator_spread(v: &CMat, h: &Observable) -> f64 {
    linalg::spectral_spread(&(h.matrix() - v.adjoint() * h.matrix() * v))
}

/// Geometric grid from `hi` down to `lo` with `n` points.
pub fn log_grid(hi: f64, lo: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![hi];
    }
    let (lh, ll) = (hi.ln(), lo.ln());
    (0..n).map(|i| (lh + (ll - lh) * i as f64 / (n - 1) as f64).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::linalg::re;
    use crate::qcore::CompositeSpace;
    use proptest::prelude::*;

    fn unit(gap: f64, k: f64, delta: f64, c_max: f64) -> BoundInput {
        BoundInput {
            m_em: Some(gap),
            m_cos: Some(0.0),
            k: Some(k),
            a: Some(1.0),
            b: Some(1.0),
            c_max: Some(c_max),
            delta: Some(delta),
            ..Default::default()
        }
    }

    fn finite(r: &BoundReport) -> f64 {
        r.value.finite().expect("finite bound")
    }

    #[test]
    fn helper_values() {
        assert_eq!(f(0.0), 0.0);
        assert!((f(0.01) - 0.0401).abs() < 1e-15);
        assert!((g(1.0, 1.0) - 0.25).abs() < 1e-15);
        assert_eq!(plus_part(-3.0), 0.0);
    }

    #[test]
    fn unit_exponent_examples() {
        let inp = unit(1.0, 1.0, 0.01, 0.0);
        assert!((finite(&simplified_tradeoff_bound(&inp).unwrap()) - 5.234375).abs() < 1e-12);
        let want = 0.25 / 0.0401 - 1.0;
        assert!((finite(&general_tradeoff_bound(&inp).unwrap()) - want).abs() < 1e-12);
    }

    #[test]
    fn zero_gap_returns_minus_constant() {
        let inp = unit(0.0, 1.0, 0.01, 0.3);
        assert!((finite(&general_tradeoff_bound(&inp).unwrap()) + 0.3).abs() < 1e-15);
        assert!((finite(&simplified_tradeoff_bound(&inp).unwrap()) + 0.3).abs() < 1e-15);
        let zero_delta = unit(0.0, 1.0, 0.0, 0.3);
        assert_eq!(simplified_tradeoff_bound(&zero_delta).unwrap().value, BoundValue::Finite(-0.3));
    }

    #[test]
    fn divergence_at_zero_error() {
        let inp = unit(1.0, 1.0, 0.0, 0.0);
        assert!(simplified_tradeoff_bound(&inp).unwrap().value.is_divergent());
        assert!(general_tradeoff_bound(&inp).unwrap().value.is_divergent());
        let approx = inp.clone().with("epsilon", 0.01);
        let r = general_tradeoff_bound(&approx).unwrap();
        assert!(r.flags.contains(&"approximate-implementation".to_string()));
        assert!((finite(&r) - (0.25 / 0.0401 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn invalid_exponents_and_constants() {
        let mut inp = unit(1.0, 1.0, 0.1, 0.0);
        inp.a = Some(0.5);
        inp.b = Some(0.5);
        assert_eq!(general_tradeoff_bound(&inp).unwrap_err(), BoundError::Exponents(0.5, 0.5));
        let zero_k = unit(1.0, 0.0, 0.1, 0.0);
        assert!(general_tradeoff_bound(&zero_k).is_err());
        assert_eq!(general_tradeoff_bound(&BoundInput::default()).unwrap_err(), BoundError::Missing("m_em"));
    }

    #[test]
    fn failure_probability_matches_simplified_at_helstrom() {
        let delta: f64 = 0.05;
        let a = simplified_tradeoff_bound(&unit(0.7, 2.0, delta, 0.1)).unwrap();
        let mut inp = unit(0.7, 2.0, delta, 0.1);
        inp.delta = None;
        inp.m_cos = None;
        inp.power = Some(0.0);
        inp.p_fail = Some(delta * delta);
        let b = failure_probability_bound(&inp).unwrap();
        assert!((finite(&a) - finite(&b)).abs() < 1e-12);
    }

    #[test]
    fn energy_examples() {
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let inp = BoundInput {
            c_quantity: Some(c),
            spread_in: Some(1.0),
            spread_out: Some(1.0),
            epsilon: Some(0.01),
            ..Default::default()
        };
        let want = 0.5 / (16.0 * 0.01) - 2.0 * c - 0.03;
        assert!((finite(&energy_error_bound(&inp).unwrap()) - want).abs() < 1e-12);
        assert!((want - 1.680786).abs() < 1e-6);

        let pm = BoundInput { commutator_norm: Some(0.5), spread_in: Some(1.0), epsilon: Some(0.01), ..Default::default() };
        assert!((finite(&proj_meas_energy_bound(&pm).unwrap()) - 10.5).abs() < 1e-12);

        let ug = BoundInput {
            generator_spread: Some(2f64.sqrt()),
            spread_in: Some(1.0),
            epsilon: Some(0.01),
            ..Default::default()
        };
        assert!((finite(&unitary_energy_bound(&ug).unwrap()) - 1.095).abs() < 1e-12);
    }

    #[test]
    fn operator_helpers() {
        let h = Observable::diagonal(CompositeSpace::single(2), &[0.5, -0.5]).unwrap();
        let plus = CMat::from_element(2, 2, re(0.5));
        let pvm = Povm::new(vec![plus.clone(), linalg::identity(2) - plus]).unwrap();
        assert!((projective_commutator_norm(&pvm, &h) - 0.5).abs() < 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let had = CMat::from_row_slice(2, 2, &[re(s), re(s), re(s), re(-s)]);
        assert!((unitary_generator_spread(&had, &h) - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn athermality_work_and_erasure() {
        let inp = BoundInput {
            m_em: Some(1.0),
            m_cos: Some(0.2),
            k: Some(3.0),
            beta: Some(2.0),
            epsilon: Some(0.01),
            ..Default::default()
        };
        let a = finite(&athermality_error_bound(&inp).unwrap());
        let w = finite(&work_bound(&inp).unwrap());
        assert!((a - w - std::f64::consts::LN_2 / 2.0).abs() < 1e-15);
        let zero = BoundInput { m_em: Some(0.0), ..inp.clone() };
        assert!((finite(&athermality_error_bound(&zero).unwrap()) + std::f64::consts::LN_2 / 2.0).abs() < 1e-15);

        let e = BoundInput { level_gap: Some(4.0), beta: Some(1.0), ..Default::default() };
        assert!((finite(&c_erase_gap_bound(&e).unwrap()) - (2.0 - 2.0 * std::f64::consts::LN_2)).abs() < 1e-15);
        let t = BoundInput { level_gap: Some(4.0 * std::f64::consts::LN_2), beta: Some(1.0), ..Default::default() };
        assert!(finite(&c_erase_gap_bound(&t).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn way_coherence_example() {
        let l2 = std::f64::consts::LN_2;
        let inp = BoundInput { m_em: Some(l2), k: Some(2.0 * l2), c_max: Some(0.0), epsilon: Some(0.01), ..Default::default() };
        let v = finite(&way_bound(&inp).unwrap());
        assert!((v - (l2 / 0.32 - l2)).abs() < 1e-12);
        assert!((v - 1.47293).abs() < 1e-5);
        let zero = BoundInput { m_em: Some(0.0), c_max: Some(0.4), ..inp };
        assert_eq!(way_bound(&zero).unwrap().value, BoundValue::Finite(-0.4));
    }

    #[test]
    fn exponential_branch_grows_as_error_shrinks() {
        let inp = BoundInput {
            m_em: Some(1.0),
            m_cos: Some(0.0),
            k: Some(2.0),
            a: Some(f64::INFINITY),
            a_prime: Some(std::f64::consts::LN_2),
            b: Some(1.0),
            c_max: Some(0.0),
            ..Default::default()
        };
        let grid = log_grid(0.5, 1e-8, 40);
        let values: Vec<f64> = sweep(BoundKind::General, &inp, &grid).unwrap().iter().map(|(_, r)| finite(r)).collect();
        assert!(values.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn inverse_error_scaling() {
        let inp = unit(0.8, 1.5, 1e-6, 0.2);
        let v = finite(&general_tradeoff_bound(&inp).unwrap());
        let limit = 0.64 / (16.0 * 1.5);
        assert!((v * 1e-6 / limit - 1.0).abs() < 0.01);
    }

    #[test]
    fn report_round_trip_and_recompute() {
        let r = simplified_tradeoff_bound(&unit(1.0, 1.0, 0.0, 0.0)).unwrap();
        let s = crate::qcore::json::to_string(&r);
        assert!(s.contains("\"divergent\""));
        let back: BoundReport = crate::qcore::json::from_str(&s).unwrap();
        assert_eq!(back, r);
        let f = general_tradeoff_bound(&unit(0.6, 1.1, 0.03, 0.1)).unwrap();
        assert_eq!(f.recompute().unwrap().value, f.value);
        for k in BoundKind::ALL {
            assert_eq!(k.id().parse::<BoundKind>().unwrap(), k);
        }
    }

    proptest! {
        #[test]
        fn simplified_never_exceeds_general(gap in 0.0f64..5.0, k in 0.01f64..10.0, delta in 0.0f64..1.0, c_max in 0.0f64..2.0) {
            let inp = unit(gap, k, delta, c_max);
            let s = simplified_tradeoff_bound(&inp).unwrap().value;
            let g = general_tradeoff_bound(&inp).unwrap().value;
            prop_assert!(s.le(g, 1e-12));
            prop_assert_eq!(s.is_divergent(), gap > 0.0 && delta == 0.0);
        }

        #[test]
        fn monotone_in_error_and_gap(gap in 0.01f64..3.0, k in 0.1f64..5.0, e1 in 1e-4f64..1.0, e2 in 1e-4f64..1.0) {
            let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
            for kind in [BoundKind::General, BoundKind::Simplified] {
                let a = finite(&evaluate(kind, &unit(gap, k, lo, 0.0)).unwrap());
                let b = finite(&evaluate(kind, &unit(gap, k, hi, 0.0)).unwrap());
                prop_assert!(a >= b - 1e-12);
            }
        }
    }
}
