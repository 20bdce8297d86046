//! Worked examples as self-verifying builders. Each returns a report holding named checks,
//! the bounds it feeds and optional error sweeps.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{self, BoundError, BoundInput, BoundKind, BoundReport, BoundValue};
use crate::channels::ChannelError;
use crate::discrimination::DiscriminationError;
use crate::qcore::linalg::{self, c64, re, CMat, CVec};
use crate::channels::{Implementation, Povm, Register};
use crate::qcore::{CompositeSpace, QError, State};
use crate::resources::ResourceError;

mod energy;
mod qfi;
mod rni;
mod thermal;
mod way;

pub use energy::{gibbs_preserving_diverging, hadamard_gate, rni_energy, spin_measurement, spin_x_measurement, unitary_gate};
pub use qfi::{qfi_divergence, QfiSums};
pub use rni::{rni_coherence, rni_magic, t_state, REFERENCE_T_MAGIC_BITS};
pub use thermal::{coherence_erasure, erasure_gain_closed_form, ErasureParams};
pub use way::{way_qubit_swap_instance, way_scenario, WayParams};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Resource(#[from] ResourceError),
    #[error(transparent)]
    Discrimination(#[from] DiscriminationError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    State(#[from] QError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `|value - target| <= tolerance`.
    Eq,
    /// `value <= target + tolerance`.
    Le,
    /// `value >= target - tolerance`.
    Ge,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub target: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl Check {
    pub fn new(name: &str, value: f64, relation: Relation, target: f64, tolerance: f64) -> Self {
        let pass = match relation {
            Relation::Eq => (value - target).abs() <= tolerance,
            Relation::Le => value <= target + tolerance,
            Relation::Ge => value >= target - tolerance,
        };
        Check { name: name.to_owned(), value, target, tolerance, relation, pass }
    }

    pub fn eq(name: &str, value: f64, target: f64, tolerance: f64) -> Self {
        Check::new(name, value, Relation::Eq, target, tolerance)
    }

    pub fn le(name: &str, value: f64, target: f64, tolerance: f64) -> Self {
        Check::new(name, value, Relation::Le, target, tolerance)
    }

    pub fn ge(name: &str, value: f64, target: f64, tolerance: f64) -> Self {
        Check::new(name, value, Relation::Ge, target, tolerance)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub bound: BoundValue,
    pub flag: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub bound: BoundKind,
    /// Input that varies along the rows.
    pub parameter: String,
    /// Fixed inputs; the swept entry holds the value the scenario was built at.
    pub input: BoundInput,
    pub rows: Vec<SweepRow>,
}

impl Sweep {
    /// Evaluates `kind` along `grid` in the order given.
    pub fn over(kind: BoundKind, input: &BoundInput, parameter: &str, grid: &[f64]) -> Result<Self, BoundError> {
        let reports = bounds::sweep_over(kind, input, parameter, grid)?;
        Ok(Sweep { parameter: parameter.to_owned(), input: input.clone(), ..Sweep::from_reports(kind, reports) })
    }

    /// The same bound and fixed inputs on another grid.
    pub fn resample(&self, grid: &[f64]) -> Result<Self, BoundError> {
        Sweep::over(self.bound, &self.input, &self.parameter, grid)
    }

    pub fn from_reports(bound: BoundKind, reports: Vec<(f64, BoundReport)>) -> Self {
        let rows = reports
            .into_iter()
            .map(|(e, r)| {
                let flag = match r.value {
                    BoundValue::Divergent => "divergent",
                    BoundValue::Finite(x) if x <= 0.0 => "vacuous",
                    BoundValue::Finite(_) => "finite",
                };
                SweepRow { epsilon: e, bound: r.value, flag: flag.to_owned() }
            })
            .collect();
        let parameter = bound.error_parameter().unwrap_or("epsilon").to_owned();
        Sweep { bound, parameter, input: BoundInput::default(), rows }
    }

    /// `epsilon,bound,flag` rows; numbers in shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epsilon,bound,flag\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.epsilon, r.bound, r.flag));
        }
        out
    }

    pub fn at(&self, epsilon: f64) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.epsilon == epsilon)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub id: String,
    pub parameters: BTreeMap<String, f64>,
    /// Informational quantities that are not pass/fail checks.
    pub values: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub bounds: Vec<BoundReport>,
    pub sweeps: Vec<Sweep>,
    pub notes: Vec<String>,
}

impl ScenarioReport {
    pub(crate) fn new(id: &str) -> Self {
        ScenarioReport {
            id: id.to_owned(),
            parameters: BTreeMap::new(),
            values: BTreeMap::new(),
            checks: Vec::new(),
            bounds: Vec::new(),
            sweeps: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub(crate) fn param(&mut self, name: &str, v: f64) {
        self.parameters.insert(name.to_owned(), v);
    }

    pub(crate) fn value(&mut self, name: &str, v: f64) {
        self.values.insert(name.to_owned(), v);
    }

    pub(crate) fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub(crate) fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub(crate) fn sweep(&mut self, kind: BoundKind, input: &BoundInput, name: &str, grid: &[f64]) -> Result<(), ScenarioError> {
        self.sweeps.push(Sweep::over(kind, input, name, grid)?);
        Ok(())
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn find_check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn find_bound(&self, kind: BoundKind) -> Option<&BoundReport> {
        self.bounds.iter().find(|b| b.theorem == kind)
    }

    pub fn find_sweep(&self, kind: BoundKind) -> Option<&Sweep> {
        self.sweeps.iter().find(|s| s.bound == kind)
    }
}

/// `{1, 2, 5} x 10^-k` from `1e-6` up to 0.5 in ascending order, parsed from decimal literals
/// so grid points are exact.
pub fn default_grid() -> Vec<f64> {
    let mut out = Vec::new();
    for k in (1..=6).rev() {
        for m in [1, 2, 5] {
            if k == 6 && m != 1 {
                continue;
            }
            out.push(format!("{m}e-{k}").parse().expect("literal"));
        }
    }
    out
}

/// Epsilon at which scaled sweeps are compared with their leading coefficient.
pub const SCALING_EPSILON: f64 = 1e-5;

pub(crate) fn ket(d: usize, i: usize) -> CVec {
    linalg::ket(d, i)
}

pub(crate) fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[re(0.0), re(1.0), re(1.0), re(0.0)])
}

pub(crate) fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[re(1.0), re(0.0), re(0.0), re(-1.0)])
}

pub(crate) fn hadamard() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_row_slice(2, 2, &[re(s), re(s), re(s), re(-s)])
}

/// `(a +- b) / sqrt(2)`.
pub(crate) fn superpositions(a: &CVec, b: &CVec) -> (CVec, CVec) {
    let s = re(std::f64::consts::FRAC_1_SQRT_2);
    ((a + b) * s, (a - b) * s)
}

pub(crate) fn phase_ket(phase: f64) -> CVec {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CVec::from_vec(vec![re(s), c64(0.0, phase).exp() * re(s)])
}

/// Whether a matrix is a permutation matrix (entries 0 or 1, one per row and column).
pub(crate) fn is_permutation(u: &CMat, tol: f64) -> bool {
    let n = u.nrows();
    let entries_ok = u.iter().all(|z| z.norm() < tol || (z - re(1.0)).norm() < tol);
    let rows_ok = (0..n).all(|i| (0..n).filter(|&j| u[(i, j)].norm() > 0.5).count() == 1);
    let cols_ok = (0..n).all(|j| (0..n).filter(|&i| u[(i, j)].norm() > 0.5).count() == 1);
    entries_ok && rows_ok && cols_ok
}

/// `Q_0 (x) 1 (x) 1 + Q_1 (x) X (x) X` on `A (x) K (x) E`: with both ancillas in `|0>` and `E`
/// discarded this records a two-outcome projective measurement in `K` and dephases the rest.
pub(crate) fn recorded_measurement(q: &Povm) -> CMat {
    let xx = linalg::kron(&pauli_x(), &pauli_x());
    linalg::kron(&q.effects()[0], &linalg::identity(4)) + linalg::kron(&q.effects()[1], &xx)
}

/// Dilation of `measurement_channel_pvm(q, space, reg)` through [`recorded_measurement`].
pub(crate) fn recorded_implementation(q: &Povm, space: &CompositeSpace, reg: &Register) -> Result<Implementation, ScenarioError> {
    let anc = State::basis(reg.space().tensor(&reg.space()), 0)?;
    let out = space.tensor(&reg.space()).tensor(&reg.space());
    Ok(Implementation::new(space.clone(), anc, recorded_measurement(q), out, vec![0, 1])?)
}

/// Controlled Z on two qubits.
pub(crate) fn cz() -> CMat {
    let mut u = linalg::identity(4);
    u[(3, 3)] = re(-1.0);
    u
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_contains_exact_points() {
        let g = default_grid();
        assert_eq!(g.first(), Some(&1e-6));
        assert!(g.contains(&SCALING_EPSILON));
        assert_eq!(g.last(), Some(&0.5));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn check_relations() {
        assert!(Check::eq("a", 1.0, 1.0 + 1e-12, 1e-10).pass);
        assert!(!Check::le("b", 1.1, 1.0, 1e-3).pass);
        assert!(Check::ge("c", 0.9999, 1.0, 1e-3).pass);
        assert!(!Check::eq("nan", f64::NAN, 0.0, 1.0).pass);
    }

    #[test]
    fn csv_uses_round_trip_numbers() {
        let inp = BoundInput { commutator_norm: Some(0.5), spread_in: Some(1.0), ..Default::default() };
        let reps = bounds::sweep_over(BoundKind::ProjectiveMeasurement, &inp, "epsilon", &[0.01, 0.0]).unwrap();
        let s = Sweep::from_reports(BoundKind::ProjectiveMeasurement, reps);
        assert_eq!(s.to_csv(), "epsilon,bound,flag\n0.01,10.5,finite\n0,divergent,divergent\n");
    }

    #[test]
    fn permutation_detection() {
        assert!(is_permutation(&cz().map(|z| re(z.norm())), 1e-12));
        let comp = Povm::new(vec![linalg::outer(&ket(2, 0)), linalg::outer(&ket(2, 1))]).unwrap();
        assert!(is_permutation(&recorded_measurement(&comp), 1e-12));
        assert!(!is_permutation(&hadamard(), 1e-12));
    }
}
