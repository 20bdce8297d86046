//! Finite-dimensional states, observables and information quantities.

pub mod info;
pub mod json;
pub mod linalg;
pub mod optim;
pub mod random;
mod state;

pub use info::{
    binary_entropy, fidelity, nats_to_bits, purified_distance, rel_entropy, trace_distance, vn_entropy,
};
pub use linalg::{CMat, CVec};
pub use state::{Observable, State};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Numerical tolerances used by validation and support checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub herm: f64,
    pub trace: f64,
    pub psd: f64,
    pub supp: f64,
    pub cptp: f64,
    pub orth: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { herm: 1e-9, trace: 1e-9, psd: 1e-10, supp: 1e-12, cptp: 1e-9, orth: 1e-9 }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QError {
    #[error("matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("trace is {0}, expected 1")]
    BadTrace(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid tensor factor index {0}")]
    BadFactor(usize),
    #[error("space must have at least one factor of dimension >= 1")]
    EmptySpace,
    #[error("vector has zero norm")]
    ZeroVector,
    #[error("malformed input: {0}")]
    Malformed(String),
}

/// Ordered list of tensor factor dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CompositeSpace {
    pub factor_dims: Vec<usize>,
}

impl CompositeSpace {
    pub fn new(factor_dims: Vec<usize>) -> Result<Self, QError> {
        if factor_dims.is_empty() || factor_dims.iter().any(|&d| d == 0) {
            return Err(QError::EmptySpace);
        }
        Ok(CompositeSpace { factor_dims })
    }

    pub fn single(d: usize) -> Self {
        assert!(d > 0, "dimension must be positive");
        CompositeSpace { factor_dims: vec![d] }
    }

    pub fn qubits(n: usize) -> Self {
        CompositeSpace { factor_dims: vec![2; n.max(1)] }
    }

    pub fn dim(&self) -> usize {
        self.factor_dims.iter().product()
    }

    pub fn n_factors(&self) -> usize {
        self.factor_dims.len()
    }

    pub fn tensor(&self, other: &CompositeSpace) -> CompositeSpace {
        let mut f = self.factor_dims.clone();
        f.extend_from_slice(&other.factor_dims);
        CompositeSpace { factor_dims: f }
    }

    /// Subspace formed by the listed factors, in ascending order.
    pub fn subspace(&self, keep: &[usize]) -> Result<CompositeSpace, QError> {
        let mut k = keep.to_vec();
        k.sort_unstable();
        k.dedup();
        if let Some(&bad) = k.iter().find(|&&i| i >= self.factor_dims.len()) {
            return Err(QError::BadFactor(bad));
        }
        if k.is_empty() {
            return Ok(CompositeSpace::single(1));
        }
        Ok(CompositeSpace { factor_dims: k.iter().map(|&i| self.factor_dims[i]).collect() })
    }
}

pub(crate) fn check_square(m: &CMat, d: usize) -> Result<(), QError> {
    if m.nrows() != d || m.ncols() != d {
        return Err(QError::DimensionMismatch { expected: d, found: m.nrows().max(m.ncols()) });
    }
    Ok(())
}

/// Tensor product of two states.
pub fn tensor(a: &State, b: &State) -> State {
    a.tensor(b)
}

/// Partial trace keeping the listed factors.
pub fn partial_trace(s: &State, keep: &[usize]) -> Result<State, QError> {
    s.partial_trace(keep)
}

/// Spread (max minus min eigenvalue) of an observable.
pub fn spread(h: &Observable) -> f64 {
    h.spread()
}

pub fn expectation(s: &State, h: &Observable) -> f64 {
    h.expectation(s)
}

pub fn variance(s: &State, h: &Observable) -> f64 {
    h.variance(s)
}
