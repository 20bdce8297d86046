//! Quantum channels: Kraus representation, unitary dilations and measurement channels.

mod dilation;
mod distance;
mod json;
mod kraus;
mod measure;

pub use dilation::{channel_from_implementation, stinespring, Implementation};
pub use distance::{channel_purified_distance, output_distance, ChannelDistance, DistanceOptions};
pub use json::{ChannelJson, ImplementationJson};
pub use kraus::{dephase, Channel, CptpReport};
pub use measure::{
    measurement_channel_povm, measurement_channel_pvm, readout_channel, readout_channel_register, Povm, Register,
};

use thiserror::Error;

use crate::qcore::QError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("channel has no Kraus operators")]
    NoKraus,
    #[error("Kraus operator has shape {found:?}, expected {expected:?}")]
    KrausShape { expected: (usize, usize), found: (usize, usize) },
    #[error("map is not trace preserving (defect {0:e})")]
    NotTracePreserving(f64),
    #[error("map is not completely positive (min Choi eigenvalue {0:e})")]
    NotCompletelyPositive(f64),
    #[error("operator is not unitary (defect {0:e})")]
    NotUnitary(f64),
    #[error("input or output space does not match")]
    SpaceMismatch,
    #[error("invalid measurement: {0}")]
    InvalidEffect(String),
    #[error("{0}")]
    Malformed(String),
    #[error(transparent)]
    State(#[from] QError),
}
