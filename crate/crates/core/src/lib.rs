//! Quantum resource/irreversibility trade-off toolkit.
//!
//! Modules build on each other bottom-up: [`qcore`] (states and information quantities),
//! [`channels`] (Kraus channels, dilations, measurements), [`discrimination`]
//! (Helstrom and recovery errors), [`resources`] (resource measures and their
//! continuity constants), [`bounds`] (closed-form lower bounds) and [`scenarios`]
//! (worked constructions producing reports).

pub mod bounds;
pub mod channels;
pub mod discrimination;
pub mod qcore;
pub mod resources;
pub mod scenarios;
pub mod selftest;

pub use qcore::{CompositeSpace, Observable, State, Tolerances};
