//! Two two-level atoms in a leaky cavity whose mode is driven by white noise.
//!
//! The joint atom–cavity density matrix evolves under a Lindblad master
//! equation; the entanglement between the atoms is measured with the
//! Wootters concurrence of their reduced state. Parameter sweeps over the
//! noise intensity, cavity leakage and atomic decay show the entanglement
//! peaking at an intermediate noise level.
//!
//! Modules, bottom up:
//! - [`qops`]: dense operators, tensor products, partial traces, eigensystems
//! - [`model`]: configuration, Hamiltonians, dissipators, collective modes
//! - [`dynamics`]: right-hand side, RK4 integration, superoperator, steady state
//! - [`entanglement`]: spin flip and concurrence
//! - [`sweep`]: parameter grids and resonance summaries

pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod model;
pub mod qops;
pub mod sweep;

pub use error::{Error, Result};
