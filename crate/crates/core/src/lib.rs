//! Honeycomb Lorentz lattice gas with flipping rotators and mirrors.
//!
//! The crate is `no_std` and only needs `alloc`. Sites live on an exact
//! integer chart, configurations are an immutable background pattern plus a
//! sparse override map, and every analysis works on recorded trajectories.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod blocking;
pub mod config;
pub mod cycles;
pub mod dynamics;
mod error;
pub mod golden;
pub mod hexclass;
pub mod lattice;
pub mod localtraj;
pub mod stats;

pub use config::{Configuration, Orientation, Pattern};
pub use dynamics::{InitialCondition, ParticleState, SystemKind, Trajectory};
pub use error::{Error, Result};
pub use lattice::{Direction, HexId, Site, Sublattice};
