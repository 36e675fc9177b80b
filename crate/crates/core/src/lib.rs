//! Time-dependent conserved operators for a charged particle in constant
//! fields.
//!
//! The crate covers two autonomous systems: a particle in a constant electric
//! field along `x`, and the same particle with a parallel magnetic field in the
//! gauge `A = B(0, 0, y)`. It provides
//!
//! * exact symbolic algebra over the canonical generators ([`algebra`]), used to
//!   prove that `p_x - qEt`, `i hbar d/dt`, `p_y - m wc z` and `p_z` are conserved,
//! * closed-form solutions and their degeneracy ladders ([`analytic`]),
//! * grid operators and independent time propagators ([`grid`], [`propagator`]),
//! * the symmetry unitaries and the resistance-quantization report ([`symmetry`]),
//! * probability currents and the Ehrenfest/Newton checks ([`observables`]).
//!
//! The `conserved-ops` binary wraps all of it behind a small CLI.

pub mod algebra;
pub mod analytic;
pub mod config;
pub mod constants;
mod error;
pub mod grid;
pub mod observables;
pub mod output;
pub mod propagator;
pub mod symmetry;
pub mod verify;

pub use config::{build_config, SystemConfig};
pub use error::{Error, Result};
pub use num_complex::Complex64;
