//! Ideal-tier quantum lattice-gas (QLG) solver for the 1-D diffusion
//! equation on a periodic lattice of two-qubit nodes.
//!
//! Each lattice site holds two occupation probabilities `(f1, f2)` for
//! upward- and downward-moving particles. One time step encodes the pair
//! into a two-qubit state, applies an on-site collision unitary (the
//! square-root-of-SWAP by default), measures the occupations back out,
//! and streams them to the nearest neighbours in opposite directions.
//! The macroscopic density `rho = f1 + f2` then evolves by nearest
//! neighbour averaging, i.e. diffusively.
//!
//! Sites never entangle with each other; all inter-site communication is
//! classical streaming. Site updates are embarrassingly parallel and the
//! implementation evaluates them with `rayon` between streaming barriers.

mod collision;
mod config;
mod error;
mod evolve;
mod node;
mod occupation;

pub use collision::CollisionOperator;
pub use config::{Boundary, LatticeConfig};
pub use error::LatticeError;
pub use evolve::{equilibrium_pairs, run, run_frames, step, stream, Frame};
pub use node::NodeState;
pub use occupation::{MassDensityField, OccupationPair};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;

/// Absolute tolerance for linear-algebra identities (normalization,
/// unitarity, measured occupations).
pub const ALGEBRA_TOL: f64 = 1e-12;

/// Absolute tolerance for quantities accumulated over a whole run, such
/// as total-mass drift.
pub const RUN_TOL: f64 = 1e-10;
