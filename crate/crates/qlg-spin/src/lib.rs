//! NMR-tier physics for the lattice-gas experiment: a heteronuclear
//! two-spin system under internal, RF, and gradient Hamiltonians.
//!
//! The crate covers the full experimental chain. Collision and swap
//! gates are compiled into RF pulses and coupling delays and evaluated
//! either with instantaneous rotations or at finite RF power. Mass
//! densities are written onto sample slices with shaped pulses under a
//! field gradient, read back by band-integrating the signal acquired in
//! a weak gradient, and streamed by frequency-shifting the next encode
//! pulse. `simulate_experiment` chains everything into a multi-step run
//! with selectable error switches.
//!
//! Conventions: basis order `(|00>, |01>, |10>, |11>)`, spin 1
//! (hydrogen) in the left slot; `sigma_z |0> = +|0>` so the number
//! operator is `n = (1 - sigma_z)/2` and occupations map to
//! magnetization as `f = (1 - <sigma_z>)/2`. All simulation happens in
//! the doubly rotating frame; RF pulses act on their own spin only.

pub mod algebra;
mod decouple;
mod density;
mod error;
mod experiment;
mod gates;
mod hamiltonian;
mod pulse;
mod readout;
mod sequence;
mod shaped;
mod slices;
mod states;
mod system;

pub use decouple::{decoupled_encode, Decoupling};
pub use density::DensityMatrix;
pub use error::SpinError;
pub use experiment::{
    simulate_experiment, EncodingModel, ErrorSwitches, ExperimentConfig, ExperimentRun,
    ReadoutModel, StepDiagnostics,
};
pub use gates::{compile_collision, compile_swap, gate_fidelity};
pub use hamiltonian::{internal_hamiltonian, internal_hamiltonian_with_offsets};
pub use pulse::{PulseEvent, PulseSequence, RfTone, Spin};
pub use readout::gradient_readout;
pub use sequence::{propagate, sequence_unitary, sequence_unitary_ideal, RotationModel};
pub use shaped::{
    design_profile_pulse, design_scaled_pulse, excitation_profile, first_order_profile,
    shaped_encode, stream_by_frequency_shift, EncodeOutcome, ShapedPulse,
};
pub use slices::{SliceLattice, GAMMA_BAR_H_HZ_PER_T};
pub use states::{deviation, equalized_state, epsilon_prime, pseudo_pure_state, thermal_state};
pub use system::SpinSystem;

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;

/// Absolute tolerance for linear-algebra identities.
pub const ALGEBRA_TOL: f64 = 1e-12;
