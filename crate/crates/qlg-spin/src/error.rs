use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpinError {
    #[error("spin system needs J > 0 and epsilon > 0 (J={j_hz} Hz, epsilon={epsilon})")]
    InvalidSystem { j_hz: f64, epsilon: f64 },

    #[error("matrix is not Hermitian (max |H - H^dagger| = {0:e})")]
    NonHermitian(f64),

    #[error("matrix is not unitary (max |U^dagger U - I| = {0:e})")]
    NonUnitary(f64),

    #[error("density matrix violates {what} by {deviation:e}")]
    InvalidState { what: &'static str, deviation: f64 },

    #[error("pulse event is invalid: {0}")]
    InvalidPulse(String),

    #[error("simultaneous RF tones address the same spin")]
    OverlappingTones,

    #[error("nutation rate must be positive, got {0} Hz")]
    NonPositiveNutation(f64),

    #[error("invalid slice lattice: {0}")]
    InvalidLattice(String),

    #[error("shaped pulse invalid: {0}")]
    InvalidShapedPulse(String),

    #[error("total flip angle {0} exceeds pi; the shaped-encoding model does not apply")]
    FlipAngleTooLarge(f64),

    #[error("expected one state per slice: {expected} slices, {found} states")]
    StateCount { expected: usize, found: usize },

    #[error("profile shift of {shift} sites exceeds the {n_slices}-slice lattice")]
    ShiftOutOfRange { shift: i64, n_slices: usize },

    #[error("experiment configuration invalid: {0}")]
    InvalidConfig(String),

    #[error("lattice error: {0}")]
    Lattice(#[from] qlg_core::LatticeError),
}
