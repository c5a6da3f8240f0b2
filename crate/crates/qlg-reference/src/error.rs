use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReferenceError {
    #[error("field lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("diffusion coefficient and time must be nonnegative (D={diffusion_coefficient}, t={time})")]
    NegativeInput { diffusion_coefficient: f64, time: f64 },

    #[error("continuum parameters must be positive (D={diffusion_coefficient}, L={period})")]
    InvalidParams { diffusion_coefficient: f64, period: f64 },

    #[error("invalid initial profile: {0}")]
    InvalidProfile(String),

    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),

    #[error("need at least {needed} frames inside the pre-wrap regime, found {found}")]
    TooFewFrames { needed: usize, found: usize },

    #[error("trajectory carries no spatial spread to fit (uniform or empty field)")]
    Unfittable,

    #[error("lattice error: {0}")]
    Lattice(#[from] qlg_core::LatticeError),
}
