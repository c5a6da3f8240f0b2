use thiserror::Error;

/// Errors raised by lattice construction and evolution.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("lattice needs at least 2 sites, got {0}")]
    TooFewSites(usize),

    #[error("lattice spacing and time step must be positive (dz={dz}, dt={dt})")]
    NonPositiveGrid { dz: f64, dt: f64 },

    #[error("occupation probability out of [0, 1]: f{index} = {value}")]
    OccupationOutOfRange { index: u8, value: f64 },

    #[error("site {site}: density {value} outside the encodable range [0, 2]")]
    DensityOutOfRange { site: usize, value: f64 },

    #[error("state vector norm deviates from 1 by {0:e}")]
    NotNormalized(f64),

    #[error("collision matrix is not unitary (max |U^H U - I| = {0:e})")]
    NotUnitary(f64),

    #[error("field length {found} does not match lattice size {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("field must not be empty")]
    EmptyField,
}
