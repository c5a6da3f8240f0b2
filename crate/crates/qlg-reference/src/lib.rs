//! Classical and analytic references for the lattice solver: the exact
//! neighbour-averaging oracle, the periodic heat kernel, spatial-variance
//! statistics on the ring, a transport-coefficient fit, and the
//! molecular-diffusion displacement bound.

mod continuum;
mod error;
mod fit;
mod oracle;
mod variance;

pub use continuum::{continuum_solution, ContinuumParams, InitialProfile};
pub use error::ReferenceError;
pub use fit::{fit_diffusion_coefficient, DiffusionFit};
pub use oracle::{classical_average_step, finite_difference_residual};
pub use variance::spatial_variance;

/// Root-mean-squared displacement `sqrt(2 D t)` of a particle diffusing
/// with coefficient `D` for a time `t`. Used to bound how far molecules
/// wander out of their lattice cell during one update.
pub fn rms_displacement(diffusion_coefficient: f64, time: f64) -> Result<f64, ReferenceError> {
    if diffusion_coefficient < 0.0 || time < 0.0 {
        return Err(ReferenceError::NegativeInput {
            diffusion_coefficient,
            time,
        });
    }
    Ok((2.0 * diffusion_coefficient * time).sqrt())
}
