use qlg_core::{LatticeConfig, MassDensityField};

use crate::{spatial_variance, ReferenceError};

/// Result of a diffusion-coefficient fit.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionFit {
    pub diffusion_coefficient: f64,
    /// Number of leading frames inside the pre-wrap regime that entered
    /// the fit.
    pub frames_used: usize,
    /// Spatial variance of each used frame, in order.
    pub variances: Vec<f64>,
}

/// Estimates the transport coefficient from a density trajectory as half
/// the least-squares slope of spatial variance versus time.
///
/// Only the leading frames whose spread keeps the distribution at least
/// four standard deviations away from its wraparound images
/// (`variance <= (L/8)^2`) are used; beyond that the pre-wrap growth law
/// `sigma^2 = sigma0^2 + 2 D t` no longer holds on the ring. At least
/// three such frames are required, and a flat (uniform) trajectory is
/// reported as unfittable.
pub fn fit_diffusion_coefficient(
    trajectory: &[MassDensityField],
    cfg: &LatticeConfig,
) -> Result<DiffusionFit, ReferenceError> {
    // A flat (uniform) field carries no spatial structure to track; its
    // nominal spatial variance is the geometric L^2/12 of the ring, not
    // a diffusion signal.
    let degenerate = trajectory.iter().all(|rho| {
        let scale = (rho.total_mass() / rho.len() as f64).max(1.0);
        rho.value_variance() <= 1e-20 * scale * scale
    });
    if !trajectory.is_empty() && degenerate {
        return Err(ReferenceError::Unfittable);
    }

    let wrap_bound = (cfg.length() / 8.0).powi(2);
    let mut variances = Vec::new();
    for rho in trajectory {
        let v = spatial_variance(rho, cfg)?;
        if v > wrap_bound {
            break;
        }
        variances.push(v);
    }
    if variances.len() < 3 {
        return Err(ReferenceError::TooFewFrames {
            needed: 3,
            found: variances.len(),
        });
    }
    let spread = variances.iter().cloned().fold(f64::MIN, f64::max)
        - variances.iter().cloned().fold(f64::MAX, f64::min);
    if spread <= 1e-12 {
        return Err(ReferenceError::Unfittable);
    }

    // Least squares of variance against time t_i = i * dt; a shift of the
    // time origin does not change the slope, so trajectory slices fit the
    // same coefficient as full trajectories.
    let n = variances.len() as f64;
    let mean_t = (variances.len() - 1) as f64 / 2.0 * cfg.dt();
    let mean_v = variances.iter().sum::<f64>() / n;
    let (mut num, mut den) = (0.0f64, 0.0f64);
    for (i, &v) in variances.iter().enumerate() {
        let dt = i as f64 * cfg.dt() - mean_t;
        num += dt * (v - mean_v);
        den += dt * dt;
    }
    Ok(DiffusionFit {
        diffusion_coefficient: num / den / 2.0,
        frames_used: variances.len(),
        variances,
    })
}
