use qlg_reference::{continuum_solution, ContinuumParams};

use crate::model::{EvolutionModel, ModelOutput, RunRequest};
use crate::trajectory::Frame;
use crate::CliError;

/// Closed-form diffusion on the ring, sampled at site centers, with the
/// transport coefficient the lattice update converges to.
pub struct ContinuumModel;

impl EvolutionModel for ContinuumModel {
    fn name(&self) -> &'static str {
        "analytic"
    }

    fn describe(&self) -> &'static str {
        "periodic heat-kernel solution at the lattice transport coefficient"
    }

    fn evolve(&self, request: &RunRequest) -> Result<ModelOutput, CliError> {
        let profile = request.config.analytic_profile()?;
        let cfg = &request.lattice;
        let params = ContinuumParams::new(cfg.diffusion_coefficient(), cfg.length())?;
        let mut frames = Vec::with_capacity(request.config.steps + 1);
        for k in 0..=request.config.steps {
            let t = k as f64 * cfg.dt();
            let rho = continuum_solution(&profile, t, &params, cfg.n_sites())?;
            frames.push(Frame::equilibrium(rho)?);
        }
        Ok(ModelOutput::bare(frames))
    }
}
