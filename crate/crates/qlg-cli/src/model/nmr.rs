use qlg_spin::simulate_experiment;

use crate::model::{EvolutionModel, ModelOutput, RunRequest};
use crate::trajectory::Frame;
use crate::CliError;

/// Pulse-level simulation of the sliced two-spin sample with the error
/// switches from the `[nmr]` config section.
pub struct PulseLevelModel;

impl EvolutionModel for PulseLevelModel {
    fn name(&self) -> &'static str {
        "nmr"
    }

    fn describe(&self) -> &'static str {
        "two-spin pulse-level run: shaped encode, compiled gates, gradient readout"
    }

    fn evolve(&self, request: &RunRequest) -> Result<ModelOutput, CliError> {
        let experiment = request
            .config
            .nmr
            .experiment_config(request.lattice.n_sites())?;
        let run = simulate_experiment(&request.rho0, request.config.steps, &experiment)?;

        let frames: Vec<Frame> = run
            .trajectory
            .into_iter()
            .zip(run.pairs)
            .map(|(density, pairs)| Frame { density, pairs })
            .collect();
        Ok(ModelOutput {
            frames,
            encode_errors: Some(run.diagnostics.iter().map(|d| d.encode_error).collect()),
            annotations: vec![
                ("collision_fidelity".into(), run.collision_fidelity),
                ("swap_fidelity".into(), run.swap_fidelity),
            ],
        })
    }
}
