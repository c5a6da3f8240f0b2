use qlg_reference::classical_average_step;

use crate::model::{EvolutionModel, ModelOutput, RunRequest};
use crate::trajectory::Frame;
use crate::CliError;

/// Classical reference dynamics: iterated nearest-neighbour averaging.
pub struct AveragingOracle;

impl EvolutionModel for AveragingOracle {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn describe(&self) -> &'static str {
        "classical nearest-neighbour averaging of the density"
    }

    fn evolve(&self, request: &RunRequest) -> Result<ModelOutput, CliError> {
        let mut frames = vec![Frame::equilibrium(request.rho0.clone())?];
        for _ in 0..request.config.steps {
            let next = classical_average_step(&frames.last().expect("nonempty").density);
            frames.push(Frame::equilibrium(next)?);
        }
        Ok(ModelOutput::bare(frames))
    }
}
