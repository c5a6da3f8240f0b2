use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qlg_core::{equilibrium_pairs, run_frames, stream, CollisionOperator, NodeState};

use crate::model::{EvolutionModel, ModelOutput, RunRequest};
use crate::trajectory::Frame;
use crate::CliError;

/// Exact two-qubit lattice update. With `shots` set in the config, the
/// intermediate measurement is sampled from a finite ensemble instead of
/// reading exact expectations.
pub struct IdealLattice;

impl EvolutionModel for IdealLattice {
    fn name(&self) -> &'static str {
        "ideal"
    }

    fn describe(&self) -> &'static str {
        "exact two-qubit lattice update (encode, collide, measure, stream)"
    }

    fn evolve(&self, request: &RunRequest) -> Result<ModelOutput, CliError> {
        let collision = CollisionOperator::sqrt_swap();
        let steps = request.config.steps;

        let frames = match request.config.shots {
            None => run_frames(&request.rho0, steps, &collision, &request.lattice)?
                .into_iter()
                .map(|f| Frame {
                    density: f.density,
                    pairs: f.pairs,
                })
                .collect(),
            Some(shots) => {
                if shots == 0 {
                    return Err(CliError::validation("shots must be at least 1"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(request.config.seed);
                let mut frames = vec![Frame::equilibrium(request.rho0.clone())?];
                for _ in 0..steps {
                    let current = frames.last().expect("initial frame exists");
                    let pairs = equilibrium_pairs(&current.density)?;
                    // Collide with sampled measurement, then stream.
                    let sampled: Vec<_> = pairs
                        .iter()
                        .map(|&p| {
                            collision
                                .apply(&NodeState::encode(p))
                                .sampled_occupations(shots, &mut rng)
                        })
                        .collect();
                    let streamed = stream(&sampled, &request.lattice)?;
                    frames.push(Frame::from_pairs(streamed)?);
                }
                frames
            }
        };
        Ok(ModelOutput::bare(frames))
    }
}
