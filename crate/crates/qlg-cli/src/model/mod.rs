//! Evolution-model registry. Every way of producing a density
//! trajectory — the exact lattice update, the classical averaging
//! oracle, the closed-form continuum solution, and the pulse-level
//! simulation — sits behind one trait and is picked by name at run
//! time.

mod analytic;
mod ideal;
mod nmr;
mod oracle;

use once_cell::sync::Lazy;

use qlg_core::{LatticeConfig, MassDensityField};

use crate::trajectory::Frame;
use crate::{CliError, RunConfig};

/// A strategy that evolves an initial density for a number of steps.
pub trait EvolutionModel: Send + Sync {
    /// Registry key, also the `mode` value in configs.
    fn name(&self) -> &'static str;

    /// One-line description for `--help`-style listings.
    fn describe(&self) -> &'static str;

    fn evolve(&self, request: &RunRequest) -> Result<ModelOutput, CliError>;
}

/// Everything a model needs for one run.
pub struct RunRequest<'a> {
    pub config: &'a RunConfig,
    pub lattice: LatticeConfig,
    pub rho0: MassDensityField,
}

impl<'a> RunRequest<'a> {
    pub fn from_config(config: &'a RunConfig) -> Result<Self, CliError> {
        Ok(Self {
            lattice: config.lattice_config()?,
            rho0: config.initial_density()?,
            config,
        })
    }
}

/// Trajectory plus whatever extra numbers the model wants recorded.
pub struct ModelOutput {
    pub frames: Vec<Frame>,
    /// Encode-accuracy per step, for models that encode physically.
    pub encode_errors: Option<Vec<f64>>,
    /// Named scalars for the manifest (gate fidelities and the like).
    pub annotations: Vec<(String, f64)>,
}

impl ModelOutput {
    pub fn bare(frames: Vec<Frame>) -> Self {
        Self {
            frames,
            encode_errors: None,
            annotations: Vec::new(),
        }
    }
}

static REGISTRY: Lazy<Vec<Box<dyn EvolutionModel>>> = Lazy::new(|| {
    vec![
        Box::new(ideal::IdealLattice),
        Box::new(oracle::AveragingOracle),
        Box::new(analytic::ContinuumModel),
        Box::new(nmr::PulseLevelModel),
    ]
});

/// Looks a model up by its registry key.
pub fn lookup_model(name: &str) -> Option<&'static dyn EvolutionModel> {
    REGISTRY
        .iter()
        .find(|m| m.name() == name)
        .map(|m| m.as_ref())
}

/// All registered model names, in registration order.
pub fn model_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|m| m.name()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_contains_all_four_models() {
        assert_eq!(model_names(), vec!["ideal", "oracle", "analytic", "nmr"]);
        for name in model_names() {
            let model = lookup_model(name).unwrap();
            assert_eq!(model.name(), name);
            assert!(!model.describe().is_empty());
        }
        assert!(lookup_model("montecarlo").is_none());
    }
}
