//! Run manifest: configuration echo, per-step mass totals and reference
//! errors, model annotations, timing, and the crate version. Everything
//! except the wall-clock timing is reproducible byte for byte.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::model::ModelOutput;
use crate::trajectory::Trajectory;
use crate::{CliError, RunConfig};

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub version: String,
    pub mode: String,
    pub steps: usize,
    pub n_sites: usize,
    pub seed: u64,
    /// Wall-clock duration of the model evaluation; the only field that
    /// varies between identical runs.
    pub elapsed_seconds: f64,
    pub annotations: BTreeMap<String, f64>,
    pub step_records: Vec<StepRecord>,
    pub config: RunConfig,
}

#[derive(Debug, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub total_mass: f64,
    /// Per-reference root-mean-square density error at this step.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub rms: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub encode_error: Option<f64>,
}

impl RunManifest {
    pub fn build(
        config: &RunConfig,
        mode: &str,
        output: &ModelOutput,
        references: &BTreeMap<String, Trajectory>,
        elapsed_seconds: f64,
    ) -> Self {
        let step_records = output
            .frames
            .iter()
            .enumerate()
            .map(|(step, frame)| {
                let mut rms = BTreeMap::new();
                for (name, reference) in references {
                    if let Some(ref_frame) = reference.frames.get(step) {
                        rms.insert(
                            name.clone(),
                            Trajectory::rms_between(&frame.density, &ref_frame.density),
                        );
                    }
                }
                let encode_error = output
                    .encode_errors
                    .as_ref()
                    .and_then(|errors| step.checked_sub(1).and_then(|i| errors.get(i)))
                    .copied();
                StepRecord {
                    step,
                    total_mass: frame.density.total_mass(),
                    rms,
                    encode_error,
                }
            })
            .collect();

        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            mode: mode.to_string(),
            steps: config.steps,
            n_sites: config.lattice.n_sites,
            seed: config.seed,
            elapsed_seconds,
            annotations: output
                .annotations
                .iter()
                .cloned()
                .collect(),
            step_records,
            config: config.clone(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let text = toml::to_string_pretty(self)
            .map_err(|err| CliError::validation(format!("cannot serialize manifest: {err}")))?;
        std::fs::write(path, text)
            .map_err(|err| CliError::validation(format!("cannot write {}: {err}", path.display())))
    }
}
