//! Run harness for the lattice-gas diffusion models: configuration
//! parsing, the model registry, trajectory files, manifests, and
//! comparison reports. The `qlg` binary is a thin wrapper over this
//! library.

pub mod config;
pub mod error;
pub mod manifest;
pub mod model;
pub mod report;
pub mod trajectory;

pub use config::{NmrSettings, ProfileSpec, RunConfig};
pub use error::CliError;
pub use manifest::RunManifest;
pub use model::{lookup_model, model_names, EvolutionModel, ModelOutput, RunRequest};
pub use trajectory::Trajectory;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "QLG_OUT_DIR";
