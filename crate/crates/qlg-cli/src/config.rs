//! Run configuration: a TOML file selecting the model, lattice, initial
//! profile, output locations, and (for the pulse-level model) the
//! spin-system numbers and error switches. All physics defaults live
//! here rather than in the model code.

use std::f64::consts::FRAC_PI_4;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use qlg_core::{LatticeConfig, MassDensityField};
use qlg_reference::{continuum_solution, ContinuumParams, InitialProfile};
use qlg_spin::{
    Decoupling, EncodingModel, ErrorSwitches, ExperimentConfig, ReadoutModel, RotationModel,
    SliceLattice, SpinSystem,
};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Model name: one of the registered strategies
    /// (`ideal`, `oracle`, `analytic`, `nmr`).
    pub mode: String,
    pub steps: usize,
    /// Seed for optional sampled measurement; echoed into the manifest.
    #[serde(default)]
    pub seed: u64,
    /// When set, the ideal model draws this many measurement shots per
    /// site instead of using exact expectations.
    #[serde(default)]
    pub shots: Option<u32>,
    pub lattice: LatticeSection,
    pub profile: ProfileSpec,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub nmr: NmrSettings,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    pub n_sites: usize,
    #[serde(default = "one")]
    pub dz: f64,
    #[serde(default = "one")]
    pub dt: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ProfileSpec {
    /// Wrapped Gaussian sampled at site centers.
    Gaussian { center: f64, sigma: f64, mass: f64 },
    /// All mass on a single site.
    Delta { site: usize, mass: f64 },
    /// Constant density.
    Uniform { level: f64 },
    /// One density value per line, plain text.
    File { path: PathBuf },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Output directory; falls back to `QLG_OUT_DIR`, then `.`.
    #[serde(default)]
    pub dir: Option<PathBuf>,
    /// Reference models to compare against in the manifest and the
    /// comparison table (`oracle`, `analytic`).
    #[serde(default)]
    pub references: Vec<String>,
}

/// Spin-system values and error switches for the `nmr` model. The
/// defaults mirror the bench settings; every delay scales as `1/J`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NmrSettings {
    #[serde(default = "default_j")]
    pub j_hz: f64,
    #[serde(default = "default_gamma_ratio")]
    pub gamma_ratio: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Peak tip angle of the shaped encode (radians).
    #[serde(default = "default_flip")]
    pub flip_angle: f64,
    /// Hard-pulse nutation rate as a multiple of J.
    #[serde(default = "default_nutation_factor")]
    pub nutation_factor: f64,
    /// `shaped` or `exact`.
    #[serde(default = "default_encoding")]
    pub encoding: String,
    /// `finite` or `instantaneous`.
    #[serde(default = "default_rotations")]
    pub rotations: String,
    /// `train`, `perfect`, or `off`.
    #[serde(default = "default_decoupling")]
    pub decoupling: String,
    /// Pi-train spacing as `1/(factor * J)`.
    #[serde(default = "default_nutation_factor")]
    pub decoupling_spacing_factor: f64,
    /// `band` or `per-slice`.
    #[serde(default = "default_readout")]
    pub readout: String,
    #[serde(default = "default_pulse_samples")]
    pub pulse_samples: usize,
    /// Sample geometry.
    #[serde(default = "default_slice_width")]
    pub slice_width: f64,
    #[serde(default = "default_slice_bandwidth")]
    pub slice_bandwidth_hz: f64,
    #[serde(default = "default_guard_slices")]
    pub guard_slices: usize,
    #[serde(default = "default_spins_per_slice")]
    pub spins_per_slice: usize,
}

fn default_j() -> f64 {
    215.0
}
fn default_gamma_ratio() -> f64 {
    42.577_478_6 / 10.708_398_4
}
fn default_epsilon() -> f64 {
    1e-5
}
fn default_flip() -> f64 {
    FRAC_PI_4
}
fn default_nutation_factor() -> f64 {
    50.0
}
fn default_encoding() -> String {
    "shaped".into()
}
fn default_rotations() -> String {
    "finite".into()
}
fn default_decoupling() -> String {
    "train".into()
}
fn default_readout() -> String {
    "band".into()
}
fn default_pulse_samples() -> usize {
    512
}
fn default_slice_width() -> f64 {
    625e-6
}
fn default_slice_bandwidth() -> f64 {
    100.0
}
fn default_guard_slices() -> usize {
    4
}
fn default_spins_per_slice() -> usize {
    8
}

impl Default for NmrSettings {
    fn default() -> Self {
        toml::from_str("").expect("empty settings deserialize to defaults")
    }
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|err| {
            CliError::validation(format!("cannot read config {}: {err}", path.display()))
        })?;
        let config: RunConfig = toml::from_str(&text)
            .map_err(|err| CliError::validation(format!("invalid config: {err}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.lattice_config()?;
        let rho0 = self.initial_density()?;
        let mass = rho0.total_mass();
        let bound = 2.0 * self.lattice.n_sites as f64;
        if mass > bound {
            return Err(CliError::validation(format!(
                "profile mass {mass} exceeds the encodable bound {bound}"
            )));
        }
        Ok(())
    }

    pub fn lattice_config(&self) -> Result<LatticeConfig, CliError> {
        Ok(LatticeConfig::new(
            self.lattice.n_sites,
            self.lattice.dz,
            self.lattice.dt,
        )?)
    }

    /// Materializes the initial density on the lattice.
    pub fn initial_density(&self) -> Result<MassDensityField, CliError> {
        let cfg = self.lattice_config()?;
        let n = cfg.n_sites();
        match &self.profile {
            ProfileSpec::Gaussian {
                center,
                sigma,
                mass,
            } => {
                if !(sigma.is_finite() && *sigma > 0.0) {
                    return Err(CliError::validation(
                        "gaussian profile needs sigma > 0; use a delta profile instead",
                    ));
                }
                let params = ContinuumParams::new(cfg.diffusion_coefficient(), cfg.length())?;
                let profile = InitialProfile::Gaussian {
                    center: *center,
                    sigma: *sigma,
                    mass: *mass,
                };
                Ok(continuum_solution(&profile, 0.0, &params, n)?)
            }
            ProfileSpec::Delta { site, mass } => {
                if *site >= n {
                    return Err(CliError::validation(format!(
                        "delta site {site} outside the {n}-site lattice"
                    )));
                }
                Ok(MassDensityField::delta(n, *site, *mass)?)
            }
            ProfileSpec::Uniform { level } => Ok(MassDensityField::uniform(n, *level)?),
            ProfileSpec::File { path } => {
                let text = std::fs::read_to_string(path).map_err(|err| {
                    CliError::validation(format!(
                        "cannot read profile {}: {err}",
                        path.display()
                    ))
                })?;
                let values: Vec<f64> = text
                    .lines()
                    .map(str::trim)
                    .filter(|line| !line.is_empty() && !line.starts_with('#'))
                    .map(|line| {
                        line.parse::<f64>().map_err(|err| {
                            CliError::validation(format!("bad density value {line:?}: {err}"))
                        })
                    })
                    .collect::<Result<_, _>>()?;
                if values.len() != n {
                    return Err(CliError::validation(format!(
                        "profile file has {} values for {} sites",
                        values.len(),
                        n
                    )));
                }
                Ok(MassDensityField::new(values)?)
            }
        }
    }

    /// Continuum profile for the analytic model, when one exists.
    pub fn analytic_profile(&self) -> Result<InitialProfile, CliError> {
        match &self.profile {
            ProfileSpec::Gaussian {
                center,
                sigma,
                mass,
            } => Ok(InitialProfile::Gaussian {
                center: *center,
                sigma: *sigma,
                mass: *mass,
            }),
            ProfileSpec::Uniform { level } => Ok(InitialProfile::Uniform { level: *level }),
            other => Err(CliError::validation(format!(
                "the analytic model needs a gaussian or uniform profile, got {other:?}"
            ))),
        }
    }

    /// Resolves the output directory: explicit flag, config, environment
    /// variable, then the working directory.
    pub fn resolve_out_dir(&self, flag: Option<&Path>) -> PathBuf {
        if let Some(dir) = flag {
            return dir.to_path_buf();
        }
        if let Some(dir) = &self.output.dir {
            return dir.clone();
        }
        if let Ok(dir) = std::env::var(crate::OUT_DIR_ENV) {
            if !dir.is_empty() {
                return PathBuf::from(dir);
            }
        }
        PathBuf::from(".")
    }
}

impl NmrSettings {
    pub fn spin_system(&self) -> Result<SpinSystem, CliError> {
        Ok(SpinSystem::new(
            self.gamma_ratio,
            self.j_hz,
            0.0,
            0.0,
            self.epsilon,
        )?)
    }

    pub fn slice_lattice(&self, n_sites: usize) -> Result<SliceLattice, CliError> {
        let gamma_bar = qlg_spin::GAMMA_BAR_H_HZ_PER_T;
        let gradient = self.slice_bandwidth_hz / (gamma_bar * self.slice_width);
        Ok(SliceLattice::new(
            n_sites,
            self.slice_width,
            gradient,
            gamma_bar,
            self.guard_slices,
            self.spins_per_slice,
        )?)
    }

    pub fn experiment_config(&self, n_sites: usize) -> Result<ExperimentConfig, CliError> {
        let system = self.spin_system()?;
        let encoding = match self.encoding.as_str() {
            "shaped" => EncodingModel::Shaped {
                flip_angle: self.flip_angle,
            },
            "exact" => EncodingModel::Exact,
            other => {
                return Err(CliError::validation(format!(
                    "unknown encoding {other:?} (expected shaped|exact)"
                )))
            }
        };
        let rotations = match self.rotations.as_str() {
            "finite" => RotationModel::FinitePower,
            "instantaneous" => RotationModel::Instantaneous,
            other => {
                return Err(CliError::validation(format!(
                    "unknown rotations {other:?} (expected finite|instantaneous)"
                )))
            }
        };
        let decoupling = match self.decoupling.as_str() {
            "train" => Decoupling::Train {
                spacing: 1.0 / (self.decoupling_spacing_factor * self.j_hz),
            },
            "perfect" => Decoupling::Perfect,
            "off" => Decoupling::Off,
            other => {
                return Err(CliError::validation(format!(
                    "unknown decoupling {other:?} (expected train|perfect|off)"
                )))
            }
        };
        let readout = match self.readout.as_str() {
            "band" => ReadoutModel::BandIntegrated,
            "per-slice" => ReadoutModel::PerSlice,
            other => {
                return Err(CliError::validation(format!(
                    "unknown readout {other:?} (expected band|per-slice)"
                )))
            }
        };
        let switches = ErrorSwitches {
            encoding,
            rotations,
            nutation_factor: self.nutation_factor,
            decoupling,
            readout,
        };
        let mut config = ExperimentConfig::new(system, self.slice_lattice(n_sites)?, switches);
        config.pulse_samples = self.pulse_samples;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal(mode: &str) -> String {
        format!(
            "mode = \"{mode}\"\nsteps = 3\n\n[lattice]\nn_sites = 8\n\n\
             [profile]\nkind = \"uniform\"\nlevel = 1.0\n"
        )
    }

    #[test]
    fn minimal_config_parses_with_defaults() {
        let config: RunConfig = toml::from_str(&minimal("ideal")).unwrap();
        assert_eq!(config.mode, "ideal");
        assert_eq!(config.lattice.dz, 1.0);
        assert_eq!(config.nmr.j_hz, 215.0);
        assert!(config.validate().is_ok());
    }

    #[test]
    fn encodability_bound_is_enforced() {
        let text = "mode = \"ideal\"\nsteps = 1\n\n[lattice]\nn_sites = 4\n\n\
                    [profile]\nkind = \"uniform\"\nlevel = 1.0\n";
        let mut config: RunConfig = toml::from_str(text).unwrap();
        config.profile = ProfileSpec::Uniform { level: 2.5 };
        assert!(config.validate().is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = format!("{}\nbogus = 1\n", minimal("ideal"));
        assert!(toml::from_str::<RunConfig>(&text).is_err());
    }

    #[test]
    fn delta_profile_bounds_checked() {
        let mut config: RunConfig = toml::from_str(&minimal("ideal")).unwrap();
        config.profile = ProfileSpec::Delta { site: 9, mass: 1.0 };
        assert!(config.initial_density().is_err());
        config.profile = ProfileSpec::Delta { site: 3, mass: 1.5 };
        let rho = config.initial_density().unwrap();
        assert_eq!(rho.get(3), 1.5);
    }
}
