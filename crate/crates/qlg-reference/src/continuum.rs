use qlg_core::MassDensityField;

use crate::ReferenceError;

/// Relative size at which additional heat-kernel image terms are
/// dropped; below double-precision noise.
const IMAGE_TRUNCATION: f64 = 1e-14;

/// Parameters of the continuum diffusion equation on a ring:
/// `d rho/dt = D d^2 rho/dz^2` with period `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumParams {
    diffusion_coefficient: f64,
    period: f64,
}

impl ContinuumParams {
    pub fn new(diffusion_coefficient: f64, period: f64) -> Result<Self, ReferenceError> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(diffusion_coefficient) || !positive(period) {
            return Err(ReferenceError::InvalidParams {
                diffusion_coefficient,
                period,
            });
        }
        Ok(Self {
            diffusion_coefficient,
            period,
        })
    }

    pub fn diffusion_coefficient(&self) -> f64 {
        self.diffusion_coefficient
    }

    pub fn period(&self) -> f64 {
        self.period
    }
}

/// Analytic initial profiles with closed-form diffusive evolution.
/// `mass` is the integral of the density over one period; a `sigma` of
/// zero describes a point mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialProfile {
    Gaussian { center: f64, sigma: f64, mass: f64 },
    Uniform { level: f64 },
}

impl InitialProfile {
    fn validate(&self) -> Result<(), ReferenceError> {
        match *self {
            InitialProfile::Gaussian { sigma, mass, .. } => {
                if sigma < 0.0 || mass < 0.0 || !sigma.is_finite() || !mass.is_finite() {
                    return Err(ReferenceError::InvalidProfile(format!(
                        "gaussian needs sigma >= 0 and mass >= 0, got sigma={sigma}, mass={mass}"
                    )));
                }
            }
            InitialProfile::Uniform { level } => {
                if level < 0.0 || !level.is_finite() {
                    return Err(ReferenceError::InvalidProfile(format!(
                        "uniform level must be nonnegative, got {level}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Unit-mass Gaussian density wrapped onto the ring: the image sum
/// `sum_k pdf(x + k L)`, truncated once new terms stop mattering.
fn wrapped_gaussian(x: f64, sigma: f64, period: f64) -> f64 {
    let pdf = |u: f64| {
        let a = u / sigma;
        (-0.5 * a * a).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
    };
    let mut total = pdf(x);
    for k in 1..10_000 {
        let shift = k as f64 * period;
        let term = pdf(x + shift) + pdf(x - shift);
        total += term;
        if term < IMAGE_TRUNCATION * total.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    total
}

/// Evaluates the diffused profile at time `t`, sampled at `n_samples`
/// evenly spaced site centers `z_i = i L / n`.
///
/// A Gaussian stays Gaussian with `sigma(t)^2 = sigma0^2 + 2 D t`,
/// wrapped around the ring; a uniform profile is stationary.
pub fn continuum_solution(
    profile: &InitialProfile,
    t: f64,
    params: &ContinuumParams,
    n_samples: usize,
) -> Result<MassDensityField, ReferenceError> {
    profile.validate()?;
    if t < 0.0 {
        return Err(ReferenceError::NegativeTime(t));
    }
    let period = params.period();
    let dz = period / n_samples as f64;
    let values: Vec<f64> = match *profile {
        InitialProfile::Uniform { level } => vec![level; n_samples],
        InitialProfile::Gaussian {
            center,
            sigma,
            mass,
        } => {
            let variance = sigma * sigma + 2.0 * params.diffusion_coefficient() * t;
            if variance <= 0.0 {
                return Err(ReferenceError::InvalidProfile(
                    "point mass at t = 0 has no finite density; evaluate at t > 0".into(),
                ));
            }
            let sigma_t = variance.sqrt();
            (0..n_samples)
                .map(|i| {
                    let x = i as f64 * dz - center;
                    mass * wrapped_gaussian(x, sigma_t, period)
                })
                .collect()
        }
    };
    Ok(MassDensityField::new(values)?)
}
