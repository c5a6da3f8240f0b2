use crate::{LatticeError, ALGEBRA_TOL};

/// Occupation probabilities `(f1, f2)` of the upward- and
/// downward-moving particle at one site. This is the mesoscopic state
/// that crosses step boundaries classically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccupationPair {
    f1: f64,
    f2: f64,
}

impl OccupationPair {
    pub fn new(f1: f64, f2: f64) -> Result<Self, LatticeError> {
        for (index, value) in [(1u8, f1), (2u8, f2)] {
            if !value.is_finite() || !(-ALGEBRA_TOL..=1.0 + ALGEBRA_TOL).contains(&value) {
                return Err(LatticeError::OccupationOutOfRange { index, value });
            }
        }
        Ok(Self {
            f1: f1.clamp(0.0, 1.0),
            f2: f2.clamp(0.0, 1.0),
        })
    }

    pub fn f1(&self) -> f64 {
        self.f1
    }

    pub fn f2(&self) -> f64 {
        self.f2
    }

    /// Site mass `rho = f1 + f2`.
    pub fn density(&self) -> f64 {
        self.f1 + self.f2
    }
}

/// Macroscopic mass density, one value per site, each in the encodable
/// range `[0, 2]` (a site stores at most one particle per direction).
#[derive(Debug, Clone, PartialEq)]
pub struct MassDensityField {
    values: Vec<f64>,
}

impl MassDensityField {
    pub fn new(values: Vec<f64>) -> Result<Self, LatticeError> {
        if values.is_empty() {
            return Err(LatticeError::EmptyField);
        }
        for (site, &value) in values.iter().enumerate() {
            if !value.is_finite() || !(-ALGEBRA_TOL..=2.0 + ALGEBRA_TOL).contains(&value) {
                return Err(LatticeError::DensityOutOfRange { site, value });
            }
        }
        Ok(Self { values })
    }

    /// Constant field `rho(z) = level`.
    pub fn uniform(n_sites: usize, level: f64) -> Result<Self, LatticeError> {
        Self::new(vec![level; n_sites])
    }

    /// All mass concentrated on one site.
    pub fn delta(n_sites: usize, site: usize, mass: f64) -> Result<Self, LatticeError> {
        let mut values = vec![0.0; n_sites];
        if site >= n_sites {
            return Err(LatticeError::LengthMismatch {
                expected: n_sites,
                found: site,
            });
        }
        values[site] = mass;
        Self::new(values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, site: usize) -> f64 {
        self.values[site]
    }

    /// Total mass `sum_z rho(z)` (site masses, not yet weighted by `dz`).
    pub fn total_mass(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Dispersion of the site values around their mean. This is the
    /// relaxation diagnostic: collisions average neighbours, so it never
    /// increases along a trajectory.
    pub fn value_variance(&self) -> f64 {
        let n = self.values.len() as f64;
        let mean = self.total_mass() / n;
        self.values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_bounds_are_enforced() {
        assert!(OccupationPair::new(0.0, 1.0).is_ok());
        assert!(matches!(
            OccupationPair::new(-0.1, 0.5),
            Err(LatticeError::OccupationOutOfRange { index: 1, .. })
        ));
        assert!(matches!(
            OccupationPair::new(0.5, 1.5),
            Err(LatticeError::OccupationOutOfRange { index: 2, .. })
        ));
    }

    #[test]
    fn density_bounds_are_enforced() {
        assert!(MassDensityField::new(vec![0.0, 2.0, 1.3]).is_ok());
        assert!(matches!(
            MassDensityField::new(vec![1.0, 2.4]),
            Err(LatticeError::DensityOutOfRange { site: 1, .. })
        ));
        assert!(matches!(
            MassDensityField::new(vec![]),
            Err(LatticeError::EmptyField)
        ));
    }

    #[test]
    fn value_variance_of_uniform_field_is_zero() {
        let rho = MassDensityField::uniform(8, 1.25).unwrap();
        assert_eq!(rho.value_variance(), 0.0);
    }
}
