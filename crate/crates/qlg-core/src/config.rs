use crate::LatticeError;

/// Boundary handling for the 1-D lattice. Only the periodic ring is
/// supported: the density obeys `rho(z, t) = rho(z + L, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    Periodic,
}

/// Geometry of the periodic 1-D lattice.
///
/// `L = n_sites * dz` is the ring circumference; site `i` sits at
/// `z = i * dz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeConfig {
    n_sites: usize,
    dz: f64,
    dt: f64,
    boundary: Boundary,
}

impl LatticeConfig {
    pub fn new(n_sites: usize, dz: f64, dt: f64) -> Result<Self, LatticeError> {
        if n_sites < 2 {
            return Err(LatticeError::TooFewSites(n_sites));
        }
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(dz) || !positive(dt) {
            return Err(LatticeError::NonPositiveGrid { dz, dt });
        }
        Ok(Self {
            n_sites,
            dz,
            dt,
            boundary: Boundary::Periodic,
        })
    }

    /// Unit-spaced lattice (`dz = dt = 1`).
    pub fn with_sites(n_sites: usize) -> Result<Self, LatticeError> {
        Self::new(n_sites, 1.0, 1.0)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dz(&self) -> f64 {
        self.dz
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Ring circumference `L`.
    pub fn length(&self) -> f64 {
        self.n_sites as f64 * self.dz
    }

    /// Position of site `i`.
    pub fn site_z(&self, i: usize) -> f64 {
        i as f64 * self.dz
    }

    /// Transport coefficient of the emergent diffusion equation,
    /// `D = dz^2 / (2 dt)`.
    pub fn diffusion_coefficient(&self) -> f64 {
        self.dz * self.dz / (2.0 * self.dt)
    }
}
