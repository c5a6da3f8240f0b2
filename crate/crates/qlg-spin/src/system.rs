use crate::SpinError;

/// Heteronuclear two-spin system in the doubly rotating frame.
///
/// Spin 1 is the proton, spin 2 the labelled carbon. The static Zeeman
/// terms reduce to the rotating-frame offsets, so only the gyromagnetic
/// ratio (which sets relative gradient dispersions and thermal
/// polarizations), the scalar coupling, the offsets, and the thermal
/// polarization survive as parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinSystem {
    gamma_ratio: f64,
    j_hz: f64,
    offset_h_hz: f64,
    offset_c_hz: f64,
    epsilon: f64,
}

impl SpinSystem {
    pub fn new(
        gamma_ratio: f64,
        j_hz: f64,
        offset_h_hz: f64,
        offset_c_hz: f64,
        epsilon: f64,
    ) -> Result<Self, SpinError> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(j_hz) || !positive(epsilon) {
            return Err(SpinError::InvalidSystem { j_hz, epsilon });
        }
        Ok(Self {
            gamma_ratio,
            j_hz,
            offset_h_hz,
            offset_c_hz,
            epsilon,
        })
    }

    /// Isotopically labelled chloroform, the workhorse two-spin sample:
    /// gamma_H/gamma_C from the tabulated gyromagnetic ratios, a 215 Hz
    /// one-bond coupling (typical bench value for this molecule, not a
    /// fitted quantity; every compiled delay scales as 1/J), on-resonance
    /// offsets, and a room-temperature polarization of 1e-5.
    pub fn chloroform() -> Self {
        Self {
            gamma_ratio: 42.577_478_6 / 10.708_398_4,
            j_hz: 215.0,
            offset_h_hz: 0.0,
            offset_c_hz: 0.0,
            epsilon: 1e-5,
        }
    }

    /// `gamma_H / gamma_C`.
    pub fn gamma_ratio(&self) -> f64 {
        self.gamma_ratio
    }

    /// Scalar coupling in Hz.
    pub fn j_hz(&self) -> f64 {
        self.j_hz
    }

    pub fn offset_h_hz(&self) -> f64 {
        self.offset_h_hz
    }

    pub fn offset_c_hz(&self) -> f64 {
        self.offset_c_hz
    }

    /// Thermal polarization scale.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn with_j(self, j_hz: f64) -> Result<Self, SpinError> {
        Self::new(
            self.gamma_ratio,
            j_hz,
            self.offset_h_hz,
            self.offset_c_hz,
            self.epsilon,
        )
    }

    pub fn with_offsets(self, offset_h_hz: f64, offset_c_hz: f64) -> Self {
        Self {
            offset_h_hz,
            offset_c_hz,
            ..self
        }
    }
}

impl Default for SpinSystem {
    fn default() -> Self {
        Self::chloroform()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unphysical_parameters() {
        assert!(SpinSystem::new(3.98, 0.0, 0.0, 0.0, 1e-5).is_err());
        assert!(SpinSystem::new(3.98, 215.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn chloroform_ratio_is_about_four() {
        let sys = SpinSystem::chloroform();
        assert!((sys.gamma_ratio() - 3.976).abs() < 0.01);
    }
}
