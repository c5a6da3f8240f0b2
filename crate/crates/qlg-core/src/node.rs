use nalgebra::Vector4;
use rand::Rng;

use crate::{LatticeError, OccupationPair, C64, ALGEBRA_TOL};

/// Normalized two-qubit wave function of a single lattice node.
///
/// Amplitudes are ordered `(|00>, |01>, |10>, |11>)` with qubit 1 in the
/// left slot; `|1>` is the excited state counted by the number operator.
/// The occupation pair maps onto the product state
///
/// ```text
/// |psi> = sqrt((1-f1)(1-f2)) |00> + sqrt((1-f1) f2) |01>
///       + sqrt(f1 (1-f2))    |10> + sqrt(f1 f2)     |11>
/// ```
///
/// so a number-operator measurement returns `(f1, f2)` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeState {
    amplitudes: Vector4<C64>,
}

impl NodeState {
    /// Builds a state from raw amplitudes, rejecting unnormalized input.
    pub fn new(amplitudes: Vector4<C64>) -> Result<Self, LatticeError> {
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > ALGEBRA_TOL {
            return Err(LatticeError::NotNormalized((norm_sq - 1.0).abs()));
        }
        Ok(Self { amplitudes })
    }

    pub(crate) fn from_unchecked(amplitudes: Vector4<C64>) -> Self {
        debug_assert!(
            (amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-9,
            "internal state drifted off the unit sphere"
        );
        Self { amplitudes }
    }

    /// Encodes an occupation pair as the nonnegative-real product state
    /// described above.
    pub fn encode(pair: OccupationPair) -> Self {
        let (f1, f2) = (pair.f1(), pair.f2());
        let amp = |p: f64| C64::new(p.max(0.0).sqrt(), 0.0);
        Self::from_unchecked(Vector4::new(
            amp((1.0 - f1) * (1.0 - f2)),
            amp((1.0 - f1) * f2),
            amp(f1 * (1.0 - f2)),
            amp(f1 * f2),
        ))
    }

    pub fn amplitudes(&self) -> &Vector4<C64> {
        &self.amplitudes
    }

    /// Expectation values of the two number operators,
    /// `f1 = |a10|^2 + |a11|^2` and `f2 = |a01|^2 + |a11|^2`.
    ///
    /// This is the ensemble weak measurement: exact expectations, no
    /// projection noise.
    pub fn occupations(&self) -> OccupationPair {
        let p = |i: usize| self.amplitudes[i].norm_sqr();
        let f1 = (p(2) + p(3)).clamp(0.0, 1.0);
        let f2 = (p(1) + p(3)).clamp(0.0, 1.0);
        OccupationPair::new(f1, f2).expect("probabilities clamped to [0, 1]")
    }

    /// Finite-ensemble measurement: draws `shots` independent binary
    /// outcomes per qubit and returns the observed frequencies. This is
    /// optional plumbing for robustness studies; the algorithm itself
    /// uses the exact `occupations`.
    pub fn sampled_occupations<R: Rng>(&self, shots: u32, rng: &mut R) -> OccupationPair {
        assert!(shots > 0, "need at least one shot");
        let exact = self.occupations();
        let mut draw = |f: f64| {
            let hits = (0..shots).filter(|_| rng.gen::<f64>() < f).count();
            hits as f64 / shots as f64
        };
        let f1 = draw(exact.f1());
        let f2 = draw(exact.f2());
        OccupationPair::new(f1, f2).expect("frequencies lie in [0, 1]")
    }
}
