//! Evaluation of pulse sequences into unitaries, and density-matrix
//! propagation under a constant Hamiltonian.

use nalgebra::Matrix4;
use std::f64::consts::PI;

use crate::algebra::{evolution_operator, hermiticity_defect, on_spin1, on_spin2, rotation};
use crate::hamiltonian::{internal_hamiltonian, rf_hamiltonian};
use crate::{DensityMatrix, PulseEvent, PulseSequence, Spin, SpinError, SpinSystem, C64};

/// How RF rotations are realized when a sequence is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RotationModel {
    /// Zero-duration limit: each tone is the exact rotation it names and
    /// the internal Hamiltonian does not act during pulses.
    Instantaneous,
    /// Pulses take their real time; the internal Hamiltonian stays on,
    /// so scalar coupling mixes into every rotation.
    FinitePower,
}

/// Unitary evolution `U rho U^dagger` with `U = exp(-i H t)`.
/// `H` must be Hermitian (angular-frequency units).
pub fn propagate(
    rho: &DensityMatrix,
    hamiltonian: &Matrix4<C64>,
    t: f64,
) -> Result<DensityMatrix, SpinError> {
    let scale = hamiltonian.iter().map(|x| x.norm()).fold(1.0, f64::max);
    let defect = hermiticity_defect(hamiltonian);
    if defect > 1e-12 * scale {
        return Err(SpinError::NonHermitian(defect));
    }
    let u = evolution_operator(hamiltonian, t);
    DensityMatrix::new(u * rho.matrix() * u.adjoint())
}

/// Evaluates a sequence as the ordered product of piecewise-constant
/// propagators at finite RF power. Each event's Hamiltonian is constant,
/// so a single matrix exponential per event is exact. Gradient events
/// are evaluated at the gradient isocenter (`z = 0`); position-resolved
/// evolution lives in the slice-encoding path.
pub fn sequence_unitary(
    seq: &PulseSequence,
    sys: &SpinSystem,
) -> Result<Matrix4<C64>, SpinError> {
    evaluate(seq, sys, RotationModel::FinitePower)
}

/// Evaluates a sequence in the instantaneous-rotation limit: RF events
/// become exact rotations, delays evolve under the internal Hamiltonian.
pub fn sequence_unitary_ideal(
    seq: &PulseSequence,
    sys: &SpinSystem,
) -> Result<Matrix4<C64>, SpinError> {
    evaluate(seq, sys, RotationModel::Instantaneous)
}

pub(crate) fn evaluate(
    seq: &PulseSequence,
    sys: &SpinSystem,
    model: RotationModel,
) -> Result<Matrix4<C64>, SpinError> {
    let h_internal = internal_hamiltonian(sys);
    let mut total = Matrix4::identity();
    for event in seq.events() {
        match event {
            PulseEvent::Delay { duration } => {
                total = evolution_operator(&h_internal, *duration) * total;
            }
            PulseEvent::Gradient { .. } => {}
            PulseEvent::Rf { tones, duration } => {
                check_distinct_spins(tones)?;
                match model {
                    RotationModel::Instantaneous => {
                        for tone in tones {
                            let theta = 2.0 * PI * tone.nutation_hz * duration;
                            let r = rotation(tone.phase, theta);
                            let u = match tone.spin {
                                Spin::Hydrogen => on_spin1(&r),
                                Spin::Carbon => on_spin2(&r),
                            };
                            total = u * total;
                        }
                    }
                    RotationModel::FinitePower => {
                        let mut h = h_internal;
                        for tone in tones {
                            let w = 2.0 * PI * tone.nutation_hz;
                            h += rf_hamiltonian(
                                tone.spin,
                                w * tone.phase.cos(),
                                w * tone.phase.sin(),
                            );
                        }
                        total = evolution_operator(&h, *duration) * total;
                    }
                }
            }
        }
    }
    Ok(total)
}

fn check_distinct_spins(tones: &[crate::RfTone]) -> Result<(), SpinError> {
    let mut h = 0;
    let mut c = 0;
    for tone in tones {
        match tone.spin {
            Spin::Hydrogen => h += 1,
            Spin::Carbon => c += 1,
        }
    }
    if h > 1 || c > 1 {
        return Err(SpinError::OverlappingTones);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{max_abs_diff, sigma_x, unitarity_defect};
    use crate::RfTone;
    use approx::assert_abs_diff_eq;

    fn sys() -> SpinSystem {
        SpinSystem::new(3.98, 215.0, 0.0, 0.0, 1e-5).unwrap()
    }

    #[test]
    fn empty_sequence_is_identity() {
        let seq = PulseSequence::default();
        let u = sequence_unitary(&seq, &sys()).unwrap();
        assert!(max_abs_diff(&u, &Matrix4::identity()) < 1e-15);
    }

    #[test]
    fn strong_pi_pulse_approaches_sigma_x() {
        // Nutation far above J: the finite-power pi pulse converges on
        // the exact bit flip up to a global phase.
        let system = sys();
        let nu = 1e6 * system.j_hz();
        let seq = PulseSequence::new(vec![PulseEvent::Rf {
            tones: vec![RfTone {
                spin: Spin::Hydrogen,
                phase: 0.0,
                nutation_hz: nu,
            }],
            duration: 0.5 / nu,
        }])
        .unwrap();
        let u = sequence_unitary(&seq, &system).unwrap();
        // Strip the global phase using the largest element.
        let x1 = on_spin1(&sigma_x());
        let phase = u[(1, 3)] / x1[(1, 3)];
        let aligned = u * (phase.conj() / phase.norm());
        assert!(max_abs_diff(&aligned, &x1) < 1e-5);
    }

    #[test]
    fn delay_matches_diagonal_phase_oracle() {
        // ZZ evolution for t = 1/(4J) on |10><10|: the analytic result is
        // a pure phase on each basis state, exp(-i (pi J / 2) zz t).
        let system = sys();
        let t = 1.0 / (4.0 * system.j_hz());
        let seq = PulseSequence::new(vec![PulseEvent::Delay { duration: t }]).unwrap();
        let u = sequence_unitary(&seq, &system).unwrap();
        let angle = 0.5 * PI * system.j_hz() * t; // = pi/8
        for (index, sign) in [(0usize, 1.0f64), (1, -1.0), (2, -1.0), (3, 1.0)] {
            let expected = C64::new(0.0, -sign * angle).exp();
            assert_abs_diff_eq!(u[(index, index)].re, expected.re, epsilon = 1e-12);
            assert_abs_diff_eq!(u[(index, index)].im, expected.im, epsilon = 1e-12);
        }

        // Propagating the |10><10| deviation with the same Hamiltonian
        // leaves it untouched (diagonal commutes with diagonal).
        let mut m = Matrix4::zeros();
        m[(2, 2)] = C64::new(1.0, 0.0);
        let rho = DensityMatrix::new(m).unwrap();
        let out = propagate(&rho, &internal_hamiltonian(&system), t).unwrap();
        assert!(max_abs_diff(out.matrix(), rho.matrix()) < 1e-14);
    }

    #[test]
    fn propagate_preserves_trace_and_hermiticity() {
        let system = sys();
        let h = internal_hamiltonian(&system)
            + rf_hamiltonian(Spin::Hydrogen, 3000.0, -500.0)
            + rf_hamiltonian(Spin::Carbon, 0.0, 800.0);
        let rho = crate::pseudo_pure_state(&system);
        let out = propagate(&rho, &h, 1e-3).unwrap();
        assert_abs_diff_eq!(out.matrix().trace().re, 1.0, epsilon = 1e-12);
        assert!(crate::algebra::hermiticity_defect(out.matrix()) < 1e-12);
    }

    #[test]
    fn propagate_rejects_non_hermitian_generators() {
        let mut h = Matrix4::zeros();
        h[(0, 1)] = C64::new(1.0, 0.0);
        let rho = crate::pseudo_pure_state(&sys());
        assert!(matches!(
            propagate(&rho, &h, 1.0),
            Err(SpinError::NonHermitian(_))
        ));
    }

    #[test]
    fn zero_time_propagation_is_identity() {
        let system = sys();
        let rho = crate::thermal_state(&system);
        let out = propagate(&rho, &internal_hamiltonian(&system), 0.0).unwrap();
        assert!(max_abs_diff(out.matrix(), rho.matrix()) < 1e-14);
    }

    #[test]
    fn overlapping_tones_are_rejected_at_evaluation() {
        // Bypass the constructor check by building the event directly.
        let seq = PulseSequence::new(vec![PulseEvent::Rf {
            tones: vec![
                RfTone {
                    spin: Spin::Carbon,
                    phase: 0.0,
                    nutation_hz: 1e4,
                },
                RfTone {
                    spin: Spin::Carbon,
                    phase: PI,
                    nutation_hz: 1e4,
                },
            ],
            duration: 1e-5,
        }]);
        assert!(matches!(seq, Err(SpinError::OverlappingTones)));
    }

    #[test]
    fn finite_power_evaluation_stays_unitary() {
        let system = sys();
        let seq = crate::compile_collision(system.j_hz(), 50.0 * system.j_hz()).unwrap();
        let u = sequence_unitary(&seq, &system).unwrap();
        assert!(unitarity_defect(&u) < 1e-12);
    }
}
