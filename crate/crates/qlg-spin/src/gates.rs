//! Compilation of the collision and swap gates into RF pulses and
//! scalar-coupling delays, plus the gate-fidelity figure of merit.
//!
//! Both gates follow the same template, derived from factoring
//! `exp[-i theta (xx + yy + zz)]` into commuting two-spin terms and
//! expanding the `xx` and `yy` factors as `zz` evolutions sandwiched by
//! hard `pi/2` rotations applied to both spins at once:
//!
//! ```text
//! (+y)(+y)  --zz--  (-y)(-y)  --zz--  (-x)(-x)  --zz--  (+x)(+x)
//! ```
//!
//! with every `zz` a free-evolution delay of `1/(4J)` for the
//! square-root-of-SWAP collision and `1/(2J)` for the full swap. The
//! rotations are `pi/2` pulses of duration `1/(4 nu)` at nutation rate
//! `nu`; clean gates need `nu >> J`.

use nalgebra::Matrix4;
use std::f64::consts::FRAC_PI_2;

use crate::algebra::unitarity_defect;
use crate::{PulseEvent, PulseSequence, RfTone, Spin, SpinError};

fn both_spins(phase: f64, nutation_hz: f64) -> PulseEvent {
    PulseEvent::Rf {
        tones: vec![
            RfTone {
                spin: Spin::Hydrogen,
                phase,
                nutation_hz,
            },
            RfTone {
                spin: Spin::Carbon,
                phase,
                nutation_hz,
            },
        ],
        duration: 0.25 / nutation_hz, // 2 pi nu t = pi/2
    }
}

fn compile_template(j_hz: f64, nutation_hz: f64, t_zz: f64) -> Result<PulseSequence, SpinError> {
    if !(nutation_hz.is_finite() && nutation_hz > 0.0) {
        return Err(SpinError::NonPositiveNutation(nutation_hz));
    }
    if !(j_hz.is_finite() && j_hz > 0.0) {
        return Err(SpinError::InvalidSystem {
            j_hz,
            epsilon: f64::NAN,
        });
    }
    PulseSequence::new(vec![
        both_spins(FRAC_PI_2, nutation_hz),
        PulseEvent::Delay { duration: t_zz },
        both_spins(-FRAC_PI_2, nutation_hz),
        PulseEvent::Delay { duration: t_zz },
        both_spins(std::f64::consts::PI, nutation_hz),
        PulseEvent::Delay { duration: t_zz },
        both_spins(0.0, nutation_hz),
    ])
}

/// Pulse realization of the square-root-of-SWAP collision operator:
/// three `1/(4J)` coupling delays interleaved with `pi/2` rotation pairs.
/// In the instantaneous-rotation limit it reproduces the collision
/// matrix up to a global phase.
pub fn compile_collision(j_hz: f64, nutation_hz: f64) -> Result<PulseSequence, SpinError> {
    compile_template(j_hz, nutation_hz, 1.0 / (4.0 * j_hz))
}

/// Pulse realization of the full SWAP: identical to the collision
/// sequence except the coupling delays last `1/(2J)`.
pub fn compile_swap(j_hz: f64, nutation_hz: f64) -> Result<PulseSequence, SpinError> {
    compile_template(j_hz, nutation_hz, 1.0 / (2.0 * j_hz))
}

/// Gate fidelity `|Tr(U^dagger V)| / 4`, invariant under global phases;
/// 1 iff the gates agree up to phase. Rejects non-unitary input.
pub fn gate_fidelity(
    u: &Matrix4<crate::C64>,
    v: &Matrix4<crate::C64>,
) -> Result<f64, SpinError> {
    for m in [u, v] {
        let defect = unitarity_defect(m);
        if defect > 1e-10 {
            return Err(SpinError::NonUnitary(defect));
        }
    }
    Ok((u.adjoint() * v).trace().norm() / 4.0)
}
