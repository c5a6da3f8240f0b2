//! Property tests for the propagators: unitary evolution must preserve
//! the defining features of a density matrix for arbitrary Hermitian
//! generators, and any well-formed pulse sequence must evaluate to a
//! unitary.

use nalgebra::Matrix4;
use proptest::prelude::*;

use qlg_spin::algebra::unitarity_defect;
use qlg_spin::{
    propagate, pseudo_pure_state, sequence_unitary, PulseEvent, PulseSequence, RfTone, Spin,
    SpinSystem, C64,
};

fn small() -> impl Strategy<Value = f64> {
    (-1_000i32..=1_000).prop_map(|k| k as f64 / 100.0)
}

fn hermitian() -> impl Strategy<Value = Matrix4<C64>> {
    (
        prop::array::uniform4(small()),
        prop::array::uniform6(small()),
        prop::array::uniform6(small()),
    )
        .prop_map(|(diag, re, im)| {
            let mut h = Matrix4::zeros();
            for (i, d) in diag.into_iter().enumerate() {
                h[(i, i)] = C64::new(d, 0.0);
            }
            let mut k = 0;
            for i in 0..4 {
                for j in (i + 1)..4 {
                    h[(i, j)] = C64::new(re[k], im[k]);
                    h[(j, i)] = C64::new(re[k], -im[k]);
                    k += 1;
                }
            }
            h
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn propagation_keeps_states_physical(h in hermitian(), t in 0.0f64..2.0) {
        let sys = SpinSystem::chloroform();
        let rho = pseudo_pure_state(&sys);
        // `propagate` revalidates Hermiticity, trace, and positivity on
        // the way out, so a clean return is the property.
        let out = propagate(&rho, &h, t).unwrap();
        let trace = out.matrix().trace();
        prop_assert!((trace.re - 1.0).abs() <= 1e-12);
        prop_assert!(trace.im.abs() <= 1e-12);
    }

    #[test]
    fn random_tone_sequences_evaluate_to_unitaries(
        phases in prop::collection::vec(0.0f64..std::f64::consts::TAU, 1..6),
        delays in prop::collection::vec(0.0f64..2e-3, 1..6),
    ) {
        let sys = SpinSystem::chloroform();
        let mut events = Vec::new();
        for (k, (&phase, &delay)) in phases.iter().zip(&delays).enumerate() {
            let spin = if k % 2 == 0 { Spin::Hydrogen } else { Spin::Carbon };
            events.push(PulseEvent::Rf {
                tones: vec![RfTone { spin, phase, nutation_hz: 8e3 }],
                duration: 3e-5,
            });
            events.push(PulseEvent::Delay { duration: delay });
        }
        let seq = PulseSequence::new(events).unwrap();
        let u = sequence_unitary(&seq, &sys).unwrap();
        prop_assert!(unitarity_defect(&u) <= 1e-11);
    }
}
