//! Rotating-frame Hamiltonians in angular-frequency units (rad/s).

use nalgebra::Matrix4;
use std::f64::consts::PI;

use crate::algebra::{kron, on_spin1, on_spin2, sigma_x, sigma_y, sigma_z};
use crate::{Spin, SpinSystem, C64};

/// Internal Hamiltonian
/// `-(wH/2) sz1 - (wC/2) sz2 + (pi J / 2) sz1 sz2`
/// with `w = 2 pi * offset`. Diagonal in the computational basis.
pub fn internal_hamiltonian(sys: &SpinSystem) -> Matrix4<C64> {
    internal_hamiltonian_with_offsets(sys, 0.0, 0.0)
}

/// Internal Hamiltonian with additional offsets (Hz) added to each spin,
/// e.g. the position-dependent shift from a field gradient.
pub fn internal_hamiltonian_with_offsets(
    sys: &SpinSystem,
    extra_h_hz: f64,
    extra_c_hz: f64,
) -> Matrix4<C64> {
    let w_h = 2.0 * PI * (sys.offset_h_hz() + extra_h_hz);
    let w_c = 2.0 * PI * (sys.offset_c_hz() + extra_c_hz);
    on_spin1(&sigma_z()) * C64::new(-0.5 * w_h, 0.0)
        + on_spin2(&sigma_z()) * C64::new(-0.5 * w_c, 0.0)
        + kron(&sigma_z(), &sigma_z()) * C64::new(0.5 * PI * sys.j_hz(), 0.0)
}

/// RF drive on one spin, `-(wx sx + wy sy)/2`, with amplitudes in rad/s.
pub fn rf_hamiltonian(spin: Spin, wx: f64, wy: f64) -> Matrix4<C64> {
    let single = sigma_x() * C64::new(-0.5 * wx, 0.0) + sigma_y() * C64::new(-0.5 * wy, 0.0);
    match spin {
        Spin::Hydrogen => on_spin1(&single),
        Spin::Carbon => on_spin2(&single),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn diagonal_entries_follow_the_sign_convention() {
        // <00|H|00> = -wH/2 - wC/2 + pi J / 2 with sz|0> = +|0>.
        let sys = SpinSystem::new(3.98, 100.0, 30.0, -20.0, 1e-5).unwrap();
        let h = internal_hamiltonian(&sys);
        let expected =
            -0.5 * 2.0 * PI * 30.0 - 0.5 * 2.0 * PI * (-20.0) + 0.5 * PI * 100.0;
        assert_abs_diff_eq!(h[(0, 0)].re, expected, epsilon = 1e-9);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(h[(i, j)], C64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn pure_coupling_spectrum() {
        let sys = SpinSystem::new(3.98, 100.0, 0.0, 0.0, 1e-5).unwrap();
        let h = internal_hamiltonian(&sys);
        let level = 0.5 * PI * 100.0;
        let expected = [level, -level, -level, level];
        for (i, e) in expected.iter().enumerate() {
            assert_abs_diff_eq!(h[(i, i)].re, *e, epsilon = 1e-9);
        }
    }

    #[test]
    fn zero_system_gives_zero_hamiltonian() {
        let sys = SpinSystem::new(3.98, 1e-300, 0.0, 0.0, 1e-5).unwrap();
        let h = internal_hamiltonian(&sys);
        assert!(h.iter().all(|x| x.norm() < 1e-297));
    }
}
