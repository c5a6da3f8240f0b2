//! Ensemble starting states: thermal equilibrium, magnetization-equalized,
//! and pseudo-pure. The preparation pulse sequences themselves are not
//! simulated; the states are constructed directly.

use nalgebra::Matrix4;

use crate::algebra::{on_spin1, on_spin2, sigma_z};
use crate::{DensityMatrix, SpinSystem, C64};

/// Thermal-equilibrium density matrix in the high-temperature limit,
/// `1/4 + epsilon [ (gH/gC) sz1 + sz2 ]`: highly mixed, with unequal
/// magnetizations on the two spins.
pub fn thermal_state(sys: &SpinSystem) -> DensityMatrix {
    let eps = sys.epsilon();
    let m = Matrix4::identity() * C64::new(0.25, 0.0)
        + on_spin1(&sigma_z()) * C64::new(eps * sys.gamma_ratio(), 0.0)
        + on_spin2(&sigma_z()) * C64::new(eps, 0.0);
    DensityMatrix::new(m).expect("thermal state is valid for small epsilon")
}

/// State after equalizing the two spin magnetizations,
/// `1/4 + (epsilon/2)(1 + gH/gC)[ sz1 + sz2 ]`.
pub fn equalized_state(sys: &SpinSystem) -> DensityMatrix {
    let scale = 0.5 * sys.epsilon() * (1.0 + sys.gamma_ratio());
    let m = Matrix4::identity() * C64::new(0.25, 0.0)
        + (on_spin1(&sigma_z()) + on_spin2(&sigma_z())) * C64::new(scale, 0.0);
    DensityMatrix::new(m).expect("equalized state is valid for small epsilon")
}

/// Polarization of the pseudo-pure deviation,
/// `epsilon' = epsilon (sqrt(3) / (4 sqrt(2))) (1 + gH/gC)`.
pub fn epsilon_prime(sys: &SpinSystem) -> f64 {
    sys.epsilon() * (3.0f64.sqrt() / (4.0 * 2.0f64.sqrt())) * (1.0 + sys.gamma_ratio())
}

/// Pseudo-pure state on `|00>`:
///
/// ```text
/// sigma_pp = (1 - eps')/4 * I + eps' |00><00|
/// ```
///
/// The identity share is invisible to unitaries and to traceless
/// observables; the deviation transforms exactly like the pure `|00>`
/// state, with `Tr(sz1 sigma_pp) = eps'`.
pub fn pseudo_pure_state(sys: &SpinSystem) -> DensityMatrix {
    let eps_prime = epsilon_prime(sys);
    let mut projector = Matrix4::zeros();
    projector[(0, 0)] = C64::new(1.0, 0.0);
    let m = Matrix4::identity() * C64::new(0.25 * (1.0 - eps_prime), 0.0)
        + projector * C64::new(eps_prime, 0.0);
    DensityMatrix::new(m).expect("pseudo-pure state is valid for small epsilon")
}

/// Deviation part of a state: the traceless remainder after removing the
/// maximally mixed share.
pub fn deviation(rho: &DensityMatrix) -> Matrix4<C64> {
    rho.matrix() - Matrix4::identity() * C64::new(0.25, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{evolution_operator, kron, max_abs_diff, sigma_x};
    use approx::assert_abs_diff_eq;

    #[test]
    fn all_states_have_unit_trace() {
        let sys = SpinSystem::chloroform();
        for rho in [
            thermal_state(&sys),
            equalized_state(&sys),
            pseudo_pure_state(&sys),
        ] {
            assert_abs_diff_eq!(rho.matrix().trace().re, 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(rho.matrix().trace().im, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn pseudo_pure_z_moment_equals_epsilon_prime() {
        // Only the |00><00| share contributes to Tr(sz1 rho).
        let sys = SpinSystem::chloroform();
        let rho = pseudo_pure_state(&sys);
        // Roundoff floor: the +-1/4 identity entries cancel to ~ulp(0.25).
        let moment = rho.expectation(&on_spin1(&sigma_z()));
        assert_abs_diff_eq!(moment, epsilon_prime(&sys), epsilon = 1e-15);
    }

    #[test]
    fn thermal_magnetizations_are_unequal_then_equalized() {
        let sys = SpinSystem::chloroform();
        let thermal = thermal_state(&sys);
        let h = thermal.expectation(&on_spin1(&sigma_z()));
        let c = thermal.expectation(&on_spin2(&sigma_z()));
        assert_abs_diff_eq!(h / c, sys.gamma_ratio(), epsilon = 1e-9);

        let equal = equalized_state(&sys);
        let h = equal.expectation(&on_spin1(&sigma_z()));
        let c = equal.expectation(&on_spin2(&sigma_z()));
        assert_abs_diff_eq!(h, c, epsilon = 1e-18);
        // Total magnetization is conserved by the equalization.
        let total_before = thermal.expectation(&(on_spin1(&sigma_z()) + on_spin2(&sigma_z())));
        let total_after = equal.expectation(&(on_spin1(&sigma_z()) + on_spin2(&sigma_z())));
        assert_abs_diff_eq!(total_before, total_after, epsilon = 1e-18);
    }

    #[test]
    fn unitaries_move_only_the_deviation() {
        // Conjugate by some entangling unitary and compare the deviation
        // against the directly evolved projector deviation.
        let sys = SpinSystem::chloroform();
        let rho = pseudo_pure_state(&sys);
        let generator = kron(&sigma_x(), &sigma_x()) + kron(&sigma_z(), &sigma_z());
        let u = evolution_operator(&generator, 0.7);

        let evolved = DensityMatrix::new(u * rho.matrix() * u.adjoint()).unwrap();

        let mut projector = Matrix4::zeros();
        projector[(0, 0)] = C64::new(1.0, 0.0);
        let eps_prime = epsilon_prime(&sys);
        let expected_dev = (u * projector * u.adjoint()
            - Matrix4::identity() * C64::new(0.25, 0.0))
            * C64::new(eps_prime, 0.0);
        assert!(max_abs_diff(&deviation(&evolved), &expected_dev) < 1e-14);
    }
}
