//! Gradient readout: a pi/2 pulse turns longitudinal magnetization
//! transverse, the acquisition gradient spreads the slices over
//! frequency, and integrating each slice's band recovers its
//! occupations. The proton is observed directly; the carbon is swapped
//! onto the proton first and read in a second pass.

use nalgebra::Matrix4;
use std::f64::consts::FRAC_PI_2;

use qlg_core::OccupationPair;

use crate::algebra::{on_spin1, rotation, sigma_x, sigma_y};
use crate::{DensityMatrix, SliceLattice, SpinError, C64};

/// Ideal readout pulse: instantaneous `exp(+i pi/4 sy)` on the proton.
pub(crate) fn readout_pulse() -> Matrix4<C64> {
    on_spin1(&rotation(FRAC_PI_2, FRAC_PI_2))
}

pub(crate) fn swap_matrix() -> Matrix4<C64> {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    #[rustfmt::skip]
    let m = Matrix4::new(
        l, o, o, o,
        o, o, l, o,
        o, l, o, o,
        o, o, o, l,
    );
    m
}

/// Detected quadrature of the proton transverse magnetization after the
/// readout pulse; equals minus the pre-pulse `<sz1>`.
pub(crate) fn detected_signal(rho: &Matrix4<C64>) -> C64 {
    let sx = on_spin1(&sigma_x());
    let sy = on_spin1(&sigma_y());
    let mx = (sx * rho).trace().re;
    let my = (sy * rho).trace().re;
    C64::new(mx, my)
}

/// Uniform-weight band integration: every slice state contributes at its
/// sub-voxel offsets, and each band averages the contributions that fall
/// inside it.
pub(crate) fn integrate_bands(
    contributions: &[(f64, C64)],
    lattice: &SliceLattice,
) -> Vec<C64> {
    let mut sums = vec![C64::new(0.0, 0.0); lattice.n_slices()];
    let mut counts = vec![0usize; lattice.n_slices()];
    for &(freq, m) in contributions {
        if let Some(band) = lattice.band_of(freq) {
            sums[band] += m;
            counts[band] += 1;
        }
    }
    sums.iter()
        .zip(&counts)
        .map(|(&sum, &count)| {
            if count == 0 {
                C64::new(0.0, 0.0)
            } else {
                sum / count as f64
            }
        })
        .collect()
}

/// Reads both occupations from one two-spin state per slice.
///
/// Branch one applies the readout pulse to the proton and band-averages
/// the synthesized signal; branch two swaps carbon onto the proton
/// first. The band mean maps back to an occupation through
/// `f = (1 - <sz>)/2`.
pub fn gradient_readout(
    states: &[DensityMatrix],
    lattice: &SliceLattice,
) -> Result<Vec<OccupationPair>, SpinError> {
    if states.len() != lattice.n_slices() {
        return Err(SpinError::StateCount {
            expected: lattice.n_slices(),
            found: states.len(),
        });
    }
    let read = readout_pulse();
    let swap = swap_matrix();

    let synth = |transform: &dyn Fn(&Matrix4<C64>) -> Matrix4<C64>| -> Vec<C64> {
        let mut contributions = Vec::with_capacity(states.len() * lattice.spins_per_slice());
        for (s, rho) in states.iter().enumerate() {
            let observed = transform(rho.matrix());
            let m = detected_signal(&observed);
            for v in 0..lattice.spins_per_slice() {
                contributions.push((lattice.subvoxel_offset_hz(s, v), m));
            }
        }
        integrate_bands(&contributions, lattice)
    };

    let direct = synth(&|rho| read * rho * read.adjoint());
    let swapped = synth(&|rho| {
        let exchanged = swap * rho * swap.adjoint();
        read * exchanged * read.adjoint()
    });

    direct
        .iter()
        .zip(&swapped)
        .map(|(m1, m2)| {
            // Detected real part equals -<sz>, so f = (1 + Re m)/2.
            let f1 = (1.0 + m1.re) / 2.0;
            let f2 = (1.0 + m2.re) / 2.0;
            OccupationPair::new(f1.clamp(0.0, 1.0), f2.clamp(0.0, 1.0)).map_err(SpinError::from)
        })
        .collect()
}
