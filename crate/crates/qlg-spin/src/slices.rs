//! Geometry of the sliced sample: a linear field gradient turns position
//! into resonance offset, dividing the tube into individually
//! addressable slices, each covering a band of frequencies.

use crate::SpinError;

/// Tabulated proton gyromagnetic ratio over 2 pi, Hz per tesla.
pub const GAMMA_BAR_H_HZ_PER_T: f64 = 42.577_478_6e6;

/// Slice layout of the sample under a static gradient.
///
/// Slice `s` (0-based) occupies
/// `z in [z0 + s w, z0 + (s+1) w)` with `z0 = guard_slices * w`; the
/// guard offset keeps every band at positive offset frequency so the
/// mirror response of real-valued waveforms falls outside the sample.
/// The band of slice `s` for the addressed nucleus is
/// `gamma_bar * gradient * [z_low, z_high]`, and each slice is resolved
/// into `spins_per_slice` sub-voxels for encoding and readout
/// integration.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceLattice {
    n_slices: usize,
    slice_width: f64,
    gradient: f64,
    gamma_bar_hz_per_t: f64,
    guard_slices: usize,
    spins_per_slice: usize,
    bands: Vec<(f64, f64)>,
}

impl SliceLattice {
    pub fn new(
        n_slices: usize,
        slice_width: f64,
        gradient: f64,
        gamma_bar_hz_per_t: f64,
        guard_slices: usize,
        spins_per_slice: usize,
    ) -> Result<Self, SpinError> {
        if n_slices == 0 {
            return Err(SpinError::InvalidLattice("need at least one slice".into()));
        }
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(slice_width) || !positive(gradient) || !positive(gamma_bar_hz_per_t) {
            return Err(SpinError::InvalidLattice(format!(
                "width, gradient and gyromagnetic ratio must be positive \
                 (w={slice_width}, g={gradient}, gamma_bar={gamma_bar_hz_per_t})"
            )));
        }
        if spins_per_slice == 0 {
            return Err(SpinError::InvalidLattice(
                "need at least one spin per slice".into(),
            ));
        }
        let scale = gamma_bar_hz_per_t * gradient;
        let z0 = guard_slices as f64 * slice_width;
        let bands: Vec<(f64, f64)> = (0..n_slices)
            .map(|s| {
                let lo = scale * (z0 + s as f64 * slice_width);
                let hi = scale * (z0 + (s + 1) as f64 * slice_width);
                (lo, hi)
            })
            .collect();
        for pair in bands.windows(2) {
            if pair[0].1 > pair[1].0 {
                return Err(SpinError::InvalidLattice(format!(
                    "offset bands overlap: {:?} and {:?}",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(Self {
            n_slices,
            slice_width,
            gradient,
            gamma_bar_hz_per_t,
            guard_slices,
            spins_per_slice,
            bands,
        })
    }

    /// Default sample geometry: 625 um slices, gradient chosen for a
    /// 100 Hz proton bandwidth per slice, four guard slices, eight
    /// sub-voxels per slice.
    pub fn chloroform_sample(n_slices: usize) -> Self {
        let slice_width = 625e-6;
        let bandwidth = 100.0;
        let gradient = bandwidth / (GAMMA_BAR_H_HZ_PER_T * slice_width);
        Self::new(
            n_slices,
            slice_width,
            gradient,
            GAMMA_BAR_H_HZ_PER_T,
            4,
            8,
        )
        .expect("default geometry is valid")
    }

    pub fn n_slices(&self) -> usize {
        self.n_slices
    }

    pub fn slice_width(&self) -> f64 {
        self.slice_width
    }

    pub fn gradient(&self) -> f64 {
        self.gradient
    }

    pub fn gamma_bar_hz_per_t(&self) -> f64 {
        self.gamma_bar_hz_per_t
    }

    pub fn guard_slices(&self) -> usize {
        self.guard_slices
    }

    pub fn spins_per_slice(&self) -> usize {
        self.spins_per_slice
    }

    pub fn bands(&self) -> &[(f64, f64)] {
        &self.bands
    }

    /// Frequency width of one slice for the addressed nucleus.
    pub fn slice_bandwidth_hz(&self) -> f64 {
        self.gamma_bar_hz_per_t * self.gradient * self.slice_width
    }

    /// Offset of the addressed nucleus at position `z`.
    pub fn offset_hz_at(&self, z: f64) -> f64 {
        self.gamma_bar_hz_per_t * self.gradient * z
    }

    /// Center position of slice `s`.
    pub fn slice_center_z(&self, s: usize) -> f64 {
        (self.guard_slices as f64 + s as f64 + 0.5) * self.slice_width
    }

    /// Band-center offset of slice `s`.
    pub fn band_center_hz(&self, s: usize) -> f64 {
        self.offset_hz_at(self.slice_center_z(s))
    }

    /// Offset of sub-voxel `v` of slice `s` (uniform grid inside the
    /// slice).
    pub fn subvoxel_offset_hz(&self, s: usize, v: usize) -> f64 {
        let z = (self.guard_slices as f64 + s as f64) * self.slice_width
            + (v as f64 + 0.5) * self.slice_width / self.spins_per_slice as f64;
        self.offset_hz_at(z)
    }

    /// Index of the band containing `offset_hz`, if any.
    pub fn band_of(&self, offset_hz: f64) -> Option<usize> {
        self.bands
            .iter()
            .position(|&(lo, hi)| offset_hz >= lo && offset_hz < hi)
    }
}
