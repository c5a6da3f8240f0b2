use qlg_core::MassDensityField;

use crate::ReferenceError;

/// Exact density update of one lattice step,
/// `rho'(z) = [rho(z + dz) + rho(z - dz)] / 2` with periodic indices.
///
/// This is the classical oracle the quantum pipeline must reproduce
/// elementwise. The pairwise halving conserves the total exactly.
pub fn classical_average_step(rho: &MassDensityField) -> MassDensityField {
    let n = rho.len();
    let values = rho.values();
    let averaged: Vec<f64> = (0..n)
        .map(|i| 0.5 * (values[(i + 1) % n] + values[(i + n - 1) % n]))
        .collect();
    MassDensityField::new(averaged).expect("averaging keeps values in range")
}

/// Per-site residual of the discrete diffusion relation
///
/// ```text
/// [rho_next(z) - rho_t(z)] - [rho_t(z+dz) - 2 rho_t(z) + rho_t(z-dz)] / 2
/// ```
///
/// which vanishes identically when `rho_next` is the averaged field.
pub fn finite_difference_residual(
    rho_t: &MassDensityField,
    rho_next: &MassDensityField,
) -> Result<Vec<f64>, ReferenceError> {
    if rho_t.len() != rho_next.len() {
        return Err(ReferenceError::LengthMismatch {
            left: rho_t.len(),
            right: rho_next.len(),
        });
    }
    let n = rho_t.len();
    let v = rho_t.values();
    Ok((0..n)
        .map(|i| {
            let laplacian = v[(i + 1) % n] - 2.0 * v[i] + v[(i + n - 1) % n];
            (rho_next.get(i) - v[i]) - 0.5 * laplacian
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn field(values: &[f64]) -> MassDensityField {
        MassDensityField::new(values.to_vec()).unwrap()
    }

    #[test]
    fn averaging_examples() {
        let out = classical_average_step(&field(&[1.0, 0.0, 0.0, 0.0]));
        assert_eq!(out.values(), &[0.0, 0.5, 0.0, 0.5]);

        let uniform = field(&[0.7; 6]);
        assert_eq!(classical_average_step(&uniform), uniform);

        let out = classical_average_step(&field(&[1.0, 1.0, 0.0, 0.0]));
        assert_eq!(out.values(), &[0.5, 0.5, 0.5, 0.5]);
    }

    #[test]
    fn residual_vanishes_on_averaged_pairs() {
        let rho = field(&[0.3, 1.4, 0.2, 0.9, 1.1]);
        let next = classical_average_step(&rho);
        for r in finite_difference_residual(&rho, &next).unwrap() {
            assert_abs_diff_eq!(r, 0.0, epsilon = 1e-12);
        }
        let uniform = field(&[1.0; 5]);
        for r in finite_difference_residual(&uniform, &uniform).unwrap() {
            assert_eq!(r, 0.0);
        }
    }

    #[test]
    fn residual_detects_a_stalled_field() {
        // Direct evaluation: for rho_next = rho_t the residual reduces to
        // minus half the discrete Laplacian, nonzero somewhere for any
        // non-uniform field.
        let rho = field(&[1.0, 0.0, 0.0, 0.0]);
        let residuals = finite_difference_residual(&rho, &rho).unwrap();
        let expected = [1.0, -0.5, 0.0, -0.5];
        for (r, e) in residuals.iter().zip(expected) {
            assert_abs_diff_eq!(*r, e, epsilon = 1e-15);
        }
        assert!(residuals.iter().any(|r| r.abs() > 0.1));
    }

    #[test]
    fn residual_rejects_mismatched_lengths() {
        let a = field(&[1.0; 4]);
        let b = field(&[1.0; 5]);
        assert!(matches!(
            finite_difference_residual(&a, &b),
            Err(ReferenceError::LengthMismatch { left: 4, right: 5 })
        ));
    }

    #[test]
    fn averaging_conserves_mass_exactly() {
        let rho = field(&[0.25, 1.75, 0.0, 2.0, 0.5, 1.0, 0.125, 0.375]);
        let total = rho.total_mass();
        assert_eq!(classical_average_step(&rho).total_mass(), total);
    }
}
