use nalgebra::{Matrix4, Vector4};

use crate::algebra::hermiticity_defect;
use crate::{SpinError, C64, ALGEBRA_TOL};

/// Tolerance below zero allowed for eigenvalues; covers roundoff from
/// long propagation chains.
const POSITIVITY_TOL: f64 = 1e-10;

/// Validated two-spin density matrix: Hermitian, unit trace, and
/// positive semidefinite to tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: Matrix4<C64>,
}

impl DensityMatrix {
    pub fn new(matrix: Matrix4<C64>) -> Result<Self, SpinError> {
        let herm = hermiticity_defect(&matrix);
        if herm > ALGEBRA_TOL {
            return Err(SpinError::InvalidState {
                what: "Hermiticity",
                deviation: herm,
            });
        }
        let trace_dev = (matrix.trace() - C64::new(1.0, 0.0)).norm();
        if trace_dev > ALGEBRA_TOL {
            return Err(SpinError::InvalidState {
                what: "unit trace",
                deviation: trace_dev,
            });
        }
        let min_eig = matrix
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::MAX, f64::min);
        if min_eig < -POSITIVITY_TOL {
            return Err(SpinError::InvalidState {
                what: "positivity",
                deviation: -min_eig,
            });
        }
        Ok(Self { matrix })
    }

    /// Projector onto a pure state.
    pub fn from_pure(state: &Vector4<C64>) -> Result<Self, SpinError> {
        let norm_sq: f64 = state.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > ALGEBRA_TOL {
            return Err(SpinError::InvalidState {
                what: "pure-state normalization",
                deviation: (norm_sq - 1.0).abs(),
            });
        }
        let mut matrix = Matrix4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                matrix[(i, j)] = state[i] * state[j].conj();
            }
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.matrix
    }

    /// `Tr(op rho)`, real part (observables are Hermitian).
    pub fn expectation(&self, op: &Matrix4<C64>) -> f64 {
        (op * self.matrix).trace().re
    }
}
