//! Small fixed-size operator algebra: Pauli matrices, two-spin Kronecker
//! products, Hermitian matrix exponentials, and closed-form single-spin
//! rotations.

use nalgebra::{Matrix2, Matrix4, Vector2};

use crate::C64;

pub fn identity2() -> Matrix2<C64> {
    Matrix2::identity()
}

pub fn sigma_x() -> Matrix2<C64> {
    Matrix2::new(
        C64::new(0.0, 0.0),
        C64::new(1.0, 0.0),
        C64::new(1.0, 0.0),
        C64::new(0.0, 0.0),
    )
}

pub fn sigma_y() -> Matrix2<C64> {
    Matrix2::new(
        C64::new(0.0, 0.0),
        C64::new(0.0, -1.0),
        C64::new(0.0, 1.0),
        C64::new(0.0, 0.0),
    )
}

/// `sigma_z |0> = +|0>`.
pub fn sigma_z() -> Matrix2<C64> {
    Matrix2::new(
        C64::new(1.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(-1.0, 0.0),
    )
}

/// Kronecker product `a (x) b` with the first factor on the left slot
/// (spin 1).
pub fn kron(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Matrix4<C64> {
    let mut out = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Pauli operator on spin 1: `op (x) 1`.
pub fn on_spin1(op: &Matrix2<C64>) -> Matrix4<C64> {
    kron(op, &identity2())
}

/// Pauli operator on spin 2: `1 (x) op`.
pub fn on_spin2(op: &Matrix2<C64>) -> Matrix4<C64> {
    kron(&identity2(), op)
}

/// Largest elementwise modulus of `a - b`.
pub fn max_abs_diff(a: &Matrix4<C64>, b: &Matrix4<C64>) -> f64 {
    (a - b).iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Deviation of `h` from Hermiticity.
pub fn hermiticity_defect(h: &Matrix4<C64>) -> f64 {
    max_abs_diff(h, &h.adjoint())
}

/// Deviation of `u` from unitarity.
pub fn unitarity_defect(u: &Matrix4<C64>) -> f64 {
    max_abs_diff(&(u.adjoint() * u), &Matrix4::identity())
}

/// `exp(-i H t)` for Hermitian `H` via its eigendecomposition. Exact for
/// a piecewise-constant Hamiltonian segment of duration `t`.
pub fn evolution_operator(h: &Matrix4<C64>, t: f64) -> Matrix4<C64> {
    let eig = h.symmetric_eigen();
    let mut out = Matrix4::zeros();
    for k in 0..4 {
        let phase = C64::new(0.0, -eig.eigenvalues[k] * t).exp();
        let v = eig.eigenvectors.column(k);
        for i in 0..4 {
            for j in 0..4 {
                out[(i, j)] += phase * v[i] * v[j].conj();
            }
        }
    }
    out
}

/// Closed-form `exp(+i (t/2) (vx sx + vy sy + vz sz))` on one spin:
/// `cos(a) I + i sin(a) (v_hat . sigma)` with `a = |v| t / 2`.
pub fn su2_exponential(vx: f64, vy: f64, vz: f64, t: f64) -> Matrix2<C64> {
    let norm = (vx * vx + vy * vy + vz * vz).sqrt();
    let angle = 0.5 * norm * t;
    if norm == 0.0 || angle == 0.0 {
        return identity2();
    }
    let (nx, ny, nz) = (vx / norm, vy / norm, vz / norm);
    let c = angle.cos();
    let s = angle.sin();
    Matrix2::new(
        C64::new(c, s * nz),
        C64::new(s * ny, s * nx),
        C64::new(-s * ny, s * nx),
        C64::new(c, -s * nz),
    )
}

/// Exact rotation `exp(+i (theta/2) (cos(phase) sx + sin(phase) sy))`,
/// the zero-duration limit of an RF pulse with that phase.
pub fn rotation(phase: f64, theta: f64) -> Matrix2<C64> {
    su2_exponential(phase.cos(), phase.sin(), 0.0, theta)
}

/// Applies `u` to one spinor component pair.
pub fn apply_su2(u: &Matrix2<C64>, psi: &Vector2<C64>) -> Vector2<C64> {
    u * psi
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn su2_closed_form_matches_series() {
        // Cross-check the closed form against a fine-grained product of
        // first-order steps.
        let (vx, vy, vz, t) = (1.3, -0.4, 2.2, 0.9);
        let exact = su2_exponential(vx, vy, vz, t);

        let n = 200_000;
        let dt = t / n as f64;
        let gen = (sigma_x() * C64::new(vx, 0.0)
            + sigma_y() * C64::new(vy, 0.0)
            + sigma_z() * C64::new(vz, 0.0))
            * C64::new(0.0, 0.5 * dt);
        let step = identity2() + gen;
        let mut acc = identity2();
        for _ in 0..n {
            acc = step * acc;
        }
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(exact[(i, j)].re, acc[(i, j)].re, epsilon = 1e-4);
                assert_abs_diff_eq!(exact[(i, j)].im, acc[(i, j)].im, epsilon = 1e-4);
            }
        }
    }

    #[test]
    fn evolution_operator_is_unitary_and_diagonal_case_exact() {
        let h = kron(&sigma_z(), &sigma_z()) * C64::new(1.7, 0.0);
        let u = evolution_operator(&h, 0.3);
        assert!(unitarity_defect(&u) < 1e-12);
        // Diagonal generator: phases are exp(-i * 1.7 * 0.3 * (+-1)).
        let expected = C64::new(0.0, -1.7 * 0.3).exp();
        assert_abs_diff_eq!(u[(0, 0)].re, expected.re, epsilon = 1e-12);
        assert_abs_diff_eq!(u[(0, 0)].im, expected.im, epsilon = 1e-12);
        assert_abs_diff_eq!(u[(1, 1)].re, expected.conj().re, epsilon = 1e-12);
    }

    #[test]
    fn rotation_by_pi_about_x_flips() {
        let u = rotation(0.0, std::f64::consts::PI);
        // exp(+i pi/2 sx) = i sx.
        assert_abs_diff_eq!(u[(0, 1)].im, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(u[(1, 0)].im, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(u[(0, 0)].norm(), 0.0, epsilon = 1e-12);
    }
}
