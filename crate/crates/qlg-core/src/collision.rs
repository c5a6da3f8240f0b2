use nalgebra::Matrix4;

use crate::{LatticeError, NodeState, C64, ALGEBRA_TOL};

/// On-site collision unitary acting on one two-qubit node.
///
/// Any 4x4 unitary is accepted, so alternative collision rules can be
/// plugged in, but the shipped instance is the square-root-of-SWAP
///
/// ```text
///         | 1      0          0      0 |
///  C    = | 0  (1+i)/2    (1-i)/2    0 |
///         | 0  (1-i)/2    (1+i)/2    0 |
///         | 0      0          0      1 |
/// ```
///
/// whose measured effect is to average the two occupations at a site.
#[derive(Debug, Clone, PartialEq)]
pub struct CollisionOperator {
    matrix: Matrix4<C64>,
}

impl CollisionOperator {
    /// Wraps a matrix after checking unitarity to `ALGEBRA_TOL`.
    pub fn new(matrix: Matrix4<C64>) -> Result<Self, LatticeError> {
        let gram = matrix.adjoint() * matrix;
        let deviation = (gram - Matrix4::identity())
            .iter()
            .map(|x| x.norm())
            .fold(0.0f64, f64::max);
        if deviation > ALGEBRA_TOL {
            return Err(LatticeError::NotUnitary(deviation));
        }
        Ok(Self { matrix })
    }

    /// The square-root-of-SWAP collision rule used for diffusive
    /// dynamics. Squaring it yields the SWAP gate.
    pub fn sqrt_swap() -> Self {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let p = C64::new(0.5, 0.5);
        let m = C64::new(0.5, -0.5);
        #[rustfmt::skip]
        let matrix = Matrix4::new(
            l, o, o, o,
            o, p, m, o,
            o, m, p, o,
            o, o, o, l,
        );
        Self { matrix }
    }

    /// The full SWAP gate, handy as a reference for algebra checks.
    pub fn swap() -> Self {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        #[rustfmt::skip]
        let matrix = Matrix4::new(
            l, o, o, o,
            o, o, l, o,
            o, l, o, o,
            o, o, o, l,
        );
        Self { matrix }
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.matrix
    }

    /// Applies the collision, `|psi'> = C |psi>`. Unitarity keeps the
    /// state normalized.
    pub fn apply(&self, state: &NodeState) -> NodeState {
        NodeState::from_unchecked(self.matrix * state.amplitudes())
    }
}

impl Default for CollisionOperator {
    fn default() -> Self {
        Self::sqrt_swap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::OccupationPair;
    use approx::assert_abs_diff_eq;
    use nalgebra::Vector4;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn max_abs_diff(a: &Matrix4<C64>, b: &Matrix4<C64>) -> f64 {
        (a - b).iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn default_squares_to_swap() {
        let c = CollisionOperator::sqrt_swap();
        let squared = c.matrix() * c.matrix();
        assert!(max_abs_diff(&squared, CollisionOperator::swap().matrix()) < 1e-15);
    }

    #[test]
    fn rejects_non_unitary_matrices() {
        let mut m = Matrix4::identity();
        m[(0, 0)] = c(2.0, 0.0);
        assert!(matches!(
            CollisionOperator::new(m),
            Err(LatticeError::NotUnitary(_))
        ));
    }

    #[test]
    fn fixes_ground_state() {
        let ground = NodeState::encode(OccupationPair::new(0.0, 0.0).unwrap());
        let out = CollisionOperator::sqrt_swap().apply(&ground);
        assert_eq!(out.amplitudes()[0], c(1.0, 0.0));
    }

    #[test]
    fn action_on_10_matches_matrix_vector_oracle() {
        // Independent oracle: write the matrix rows literally and do the
        // multiply by hand for the basis vector |10> (index 2).
        let input = Vector4::new(c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        let expected = Vector4::new(c(0.0, 0.0), c(0.5, -0.5), c(0.5, 0.5), c(0.0, 0.0));

        let out = CollisionOperator::sqrt_swap().apply(&NodeState::new(input).unwrap());
        for i in 0..4 {
            assert_abs_diff_eq!(out.amplitudes()[i].re, expected[i].re, epsilon = 1e-15);
            assert_abs_diff_eq!(out.amplitudes()[i].im, expected[i].im, epsilon = 1e-15);
        }
    }

    #[test]
    fn equal_occupations_are_a_fixed_point_of_measurement() {
        let pair = OccupationPair::new(0.4, 0.4).unwrap();
        let out = CollisionOperator::sqrt_swap()
            .apply(&NodeState::encode(pair))
            .occupations();
        assert_abs_diff_eq!(out.f1(), 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(out.f2(), 0.4, epsilon = 1e-15);
    }

    #[test]
    fn collision_of_one_zero_pair_averages() {
        // Matrix oracle for encode(1, 0) = |10>: occupations after the
        // collision are (1/2, 1/2).
        let out = CollisionOperator::sqrt_swap()
            .apply(&NodeState::encode(OccupationPair::new(1.0, 0.0).unwrap()))
            .occupations();
        assert_abs_diff_eq!(out.f1(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(out.f2(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn commutes_with_total_number_operator() {
        // n1 + n2 = diag(0, 1, 1, 2) in the (00, 01, 10, 11) basis.
        let mut n_total = Matrix4::zeros();
        n_total[(1, 1)] = c(1.0, 0.0);
        n_total[(2, 2)] = c(1.0, 0.0);
        n_total[(3, 3)] = c(2.0, 0.0);
        let u = CollisionOperator::sqrt_swap();
        let commutator = u.matrix() * n_total - n_total * u.matrix();
        assert!(commutator.iter().map(|x| x.norm()).fold(0.0, f64::max) < 1e-15);
    }
}
