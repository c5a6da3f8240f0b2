use rayon::prelude::*;

use crate::{
    CollisionOperator, LatticeConfig, LatticeError, MassDensityField, NodeState, OccupationPair,
};

/// Splits a mass density into local-equilibrium pairs, `f1 = f2 = rho/2`
/// at every site. Rejects densities outside the encodable range.
pub fn equilibrium_pairs(rho: &MassDensityField) -> Result<Vec<OccupationPair>, LatticeError> {
    rho.values()
        .iter()
        .enumerate()
        .map(|(site, &value)| {
            OccupationPair::new(value / 2.0, value / 2.0)
                .map_err(|_| LatticeError::DensityOutOfRange { site, value })
        })
        .collect()
}

/// Streams occupations to the nearest neighbours with periodic
/// wraparound: `f1` moves one site toward +z, `f2` one site toward -z.
/// The multisets of `f1` and of `f2` values are preserved exactly.
pub fn stream(
    pairs: &[OccupationPair],
    cfg: &LatticeConfig,
) -> Result<Vec<OccupationPair>, LatticeError> {
    let n = cfg.n_sites();
    if pairs.len() != n {
        return Err(LatticeError::LengthMismatch {
            expected: n,
            found: pairs.len(),
        });
    }
    Ok((0..n)
        .map(|i| {
            let f1 = pairs[(i + n - 1) % n].f1();
            let f2 = pairs[(i + 1) % n].f2();
            OccupationPair::new(f1, f2).expect("streaming permutes valid values")
        })
        .collect())
}

/// One full lattice update: encode each pair into a node state, collide,
/// measure the intermediate occupations, and stream them. Sites are
/// independent until the streaming barrier, so the sitewise part runs in
/// parallel; the result does not depend on scheduling.
pub fn step(
    pairs: &[OccupationPair],
    collision: &CollisionOperator,
    cfg: &LatticeConfig,
) -> Result<Vec<OccupationPair>, LatticeError> {
    if pairs.len() != cfg.n_sites() {
        return Err(LatticeError::LengthMismatch {
            expected: cfg.n_sites(),
            found: pairs.len(),
        });
    }
    let collided: Vec<OccupationPair> = pairs
        .par_iter()
        .map(|&pair| collision.apply(&NodeState::encode(pair)).occupations())
        .collect();
    stream(&collided, cfg)
}

/// One recorded instant of a run: the density together with the
/// occupation pairs that streamed into it (frame 0 carries the
/// equilibrium split of the initial density).
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub density: MassDensityField,
    pub pairs: Vec<OccupationPair>,
}

impl Frame {
    fn from_pairs(pairs: Vec<OccupationPair>) -> Self {
        let values = pairs.iter().map(OccupationPair::density).collect();
        let density = MassDensityField::new(values).expect("pair sums stay within [0, 2]");
        Frame { density, pairs }
    }
}

/// Evolves an initial density for `steps` updates and records every
/// frame, `steps + 1` in total.
///
/// Occupation values, not quantum states, cross step boundaries: each
/// update re-encodes from the previous frame's re-equilibrated density.
/// Total mass is conserved to roundoff.
pub fn run_frames(
    rho0: &MassDensityField,
    steps: usize,
    collision: &CollisionOperator,
    cfg: &LatticeConfig,
) -> Result<Vec<Frame>, LatticeError> {
    if rho0.len() != cfg.n_sites() {
        return Err(LatticeError::LengthMismatch {
            expected: cfg.n_sites(),
            found: rho0.len(),
        });
    }
    let mut frames = Vec::with_capacity(steps + 1);
    frames.push(Frame {
        density: rho0.clone(),
        pairs: equilibrium_pairs(rho0)?,
    });
    for _ in 0..steps {
        let current = frames.last().expect("at least the initial frame");
        let pairs = equilibrium_pairs(&current.density)?;
        let streamed = step(&pairs, collision, cfg)?;
        frames.push(Frame::from_pairs(streamed));
    }
    Ok(frames)
}

/// Density-only trajectory of `run_frames`.
pub fn run(
    rho0: &MassDensityField,
    steps: usize,
    collision: &CollisionOperator,
    cfg: &LatticeConfig,
) -> Result<Vec<MassDensityField>, LatticeError> {
    Ok(run_frames(rho0, steps, collision, cfg)?
        .into_iter()
        .map(|frame| frame.density)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pairs_of(values: &[(f64, f64)]) -> Vec<OccupationPair> {
        values
            .iter()
            .map(|&(a, b)| OccupationPair::new(a, b).unwrap())
            .collect()
    }

    #[test]
    fn equilibrium_examples() {
        let rho = MassDensityField::new(vec![1.0; 4]).unwrap();
        for pair in equilibrium_pairs(&rho).unwrap() {
            assert_eq!((pair.f1(), pair.f2()), (0.5, 0.5));
        }

        let rho = MassDensityField::new(vec![0.0, 0.0]).unwrap();
        for pair in equilibrium_pairs(&rho).unwrap() {
            assert_eq!((pair.f1(), pair.f2()), (0.0, 0.0));
        }

        let rho = MassDensityField::new(vec![2.0, 0.6]).unwrap();
        let pairs = equilibrium_pairs(&rho).unwrap();
        assert_eq!((pairs[0].f1(), pairs[0].f2()), (1.0, 1.0));
        assert_abs_diff_eq!(pairs[1].f1(), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(pairs[1].f2(), 0.3, epsilon = 1e-15);
    }

    #[test]
    fn streaming_shifts_in_opposite_directions() {
        let cfg = LatticeConfig::with_sites(4).unwrap();
        let pairs = pairs_of(&[(1.0, 1.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        let out = stream(&pairs, &cfg).unwrap();
        let f1: Vec<f64> = out.iter().map(OccupationPair::f1).collect();
        let f2: Vec<f64> = out.iter().map(OccupationPair::f2).collect();
        assert_eq!(f1, vec![0.0, 1.0, 0.0, 0.0]);
        assert_eq!(f2, vec![0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn streaming_fixes_uniform_fields_and_composes() {
        let cfg = LatticeConfig::with_sites(5).unwrap();
        let uniform = pairs_of(&[(0.3, 0.7); 5]);
        assert_eq!(stream(&uniform, &cfg).unwrap(), uniform);

        let pairs = pairs_of(&[(0.9, 0.1), (0.2, 0.4), (0.0, 0.0), (0.5, 0.5), (0.1, 0.8)]);
        let twice = stream(&stream(&pairs, &cfg).unwrap(), &cfg).unwrap();
        for i in 0..5 {
            assert_eq!(twice[i].f1(), pairs[(i + 5 - 2) % 5].f1());
            assert_eq!(twice[i].f2(), pairs[(i + 2) % 5].f2());
        }
    }

    #[test]
    fn stream_rejects_length_mismatch() {
        let cfg = LatticeConfig::with_sites(4).unwrap();
        let pairs = pairs_of(&[(0.1, 0.1); 3]);
        assert!(matches!(
            stream(&pairs, &cfg),
            Err(LatticeError::LengthMismatch { expected: 4, found: 3 })
        ));
    }

    #[test]
    fn step_matches_neighbour_average_example() {
        let cfg = LatticeConfig::with_sites(4).unwrap();
        let rho = MassDensityField::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let out = step(
            &equilibrium_pairs(&rho).unwrap(),
            &CollisionOperator::sqrt_swap(),
            &cfg,
        )
        .unwrap();
        let densities: Vec<f64> = out.iter().map(OccupationPair::density).collect();
        assert_abs_diff_eq!(densities[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(densities[1], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(densities[2], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(densities[3], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn uniform_density_is_a_fixed_point() {
        let cfg = LatticeConfig::with_sites(6).unwrap();
        let rho = MassDensityField::uniform(6, 0.8).unwrap();
        let out = step(
            &equilibrium_pairs(&rho).unwrap(),
            &CollisionOperator::sqrt_swap(),
            &cfg,
        )
        .unwrap();
        for pair in out {
            assert_abs_diff_eq!(pair.density(), 0.8, epsilon = 1e-14);
        }
    }

    #[test]
    fn step_density_equals_inline_averaging_oracle() {
        // Independent oracle: rho'(z) = (rho(z-1) + rho(z+1)) / 2 with
        // periodic indices, written directly from the update rule.
        let cfg = LatticeConfig::with_sites(16).unwrap();
        let values: Vec<f64> = (0..16)
            .map(|i| 1.0 + (0.37 * i as f64).sin().abs())
            .collect();
        let rho = MassDensityField::new(values.clone()).unwrap();
        let out = step(
            &equilibrium_pairs(&rho).unwrap(),
            &CollisionOperator::sqrt_swap(),
            &cfg,
        )
        .unwrap();
        for i in 0..16 {
            let expected = 0.5 * (values[(i + 15) % 16] + values[(i + 1) % 16]);
            assert_abs_diff_eq!(out[i].density(), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_steps_returns_initial_frame() {
        let cfg = LatticeConfig::with_sites(4).unwrap();
        let rho = MassDensityField::new(vec![0.1, 0.9, 0.4, 0.2]).unwrap();
        let traj = run(&rho, 0, &CollisionOperator::sqrt_swap(), &cfg).unwrap();
        assert_eq!(traj.len(), 1);
        assert_eq!(traj[0], rho);
    }

    #[test]
    fn delta_relaxes_to_uniform() {
        // Odd ring: neighbour averaging on an even ring splits into two
        // parity sublattices and a delta oscillates between them forever.
        let cfg = LatticeConfig::with_sites(9).unwrap();
        let rho = MassDensityField::delta(9, 3, 1.6).unwrap();
        let traj = run(&rho, 500, &CollisionOperator::sqrt_swap(), &cfg).unwrap();
        let last = traj.last().unwrap();
        for &v in last.values() {
            assert_abs_diff_eq!(v, 1.6 / 9.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn mass_is_conserved_along_a_run() {
        let cfg = LatticeConfig::with_sites(16).unwrap();
        let values: Vec<f64> = (0..16).map(|i| (i as f64 / 7.0).min(1.9)).collect();
        let rho = MassDensityField::new(values).unwrap();
        let total = rho.total_mass();
        let traj = run(&rho, 100, &CollisionOperator::sqrt_swap(), &cfg).unwrap();
        for frame in traj {
            assert_abs_diff_eq!(frame.total_mass(), total, epsilon = 1e-10);
        }
    }
}
