//! Trajectory files: one CSV row per site per step with the density and
//! the occupation pair behind it. Floats are printed with 17 significant
//! digits so a written file reads back bit-exactly.

use std::fmt::Write as _;
use std::path::Path;

use qlg_core::{LatticeConfig, MassDensityField, OccupationPair};

use crate::CliError;

pub const TRAJECTORY_HEADER: &str = "step,site,z,rho,f1,f2";

/// In-memory trajectory: per frame, the density and its occupation
/// pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dz: f64,
    pub frames: Vec<Frame>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub density: MassDensityField,
    pub pairs: Vec<OccupationPair>,
}

impl Frame {
    pub fn from_pairs(pairs: Vec<OccupationPair>) -> Result<Self, CliError> {
        let density =
            MassDensityField::new(pairs.iter().map(OccupationPair::density).collect())?;
        Ok(Self { density, pairs })
    }

    pub fn equilibrium(density: MassDensityField) -> Result<Self, CliError> {
        let pairs = density
            .values()
            .iter()
            .map(|&r| OccupationPair::new(r / 2.0, r / 2.0))
            .collect::<Result<_, _>>()?;
        Ok(Self { density, pairs })
    }
}

fn full(value: f64) -> String {
    format!("{value:.16e}")
}

impl Trajectory {
    pub fn n_sites(&self) -> usize {
        self.frames.first().map_or(0, |f| f.density.len())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(TRAJECTORY_HEADER);
        out.push('\n');
        for (step, frame) in self.frames.iter().enumerate() {
            for (site, pair) in frame.pairs.iter().enumerate() {
                writeln!(
                    out,
                    "{step},{site},{},{},{},{}",
                    full(site as f64 * self.dz),
                    full(frame.density.get(site)),
                    full(pair.f1()),
                    full(pair.f2()),
                )
                .expect("writing to string cannot fail");
            }
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_csv())
            .map_err(|err| CliError::validation(format!("cannot write {}: {err}", path.display())))
    }

    pub fn read_csv(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|err| {
            CliError::validation(format!("cannot read trajectory {}: {err}", path.display()))
        })?;
        Self::parse_csv(&text)
            .map_err(|err| CliError::validation(format!("{}: {err}", path.display())))
    }

    pub fn parse_csv(text: &str) -> Result<Self, String> {
        let mut lines = text.lines();
        match lines.next() {
            Some(header) if header.trim() == TRAJECTORY_HEADER => {}
            other => return Err(format!("unexpected header {other:?}")),
        }
        let mut rows: Vec<(usize, usize, f64, f64, f64)> = Vec::new();
        for (index, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(format!("row {}: expected 6 fields", index + 2));
            }
            let parse_usize = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|e| format!("row {}: {e}", index + 2))
            };
            let parse_f64 = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| format!("row {}: {e}", index + 2))
            };
            rows.push((
                parse_usize(fields[0])?,
                parse_usize(fields[1])?,
                parse_f64(fields[2])?,
                parse_f64(fields[4])?,
                parse_f64(fields[5])?,
            ));
        }
        if rows.is_empty() {
            return Err("trajectory has no rows".into());
        }
        let n_sites = rows.iter().map(|r| r.1).max().unwrap() + 1;
        let n_steps = rows.iter().map(|r| r.0).max().unwrap() + 1;
        if rows.len() != n_sites * n_steps {
            return Err(format!(
                "expected {} rows for {n_steps} steps x {n_sites} sites, found {}",
                n_sites * n_steps,
                rows.len()
            ));
        }
        let dz = rows
            .iter()
            .find(|r| r.1 == 1)
            .map(|r| r.2)
            .unwrap_or(1.0);

        let mut pair_grid = vec![vec![None; n_sites]; n_steps];
        for (step, site, _z, f1, f2) in rows {
            if pair_grid[step][site].is_some() {
                return Err(format!("duplicate row for step {step} site {site}"));
            }
            pair_grid[step][site] = Some(
                OccupationPair::new(f1, f2).map_err(|e| format!("step {step} site {site}: {e}"))?,
            );
        }
        let mut frames = Vec::with_capacity(n_steps);
        for (step, row) in pair_grid.into_iter().enumerate() {
            let pairs: Vec<OccupationPair> = row
                .into_iter()
                .enumerate()
                .map(|(site, p)| p.ok_or(format!("missing row for step {step} site {site}")))
                .collect::<Result<_, _>>()?;
            frames.push(Frame::from_pairs(pairs).map_err(|e| e.to_string())?);
        }
        Ok(Self { dz, frames })
    }

    /// Root-mean-square difference of two frames' densities.
    pub fn rms_between(a: &MassDensityField, b: &MassDensityField) -> f64 {
        let sum: f64 = a
            .values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y) * (x - y))
            .sum();
        (sum / a.len() as f64).sqrt()
    }

    pub fn lattice_config(&self) -> Result<LatticeConfig, CliError> {
        Ok(LatticeConfig::new(self.n_sites(), self.dz, 1.0)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Trajectory {
        let rho = MassDensityField::new(vec![0.1, 1.9, 1.0 / 3.0, 0.7]).unwrap();
        Trajectory {
            dz: 0.5,
            frames: vec![
                Frame::equilibrium(rho.clone()).unwrap(),
                Frame::equilibrium(rho).unwrap(),
            ],
        }
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let traj = sample();
        let text = traj.to_csv();
        let back = Trajectory::parse_csv(&text).unwrap();
        assert_eq!(back, traj);
        // And the re-serialization is byte-identical.
        assert_eq!(back.to_csv(), text);
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(Trajectory::parse_csv("nope\n").is_err());
        let mut text = sample().to_csv();
        text.push_str("9,9,0,0,0\n");
        assert!(Trajectory::parse_csv(&text).is_err());

        // Truncated file: drop the last row.
        let full = sample().to_csv();
        let truncated: Vec<&str> = full.trim_end().lines().collect();
        let shorter = truncated[..truncated.len() - 1].join("\n");
        assert!(Trajectory::parse_csv(&shorter).is_err());
    }
}
