//! Trajectory comparison and plot-data emission.

use std::fmt::Write as _;

use crate::trajectory::Trajectory;
use crate::CliError;

/// Per-step comparison of two trajectories with the same shape.
#[derive(Debug, Clone)]
pub struct CompareReport {
    pub steps: Vec<StepComparison>,
    /// Relative total-mass drift of each trajectory over its run.
    pub mass_drift_a: f64,
    pub mass_drift_b: f64,
}

#[derive(Debug, Clone)]
pub struct StepComparison {
    pub step: usize,
    pub rms: f64,
    pub max_abs: f64,
}

impl CompareReport {
    pub fn max_rms(&self) -> f64 {
        self.steps.iter().map(|s| s.rms).fold(0.0, f64::max)
    }

    pub fn render(&self) -> String {
        let mut out = String::from("step rms max_abs\n");
        for s in &self.steps {
            writeln!(out, "{} {:.3e} {:.3e}", s.step, s.rms, s.max_abs)
                .expect("writing to string cannot fail");
        }
        writeln!(
            out,
            "mass drift: a {:.3e}, b {:.3e}",
            self.mass_drift_a, self.mass_drift_b
        )
        .expect("writing to string cannot fail");
        out
    }
}

pub fn compare(a: &Trajectory, b: &Trajectory) -> Result<CompareReport, CliError> {
    if a.frames.len() != b.frames.len() || a.n_sites() != b.n_sites() {
        return Err(CliError::validation(format!(
            "trajectory shapes differ: {}x{} vs {}x{}",
            a.frames.len(),
            a.n_sites(),
            b.frames.len(),
            b.n_sites()
        )));
    }
    let steps = a
        .frames
        .iter()
        .zip(&b.frames)
        .enumerate()
        .map(|(step, (fa, fb))| {
            let rms = Trajectory::rms_between(&fa.density, &fb.density);
            let max_abs = fa
                .density
                .values()
                .iter()
                .zip(fb.density.values())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            StepComparison { step, rms, max_abs }
        })
        .collect();

    let drift = |t: &Trajectory| -> f64 {
        let first = t.frames.first().map_or(0.0, |f| f.density.total_mass());
        let last = t.frames.last().map_or(0.0, |f| f.density.total_mass());
        if first == 0.0 {
            (last - first).abs()
        } else {
            ((last - first) / first).abs()
        }
    };

    Ok(CompareReport {
        steps,
        mass_drift_a: drift(a),
        mass_drift_b: drift(b),
    })
}

/// Long-format plot data: densities normalized by the peak of the
/// initial frame, one row per step and site, ready for overlay plots.
pub fn plot_data(trajectory: &Trajectory) -> Result<String, CliError> {
    let peak = trajectory
        .frames
        .first()
        .ok_or_else(|| CliError::validation("empty trajectory"))?
        .density
        .values()
        .iter()
        .cloned()
        .fold(0.0f64, f64::max);
    if peak <= 0.0 {
        return Err(CliError::validation(
            "initial frame has no mass to normalize against",
        ));
    }
    let mut out = String::from("step,site,z,rho_normalized\n");
    for (step, frame) in trajectory.frames.iter().enumerate() {
        for (site, &rho) in frame.density.values().iter().enumerate() {
            writeln!(
                out,
                "{step},{site},{:.16e},{:.16e}",
                site as f64 * trajectory.dz,
                rho / peak
            )
            .expect("writing to string cannot fail");
        }
    }
    Ok(out)
}

/// Minimal static overlay chart of the normalized trajectory.
pub fn plot_svg(trajectory: &Trajectory) -> Result<String, CliError> {
    let peak = trajectory
        .frames
        .first()
        .ok_or_else(|| CliError::validation("empty trajectory"))?
        .density
        .values()
        .iter()
        .cloned()
        .fold(0.0f64, f64::max);
    if peak <= 0.0 {
        return Err(CliError::validation(
            "initial frame has no mass to normalize against",
        ));
    }
    let (width, height, margin) = (640.0, 400.0, 44.0);
    let n = trajectory.n_sites().max(2);
    let n_frames = trajectory.frames.len();

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">"
    )
    .expect("writing to string cannot fail");
    writeln!(
        out,
        "<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>\
         <line x1=\"{margin}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"#333\"/>\
         <line x1=\"{margin}\" y1=\"{margin}\" x2=\"{margin}\" y2=\"{y0}\" stroke=\"#333\"/>",
        y0 = height - margin,
        x1 = width - margin,
    )
    .expect("writing to string cannot fail");
    for (step, frame) in trajectory.frames.iter().enumerate() {
        let hue = (step * 300) / n_frames.max(1);
        let mut points = String::new();
        for (site, &rho) in frame.density.values().iter().enumerate() {
            let x = margin + (width - 2.0 * margin) * site as f64 / (n - 1) as f64;
            let y = (height - margin) - (height - 2.0 * margin) * (rho / peak).clamp(0.0, 1.2)
                / 1.2;
            write!(points, "{x:.2},{y:.2} ").expect("writing to string cannot fail");
        }
        writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"hsl({hue},70%,45%)\" stroke-width=\"1.5\" \
             points=\"{}\"/>",
            points.trim_end()
        )
        .expect("writing to string cannot fail");
    }
    writeln!(
        out,
        "<text x=\"{x}\" y=\"{y}\" font-size=\"12\" fill=\"#333\">site</text>\
         <text x=\"6\" y=\"{ty}\" font-size=\"12\" fill=\"#333\">rho / rho0 max</text>",
        x = width / 2.0,
        y = height - 12.0,
        ty = margin - 16.0,
    )
    .expect("writing to string cannot fail");
    writeln!(out, "</svg>").expect("writing to string cannot fail");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::Frame;
    use qlg_core::MassDensityField;

    fn uniform_trajectory(level: f64, steps: usize) -> Trajectory {
        let rho = MassDensityField::uniform(4, level).unwrap();
        Trajectory {
            dz: 1.0,
            frames: (0..=steps)
                .map(|_| Frame::equilibrium(rho.clone()).unwrap())
                .collect(),
        }
    }

    #[test]
    fn identical_trajectories_compare_to_zero() {
        let t = uniform_trajectory(1.0, 3);
        let report = compare(&t, &t).unwrap();
        assert_eq!(report.max_rms(), 0.0);
        assert!(report.steps.iter().all(|s| s.max_abs == 0.0));
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let a = uniform_trajectory(1.0, 3);
        let b = uniform_trajectory(1.0, 2);
        assert!(compare(&a, &b).is_err());
    }

    #[test]
    fn plot_data_normalizes_against_the_initial_peak() {
        let t = uniform_trajectory(0.8, 1);
        let data = plot_data(&t).unwrap();
        let lines: Vec<&str> = data.lines().collect();
        assert_eq!(lines.len(), 1 + 8);
        for line in &lines[1..] {
            assert!(line.ends_with("e0") && line.contains("1.0000000000000000"));
        }

        let zero = uniform_trajectory(0.0, 1);
        assert!(plot_data(&zero).is_err());
    }

    #[test]
    fn svg_contains_one_series_per_frame() {
        let t = uniform_trajectory(0.5, 7);
        let svg = plot_svg(&t).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 8);
    }
}
