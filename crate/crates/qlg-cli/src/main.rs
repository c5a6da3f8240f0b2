use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use qlg_cli::{
    lookup_model, model_names, CliError, RunConfig, RunManifest, Trajectory,
};

#[derive(Parser)]
#[command(
    name = "qlg",
    about = "Lattice-gas diffusion runs: exact lattice, classical oracle, analytic, and pulse-level models",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a run described by a config file and write its outputs.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's model.
        #[arg(long)]
        mode: Option<String>,
        /// Output directory (default: config, then $QLG_OUT_DIR, then `.`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two trajectory files step by step.
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// Largest acceptable per-step RMS difference.
        #[arg(long)]
        tol: f64,
    },
    /// Emit normalized long-format plot data (and optionally an SVG).
    Plotdata {
        trajectory: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// List the registered evolution models.
    Models,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are not usage errors.
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, mode, out } => run_command(config, mode, out),
        Command::Compare { a, b, tol } => compare_command(a, b, tol),
        Command::Plotdata {
            trajectory,
            out,
            svg,
        } => plotdata_command(trajectory, out, svg),
        Command::Models => {
            for name in model_names() {
                let model = lookup_model(name).expect("registered name resolves");
                println!("{name:10} {}", model.describe());
            }
            Ok(())
        }
    }
}

fn run_command(
    config_path: PathBuf,
    mode_flag: Option<String>,
    out_flag: Option<PathBuf>,
) -> Result<(), CliError> {
    let mut config = RunConfig::from_path(&config_path)?;
    if let Some(mode) = mode_flag {
        config.mode = mode;
    }
    let model = lookup_model(&config.mode).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown mode {:?}; registered models: {}",
            config.mode,
            model_names().join(", ")
        ))
    })?;

    let request = qlg_cli::RunRequest::from_config(&config)?;
    let started = Instant::now();
    let output = model.evolve(&request)?;
    let elapsed = started.elapsed().as_secs_f64();

    let trajectory = Trajectory {
        dz: config.lattice.dz,
        frames: output.frames.clone(),
    };

    // Reference runs for the comparison table.
    let mut references = BTreeMap::new();
    for name in &config.output.references {
        let reference = lookup_model(name).ok_or_else(|| {
            CliError::validation(format!("unknown reference model {name:?}"))
        })?;
        let ref_output = reference.evolve(&request)?;
        references.insert(
            name.clone(),
            Trajectory {
                dz: config.lattice.dz,
                frames: ref_output.frames,
            },
        );
    }

    let out_dir = config.resolve_out_dir(out_flag.as_deref());
    std::fs::create_dir_all(&out_dir).map_err(|err| {
        CliError::validation(format!("cannot create {}: {err}", out_dir.display()))
    })?;

    let trajectory_path = out_dir.join("trajectory.csv");
    trajectory.write_csv(&trajectory_path)?;

    let manifest = RunManifest::build(&config, &config.mode, &output, &references, elapsed);
    manifest.write(&out_dir.join("manifest.toml"))?;

    if !references.is_empty() {
        let mut table = String::from("step,reference,rms,max_abs\n");
        for (name, reference) in &references {
            let report = qlg_cli::report::compare(&trajectory, reference)?;
            for step in &report.steps {
                use std::fmt::Write as _;
                writeln!(
                    table,
                    "{},{name},{:.16e},{:.16e}",
                    step.step, step.rms, step.max_abs
                )
                .expect("writing to string cannot fail");
            }
        }
        std::fs::write(out_dir.join("comparison.csv"), table)?;
    }

    println!(
        "{} run: {} sites, {} steps -> {}",
        config.mode,
        config.lattice.n_sites,
        config.steps,
        trajectory_path.display()
    );
    for record in &manifest.step_records {
        let mut line = format!(
            "step {:3}  mass {:.12}",
            record.step, record.total_mass
        );
        for (name, rms) in &record.rms {
            line.push_str(&format!("  rms[{name}] {rms:.3e}"));
        }
        println!("{line}");
    }
    Ok(())
}

fn compare_command(a: PathBuf, b: PathBuf, tol: f64) -> Result<(), CliError> {
    if tol.is_nan() || tol < 0.0 {
        return Err(CliError::Usage(format!("tolerance must be >= 0, got {tol}")));
    }
    let left = Trajectory::read_csv(&a)?;
    let right = Trajectory::read_csv(&b)?;
    let report = qlg_cli::report::compare(&left, &right)?;
    print!("{}", report.render());
    let worst = report.max_rms();
    if worst > tol {
        return Err(CliError::Tolerance(format!(
            "max per-step rms {worst:.3e} > tolerance {tol:.3e}"
        )));
    }
    Ok(())
}

fn plotdata_command(
    trajectory: PathBuf,
    out: PathBuf,
    svg: Option<PathBuf>,
) -> Result<(), CliError> {
    let traj = Trajectory::read_csv(&trajectory)?;
    let data = qlg_cli::report::plot_data(&traj)?;
    std::fs::write(&out, data)?;
    if let Some(svg_path) = svg {
        let chart = qlg_cli::report::plot_svg(&traj)?;
        std::fs::write(&svg_path, chart)?;
    }
    println!(
        "plot data for {} frames -> {}",
        traj.frames.len(),
        out.display()
    );
    Ok(())
}
