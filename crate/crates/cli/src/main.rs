use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use saddlescope::commands::{self, SpectrumQuiver};
use saddlescope::config::{Overrides, Settings};
use saddlescope::exit::{exit_code, DOMAIN, USAGE};
use saddlescope::suites::{run_suite, Suite};
use stability_core::ExampleFamily;

#[derive(Parser, Debug)]
#[command(name = "saddlescope", version, about = "Triangulations, quivers, quadratic differentials and stable spectra")]
struct Cli {
    /// TOML file with numeric settings (falls back to $SADDLESCOPE_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Integrator position tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Phase grid size of wall scans.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Random seed for the example suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exchange matrix, skew form, kappa and self-folded pairs of a triangulation.
    Quiver {
        file: PathBuf,
        /// Print the quiver as JSON instead.
        #[arg(long)]
        json: bool,
    },
    /// Flip an arc of a triangulation.
    Flip {
        file: PathBuf,
        #[arg(long)]
        arc: String,
        /// Write the new triangulation here and print the lattice maps.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mutate a quiver (or the quiver of a triangulation) at a vertex.
    Mutate {
        file: PathBuf,
        /// Vertex label or index.
        #[arg(long)]
        vertex: String,
    },
    /// Critical points, residues, saddle-free verdict, strips, WKB triangulation and periods.
    Analyze {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Draw separatrices and generic trajectories as SVG.
    Plot {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
        #[arg(long)]
        plot: PathBuf,
    },
    /// Saddle walls over one turn of the phase.
    Scan { file: PathBuf },
    /// Cross the wall at a phase and check the period transport.
    Wallcheck {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
    },
    /// Standard periods and residues at a saddle-free phase.
    Periods {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
    },
    /// Stable spectrum of an example quiver, or the saddle to stable comparison of a differential.
    Stables {
        #[arg(long, value_enum, required_unless_present = "compare")]
        quiver: Option<QuiverArg>,
        /// Central charge as `re,im;re,im;...`.
        #[arg(long, allow_hyphen_values = true, required_unless_present = "compare")]
        charge: Option<String>,
        /// Arrow directions of a linear quiver, one R or L per arrow.
        #[arg(long, default_value = "")]
        orientation: String,
        #[arg(long, default_value_t = 5)]
        bound: usize,
        /// Compare a differential's trajectories with the stables of this family.
        #[arg(long, value_enum, requires = "differential")]
        compare: Option<FamilyArg>,
        #[arg(long)]
        differential: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
    },
    /// Run an example suite.
    Examples {
        #[arg(value_enum)]
        suite: SuiteArg,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum QuiverArg {
    Kronecker,
    AffineA2,
    An,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FamilyArg {
    A1,
    Kronecker,
    AffineA2,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SuiteArg {
    An,
    Dn,
    Kronecker,
    Sphere3,
}

fn run(cli: Cli) -> Result<String> {
    let settings = Settings::resolve(&Overrides { config: cli.config, tol: cli.tol, grid: cli.grid, seed: cli.seed })?;
    eprintln!("seed = {}", settings.seed);
    let s = &settings;
    match cli.command {
        Command::Quiver { file, json } => commands::cmd_quiver(&file, json),
        Command::Flip { file, arc, out } => commands::cmd_flip(&file, &arc, out.as_deref()),
        Command::Mutate { file, vertex } => commands::cmd_mutate(&file, &vertex),
        Command::Analyze { file, theta, plot } => commands::cmd_analyze(&file, theta, plot.as_deref(), s),
        Command::Plot { file, theta, plot } => commands::cmd_plot(&file, theta, &plot, s),
        Command::Scan { file } => commands::cmd_scan(&file, s),
        Command::Wallcheck { file, theta } => commands::cmd_wallcheck(&file, theta, s),
        Command::Periods { file, theta } => commands::cmd_periods(&file, theta, s),
        Command::Stables { quiver, charge, orientation, bound, compare, differential, theta } => match compare {
            Some(f) => {
                let family = match f {
                    FamilyArg::A1 => ExampleFamily::A1,
                    FamilyArg::Kronecker => ExampleFamily::Kronecker,
                    FamilyArg::AffineA2 => ExampleFamily::AffineA2,
                };
                commands::cmd_compare(family, differential.as_deref().expect("required by clap"), theta, s)
            }
            None => {
                let kind = match quiver.expect("required by clap") {
                    QuiverArg::Kronecker => SpectrumQuiver::Kronecker,
                    QuiverArg::AffineA2 => SpectrumQuiver::AffineA2,
                    QuiverArg::An => SpectrumQuiver::An,
                };
                commands::cmd_stables(kind, &charge.expect("required by clap"), &orientation, bound)
            }
        },
        Command::Examples { suite } => {
            let suite = match suite {
                SuiteArg::An => Suite::An,
                SuiteArg::Dn => Suite::Dn,
                SuiteArg::Kronecker => Suite::Kronecker,
                SuiteArg::Sphere3 => Suite::Sphere3,
            };
            let results = run_suite(suite, s);
            let mut out = String::new();
            for r in &results {
                out.push_str(&format!("{} {}: {}\n", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail));
            }
            match results.iter().find(|r| !r.passed) {
                Some(first) => {
                    print!("{out}");
                    anyhow::bail!("suite {} failed at {}", suite.name(), first.name)
                }
                None => {
                    out.push_str(&format!("suite {}: all {} checks passed\n", suite.name(), results.len()));
                    Ok(out)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = exit_code(&e);
            ExitCode::from(if code == 0 { DOMAIN as u8 } else { code as u8 })
        }
    }
}
