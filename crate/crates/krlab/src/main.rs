use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use krlab::config::{ConeConfig, ConeKind, OperatorSource, ScenarioConfig, ScenarioKind};
use krlab::{run_scenario, RunArtifact, RunError};

#[derive(Parser)]
#[command(name = "krlab", version, about = "Check Krein-Rutman type conclusions on matrices and discretized elliptic operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    /// Positive bounded operator, conclusions about the spectral radius.
    Bounded,
    /// Sectorial generator with positive resolvent, conclusions about the spectral bound.
    Sectorial,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliCone {
    Orthant,
    IceCream,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario from a TOML configuration.
    Run {
        scenario: ScenarioKind,
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `out` in the configuration.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the configured seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the cone membership tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Report on a matrix read from CSV.
    CheckMatrix {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum, default_value = "orthant")]
        cone: CliCone,
        #[arg(long, value_enum, default_value = "bounded")]
        theorem: Theorem,
        #[arg(long, default_value = "krlab-out")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Mesh refinement study from a TOML configuration.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn out_dir(cli: Option<PathBuf>, cfg: &ScenarioConfig, kind: ScenarioKind) -> PathBuf {
    cli.or_else(|| cfg.out.as_ref().map(|p| cfg.resolve(p)))
        .unwrap_or_else(|| PathBuf::from("krlab-out").join(kind.name()))
}

fn load(path: &std::path::Path, seed: Option<u64>, tol: Option<f64>) -> Result<ScenarioConfig, RunError> {
    let mut cfg = ScenarioConfig::load(path)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(t) = tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(RunError::Config("--tol must be positive".into()));
        }
        cfg.tolerances.membership = Some(t);
    }
    Ok(cfg)
}

fn dispatch(cmd: Command) -> Result<RunArtifact, RunError> {
    match cmd {
        Command::Run { scenario, config, out, seed, tol } => {
            let cfg = load(&config, seed, tol)?;
            run_scenario(&cfg, scenario, &out_dir(out, &cfg, scenario))
        }
        Command::Sweep { config, out, seed } => {
            let cfg = load(&config, seed, None)?;
            run_scenario(&cfg, ScenarioKind::Sweep, &out_dir(out, &cfg, ScenarioKind::Sweep))
        }
        Command::CheckMatrix { matrix, cone, theorem, out, seed } => {
            let matrix = std::fs::canonicalize(&matrix)
                .map_err(|e| RunError::Config(format!("cannot open {}: {e}", matrix.display())))?;
            let mut cfg = ScenarioConfig::from_toml(&format!("seed = {seed}\n"), std::path::Path::new("."))?;
            cfg.operator = Some(OperatorSource { builtin: None, matrix: Some(matrix), rows: None });
            let kind = match cone {
                CliCone::Orthant => ConeKind::Orthant,
                CliCone::IceCream => ConeKind::IceCream,
            };
            cfg.cone = Some(ConeConfig { kind, dim: None, mask: None });
            let scenario = match theorem {
                Theorem::Bounded => ScenarioKind::Bounded,
                Theorem::Sectorial => ScenarioKind::Sectorial,
            };
            run_scenario(&cfg, scenario, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(art) => {
            println!("report: {}", art.report_path.display());
            for p in &art.data_paths {
                println!("data: {}", p.display());
            }
            match art.exit_code {
                0 => println!("status: pass"),
                1 => println!("status: fail"),
                _ => println!("status: error"),
            }
            ExitCode::from(art.exit_code as u8)
        }
        Err(e) => {
            eprintln!("krlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
