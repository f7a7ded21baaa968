mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use clifford_reality::oracle::GroupKind;

use commands::ElementArgs;
use config::{CliError, Common};

#[derive(Parser, Debug)]
#[command(name = "clifford-reality", version, about = "Exact Clifford algebra and Spin group reality checks")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Group {
    Spin,
    GammaPlus,
    Gamma,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Seeded property suites over the given space.
    VerifyIdentities {
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Restrict to these suites (algebra, groups, lifting, torus).
        #[arg(long = "suite")]
        suites: Vec<String>,
    },
    /// Torus element from parameters, with its conjugators.
    Torus {
        #[command(flatten)]
        element: ElementArgs,
    },
    /// Certificate `s t s⁻¹ = N(t) t⁻¹` for an element of `Γ⁺`.
    Conjugate {
        #[command(flatten)]
        element: ElementArgs,
        #[arg(long)]
        strategy: Option<String>,
    },
    /// `t = τ₁ τ₂` with `τᵢ² = ±1` for a real semisimple `t ∈ Spin`.
    Decompose {
        #[command(flatten)]
        element: ElementArgs,
    },
    /// Enumerate a group over a prime field and report its classes.
    Enumerate {
        #[arg(long, value_enum, default_value = "spin")]
        group: Group,
    },
    /// Constructive and brute-force verdicts side by side.
    RealityReport {
        #[command(flatten)]
        element: ElementArgs,
        /// Random semisimple samples when no element is given.
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 1 << 20)]
        budget: u64,
    },
    /// Lift a matrix of `SO(V)` to `Γ⁺`.
    Lift {
        /// Row-major scalar strings, inline or a file.
        #[arg(long)]
        matrix: String,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("CLIFFORD_REALITY_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::ConfigInvalid(format!("CLIFFORD_REALITY_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::ConfigInvalid(e.to_string()))
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    configure_threads()?;
    let c = &cli.common;
    let report = match &cli.command {
        Command::VerifyIdentities { samples, suites } => commands::verify(c, suites, *samples)?,
        Command::Torus { element } => commands::torus(c, element)?,
        Command::Conjugate { element, strategy } => commands::conjugate(c, element, strategy.as_deref())?,
        Command::Decompose { element } => commands::decompose(c, element)?,
        Command::Enumerate { group } => {
            let kind = match group {
                Group::Spin => GroupKind::Spin,
                Group::GammaPlus => GroupKind::GammaPlus,
                Group::Gamma => GroupKind::Gamma,
            };
            commands::enumerate_cmd(c, kind)?
        }
        Command::RealityReport {
            element,
            samples,
            budget,
        } => commands::reality_report(c, element, *samples, *budget)?,
        Command::Lift { matrix } => commands::lift(c, matrix)?,
    };
    let json = report.to_json();
    if let Some(path) = &c.out {
        std::fs::write(path, &json).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    if c.json {
        print!("{json}");
    } else {
        print!("{}", report.to_text());
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
