use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use isoradial_lab::commands;
use isoradial_lab::config::Settings;
use isoradial_lab::LabError;

/// Exit status when a property suite reports a violation.
const SUITE_FAILED: u8 = 4;

#[derive(Parser)]
#[command(name = "isoradial", version, about = "Isoperimetric sets of radial densities in the plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// key=value file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Artifact directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// power:α, gaussian, lebesgue, inverse_r, exp_r, exp_r_alpha:α,
    /// model_1d:A, vprime_power:a or poly:±:c1,c2,...
    #[arg(long, global = true)]
    law: Option<String>,
    /// Radius cutoff of the law (`none` for the whole plane).
    #[arg(long, global = true, allow_hyphen_values = true)]
    cutoff: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// One (a, λ) curve: CSV samples, SVG and JSON summary.
    Solve {
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// inner (f(r0) = 0) or origin (f(0) = π/2).
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        samples: Option<String>,
        #[arg(long)]
        tol: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Taxonomy over an (a, λ) grid.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        a_grid: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda_grid: Option<String>,
        #[arg(long)]
        tol: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Best candidate family over a grid of measures.
    Sweep {
        #[arg(long)]
        measures: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Critical exponents of the exponential power laws.
    Thresholds {
        #[arg(long)]
        alpha_grid: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Circular symmetrization of an angular-set file.
    Symmetrize {
        #[arg(long)]
        input: Option<String>,
        #[arg(long)]
        output: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Randomized property suites for log-convex weights.
    Bounds {
        /// Suite name, comma list, or `all`.
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        trials: Option<String>,
        #[arg(long)]
        seed: Option<String>,
        #[arg(long)]
        r_max: Option<String>,
        #[arg(long)]
        rings: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Monotone transport from a model measure.
    Transport {
        /// model:B or flat:W.
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        common: Common,
    },
}

fn settings(common: &Common, flags: Vec<(&str, Option<String>)>) -> Result<Settings, LabError> {
    let mut s = match &common.config {
        Some(p) => Settings::from_file(p)?,
        None => Settings::new(),
    };
    s.set("law", common.law.clone());
    s.set("cutoff", common.cutoff.clone());
    for (k, v) in flags {
        s.set(k, v);
    }
    Ok(s)
}

fn dispatch(cli: Cli) -> Result<commands::Outcome, LabError> {
    let (name, common, flags) = match cli.command {
        Command::Solve { a, lambda, start, samples, tol, common } => (
            "solve",
            common,
            vec![("a", a), ("lambda", lambda), ("start", start), ("samples", samples), ("tol", tol)],
        ),
        Command::Classify { a_grid, lambda_grid, tol, common } => {
            ("classify", common, vec![("a_grid", a_grid), ("lambda_grid", lambda_grid), ("tol", tol)])
        }
        Command::Sweep { measures, common } => ("sweep", common, vec![("measures", measures)]),
        Command::Thresholds { alpha_grid, common } => ("thresholds", common, vec![("alpha_grid", alpha_grid)]),
        Command::Symmetrize { input, output, common } => ("symmetrize", common, vec![("input", input), ("output", output)]),
        Command::Bounds { suite, trials, seed, r_max, rings, common } => (
            "bounds",
            common,
            vec![("suite", suite), ("trials", trials), ("seed", seed), ("r_max", r_max), ("rings", rings)],
        ),
        Command::Transport { target, grid, force, common } => (
            "transport",
            common,
            vec![("target", target), ("grid", grid), ("force", force.then(|| "true".to_string()))],
        ),
    };
    let s = settings(&common, flags)?;
    commands::run(name, s, &common.out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = LabError::config(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match dispatch(cli) {
        Ok(outcome) => {
            println!("{}", serde_json::to_string_pretty(&outcome.summary).unwrap_or_default());
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(SUITE_FAILED)
            }
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
