use std::path::{Path, PathBuf};
use std::process::ExitCode;

use beablekit_cli::tools::{commutant_report, generate_scenario, StateKind};
use beablekit_cli::{demo, emit_scenario, parse_scenario, run, CliError, CliResult, DemoParams, Report, RunOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "beablekit", version, about = "Beable subalgebra analysis for finite-dimensional states")]
struct Cli {
    /// Seed for randomized checks.
    #[arg(long, global = true, env = "BEABLEKIT_SEED", default_value_t = 0)]
    seed: u64,
    /// Residual tolerance; the rank tolerance is set to a tenth of it.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include algebra bases in the report.
    #[arg(long)]
    dump_basis: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Vector,
    Density,
}

#[derive(Subcommand)]
enum Command {
    /// Run the queries of a scenario file.
    Analyze {
        #[arg(long)]
        scenario: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Run a built-in demo.
    Demo {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(beablekit_cli::DEMO_NAMES))]
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        phi: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Generated algebra, commutant and center of a scenario's generators.
    Commutant {
        #[arg(long)]
        scenario: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Write a random scenario file.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Kind::Vector)]
        kind: Kind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the version.
    Version,
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn finish(report: Report, output: &Output) -> CliResult<ExitCode> {
    print!("{}", report.summary());
    if let Some(path) = &output.out {
        write(path, &report.to_json())?;
    }
    Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn execute(cli: Cli) -> CliResult<ExitCode> {
    let opts = |output: &Output| RunOptions {
        seed: cli.seed,
        tol: cli.tol,
        dump_basis: output.dump_basis,
    };
    match &cli.command {
        Command::Analyze { scenario, output } => {
            let file = parse_scenario(scenario)?;
            finish(run(&file, &opts(output))?, output)
        }
        Command::Demo {
            name,
            n,
            theta,
            phi,
            output,
        } => {
            let params = DemoParams {
                n: *n,
                theta: *theta,
                phi: *phi,
            };
            finish(demo(name, &params, &opts(output))?, output)
        }
        Command::Commutant { scenario, output } => {
            let file = parse_scenario(scenario)?;
            finish(commutant_report(&file, &opts(output))?, output)
        }
        Command::Generate { n, kind, out } => {
            let kind = match kind {
                Kind::Vector => StateKind::Vector,
                Kind::Density => StateKind::Density,
            };
            let text = emit_scenario(&generate_scenario(*n, kind, cli.seed)?);
            match out {
                Some(path) => write(path, &text)?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Version => {
            println!("beablekit {}", env!("CARGO_PKG_VERSION"));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
