use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use elemop::{GaussianRational, Kind};
use elemop_cli::commands::{cmd_check, cmd_decompose, cmd_export, cmd_reproduce, cmd_search, cmd_verify, ReproduceParams};
use elemop_cli::report::{digest, Run, EXIT_USAGE};
use elemop_cli::suites::SuiteOptions;

#[derive(Parser)]
#[command(name = "elemop", version, about = "Exact calculus of the elementary operators AXB − X and AX − XB")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Delta,
    Deltac,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Delta => Kind::Delta,
            KindArg::Deltac => Kind::DeltaC,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Membership of (A, B) at order m, and its minimal order.
    Check {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 12)]
        max_order: usize,
    },
    /// Recompute a worked example: ex22, ex32 or ex44.
    Reproduce {
        example: String,
        /// First parameter of ex22/ex32.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        a: String,
        /// Second parameter of ex22/ex32.
        #[arg(long, default_value = "2", allow_hyphen_values = true)]
        b: String,
        /// Inner order of ex44.
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Nilpotency index of ex44.
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = elemop::generators::EX44_SEED)]
        seed: u64,
    },
    /// Run a randomized property suite by name, or `all`.
    Verify {
        theorem: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 5)]
        entry_bound: u32,
    },
    /// Search for a witness against a strictness criterion.
    Search {
        target: String,
        #[arg(long, default_value_t = 200)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Split a commuting member as A = B⁻¹ + N (delta) or A = B + N (deltac).
    Decompose {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Write a fixture's matrices as JSON files.
    Export {
        fixture: String,
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_two(command: &str, a: &PathBuf, b: &PathBuf) -> Result<(String, String), Run> {
    match (read(a), read(b)) {
        (Ok(x), Ok(y)) => Ok((x, y)),
        (Err(e), _) | (_, Err(e)) => Err(Run::usage(command, digest([command]), e)),
    }
}

fn parse_scalar(command: &str, s: &str) -> Result<GaussianRational, Run> {
    s.parse().map_err(|e| Run::usage(command, digest([command, s]), e))
}

fn run(command: Command) -> Run {
    match command {
        Command::Check { a, b, kind, m, max_order } => match read_two("check", &a, &b) {
            Ok((x, y)) => cmd_check(&x, &y, kind.into(), m, max_order),
            Err(r) => r,
        },
        Command::Reproduce { example, a, b, m, n, seed } => {
            let (a, b) = match (parse_scalar("reproduce", &a), parse_scalar("reproduce", &b)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(r), _) | (_, Err(r)) => return r,
            };
            cmd_reproduce(&example, &ReproduceParams { a, b, m, n, seed })
        }
        Command::Verify { theorem, trials, seed, dim, entry_bound } => {
            cmd_verify(&theorem, &SuiteOptions { trials, seed, dim, entry_bound })
        }
        Command::Search { target, budget, seed } => cmd_search(&target, budget, seed),
        Command::Decompose { a, b, kind } => match read_two("decompose", &a, &b) {
            Ok((x, y)) => cmd_decompose(&x, &y, kind.into()),
            Err(r) => r,
        },
        Command::Export { fixture, dir } => {
            let (run, files) = cmd_export(&fixture);
            for (stem, json) in files {
                let path = dir.join(format!("{stem}.json"));
                if let Err(e) = std::fs::write(&path, json) {
                    return Run::usage("export", run.report.inputs.clone(), format!("{}: {e}", path.display()));
                }
            }
            run
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    let run = run(cli.command);
    match cli.format {
        Format::Json => println!("{}", run.report.to_json()),
        Format::Text => print!("{}", run.report.to_text()),
    }
    ExitCode::from(run.exit_code as u8)
}
