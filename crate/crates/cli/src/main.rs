use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

/// Popular arborescences in vertex-weighted digraphs.
#[derive(Parser, Debug)]
#[command(name = "popbranch", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find a popular arborescence, or explain why none exists.
    Solve(SolveArgs),
    /// Re-check a result file against an instance.
    Verify(VerifyArgs),
    /// List every popular arborescence by brute force.
    Enumerate(EnumerateArgs),
    /// Write a seeded random instance.
    Gen(GenArgs),
    /// Validate an instance and report on the weight condition.
    Check { instance: PathBuf },
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    pub instance: PathBuf,
    /// Print the dual certificate and its verification report.
    #[arg(long)]
    pub certificate: bool,
    /// Solve even if w(s) + w(t) > w(u) fails.
    #[arg(long)]
    pub force: bool,
    /// Print the result as JSON.
    #[arg(long, conflicts_with = "output")]
    pub json: bool,
    /// Write the JSON result to FILE.
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Write a Graphviz rendering to FILE.
    #[arg(long, value_name = "FILE")]
    pub dot: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Instance file, or a directory of instances.
    pub instance: PathBuf,
    /// Result file, or a directory holding `<name>.result.json` per instance.
    pub result: PathBuf,
    /// Enumeration budget when confirming that no popular arborescence exists.
    #[arg(long, default_value_t = popbranch::oracle::DEFAULT_CAP)]
    pub cap: usize,
    /// Worker threads for directory mode.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    /// Instance file, or a directory of instances.
    pub instance: PathBuf,
    #[arg(long, default_value_t = popbranch::oracle::DEFAULT_CAP)]
    pub cap: usize,
    /// Worker threads for directory mode.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub density: f64,
    #[arg(long, default_value_t = 1)]
    pub max_weight: u64,
    #[arg(long, default_value_t = 0.0)]
    pub tie_prob: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub enforce_assumption: bool,
    /// Output file; standard output if omitted.
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap uses 2 for usage errors, which would collide with none_exists.
            let code = if e.use_stderr() {
                commands::INPUT_ERROR
            } else {
                0
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Solve(args) => commands::solve(&args),
        Command::Verify(args) => commands::verify(&args),
        Command::Enumerate(args) => commands::enumerate(&args),
        Command::Gen(args) => commands::gen(&args),
        Command::Check { instance } => commands::check(&instance),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::INPUT_ERROR)
        }
    }
}
