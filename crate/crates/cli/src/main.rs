use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mub_cli::{cmd_generate, cmd_perturb, cmd_verify, CliError, Kind, Op, DEFAULT_TOL};

#[derive(Parser)]
#[command(name = "mubcheck", version, about = "Generate, perturb and certify systems of mutually unbiased bases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated vector system as mvs-1 JSON.
    Generate {
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Mub)]
        kind: KindArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Certify a vector system; exit 0 complete, 1 not applicable, 3 contradiction, 2 error.
    Verify {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Write the cert-1 certificate here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Apply a seeded mutation to a vector system.
    Perturb {
        input: PathBuf,
        #[arg(long, value_enum)]
        op: OpArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Vector index for drop and replace.
        #[arg(long)]
        index: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Mub,
    SicEmbed,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    Permute,
    Unitary,
    Rephase,
    Drop,
    Replace,
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Generate { dim, kind, out } => {
            let kind = match kind {
                KindArg::Mub => Kind::Mub,
                KindArg::SicEmbed => Kind::SicEmbed,
            };
            println!("{}", cmd_generate(dim, &out, kind)?);
            Ok(0)
        }
        Command::Verify { input, tol, report } => {
            let outcome = cmd_verify(&input, tol, report.as_deref())?;
            println!("{}", outcome.line);
            Ok(outcome.code)
        }
        Command::Perturb { input, op, seed, index, out } => {
            let op = match op {
                OpArg::Permute => Op::Permute,
                OpArg::Unitary => Op::Unitary,
                OpArg::Rephase => Op::Rephase,
                OpArg::Drop => Op::Drop,
                OpArg::Replace => Op::Replace,
            };
            println!("{}", cmd_perturb(&input, op, seed, index, &out)?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("mubcheck: {e}");
            ExitCode::from(e.code)
        }
    }
}
