//! `resint`: integrability quantities, normal forms and integrability
//! conditions from the command line.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "resint",
    version,
    about = "Integrability quantities and normal forms for x' = diag(1, z, z^2) x + ..."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the result to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute g_111 ... g_KKK for a system spec.
    Quantities {
        #[arg(long, value_name = "PATH")]
        spec: PathBuf,
        #[arg(long, value_name = "INT")]
        k: usize,
        #[arg(long, value_enum, default_value = "1")]
        alg: AlgChoice,
        #[command(flatten)]
        output: Output,
    },
    /// Time both algorithms on the reference sets and check term counts.
    Bench {
        #[arg(long, value_name = "INT", default_value_t = 3)]
        k: usize,
        /// Restrict to these sets (S1, S2, S3); repeatable.
        #[arg(long = "set", value_name = "SET")]
        sets: Vec<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Distinguished normal form of a system with concrete parameter values.
    Normalform {
        #[arg(long, value_name = "PATH")]
        spec: PathBuf,
        #[arg(long, visible_alias = "d", value_name = "INT", default_value_t = 22)]
        order: u32,
        /// Also substitute the transformation back into the system and
        /// require an exact match through the order.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Necessary integrability conditions of the quadratic subfamily.
    Check {
        /// Sample points on this component (1..=9).
        #[arg(
            long,
            value_name = "ID",
            conflicts_with = "point",
            required_unless_present = "point"
        )]
        component: Option<u8>,
        /// Spec file of the quadratic family carrying a point of the subfamily.
        #[arg(long, value_name = "PATH")]
        point: Option<PathBuf>,
        #[arg(long, value_name = "INT", default_value_t = 10)]
        samples: usize,
        #[arg(long, value_name = "INT", default_value_t = 0)]
        seed: u64,
        #[arg(long, visible_alias = "d", value_name = "INT", default_value_t = 22)]
        order: u32,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgChoice {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Both,
}

/// Exit status of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Unreadable, malformed or invalid input, or a reference mismatch.
    Invalid,
    /// The two algorithms disagree.
    Mismatch,
    /// A vanishing the command asserts did not happen.
    NotVanishing,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> ExitCode {
        ExitCode::from(match s {
            Status::Ok => 0,
            Status::Invalid => 1,
            Status::Mismatch => 2,
            Status::NotVanishing => 3,
        })
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("RESINT_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("RESINT_THREADS must be a positive integer, got `{value}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return Status::Invalid.into();
    }
    match commands::run(cli.command) {
        Ok(status) => status.into(),
        Err(e) => {
            eprintln!("error: {e}");
            Status::Invalid.into()
        }
    }
}
