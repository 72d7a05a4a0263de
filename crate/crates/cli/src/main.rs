mod commands;
mod sigma;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

/// The four-element Magari algebra of GL4 from the command line.
#[derive(Debug, Parser)]
#[command(name = "magari4", version)]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a formula under a valuation.
    Eval {
        formula: String,
        /// Bindings such as `p=0,q=s` (0, r, s, 1).
        #[arg(long, default_value = "")]
        env: String,
    },
    /// Print the truth table of a formula.
    Table {
        formula: String,
        /// Variable order, comma separated; defaults to the sorted free variables.
        #[arg(long)]
        vars: Option<String>,
    },
    /// Decide equivalence; exits 1 with a counter-valuation when they differ.
    Equiv { left: String, right: String },
    /// List which of R1..R12 a formula or table preserves.
    Classify { operation: String },
    /// Search for violations of one relation, or of all twelve.
    Violations {
        operation: String,
        /// `R1`..`R12` or a matrix with rows separated by `;`.
        #[arg(long)]
        relation: Option<String>,
    },
    /// Build a formula realizing a table.
    Synthesize {
        #[arg(long)]
        table: String,
        /// Leave out selectors whose value is 0.
        #[arg(long)]
        simplify: bool,
    },
    /// Compute the k-ary fragment expressible from a system file.
    Closure {
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long, default_value_t = 1)]
        arity: usize,
        #[arg(long, default_value_t = 20_000)]
        max_tables: usize,
    },
    /// Derive the four constants from a system file with members F1..F12.
    DeriveConstants {
        #[arg(long)]
        sigma: PathBuf,
        /// Largest expanded formula (in tree nodes) to print in full.
        #[arg(long, default_value_t = 2_000)]
        max_formula_size: u64,
    },
    /// Re-verify the algebra's checkable claims.
    Selftest,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

/// What a command prints and how it exits.
pub struct Outcome {
    pub code: u8,
    pub text: String,
    pub json: serde_json::Value,
}

impl Outcome {
    pub fn ok(text: impl Into<String>, json: serde_json::Value) -> Self {
        Outcome {
            code: 0,
            text: text.into(),
            json,
        }
    }

    pub fn negative(text: impl Into<String>, json: serde_json::Value) -> Self {
        Outcome {
            code: 1,
            text: text.into(),
            json,
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Eval { formula, env } => commands::eval(&formula, &env),
        Command::Table { formula, vars } => commands::table(&formula, vars.as_deref()),
        Command::Equiv { left, right } => commands::equiv(&left, &right),
        Command::Classify { operation } => commands::classify(&operation),
        Command::Violations { operation, relation } => commands::violations(&operation, relation.as_deref()),
        Command::Synthesize { table, simplify } => commands::synthesize(&table, simplify),
        Command::Closure {
            sigma,
            arity,
            max_tables,
        } => commands::closure(&read(&sigma)?, arity, max_tables),
        Command::DeriveConstants {
            sigma,
            max_formula_size,
        } => commands::derive_constants(&read(&sigma)?, max_formula_size),
        Command::Selftest => commands::selftest(),
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json values serialize"));
            } else {
                print!("{}", out.text);
                if !out.text.ends_with('\n') {
                    println!();
                }
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
