//! `entwit`: separability criteria and finite-rank entanglement
//! witnesses from the command line.
//!
//! Exit codes: 0 for a completed run (detection verdicts live in the
//! report, never in the exit code), 1 for operational failures and
//! failed reproduction rows, 2 for unreadable or invalid input.

mod commands;
mod files;

use clap::{ArgGroup, Parser, Subcommand};

use commands::ConstructMode;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable, unparsable, or invalid input (exit 2).
    Input(String),
    /// A computation could not complete (exit 1).
    Op(String),
}

impl CliError {
    fn prefix(self, what: &str) -> Self {
        match self {
            CliError::Input(m) => CliError::Input(format!("{what}: {m}")),
            CliError::Op(m) => CliError::Op(format!("{what}: {m}")),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "entwit",
    version,
    about = "Finite-rank entanglement witnesses and separability criteria for bipartite states"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the PPT and realignment criteria (and optionally a witness)
    /// against a state file
    Check {
        /// State file (JSON; see README for the schema)
        state: String,
        /// Witness file to evaluate against the state
        #[arg(long)]
        witness: Option<String>,
        /// Reporting tolerance for verdicts
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Weights kept per term when truncating sequence mixtures
        #[arg(long)]
        truncate: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Construct, evaluate, or certify witnesses
    Witness {
        #[command(subcommand)]
        cmd: WitnessCmd,
    },
    /// Re-run a bundled example family (3.3, 3.4 or 3.5) and compare
    /// against its reference values
    Reproduce {
        example: String,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum WitnessCmd {
    /// Build a witness from a state file and write it out
    #[command(group(ArgGroup::new("mode").required(true).args(["special", "corollary", "search"])))]
    Construct {
        state: String,
        /// c_T I − T over the whole decomposition
        #[arg(long)]
        special: bool,
        /// ‖D_k0‖² I − |ω_k0⟩⟨ω_k0| for the --k0 term
        #[arg(long)]
        corollary: bool,
        /// Cutting-plane search over the mixture terms as feature components
        #[arg(long)]
        search: bool,
        /// 1-based term index for --corollary
        #[arg(long, default_value_t = 1)]
        k0: usize,
        #[arg(long)]
        out: String,
        #[arg(long)]
        truncate: Option<usize>,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Print Tr(Wρ) for a witness/state pair
    Evaluate {
        state: String,
        #[arg(long)]
        witness: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Compute the separable infimum and attach a certification block
    Certify {
        #[arg(long)]
        witness: String,
        /// Output path (defaults to rewriting the input file)
        #[arg(long)]
        out: Option<String>,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Certification tolerance on the infimum
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.cmd {
        Command::Check {
            state,
            witness,
            tol,
            restarts,
            seed,
            truncate,
            json,
        } => commands::run_check(&state, witness.as_deref(), tol, restarts, seed, truncate, json),
        Command::Witness { cmd } => match cmd {
            WitnessCmd::Construct {
                state,
                special,
                corollary,
                search,
                k0,
                out,
                truncate,
                restarts,
                seed,
                json,
            } => {
                let mode = if special {
                    ConstructMode::Special
                } else if corollary {
                    if k0 == 0 {
                        return Err(CliError::Input("--k0 is 1-based".into()));
                    }
                    ConstructMode::Corollary { k0 }
                } else {
                    debug_assert!(search);
                    ConstructMode::Search
                };
                commands::run_construct(&state, mode, &out, truncate, restarts, seed, json)
            }
            WitnessCmd::Evaluate {
                state,
                witness,
                tol,
                json,
            } => commands::run_evaluate(&state, &witness, tol, json),
            WitnessCmd::Certify {
                witness,
                out,
                restarts,
                seed,
                tol,
                json,
            } => commands::run_certify(&witness, out.as_deref(), restarts, seed, tol, json),
        },
        Command::Reproduce {
            example,
            restarts,
            seed,
            json,
        } => commands::run_reproduce(&example, restarts, seed, json),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(CliError::Op(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
    }
}
