//! Batch verification front end. Exit codes: 0 all pass, 1 mathematical
//! failure, 2 usage or parse error. Reports are deterministic byte-for-byte
//! for a fixed configuration.

mod commands;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "cato",
    version,
    about = "Exact verification suites for rank ≤ 4 semisimple Lie algebras: \
             root systems, Chevalley tables, truncated highest-weight modules, \
             p-adic integrality of lowering relations, nilpotent exponentials"
)]
struct Cli {
    /// Write the report to this file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Report format; csv exists only for tabular reports
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Dump a root system with string-law and structure-constant summaries
    Roots {
        /// Type tag such as A2, B3, G2
        type_label: String,
    },
    /// Run a verification suite; exits 1 when the suite fails
    Check {
        #[command(subcommand)]
        suite: CheckCmd,
    },
    /// Queries against truncated Verma and simple highest-weight modules
    Verma {
        #[command(subcommand)]
        query: VermaCmd,
    },
    /// Exponentials of nilpotent elements: BCH products, orbit series,
    /// integrality reduction
    Nil {
        #[command(subcommand)]
        op: NilCmd,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Weight-sum bound over decompositions nγ = Σνᵢβᵢ
    Abcd {
        #[arg(long = "type")]
        type_label: String,
        /// Largest multiple of γ to decompose
        #[arg(long, default_value_t = 6)]
        nmax: u32,
        /// Restrict to one positive root (simple-root coordinates)
        #[arg(long)]
        gamma: Option<String>,
    },
    /// Structure-constant magnitudes, antisymmetry, Jacobi identity
    Chevalley {
        #[arg(long = "type")]
        type_label: String,
    },
    /// Coset witnesses over all Weyl elements and all Levi subsets
    Weyl {
        #[arg(long = "type")]
        type_label: String,
    },
    /// Unit-coefficient verdict for one lowering relation instance
    Integrality {
        #[arg(long = "type")]
        type_label: String,
        /// Highest weight, coroot coordinates, e.g. 0,1/2
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Positive root, simple-root coordinates, e.g. 1,1
        #[arg(long)]
        gamma: String,
        /// Power of the lowering operator
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u64,
        /// Scaling exponent; defaults to the minimal admissible value
        #[arg(long)]
        m0: Option<u32>,
        #[arg(long)]
        depth: Option<u32>,
        /// Use the full Verma module instead of the simple quotient
        #[arg(long)]
        verma: bool,
    },
    /// BCH product against the exponential in the adjoint representation
    Bch {
        #[arg(long = "type")]
        type_label: String,
        #[arg(long, default_value_t = 10)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum VermaCmd {
    /// Weight-space dimension table
    Dims {
        #[arg(long = "type")]
        type_label: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        depth: Option<u32>,
        /// Use the simple quotient instead of the full Verma module
        #[arg(long)]
        simple: bool,
    },
    /// Basis of singular vectors of weight μ inside M(λ)
    Singvec {
        #[arg(long = "type")]
        type_label: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        depth: Option<u32>,
    },
    /// dim Hom(M(μ), M(λ)) within the truncation
    Hom {
        #[arg(long = "type")]
        type_label: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Dot-orbit ordering μ ↑ λ
    Up {
        #[arg(long = "type")]
        type_label: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
}

#[derive(Subcommand)]
enum NilCmd {
    /// log(exp x · exp y) for nilpotent lowering elements
    Bch {
        #[arg(long = "type")]
        type_label: String,
        /// Logarithm as root=coeff terms, e.g. "1,0=1/5;0,1=2"
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Orbit series Σ = δ_{u⁻¹}·v⁺ by weight component
    Sigma {
        #[arg(long = "type")]
        type_label: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long = "log-u")]
        log_u: String,
        #[arg(long)]
        simple: bool,
    },
    /// Iterated extraction of the integral part of log u
    Reduce {
        #[arg(long = "type")]
        type_label: String,
        #[arg(long = "log-u")]
        log_u: String,
        #[arg(long)]
        p: u64,
        /// Integrality threshold: coefficients with v_p below it count as
        /// non-integral
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        scale: i64,
    },
    /// Valuations of the extremal coefficients (−1)ⁿ/n!·tⁿ along nβ⁺
    Ledger {
        #[arg(long = "type")]
        type_label: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long = "log-u")]
        log_u: String,
        /// Extremal support root β⁺, simple-root coordinates
        #[arg(long)]
        beta: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        simple: bool,
    },
}

fn run(cli: &Cli) -> Result<commands::Outcome, String> {
    match &cli.command {
        Command::Roots { type_label } => commands::roots(type_label),
        Command::Check { suite } => match suite {
            CheckCmd::Abcd { type_label, nmax, gamma } => {
                commands::check_abcd(type_label, *nmax, gamma.as_deref())
            }
            CheckCmd::Chevalley { type_label } => commands::check_chevalley(type_label),
            CheckCmd::Weyl { type_label } => commands::check_weyl(type_label),
            CheckCmd::Integrality { type_label, lambda, gamma, n, p, m0, depth, verma } => {
                commands::check_integrality(type_label, lambda, gamma, *n, *p, *m0, *depth, *verma)
            }
            CheckCmd::Bch { type_label, trials, seed } => {
                commands::check_bch(type_label, *trials, *seed)
            }
        },
        Command::Verma { query } => match query {
            VermaCmd::Dims { type_label, lambda, depth, simple } => {
                commands::verma_dims(type_label, lambda, *depth, *simple)
            }
            VermaCmd::Singvec { type_label, mu, lambda, depth } => {
                commands::verma_singvec(type_label, mu, lambda, *depth)
            }
            VermaCmd::Hom { type_label, mu, lambda, depth } => {
                commands::verma_hom(type_label, mu, lambda, *depth)
            }
            VermaCmd::Up { type_label, mu, lambda } => {
                commands::verma_up(type_label, mu, lambda)
            }
        },
        Command::Nil { op } => match op {
            NilCmd::Bch { type_label, x, y } => commands::nil_bch(type_label, x, y),
            NilCmd::Sigma { type_label, lambda, depth, log_u, simple } => {
                commands::nil_sigma(type_label, lambda, *depth, log_u, *simple)
            }
            NilCmd::Reduce { type_label, log_u, p, scale } => {
                commands::nil_reduce(type_label, log_u, *p, *scale)
            }
            NilCmd::Ledger { type_label, lambda, depth, log_u, beta, p, simple } => {
                commands::nil_ledger(type_label, lambda, *depth, log_u, beta, *p, *simple)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Json => {
                    serde_json::to_string(&out.json).expect("reports serialize") + "\n"
                }
                Format::Csv => match out.csv {
                    Some(c) => c,
                    None => {
                        eprintln!("error: this report has no csv form");
                        return ExitCode::from(2);
                    }
                },
            };
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, &body) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{body}");
            }
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
