//! phiflat: exact commutative algebra with constructible supports.
//!
//! Reads a session script of named bindings, runs one subcommand against
//! it, and prints a canonical JSON report. Exit codes: 0 success, 2
//! flattening unresolved within the round budget, 3 input not flat over
//! the good open locus, 4 parse or validation error, 5 internal error.

use clap::{Args, Parser, Subcommand};
use phiflat::cakernel::MonomialOrder;
use phiflat::flatten::FlatteningCertificate;
use phiflat_cli::{emit_report, parse_session_with, run, CliError, Command, RunStatus};
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "phiflat",
    version,
    about = "Exact commutative algebra: supports, depth, blow-ups, flattening certificates",
    long_about = None,
    after_help = "Module matrices list rows as generators and columns as relations: \
`module M = coker [[v], [-u]];` presents two generators with the single \
relation column (v, -u). Session scripts bind rings, supports, ideals, \
modules and valuations by name; commands refer to the names."
)]
struct Cli {
    /// Session script path, or `-` for stdin.
    #[arg(long, global = true, default_value = "-")]
    input: String,

    /// Report destination, or `-` for stdout.
    #[arg(long, global = true, default_value = "-")]
    out: String,

    /// Monomial order for ring declarations.
    #[arg(long, global = true, value_parser = parse_order, default_value = "grevlex")]
    order: String,

    /// Allow support families whose product vanishes in the ring.
    #[arg(long, global = true, default_value_t = false)]
    degenerate_ok: bool,

    #[command(subcommand)]
    command: Commands,
}

fn parse_order(s: &str) -> Result<String, String> {
    match s {
        "grevlex" | "lex" => Ok(s.to_string()),
        _ => Err("expected `grevlex` or `lex`".into()),
    }
}

fn order_of(s: &str) -> MonomialOrder {
    match s {
        "lex" => MonomialOrder::Lex,
        _ => MonomialOrder::GrevLex,
    }
}

#[derive(Subcommand)]
enum Commands {
    /// Reduced Groebner basis of a bound ideal.
    Groebner {
        #[arg(long)]
        ideal: String,
    },
    /// Does the ideal contain a power of the support product?
    Admissible {
        #[arg(long)]
        supports: String,
        #[arg(long)]
        ideal: String,
    },
    /// Quotient a module by its support torsion.
    Purify(ModuleArgs),
    /// Closure (ideal transform) of a module.
    Close {
        #[command(flatten)]
        module: ModuleArgs,
        /// Bound for the closure chain.
        #[arg(long, default_value_t = 32)]
        max_steps: usize,
    },
    /// Is the module 1-deep or 2-deep?
    Deep {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, short = 'd')]
        degree: u8,
    },
    /// Vanishing of Cech cohomology in degree 0 or 1.
    Cech {
        #[arg(long)]
        module: String,
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        q: u8,
        #[arg(long, default_value_t = 32)]
        max_steps: usize,
    },
    /// Local-model commands.
    #[command(subcommand)]
    Philocal(PhilocalCommands),
    /// Valuative-point commands.
    #[command(subcommand)]
    Valuation(ValuationCommands),
    /// Blow-up chart commands.
    #[command(subcommand)]
    Blowup(BlowupCommands),
    /// Flatten a module by admissible blow-ups, emitting a certificate.
    Flatten {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 5)]
        max_rounds: usize,
    },
    /// Replay a flattening certificate against the session data.
    Verify {
        #[command(flatten)]
        module: ModuleArgs,
        /// Certificate file produced by `flatten`.
        #[arg(long)]
        cert: String,
    },
}

#[derive(Args)]
struct ModuleArgs {
    #[arg(long)]
    supports: String,
    #[arg(long)]
    module: String,
}

#[derive(Subcommand)]
enum PhilocalCommands {
    /// Structure-theorem spot checks on sample elements.
    Check {
        #[arg(long)]
        valuation: String,
        /// Leading value coordinates carrying the local structure.
        #[arg(long, default_value_t = 0)]
        split: usize,
        /// Comma-separated sample polynomials.
        #[arg(long)]
        samples: String,
    },
    /// Push the valuation along the support data.
    Push {
        #[arg(long)]
        valuation: String,
        #[arg(long)]
        supports: String,
    },
    /// Flatness of a module over the local model.
    Flat {
        #[arg(long)]
        valuation: String,
        #[arg(long, default_value_t = 0)]
        split: usize,
        #[arg(long)]
        module: String,
        /// Comma-separated admissible multipliers for the torsion test.
        #[arg(long)]
        multipliers: String,
    },
}

#[derive(Subcommand)]
enum ValuationCommands {
    /// Value of a polynomial at the point.
    Eval {
        #[arg(long)]
        valuation: String,
        #[arg(long)]
        poly: String,
    },
    /// Chart selected by the point for a center.
    Chart {
        #[arg(long)]
        valuation: String,
        #[arg(long)]
        ideal: String,
    },
    /// Trace the point through a sequence of centers, e.g.
    /// `--centers "(u,v);(u,t)"`.
    Trace {
        #[arg(long)]
        valuation: String,
        #[arg(long)]
        centers: String,
    },
}

#[derive(Subcommand)]
enum BlowupCommands {
    /// One Rees chart of a blow-up.
    Chart {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        center: String,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Strict transform of a module on one chart.
    Strict {
        #[arg(long)]
        module: String,
        #[arg(long)]
        center: String,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(|p| p.trim().to_string())
        .filter(|p| !p.is_empty())
        .collect()
}

fn parse_centers(s: &str) -> Result<Vec<Vec<String>>, CliError> {
    s.split(';')
        .map(|group| {
            let group = group.trim();
            let inner = group
                .strip_prefix('(')
                .and_then(|g| g.strip_suffix(')'))
                .ok_or_else(|| {
                    CliError::Validation(format!("center `{group}` must be parenthesized"))
                })?;
            Ok(split_list(inner))
        })
        .collect()
}

/// Accept either a bare certificate or a full `flatten` report wrapping
/// one under `result`.
fn read_certificate(text: &str) -> Result<FlatteningCertificate, CliError> {
    let bad = |e: serde_json::Error| CliError::Validation(format!("bad certificate: {e}"));
    let value: serde_json::Value = serde_json::from_str(text).map_err(bad)?;
    let payload = match value.get("result") {
        Some(inner) if value.get("command").is_some() => inner.clone(),
        _ => value,
    };
    serde_json::from_value(payload).map_err(bad)
}

fn threads_from_env() -> usize {
    match std::env::var("PHIFLAT_THREADS") {
        Ok(v) => v.trim().parse().unwrap_or(1),
        Err(_) => 1,
    }
}

fn build_command(commands: Commands) -> Result<Command, CliError> {
    Ok(match commands {
        Commands::Groebner { ideal } => Command::Groebner { ideal, order: None },
        Commands::Admissible { supports, ideal } => Command::Admissible { supports, ideal },
        Commands::Purify(m) => Command::Purify {
            supports: m.supports,
            module: m.module,
        },
        Commands::Close { module, max_steps } => Command::Close {
            supports: module.supports,
            module: module.module,
            max_steps,
        },
        Commands::Deep { module, degree } => Command::Deep {
            supports: module.supports,
            module: module.module,
            degree,
        },
        Commands::Cech {
            module,
            ideal,
            q,
            max_steps,
        } => Command::Cech {
            module,
            ideal,
            q,
            max_steps,
        },
        Commands::Philocal(sub) => match sub {
            PhilocalCommands::Check {
                valuation,
                split,
                samples,
            } => Command::PhilocalCheck {
                valuation,
                split,
                samples: split_list(&samples),
            },
            PhilocalCommands::Push {
                valuation,
                supports,
            } => Command::PhilocalPush {
                valuation,
                supports,
            },
            PhilocalCommands::Flat {
                valuation,
                split,
                module,
                multipliers,
            } => Command::PhilocalFlat {
                valuation,
                split,
                module,
                multipliers: split_list(&multipliers),
            },
        },
        Commands::Valuation(sub) => match sub {
            ValuationCommands::Eval { valuation, poly } => {
                Command::ValuationEval { valuation, poly }
            }
            ValuationCommands::Chart { valuation, ideal } => {
                Command::ValuationChart { valuation, ideal }
            }
            ValuationCommands::Trace { valuation, centers } => Command::ValuationTrace {
                valuation,
                centers: parse_centers(&centers)?,
            },
        },
        Commands::Blowup(sub) => match sub {
            BlowupCommands::Chart {
                ring,
                center,
                index,
            } => Command::BlowupChart {
                ring,
                center,
                index,
            },
            BlowupCommands::Strict {
                module,
                center,
                index,
            } => Command::BlowupStrict {
                module,
                center,
                index,
            },
        },
        Commands::Flatten { module, max_rounds } => Command::Flatten {
            supports: module.supports,
            module: module.module,
            max_rounds,
            threads: threads_from_env(),
        },
        Commands::Verify { module, cert } => {
            let text = std::fs::read_to_string(&cert)?;
            let certificate = read_certificate(&text)?;
            Command::Verify {
                supports: module.supports,
                module: module.module,
                certificate: Box::new(certificate),
            }
        }
    })
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    let code = match execute(cli) {
        Ok(status) => status.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    eprintln!("elapsed: {} ms", started.elapsed().as_millis());
    std::process::exit(code);
}

fn execute(cli: Cli) -> Result<RunStatus, CliError> {
    let text = if cli.input == "-" {
        use std::io::Read;
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        std::fs::read_to_string(&cli.input)?
    };
    let session = parse_session_with(&text, order_of(&cli.order), cli.degenerate_ok)?;
    let command = build_command(cli.command)?;
    let (report, status) = run(&command, &session)?;
    emit_report(&report, &cli.out)?;
    Ok(status)
}
