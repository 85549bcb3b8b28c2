use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use actmediator::codec::{parse_abox, write_abox, RawMessage, Syntax};
use actmediator::ec::{parse_observations, Observations};
use actmediator::harness::{self, CheckPolicy, Scenario, SystemRegistry};
use actmediator::notation::Notation;
use actmediator::ontology::{Derivation, Ontology, Reasoner};
use clap::{Parser, Subcommand, ValueEnum};

/// Converts agent messages between information systems through a shared
/// communication-acts ontology.
#[derive(Parser)]
#[command(name = "actmediator", version)]
struct Cli {
    /// System registry file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print derivations alongside the output.
    #[arg(long, global = true)]
    trace: bool,
    /// Log pipeline transitions to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Translate a message written by an agent of one system for another.
    Convert {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long = "in")]
        input: PathBuf,
        /// Input syntax; the source system's own by default.
        #[arg(long)]
        syntax: Option<Syntax>,
    },
    /// Decide whether the conversion of a message is satisfactory.
    /// Exits 0 if it is, 2 if not.
    Check {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        syntax: Option<Syntax>,
        /// Context observations, one per line.
        #[arg(long)]
        gamma: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the assertions an ontology derives from an assertion block.
    Reason {
        /// Ontology layers, added to the bundled common layer.
        #[arg(long, required = true)]
        ontology: Vec<PathBuf>,
        #[arg(long)]
        abox: PathBuf,
    },
    /// Run a scenario script with one manager per registered system.
    Harness {
        #[arg(long)]
        scenario: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Toml,
}

type Failure = Box<dyn std::error::Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.verbose {
        tracing_subscriber::fmt()
            .with_max_level(tracing_subscriber::filter::LevelFilter::DEBUG)
            .with_writer(std::io::stderr)
            .init();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Convert {
            from,
            to,
            input,
            syntax,
        } => {
            let reg = registry(cli)?;
            let raw = message(&reg, from, input, *syntax)?;
            let c = harness::convert(&reg, &raw, from, to)?;
            if cli.trace {
                trace_derivations("source", &c.source.derivations, &reg.notation);
                trace_derivations("target", &c.target.derivations, &reg.notation);
            }
            print!("{}", ensure_newline(&c.output().text));
            Ok(0)
        }
        Command::Check {
            from,
            to,
            input,
            syntax,
            gamma,
            format,
        } => {
            let reg = registry(cli)?;
            let raw = message(&reg, from, input, *syntax)?;
            let gamma = match gamma {
                Some(p) => parse_observations(&read(p)?, &reg.notation)?,
                None => Observations::new(),
            };
            let policy = CheckPolicy {
                refuse_unsatisfactory: false,
            };
            let (_, report) = harness::convert_and_check(&reg, &raw, from, to, &gamma, policy)?;
            match format {
                Format::Text => print!("{}", report.render(&reg.notation)),
                Format::Toml => print!("{}", report.to_toml(&reg.notation)),
            }
            if cli.trace {
                print!("{}", report.render_trace(&reg.notation));
            }
            Ok(if report.satisfactory { 0 } else { 2 })
        }
        Command::Reason { ontology, abox } => {
            let mut onto = Ontology::seed_common();
            for p in ontology {
                onto.merge(&Ontology::load(p)?);
            }
            let m = parse_abox(&read(abox)?)?;
            let (derived, derivations) = Reasoner::new(&onto).realize_traced(&m);
            if cli.trace {
                trace_derivations("derived", &derivations, &Notation::plain());
            }
            print!("{}", write_abox(&derived));
            Ok(0)
        }
        Command::Harness { scenario } => {
            let reg = Arc::new(registry(cli)?);
            let scenario = Scenario::load(scenario, &reg)?;
            let outcome = harness::run_harness(reg, &scenario)?;
            print!("{}", outcome.transcript_text());
            for f in &outcome.failures {
                eprintln!("failed: {f}");
            }
            Ok(outcome.exit_code() as u8)
        }
    }
}

fn registry(cli: &Cli) -> Result<SystemRegistry, Failure> {
    let path = cli
        .config
        .as_ref()
        .ok_or("--config <registry file> is required")?;
    Ok(SystemRegistry::load(path)?)
}

fn message(
    reg: &SystemRegistry,
    from: &str,
    path: &Path,
    syntax: Option<Syntax>,
) -> Result<RawMessage, Failure> {
    let syntax = match syntax {
        Some(s) => s,
        None => reg.system(from)?.syntax,
    };
    Ok(RawMessage::new(syntax, read(path)?))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn trace_derivations(title: &str, derivations: &[Derivation], n: &Notation) {
    eprintln!("[{title}]");
    for d in derivations {
        eprintln!("{}", d.render(n));
    }
}

fn ensure_newline(s: &str) -> String {
    if s.ends_with('\n') {
        s.to_string()
    } else {
        format!("{s}\n")
    }
}
