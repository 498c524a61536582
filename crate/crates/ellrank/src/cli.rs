//! Command-line interface: model files in, human-readable or JSON reports
//! out, with a stable exit-code map.
//!
//! Exit codes: 0 success, 2 parse or I/O error, 3 degenerate model, 4 bad
//! parameters, 5 bad reduction, 6 resource bound exceeded, 7 internal
//! inconsistency. Reports go to stdout; diagnostics go to stderr.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde::Serialize;

use crate::algebra::factor_int::FactorBudget;
use crate::error::{Error, Result};
use crate::kodaira::fiber_configuration;
use crate::picard::certify_rank;
use crate::ranks::construction_pipeline;
use crate::report;
use crate::weierstrass::model::WeierstrassModel;
use crate::weierstrass::parse::{parse_model, render_model};
use crate::zeta::{reduce_mod_p, trace_data};

const EXIT_CODES_HELP: &str = "Exit codes:
  0  success
  2  parse or I/O error
  3  degenerate model (vanishing discriminant)
  4  bad parameters
  5  bad reduction at the requested prime
  6  resource bound exceeded
  7  internal inconsistency";

/// Exact rank certification for elliptic surfaces over Q(t).
#[derive(Parser)]
#[command(name = "ellrank", version, after_help = EXIT_CODES_HELP)]
pub struct Cli {
    /// Cap the number of worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Wall-clock budget in seconds for integer factorization.
    #[arg(long, global = true, value_name = "SECS", default_value_t = 30)]
    pub factor_timeout: u64,
    #[command(subcommand)]
    pub command: Command,
}

/// Where the machine-readable report should go, if anywhere.
#[derive(Args)]
pub struct JsonSink {
    /// Emit the JSON report instead of text; with a PATH, write it there
    /// and keep the text on stdout.
    #[arg(long, value_name = "PATH", num_args = 0..=1, default_missing_value = "-")]
    pub json: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Classify the singular fibers of a Weierstrass model file.
    Fibers {
        /// Model file: "A = <poly in t>" and "B = <poly in t>" lines.
        model: PathBuf,
        #[command(flatten)]
        sink: JsonSink,
    },
    /// Build the family member E_{a,b,c} and its construction ledger.
    Construct {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Output model file; the ledger is written next to it with the
        /// extension "ledger.json".
        out: PathBuf,
        #[command(flatten)]
        sink: JsonSink,
    },
    /// Count points and the H^2 Frobenius trace over F_{p^k}.
    Count {
        model: PathBuf,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        degree: u32,
        #[command(flatten)]
        sink: JsonSink,
    },
    /// Certify Picard-number and Mordell-Weil rank bounds via two primes.
    Certify {
        model: PathBuf,
        /// The two good primes, comma-separated: "17,19".
        #[arg(long, value_name = "P1,P2")]
        primes: String,
        #[command(flatten)]
        sink: JsonSink,
    },
    /// Re-verify the internal arithmetic of a certificate JSON file.
    Verify {
        certificate: PathBuf,
    },
}

/// Parses arguments from the process environment and runs; returns the
/// process exit code.
pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

/// Dispatches one parsed invocation.
pub fn run(cli: &Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        // Ignore a second initialization (tests may run many invocations in
        // one process); the command still works on the existing pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let budget = FactorBudget::from_secs(cli.factor_timeout);
    match &cli.command {
        Command::Fibers { model, sink } => cmd_fibers(model, sink),
        Command::Construct { a, b, c, out, sink } => cmd_construct(a, b, c, out, sink),
        Command::Count {
            model,
            prime,
            degree,
            sink,
        } => cmd_count(model, *prime, *degree, sink),
        Command::Certify {
            model,
            primes,
            sink,
        } => cmd_certify(model, primes, &budget, sink),
        Command::Verify { certificate } => cmd_verify(certificate, &budget),
    }
}

fn load_model(path: &PathBuf) -> Result<WeierstrassModel> {
    let src = fs::read_to_string(path)?;
    parse_model(&src)
}

/// Writes one report line-block to stdout. A closed pipe (the consumer
/// stopped reading, e.g. `| head`) ends the process quietly instead of
/// panicking.
fn write_stdout(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{text}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: failed writing to stdout: {e}");
        std::process::exit(2);
    }
}

/// Prints the text report and/or the JSON document per the sink flags.
fn emit<T: Serialize>(sink: &JsonSink, doc: &T, text: &str) -> Result<()> {
    match &sink.json {
        None => write_stdout(text),
        Some(p) if p.as_os_str() == "-" => write_stdout(&report::to_json_string(doc)?),
        Some(p) => {
            fs::write(p, report::to_json_string(doc)? + "\n")?;
            write_stdout(text);
            eprintln!("JSON report written to {}", p.display());
        }
    }
    Ok(())
}

fn cmd_fibers(model_path: &PathBuf, sink: &JsonSink) -> Result<()> {
    let model = load_model(model_path)?;
    let config = fiber_configuration(&model)?;
    let doc = report::fibers_report(&model, &config);
    let text = format!(
        "minimal model: {}\n{}\nShioda-Tate fiber contribution: {}",
        config.minimal_model,
        config,
        config.fiber_rank_contribution()
    );
    emit(sink, &doc, &text)
}

fn parse_rational(name: &str, s: &str) -> Result<BigRational> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|e| Error::Parse(format!("bad value for --{name}: {s:?} ({e})")))
}

fn cmd_construct(a: &str, b: &str, c: &str, out: &PathBuf, sink: &JsonSink) -> Result<()> {
    let a = parse_rational("a", a)?;
    let b = parse_rational("b", b)?;
    let c = parse_rational("c", c)?;
    let ledger = construction_pipeline(&a, &b, &c)?;
    let model = ledger.family_member.minimalize().model;
    fs::write(out, render_model(&model))?;
    let ledger_path = out.with_extension("ledger.json");
    let doc = report::ledger_json(&ledger);
    fs::write(&ledger_path, report::to_json_string(&doc)? + "\n")?;
    eprintln!(
        "model written to {}, ledger to {}",
        out.display(),
        ledger_path.display()
    );
    let text = format!("{}\n{ledger}", model);
    emit(sink, &doc, &text)
}

fn cmd_count(model_path: &PathBuf, prime: u64, degree: u32, sink: &JsonSink) -> Result<()> {
    let model = load_model(model_path)?;
    let surface = reduce_mod_p(&model, prime)?;
    let data = trace_data(&surface, degree)?;
    let doc = report::count_report(&model, prime, degree, &data);
    let text = format!(
        "q = {} (p = {prime}, k = {degree})\n#X(F_q) = {}\nt2 = {}",
        data.q, data.point_count, data.t2
    );
    emit(sink, &doc, &text)
}

fn parse_primes(primes: &str) -> Result<(u64, u64)> {
    let parts: Vec<&str> = primes.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!(
            "--primes expects two comma-separated primes like \"17,19\", got {primes:?}"
        )));
    }
    let parse_one = |s: &str| {
        s.parse::<u64>()
            .map_err(|e| Error::Parse(format!("bad prime {s:?} in --primes: {e}")))
    };
    Ok((parse_one(parts[0])?, parse_one(parts[1])?))
}

fn cmd_certify(
    model_path: &PathBuf,
    primes: &str,
    budget: &FactorBudget,
    sink: &JsonSink,
) -> Result<()> {
    let model = load_model(model_path)?;
    let (p1, p2) = parse_primes(primes)?;
    let cert = certify_rank(&model, p1, p2, budget)?;
    let doc = report::certificate_json(&cert)?;
    emit(sink, &doc, &cert.to_string())
}

fn cmd_verify(certificate: &PathBuf, budget: &FactorBudget) -> Result<()> {
    let src = fs::read_to_string(certificate)?;
    let doc = report::verify_certificate_json(&src, budget)?;
    let rho = match doc.rho {
        Some(rho) => format!("rho = {rho}"),
        None => format!("rho in [{}, {}]", doc.rho_lower, doc.rho_upper),
    };
    write_stdout(&format!(
        "certificate verifies: {rho}, MW rank of the input fibration = {}",
        match doc.mw_rank {
            report::MwRankJson::Exact(r) => r.to_string(),
            report::MwRankJson::Between(lo, hi) => format!("[{lo}, {hi}]"),
        }
    ));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_argument_parses_pairs_only() {
        assert_eq!(parse_primes("17,19").unwrap(), (17, 19));
        assert_eq!(parse_primes(" 17 , 19 ").unwrap(), (17, 19));
        assert!(parse_primes("17").is_err());
        assert!(parse_primes("17,19,23").is_err());
        assert!(parse_primes("17,x").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
