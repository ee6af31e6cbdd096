//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use contact_loci_core::numerics::DivisorData;
use contact_loci_core::{classify, fiber, refine, toric, PlumbingGraph};
use serde_json::{json, Value};

use crate::document::GraphDocument;
use crate::error::CliError;
use crate::{dot, render, selftest};

pub const SEED_VAR: &str = "CONTACT_LOCI_SEED";

#[derive(Debug, Parser)]
#[command(name = "contact-loci", version, about = "Irreducible components of contact loci from resolution graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check connectivity, arrows and negative definiteness.
    Validate { file: PathBuf },
    /// Multiplicities, and discrepancies when the ambient surface allows.
    Mult { file: PathBuf },
    /// Blow up until the graph is m-separating.
    Refine {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        file: PathBuf,
    },
    /// Irreducible components of the m-contact locus.
    Components {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        /// Refine to an m-separating graph first.
        #[arg(long)]
        auto_refine: bool,
        /// Report codimensions (needs discrepancies).
        #[arg(long)]
        codim: bool,
        file: PathBuf,
    },
    /// Containment relations between m-divisors.
    Poset {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        file: PathBuf,
    },
    /// Topology of the Milnor fiber pieces and the Euler characteristic check.
    Fiber {
        #[arg(long)]
        divisor: Option<String>,
        file: PathBuf,
    },
    /// Cyclic quotient computations.
    Toric {
        #[command(subcommand)]
        command: ToricCommand,
    },
    /// Graphviz export, annotated with multiplicities when they can be solved.
    Dot { file: PathBuf },
    /// Components for every m in a range, one JSON line per m.
    Sweep {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        from: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        to: u64,
        #[arg(long)]
        auto_refine: bool,
        file: PathBuf,
    },
    /// Seeded property checks of the library (seed from CONTACT_LOCI_SEED).
    SelfTest {
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ToricCommand {
    /// Evaluate the negative continued fraction e_1 - 1/(e_2 - ...) to (n, q).
    Eval {
        #[arg(required = true, allow_negative_numbers = true)]
        entries: Vec<i64>,
    },
    /// Expand n/q as a negative continued fraction.
    Expand { n: u64, q: u64 },
    /// Lattice points on the compact hull boundary of the cone of (1,0) and (q,n).
    Hull { n: u64, q: u64 },
    /// Minimal monomial generators of the invariants of 1/n(1,q).
    Generators { n: u64, q: u64 },
    /// Check the valuation monotonicity along a chain, with N_1 = n1.
    Monotonicity {
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        n1: u64,
        #[arg(required = true, allow_negative_numbers = true)]
        entries: Vec<i64>,
    },
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code: 0 on success, 1 on a domain error, 2 on a usage or
/// parse error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn load(path: &PathBuf) -> Result<(GraphDocument, PlumbingGraph), CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let doc = GraphDocument::parse(&text)?;
    let graph = doc.graph()?;
    Ok((doc, graph))
}

fn load_with_data(path: &PathBuf) -> Result<(PlumbingGraph, DivisorData), CliError> {
    let (doc, graph) = load(path)?;
    let dd = doc.divisor_data(&graph)?;
    Ok((graph, dd))
}

fn emit(out: &mut dyn Write, value: &Value) -> Result<(), CliError> {
    writeln!(out, "{value}").map_err(|source| CliError::Io { path: "<stdout>".into(), source })
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Validate { file } => {
            let (_, graph) = load(&file)?;
            let report = graph.validate();
            emit(out, &render::validation(&report))?;
            if !report.passed() {
                return Err(contact_loci_core::Error::InvalidGraph(report).into());
            }
        }
        Command::Mult { file } => {
            let (_, dd) = load_with_data(&file)?;
            emit(out, &render::divisor_data(&dd))?;
        }
        Command::Refine { m, file } => {
            let (graph, dd) = load_with_data(&file)?;
            let trace = refine::make_m_separating(&graph, &dd, m)?;
            emit(out, &render::refinement(&trace))?;
        }
        Command::Components { m, auto_refine, codim, file } => {
            let (graph, dd) = load_with_data(&file)?;
            if codim && dd.discrepancies.is_none() {
                return Err(CliError::Inconsistent(
                    "--codim needs discrepancies: declare \"ambient\": \"smooth\" or supply \"discrepancies\"".into(),
                ));
            }
            let report = classify::components(&graph, &dd, m, auto_refine)?;
            emit(out, &render::contact_report(&report, codim))?;
        }
        Command::Poset { m, file } => {
            let (graph, dd) = load_with_data(&file)?;
            emit(out, &render::poset(&classify::adjacency_poset(&graph, &dd, m)?))?;
        }
        Command::Fiber { divisor, file } => {
            let (graph, dd) = load_with_data(&file)?;
            let pieces = match &divisor {
                Some(id) => vec![fiber::piece_topology(&graph, &dd, id)?],
                None => fiber::all_pieces(&graph, &dd)?,
            };
            let euler = match fiber::euler_check(&graph, &dd) {
                Ok(check) => render::euler(&check),
                Err(e @ contact_loci_core::Error::PositiveGenus(_)) => json!({ "skipped": e.to_string() }),
                Err(e) => return Err(e.into()),
            };
            emit(out, &json!({ "pieces": pieces.iter().map(render::piece).collect::<Vec<_>>(), "euler_check": euler }))?;
        }
        Command::Toric { command } => emit(out, &toric_command(command)?)?,
        Command::Dot { file } => {
            let (doc, graph) = load(&file)?;
            let report = graph.validate();
            if !report.passed() {
                return Err(contact_loci_core::Error::InvalidGraph(report).into());
            }
            let dd = doc.divisor_data(&graph)?;
            write!(out, "{}", dot::export_dot(&graph, Some(&dd))).map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
        }
        Command::Sweep { from, to, auto_refine, file } => {
            if from > to {
                return Err(CliError::Usage(format!("--from {from} is larger than --to {to}")));
            }
            let (graph, dd) = load_with_data(&file)?;
            for m in from..=to {
                let report = classify::components(&graph, &dd, m, auto_refine)?;
                let ids: Vec<String> = report.component_ids().iter().map(|id| id.to_string()).collect();
                emit(
                    out,
                    &json!({
                        "m": m,
                        "components": ids,
                        "count": ids.len(),
                        "empty": report.m_divisors.is_empty(),
                        "min_codimension": report.min_codimension.as_ref().map(render::rational),
                    }),
                )?;
            }
        }
        Command::SelfTest { cases } => {
            let seed = match std::env::var(SEED_VAR) {
                Ok(text) => text
                    .trim()
                    .parse::<u64>()
                    .map_err(|_| CliError::Usage(format!("{SEED_VAR}={text:?} is not an unsigned integer")))?,
                Err(_) => selftest::DEFAULT_SEED,
            };
            let outcomes = selftest::run_all(seed, cases);
            let failed = outcomes.iter().filter(|o| !o.passed()).count();
            for o in &outcomes {
                emit(
                    out,
                    &json!({ "check": o.name, "seed": seed, "cases": o.cases, "passed": o.passed(), "failures": o.failures }),
                )?;
            }
            if failed > 0 {
                return Err(CliError::Failed(failed));
            }
        }
    }
    Ok(())
}

fn toric_command(command: ToricCommand) -> Result<Value, CliError> {
    Ok(match command {
        ToricCommand::Eval { entries } => {
            let (n, q) = toric::hj_eval(&entries)?;
            json!({ "n": n, "q": q })
        }
        ToricCommand::Expand { n, q } => json!(toric::hj_expand(n, q)?),
        ToricCommand::Hull { n, q } => render::pairs(&toric::hull_boundary_points(n, q)?),
        ToricCommand::Generators { n, q } => render::pairs(&toric::invariant_generators(n, q)?),
        ToricCommand::Monotonicity { n1, entries } => {
            let sequence = toric::auxiliary_sequence(&entries)?;
            let multiplicities = sequence[1..]
                .iter()
                .map(|&x| x.checked_mul(n1))
                .collect::<Option<Vec<u64>>>()
                .ok_or_else(|| CliError::Usage(format!("multiplicities overflow for --n1 {n1}")))?;
            let check = toric::verify_monotonicity(&entries, &multiplicities)?;
            json!({
                "holds": check.holds,
                "first_violation": check.first_violation.map(|(i, j)| json!({ "row": i, "point": j })),
                "multiplicities": multiplicities,
            })
        }
    })
}
