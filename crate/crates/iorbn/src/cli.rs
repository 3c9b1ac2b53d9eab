//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use iorbn_core::explicit::{self, BoundedOutcome, ExploreError};
use iorbn_core::symbolic::{self, CrpAnswer, CrpKind, SymbolicError};
use iorbn_core::translate::io_to_rbn;
use iorbn_core::{Net, Trace, TransitionSystem};

use crate::format::{self, InitSpec, QuerySpec, TargetSpec};
use crate::harness::{self, Corpus, HarnessError};

/// Process exit codes.
pub mod exit {
    pub const YES: i32 = 0;
    pub const NO: i32 = 1;
    pub const UNKNOWN: i32 = 2;
    pub const USAGE: i32 = 64;
    pub const BUDGET: i32 = 70;
}

#[derive(Debug, Parser)]
#[command(
    name = "iorbn",
    version,
    about = "Translate IO nets to RBNs and decide reachability queries"
)]
struct Cli {
    /// Maximum number of configurations an explicit search may visit.
    #[arg(long, global = true, default_value_t = explicit::DEFAULT_BUDGET)]
    budget: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Saturation for `#q>=1` queries, bounded search otherwise.
    Saturate,
    /// Bounded explicit search on the net as given.
    Explicit,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Translate an IO net into an RBN.
    Translate {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Output file; standard output if omitted.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Bounded cube reachability.
    Reach {
        #[arg(long, value_name = "FILE")]
        net: PathBuf,
        /// Query file, or the query text itself.
        #[arg(long, value_name = "QUERY")]
        query: String,
        /// Populations to search, `A..B` (inclusive); default `0..2|Q|`.
        #[arg(long, value_name = "A..B", value_parser = parse_pop)]
        pop: Option<RangeInclusive<u32>>,
    },
    /// Cardinality reachability (`#q>=1`, `#q=0` atoms).
    Crp {
        #[arg(long, value_name = "FILE")]
        net: PathBuf,
        #[arg(long, value_name = "QUERY")]
        query: String,
        #[arg(long, value_enum, default_value_t = Mode::Saturate)]
        mode: Mode,
        #[arg(long, value_name = "A..B", value_parser = parse_pop)]
        pop: Option<RangeInclusive<u32>>,
    },
    /// Print a random run.
    Simulate {
        #[arg(long, value_name = "FILE")]
        net: PathBuf,
        /// Configuration file, or text such as `{a:1, b:2}`.
        #[arg(long, value_name = "CONFIG")]
        config: String,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the differential test suites.
    Validate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instances per suite.
        #[arg(long, default_value_t = 100)]
        iters: usize,
    },
}

/// `A..B`, `A..=B` or `A`, all inclusive.
pub fn parse_pop(text: &str) -> Result<RangeInclusive<u32>, String> {
    let num = |s: &str| {
        s.trim()
            .parse::<u32>()
            .map_err(|_| format!("'{s}' is not a population"))
    };
    let range = match text.split_once("..") {
        Some((a, b)) => num(a)?..=num(b.strip_prefix('=').unwrap_or(b))?,
        None => {
            let n = num(text)?;
            n..=n
        }
    };
    if range.is_empty() {
        return Err(format!("empty population range '{text}'"));
    }
    Ok(range)
}

enum Failure {
    Usage(String),
    Budget(String),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<ExploreError> for Failure {
    fn from(e: ExploreError) -> Self {
        match e {
            ExploreError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<SymbolicError> for Failure {
    fn from(e: SymbolicError) -> Self {
        match e {
            SymbolicError::Explore(e) => e.into(),
            SymbolicError::WitnessTooLarge => Failure::Budget(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// The file at `arg` if there is one, else `arg` itself.
fn file_or_text(arg: &str) -> Result<String, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        read(path)
    } else {
        Ok(arg.to_string())
    }
}

fn load_net(path: &Path) -> Result<Net, Failure> {
    format::parse_net(&read(path)?).map_err(|e| Failure::Usage(format!("{}:{e}", path.display())))
}

fn load_query(arg: &str) -> Result<QuerySpec, Failure> {
    format::parse_query(&file_or_text(arg)?).map_err(|e| Failure::Usage(format!("query {e}")))
}

fn check_query_states(net: &Net, query: &QuerySpec) -> Result<(), Failure> {
    match query.states().into_iter().find(|q| !net.has_state(q)) {
        Some(q) => Err(Failure::Usage(format!("query mentions unknown state {q}"))),
        None => Ok(()),
    }
}

fn print_yes(out: &mut dyn Write, trace: &Trace) -> Result<i32, Failure> {
    writeln!(out, "answer YES")?;
    out.write_all(format::write_trace(trace).as_bytes())?;
    Ok(exit::YES)
}

fn run_command(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let budget = cli.budget;
    match cli.command {
        Command::Translate { input, out: target } => {
            let Net::Io(net) = load_net(&input)? else {
                return Err(Failure::Usage(format!(
                    "{}: translate expects an ionet file",
                    input.display()
                )));
            };
            let (rbn, cert) = io_to_rbn(&net);
            let text = format!(
                "{}{}",
                format::write_net(&Net::Rbn(rbn)),
                format::write_certificate(&cert)
            );
            match target {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(exit::YES)
        }
        Command::Reach { net, query, pop } => {
            let net = load_net(&net)?;
            let query = load_query(&query)?;
            check_query_states(&net, &query)?;
            let states = u32::try_from(net.states().len()).unwrap_or(u32::MAX);
            let pops = pop.unwrap_or(0..=states.saturating_mul(2));
            let shown = format!("{}..{}", pops.start(), pops.end());
            match explicit::reach_bounded(
                &net,
                &query.init_cube(),
                &query.target_cube(),
                pops,
                budget,
            )? {
                BoundedOutcome::Reachable(trace) => print_yes(out, &trace),
                BoundedOutcome::NoAtBounds { explored } => {
                    writeln!(
                        out,
                        "answer NO_AT_BOUNDS populations {shown} explored {explored}"
                    )?;
                    Ok(exit::UNKNOWN)
                }
            }
        }
        Command::Crp {
            net,
            query,
            mode,
            pop,
        } => {
            let net = load_net(&net)?;
            let spec = load_query(&query)?;
            check_query_states(&net, &spec)?;
            let InitSpec::Support(init) = &spec.init else {
                return Err(Failure::Usage(
                    "crp expects 'init:' to list states; use reach for cubes".into(),
                ));
            };
            let TargetSpec::Crp(query) = &spec.target else {
                return Err(Failure::Usage(
                    "crp expects '#q>=1' / '#q=0' atoms; use reach for cubes".into(),
                ));
            };
            let pops = || {
                pop.clone()
                    .unwrap_or_else(|| symbolic::default_populations(net.states().len(), query))
            };
            let answer = match (mode, &net, query.kind()) {
                (Mode::Explicit, _, _) => symbolic::crp_bounded(&net, init, query, pops(), budget)?,
                (Mode::Saturate, Net::Io(n), _) => {
                    symbolic::io_crp_decide(n, init, query, pop.clone(), budget)?
                }
                (Mode::Saturate, Net::Rbn(n), CrpKind::Geq1) => {
                    symbolic::crp_geq1_decide(n, init, query)?
                }
                (Mode::Saturate, Net::Rbn(n), CrpKind::Geq1Eq0) => {
                    symbolic::crp_geq1_eq0_bounded(n, init, query, pops(), budget)?
                }
            };
            match answer {
                CrpAnswer::Yes(trace) => print_yes(out, &trace),
                CrpAnswer::No => {
                    writeln!(out, "answer NO")?;
                    Ok(exit::NO)
                }
                CrpAnswer::NoAtBounds => {
                    writeln!(out, "answer NO_AT_BOUNDS")?;
                    Ok(exit::UNKNOWN)
                }
            }
        }
        Command::Simulate {
            net,
            config,
            steps,
            seed,
        } => {
            let net = load_net(&net)?;
            let c0 = format::parse_config(&file_or_text(&config)?)
                .map_err(|e| Failure::Usage(format!("config {e}")))?;
            if let Some(q) = c0.support().find(|q| !net.has_state(q)) {
                return Err(Failure::Usage(format!(
                    "configuration mentions unknown state {q}"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut trace = Trace::empty(c0);
            for _ in 0..steps {
                let mut succ = net.step_successors(trace.final_config());
                if succ.is_empty() {
                    break;
                }
                let (step, next) = succ.swap_remove(rng.random_range(0..succ.len()));
                trace.steps.push((step, next));
            }
            out.write_all(format::write_trace(&trace).as_bytes())?;
            Ok(exit::YES)
        }
        Command::Validate { seed, iters } => {
            let corpus = Corpus {
                budget,
                ..Corpus::new(seed, iters)
            };
            let report = harness::validate(&corpus)?;
            write!(out, "{report}")?;
            writeln!(out, "summary {}", report.summary_json())?;
            Ok(if report.passed { exit::YES } else { exit::NO })
        }
    }
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    exit::YES
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    exit::USAGE
                }
            };
        }
    };
    match run_command(cli, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            exit::USAGE
        }
        Err(Failure::Budget(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            exit::BUDGET
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn population_ranges() {
        assert_eq!(parse_pop("1..4"), Ok(1..=4));
        assert_eq!(parse_pop("1..=4"), Ok(1..=4));
        assert_eq!(parse_pop("3"), Ok(3..=3));
        assert!(parse_pop("4..1").is_err());
        assert!(parse_pop("a..b").is_err());
    }

    #[test]
    fn help_exits_zero_and_bad_flags_exit_64() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["iorbn", "--help"], &mut out, &mut err), exit::YES);
        assert!(String::from_utf8(out).unwrap().contains("translate"));
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(
            run(["iorbn", "reach", "--bogus"], &mut out, &mut err),
            exit::USAGE
        );
        assert_eq!(run(["iorbn"], &mut out, &mut err), exit::USAGE);
    }
}
