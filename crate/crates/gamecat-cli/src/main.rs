//! `gamecat`: check laws and counterexamples, draw truncated trees, play games and
//! inspect run spaces of game spec documents.

mod check;
mod error;
mod play;
mod spec;
mod viz;

use std::fmt::Write as _;
use std::io::{self, BufRead, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gamecat_core::game::DEFAULT_CAP;
use gamecat_core::metric::{ball_roundtrip, krom_space, run_space, RunSpace};

use crate::check::{Settings, Suite};
use crate::error::{CliError, CliResult, EXIT_FAIL, EXIT_PASS};
use crate::play::Side;
use crate::viz::Format;

/// Default seed of the randomized suites.
const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Parser)]
#[command(name = "gamecat", version, about = "Executable categories of infinite two-player games")]
struct Cli {
    /// Enumeration cap on visited moments; overrides GAMECAT_CAP.
    #[arg(long, global = true, env = "GAMECAT_CAP", default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a check suite over spec documents, or over built-in games when none is given.
    Check {
        specs: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Print per-check timings to standard error.
        #[arg(long)]
        timings: bool,
    },
    /// Draw the tree of a spec truncated at a depth.
    Viz {
        spec: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Play a spec against a named opponent strategy, reading moves line by line.
    Play {
        spec: PathBuf,
        #[arg(long, value_enum)]
        side: Side,
        /// One of first, last, repeat or winning, optionally suffixed with the side.
        #[arg(long, default_value = "first")]
        opponent: String,
        #[arg(long, default_value_t = 3)]
        innings: usize,
        /// Read moves from this file instead of standard input.
        #[arg(long)]
        script: Option<PathBuf>,
        /// Also save the transcript to this file.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Print the run space, the Krom space or the ball round trip of a regular spec.
    Metric {
        spec: PathBuf,
        #[arg(value_enum)]
        action: MetricAction,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricAction {
    Runspace,
    Krom,
    BallRoundtrip,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn write_out(path: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p.display().to_string(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<u8> {
    let cap = cli.cap;
    match cli.command {
        Command::Check { specs, suite, depth, seed, timings } => {
            let loaded = specs.iter().map(|p| spec::load(p)).collect::<CliResult<Vec<_>>>()?;
            let report = check::run(suite, &loaded, Settings { depth, seed, cap });
            print!("{report}");
            if timings {
                eprint!("{}", report.timings());
            }
            Ok(if report.failed() == 0 { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Viz { spec, depth, format, out } => {
            let loaded = spec::load(&spec)?;
            let text = viz::render(&loaded, depth, cap, format)?;
            write_out(out.as_ref(), &text)?;
            Ok(EXIT_PASS)
        }
        Command::Play { spec, side, opponent, innings, script, transcript } => {
            let loaded = spec::load(&spec)?;
            let mut input: Box<dyn BufRead> = match &script {
                Some(p) => Box::new(BufReader::new(
                    std::fs::File::open(p).map_err(|e| CliError::io(p.display().to_string(), e))?,
                )),
                None => Box::new(io::stdin().lock()),
            };
            let mut prompts = io::stderr();
            let (_, text) = play::run(&loaded, side, &opponent, innings, &mut input, &mut prompts)?;
            let _ = prompts.flush();
            print!("{text}");
            if let Some(p) = &transcript {
                write_out(Some(p), &text)?;
            }
            Ok(EXIT_PASS)
        }
        Command::Metric { spec, action } => {
            let loaded = spec::load(&spec)?;
            let g = loaded.require_regular()?;
            match action {
                MetricAction::Runspace => print!("{}", matrix(&run_space(g))),
                MetricAction::Krom => print!("{}", matrix(&krom_space(g))),
                MetricAction::BallRoundtrip => {
                    let rt = ball_roundtrip(&run_space(g).space).map_err(|e| CliError::from_game(&loaded.name, e))?;
                    println!("bijective: {}", rt.bijective);
                    println!("nonexpanding: {}", rt.nonexpanding);
                    println!("isometry: {}", rt.isometry);
                    println!("verdict: {}", if rt.holds() { "pass" } else { "fail" });
                    return Ok(if rt.holds() { EXIT_PASS } else { EXIT_FAIL });
                }
            }
            Ok(EXIT_PASS)
        }
    }
}

/// The full code matrix of a run space, one row per point, with its runs and winners.
fn matrix(rs: &RunSpace) -> String {
    let mut out = String::new();
    let n = rs.space.len();
    let _ = writeln!(out, "points: {n}");
    for (i, r) in rs.runs.iter().enumerate() {
        let _ = writeln!(out, "{i}: {r} {}", if rs.alice[i] { "alice" } else { "bob" });
    }
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| match rs.space.code(i, j).finite() {
                Some(c) => c.to_string(),
                None => "inf".to_string(),
            })
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}
