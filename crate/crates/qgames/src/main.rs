use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qgames::classical::{classical_report, report_for, GameId};
use qgames::format::{parse_game, write_game};
use qgames::session::{basic_summary, basic_transcript, facilitated_summary, facilitated_transcript};
use qgames::sweep::{list_targets, run_sweep, SweepTarget};
use qgames::verify::{run_verify, DEFAULT_TOLERANCE};
use qgames_core::games::StateKind;
use qgames_core::qss::{run_basic_qss, run_facilitated, CheatModel, SessionConfig};

/// Nonlocal games, entanglement measures and secret-sharing simulations.
#[derive(Parser)]
#[command(name = "qgames", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit figure data as CSV.
    Sweep {
        #[arg(long, required_unless_present = "list")]
        target: Option<String>,
        /// Points per axis.
        #[arg(long, default_value_t = 101)]
        grid: usize,
        /// Largest n for `wn_game`.
        #[arg(long, default_value_t = 20)]
        n_max: u32,
        /// Print the figure-to-target mapping.
        #[arg(long)]
        list: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive classical bound of a game.
    Classical {
        /// vaidman_ghz, vaidman_w, G4_1, G5_1, G5_2, G6_1, G6_2 or G6_3.
        #[arg(required_unless_present_any = ["file", "all"])]
        game: Option<String>,
        /// Read the game from a `<letters> <product> <weight>` file instead.
        #[arg(long, conflicts_with = "game")]
        file: Option<PathBuf>,
        /// Report every shipped game.
        #[arg(long, conflicts_with_all = ["game", "file"])]
        all: bool,
        /// Also print the game definition.
        #[arg(long)]
        show_spec: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check closed forms against brute-force evaluation.
    Verify {
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate a secret-sharing session.
    Qss {
        #[arg(value_enum)]
        protocol: Protocol,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        rounds: usize,
        /// W or GHZ; the basic protocol always uses GHZ. Default W.
        #[arg(long)]
        state: Option<String>,
        /// honest, random:<alice|bob> or flip:<alice|bob> (facilitated only).
        #[arg(long)]
        cheat: Option<String>,
        /// Fraction of control rounds Charlie checks (facilitated only).
        #[arg(long, default_value_t = 1.0)]
        control_rate: f64,
        /// Write the per-round CSV transcript here.
        #[arg(long)]
        transcript: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Protocol {
    Basic,
    Facilitated,
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot write {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    let mut out = open_out(path)?;
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Sweep {
            target,
            grid,
            n_max,
            list,
            out,
        } => {
            if list {
                emit(out.as_deref(), &list_targets())?;
                return Ok(ExitCode::SUCCESS);
            }
            let target: SweepTarget = target.expect("required by clap").parse()?;
            let table = run_sweep(target, grid, n_max)?;
            let mut w = open_out(out.as_deref())?;
            table.write_csv(&mut w)?;
            w.flush()?;
        }
        Command::Classical {
            game,
            file,
            all,
            show_spec,
            out,
        } => {
            let mut text = String::new();
            let mut add = |spec: &qgames_core::games::GameSpec, report: qgames::classical::ClassicalReport| {
                if show_spec {
                    text.push_str(&write_game(spec));
                }
                text.push_str(&report.render());
            };
            if let Some(path) = file {
                let source =
                    std::fs::read_to_string(&path).with_context(|| format!("cannot read {}", path.display()))?;
                let spec = parse_game(&source).with_context(|| format!("in {}", path.display()))?;
                let name = path.file_stem().map_or("file".into(), |s| s.to_string_lossy().into_owned());
                let report = classical_report(&name, &spec, None)?;
                add(&spec, report);
            } else {
                let ids = if all {
                    GameId::all()
                } else {
                    vec![game.expect("required by clap").parse()?]
                };
                for id in ids {
                    add(&id.game(), report_for(id)?);
                }
            }
            emit(out.as_deref(), &text)?;
        }
        Command::Verify { tolerance, grid, out } => {
            let report = run_verify(tolerance, grid)?;
            emit(out.as_deref(), &report.render())?;
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Qss {
            protocol,
            seed,
            rounds,
            state,
            cheat,
            control_rate,
            transcript,
            out,
        } => {
            let (summary, table) = match protocol {
                Protocol::Basic => {
                    if state.is_some_and(|s| !s.eq_ignore_ascii_case("GHZ")) {
                        bail!("the basic protocol uses a GHZ state");
                    }
                    if cheat.is_some_and(|c| c != "honest") {
                        bail!("cheat models apply to the facilitated protocol only");
                    }
                    let result = run_basic_qss(rounds, seed)?;
                    (basic_summary(&result), basic_transcript(&result))
                }
                Protocol::Facilitated => {
                    let kind: StateKind = state.as_deref().unwrap_or("W").parse()?;
                    let cheat = cheat.as_deref().unwrap_or("honest");
                    let cheat: CheatModel = cheat.parse().with_context(|| format!("--cheat `{cheat}`"))?;
                    let config = SessionConfig::new(rounds, kind, seed)
                        .with_cheat(cheat)
                        .with_control_rate(control_rate);
                    let result = run_facilitated(&config)?;
                    (facilitated_summary(&result), facilitated_transcript(&result))
                }
            };
            if let Some(path) = transcript {
                let file = File::create(&path).with_context(|| format!("cannot write {}", path.display()))?;
                let mut w = BufWriter::new(file);
                table.write_csv(&mut w)?;
                w.flush()?;
            }
            emit(out.as_deref(), &summary)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
