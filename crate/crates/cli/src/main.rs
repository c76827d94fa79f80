//! `lmfa`: run matches and tournaments, verify replays, regenerate reports.

mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lmfa_core::engine::Winner;
use lmfa_core::gateway::mock::{MockBehavior, MockServer};
use lmfa_core::gateway::{build_system_prompt, PromptConfig};
use lmfa_core::reporting::{self, verify_replay, ReplayError, Verdict};
use lmfa_core::tournament::{run_match, run_round_robin, MatchLog, TournamentResult};

use manifest::{load_agents, load_config, log_files, prepare_out_dir, write};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("setup error: {0}")]
    Setup(String),
    #[error("{0}")]
    Diverged(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    fn io(path: &Path, source: std::io::Error) -> CliError {
        CliError::Io { path: path.display().to_string(), source }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Config(_) => 2,
            CliError::Setup(_) => 3,
            CliError::Diverged(_) => 4,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "lmfa", version, about = "Fighting-game arena for scripted and remote agents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Settings file (`"lmfa_config": 1`). Defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Agents file (`"lmfa_agents": 1`).
    #[arg(long)]
    agents: PathBuf,
    /// Output directory; must be empty unless --force.
    #[arg(long)]
    out: PathBuf,
    /// Base seed, overriding the settings file.
    #[arg(long)]
    seed: Option<u64>,
    /// Replace earlier logs and reports in the output directory.
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Play one match between two agents from the agents file.
    RunMatch {
        #[command(flatten)]
        run: RunArgs,
        /// P1 agent id (default: first in the file).
        #[arg(long)]
        p1: Option<String>,
        /// P2 agent id (default: second in the file).
        #[arg(long)]
        p2: Option<String>,
    },
    /// Play a full round robin and write logs and reports.
    Tournament {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        matches_per_pair: Option<u32>,
        /// Maximum concurrent matches.
        #[arg(long)]
        parallel: Option<usize>,
    },
    /// Re-simulate a match log and compare it frame by frame.
    Replay { log: PathBuf },
    /// Rebuild every report from the match logs in a directory.
    Report {
        dir: PathBuf,
        /// Write reports here instead of into the log directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// Check settings and agents files without playing.
    Validate {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        agents: Option<PathBuf>,
    },
    /// Print the system prompt sent to remote agents.
    Prompt {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Serve canned agent replies on a local port.
    MockServer {
        #[arg(long, default_value = "127.0.0.1:8077")]
        addr: String,
        /// Reply text; repeat to cycle through several.
        #[arg(long = "reply", default_value = "C")]
        replies: Vec<String>,
        #[arg(long, default_value_t = 0)]
        delay_ms: u64,
        #[arg(long, default_value_t = 200)]
        status: u16,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lmfa: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::RunMatch { run, p1, p2 } => run_match_cmd(&run, p1.as_deref(), p2.as_deref()),
        Command::Tournament { run, matches_per_pair, parallel } => tournament_cmd(&run, matches_per_pair, parallel),
        Command::Replay { log } => replay_cmd(&log),
        Command::Report { dir, out, force } => report_cmd(&dir, out.as_deref(), force),
        Command::Validate { config, agents } => {
            load_config(config.as_deref())?;
            if let Some(agents) = agents {
                let specs = load_agents(&agents)?;
                println!("ok: {} agents", specs.len());
            } else {
                println!("ok");
            }
            Ok(())
        }
        Command::Prompt { config } => {
            let config = load_config(config.as_deref())?.match_config;
            print!(
                "{}",
                build_system_prompt(&PromptConfig {
                    match_length_frames: config.match_length_frames,
                    decision_interval_frames: config.decision_interval_frames,
                })
            );
            Ok(())
        }
        Command::MockServer { addr, replies, delay_ms, status } => {
            let server = MockServer::bind(&addr, MockBehavior { replies, delay_ms, status, raw_body: None })
                .map_err(|e| CliError::Setup(format!("cannot bind {addr}: {e}")))?;
            println!("listening on {}", server.url());
            server.wait();
            Ok(())
        }
    }
}

fn run_match_cmd(run: &RunArgs, p1: Option<&str>, p2: Option<&str>) -> Result<(), CliError> {
    let config = load_config(run.config.as_deref())?;
    let agents = load_agents(&run.agents)?;
    let pick = |id: Option<&str>, default: usize| match id {
        Some(id) => agents
            .iter()
            .find(|a| a.id == id)
            .ok_or_else(|| CliError::Setup(format!("agent {id:?} is not in {}", run.agents.display()))),
        None => agents
            .get(default)
            .ok_or_else(|| CliError::Setup(format!("{} needs at least 2 agents", run.agents.display()))),
    };
    let (a, b) = (pick(p1, 0)?, pick(p2, 1)?);
    let mut match_config = config.match_config;
    if let Some(seed) = run.seed {
        match_config.seed = seed;
    }
    prepare_out_dir(&run.out, run.force)?;
    let log = run_match(a, b, &match_config)?;
    write(&run.out.join(log.file_name()), &log.to_json())?;
    println!("{}", outcome_line(&log));
    Ok(())
}

fn outcome_line(log: &MatchLog) -> String {
    let health = log.result.winner_health_fraction.map_or("-".to_string(), |h| h.to_string());
    let winner = match log.result.winner {
        Winner::Draw => "draw",
        _ => log.winner_id().unwrap_or("draw"),
    };
    format!("WINNER={winner} HEALTH={health} REASON={}", log.result.end_reason.as_str())
}

fn tournament_cmd(run: &RunArgs, matches_per_pair: Option<u32>, parallel: Option<usize>) -> Result<(), CliError> {
    let config = load_config(run.config.as_deref())?;
    let agents = load_agents(&run.agents)?;
    let mut match_config = config.match_config;
    if let Some(seed) = run.seed {
        match_config.seed = seed;
    }
    let matches_per_pair = matches_per_pair.unwrap_or(config.matches_per_pair);
    let parallel = parallel.unwrap_or(config.parallel_matches);
    prepare_out_dir(&run.out, run.force)?;
    let tournament = run_round_robin(&agents, &match_config, matches_per_pair, parallel)?;
    for log in &tournament.logs {
        write(&run.out.join(log.file_name()), &log.to_json())?;
    }
    write_reports(&run.out, &tournament.result, &tournament.logs)?;
    print!("{}", reporting::win_rates_csv(&reporting::build_win_rates(&tournament.result)));
    Ok(())
}

fn write_reports(dir: &Path, result: &TournamentResult, logs: &[MatchLog]) -> Result<(), CliError> {
    for (name, text) in reporting::render_reports(result, logs).map_err(|e| CliError::Config(e.to_string()))? {
        write(&dir.join(name), &text)?;
    }
    Ok(())
}

fn read_log(path: &Path) -> Result<MatchLog, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn replay_cmd(path: &Path) -> Result<(), CliError> {
    let log = read_log(path)?;
    let verdict = verify_replay(&log).map_err(|e: ReplayError| CliError::Config(format!("{}: {e}", path.display())))?;
    match verdict {
        Verdict::Match => {
            println!("MATCH frames={} digest={}", log.input_trace.len(), log.final_digest);
            Ok(())
        }
        Verdict::Diverged { frame } => {
            println!("DIVERGED frame={frame}");
            Err(CliError::Diverged(format!("{}: replay diverges at frame {frame}", path.display())))
        }
        Verdict::ResultMismatch { logged, replayed } => {
            println!("RESULT_MISMATCH logged={logged:?} replayed={replayed:?}");
            Err(CliError::Diverged(format!("{}: recorded result differs from the replay", path.display())))
        }
        Verdict::CountsMismatch => {
            println!("COUNTS_MISMATCH");
            Err(CliError::Diverged(format!("{}: recorded button counts differ from the trace", path.display())))
        }
    }
}

fn report_cmd(dir: &Path, out: Option<&Path>, force: bool) -> Result<(), CliError> {
    let files = log_files(dir)?;
    if files.is_empty() {
        return Err(CliError::Config(format!("no match logs in {}", dir.display())));
    }
    let logs = files.iter().map(|f| read_log(f)).collect::<Result<Vec<_>, _>>()?;
    let first = logs.iter().min_by_key(|l| (l.pair.index, l.pair.repeat)).expect("at least one log");
    let roster = first.roster.clone();
    if let Some(other) = logs.iter().find(|l| l.roster != roster) {
        return Err(CliError::Config(format!("{} belongs to a different roster", other.file_name())));
    }
    let result = TournamentResult::from_logs(&roster, &logs)?;
    let target = match out {
        Some(out) => {
            prepare_out_dir(out, force)?;
            out
        }
        None => dir,
    };
    write_reports(target, &result, &logs)?;
    print!("{}", reporting::win_rates_csv(&reporting::build_win_rates(&result)));
    Ok(())
}
