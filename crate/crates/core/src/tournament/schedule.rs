use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use super::{run_match_in, ButtonCounts, MatchConfig, MatchContext, MatchLog, PairInfo, TournamentError};
use crate::engine::{EndReason, Player};
use crate::gateway::{resolve_agent, validate_roster, AgentSpec};
use crate::units::HealthFraction;

pub const TOURNAMENT_SCHEMA: &str = "lmfa-tournament/1";

/// `base + pair_index * 1000 + repeat`, wrapping.
pub fn match_seed(base_seed: u64, pair_index: usize, repeat: u32) -> u64 {
    base_seed.wrapping_add((pair_index as u64).wrapping_mul(1000)).wrapping_add(u64::from(repeat))
}

pub fn log_file_name(pair_index: usize, repeat: u32, p1: &str, p2: &str) -> String {
    format!("match_{pair_index}_{repeat}_{p1}_vs_{p2}.json")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScheduledMatch {
    pub pair_index: usize,
    pub repeat: u32,
    /// Roster indices, `row < col`.
    pub row: usize,
    pub col: usize,
    pub p1: usize,
    pub p2: usize,
    pub seed: u64,
}

/// Every unordered pair `matches_per_pair` times. The row agent takes P1
/// when `pair_index + repeat` is even.
pub fn schedule(n: usize, base_seed: u64, matches_per_pair: u32) -> Vec<ScheduledMatch> {
    let mut out = Vec::new();
    let mut pair_index = 0;
    for row in 0..n {
        for col in row + 1..n {
            for repeat in 0..matches_per_pair {
                let swap = (pair_index + repeat as usize) % 2 == 1;
                let (p1, p2) = if swap { (col, row) } else { (row, col) };
                out.push(ScheduledMatch { pair_index, repeat, row, col, p1, p2, seed: match_seed(base_seed, pair_index, repeat) });
            }
            pair_index += 1;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellOutcome {
    RowWin,
    ColWin,
    Draw,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchSummary {
    pub pair_index: usize,
    pub repeat: u32,
    pub seed: u64,
    pub p1: String,
    pub p2: String,
    /// None on a draw.
    pub winner: Option<String>,
    pub winner_health_fraction: Option<HealthFraction>,
    pub end_reason: EndReason,
    pub frames_elapsed: u32,
    pub log_file: String,
}

/// One unordered pair. With several matches per pair the cell holds the
/// series result and the series winner's mean remaining health.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixCell {
    pub row: String,
    pub col: String,
    pub outcome: CellOutcome,
    pub winner_health_fraction: Option<HealthFraction>,
    pub row_wins: u32,
    pub col_wins: u32,
    pub draws: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Standing {
    pub agent: String,
    pub matches: u32,
    pub wins: u32,
    pub draws: u32,
    pub losses: u32,
    /// `(wins + draws / 2) / matches`.
    pub win_rate: f64,
    /// Sum of remaining health over wins with a known value, in thousandths.
    pub winner_health_milli: u64,
    /// Wins whose remaining health is known.
    pub wins_with_health: u32,
    pub button_counts: ButtonCounts,
}

impl Standing {
    pub fn mean_winner_health(&self) -> Option<f64> {
        (self.wins_with_health > 0).then(|| self.winner_health_milli as f64 / 1000.0 / f64::from(self.wins_with_health))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TournamentResult {
    pub schema: String,
    pub agents: Vec<String>,
    pub matches_per_pair: u32,
    pub matches: Vec<MatchSummary>,
    /// Upper triangle in roster order.
    pub matrix: Vec<MatrixCell>,
    /// Roster order.
    pub standings: Vec<Standing>,
}

impl TournamentResult {
    /// Aggregates logs in pair-index order; the input order does not matter.
    pub fn from_logs(agents: &[String], logs: &[MatchLog]) -> Result<TournamentResult, TournamentError> {
        let position: BTreeMap<&str, usize> = agents.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
        if position.len() != agents.len() {
            return Err(TournamentError::Integrity("duplicate agent in roster".into()));
        }
        let mut sorted: Vec<&MatchLog> = logs.iter().collect();
        sorted.sort_by_key(|l| (l.pair.index, l.pair.repeat));

        let mut standings: Vec<Standing> = agents
            .iter()
            .map(|a| Standing {
                agent: a.clone(),
                matches: 0,
                wins: 0,
                draws: 0,
                losses: 0,
                win_rate: 0.0,
                winner_health_milli: 0,
                wins_with_health: 0,
                button_counts: ButtonCounts::default(),
            })
            .collect();
        // (row, col) -> (row wins, col wins, draws, row health, row known, col health, col known)
        let mut cells: BTreeMap<(usize, usize), [u64; 7]> = BTreeMap::new();
        let mut matches = Vec::with_capacity(sorted.len());
        let mut repeats = 1;

        for log in sorted {
            let lookup = |id: &str| {
                position.get(id).copied().ok_or_else(|| TournamentError::Integrity(format!("agent {id:?} is not in the roster")))
            };
            let i1 = lookup(log.agent_id(Player::P1))?;
            let i2 = lookup(log.agent_id(Player::P2))?;
            if i1 == i2 {
                return Err(TournamentError::Integrity(format!("{} plays itself", log.file_name())));
            }
            let (row, col) = (i1.min(i2), i1.max(i2));
            repeats = repeats.max(log.pair.repeat + 1);
            let cell = cells.entry((row, col)).or_default();
            for (idx, player) in [(i1, Player::P1), (i2, Player::P2)] {
                standings[idx].matches += 1;
                standings[idx].button_counts.add(log.button_counts.get(player));
            }
            let health = log.result.winner_health_fraction;
            match log.winner_id() {
                None => {
                    cell[2] += 1;
                    standings[i1].draws += 1;
                    standings[i2].draws += 1;
                }
                Some(w) => {
                    let wi = lookup(w)?;
                    let li = if wi == i1 { i2 } else { i1 };
                    standings[wi].wins += 1;
                    standings[li].losses += 1;
                    let (count, sum, known) = if wi == row { (0, 3, 4) } else { (1, 5, 6) };
                    cell[count] += 1;
                    if let Some(h) = health {
                        standings[wi].winner_health_milli += u64::from(h.milli());
                        standings[wi].wins_with_health += 1;
                        cell[sum] += u64::from(h.milli());
                        cell[known] += 1;
                    }
                }
            }
            matches.push(MatchSummary {
                pair_index: log.pair.index,
                repeat: log.pair.repeat,
                seed: log.seed,
                p1: log.agent_id(Player::P1).to_string(),
                p2: log.agent_id(Player::P2).to_string(),
                winner: log.winner_id().map(str::to_string),
                winner_health_fraction: health,
                end_reason: log.result.end_reason,
                frames_elapsed: log.result.frames_elapsed,
                log_file: log.file_name(),
            });
        }

        let mut matrix = Vec::new();
        for row in 0..agents.len() {
            for col in row + 1..agents.len() {
                let c = cells.get(&(row, col)).ok_or_else(|| {
                    TournamentError::Integrity(format!("no match between {:?} and {:?}", agents[row], agents[col]))
                })?;
                let mean = |sum: u64, known: u64| {
                    (known > 0).then(|| HealthFraction::from_milli(((2 * sum + known) / (2 * known)) as u16))
                };
                let (outcome, health) = match c[0].cmp(&c[1]) {
                    std::cmp::Ordering::Greater => (CellOutcome::RowWin, mean(c[3], c[4])),
                    std::cmp::Ordering::Less => (CellOutcome::ColWin, mean(c[5], c[6])),
                    std::cmp::Ordering::Equal => (CellOutcome::Draw, None),
                };
                matrix.push(MatrixCell {
                    row: agents[row].clone(),
                    col: agents[col].clone(),
                    outcome,
                    winner_health_fraction: health,
                    row_wins: c[0] as u32,
                    col_wins: c[1] as u32,
                    draws: c[2] as u32,
                });
            }
        }
        for s in &mut standings {
            if s.matches > 0 {
                s.win_rate = (f64::from(s.wins) + 0.5 * f64::from(s.draws)) / f64::from(s.matches);
            }
        }
        Ok(TournamentResult {
            schema: TOURNAMENT_SCHEMA.to_string(),
            agents: agents.to_vec(),
            matches_per_pair: repeats,
            matches,
            matrix,
            standings,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("tournament results serialize");
        s.push('\n');
        s
    }
}

/// A finished round robin: the aggregate and every match log.
#[derive(Clone, Debug)]
pub struct Tournament {
    pub result: TournamentResult,
    /// Schedule order.
    pub logs: Vec<MatchLog>,
}

/// Plays the full schedule on up to `parallel` threads. `config.seed` is the
/// base seed.
pub fn run_round_robin(
    agents: &[AgentSpec],
    config: &MatchConfig,
    matches_per_pair: u32,
    parallel: usize,
) -> Result<Tournament, TournamentError> {
    if agents.len() < 2 {
        return Err(TournamentError::TooFewAgents(agents.len()));
    }
    if matches_per_pair == 0 {
        return Err(TournamentError::Config("matches_per_pair must be at least 1".into()));
    }
    config.validate()?;
    validate_roster(agents)?;
    for spec in agents {
        resolve_agent(spec, config.seed)?;
    }
    let roster: Vec<String> = agents.iter().map(|a| a.id.clone()).collect();
    let jobs = schedule(agents.len(), config.seed, matches_per_pair);
    let run = |job: &ScheduledMatch| {
        let context = MatchContext {
            roster: roster.clone(),
            pair: PairInfo {
                index: job.pair_index,
                repeat: job.repeat,
                row_agent: roster[job.row].clone(),
                col_agent: roster[job.col].clone(),
            },
        };
        run_match_in(&agents[job.p1], &agents[job.p2], &config.with_seed(job.seed), context)
    };

    let workers = parallel.clamp(1, jobs.len());
    if workers == 1 {
        // Inline, so single-threaded targets never spawn.
        let logs = jobs.iter().map(run).collect::<Result<Vec<_>, _>>()?;
        let result = TournamentResult::from_logs(&roster, &logs)?;
        return Ok(Tournament { result, logs });
    }
    let next = AtomicUsize::new(0);
    let mut finished: Vec<(usize, Result<MatchLog, TournamentError>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::SeqCst);
                        let Some(job) = jobs.get(i) else { break };
                        done.push((i, run(job)));
                    }
                    done
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("match worker panicked")).collect()
    });
    finished.sort_by_key(|(i, _)| *i);
    let logs = finished.into_iter().map(|(_, r)| r).collect::<Result<Vec<_>, _>>()?;
    let result = TournamentResult::from_logs(&roster, &logs)?;
    Ok(Tournament { result, logs })
}
