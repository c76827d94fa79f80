//! Tables and plot data derived from match logs, and replay verification.

mod replay;

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::Button;
use crate::tournament::{ButtonCounts, CellOutcome, MatchLog, MatrixCell, TournamentError, TournamentResult};

pub use replay::{verify_replay, ReplayError, Verdict};

pub const MATRIX_CSV: &str = "matrix.csv";
pub const WIN_RATES_CSV: &str = "win_rates.csv";
pub const HEATMAP_CSV: &str = "heatmap.csv";
pub const HEATMAP_NORM_CSV: &str = "heatmap_norm.csv";
pub const MATRIX_DAT: &str = "matrix.dat";
pub const WIN_RATES_DAT: &str = "win_rates.dat";
pub const HEATMAP_DAT: &str = "heatmap.dat";
pub const TOURNAMENT_JSON: &str = "tournament.json";

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Integrity(#[from] TournamentError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixReport {
    pub agents: Vec<String>,
    /// Upper triangle, row-major in agent order.
    pub cells: Vec<MatrixCell>,
}

impl MatrixReport {
    pub fn cell(&self, a: &str, b: &str) -> Option<&MatrixCell> {
        self.cells.iter().find(|c| c.row == a && c.col == b)
    }

    /// Result from `row`'s point of view: `W:0.758`, `W` when the health is
    /// not known, `L`, `D`, or `-` on the diagonal.
    pub fn display(&self, row: usize, col: usize) -> String {
        if row == col {
            return "-".to_string();
        }
        let (a, b, flipped) = if row < col { (row, col, false) } else { (col, row, true) };
        let Some(cell) = self.cell(&self.agents[a], &self.agents[b]) else {
            return "?".to_string();
        };
        let row_won = match (cell.outcome, flipped) {
            (CellOutcome::Draw, _) => return "D".to_string(),
            (CellOutcome::RowWin, false) | (CellOutcome::ColWin, true) => true,
            _ => false,
        };
        match (row_won, cell.winner_health_fraction) {
            (true, Some(h)) => format!("W:{h}"),
            (true, None) => "W".to_string(),
            (false, _) => "L".to_string(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("agent");
        for a in &self.agents {
            out.push(',');
            out.push_str(a);
        }
        out.push('\n');
        for (i, a) in self.agents.iter().enumerate() {
            out.push_str(a);
            for j in 0..self.agents.len() {
                out.push(',');
                out.push_str(&self.display(i, j));
            }
            out.push('\n');
        }
        out
    }

    /// Gnuplot grid: the row agent's remaining health for a win, its
    /// negation for a loss, 0 for a draw, NaN when unknown or on the diagonal.
    pub fn to_dat(&self) -> String {
        let mut out = String::from("# matrix: rows and columns in agent order\n");
        for (i, a) in self.agents.iter().enumerate() {
            let _ = writeln!(out, "# {i} {a}");
        }
        for i in 0..self.agents.len() {
            let row: Vec<String> = (0..self.agents.len())
                .map(|j| {
                    let text = self.display(i, j);
                    match text.split_once(':') {
                        Some((_, h)) => h.to_string(),
                        None if text == "D" => "0".to_string(),
                        None if text == "L" => {
                            let (a, b) = (i.min(j), i.max(j));
                            let health = self.cell(&self.agents[a], &self.agents[b]).and_then(|c| c.winner_health_fraction);
                            health.map_or("NaN".to_string(), |h| format!("-{h}"))
                        }
                        None => "NaN".to_string(),
                    }
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

pub fn build_matrix(result: &TournamentResult) -> Result<MatrixReport, ReportError> {
    let n = result.agents.len();
    if result.matrix.len() != n * n.saturating_sub(1) / 2 {
        return Err(TournamentError::Integrity(format!(
            "expected {} matrix cells, found {}",
            n * n.saturating_sub(1) / 2,
            result.matrix.len()
        ))
        .into());
    }
    let report = MatrixReport { agents: result.agents.clone(), cells: result.matrix.clone() };
    for i in 0..n {
        for j in i + 1..n {
            if report.cell(&result.agents[i], &result.agents[j]).is_none() {
                return Err(TournamentError::Integrity(format!(
                    "missing cell {} vs {}",
                    result.agents[i], result.agents[j]
                ))
                .into());
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WinRateRow {
    pub agent: String,
    pub win_rate: f64,
    pub wins: u32,
    pub draws: u32,
    pub losses: u32,
    pub winner_health_milli: u64,
}

/// Descending by win rate, then by summed winner health, then by id.
pub fn build_win_rates(result: &TournamentResult) -> Vec<WinRateRow> {
    let mut rows: Vec<WinRateRow> = result
        .standings
        .iter()
        .map(|s| WinRateRow {
            agent: s.agent.clone(),
            win_rate: s.win_rate,
            wins: s.wins,
            draws: s.draws,
            losses: s.losses,
            winner_health_milli: s.winner_health_milli,
        })
        .collect();
    rows.sort_by(|a, b| {
        b.win_rate
            .total_cmp(&a.win_rate)
            .then(b.winner_health_milli.cmp(&a.winner_health_milli))
            .then(a.agent.cmp(&b.agent))
    });
    rows
}

pub fn win_rates_csv(rows: &[WinRateRow]) -> String {
    let mut out = String::from("agent,win_rate,wins,draws,losses\n");
    for r in rows {
        let _ = writeln!(out, "{},{:.3},{},{},{}", r.agent, r.win_rate, r.wins, r.draws, r.losses);
    }
    out
}

pub fn win_rates_dat(rows: &[WinRateRow]) -> String {
    let mut out = String::from("# rank win_rate agent\n");
    for (i, r) in rows.iter().enumerate() {
        let _ = writeln!(out, "{i} {:.3} \"{}\"", r.win_rate, r.agent);
    }
    out
}

/// Mean remaining health over the wins of a group of agents, using only the
/// wins whose health is known.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupHealth {
    pub wins: u32,
    pub known: u32,
    pub mean: Option<f64>,
}

pub fn group_winner_health(result: &TournamentResult, agents: &[&str]) -> GroupHealth {
    let mut wins = 0;
    let mut known = 0;
    let mut milli = 0;
    for s in result.standings.iter().filter(|s| agents.contains(&s.agent.as_str())) {
        wins += s.wins;
        known += s.wins_with_health;
        milli += s.winner_health_milli;
    }
    GroupHealth { wins, known, mean: (known > 0).then(|| milli as f64 / 1000.0 / f64::from(known)) }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatmapReport {
    pub agents: Vec<String>,
    pub counts: Vec<ButtonCounts>,
    /// Each row divided by its maximum; all-zero rows stay zero.
    pub normalized: Vec<[f64; 8]>,
}

fn normalize(counts: &ButtonCounts) -> [f64; 8] {
    let max = counts.0.iter().copied().max().unwrap_or(0);
    if max == 0 {
        return [0.0; 8];
    }
    counts.0.map(|c| c as f64 / max as f64)
}

/// Sums each agent's counts over all its matches. Agents appear in roster
/// order of the first log, then any others by id.
pub fn build_heatmap(logs: &[MatchLog]) -> HeatmapReport {
    let mut agents: Vec<String> = logs.first().map(|l| l.roster.clone()).unwrap_or_default();
    let mut extra: Vec<String> = logs
        .iter()
        .flat_map(|l| l.agents.iter().map(|a| a.id.clone()))
        .filter(|id| !agents.contains(id))
        .collect();
    extra.sort();
    extra.dedup();
    agents.extend(extra);
    let counts: Vec<ButtonCounts> = agents
        .iter()
        .map(|id| {
            let mut total = ButtonCounts::default();
            for log in logs {
                if let Some(side) = log.side_of(id) {
                    total.add(log.button_counts.get(side));
                }
            }
            total
        })
        .collect();
    let normalized = counts.iter().map(normalize).collect();
    HeatmapReport { agents, counts, normalized }
}

fn button_header() -> String {
    let names: Vec<&str> = Button::ALL.iter().map(|b| b.name()).collect();
    format!("agent,{}\n", names.join(","))
}

impl HeatmapReport {
    pub fn row(&self, agent: &str) -> Option<(ButtonCounts, [f64; 8])> {
        let i = self.agents.iter().position(|a| a == agent)?;
        Some((self.counts[i], self.normalized[i]))
    }

    pub fn to_csv(&self) -> String {
        let mut out = button_header();
        for (a, c) in self.agents.iter().zip(&self.counts) {
            let _ = writeln!(out, "{a},{c}");
        }
        out
    }

    pub fn to_norm_csv(&self) -> String {
        let mut out = button_header();
        for (a, row) in self.agents.iter().zip(&self.normalized) {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.6}")).collect();
            let _ = writeln!(out, "{a},{}", cells.join(","));
        }
        out
    }

    pub fn to_dat(&self) -> String {
        let mut out = String::from("# heatmap: rows are agents, columns Up Down Left Right A B C Start\n");
        for (i, a) in self.agents.iter().enumerate() {
            let _ = writeln!(out, "# {i} {a}");
        }
        for row in &self.normalized {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.6}")).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Every report file as (name, contents), in a fixed order.
pub fn render_reports(result: &TournamentResult, logs: &[MatchLog]) -> Result<Vec<(&'static str, String)>, ReportError> {
    let matrix = build_matrix(result)?;
    let rates = build_win_rates(result);
    let heatmap = build_heatmap(logs);
    Ok(vec![
        (TOURNAMENT_JSON, result.to_json()),
        (MATRIX_CSV, matrix.to_csv()),
        (WIN_RATES_CSV, win_rates_csv(&rates)),
        (HEATMAP_CSV, heatmap.to_csv()),
        (HEATMAP_NORM_CSV, heatmap.to_norm_csv()),
        (MATRIX_DAT, matrix.to_dat()),
        (WIN_RATES_DAT, win_rates_dat(&rates)),
        (HEATMAP_DAT, heatmap.to_dat()),
    ])
}

pub fn write_reports(dir: &Path, result: &TournamentResult, logs: &[MatchLog]) -> Result<(), ReportError> {
    for (name, text) in render_reports(result, logs)? {
        let path = dir.join(name);
        std::fs::write(&path, text).map_err(|source| ReportError::Io { path: path.display().to_string(), source })?;
    }
    Ok(())
}
