use std::fs;
use std::path::{Path, PathBuf};

use lmfa_core::gateway::{AgentSpec, GatewayError};
use lmfa_core::reporting;
use lmfa_core::tournament::{MatchConfig, TournamentError};
use serde::Deserialize;

use crate::CliError;

pub const CONFIG_VERSION: u32 = 1;
pub const AGENTS_VERSION: u32 = 1;

/// Run settings file. Every key is optional except the version.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub lmfa_config: u32,
    #[serde(rename = "match", default)]
    pub match_config: MatchConfig,
    #[serde(default = "one")]
    pub matches_per_pair: u32,
    #[serde(default = "one_usize")]
    pub parallel_matches: usize,
}

fn one() -> u32 {
    1
}

fn one_usize() -> usize {
    1
}

impl Default for ConfigFile {
    fn default() -> Self {
        ConfigFile {
            lmfa_config: CONFIG_VERSION,
            match_config: MatchConfig::default(),
            matches_per_pair: 1,
            parallel_matches: 1,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentsFile {
    pub lmfa_agents: u32,
    pub agents: Vec<AgentSpec>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn load_config(path: Option<&Path>) -> Result<ConfigFile, CliError> {
    let Some(path) = path else {
        return Ok(ConfigFile::default());
    };
    let config: ConfigFile =
        serde_json::from_str(&read(path)?).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if config.lmfa_config != CONFIG_VERSION {
        return Err(CliError::Config(format!(
            "{}: unsupported lmfa_config version {} (expected {CONFIG_VERSION})",
            path.display(),
            config.lmfa_config
        )));
    }
    if config.matches_per_pair == 0 {
        return Err(CliError::Config(format!("{}: matches_per_pair must be at least 1", path.display())));
    }
    config.match_config.validate().map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok(config)
}

/// Script paths in the file are taken relative to the file's directory.
pub fn load_agents(path: &Path) -> Result<Vec<AgentSpec>, CliError> {
    let file: AgentsFile =
        serde_json::from_str(&read(path)?).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if file.lmfa_agents != AGENTS_VERSION {
        return Err(CliError::Config(format!(
            "{}: unsupported lmfa_agents version {} (expected {AGENTS_VERSION})",
            path.display(),
            file.lmfa_agents
        )));
    }
    let base = path.parent().unwrap_or(Path::new("."));
    let agents: Vec<AgentSpec> = file.agents.into_iter().map(|a| a.with_base_dir(base)).collect();
    for agent in &agents {
        agent.validate().map_err(setup)?;
    }
    lmfa_core::gateway::validate_roster(&agents).map_err(setup)?;
    Ok(agents)
}

fn setup(e: GatewayError) -> CliError {
    CliError::Setup(e.to_string())
}

impl From<TournamentError> for CliError {
    fn from(e: TournamentError) -> Self {
        match e {
            TournamentError::Setup(_) | TournamentError::TooFewAgents(_) => CliError::Setup(e.to_string()),
            TournamentError::Config(_) | TournamentError::Engine(_) | TournamentError::Integrity(_) => {
                CliError::Config(e.to_string())
            }
        }
    }
}

fn is_ours(name: &str) -> bool {
    (name.starts_with("match_") && name.ends_with(".json"))
        || [
            reporting::TOURNAMENT_JSON,
            reporting::MATRIX_CSV,
            reporting::WIN_RATES_CSV,
            reporting::HEATMAP_CSV,
            reporting::HEATMAP_NORM_CSV,
            reporting::MATRIX_DAT,
            reporting::WIN_RATES_DAT,
            reporting::HEATMAP_DAT,
        ]
        .contains(&name)
}

/// Creates `dir` or checks that it is empty. With `force`, earlier logs and
/// reports in it are removed so the tree reflects only this run; other
/// files are left alone.
pub fn prepare_out_dir(dir: &Path, force: bool) -> Result<(), CliError> {
    if !dir.exists() {
        return fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e));
    }
    if !dir.is_dir() {
        return Err(CliError::Config(format!("{} is not a directory", dir.display())));
    }
    let entries: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::io(dir, e))?;
    if entries.is_empty() {
        return Ok(());
    }
    if !force {
        return Err(CliError::Config(format!("output directory {} is not empty (use --force)", dir.display())));
    }
    for path in entries {
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
        if path.is_file() && is_ours(name) {
            fs::remove_file(&path).map_err(|e| CliError::io(&path, e))?;
        }
    }
    Ok(())
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Match log files in `dir`, sorted by name.
pub fn log_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    if !dir.is_dir() {
        return Err(CliError::Config(format!("{} is not a directory", dir.display())));
    }
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or_default();
            p.is_file() && name.starts_with("match_") && name.ends_with(".json")
        })
        .collect();
    files.sort();
    Ok(files)
}
