//! Pulling a command out of a free-form agent reply.

use super::{parse, Command};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExtractError {
    #[error("no command found in reply: {0:?}")]
    NoCommandFound(String),
}

const EXCERPT_CHARS: usize = 80;
const WRAPPERS: &[char] = &['`', '"', '\'', '*', '_'];

fn clean(fragment: &str) -> String {
    let mut s = fragment.trim();
    for prefix in ["- ", "> ", "• "] {
        if let Some(rest) = s.strip_prefix(prefix) {
            s = rest;
        }
    }
    let s: String = s.chars().filter(|c| !WRAPPERS.contains(c)).collect();
    s.trim().trim_end_matches(['.', '!', '?', ';', ':']).trim().to_string()
}

/// Segments enclosed in backticks or double quotes, last first.
fn quoted(line: &str) -> Vec<&str> {
    let mut out = Vec::new();
    for delim in ['`', '"'] {
        let parts: Vec<&str> = line.split(delim).collect();
        if parts.len() >= 3 {
            out.extend(parts.iter().skip(1).step_by(2).take((parts.len() - 1) / 2).copied());
        }
    }
    out.reverse();
    out
}

fn candidates(line: &str) -> Vec<String> {
    let mut out = vec![clean(line)];
    for q in quoted(line) {
        out.push(clean(q));
    }
    let last_fragment = line
        .split(['.', '!', '?', ':'])
        .map(str::trim).rfind(|s| !s.is_empty())
        .unwrap_or("");
    out.push(clean(last_fragment));
    out
}

/// Scans the reply's lines from last to first and returns the first
/// candidate that parses. Per line the candidates are the whole line, then
/// quoted segments (last first), then the final sentence fragment.
pub fn extract_command(agent_reply: &str) -> Result<Command, ExtractError> {
    for line in agent_reply.lines().rev().filter(|l| !l.trim().is_empty()) {
        for candidate in candidates(line) {
            if candidate.is_empty() {
                continue;
            }
            if let Ok(cmd) = parse(&candidate) {
                return Ok(cmd);
            }
        }
    }
    let excerpt: String = agent_reply.chars().take(EXCERPT_CHARS).collect();
    Err(ExtractError::NoCommandFound(excerpt))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn takes_the_last_fragment() {
        let cmd = extract_command("I will advance and strike. Left + A").unwrap();
        assert_eq!(cmd.normalized, "Left + A");
    }

    #[test]
    fn strips_backticks() {
        let cmd = extract_command("`Down, Forward, A`").unwrap();
        assert_eq!(cmd.normalized, "Down, Forward, A");
        assert_eq!(cmd.steps.len(), 3);
    }

    #[test]
    fn prose_only_is_an_error() {
        let err = extract_command("I am not sure what to do here.\nMaybe wait and see").unwrap_err();
        assert!(matches!(err, ExtractError::NoCommandFound(_)));
    }

    #[test]
    fn later_lines_win() {
        let reply = "First thought: A\nThe opponent is far away.\nAction: Forward, Forward, C.";
        assert_eq!(extract_command(reply).unwrap().normalized, "Forward, Forward, C");
    }

    #[test]
    fn quoted_command_inside_prose() {
        let reply = "I'll go with \"Down + B\" to poke low";
        assert_eq!(extract_command(reply).unwrap().normalized, "Down + B");
    }

    #[test]
    fn markdown_bold_and_bullets() {
        assert_eq!(extract_command("- **Block**").unwrap().normalized, "C");
    }

    #[test]
    fn empty_reply() {
        assert_eq!(extract_command(""), Err(ExtractError::NoCommandFound(String::new())));
    }
}
