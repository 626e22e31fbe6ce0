//! Line-oriented system file format.
//!
//! ```text
//! agents: a b
//! votes: L R
//! states: u v w
//! prop p: w
//! indist a: {u v} {w}
//! trans u [a=L b=*] -> w
//! ```
//!
//! `#` starts a comment. Directives may appear in any order; identifiers are
//! resolved after `agents:`, `votes:` and `states:` have been read.

use std::fmt::Write as _;

use super::{
    AgentId, EpistemicTransitionSystem, ModelError, Registry, StateId, SystemBuilder, Vote,
};
use crate::error::ParseError;

struct Line<'a> {
    number: usize,
    text: &'a str,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::at_line(line, message)
}

fn model_err(line: usize, e: ModelError) -> ParseError {
    err(line, e.to_string())
}

/// Parses a system file. Unknown identifiers are rejected with their line.
pub fn parse_system(text: &str) -> Result<EpistemicTransitionSystem, ParseError> {
    let lines: Vec<Line<'_>> = text
        .lines()
        .enumerate()
        .map(|(i, l)| Line {
            number: i + 1,
            text: l.split('#').next().unwrap_or("").trim(),
        })
        .filter(|l| !l.text.is_empty())
        .collect();

    let mut agents = None;
    let mut votes = None;
    let mut states = None;
    for line in &lines {
        let (slot, kind, rest) = if let Some(rest) = line.text.strip_prefix("agents:") {
            (&mut agents, "agent", rest)
        } else if let Some(rest) = line.text.strip_prefix("votes:") {
            (&mut votes, "vote", rest)
        } else if let Some(rest) = line.text.strip_prefix("states:") {
            (&mut states, "state", rest)
        } else {
            continue;
        };
        if slot.is_some() {
            return Err(err(line.number, format!("`{kind}s:` declared twice")));
        }
        let registry = Registry::new(kind, rest.split_whitespace())
            .map_err(|e| model_err(line.number, e))?;
        *slot = Some(registry);
    }
    let agents = agents.ok_or_else(|| err(0, "missing `agents:` declaration"))?;
    let votes = votes.ok_or_else(|| err(0, "missing `votes:` declaration"))?;
    let states = states.ok_or_else(|| err(0, "missing `states:` declaration"))?;
    let mut builder = SystemBuilder::new(agents, votes, states).map_err(|e| model_err(0, e))?;

    for line in &lines {
        let t = line.text;
        if t.starts_with("agents:") || t.starts_with("votes:") || t.starts_with("states:") {
            continue;
        }
        if let Some(rest) = t.strip_prefix("prop ") {
            parse_prop(&mut builder, line.number, rest)?;
        } else if let Some(rest) = t.strip_prefix("indist ") {
            parse_indist(&mut builder, line.number, rest)?;
        } else if let Some(rest) = t.strip_prefix("trans ") {
            parse_trans(&mut builder, line.number, rest)?;
        } else {
            let word = t.split_whitespace().next().unwrap_or(t);
            return Err(err(line.number, format!("unknown directive `{word}`")));
        }
    }
    Ok(builder.build())
}

fn split_header(line: usize, rest: &str, what: &str) -> Result<(String, String), ParseError> {
    let (name, body) = rest
        .split_once(':')
        .ok_or_else(|| err(line, format!("expected `{what} NAME: ...`")))?;
    Ok((name.trim().to_string(), body.trim().to_string()))
}

fn state(b: &SystemBuilder, line: usize, name: &str) -> Result<StateId, ParseError> {
    b.state(name)
        .ok_or_else(|| model_err(line, ModelError::UnknownState(name.to_string())))
}

fn agent(b: &SystemBuilder, line: usize, name: &str) -> Result<AgentId, ParseError> {
    b.agent(name)
        .ok_or_else(|| model_err(line, ModelError::UnknownAgent(name.to_string())))
}

fn vote(b: &SystemBuilder, line: usize, name: &str) -> Result<Vote, ParseError> {
    b.vote(name)
        .ok_or_else(|| model_err(line, ModelError::UnknownVote(name.to_string())))
}

fn parse_prop(b: &mut SystemBuilder, line: usize, rest: &str) -> Result<(), ParseError> {
    let (name, body) = split_header(line, rest, "prop")?;
    if !super::is_identifier(&name) || name == "true" || name == "false" {
        return Err(err(line, format!("invalid proposition name `{name}`")));
    }
    let members = body
        .split_whitespace()
        .map(|s| state(b, line, s))
        .collect::<Result<Vec<_>, _>>()?;
    b.prop(name, members);
    Ok(())
}

fn parse_indist(b: &mut SystemBuilder, line: usize, rest: &str) -> Result<(), ParseError> {
    let (name, body) = split_header(line, rest, "indist")?;
    let a = agent(b, line, &name)?;
    let mut body = body.as_str();
    loop {
        body = body.trim_start();
        if body.is_empty() {
            break;
        }
        let inner = body
            .strip_prefix('{')
            .ok_or_else(|| err(line, "expected `{` to open an indistinguishability class"))?;
        let (class, tail) = inner
            .split_once('}')
            .ok_or_else(|| err(line, "unterminated class, expected `}`"))?;
        let class = class
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| state(b, line, s))
            .collect::<Result<Vec<_>, _>>()?;
        b.indist_class(a, class);
        body = tail;
    }
    Ok(())
}

fn parse_trans(b: &mut SystemBuilder, line: usize, rest: &str) -> Result<(), ParseError> {
    let (lhs, rhs) = rest
        .split_once("->")
        .ok_or_else(|| err(line, "expected `trans STATE [PATTERN] -> STATE...`"))?;
    let (source, pattern) = lhs
        .split_once('[')
        .ok_or_else(|| err(line, "expected `[` before the vote pattern"))?;
    let source = state(b, line, source.trim())?;
    let pattern = pattern
        .trim_end()
        .strip_suffix(']')
        .ok_or_else(|| err(line, "expected `]` after the vote pattern"))?;

    let mut slots: Vec<Option<Vote>> = vec![None; b.agent_count()];
    let mut assigned = vec![false; b.agent_count()];
    for item in pattern.split_whitespace() {
        let (a, v) = item
            .split_once('=')
            .ok_or_else(|| err(line, format!("expected `AGENT=VOTE`, found `{item}`")))?;
        let a = agent(b, line, a)?;
        if std::mem::replace(&mut assigned[a.index()], true) {
            return Err(err(line, format!("agent `{}` appears twice in the pattern", item)));
        }
        slots[a.index()] = if v == "*" { None } else { Some(vote(b, line, v)?) };
    }

    let targets = rhs
        .split_whitespace()
        .map(|s| state(b, line, s))
        .collect::<Result<Vec<_>, _>>()?;
    if targets.is_empty() {
        return Err(err(line, "transition has no target state"));
    }
    for t in targets {
        b.transition(source, &slots, t);
    }
    Ok(())
}

/// Writes a system in the file format, one `trans` line per full profile and
/// target. Parsing the result yields an equal system.
pub fn write_system(sys: &EpistemicTransitionSystem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "agents: {}", sys.agents().names().join(" "));
    let _ = writeln!(out, "votes: {}", sys.votes().names().join(" "));
    let _ = writeln!(out, "states: {}", sys.states().names().join(" "));
    for (p, set) in sys.propositions() {
        let members: Vec<&str> = set.ones().map(|i| sys.states().name(i)).collect();
        let _ = writeln!(out, "prop {p}: {}", members.join(" "));
    }
    for a in sys.agent_ids() {
        let classes = sys.declared_classes(a);
        if classes.is_empty() {
            continue;
        }
        let _ = write!(out, "indist {}:", sys.agent_name(a));
        for class in classes {
            let names: Vec<&str> = class.iter().map(|&s| sys.state_name(s)).collect();
            let _ = write!(out, " {{{}}}", names.join(" "));
        }
        out.push('\n');
    }
    for (w, i, u) in sys.mechanism() {
        let profile = sys.full_profile(i);
        let pattern = if profile.is_empty() {
            String::new()
        } else {
            profile.display(sys).to_string()
        };
        let _ = writeln!(
            out,
            "trans {} [{pattern}] -> {}",
            sys.state_name(w),
            sys.state_name(u)
        );
    }
    out
}
