//! Proof scripts.
//!
//! ```text
//! # comment
//! name: how_implies_know_strat      (optional)
//! metavars: p                       (optional; variables a lemma citation may substitute)
//! premises:                         (optional; hypothesis mode)
//! - p
//! - p -> q
//! 1. p [premise 1]
//! 2. p -> q [premise 2]
//! 3. q [mp 1 2]
//! ```
//!
//! Justifications: `axiom NAME`, `taut`, `premise K`, `lemma NAME`, `mp I J`
//! (line J is `line I -> this`), `nec-k {C} I`, `nec-h {C} I`, and the
//! derived rule `nec-s {C} I`.

use std::fmt;

use super::axioms::AxiomName;
use crate::error::ParseError;
use crate::formula::{parse_formula, Formula};
use crate::model::{is_identifier, Coalition};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Axiom(AxiomName),
    Taut,
    Premise(usize),
    Lemma(String),
    Mp(usize, usize),
    NecK(Coalition, usize),
    NecH(Coalition, usize),
    /// Admissible strategic necessitation, expanded before checking.
    NecS(Coalition, usize),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom(a) => write!(f, "axiom {a}"),
            Justification::Taut => f.write_str("taut"),
            Justification::Premise(k) => write!(f, "premise {k}"),
            Justification::Lemma(n) => write!(f, "lemma {n}"),
            Justification::Mp(i, j) => write!(f, "mp {i} {j}"),
            Justification::NecK(c, i) => write!(f, "nec-k {c} {i}"),
            Justification::NecH(c, i) => write!(f, "nec-h {c} {i}"),
            Justification::NecS(c, i) => write!(f, "nec-s {c} {i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofLine {
    pub number: usize,
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Proof {
    pub name: Option<String>,
    pub metavars: Vec<String>,
    pub premises: Vec<Formula>,
    pub lines: Vec<ProofLine>,
}

impl Proof {
    /// The formula on the last line.
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = &self.name {
            writeln!(f, "name: {n}")?;
        }
        if !self.metavars.is_empty() {
            writeln!(f, "metavars: {}", self.metavars.join(" "))?;
        }
        if !self.premises.is_empty() {
            writeln!(f, "premises:")?;
            for p in &self.premises {
                writeln!(f, "- {p}")?;
            }
        }
        for l in &self.lines {
            writeln!(f, "{}. {} [{}]", l.number, l.formula, l.justification)?;
        }
        Ok(())
    }
}

fn number(s: &str, line: usize) -> Result<usize, ParseError> {
    s.parse::<usize>()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| ParseError::at_line(line, format!("expected a positive line number, found `{s}`")))
}

fn parse_justification(text: &str, line: usize) -> Result<Justification, ParseError> {
    let text = text.trim();
    let (head, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let rest = rest.trim();
    let words: Vec<&str> = rest.split_whitespace().collect();
    let bad = |what: &str| ParseError::at_line(line, format!("malformed justification `{text}`: {what}"));
    let j = match head {
        "taut" if words.is_empty() => Justification::Taut,
        "axiom" if words.len() == 1 => Justification::Axiom(
            words[0]
                .parse()
                .map_err(|e: super::axioms::UnknownSchema| ParseError::at_line(line, e.to_string()))?,
        ),
        "premise" if words.len() == 1 => Justification::Premise(number(words[0], line)?),
        "lemma" if words.len() == 1 && is_identifier(words[0]) => {
            Justification::Lemma(words[0].to_string())
        }
        "mp" if words.len() == 2 => Justification::Mp(number(words[0], line)?, number(words[1], line)?),
        "nec-k" | "nec-h" | "nec-s" => {
            let body = rest.strip_prefix('{').ok_or_else(|| bad("expected `{` coalition"))?;
            let (agents, tail) = body.split_once('}').ok_or_else(|| bad("expected `}`"))?;
            let agents: Vec<&str> = agents
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|a| !a.is_empty())
                .collect();
            if let Some(a) = agents.iter().find(|a| !is_identifier(a)) {
                return Err(bad(&format!("invalid agent `{a}`")));
            }
            let c = Coalition::new(agents);
            let i = number(tail.trim(), line)?;
            match head {
                "nec-k" => Justification::NecK(c, i),
                "nec-h" => Justification::NecH(c, i),
                _ => Justification::NecS(c, i),
            }
        }
        _ => return Err(bad("unknown rule or wrong number of arguments")),
    };
    Ok(j)
}

/// Parses a proof script. Lines must be numbered 1, 2, 3, ... in order.
pub fn parse_proof(text: &str) -> Result<Proof, ParseError> {
    let mut proof = Proof::default();
    let mut in_premises = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix("name:") {
            let name = rest.trim();
            if !is_identifier(name) {
                return Err(ParseError::at_line(line, format!("invalid proof name `{name}`")));
            }
            proof.name = Some(name.to_string());
            in_premises = false;
        } else if let Some(rest) = body.strip_prefix("metavars:") {
            for v in rest.split_whitespace() {
                if !is_identifier(v) {
                    return Err(ParseError::at_line(line, format!("invalid metavariable `{v}`")));
                }
                proof.metavars.push(v.to_string());
            }
            in_premises = false;
        } else if body == "premises:" {
            if !proof.lines.is_empty() {
                return Err(ParseError::at_line(line, "premises must precede the proof lines"));
            }
            in_premises = true;
        } else if let Some(rest) = body.strip_prefix('-').filter(|_| in_premises) {
            proof.premises.push(parse_formula(rest).map_err(|e| e.on_line(line))?);
        } else {
            in_premises = false;
            let (num, rest) = body
                .split_once('.')
                .ok_or_else(|| ParseError::at_line(line, "expected `N. FORMULA [JUSTIFICATION]`"))?;
            let n = number(num.trim(), line)?;
            if n != proof.lines.len() + 1 {
                return Err(ParseError::at_line(
                    line,
                    format!("expected line number {}, found {n}", proof.lines.len() + 1),
                ));
            }
            let open = rest
                .rfind('[')
                .ok_or_else(|| ParseError::at_line(line, "missing `[justification]`"))?;
            let just = rest[open + 1..]
                .trim_end()
                .strip_suffix(']')
                .ok_or_else(|| ParseError::at_line(line, "expected `]` at the end of the line"))?;
            let formula = parse_formula(&rest[..open]).map_err(|e| e.on_line(line))?;
            let justification = parse_justification(just, line)?;
            proof.lines.push(ProofLine { number: n, formula, justification });
        }
    }
    Ok(proof)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HYP: &str = "\
name: modus
metavars: p q
premises:
- p
- p -> q
1. p [premise 1]
2. p -> q [premise 2]
3. q [mp 1 2]
";

    #[test]
    fn parses_hypothesis_script() {
        let p = parse_proof(HYP).unwrap();
        assert_eq!(p.name.as_deref(), Some("modus"));
        assert_eq!(p.metavars, ["p", "q"]);
        assert_eq!(p.premises.len(), 2);
        assert_eq!(p.lines[2].justification, Justification::Mp(1, 2));
        assert_eq!(p.conclusion(), Some(&Formula::var("q")));
    }

    #[test]
    fn display_round_trips() {
        let p = parse_proof(HYP).unwrap();
        assert_eq!(parse_proof(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn justifications() {
        assert_eq!(
            parse_justification("nec-k {b,a} 3", 1).unwrap(),
            Justification::NecK(Coalition::new(["a", "b"]), 3)
        );
        assert_eq!(
            parse_justification("nec-s {} 1", 1).unwrap(),
            Justification::NecS(Coalition::empty(), 1)
        );
        assert_eq!(
            parse_justification("axiom strategic-truth", 1).unwrap(),
            Justification::Axiom(AxiomName::StrategicTruth)
        );
        for bad in ["axiom nope", "mp 1", "mp 0 1", "taut 3", "nec-k a 1", "nec-h {a} x", "rule 1"] {
            assert!(parse_justification(bad, 1).is_err(), "{bad}");
        }
    }

    #[test]
    fn numbering_must_be_consecutive() {
        let e = parse_proof("1. p -> p [taut]\n3. p -> p [taut]\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        assert!(parse_proof("1. p -> p\n").is_err());
        assert!(parse_proof("1. p -> [taut]\n").is_err());
    }
}
