//! Line-by-line proof checking and the lemma registry.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use thiserror::Error;

use super::axioms::AxiomName;
use super::script::{parse_proof, Justification, Proof, ProofLine};
use super::taut::is_tautology;
use crate::error::ParseError;
use crate::formula::{lower_derived, Formula};
use crate::corpus;

/// Why a line was not accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    EmptyProof,
    /// A cited line is not strictly before the current one.
    DanglingReference(usize),
    NotAnAxiomInstance(AxiomName),
    NotATautology,
    TooManyAtoms(usize),
    NoSuchPremise(usize),
    PremiseMismatch(usize),
    UnknownLemma(String),
    NotALemmaInstance(String),
    ModusPonensShape { minor: usize, major: usize },
    NecessitationShape(usize),
    /// Necessitation applied to a line that depends on premises.
    NecessitationOnHypothesis(usize),
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::EmptyProof => f.write_str("proof has no lines"),
            Rejection::DanglingReference(i) => {
                write!(f, "reference to line {i}, which does not precede this line")
            }
            Rejection::NotAnAxiomInstance(a) => write!(f, "not an instance of axiom {a}"),
            Rejection::NotATautology => f.write_str("not a propositional tautology"),
            Rejection::TooManyAtoms(n) => write!(f, "tautology check refused: {n} atoms"),
            Rejection::NoSuchPremise(k) => write!(f, "there is no premise {k}"),
            Rejection::PremiseMismatch(k) => write!(f, "formula differs from premise {k}"),
            Rejection::UnknownLemma(n) => write!(f, "unknown lemma `{n}`"),
            Rejection::NotALemmaInstance(n) => write!(f, "not an instance of lemma `{n}`"),
            Rejection::ModusPonensShape { minor, major } => {
                write!(f, "line {major} is not `line {minor} -> this line`")
            }
            Rejection::NecessitationShape(i) => {
                write!(f, "formula is not the stated modality applied to line {i}")
            }
            Rejection::NecessitationOnHypothesis(i) => {
                write!(f, "necessitation over line {i}, which depends on premises")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted { conclusion: Formula },
    Rejected { line: usize, reason: Rejection },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accepted { conclusion } => write!(f, "accepted: {conclusion}"),
            Verdict::Rejected { line: 0, reason } => write!(f, "rejected: {reason}"),
            Verdict::Rejected { line, reason } => write!(f, "rejected at line {line}: {reason}"),
        }
    }
}

/// A previously accepted, premise-free proof that later scripts may cite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma {
    pub conclusion: Formula,
    pub metavars: Vec<String>,
}

impl Lemma {
    /// Matches `f` against the conclusion, substituting declared metavariables.
    pub fn instance_bindings(&self, f: &Formula) -> Option<HashMap<String, Formula>> {
        let mut bindings = HashMap::new();
        instance_of(&self.conclusion, &lower_derived(f), &self.metavars, &mut bindings)
            .then_some(bindings)
    }
}

fn instance_of(
    pattern: &Formula,
    f: &Formula,
    metavars: &[String],
    bindings: &mut HashMap<String, Formula>,
) -> bool {
    match (pattern, f) {
        (Formula::Var(v), _) if metavars.contains(v) => match bindings.get(v) {
            Some(bound) => bound == f,
            None => {
                bindings.insert(v.clone(), f.clone());
                true
            }
        },
        (Formula::Not(a), Formula::Not(b)) => instance_of(a, b, metavars, bindings),
        (Formula::Implies(a1, a2), Formula::Implies(b1, b2))
        | (Formula::And(a1, a2), Formula::And(b1, b2))
        | (Formula::Or(a1, a2), Formula::Or(b1, b2)) => {
            instance_of(a1, b1, metavars, bindings) && instance_of(a2, b2, metavars, bindings)
        }
        (Formula::Modal(m1, c1, a), Formula::Modal(m2, c2, b)) => {
            m1 == m2 && c1 == c2 && instance_of(a, b, metavars, bindings)
        }
        _ => pattern == f,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaRegistry {
    lemmas: BTreeMap<String, Lemma>,
}

#[derive(Debug, Error)]
pub enum ProofError {
    #[error("{name}: {source}")]
    Parse { name: String, source: ParseError },
    #[error("{name}: {verdict}")]
    Rejected { name: String, verdict: Verdict },
    #[error("{name}: a lemma must not have premises")]
    LemmaWithPremises { name: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl LemmaRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&Lemma> {
        self.lemmas.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.lemmas.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.lemmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lemmas.is_empty()
    }

    /// Checks `proof` against the current registry and, if accepted, adds it as `name`.
    pub fn admit(&mut self, name: &str, proof: &Proof) -> Result<(), ProofError> {
        if !proof.premises.is_empty() {
            return Err(ProofError::LemmaWithPremises { name: name.to_string() });
        }
        match check_proof(proof, self) {
            Verdict::Accepted { conclusion } => {
                self.lemmas.insert(
                    name.to_string(),
                    Lemma { conclusion: lower_derived(&conclusion), metavars: proof.metavars.clone() },
                );
                Ok(())
            }
            verdict => Err(ProofError::Rejected { name: name.to_string(), verdict }),
        }
    }

    /// Builds a registry from `(name, script)` pairs, checking each in order.
    pub fn from_scripts<'a, I>(scripts: I) -> Result<Self, ProofError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut reg = Self::new();
        for (name, text) in scripts {
            let proof = parse_proof(text)
                .map_err(|source| ProofError::Parse { name: name.to_string(), source })?;
            reg.admit(name, &proof)?;
        }
        Ok(reg)
    }

    /// Loads a registry file (`name = path` lines, paths relative to the file).
    pub fn load(path: &Path) -> Result<Self, ProofError> {
        Self::load_with(path, &|p| std::fs::read_to_string(p))
    }

    /// As [`LemmaRegistry::load`], reading files through `read`.
    pub fn load_with(
        path: &Path,
        read: &dyn Fn(&Path) -> std::io::Result<String>,
    ) -> Result<Self, ProofError> {
        let io = |p: &Path| {
            let shown = p.display().to_string();
            move |source| ProofError::Io { path: shown, source }
        };
        let text = read(path).map_err(io(path))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let entries = parse_registry(&text).map_err(|source| ProofError::Parse {
            name: path.display().to_string(),
            source,
        })?;
        let mut scripts = Vec::new();
        for (name, rel) in entries {
            let p = base.join(&rel);
            scripts.push((name, read(&p).map_err(io(&p))?));
        }
        Self::from_scripts(scripts.iter().map(|(n, t)| (n.as_str(), t.as_str())))
    }
}

/// Parses `name = path` lines; `#` comments.
pub fn parse_registry(text: &str) -> Result<Vec<(String, String)>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (name, path) = body
            .split_once('=')
            .ok_or_else(|| ParseError::at_line(i + 1, "expected `NAME = PATH`"))?;
        let (name, path) = (name.trim(), path.trim());
        if !crate::model::is_identifier(name) || path.is_empty() {
            return Err(ParseError::at_line(i + 1, "expected `NAME = PATH`"));
        }
        out.push((name.to_string(), path.to_string()));
    }
    Ok(out)
}

/// Replaces every `nec-s {C} i` line by `nec-h {C} i`, a strategic-truth
/// axiom line and a modus ponens line. Returns the expanded proof and, for
/// each expanded line, the number of the original line it came from.
pub fn expand_macros(proof: &Proof) -> (Proof, Vec<usize>) {
    let mut renumber = vec![0usize; proof.lines.len() + 1];
    let mut lines: Vec<ProofLine> = Vec::new();
    let mut origin = Vec::new();
    let map = |renumber: &[usize], i: usize, current: usize| {
        if i >= 1 && i < current {
            renumber[i]
        } else {
            // keep invalid references invalid
            usize::MAX
        }
    };
    for line in &proof.lines {
        let n = line.number;
        let push = |lines: &mut Vec<ProofLine>, origin: &mut Vec<usize>, formula, justification| {
            lines.push(ProofLine { number: lines.len() + 1, formula, justification });
            origin.push(n);
            lines.len()
        };
        let j = match &line.justification {
            Justification::Mp(i, k) => {
                Justification::Mp(map(&renumber, *i, n), map(&renumber, *k, n))
            }
            Justification::NecK(c, i) => Justification::NecK(c.clone(), map(&renumber, *i, n)),
            Justification::NecH(c, i) => Justification::NecH(c.clone(), map(&renumber, *i, n)),
            Justification::NecS(c, i) if *i >= 1 && *i < n => {
                let cited = proof.lines[*i - 1].formula.clone();
                let how = Formula::how(c.clone(), cited.clone());
                let strat = Formula::strat(c.clone(), cited);
                let a = push(
                    &mut lines,
                    &mut origin,
                    how.clone(),
                    Justification::NecH(c.clone(), renumber[*i]),
                );
                let b = push(
                    &mut lines,
                    &mut origin,
                    Formula::implies(how, strat),
                    Justification::Axiom(AxiomName::StrategicTruth),
                );
                Justification::Mp(a, b)
            }
            Justification::NecS(c, _) => Justification::NecS(c.clone(), usize::MAX),
            other => other.clone(),
        };
        renumber[n] = push(&mut lines, &mut origin, line.formula.clone(), j);
    }
    let expanded = Proof {
        name: proof.name.clone(),
        metavars: proof.metavars.clone(),
        premises: proof.premises.clone(),
        lines,
    };
    (expanded, origin)
}

/// Checks every line of `proof`. Derived connectives are lowered before
/// comparison, so `p & q` and `!(p -> !q)` are interchangeable.
pub fn check_proof(proof: &Proof, lemmas: &LemmaRegistry) -> Verdict {
    if proof.lines.is_empty() {
        return Verdict::Rejected { line: 0, reason: Rejection::EmptyProof };
    }
    let (expanded, origin) = expand_macros(proof);
    let premises: Vec<Formula> = proof.premises.iter().map(lower_derived).collect();
    let mut formulas: Vec<Formula> = Vec::with_capacity(expanded.lines.len());
    let mut depends: Vec<bool> = Vec::with_capacity(expanded.lines.len());

    for (idx, line) in expanded.lines.iter().enumerate() {
        let current = lower_derived(&line.formula);
        let cited = |i: usize| -> Result<usize, Rejection> {
            if i >= 1 && i <= idx {
                Ok(i - 1)
            } else {
                Err(Rejection::DanglingReference(i))
            }
        };
        let outcome: Result<bool, Rejection> = (|| match &line.justification {
            Justification::Axiom(a) => {
                if a.schema().matches(&current).is_some() {
                    Ok(false)
                } else {
                    Err(Rejection::NotAnAxiomInstance(*a))
                }
            }
            Justification::Taut => match is_tautology(&current) {
                Ok(true) => Ok(false),
                Ok(false) => Err(Rejection::NotATautology),
                Err(e) => Err(Rejection::TooManyAtoms(e.0)),
            },
            Justification::Premise(k) => {
                let p = premises.get(k.wrapping_sub(1)).ok_or(Rejection::NoSuchPremise(*k))?;
                if *p == current {
                    Ok(true)
                } else {
                    Err(Rejection::PremiseMismatch(*k))
                }
            }
            Justification::Lemma(name) => {
                let lemma = lemmas.get(name).ok_or_else(|| Rejection::UnknownLemma(name.clone()))?;
                if lemma.instance_bindings(&current).is_some() {
                    Ok(false)
                } else {
                    Err(Rejection::NotALemmaInstance(name.clone()))
                }
            }
            Justification::Mp(i, j) => {
                let (a, b) = (cited(*i)?, cited(*j)?);
                let expected = Formula::implies(formulas[a].clone(), current.clone());
                if formulas[b] == expected {
                    Ok(depends[a] || depends[b])
                } else {
                    Err(Rejection::ModusPonensShape { minor: *i, major: *j })
                }
            }
            Justification::NecK(c, i) | Justification::NecH(c, i) => {
                let a = cited(*i)?;
                let wrapped = match &line.justification {
                    Justification::NecK(..) => Formula::know(c.clone(), formulas[a].clone()),
                    _ => Formula::how(c.clone(), formulas[a].clone()),
                };
                if wrapped != current {
                    Err(Rejection::NecessitationShape(*i))
                } else if depends[a] {
                    Err(Rejection::NecessitationOnHypothesis(*i))
                } else {
                    Ok(false)
                }
            }
            Justification::NecS(_, i) => Err(Rejection::DanglingReference(*i)),
        })();

        match outcome {
            Ok(dep) => {
                formulas.push(current);
                depends.push(dep);
            }
            Err(reason) => {
                // Report references in the original numbering.
                let reason = match reason {
                    Rejection::DanglingReference(_) | Rejection::NecessitationShape(_) => {
                        original_reference(proof, origin[idx], reason)
                    }
                    Rejection::ModusPonensShape { .. } | Rejection::NecessitationOnHypothesis(_) => {
                        original_reference(proof, origin[idx], reason)
                    }
                    other => other,
                };
                return Verdict::Rejected { line: origin[idx], reason };
            }
        }
    }
    Verdict::Accepted { conclusion: proof.lines.last().map(|l| l.formula.clone()).unwrap_or(Formula::False) }
}

// Re-expresses a rejection of an expanded line with the line numbers the
// author wrote.
fn original_reference(proof: &Proof, line: usize, reason: Rejection) -> Rejection {
    let j = &proof.lines[line - 1].justification;
    match (reason, j) {
        (Rejection::ModusPonensShape { .. }, Justification::Mp(i, k)) => {
            Rejection::ModusPonensShape { minor: *i, major: *k }
        }
        (
            Rejection::DanglingReference(_),
            Justification::Mp(i, k),
        ) => Rejection::DanglingReference(if *i >= 1 && *i < line { *k } else { *i }),
        (
            r @ (Rejection::DanglingReference(_)
            | Rejection::NecessitationShape(_)
            | Rejection::NecessitationOnHypothesis(_)),
            Justification::NecK(_, i) | Justification::NecH(_, i) | Justification::NecS(_, i),
        ) => match r {
            Rejection::DanglingReference(_) => Rejection::DanglingReference(*i),
            Rejection::NecessitationShape(_) => Rejection::NecessitationShape(*i),
            _ => Rejection::NecessitationOnHypothesis(*i),
        },
        // A nec-s expansion failed on its internal modus ponens: the stated
        // formula is not S{C} of the cited line.
        (Rejection::ModusPonensShape { .. }, Justification::NecS(_, i)) => {
            Rejection::NecessitationShape(*i)
        }
        (r, _) => r,
    }
}

/// The bundled derivations in dependency order, as `(name, script)`.
pub fn bundled_derivations() -> Vec<(String, &'static str)> {
    let registry = corpus::file(corpus::REGISTRY).expect("bundled registry");
    parse_registry(registry)
        .expect("bundled registry parses")
        .into_iter()
        .map(|(name, path)| {
            let text = corpus::file(&format!("proofs/{path}")).expect("bundled proof script");
            (name, text)
        })
        .collect()
}

/// Registry of all bundled derivations.
pub fn bundled_registry() -> Result<LemmaRegistry, ProofError> {
    let scripts = bundled_derivations();
    LemmaRegistry::from_scripts(scripts.iter().map(|(n, t)| (n.as_str(), *t)))
}
