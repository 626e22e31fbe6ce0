//! Satisfaction of formulas at states of an epistemic transition system.
//!
//! Two evaluators implement the same clauses along different routes:
//!
//! * [`Evaluator`] compiles the formula into a hash-consed DAG and evaluates
//!   state by state on demand, memoizing each `(node, state)` verdict. Modal
//!   clauses walk mechanism rows directly.
//! * [`NaiveEvaluator`] recomputes the extension of every subformula over all
//!   states, without caching, and decides `S`/`H` by outcome-set inclusion.
//!
//! Variables missing from the valuation are false everywhere.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::error::ParseError;
use crate::formula::{parse_formula, Formula, Modality};
use crate::model::{AgentId, EpistemicTransitionSystem, ModelError, StateId, StateSet, StrategyProfile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("witness search needs an S or H formula at the top, found `{0}`")]
    NotStrategic(String),
}

/// A satisfaction relation that can report the set of states where a formula holds.
pub trait Semantics {
    fn extension(&mut self, f: &Formula) -> Result<StateSet, EvalError>;

    fn eval(&mut self, w: StateId, f: &Formula) -> Result<bool, EvalError> {
        Ok(self.extension(f)?.contains(w.index()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    Var(String),
    True,
    False,
    Not(usize),
    Implies(usize, usize),
    And(usize, usize),
    Or(usize, usize),
    Modal(Modality, Vec<AgentId>, usize),
}

type ProfileTable = Rc<Vec<(StrategyProfile, Vec<usize>)>>;

/// Memoizing evaluator. One instance serves one query (any number of
/// formulas over one system); it is not shared between threads.
pub struct Evaluator<'s> {
    sys: &'s EpistemicTransitionSystem,
    nodes: Vec<Node>,
    ids: HashMap<Node, usize>,
    memo: Vec<Vec<Option<bool>>>,
    profiles: HashMap<Vec<AgentId>, ProfileTable>,
}

impl<'s> Evaluator<'s> {
    pub fn new(sys: &'s EpistemicTransitionSystem) -> Self {
        Self {
            sys,
            nodes: Vec::new(),
            ids: HashMap::new(),
            memo: Vec::new(),
            profiles: HashMap::new(),
        }
    }

    pub fn system(&self) -> &'s EpistemicTransitionSystem {
        self.sys
    }

    fn intern(&mut self, node: Node) -> usize {
        if let Some(&id) = self.ids.get(&node) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(node.clone());
        self.ids.insert(node, id);
        self.memo.push(vec![None; self.sys.state_count()]);
        id
    }

    fn compile(&mut self, f: &Formula) -> Result<usize, EvalError> {
        let node = match f {
            Formula::Var(p) => Node::Var(p.clone()),
            Formula::True => Node::True,
            Formula::False => Node::False,
            Formula::Not(a) => Node::Not(self.compile(a)?),
            Formula::Implies(a, b) => Node::Implies(self.compile(a)?, self.compile(b)?),
            Formula::And(a, b) => Node::And(self.compile(a)?, self.compile(b)?),
            Formula::Or(a, b) => Node::Or(self.compile(a)?, self.compile(b)?),
            Formula::Modal(m, c, a) => {
                let members = self.sys.members(c)?;
                Node::Modal(*m, members, self.compile(a)?)
            }
        };
        Ok(self.intern(node))
    }

    fn profile_table(&mut self, members: &[AgentId]) -> ProfileTable {
        if let Some(t) = self.profiles.get(members) {
            return Rc::clone(t);
        }
        let sys = self.sys;
        let table: ProfileTable = Rc::new(
            sys.enumerate_profiles(members)
                .into_iter()
                .map(|s| {
                    let ext = sys.full_extensions(&s);
                    (s, ext)
                })
                .collect(),
        );
        self.profiles.insert(members.to_vec(), Rc::clone(&table));
        table
    }

    fn eval_node(&mut self, w: StateId, id: usize) -> bool {
        if let Some(v) = self.memo[id][w.index()] {
            return v;
        }
        let v = match self.nodes[id].clone() {
            Node::Var(p) => self.sys.valuation(&p).is_some_and(|s| s.contains(w.index())),
            Node::True => true,
            Node::False => false,
            Node::Not(a) => !self.eval_node(w, a),
            Node::Implies(a, b) => !self.eval_node(w, a) || self.eval_node(w, b),
            Node::And(a, b) => self.eval_node(w, a) && self.eval_node(w, b),
            Node::Or(a, b) => self.eval_node(w, a) || self.eval_node(w, b),
            Node::Modal(Modality::Know, members, a) => {
                let class = self.sys.indist_class(&members, w);
                class.ones().all(|u| self.eval_node(StateId(u as u32), a))
            }
            Node::Modal(m, members, a) => self.first_witness(m, &members, a, w).is_some(),
        };
        self.memo[id][w.index()] = Some(v);
        v
    }

    /// First profile (in enumeration order) witnessing `S`/`H` at `w`.
    fn first_witness(
        &mut self,
        m: Modality,
        members: &[AgentId],
        child: usize,
        w: StateId,
    ) -> Option<StrategyProfile> {
        let table = self.profile_table(members);
        let starts: Vec<StateId> = match m {
            Modality::Strat => vec![w],
            Modality::How => self
                .sys
                .indist_class(members, w)
                .ones()
                .map(|u| StateId(u as u32))
                .collect(),
            Modality::Know => unreachable!("knowledge has no witness"),
        };
        let sys = self.sys;
        table
            .iter()
            .find(|(_, extensions)| {
                starts.iter().all(|&start| {
                    extensions.iter().all(|&i| {
                        sys.targets(start, i)
                            .ones()
                            .all(|u| self.eval_node(StateId(u as u32), child))
                    })
                })
            })
            .map(|(s, _)| s.clone())
    }

    pub fn eval(&mut self, w: StateId, f: &Formula) -> Result<bool, EvalError> {
        let id = self.compile(f)?;
        Ok(self.eval_node(w, id))
    }

    pub fn witness(&mut self, w: StateId, f: &Formula) -> Result<Option<StrategyProfile>, EvalError> {
        let Formula::Modal(m @ (Modality::Strat | Modality::How), c, a) = f else {
            return Err(EvalError::NotStrategic(f.to_string()));
        };
        let members = self.sys.members(c)?;
        let child = self.compile(a)?;
        Ok(self.first_witness(*m, &members, child, w))
    }
}

impl Semantics for Evaluator<'_> {
    fn extension(&mut self, f: &Formula) -> Result<StateSet, EvalError> {
        let id = self.compile(f)?;
        let mut out = StateSet::with_capacity(self.sys.state_count());
        for w in self.sys.state_ids() {
            out.set(w.index(), self.eval_node(w, id));
        }
        Ok(out)
    }

    fn eval(&mut self, w: StateId, f: &Formula) -> Result<bool, EvalError> {
        Evaluator::eval(self, w, f)
    }
}

/// Set-at-a-time evaluator with no caching, used as an independent oracle.
pub struct NaiveEvaluator<'s> {
    sys: &'s EpistemicTransitionSystem,
}

impl<'s> NaiveEvaluator<'s> {
    pub fn new(sys: &'s EpistemicTransitionSystem) -> Self {
        Self { sys }
    }

    fn all(&self) -> StateSet {
        let mut s = StateSet::with_capacity(self.sys.state_count());
        s.insert_range(..);
        s
    }

    fn complement(&self, s: &StateSet) -> StateSet {
        let mut out = self.all();
        out.difference_with(s);
        out
    }

    fn ext(&self, f: &Formula) -> Result<StateSet, EvalError> {
        let sys = self.sys;
        let n = sys.state_count();
        Ok(match f {
            Formula::Var(p) => sys
                .valuation(p)
                .cloned()
                .unwrap_or_else(|| StateSet::with_capacity(n)),
            Formula::True => self.all(),
            Formula::False => StateSet::with_capacity(n),
            Formula::Not(a) => self.complement(&self.ext(a)?),
            Formula::Implies(a, b) => {
                let mut out = self.complement(&self.ext(a)?);
                out.union_with(&self.ext(b)?);
                out
            }
            Formula::And(a, b) => {
                let mut out = self.ext(a)?;
                out.intersect_with(&self.ext(b)?);
                out
            }
            Formula::Or(a, b) => {
                let mut out = self.ext(a)?;
                out.union_with(&self.ext(b)?);
                out
            }
            Formula::Modal(m, c, a) => {
                let members = sys.members(c)?;
                let inner = self.ext(a)?;
                let profiles = sys.enumerate_profiles(&members);
                let mut out = StateSet::with_capacity(n);
                for w in sys.state_ids() {
                    let class = sys.indist_class(&members, w);
                    let holds = match m {
                        Modality::Know => class.is_subset(&inner),
                        Modality::Strat => {
                            profiles.iter().any(|s| sys.outcomes(w, s).is_subset(&inner))
                        }
                        Modality::How => profiles.iter().any(|s| {
                            let mut reach = StateSet::with_capacity(n);
                            for u in class.ones() {
                                reach.union_with(&sys.outcomes(StateId(u as u32), s));
                            }
                            reach.is_subset(&inner)
                        }),
                    };
                    out.set(w.index(), holds);
                }
                out
            }
        })
    }
}

impl Semantics for NaiveEvaluator<'_> {
    fn extension(&mut self, f: &Formula) -> Result<StateSet, EvalError> {
        self.ext(f)
    }
}

/// `w |= f`, memoized.
pub fn eval(sys: &EpistemicTransitionSystem, w: StateId, f: &Formula) -> Result<bool, EvalError> {
    Evaluator::new(sys).eval(w, f)
}

/// `w |= f`, computed by the naive oracle.
pub fn eval_naive(sys: &EpistemicTransitionSystem, w: StateId, f: &Formula) -> Result<bool, EvalError> {
    NaiveEvaluator::new(sys).eval(w, f)
}

/// Lexicographically first profile witnessing a top-level `S{C}` or `H{C}`,
/// or `None` when the formula is false at `w`.
pub fn find_witness(
    sys: &EpistemicTransitionSystem,
    w: StateId,
    f: &Formula,
) -> Result<Option<StrategyProfile>, EvalError> {
    Evaluator::new(sys).witness(w, f)
}

/// True iff `f` holds at every state.
pub fn holds_everywhere(sys: &EpistemicTransitionSystem, f: &Formula) -> Result<bool, EvalError> {
    let mut ev = Evaluator::new(sys);
    let id = ev.compile(f)?;
    Ok(sys.state_ids().all(|w| ev.eval_node(w, id)))
}

/// Re-checks a witness for `S{C} phi` / `H{C} phi` at `w` from outcome sets
/// and the naive extension of `phi`.
pub fn certify_witness(
    sys: &EpistemicTransitionSystem,
    w: StateId,
    f: &Formula,
    profile: &StrategyProfile,
) -> Result<bool, EvalError> {
    let Formula::Modal(m @ (Modality::Strat | Modality::How), c, a) = f else {
        return Err(EvalError::NotStrategic(f.to_string()));
    };
    let members = sys.members(c)?;
    if !profile.agents().eq(members.iter().copied()) {
        return Ok(false);
    }
    let inner = NaiveEvaluator::new(sys).ext(a)?;
    let starts = match m {
        Modality::Strat => {
            let mut s = StateSet::with_capacity(sys.state_count());
            s.insert(w.index());
            s
        }
        _ => sys.indist_class(&members, w),
    };
    Ok(starts
        .ones()
        .all(|u| sys.outcomes(StateId(u as u32), profile).is_subset(&inner)))
}

/// One line of a claims file: `STATE |= FORMULA` or `STATE |/= FORMULA`.
#[derive(Debug, Clone, PartialEq)]
pub struct Claim {
    pub state: String,
    pub formula: Formula,
    pub expected: Option<bool>,
    pub line: usize,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.expected {
            Some(false) => "|/=",
            _ => "|=",
        };
        write!(f, "{} {rel} {}", self.state, self.formula)
    }
}

pub fn parse_claims(text: &str) -> Result<Vec<Claim>, ParseError> {
    let mut claims = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (state, rest, expected) = if let Some((s, r)) = body.split_once("|/=") {
            (s, r, false)
        } else if let Some((s, r)) = body.split_once("|=") {
            (s, r, true)
        } else {
            return Err(ParseError::at_line(line, "expected `STATE |= FORMULA` or `STATE |/= FORMULA`"));
        };
        let state = state.trim();
        if !crate::model::is_identifier(state) {
            return Err(ParseError::at_line(line, format!("invalid state name `{state}`")));
        }
        let formula = parse_formula(rest).map_err(|e| e.on_line(line))?;
        claims.push(Claim { state: state.to_string(), formula, expected: Some(expected), line });
    }
    Ok(claims)
}

/// The verdict for one claim.
#[derive(Debug, Clone)]
pub struct EvalReport {
    pub claim: Claim,
    pub verdict: bool,
    /// Present for a true top-level `S`/`H` formula.
    pub witness: Option<StrategyProfile>,
    pub elapsed: Duration,
}

impl EvalReport {
    /// The verdict matches the expectation; an unqualified claim passes when true.
    pub fn passed(&self) -> bool {
        self.verdict == self.claim.expected.unwrap_or(true)
    }
}

/// Evaluates one claim. `naive` selects the oracle evaluator for the verdict;
/// witnesses always come from the memoized evaluator.
pub fn check_claim(
    sys: &EpistemicTransitionSystem,
    claim: &Claim,
    naive: bool,
) -> Result<EvalReport, EvalError> {
    let start = Instant::now();
    let w = sys.state(&claim.state)?;
    let mut ev = Evaluator::new(sys);
    let verdict = if naive {
        eval_naive(sys, w, &claim.formula)?
    } else {
        ev.eval(w, &claim.formula)?
    };
    let witness = match &claim.formula {
        Formula::Modal(Modality::Strat | Modality::How, ..) if verdict => {
            ev.witness(w, &claim.formula)?
        }
        _ => None,
    };
    Ok(EvalReport { claim: claim.clone(), verdict, witness, elapsed: start.elapsed() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::formula::lower_derived;

    fn check(sys: &str, state: &str, formula: &str) -> bool {
        let sys = corpus::system(sys).unwrap();
        let w = sys.state(state).unwrap();
        let f = parse_formula(formula).unwrap();
        let memo = eval(&sys, w, &f).unwrap();
        assert_eq!(memo, eval_naive(&sys, w, &f).unwrap(), "{state} {formula}");
        memo
    }

    fn witness(sys: &str, state: &str, formula: &str) -> Option<String> {
        let sys = corpus::system(sys).unwrap();
        let w = sys.state(state).unwrap();
        let f = parse_formula(formula).unwrap();
        let found = find_witness(&sys, w, &f).unwrap();
        if let Some(p) = &found {
            assert!(certify_witness(&sys, w, &f, p).unwrap());
        }
        found.map(|p| p.display(&sys).to_string())
    }

    #[test]
    fn fork_in_the_road() {
        assert!(check("t1", "u", "S{a} p"));
        assert!(!check("t1", "u", "H{a} p"));
        assert!(check("t1", "u", "K{a} S{a} p"));
    }

    #[test]
    fn imperfect_recall() {
        assert!(check("t3", "s", "H{a} S{a} p"));
        assert!(!check("t3", "s", "H{a} H{a} p"));
    }

    #[test]
    fn unavoidable_but_unknown() {
        assert!(check("t8", "v", "S{} p"));
        assert!(!check("t8", "v", "K{a} S{} p"));
        assert!(check("t8", "v", "K{a,b} S{} p"));
    }

    #[test]
    fn nondeterministic_consensus() {
        assert!(!check("t7", "u", "S{a,b} p"));
        assert!(check("t7", "u", "H{a,b} (p | q)"));
        let t7 = corpus::system("t7").unwrap();
        let u = t7.state("u").unwrap();
        let or = parse_formula("p | q").unwrap();
        assert_eq!(eval(&t7, u, &or).unwrap(), eval(&t7, u, &lower_derived(&or)).unwrap());
    }

    #[test]
    fn nontermination_everywhere() {
        for name in corpus::SYSTEMS {
            let sys = corpus::system(name).unwrap();
            let f = parse_formula(&format!("!S{{{}}} false", sys.agents().names().join(","))).unwrap();
            assert!(holds_everywhere(&sys, &f).unwrap(), "{name}");
            assert!(holds_everywhere(&sys, &parse_formula("!S{} false").unwrap()).unwrap());
        }
    }

    #[test]
    fn holds_everywhere_examples() {
        let t1 = corpus::system("t1").unwrap();
        assert!(holds_everywhere(&t1, &parse_formula("p -> p").unwrap()).unwrap());
        assert!(!holds_everywhere(&t1, &parse_formula("p").unwrap()).unwrap());
    }

    #[test]
    fn witnesses() {
        assert_eq!(witness("t2", "u", "H{a} p").as_deref(), Some("a=L"));
        assert_eq!(witness("t1", "u", "S{a} p").as_deref(), Some("a=L"));
        assert_eq!(witness("t1", "v", "S{a} p").as_deref(), Some("a=R"));
        assert_eq!(witness("t1", "u", "H{a} p"), None);
        assert_eq!(witness("t6", "v", "H{b,c} p").as_deref(), Some("b=R c=R"));
        assert_eq!(witness("t8", "v", "S{} p").as_deref(), Some("{}"));
        let t1 = corpus::system("t1").unwrap();
        let u = t1.state("u").unwrap();
        assert!(matches!(
            find_witness(&t1, u, &parse_formula("K{a} p").unwrap()),
            Err(EvalError::NotStrategic(_))
        ));
    }

    #[test]
    fn unknown_agents_and_variables() {
        let t1 = corpus::system("t1").unwrap();
        let u = t1.state("u").unwrap();
        assert_eq!(
            eval(&t1, u, &parse_formula("K{z} p").unwrap()),
            Err(EvalError::Model(ModelError::UnknownAgent("z".into())))
        );
        assert!(eval_naive(&t1, u, &parse_formula("S{z} p").unwrap()).is_err());
        assert!(!eval(&t1, u, &parse_formula("fresh").unwrap()).unwrap());
        assert!(!eval_naive(&t1, u, &parse_formula("fresh").unwrap()).unwrap());
    }

    #[test]
    fn claims_files() {
        let claims = parse_claims("# c\nu |= S{a} p\n\nv |/= H{a} p # trailing\n").unwrap();
        assert_eq!(claims.len(), 2);
        assert_eq!(claims[0].expected, Some(true));
        assert_eq!(claims[1].expected, Some(false));
        assert_eq!(claims[1].line, 4);
        assert_eq!(claims[1].to_string(), "v |/= H{a} p");
        let e = parse_claims("u |= p ->\n").unwrap_err();
        assert_eq!(e.line, Some(1));
        assert!(parse_claims("u S{a} p\n").is_err());
        // A disjunction is not mistaken for the separator.
        let c = parse_claims("u |= H{a,b} (p | q)\n").unwrap();
        assert_eq!(c[0].formula, parse_formula("H{a,b} (p | q)").unwrap());
    }

    #[test]
    fn claim_reports_carry_witnesses() {
        let t1 = corpus::system("t1").unwrap();
        let claims = parse_claims("u |= S{a} p\nu |/= H{a} p\n").unwrap();
        let r = check_claim(&t1, &claims[0], false).unwrap();
        assert!(r.passed());
        assert_eq!(r.witness.unwrap().display(&t1).to_string(), "a=L");
        let r = check_claim(&t1, &claims[1], true).unwrap();
        assert!(r.passed());
        assert!(r.witness.is_none());
    }
}
