//! The eleven axiom schemas and a first-order matcher for their instances.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::{lower_derived, Formula, Modality};
use crate::model::Coalition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomName {
    Truth,
    NegativeIntrospection,
    Distributivity,
    Monotonicity,
    Cooperation,
    StrategicNegativeIntrospection,
    EpistemicCooperation,
    StrategicTruth,
    EpistemicDeterminicity,
    EmptyCoalition,
    Nontermination,
}

impl AxiomName {
    pub const ALL: [AxiomName; 11] = [
        AxiomName::Truth,
        AxiomName::NegativeIntrospection,
        AxiomName::Distributivity,
        AxiomName::Monotonicity,
        AxiomName::Cooperation,
        AxiomName::StrategicNegativeIntrospection,
        AxiomName::EpistemicCooperation,
        AxiomName::StrategicTruth,
        AxiomName::EpistemicDeterminicity,
        AxiomName::EmptyCoalition,
        AxiomName::Nontermination,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AxiomName::Truth => "truth",
            AxiomName::NegativeIntrospection => "negative-introspection",
            AxiomName::Distributivity => "distributivity",
            AxiomName::Monotonicity => "monotonicity",
            AxiomName::Cooperation => "cooperation",
            AxiomName::StrategicNegativeIntrospection => "strategic-negative-introspection",
            AxiomName::EpistemicCooperation => "epistemic-cooperation",
            AxiomName::StrategicTruth => "strategic-truth",
            AxiomName::EpistemicDeterminicity => "epistemic-determinicity",
            AxiomName::EmptyCoalition => "empty-coalition",
            AxiomName::Nontermination => "nontermination",
        }
    }

    pub fn schema(self) -> AxiomSchema {
        AxiomSchema::of(self)
    }
}

impl fmt::Display for AxiomName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown axiom schema `{0}`")]
pub struct UnknownSchema(pub String);

impl FromStr for AxiomName {
    type Err = UnknownSchema;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AxiomName::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| UnknownSchema(s.to_string()))
    }
}

/// Constraint on the coalition metavariables of a schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideCondition {
    None,
    /// `C ⊆ D` (subset or equal).
    Subset,
    /// `C ∩ D = ∅`.
    Disjoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Meta {
    Phi,
    Psi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CoalitionPattern {
    C,
    D,
    Empty,
    /// `C ∪ D`, checked once both are bound.
    Union,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Pattern {
    Meta(Meta),
    /// Either primitive `false` or `!(p -> p)` for a variable `p`.
    Bottom,
    Not(Box<Pattern>),
    Implies(Box<Pattern>, Box<Pattern>),
    Modal(Modality, CoalitionPattern, Box<Pattern>),
}

fn not(p: Pattern) -> Pattern {
    Pattern::Not(Box::new(p))
}

fn imp(a: Pattern, b: Pattern) -> Pattern {
    Pattern::Implies(Box::new(a), Box::new(b))
}

fn k(c: CoalitionPattern, p: Pattern) -> Pattern {
    Pattern::Modal(Modality::Know, c, Box::new(p))
}

fn s(c: CoalitionPattern, p: Pattern) -> Pattern {
    Pattern::Modal(Modality::Strat, c, Box::new(p))
}

fn h(c: CoalitionPattern, p: Pattern) -> Pattern {
    Pattern::Modal(Modality::How, c, Box::new(p))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomSchema {
    pub name: AxiomName,
    pub side: SideCondition,
    pattern: Pattern,
}

/// Metavariable bindings of a matched (or to-be-built) instance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Instantiation {
    pub phi: Option<Formula>,
    pub psi: Option<Formula>,
    pub c: Option<Coalition>,
    pub d: Option<Coalition>,
}

/// Which metavariables occur in a schema.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SchemaVars {
    pub phi: bool,
    pub psi: bool,
    pub c: bool,
    pub d: bool,
}

impl AxiomSchema {
    pub fn vars(&self) -> SchemaVars {
        fn walk(p: &Pattern, v: &mut SchemaVars) {
            match p {
                Pattern::Meta(Meta::Phi) => v.phi = true,
                Pattern::Meta(Meta::Psi) => v.psi = true,
                Pattern::Bottom => {}
                Pattern::Not(a) => walk(a, v),
                Pattern::Implies(a, b) => {
                    walk(a, v);
                    walk(b, v);
                }
                Pattern::Modal(_, cp, a) => {
                    match cp {
                        CoalitionPattern::C => v.c = true,
                        CoalitionPattern::D => v.d = true,
                        CoalitionPattern::Empty => {}
                        CoalitionPattern::Union => {
                            v.c = true;
                            v.d = true;
                        }
                    }
                    walk(a, v);
                }
            }
        }
        let mut v = SchemaVars::default();
        walk(&self.pattern, &mut v);
        v
    }

    pub fn of(name: AxiomName) -> Self {
        use CoalitionPattern::{Empty, Union, C, D};
        let phi = || Pattern::Meta(Meta::Phi);
        let psi = || Pattern::Meta(Meta::Psi);
        let (pattern, side) = match name {
            AxiomName::Truth => (imp(k(C, phi()), phi()), SideCondition::None),
            AxiomName::NegativeIntrospection => (
                imp(not(k(C, phi())), k(C, not(k(C, phi())))),
                SideCondition::None,
            ),
            AxiomName::Distributivity => (
                imp(k(C, imp(phi(), psi())), imp(k(C, phi()), k(C, psi()))),
                SideCondition::None,
            ),
            AxiomName::Monotonicity => (imp(k(C, phi()), k(D, phi())), SideCondition::Subset),
            AxiomName::Cooperation => (
                imp(s(C, imp(phi(), psi())), imp(s(D, phi()), s(Union, psi()))),
                SideCondition::Disjoint,
            ),
            AxiomName::StrategicNegativeIntrospection => (
                imp(not(h(C, phi())), k(C, not(h(C, phi())))),
                SideCondition::None,
            ),
            AxiomName::EpistemicCooperation => (
                imp(h(C, imp(phi(), psi())), imp(h(D, phi()), h(Union, psi()))),
                SideCondition::Disjoint,
            ),
            AxiomName::StrategicTruth => (imp(h(C, phi()), s(C, phi())), SideCondition::None),
            AxiomName::EpistemicDeterminicity => (
                imp(h(C, imp(phi(), psi())), imp(k(C, s(Empty, phi())), h(C, psi()))),
                SideCondition::None,
            ),
            AxiomName::EmptyCoalition => (imp(k(Empty, phi()), h(Empty, phi())), SideCondition::None),
            AxiomName::Nontermination => (not(s(C, Pattern::Bottom)), SideCondition::None),
        };
        AxiomSchema { name, side, pattern }
    }

    /// Matches `f` (after lowering derived connectives) against the schema,
    /// returning the bindings when `f` is an instance whose side condition holds.
    pub fn matches(&self, f: &Formula) -> Option<Instantiation> {
        let f = lower_derived(f);
        let mut m = Matcher::default();
        if !m.go(&self.pattern, &f) {
            return None;
        }
        let inst = m.inst;
        if !m.unions.is_empty() {
            let (c, d) = (inst.c.as_ref()?, inst.d.as_ref()?);
            let union = c.union(d);
            if m.unions.iter().any(|u| *u != union) {
                return None;
            }
        }
        let ok = match self.side {
            SideCondition::None => true,
            SideCondition::Subset => inst.c.as_ref()?.is_subset(inst.d.as_ref()?),
            SideCondition::Disjoint => inst.c.as_ref()?.is_disjoint(inst.d.as_ref()?),
        };
        ok.then_some(inst)
    }

    /// Builds the instance for the given bindings. Unbound metavariables
    /// default to `false` / the empty coalition; `⊥` is built as `false`.
    pub fn instantiate(&self, inst: &Instantiation) -> Formula {
        build(&self.pattern, inst)
    }
}

fn build(p: &Pattern, inst: &Instantiation) -> Formula {
    match p {
        Pattern::Meta(Meta::Phi) => inst.phi.clone().unwrap_or(Formula::False),
        Pattern::Meta(Meta::Psi) => inst.psi.clone().unwrap_or(Formula::False),
        Pattern::Bottom => Formula::False,
        Pattern::Not(a) => Formula::not(build(a, inst)),
        Pattern::Implies(a, b) => Formula::implies(build(a, inst), build(b, inst)),
        Pattern::Modal(m, cp, a) => {
            let c = inst.c.clone().unwrap_or_default();
            let d = inst.d.clone().unwrap_or_default();
            let coalition = match cp {
                CoalitionPattern::C => c,
                CoalitionPattern::D => d,
                CoalitionPattern::Empty => Coalition::empty(),
                CoalitionPattern::Union => c.union(&d),
            };
            Formula::modal(*m, coalition, build(a, inst))
        }
    }
}

#[derive(Default)]
struct Matcher {
    inst: Instantiation,
    unions: Vec<Coalition>,
}

fn bind<T: PartialEq + Clone>(slot: &mut Option<T>, value: &T) -> bool {
    match slot {
        Some(bound) => bound == value,
        None => {
            *slot = Some(value.clone());
            true
        }
    }
}

fn is_bottom(f: &Formula) -> bool {
    match f {
        Formula::False => true,
        Formula::Not(inner) => matches!(
            &**inner,
            Formula::Implies(a, b) if matches!((&**a, &**b), (Formula::Var(x), Formula::Var(y)) if x == y)
        ),
        _ => false,
    }
}

impl Matcher {
    fn go(&mut self, p: &Pattern, f: &Formula) -> bool {
        match (p, f) {
            (Pattern::Meta(Meta::Phi), _) => bind(&mut self.inst.phi, f),
            (Pattern::Meta(Meta::Psi), _) => bind(&mut self.inst.psi, f),
            (Pattern::Bottom, _) => is_bottom(f),
            (Pattern::Not(pa), Formula::Not(fa)) => self.go(pa, fa),
            (Pattern::Implies(pa, pb), Formula::Implies(fa, fb)) => {
                self.go(pa, fa) && self.go(pb, fb)
            }
            (Pattern::Modal(pm, cp, pa), Formula::Modal(fm, c, fa)) if pm == fm => {
                let coalition_ok = match cp {
                    CoalitionPattern::C => bind(&mut self.inst.c, c),
                    CoalitionPattern::D => bind(&mut self.inst.d, c),
                    CoalitionPattern::Empty => c.is_empty(),
                    CoalitionPattern::Union => {
                        self.unions.push(c.clone());
                        true
                    }
                };
                coalition_ok && self.go(pa, fa)
            }
            _ => false,
        }
    }
}

/// Matches `f` against the schema called `name`.
pub fn match_axiom(f: &Formula, name: &str) -> Result<Option<Instantiation>, UnknownSchema> {
    Ok(name.parse::<AxiomName>()?.schema().matches(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn m(f: &str, name: &str) -> Option<Instantiation> {
        match_axiom(&parse_formula(f).unwrap(), name).unwrap()
    }

    #[test]
    fn strategic_truth_instance() {
        let inst = m("H{a} p -> S{a} p", "strategic-truth").unwrap();
        assert_eq!(inst.c, Some(Coalition::new(["a"])));
        assert_eq!(inst.phi, Some(Formula::var("p")));
        assert!(m("H{a} p -> S{b} p", "strategic-truth").is_none());
    }

    #[test]
    fn cooperation_requires_disjoint_coalitions() {
        assert!(m("S{a}(p->q) -> (S{a} p -> S{a} q)", "cooperation").is_none());
        let inst = m("S{a}(p->q) -> (S{b} p -> S{a,b} q)", "cooperation").unwrap();
        assert_eq!(inst.d, Some(Coalition::new(["b"])));
        // the union must be exact
        assert!(m("S{a}(p->q) -> (S{b} p -> S{a,b,c} q)", "cooperation").is_none());
        assert!(m("S{a}(p->q) -> (S{b} p -> S{a} q)", "cooperation").is_none());
        assert!(m("S{}(p->q) -> (S{} p -> S{} q)", "cooperation").is_some());
        assert!(m("H{a}(p->q) -> (H{b} p -> H{b,a} q)", "epistemic-cooperation").is_some());
    }

    #[test]
    fn monotonicity_requires_subset() {
        assert!(m("K{a,b} p -> K{a} p", "monotonicity").is_none());
        assert!(m("K{a} p -> K{a,b} p", "monotonicity").is_some());
        assert!(m("K{a} p -> K{a} p", "monotonicity").is_some());
        assert!(m("K{} p -> K{a} p", "monotonicity").is_some());
    }

    #[test]
    fn empty_coalition_and_determinicity() {
        let inst = m("K{} p -> H{} p", "empty-coalition").unwrap();
        assert_eq!(inst.phi, Some(Formula::var("p")));
        assert!(m("K{a} p -> H{a} p", "empty-coalition").is_none());
        assert!(m("H{a}(p -> q) -> K{a} S{} p -> H{a} q", "epistemic-determinicity").is_some());
        assert!(m("H{a}(p -> q) -> K{a} S{a} p -> H{a} q", "epistemic-determinicity").is_none());
    }

    #[test]
    fn nontermination_accepts_both_bottoms() {
        assert!(m("!S{a} false", "nontermination").is_some());
        assert!(m("!S{a,b} !(q -> q)", "nontermination").is_some());
        assert!(m("!S{a} !(p -> q)", "nontermination").is_none());
        assert!(m("!S{a} p", "nontermination").is_none());
    }

    #[test]
    fn knowledge_axioms() {
        assert!(m("K{a} (p & q) -> p & q", "truth").is_some());
        assert!(m("K{a} p -> q", "truth").is_none());
        assert!(m("!K{a} p -> K{a} !K{a} p", "negative-introspection").is_some());
        assert!(m("!K{a} p -> K{b} !K{a} p", "negative-introspection").is_none());
        assert!(m("K{a}(p -> q) -> K{a} p -> K{a} q", "distributivity").is_some());
        assert!(m("!H{a} p -> K{a} !H{a} p", "strategic-negative-introspection").is_some());
    }

    #[test]
    fn stable_under_coalition_reordering() {
        let a = m("S{b,a}(p->q) -> (S{c} p -> S{c,b,a} q)", "cooperation");
        let b = m("S{a,b}(p->q) -> (S{c} p -> S{a,b,c} q)", "cooperation");
        assert!(a.is_some());
        assert_eq!(a, b);
    }

    #[test]
    fn unknown_schema_name() {
        assert_eq!(
            match_axiom(&Formula::False, "excluded-middle"),
            Err(UnknownSchema("excluded-middle".into()))
        );
    }

    #[test]
    fn instantiate_then_match() {
        let inst = Instantiation {
            phi: Some(parse_formula("p -> q").unwrap()),
            psi: Some(parse_formula("K{a} q").unwrap()),
            c: Some(Coalition::new(["a"])),
            d: Some(Coalition::new(["b", "c"])),
        };
        for name in AxiomName::ALL {
            let schema = name.schema();
            let f = schema.instantiate(&inst);
            let side_ok = !matches!(schema.side, SideCondition::Subset);
            assert_eq!(schema.matches(&f).is_some(), side_ok, "{name}: {f}");
        }
    }
}
