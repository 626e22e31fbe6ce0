//! Epistemic transition systems: states, per-agent indistinguishability,
//! a vote domain, a serial aggregation mechanism and a valuation.
//!
//! Identifiers are interned into sorted registries when a system is built, so
//! an [`AgentId`], [`StateId`] or [`Vote`] is an index into the corresponding
//! registry. That order is used everywhere (profile enumeration, reports).

mod parse;

use std::collections::BTreeMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

pub use parse::{parse_system, write_system};

/// A set of states, indexed by [`StateId`].
pub type StateSet = FixedBitSet;

/// Upper bound on `|V|^|A|`; mechanisms are stored expanded.
pub const MAX_FULL_PROFILES: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vote(pub u32);

impl AgentId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl Vote {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid identifier `{0}` (expected letters, digits or underscore)")]
    InvalidIdentifier(String),
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown vote `{0}`")]
    UnknownVote(String),
    #[error("malformed strategy profile: {0}")]
    MalformedProfile(String),
    #[error("{votes}^{agents} full strategy profiles exceed the supported maximum of {max}")]
    TooManyProfiles { votes: usize, agents: usize, max: usize },
}

/// Returns true for a nonempty token of ASCII letters, digits and underscores.
pub fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// Sorted, duplicate-free list of names.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Registry {
    names: Vec<String>,
}

impl Registry {
    pub fn new<I, S>(kind: &'static str, names: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        if let Some(bad) = names.iter().find(|n| !is_identifier(n)) {
            return Err(ModelError::InvalidIdentifier(bad.clone()));
        }
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(ModelError::Duplicate { kind, name: w[0].clone() });
        }
        Ok(Self { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// A set of agents named by identifier, kept sorted and duplicate-free so
/// that structural equality is set equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coalition(Vec<String>);

impl Coalition {
    pub fn new<I, S>(agents: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut v: Vec<String> = agents.into_iter().map(Into::into).collect();
        v.sort();
        v.dedup();
        Coalition(v)
    }

    pub fn empty() -> Self {
        Coalition(Vec::new())
    }

    pub fn agents(&self) -> &[String] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, agent: &str) -> bool {
        self.0.binary_search_by(|a| a.as_str().cmp(agent)).is_ok()
    }

    pub fn is_subset(&self, other: &Coalition) -> bool {
        self.0.iter().all(|a| other.contains(a))
    }

    pub fn is_disjoint(&self, other: &Coalition) -> bool {
        self.0.iter().all(|a| !other.contains(a))
    }

    pub fn union(&self, other: &Coalition) -> Coalition {
        Coalition::new(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn difference(&self, other: &Coalition) -> Coalition {
        Coalition(self.0.iter().filter(|a| !other.contains(a)).cloned().collect())
    }

    /// All subsets of `agents`, ordered by bitmask (agent 0 is the low bit).
    pub fn all_subsets(agents: &[String]) -> Vec<Coalition> {
        assert!(agents.len() < 32, "too many agents to enumerate coalitions");
        (0u32..1 << agents.len())
            .map(|mask| {
                Coalition::new(
                    agents
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, a)| a.clone()),
                )
            })
            .collect()
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.join(","))
    }
}

/// Votes of the members of one coalition. Agents are kept sorted; the domain
/// of the assignment is exactly the coalition.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StrategyProfile {
    assignment: Vec<(AgentId, Vote)>,
}

impl StrategyProfile {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(mut assignment: Vec<(AgentId, Vote)>) -> Result<Self, ModelError> {
        assignment.sort();
        if let Some(w) = assignment.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(ModelError::MalformedProfile(format!(
                "agent #{} is assigned more than once",
                w[0].0 .0
            )));
        }
        Ok(Self { assignment })
    }

    pub fn assignment(&self) -> &[(AgentId, Vote)] {
        &self.assignment
    }

    pub fn agents(&self) -> impl Iterator<Item = AgentId> + '_ {
        self.assignment.iter().map(|&(a, _)| a)
    }

    pub fn vote_of(&self, agent: AgentId) -> Option<Vote> {
        self.assignment
            .binary_search_by_key(&agent, |&(a, _)| a)
            .ok()
            .map(|i| self.assignment[i].1)
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// True if `self` agrees with `other` on every agent `other` assigns.
    pub fn extends(&self, other: &StrategyProfile) -> bool {
        other.assignment.iter().all(|&(a, v)| self.vote_of(a) == Some(v))
    }

    /// Renders the profile as `a=L b=R` using the system's names; `{}` when empty.
    pub fn display<'a>(&'a self, sys: &'a EpistemicTransitionSystem) -> impl fmt::Display + 'a {
        ProfileDisplay { profile: self, sys }
    }
}

struct ProfileDisplay<'a> {
    profile: &'a StrategyProfile,
    sys: &'a EpistemicTransitionSystem,
}

impl fmt::Display for ProfileDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.profile.is_empty() {
            return f.write_str("{}");
        }
        for (i, &(a, v)) in self.profile.assignment.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}={}", self.sys.agent_name(a), self.sys.vote_name(v))?;
        }
        Ok(())
    }
}

/// One invariant a system fails to satisfy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoAgents,
    NoVotes,
    NoStates,
    NotAPartition { agent: String, state: String },
    NotSerial { state: String, profile: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoAgents => f.write_str("agent set is empty"),
            Violation::NoVotes => f.write_str("domain of choices (votes) is empty"),
            Violation::NoStates => f.write_str("state set is empty"),
            Violation::NotAPartition { agent, state } => write!(
                f,
                "indist {agent}: not a partition (state {state} is listed in more than one class)"
            ),
            Violation::NotSerial { state, profile } => {
                write!(f, "state {state} has no transition under profile {profile}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Builds a system from interned registries. Used by the file loader and the
/// random generator.
#[derive(Debug, Clone)]
pub struct SystemBuilder {
    agents: Registry,
    votes: Registry,
    states: Registry,
    classes: Vec<Vec<Vec<StateId>>>,
    transitions: Vec<Vec<StateSet>>,
    valuation: BTreeMap<String, StateSet>,
    strides: Vec<usize>,
    profile_count: usize,
}

impl SystemBuilder {
    pub fn new(agents: Registry, votes: Registry, states: Registry) -> Result<Self, ModelError> {
        let profile_count = checked_profile_count(votes.len(), agents.len())?;
        let strides = strides(votes.len(), agents.len());
        let n = states.len();
        Ok(Self {
            classes: vec![Vec::new(); agents.len()],
            transitions: vec![vec![StateSet::with_capacity(n); profile_count]; n],
            valuation: BTreeMap::new(),
            agents,
            votes,
            states,
            strides,
            profile_count,
        })
    }

    pub fn agent(&self, name: &str) -> Option<AgentId> {
        self.agents.position(name).map(|i| AgentId(i as u32))
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.states.position(name).map(|i| StateId(i as u32))
    }

    pub fn vote(&self, name: &str) -> Option<Vote> {
        self.votes.position(name).map(|i| Vote(i as u32))
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn vote_count(&self) -> usize {
        self.votes.len()
    }

    pub fn profile_count(&self) -> usize {
        self.profile_count
    }

    /// Declares one indistinguishability class for `agent`. Repeated states
    /// inside a single class are collapsed; a state listed in two classes is
    /// kept as given and reported by validation.
    pub fn indist_class(&mut self, agent: AgentId, mut class: Vec<StateId>) {
        class.sort();
        class.dedup();
        self.classes[agent.index()].push(class);
    }

    /// Adds `source -> target` for every full profile matching `pattern`,
    /// which has one entry per agent; `None` is a wildcard.
    pub fn transition(&mut self, source: StateId, pattern: &[Option<Vote>], target: StateId) {
        assert_eq!(pattern.len(), self.agents.len(), "pattern must cover every agent");
        let nv = self.votes.len();
        for idx in 0..self.profile_count {
            let matches = pattern.iter().enumerate().all(|(i, p)| match p {
                Some(v) => (idx / self.strides[i]) % nv == v.index(),
                None => true,
            });
            if matches {
                self.transitions[source.index()][idx].insert(target.index());
            }
        }
    }

    /// Adds `source -> target` for the full profile with the given index.
    pub fn transition_full(&mut self, source: StateId, profile_index: usize, target: StateId) {
        self.transitions[source.index()][profile_index].insert(target.index());
    }

    pub fn prop<I: IntoIterator<Item = StateId>>(&mut self, name: impl Into<String>, states: I) {
        let n = self.states.len();
        let set = self
            .valuation
            .entry(name.into())
            .or_insert_with(|| StateSet::with_capacity(n));
        for s in states {
            set.insert(s.index());
        }
    }

    pub fn build(self) -> EpistemicTransitionSystem {
        let n = self.states.len();
        let related = self
            .classes
            .iter()
            .map(|classes| {
                let mut rel: Vec<StateSet> = (0..n)
                    .map(|w| {
                        let mut s = StateSet::with_capacity(n);
                        s.insert(w);
                        s
                    })
                    .collect();
                for class in classes {
                    for &w in class {
                        for &u in class {
                            rel[w.index()].insert(u.index());
                        }
                    }
                }
                rel
            })
            .collect();
        EpistemicTransitionSystem {
            agents: self.agents,
            votes: self.votes,
            states: self.states,
            classes: self.classes,
            related,
            transitions: self.transitions,
            valuation: self.valuation,
            strides: self.strides,
            profile_count: self.profile_count,
        }
    }
}

fn checked_profile_count(votes: usize, agents: usize) -> Result<usize, ModelError> {
    let too_many = || ModelError::TooManyProfiles { votes, agents, max: MAX_FULL_PROFILES };
    let mut count = 1usize;
    for _ in 0..agents {
        count = count.checked_mul(votes).ok_or_else(too_many)?;
        if count > MAX_FULL_PROFILES {
            return Err(too_many());
        }
    }
    Ok(count)
}

// Agent 0 is the most significant digit, so index order is lexicographic.
fn strides(votes: usize, agents: usize) -> Vec<usize> {
    let mut strides = vec![1; agents];
    for i in (0..agents.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * votes;
    }
    strides
}

/// The tuple `(W, {~a}, V, M, pi)`. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpistemicTransitionSystem {
    agents: Registry,
    votes: Registry,
    states: Registry,
    /// Declared classes per agent; unlisted states are implicit singletons.
    classes: Vec<Vec<Vec<StateId>>>,
    /// `related[a][w]`: states sharing a declared class with `w`, plus `w`.
    related: Vec<Vec<StateSet>>,
    /// `transitions[w][i]`: targets of `w` under the full profile with index `i`.
    transitions: Vec<Vec<StateSet>>,
    valuation: BTreeMap<String, StateSet>,
    strides: Vec<usize>,
    profile_count: usize,
}

impl EpistemicTransitionSystem {
    pub fn agents(&self) -> &Registry {
        &self.agents
    }

    pub fn votes(&self) -> &Registry {
        &self.votes
    }

    pub fn states(&self) -> &Registry {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len() as u32).map(StateId)
    }

    pub fn agent_ids(&self) -> impl Iterator<Item = AgentId> {
        (0..self.agents.len() as u32).map(AgentId)
    }

    pub fn agent_name(&self, a: AgentId) -> &str {
        self.agents.name(a.index())
    }

    pub fn state_name(&self, s: StateId) -> &str {
        self.states.name(s.index())
    }

    pub fn vote_name(&self, v: Vote) -> &str {
        self.votes.name(v.index())
    }

    pub fn state(&self, name: &str) -> Result<StateId, ModelError> {
        self.states
            .position(name)
            .map(|i| StateId(i as u32))
            .ok_or_else(|| ModelError::UnknownState(name.to_string()))
    }

    pub fn agent(&self, name: &str) -> Result<AgentId, ModelError> {
        self.agents
            .position(name)
            .map(|i| AgentId(i as u32))
            .ok_or_else(|| ModelError::UnknownAgent(name.to_string()))
    }

    pub fn vote(&self, name: &str) -> Result<Vote, ModelError> {
        self.votes
            .position(name)
            .map(|i| Vote(i as u32))
            .ok_or_else(|| ModelError::UnknownVote(name.to_string()))
    }

    /// Resolves a named coalition to sorted agent ids.
    pub fn members(&self, coalition: &Coalition) -> Result<Vec<AgentId>, ModelError> {
        coalition.agents().iter().map(|a| self.agent(a)).collect()
    }

    /// Builds a profile from `(agent, vote)` name pairs.
    pub fn profile(&self, pairs: &[(&str, &str)]) -> Result<StrategyProfile, ModelError> {
        let assignment = pairs
            .iter()
            .map(|&(a, v)| Ok((self.agent(a)?, self.vote(v)?)))
            .collect::<Result<Vec<_>, ModelError>>()?;
        StrategyProfile::new(assignment)
    }

    /// The valuation of `p`; `None` when the variable is not mentioned.
    pub fn valuation(&self, p: &str) -> Option<&StateSet> {
        self.valuation.get(p)
    }

    pub fn propositions(&self) -> impl Iterator<Item = (&str, &StateSet)> {
        self.valuation.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn declared_classes(&self, agent: AgentId) -> &[Vec<StateId>] {
        &self.classes[agent.index()]
    }

    pub fn full_profile_count(&self) -> usize {
        self.profile_count
    }

    /// Targets of `w` under the full profile with index `profile_index`.
    pub fn targets(&self, w: StateId, profile_index: usize) -> &StateSet {
        &self.transitions[w.index()][profile_index]
    }

    pub fn vote_in_full_profile(&self, profile_index: usize, agent: AgentId) -> Vote {
        Vote(((profile_index / self.strides[agent.index()]) % self.votes.len()) as u32)
    }

    pub fn full_profile(&self, profile_index: usize) -> StrategyProfile {
        StrategyProfile {
            assignment: self
                .agent_ids()
                .map(|a| (a, self.vote_in_full_profile(profile_index, a)))
                .collect(),
        }
    }

    /// Indices of the full profiles that agree with `s` on its coalition.
    pub fn full_extensions(&self, s: &StrategyProfile) -> Vec<usize> {
        (0..self.profile_count)
            .filter(|&i| {
                s.assignment
                    .iter()
                    .all(|&(a, v)| self.vote_in_full_profile(i, a) == v)
            })
            .collect()
    }

    /// Every `(source, full profile index, target)` triple of the mechanism.
    pub fn mechanism(&self) -> impl Iterator<Item = (StateId, usize, StateId)> + '_ {
        self.transitions.iter().enumerate().flat_map(|(w, row)| {
            row.iter().enumerate().flat_map(move |(i, targets)| {
                targets
                    .ones()
                    .map(move |u| (StateId(w as u32), i, StateId(u as u32)))
            })
        })
    }

    /// Checks every structural invariant and reports all violations.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.agents.is_empty() {
            violations.push(Violation::NoAgents);
        }
        if self.votes.is_empty() {
            violations.push(Violation::NoVotes);
        }
        if self.states.is_empty() {
            violations.push(Violation::NoStates);
        }
        for a in self.agent_ids() {
            let mut seen = vec![0usize; self.state_count()];
            for class in &self.classes[a.index()] {
                for &w in class {
                    seen[w.index()] += 1;
                }
            }
            for (w, &count) in seen.iter().enumerate() {
                if count > 1 {
                    violations.push(Violation::NotAPartition {
                        agent: self.agent_name(a).to_string(),
                        state: self.states.name(w).to_string(),
                    });
                }
            }
        }
        if !self.votes.is_empty() {
            for w in self.state_ids() {
                for i in 0..self.profile_count {
                    if self.transitions[w.index()][i].is_clear() {
                        violations.push(Violation::NotSerial {
                            state: self.state_name(w).to_string(),
                            profile: self.full_profile(i).display(self).to_string(),
                        });
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// States indistinguishable from `w` by every member of the coalition.
    /// For the empty coalition this is every state.
    pub fn indist_class(&self, members: &[AgentId], w: StateId) -> StateSet {
        let mut class = StateSet::with_capacity(self.state_count());
        class.insert_range(..);
        for &a in members {
            class.intersect_with(&self.related[a.index()][w.index()]);
        }
        class
    }

    pub fn indist(&self, members: &[AgentId], w1: StateId, w2: StateId) -> bool {
        members
            .iter()
            .all(|a| self.related[a.index()][w1.index()].contains(w2.index()))
    }

    /// Name-level `w1 ~C w2`.
    pub fn indist_coalition(
        &self,
        coalition: &Coalition,
        w1: &str,
        w2: &str,
    ) -> Result<bool, ModelError> {
        let members = self.members(coalition)?;
        Ok(self.indist(&members, self.state(w1)?, self.state(w2)?))
    }

    /// `{ u | w ->s u }`: targets reachable under some full-profile extension of `s`.
    pub fn outcomes(&self, w: StateId, s: &StrategyProfile) -> StateSet {
        let mut out = StateSet::with_capacity(self.state_count());
        for i in self.full_extensions(s) {
            out.union_with(&self.transitions[w.index()][i]);
        }
        out
    }

    /// All `|V|^|C|` profiles of the coalition, lexicographic in
    /// (sorted agents, sorted votes). The empty coalition has one profile.
    pub fn enumerate_profiles(&self, members: &[AgentId]) -> Vec<StrategyProfile> {
        let mut members = members.to_vec();
        members.sort();
        members.dedup();
        let nv = self.votes.len();
        if nv == 0 && !members.is_empty() {
            return Vec::new();
        }
        let count = nv.pow(members.len() as u32);
        (0..count)
            .map(|mut idx| {
                let mut assignment = vec![(AgentId(0), Vote(0)); members.len()];
                for (slot, &a) in members.iter().enumerate().rev() {
                    assignment[slot] = (a, Vote((idx % nv) as u32));
                    idx /= nv;
                }
                StrategyProfile { assignment }
            })
            .collect()
    }
}
