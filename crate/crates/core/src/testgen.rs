//! Random serial systems and formulas, and exhaustive soundness sweeps:
//! every axiom schema instantiated over a formula pool and all coalition
//! choices, and the necessitation rules checked on valid pool formulas.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formula::{Formula, Modality};
use crate::model::{Coalition, EpistemicTransitionSystem, Registry, StateId, StateSet, SystemBuilder};
use crate::proofkit::{AxiomName, Instantiation, SideCondition};
use crate::semantics::{EvalError, Evaluator, Semantics};

/// Default cap on the formula pool size.
pub const POOL_CAP: usize = 5000;

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub seed: u64,
    pub max_states: usize,
    pub max_agents: usize,
    pub max_votes: usize,
    /// Probability of each extra target beyond the guaranteed one.
    pub transition_density: f64,
    pub formula_depth: usize,
    pub variable_count: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            seed: 1,
            max_states: 4,
            max_agents: 3,
            max_votes: 2,
            transition_density: 0.3,
            formula_depth: 2,
            variable_count: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid generator parameters: {0}")]
pub struct InvalidParams(pub String);

impl GenParams {
    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    pub fn check(&self) -> Result<(), InvalidParams> {
        let bounds = [
            ("max_states", self.max_states),
            ("max_agents", self.max_agents),
            ("max_votes", self.max_votes),
            ("variable_count", self.variable_count),
        ];
        for (name, v) in bounds {
            if v == 0 {
                return Err(InvalidParams(format!("{name} must be at least 1")));
            }
        }
        if !(self.transition_density > 0.0 && self.transition_density <= 1.0) {
            return Err(InvalidParams("transition_density must lie in (0, 1]".into()));
        }
        let profiles = (self.max_votes as u128).checked_pow(self.max_agents as u32);
        if !profiles.is_some_and(|n| n <= crate::model::MAX_FULL_PROFILES as u128) {
            return Err(InvalidParams("too many full profiles".into()));
        }
        Ok(())
    }

    pub fn variables(&self) -> Vec<String> {
        variable_names(self.variable_count)
    }
}

pub fn variable_names(n: usize) -> Vec<String> {
    const FIRST: [&str; 3] = ["p", "q", "r"];
    (0..n)
        .map(|i| FIRST.get(i).map_or_else(|| format!("p{i}"), |s| s.to_string()))
        .collect()
}

pub fn agent_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| match u8::try_from(i) {
            Ok(i) if i < 26 => char::from(b'a' + i).to_string(),
            _ => format!("a{i}"),
        })
        .collect()
}

fn padded(prefix: &str, n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|i| format!("{prefix}{i:0width$}")).collect()
}

/// A random serial system. Deterministic in `params.seed`.
///
/// # Panics
/// If `params.check()` fails.
pub fn random_system(params: &GenParams) -> EpistemicTransitionSystem {
    if let Err(e) = params.check() {
        panic!("{e}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n_agents = rng.gen_range(1..=params.max_agents);
    let n_votes = rng.gen_range(1..=params.max_votes);
    let n_states = rng.gen_range(1..=params.max_states);
    let registry = |kind, names: Vec<String>| Registry::new(kind, names).expect("generated names");
    let mut b = SystemBuilder::new(
        registry("agent", agent_names(n_agents)),
        registry("vote", padded("v", n_votes)),
        registry("state", padded("s", n_states)),
    )
    .expect("generated system fits");

    for a in 0..n_agents {
        let mut classes: BTreeMap<usize, Vec<StateId>> = BTreeMap::new();
        for s in 0..n_states {
            classes.entry(rng.gen_range(0..n_states)).or_default().push(StateId(s as u32));
        }
        for class in classes.into_values() {
            b.indist_class(crate::model::AgentId(a as u32), class);
        }
    }

    let profiles = b.profile_count();
    for s in 0..n_states {
        let source = StateId(s as u32);
        for i in 0..profiles {
            let first = rng.gen_range(0..n_states);
            b.transition_full(source, i, StateId(first as u32));
            for t in 0..n_states {
                if t != first && rng.gen_bool(params.transition_density) {
                    b.transition_full(source, i, StateId(t as u32));
                }
            }
        }
    }

    for p in params.variables() {
        let members: Vec<StateId> = (0..n_states)
            .filter(|_| rng.gen_bool(0.5))
            .map(|s| StateId(s as u32))
            .collect();
        b.prop(p, members);
    }
    b.build()
}

fn random_coalition<R: Rng>(rng: &mut R, agents: &[String]) -> Coalition {
    Coalition::new(agents.iter().filter(|_| rng.gen_bool(0.5)))
}

/// A random formula of depth at most `depth`, using derived connectives too.
pub fn random_formula<R: Rng>(
    rng: &mut R,
    depth: usize,
    variables: &[String],
    agents: &[String],
) -> Formula {
    let leaf = |rng: &mut R| match rng.gen_range(0..10) {
        0 => Formula::False,
        1 => Formula::True,
        _ => Formula::var(variables[rng.gen_range(0..variables.len())].clone()),
    };
    if depth == 0 {
        return leaf(rng);
    }
    let sub = |rng: &mut R| random_formula(rng, depth - 1, variables, agents);
    match rng.gen_range(0..8) {
        0 => leaf(rng),
        1 => Formula::not(sub(rng)),
        2 => Formula::implies(sub(rng), sub(rng)),
        3 => Formula::and(sub(rng), sub(rng)),
        4 => Formula::or(sub(rng), sub(rng)),
        k => {
            let m = [Modality::Know, Modality::Strat, Modality::How][k - 5];
            let c = random_coalition(rng, agents);
            Formula::modal(m, c, sub(rng))
        }
    }
}

/// A random system together with a state and a formula over its variables
/// and agents, all drawn from `params.seed`.
pub fn random_query(params: &GenParams) -> (EpistemicTransitionSystem, StateId, Formula) {
    let sys = random_system(params);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0x9e37_79b9_7f4a_7c15);
    let w = StateId(rng.gen_range(0..sys.state_count()) as u32);
    let f = random_formula(&mut rng, params.formula_depth, &params.variables(), sys.agents().names());
    (sys, w, f)
}

/// All core formulas up to a depth over the given variables and `false`,
/// with every modality over every coalition. Built depth by depth; within a
/// depth, negations and modal formulas come before implications, so a cap
/// cuts implications first.
#[derive(Debug, Clone, PartialEq)]
pub struct FormulaPool {
    pub formulas: Vec<Formula>,
    /// Number of formulas the full pool would contain.
    pub full_size: usize,
    pub cap: usize,
}

impl FormulaPool {
    pub fn capped(&self) -> bool {
        self.full_size > self.formulas.len()
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }
}

pub fn formula_pool(variables: &[String], agents: &[String], depth: usize, cap: usize) -> FormulaPool {
    let coalitions = Coalition::all_subsets(agents);
    let mut formulas: Vec<Formula> = Vec::new();
    let mut full_size = 0usize;
    let push = |f: Formula, formulas: &mut Vec<Formula>, full_size: &mut usize| {
        *full_size += 1;
        if formulas.len() < cap {
            formulas.push(f);
        }
    };
    // Formulas of the latest depth, kept whole even when the cap is hit.
    let mut all: Vec<Formula> = variables.iter().map(Formula::var).chain([Formula::False]).collect();
    for f in &all {
        push(f.clone(), &mut formulas, &mut full_size);
    }
    let mut newest = 0..all.len();
    for _ in 0..depth {
        let mut next = Vec::new();
        for a in &all[newest.clone()] {
            next.push(Formula::not(a.clone()));
        }
        for m in [Modality::Know, Modality::Strat, Modality::How] {
            for c in &coalitions {
                for a in &all[newest.clone()] {
                    next.push(Formula::modal(m, c.clone(), a.clone()));
                }
            }
        }
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                if newest.contains(&i) || newest.contains(&j) {
                    next.push(Formula::implies(a.clone(), b.clone()));
                }
            }
        }
        for f in &next {
            push(f.clone(), &mut formulas, &mut full_size);
        }
        let start = all.len();
        all.extend(next);
        newest = start..all.len();
        if full_size > cap.saturating_mul(64) {
            // Further depths cannot enter the pool; stop counting exactly.
            break;
        }
    }
    FormulaPool { formulas, full_size, cap }
}

/// Pool for a system: its variables (at least `p` and `q`) and agents.
pub fn pool_for(sys: &EpistemicTransitionSystem, variable_count: usize, depth: usize, cap: usize) -> FormulaPool {
    formula_pool(&variable_names(variable_count), sys.agents().names(), depth, cap)
}

/// Pool formulas grouped by extension: one representative (the first in
/// pool order) per distinct extension, with the class size. Truth of a
/// schema instance at a state depends only on the extensions of the
/// formulas substituted for its metavariables, so instantiating
/// representatives covers every pool instance.
struct Classes {
    representatives: Vec<(Formula, StateSet, usize)>,
}

fn classes<E: Semantics>(pool: &FormulaPool, ev: &mut E) -> Result<Classes, EvalError> {
    let mut index: HashMap<StateSet, usize> = HashMap::new();
    let mut representatives: Vec<(Formula, StateSet, usize)> = Vec::new();
    for f in &pool.formulas {
        let ext = ev.extension(f)?;
        match index.get(&ext) {
            Some(&i) => representatives[i].2 += 1,
            None => {
                index.insert(ext.clone(), representatives.len());
                representatives.push((f.clone(), ext, 1));
            }
        }
    }
    Ok(Classes { representatives })
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AxiomViolation {
    pub schema: AxiomName,
    pub instance: Formula,
    /// States where the instance is false.
    pub states: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RuleFailure {
    pub premise: Formula,
    pub conclusion: Formula,
    pub states: Vec<String>,
}

/// Result of sweeping one system.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SystemSweep {
    pub pool_size: usize,
    pub pool_capped: bool,
    pub classes: usize,
    /// Instances built and evaluated, per schema in `AxiomName::ALL` order.
    pub evaluated: [u64; 11],
    /// Pool-level instances the evaluated ones stand for, per schema.
    pub represented: [u128; 11],
    pub violations: Vec<AxiomViolation>,
    /// Pool formulas valid on the system (necessitation premises).
    pub valid_premises: usize,
    /// Pool formulas not valid on the system, skipped by the rule check.
    pub skipped_premises: usize,
    pub rule_conclusions: u64,
    pub rule_conclusions_represented: u128,
    pub rule_failures: Vec<RuleFailure>,
}

impl SystemSweep {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.rule_failures.is_empty()
    }
}

fn false_states(sys: &EpistemicTransitionSystem, ext: &StateSet) -> Vec<String> {
    sys.state_ids()
        .filter(|w| !ext.contains(w.index()))
        .map(|w| sys.state_name(w).to_string())
        .collect()
}

fn coalition_choices(side: SideCondition, uses_c: bool, uses_d: bool, all: &[Coalition]) -> Vec<(Option<Coalition>, Option<Coalition>)> {
    let single = |used: bool| -> Vec<Option<Coalition>> {
        if used {
            all.iter().cloned().map(Some).collect()
        } else {
            vec![None]
        }
    };
    let mut out = Vec::new();
    for c in single(uses_c) {
        for d in single(uses_d) {
            let ok = match (side, &c, &d) {
                (SideCondition::Subset, Some(c), Some(d)) => c.is_subset(d),
                (SideCondition::Disjoint, Some(c), Some(d)) => c.is_disjoint(d),
                _ => true,
            };
            if ok {
                out.push((c.clone(), d));
            }
        }
    }
    out
}

/// Instantiates all eleven schemas over the pool and every admissible
/// coalition choice and evaluates each instance at every state, using the
/// memoized evaluator.
pub fn axiom_sweep(sys: &EpistemicTransitionSystem, pool: &FormulaPool) -> Result<SystemSweep, EvalError> {
    axiom_sweep_with(sys, pool, &mut Evaluator::new(sys))
}

pub fn axiom_sweep_with<E: Semantics>(
    sys: &EpistemicTransitionSystem,
    pool: &FormulaPool,
    ev: &mut E,
) -> Result<SystemSweep, EvalError> {
    let classes = classes(pool, ev)?;
    let coalitions = Coalition::all_subsets(sys.agents().names());
    let mut out = SystemSweep {
        pool_size: pool.len(),
        pool_capped: pool.capped(),
        classes: classes.representatives.len(),
        ..SystemSweep::default()
    };
    let reps: Vec<(&Formula, u128)> =
        classes.representatives.iter().map(|(f, _, n)| (f, *n as u128)).collect();
    let none: Vec<(Option<&Formula>, u128)> = vec![(None, 1)];
    let some: Vec<(Option<&Formula>, u128)> = reps.iter().map(|&(f, n)| (Some(f), n)).collect();

    for (k, name) in AxiomName::ALL.iter().enumerate() {
        let schema = name.schema();
        let vars = schema.vars();
        let choices = coalition_choices(schema.side, vars.c, vars.d, &coalitions);
        let phis = if vars.phi { &some } else { &none };
        let psis = if vars.psi { &some } else { &none };
        for &(phi, n_phi) in phis {
            for &(psi, n_psi) in psis {
                for (c, d) in &choices {
                    let inst = Instantiation {
                        phi: phi.cloned(),
                        psi: psi.cloned(),
                        c: c.clone(),
                        d: d.clone(),
                    };
                    let f = schema.instantiate(&inst);
                    let ext = ev.extension(&f)?;
                    out.evaluated[k] += 1;
                    out.represented[k] += n_phi * n_psi;
                    if ext.count_ones(..) != sys.state_count() {
                        out.violations.push(AxiomViolation {
                            schema: *name,
                            states: false_states(sys, &ext),
                            instance: f,
                        });
                    }
                }
            }
        }
    }

    let all = sys.state_count();
    match classes.representatives.iter().find(|(_, ext, _)| ext.count_ones(..) == all) {
        Some((premise, _, n)) => {
            out.valid_premises = *n;
            out.skipped_premises = pool.len() - n;
            for m in [Modality::Know, Modality::How, Modality::Strat] {
                for c in &coalitions {
                    let conclusion = Formula::modal(m, c.clone(), premise.clone());
                    let ext = ev.extension(&conclusion)?;
                    out.rule_conclusions += 1;
                    out.rule_conclusions_represented += *n as u128;
                    if ext.count_ones(..) != all {
                        out.rule_failures.push(RuleFailure {
                            premise: premise.clone(),
                            states: false_states(sys, &ext),
                            conclusion,
                        });
                    }
                }
            }
        }
        None => out.skipped_premises = pool.len(),
    }
    out.violations.sort();
    out.rule_failures.sort();
    Ok(out)
}

/// Checks that `K{C}`, `H{C}` and `S{C}` of every valid pool formula are
/// valid, for every coalition. Formulas not valid on `sys` are skipped.
pub fn rule_preservation_check(
    sys: &EpistemicTransitionSystem,
    pool: &FormulaPool,
) -> Result<SystemSweep, EvalError> {
    let mut ev = Evaluator::new(sys);
    let all = sys.state_count();
    let coalitions = Coalition::all_subsets(sys.agents().names());
    let mut out = SystemSweep { pool_size: pool.len(), pool_capped: pool.capped(), ..SystemSweep::default() };
    for premise in &pool.formulas {
        if ev.extension(premise)?.count_ones(..) != all {
            out.skipped_premises += 1;
            continue;
        }
        out.valid_premises += 1;
        for m in [Modality::Know, Modality::How, Modality::Strat] {
            for c in &coalitions {
                let conclusion = Formula::modal(m, c.clone(), premise.clone());
                let ext = ev.extension(&conclusion)?;
                out.rule_conclusions += 1;
                out.rule_conclusions_represented += 1;
                if ext.count_ones(..) != all {
                    out.rule_failures.push(RuleFailure {
                        premise: premise.clone(),
                        states: false_states(sys, &ext),
                        conclusion,
                    });
                }
            }
        }
    }
    out.rule_failures.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub seed: u64,
    pub count: usize,
    pub depth: usize,
    pub pool_cap: usize,
    /// Bounds for generated systems; the seed field is ignored.
    pub params: GenParams,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { seed: 1, count: 500, depth: 2, pool_cap: POOL_CAP, params: GenParams::default() }
    }
}

/// Aggregate over many generated systems. System `i` uses seed `seed + i`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepReport {
    pub seed: u64,
    pub count: usize,
    pub depth: usize,
    pub pool_cap: usize,
    pub valid_systems: usize,
    pub invalid_seeds: Vec<u64>,
    pub largest_pool: usize,
    pub capped_pools: usize,
    pub classes: usize,
    pub evaluated: [u64; 11],
    pub represented: [u128; 11],
    pub valid_premises: usize,
    pub skipped_premises: usize,
    pub rule_conclusions: u64,
    pub rule_conclusions_represented: u128,
    pub violations: Vec<(u64, AxiomViolation)>,
    pub rule_failures: Vec<(u64, RuleFailure)>,
    pub elapsed: Duration,
}

impl SweepReport {
    pub fn is_clean(&self) -> bool {
        self.invalid_seeds.is_empty() && self.violations.is_empty() && self.rule_failures.is_empty()
    }

    pub fn add(&mut self, seed: u64, s: SystemSweep) {
        self.largest_pool = self.largest_pool.max(s.pool_size);
        self.capped_pools += usize::from(s.pool_capped);
        self.classes += s.classes;
        for k in 0..11 {
            self.evaluated[k] += s.evaluated[k];
            self.represented[k] += s.represented[k];
        }
        self.valid_premises += s.valid_premises;
        self.skipped_premises += s.skipped_premises;
        self.rule_conclusions += s.rule_conclusions;
        self.rule_conclusions_represented += s.rule_conclusions_represented;
        self.violations.extend(s.violations.into_iter().map(|v| (seed, v)));
        self.rule_failures.extend(s.rule_failures.into_iter().map(|v| (seed, v)));
        self.violations.sort();
        self.rule_failures.sort();
    }

    /// Line-delimited `key=value` summary.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: &dyn fmt::Display| {
            let _ = writeln!(out, "{k}={v}");
        };
        kv("seed", &self.seed);
        kv("count", &self.count);
        kv("depth", &self.depth);
        kv("pool_cap", &self.pool_cap);
        kv("systems_valid", &self.valid_systems);
        kv("largest_pool", &self.largest_pool);
        kv("capped_pools", &self.capped_pools);
        kv("extension_classes", &self.classes);
        kv("axiom_instances", &self.evaluated.iter().sum::<u64>());
        kv("axiom_instances_represented", &self.represented.iter().sum::<u128>());
        for (k, name) in AxiomName::ALL.iter().enumerate() {
            kv(&format!("instances.{name}"), &self.evaluated[k]);
        }
        kv("rule_premises_valid", &self.valid_premises);
        kv("rule_premises_skipped", &self.skipped_premises);
        kv("rule_conclusions", &self.rule_conclusions);
        kv("rule_conclusions_represented", &self.rule_conclusions_represented);
        kv("violations", &self.violations.len());
        kv("rule_failures", &self.rule_failures.len());
        for s in &self.invalid_seeds {
            kv("invalid_seed", s);
        }
        for (seed, v) in &self.violations {
            kv("violation", &format_args!("{seed} {} {} @ {}", v.schema, v.instance, v.states.join(",")));
        }
        for (seed, r) in &self.rule_failures {
            kv("rule_failure", &format_args!("{seed} {} @ {}", r.conclusion, r.states.join(",")));
        }
        out
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.seed.wrapping_add(self.count.saturating_sub(1) as u64);
        writeln!(f, "sweep: {} systems, seeds {}..={}, pool depth {}", self.count, self.seed, last, self.depth)?;
        writeln!(f, "valid systems: {}/{}", self.valid_systems, self.count)?;
        writeln!(
            f,
            "formula pool: up to {} formulas (cap {}, reached on {} systems)",
            self.largest_pool, self.pool_cap, self.capped_pools
        )?;
        writeln!(
            f,
            "axiom instances: {} evaluated, standing for {} pool instances",
            self.evaluated.iter().sum::<u64>(),
            self.represented.iter().sum::<u128>()
        )?;
        for (k, name) in AxiomName::ALL.iter().enumerate() {
            writeln!(f, "  {:<34} {:>8} ({})", name.as_str(), self.evaluated[k], self.represented[k])?;
        }
        writeln!(
            f,
            "necessitation: {} valid premises, {} skipped, {} conclusions checked",
            self.valid_premises, self.skipped_premises, self.rule_conclusions_represented
        )?;
        writeln!(f, "violations: {}", self.violations.len())?;
        for (seed, v) in &self.violations {
            writeln!(f, "  seed {seed}: {} `{}` false at {}", v.schema, v.instance, v.states.join(", "))?;
        }
        writeln!(f, "rule failures: {}", self.rule_failures.len())?;
        for (seed, r) in &self.rule_failures {
            writeln!(f, "  seed {seed}: `{}` valid but `{}` false at {}", r.premise, r.conclusion, r.states.join(", "))?;
        }
        for s in &self.invalid_seeds {
            writeln!(f, "  seed {s}: generated system failed validation")?;
        }
        Ok(())
    }
}

/// Generates `config.count` systems and sweeps each one.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport, EvalError> {
    let start = Instant::now();
    let mut report = SweepReport {
        seed: config.seed,
        count: config.count,
        depth: config.depth,
        pool_cap: config.pool_cap,
        ..SweepReport::default()
    };
    let mut pools: HashMap<Vec<String>, FormulaPool> = HashMap::new();
    for i in 0..config.count {
        let seed = config.seed.wrapping_add(i as u64);
        let sys = random_system(&config.params.with_seed(seed));
        if !sys.validate().is_ok() {
            report.invalid_seeds.push(seed);
            continue;
        }
        report.valid_systems += 1;
        let pool = pools.entry(sys.agents().names().to_vec()).or_insert_with(|| {
            pool_for(&sys, config.params.variable_count, config.depth, config.pool_cap)
        });
        report.add(seed, axiom_sweep(&sys, pool)?);
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::semantics::NaiveEvaluator;

    fn small() -> GenParams {
        GenParams { max_states: 3, max_agents: 2, max_votes: 2, ..GenParams::default() }
    }

    #[test]
    fn generated_systems_are_valid_and_deterministic() {
        let sys = random_system(&small());
        assert!(sys.validate().is_ok());
        assert_eq!(sys, random_system(&small()));
        for seed in 0..500 {
            assert!(random_system(&GenParams::default().with_seed(seed)).validate().is_ok());
        }
    }

    #[test]
    fn params_are_checked() {
        assert!(GenParams { max_states: 0, ..GenParams::default() }.check().is_err());
        assert!(GenParams { transition_density: 0.0, ..GenParams::default() }.check().is_err());
        assert!(GenParams { transition_density: 1.0, ..GenParams::default() }.check().is_ok());
    }

    #[test]
    fn pool_sizes() {
        let vars = variable_names(2);
        let one = formula_pool(&vars, &agent_names(1), 1, POOL_CAP);
        // 3 atoms, 3 negations, 3 modalities x 2 coalitions x 3, 9 implications
        assert_eq!(one.len(), 3 + 3 + 18 + 9);
        assert!(!one.capped());
        let three = formula_pool(&vars, &agent_names(3), 2, POOL_CAP);
        assert_eq!(three.len(), POOL_CAP);
        assert!(three.capped());
        assert_eq!(three.full_size, 87 + 84 + 24 * 84 + (87 * 87 - 9));
        let mut sorted = three.formulas.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), three.len());
    }

    #[test]
    fn bundled_systems_have_no_violations_at_depth_one() {
        for name in corpus::SYSTEMS {
            let sys = corpus::system(name).unwrap();
            let pool = pool_for(&sys, 2, 1, POOL_CAP);
            let s = axiom_sweep(&sys, &pool).unwrap();
            assert!(s.is_clean(), "{name}: {:?}", s.violations.first());
            assert!(s.evaluated.iter().all(|&n| n > 0));
        }
    }

    #[test]
    fn oracle_sweep_agrees() {
        let sys = corpus::system("t5").unwrap();
        let pool = pool_for(&sys, 2, 1, POOL_CAP);
        let a = axiom_sweep(&sys, &pool).unwrap();
        let b = axiom_sweep_with(&sys, &pool, &mut NaiveEvaluator::new(&sys)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rule_check_counts() {
        let sys = corpus::system("t1").unwrap();
        let pool = FormulaPool {
            formulas: vec![crate::parse_formula("p -> p").unwrap(), crate::parse_formula("p").unwrap()],
            full_size: 2,
            cap: POOL_CAP,
        };
        let r = rule_preservation_check(&sys, &pool).unwrap();
        assert_eq!((r.valid_premises, r.skipped_premises), (1, 1));
        assert_eq!(r.rule_conclusions, 3 * 2);
        assert!(r.rule_failures.is_empty());
    }

    #[test]
    fn small_sweep_is_clean_and_reported() {
        let config = SweepConfig { count: 5, ..SweepConfig::default() };
        let r = run_sweep(&config).unwrap();
        assert!(r.is_clean(), "{r}");
        let summary = r.summary();
        assert!(summary.contains("violations=0\n"));
        assert!(summary.contains("systems_valid=5\n"));
        assert_eq!(r.to_string(), run_sweep(&config).unwrap().to_string());
    }
}
