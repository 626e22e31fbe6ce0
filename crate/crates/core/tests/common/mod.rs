//! Strategies and invariant checks shared by the property suites and the
//! acceptance run.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use knowhow::formula::{lower_derived, parse_formula, Formula, Modality};
use knowhow::model::{Coalition, EpistemicTransitionSystem, StateId, StrategyProfile};
use knowhow::semantics::{Evaluator, Semantics};
use knowhow::testgen::{random_formula, random_system, GenParams};

pub const CASES: u32 = 256;

pub fn config() -> ProptestConfig {
    ProptestConfig { cases: CASES, failure_persistence: None, ..ProptestConfig::default() }
}

/// A random system with a state, a formula and two coalitions C ⊆ D over
/// its agents, all derived from two seeds.
#[derive(Debug, Clone)]
pub struct Case {
    pub sys: EpistemicTransitionSystem,
    pub w: StateId,
    pub phi: Formula,
    pub c: Coalition,
    pub d: Coalition,
}

pub fn case(sys_seed: u64, seed: u64) -> Case {
    let sys = random_system(&GenParams::default().with_seed(sys_seed));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = StateId(rng.gen_range(0..sys.state_count()) as u32);
    let agents = sys.agents().names().to_vec();
    let phi = random_formula(&mut rng, 2, &["p".to_string(), "q".to_string()], &agents);
    let d = Coalition::new(agents.iter().filter(|_| rng.gen_bool(0.6)));
    let c = Coalition::new(d.agents().iter().filter(|_| rng.gen_bool(0.5)));
    Case { sys, w, phi, c, d }
}

pub fn cases() -> impl Strategy<Value = Case> {
    (any::<u64>(), any::<u64>()).prop_map(|(a, b)| case(a, b))
}

fn ev(case: &Case, w: StateId, f: &Formula) -> Result<bool, TestCaseError> {
    Evaluator::new(&case.sys)
        .eval(w, f)
        .map_err(|e| TestCaseError::fail(e.to_string()))
}

fn class(case: &Case, c: &Coalition, w: StateId) -> Vec<StateId> {
    let members = case.sys.members(c).unwrap();
    case.sys.indist_class(&members, w).ones().map(|i| StateId(i as u32)).collect()
}

pub fn strategic_truth(case: &Case) -> Result<(), TestCaseError> {
    let h = Formula::how(case.c.clone(), case.phi.clone());
    let s = Formula::strat(case.c.clone(), case.phi.clone());
    if ev(case, case.w, &h)? {
        prop_assert!(ev(case, case.w, &s)?, "H holds but S fails: {}", h);
    }
    Ok(())
}

/// The verdict of `H{C} phi` is constant on each ∼_C class, which covers
/// both positive and negative strategic introspection.
pub fn strategic_introspection(case: &Case) -> Result<(), TestCaseError> {
    let h = Formula::how(case.c.clone(), case.phi.clone());
    let here = ev(case, case.w, &h)?;
    for u in class(case, &case.c, case.w) {
        prop_assert_eq!(ev(case, u, &h)?, here, "{} differs between {:?} and {:?}", h, case.w, u);
    }
    Ok(())
}

pub fn coalition_monotonicity(case: &Case) -> Result<(), TestCaseError> {
    for m in [Modality::Strat, Modality::How] {
        let small = Formula::modal(m, case.c.clone(), case.phi.clone());
        let large = Formula::modal(m, case.d.clone(), case.phi.clone());
        if ev(case, case.w, &small)? {
            prop_assert!(ev(case, case.w, &large)?, "{} holds but {} fails", small, large);
        }
    }
    Ok(())
}

pub fn empty_coalition_bridge(case: &Case) -> Result<(), TestCaseError> {
    let k = Formula::know(Coalition::empty(), case.phi.clone());
    let h = Formula::how(Coalition::empty(), case.phi.clone());
    if ev(case, case.w, &k)? {
        prop_assert!(ev(case, case.w, &h)?, "{} holds but {} fails", k, h);
    }
    Ok(())
}

fn random_profile(sys: &EpistemicTransitionSystem, c: &Coalition, seed: u64) -> StrategyProfile {
    let members = sys.members(c).unwrap();
    let all = sys.enumerate_profiles(&members);
    all[(seed % all.len() as u64) as usize].clone()
}

/// Extending a profile to more agents can only shrink the outcome set.
pub fn outcome_monotonicity(case: &Case, seed: u64) -> Result<(), TestCaseError> {
    let s = random_profile(&case.sys, &case.c, seed);
    let members = case.sys.members(&case.d).unwrap();
    for t in case.sys.enumerate_profiles(&members) {
        if t.extends(&s) {
            let small = case.sys.outcomes(case.w, &t);
            let large = case.sys.outcomes(case.w, &s);
            prop_assert!(small.is_subset(&large));
        }
    }
    Ok(())
}

pub fn outcomes_nonempty(case: &Case, seed: u64) -> Result<(), TestCaseError> {
    let s = random_profile(&case.sys, &case.c, seed);
    prop_assert!(case.sys.outcomes(case.w, &s).count_ones(..) > 0);
    Ok(())
}

/// `∼_D ⊆ ∼_C` for C ⊆ D, and each `∼_C` is an equivalence relation.
pub fn indist_anti_monotonicity(case: &Case) -> Result<(), TestCaseError> {
    let sys = &case.sys;
    let (c, d) = (sys.members(&case.c).unwrap(), sys.members(&case.d).unwrap());
    let states: Vec<StateId> = sys.state_ids().collect();
    for &x in &states {
        prop_assert!(sys.indist(&c, x, x));
        for &y in &states {
            if sys.indist(&d, x, y) {
                prop_assert!(sys.indist(&c, x, y));
            }
            prop_assert_eq!(sys.indist(&c, x, y), sys.indist(&c, y, x));
            for &z in &states {
                if sys.indist(&c, x, y) && sys.indist(&c, y, z) {
                    prop_assert!(sys.indist(&c, x, z));
                }
            }
        }
    }
    Ok(())
}

pub fn lowering_equivalence(case: &Case) -> Result<(), TestCaseError> {
    let mut e = Evaluator::new(&case.sys);
    let a = e.extension(&case.phi).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let b = e.extension(&lower_derived(&case.phi)).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(a, b, "{}", case.phi);
    Ok(())
}

fn var_name() -> impl Strategy<Value = String> {
    "[a-zA-Z][a-zA-Z0-9_]{0,3}".prop_filter("reserved", |s| s != "true" && s != "false")
}

fn coalition() -> impl Strategy<Value = Coalition> {
    proptest::sample::subsequence(vec!["a", "b", "c", "ag_2"], 0..=4).prop_map(Coalition::new)
}

/// Arbitrary formulas, including derived connectives.
pub fn formulas() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        4 => var_name().prop_map(Formula::var),
        1 => Just(Formula::True),
        1 => Just(Formula::False),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        let modality = prop_oneof![Just(Modality::Know), Just(Modality::Strat), Just(Modality::How)];
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (modality, coalition(), inner).prop_map(|(m, c, a)| Formula::modal(m, c, a)),
        ]
    })
}

pub fn round_trip(f: &Formula) -> Result<(), TestCaseError> {
    let printed = f.to_string();
    let back = parse_formula(&printed).map_err(|e| TestCaseError::fail(format!("{printed}: {e}")))?;
    prop_assert_eq!(&back, f, "{}", printed);
    Ok(())
}

pub mod mutations;
