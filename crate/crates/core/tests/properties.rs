mod common;

use common::*;
use proptest::prelude::*;

use knowhow::model::Coalition;
use knowhow::semantics::{eval, eval_naive};

proptest! {
    #![proptest_config(config())]

    #[test]
    fn how_implies_strat(case in cases()) {
        strategic_truth(&case)?;
    }

    #[test]
    fn how_is_constant_on_indistinguishability_classes(case in cases()) {
        strategic_introspection(&case)?;
    }

    #[test]
    fn larger_coalitions_can_do_more(case in cases()) {
        coalition_monotonicity(&case)?;
    }

    #[test]
    fn empty_coalition_knowledge_gives_know_how(case in cases()) {
        empty_coalition_bridge(&case)?;
    }

    #[test]
    fn extending_a_profile_shrinks_outcomes(case in cases(), seed in any::<u64>()) {
        outcome_monotonicity(&case, seed)?;
    }

    #[test]
    fn outcomes_are_never_empty(case in cases(), seed in any::<u64>()) {
        outcomes_nonempty(&case, seed)?;
    }

    #[test]
    fn indistinguishability_is_antimonotone(case in cases()) {
        indist_anti_monotonicity(&case)?;
    }

    #[test]
    fn lowering_preserves_meaning(case in cases()) {
        lowering_equivalence(&case)?;
    }

    #[test]
    fn print_then_parse_is_identity(f in formulas()) {
        round_trip(&f)?;
    }

    #[test]
    fn memoized_and_naive_agree(case in cases()) {
        let a = eval(&case.sys, case.w, &case.phi).unwrap();
        let b = eval_naive(&case.sys, case.w, &case.phi).unwrap();
        prop_assert_eq!(a, b, "{}", case.phi);
    }

    #[test]
    fn profile_enumeration_is_deterministic(case in cases()) {
        let members = case.sys.members(&case.d).unwrap();
        let first = case.sys.enumerate_profiles(&members);
        prop_assert_eq!(&first, &case.sys.enumerate_profiles(&members));
        let expected = case.sys.votes().len().pow(members.len() as u32);
        prop_assert_eq!(first.len(), expected);
        prop_assert!(first.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn nontermination_holds_everywhere(case in cases()) {
        for c in Coalition::all_subsets(case.sys.agents().names()) {
            let f = knowhow::Formula::not(knowhow::Formula::strat(c, knowhow::Formula::False));
            prop_assert!(knowhow::holds_everywhere(&case.sys, &f).unwrap());
        }
    }
}
