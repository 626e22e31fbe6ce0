//! The bundled corpus: systems T1-T8 with their claims files, and the proof
//! scripts with their lemma registry. Everything is embedded in the binary.

use crate::error::ParseError;
use crate::model::{parse_system, EpistemicTransitionSystem};

/// Bundled system names, in order.
pub const SYSTEMS: [&str; 8] = ["t1", "t2", "t3", "t4", "t5", "t6", "t7", "t8"];

/// Path of the bundled lemma registry.
pub const REGISTRY: &str = "proofs/lemmas.reg";

/// Every bundled file as `(relative path, contents)`.
pub const FILES: &[(&str, &str)] = &[
    ("examples/t1.claims", include_str!("../corpus/examples/t1.claims")),
    ("examples/t1.ets", include_str!("../corpus/examples/t1.ets")),
    ("examples/t2.claims", include_str!("../corpus/examples/t2.claims")),
    ("examples/t2.ets", include_str!("../corpus/examples/t2.ets")),
    ("examples/t3.claims", include_str!("../corpus/examples/t3.claims")),
    ("examples/t3.ets", include_str!("../corpus/examples/t3.ets")),
    ("examples/t4.claims", include_str!("../corpus/examples/t4.claims")),
    ("examples/t4.ets", include_str!("../corpus/examples/t4.ets")),
    ("examples/t5.claims", include_str!("../corpus/examples/t5.claims")),
    ("examples/t5.ets", include_str!("../corpus/examples/t5.ets")),
    ("examples/t6.claims", include_str!("../corpus/examples/t6.claims")),
    ("examples/t6.ets", include_str!("../corpus/examples/t6.ets")),
    ("examples/t7.claims", include_str!("../corpus/examples/t7.claims")),
    ("examples/t7.ets", include_str!("../corpus/examples/t7.ets")),
    ("examples/t8.claims", include_str!("../corpus/examples/t8.claims")),
    ("examples/t8.ets", include_str!("../corpus/examples/t8.ets")),
    ("proofs/how_implies_know_strat.prf", include_str!("../corpus/proofs/how_implies_know_strat.prf")),
    ("proofs/how_implies_know_strat_ab.prf", include_str!("../corpus/proofs/how_implies_know_strat_ab.prf")),
    ("proofs/how_implies_know_strat_empty.prf", include_str!("../corpus/proofs/how_implies_know_strat_empty.prf")),
    ("proofs/lemmas.reg", include_str!("../corpus/proofs/lemmas.reg")),
    ("proofs/monotonicity_H.prf", include_str!("../corpus/proofs/monotonicity_H.prf")),
    ("proofs/monotonicity_H_empty.prf", include_str!("../corpus/proofs/monotonicity_H_empty.prf")),
    ("proofs/monotonicity_S.prf", include_str!("../corpus/proofs/monotonicity_S.prf")),
    ("proofs/monotonicity_S_empty.prf", include_str!("../corpus/proofs/monotonicity_S_empty.prf")),
    ("proofs/positive_introspection.prf", include_str!("../corpus/proofs/positive_introspection.prf")),
    ("proofs/positive_introspection_ab.prf", include_str!("../corpus/proofs/positive_introspection_ab.prf")),
    ("proofs/positive_introspection_empty.prf", include_str!("../corpus/proofs/positive_introspection_empty.prf")),
    ("proofs/s_necessitation.prf", include_str!("../corpus/proofs/s_necessitation.prf")),
    ("proofs/strategic_positive_introspection.prf", include_str!("../corpus/proofs/strategic_positive_introspection.prf")),
    ("proofs/strategic_positive_introspection_ab.prf", include_str!("../corpus/proofs/strategic_positive_introspection_ab.prf")),
    ("proofs/strategic_positive_introspection_empty.prf", include_str!("../corpus/proofs/strategic_positive_introspection_empty.prf")),
];

/// Contents of a bundled file by relative path, e.g. `examples/t1.ets`.
pub fn file(path: &str) -> Option<&'static str> {
    let path = path.strip_prefix("./").unwrap_or(path);
    FILES.iter().find(|(p, _)| *p == path).map(|(_, text)| *text)
}

/// Loads bundled system `name` (`t1` ... `t8`).
pub fn system(name: &str) -> Result<EpistemicTransitionSystem, ParseError> {
    let text = file(&format!("examples/{name}.ets"))
        .ok_or_else(|| ParseError::new(format!("no bundled system `{name}`")))?;
    parse_system(text)
}

/// Claims file paired with bundled system `name`.
pub fn claims(name: &str) -> Option<&'static str> {
    file(&format!("examples/{name}.claims"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_system_has_claims_and_validates() {
        for name in SYSTEMS {
            let sys = system(name).unwrap();
            assert!(sys.validate().is_ok(), "{name}: {:?}", sys.validate());
            assert!(claims(name).is_some(), "{name}");
        }
    }

    #[test]
    fn lookup_accepts_dot_prefix() {
        assert!(file("./examples/t1.ets").is_some());
        assert!(file("examples/t9.ets").is_none());
    }
}
