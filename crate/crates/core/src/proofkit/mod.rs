//! Hilbert-style proof checking: axiom-schema matching with side conditions,
//! tautology checking over modal atoms, rule application, and the bundled
//! derivations.

mod axioms;
mod check;
mod script;
mod taut;

pub use axioms::{match_axiom, AxiomName, AxiomSchema, Instantiation, SchemaVars, SideCondition, UnknownSchema};
pub use check::{
    bundled_derivations, bundled_registry, check_proof, expand_macros, parse_registry, Lemma,
    LemmaRegistry, ProofError, Rejection, Verdict,
};
pub use script::{parse_proof, Justification, Proof, ProofLine};
pub use taut::{is_tautology, TooManyAtoms, MAX_ATOMS};
