//! Model checking and proof checking for a trimodal logic of distributed
//! knowledge (`K{C}`), coalition strategies (`S{C}`) and coalition know-how
//! (`H{C}`) over epistemic transition systems.
//!
//! ```
//! use knowhow::{corpus, eval, find_witness, parse_formula};
//!
//! let sys = corpus::system("t2")?;
//! let u = sys.state("u")?;
//! let f = parse_formula("H{a} p")?;
//! assert!(eval(&sys, u, &f)?);
//! let s = find_witness(&sys, u, &f)?.unwrap();
//! assert_eq!(s.display(&sys).to_string(), "a=L");
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod cli;
pub mod corpus;
pub mod error;
pub mod formula;
pub mod model;
pub mod proofkit;
pub mod semantics;
pub mod testgen;

pub use error::ParseError;
pub use formula::{lower_derived, parse_formula, print_formula, Formula, Modality};
pub use model::{
    parse_system, Coalition, EpistemicTransitionSystem, StateId, StrategyProfile,
};
pub use semantics::{eval, eval_naive, find_witness, holds_everywhere};
