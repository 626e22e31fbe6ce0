//! Single-line perturbations of proof scripts that break a justification.

use knowhow::formula::Formula;
use knowhow::model::Coalition;
use knowhow::proofkit::{AxiomName, Justification, Proof};

#[derive(Debug, Clone)]
pub struct Mutation {
    pub script: String,
    pub line: usize,
    pub kind: &'static str,
    pub proof: Proof,
}

fn other_coalition(c: &Coalition) -> Coalition {
    c.union(&Coalition::new(["z"]))
}

fn next_axiom(a: AxiomName) -> AxiomName {
    let i = AxiomName::ALL.iter().position(|&x| x == a).unwrap();
    AxiomName::ALL[(i + 1) % AxiomName::ALL.len()]
}

/// Every mutation is expected to be rejected at its own line.
pub fn mutations(script: &str, proof: &Proof) -> Vec<Mutation> {
    let mut out = Vec::new();
    for (k, line) in proof.lines.iter().enumerate() {
        let n = line.number;
        let mut push = |kind: &'static str, edit: &dyn Fn(&mut knowhow::proofkit::ProofLine)| {
            let mut p = proof.clone();
            edit(&mut p.lines[k]);
            out.push(Mutation { script: script.to_string(), line: n, kind, proof: p });
        };
        match line.justification.clone() {
            Justification::Mp(i, j) => {
                push("mp premises swapped", &|l| l.justification = Justification::Mp(j, i));
                push("mp major premise points at itself", &|l| l.justification = Justification::Mp(i, n));
                if i > 1 {
                    push("mp minor premise shifted", &|l| l.justification = Justification::Mp(i - 1, j));
                }
            }
            Justification::Axiom(a) => {
                push("axiom renamed", &|l| l.justification = Justification::Axiom(next_axiom(a)));
                push("axiom formula negated", &|l| l.formula = Formula::not(l.formula.clone()));
            }
            Justification::Taut => {
                push("tautology negated", &|l| l.formula = Formula::not(l.formula.clone()));
            }
            Justification::Lemma(_) => {
                push("lemma formula negated", &|l| l.formula = Formula::not(l.formula.clone()));
                push("lemma unknown", &|l| l.justification = Justification::Lemma("no_such_lemma".into()));
            }
            Justification::NecK(c, i) => {
                push("nec-k coalition changed", &|l| l.justification = Justification::NecK(other_coalition(&c), i));
                push("nec-k read as nec-h", &|l| l.justification = Justification::NecH(c.clone(), i));
            }
            Justification::NecH(c, i) => {
                push("nec-h coalition changed", &|l| l.justification = Justification::NecH(other_coalition(&c), i));
                push("nec-h read as nec-k", &|l| l.justification = Justification::NecK(c.clone(), i));
            }
            Justification::NecS(c, i) => {
                push("nec-s coalition changed", &|l| l.justification = Justification::NecS(other_coalition(&c), i));
                push("nec-s read as nec-h", &|l| l.justification = Justification::NecH(c.clone(), i));
            }
            Justification::Premise(k) => {
                push("premise index shifted", &|l| l.justification = Justification::Premise(k + 1));
            }
        }
    }
    out
}
