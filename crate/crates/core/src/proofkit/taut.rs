//! Propositional tautology checking. Variables and maximal modal subformulas
//! are treated as atoms; validity is decided by truth table.

use thiserror::Error;

use crate::formula::Formula;

pub const MAX_ATOMS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("formula has {0} propositional atoms; the truth-table check supports at most {MAX_ATOMS}")]
pub struct TooManyAtoms(pub usize);

enum Prop {
    Atom(usize),
    Const(bool),
    Not(Box<Prop>),
    Implies(Box<Prop>, Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
}

impl Prop {
    fn eval(&self, row: u32) -> bool {
        match self {
            Prop::Atom(i) => row & (1 << i) != 0,
            Prop::Const(b) => *b,
            Prop::Not(a) => !a.eval(row),
            Prop::Implies(a, b) => !a.eval(row) || b.eval(row),
            Prop::And(a, b) => a.eval(row) && b.eval(row),
            Prop::Or(a, b) => a.eval(row) || b.eval(row),
        }
    }
}

fn abstract_atoms<'f>(f: &'f Formula, atoms: &mut Vec<&'f Formula>) -> Prop {
    let mut atom = |f: &'f Formula| {
        let i = atoms.iter().position(|a| *a == f).unwrap_or_else(|| {
            atoms.push(f);
            atoms.len() - 1
        });
        Prop::Atom(i)
    };
    match f {
        Formula::Var(_) | Formula::Modal(..) => atom(f),
        Formula::True => Prop::Const(true),
        Formula::False => Prop::Const(false),
        Formula::Not(a) => Prop::Not(Box::new(abstract_atoms(a, atoms))),
        Formula::Implies(a, b) => {
            let a = abstract_atoms(a, atoms);
            Prop::Implies(Box::new(a), Box::new(abstract_atoms(b, atoms)))
        }
        Formula::And(a, b) => {
            let a = abstract_atoms(a, atoms);
            Prop::And(Box::new(a), Box::new(abstract_atoms(b, atoms)))
        }
        Formula::Or(a, b) => {
            let a = abstract_atoms(a, atoms);
            Prop::Or(Box::new(a), Box::new(abstract_atoms(b, atoms)))
        }
    }
}

/// True iff `f` is true under every assignment to its atoms.
pub fn is_tautology(f: &Formula) -> Result<bool, TooManyAtoms> {
    let mut atoms = Vec::new();
    let prop = abstract_atoms(f, &mut atoms);
    if atoms.len() > MAX_ATOMS {
        return Err(TooManyAtoms(atoms.len()));
    }
    Ok((0..1u32 << atoms.len()).all(|row| prop.eval(row)))
}
