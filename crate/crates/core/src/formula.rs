//! Formulas of the trimodal language: propositional variables, `!`, `->`,
//! derived `&`, `|`, `true`, primitive `false`, and the coalition modalities
//! `K{C}` (distributed knowledge), `S{C}` (strategy) and `H{C}` (know-how).
//!
//! Concrete syntax, loosest to tightest:
//!
//! ```text
//! formula := or ( "->" formula )?            right associative
//! or      := and ( "|" and )*                left associative
//! and     := unary ( "&" unary )*            left associative
//! unary   := "!" unary | MODAL coalition unary | atom
//! MODAL   := "K" | "S" | "H"                 immediately followed by "{"
//! coalition := "{" ( IDENT ( ("," | " ") IDENT )* )? "}"
//! atom    := IDENT | "true" | "false" | "(" formula ")"
//! ```

use std::collections::BTreeSet;
use std::fmt;

use crate::error::ParseError;
use crate::model::Coalition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Modality {
    /// Distributed knowledge.
    Know,
    /// Existence of a strategy.
    Strat,
    /// Existence of a know-how strategy.
    How,
}

impl Modality {
    pub fn letter(self) -> char {
        match self {
            Modality::Know => 'K',
            Modality::Strat => 'S',
            Modality::How => 'H',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Var(String),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    True,
    False,
    Modal(Modality, Coalition, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Formula::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn know(c: Coalition, f: Formula) -> Self {
        Formula::Modal(Modality::Know, c, Box::new(f))
    }

    pub fn strat(c: Coalition, f: Formula) -> Self {
        Formula::Modal(Modality::Strat, c, Box::new(f))
    }

    pub fn how(c: Coalition, f: Formula) -> Self {
        Formula::Modal(Modality::How, c, Box::new(f))
    }

    pub fn modal(m: Modality, c: Coalition, f: Formula) -> Self {
        Formula::Modal(m, c, Box::new(f))
    }

    /// True if the formula only uses `Var`, `Not`, `Implies`, `False` and modalities.
    pub fn is_core(&self) -> bool {
        match self {
            Formula::Var(_) | Formula::False => true,
            Formula::True | Formula::And(..) | Formula::Or(..) => false,
            Formula::Not(a) | Formula::Modal(_, _, a) => a.is_core(),
            Formula::Implies(a, b) => a.is_core() && b.is_core(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::True | Formula::False => 0,
            Formula::Not(a) | Formula::Modal(_, _, a) => 1 + a.depth(),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Var(v) = f {
                out.insert(v.clone());
            }
        });
        out
    }

    /// Coalitions of all modal subformulas, as a set.
    pub fn coalitions(&self) -> BTreeSet<(Modality, Coalition)> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Modal(m, c, _) = f {
                out.insert((*m, c.clone()));
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Var(_) | Formula::True | Formula::False => {}
            Formula::Not(a) | Formula::Modal(_, _, a) => a.visit(f),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }
}

/// Rewrites `&`, `|` and `true` into the core fragment.
pub fn lower_derived(f: &Formula) -> Formula {
    match f {
        Formula::Var(_) | Formula::False => f.clone(),
        Formula::True => Formula::implies(Formula::False, Formula::False),
        Formula::Not(a) => Formula::not(lower_derived(a)),
        Formula::Implies(a, b) => Formula::implies(lower_derived(a), lower_derived(b)),
        Formula::And(a, b) => Formula::not(Formula::implies(
            lower_derived(a),
            Formula::not(lower_derived(b)),
        )),
        Formula::Or(a, b) => Formula::implies(Formula::not(lower_derived(a)), lower_derived(b)),
        Formula::Modal(m, c, a) => Formula::modal(*m, c.clone(), lower_derived(a)),
    }
}

// Binding strength used by the printer.
const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;

fn write_formula(f: &Formula, ctx: u8, out: &mut String) {
    let (prec, parts): (u8, _) = match f {
        Formula::Var(v) => {
            out.push_str(v);
            return;
        }
        Formula::True => {
            out.push_str("true");
            return;
        }
        Formula::False => {
            out.push_str("false");
            return;
        }
        Formula::Not(a) => {
            out.push('!');
            write_formula(a, UNARY, out);
            return;
        }
        Formula::Modal(m, c, a) => {
            out.push(m.letter());
            out.push_str(&c.to_string());
            out.push(' ');
            write_formula(a, UNARY, out);
            return;
        }
        Formula::Implies(a, b) => (IMPLIES, (a, " -> ", b, OR, IMPLIES)),
        Formula::Or(a, b) => (OR, (a, " | ", b, OR, AND)),
        Formula::And(a, b) => (AND, (a, " & ", b, AND, UNARY)),
    };
    let (lhs, op, rhs, lctx, rctx) = parts;
    let paren = ctx > prec;
    if paren {
        out.push('(');
    }
    write_formula(lhs, lctx, out);
    out.push_str(op);
    write_formula(rhs, rctx, out);
    if paren {
        out.push(')');
    }
}

/// Prints with the fewest parentheses that parse back to the same tree.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, IMPLIES, &mut out);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Modal(Modality),
    Coalition(Coalition),
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
}

fn describe(t: Option<&(Tok, usize)>) -> String {
    match t {
        None => "end of input".to_string(),
        Some((Tok::Ident(s), _)) => format!("`{s}`"),
        Some((Tok::Modal(m), _)) => format!("`{}`", m.letter()),
        Some((Tok::Coalition(c), _)) => format!("`{c}`"),
        Some((Tok::Not, _)) => "`!`".into(),
        Some((Tok::And, _)) => "`&`".into(),
        Some((Tok::Or, _)) => "`|`".into(),
        Some((Tok::Arrow, _)) => "`->`".into(),
        Some((Tok::LParen, _)) => "`(`".into(),
        Some((Tok::RParen, _)) => "`)`".into(),
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

// Positions are 1-based character columns.
fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            c if c.is_whitespace() => i += 1,
            '!' => {
                toks.push((Tok::Not, col));
                i += 1;
            }
            '&' => {
                toks.push((Tok::And, col));
                i += 1;
            }
            '|' => {
                toks.push((Tok::Or, col));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, col));
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                toks.push((Tok::Arrow, col));
                i += 2;
            }
            '{' => {
                let close = chars[i..]
                    .iter()
                    .position(|&c| c == '}')
                    .map(|p| p + i)
                    .ok_or_else(|| ParseError::at_column(col, "unterminated coalition, expected `}`"))?;
                let body: String = chars[i + 1..close].iter().collect();
                let mut agents = Vec::new();
                for name in body.split(|c: char| c == ',' || c.is_whitespace()) {
                    if name.is_empty() {
                        continue;
                    }
                    if !name.chars().all(is_ident_char) {
                        return Err(ParseError::at_column(
                            col,
                            format!("invalid agent name `{name}` in coalition"),
                        ));
                    }
                    agents.push(name.to_string());
                }
                toks.push((Tok::Coalition(Coalition::new(agents)), col));
                i = close + 1;
            }
            c if is_ident_char(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let modal = match word.as_str() {
                    "K" => Some(Modality::Know),
                    "S" => Some(Modality::Strat),
                    "H" => Some(Modality::How),
                    _ => None,
                };
                match modal {
                    Some(m) if chars.get(i) == Some(&'{') => toks.push((Tok::Modal(m), col)),
                    _ => toks.push((Tok::Ident(word), col)),
                }
            }
            other => {
                return Err(ParseError::at_column(col, format!("unexpected character `{other}`")))
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |&(_, c)| c)
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError::at_column(
            self.column(),
            format!("expected {expected}, found {}", describe(self.toks.get(self.pos))),
        )
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Modal(m)) => {
                self.pos += 1;
                let Some(Tok::Coalition(c)) = self.peek().cloned() else {
                    return Err(self.error("a coalition"));
                };
                self.pos += 1;
                Ok(Formula::modal(m, c, self.unary()?))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(match name.as_str() {
                    "true" => Formula::True,
                    "false" => Formula::False,
                    _ => Formula::Var(name),
                })
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.implication()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error("`)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.error("a formula")),
        }
    }
}

/// Parses a formula. Coalitions are canonicalized (sorted, duplicate-free).
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, end: text.chars().count() + 1 };
    let f = p.implication()?;
    if p.pos != p.toks.len() {
        return Err(p.error("end of input"));
    }
    Ok(f)
}
