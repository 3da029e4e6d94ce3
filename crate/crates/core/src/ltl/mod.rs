//! Linear temporal logic over opaque atomic propositions.

mod nnf;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

pub use nnf::{negate_to_nnf, to_nnf};
pub use parse::parse;

/// Syntax tree of an LTL formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ltl {
    True,
    False,
    Atom(String),
    Not(Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Implies(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    Release(Box<Ltl>, Box<Ltl>),
    Eventually(Box<Ltl>),
    Globally(Box<Ltl>),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Atom,
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Next,
    Until,
    Release,
    Eventually,
    Globally,
}

impl Ltl {
    pub fn atom(name: impl Into<String>) -> Self {
        Ltl::Atom(name.into())
    }

    pub fn not(f: Ltl) -> Self {
        Ltl::Not(Box::new(f))
    }

    pub fn and(a: Ltl, b: Ltl) -> Self {
        Ltl::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Ltl, b: Ltl) -> Self {
        Ltl::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Ltl, b: Ltl) -> Self {
        Ltl::Implies(Box::new(a), Box::new(b))
    }

    pub fn next(f: Ltl) -> Self {
        Ltl::Next(Box::new(f))
    }

    pub fn until(a: Ltl, b: Ltl) -> Self {
        Ltl::Until(Box::new(a), Box::new(b))
    }

    pub fn release(a: Ltl, b: Ltl) -> Self {
        Ltl::Release(Box::new(a), Box::new(b))
    }

    pub fn eventually(f: Ltl) -> Self {
        Ltl::Eventually(Box::new(f))
    }

    pub fn globally(f: Ltl) -> Self {
        Ltl::Globally(Box::new(f))
    }

    /// `a W b`, expanded to `(a U b) || G a`.
    pub fn weak_until(a: Ltl, b: Ltl) -> Self {
        Ltl::or(Ltl::until(a.clone(), b), Ltl::globally(a))
    }

    pub fn kind(&self) -> Kind {
        match self {
            Ltl::True => Kind::True,
            Ltl::False => Kind::False,
            Ltl::Atom(_) => Kind::Atom,
            Ltl::Not(_) => Kind::Not,
            Ltl::And(..) => Kind::And,
            Ltl::Or(..) => Kind::Or,
            Ltl::Implies(..) => Kind::Implies,
            Ltl::Next(_) => Kind::Next,
            Ltl::Until(..) => Kind::Until,
            Ltl::Release(..) => Kind::Release,
            Ltl::Eventually(_) => Kind::Eventually,
            Ltl::Globally(_) => Kind::Globally,
        }
    }

    pub fn children(&self) -> Vec<&Ltl> {
        match self {
            Ltl::True | Ltl::False | Ltl::Atom(_) => vec![],
            Ltl::Not(a) | Ltl::Next(a) | Ltl::Eventually(a) | Ltl::Globally(a) => vec![a],
            Ltl::And(a, b)
            | Ltl::Or(a, b)
            | Ltl::Implies(a, b)
            | Ltl::Until(a, b)
            | Ltl::Release(a, b) => vec![a, b],
        }
    }

    /// Names of the atomic propositions occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        if let Ltl::Atom(name) = self {
            out.insert(name.clone());
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    /// True when negation only occurs directly above atoms and `->` is gone.
    pub fn is_nnf(&self) -> bool {
        match self {
            Ltl::Not(a) => matches!(**a, Ltl::Atom(_)),
            Ltl::Implies(..) => false,
            _ => self.children().into_iter().all(Ltl::is_nnf),
        }
    }

    /// Nesting depth of temporal operators.
    pub fn temporal_depth(&self) -> usize {
        let below = self
            .children()
            .into_iter()
            .map(Ltl::temporal_depth)
            .max()
            .unwrap_or(0);
        match self {
            Ltl::Next(_)
            | Ltl::Until(..)
            | Ltl::Release(..)
            | Ltl::Eventually(_)
            | Ltl::Globally(_) => below + 1,
            _ => below,
        }
    }

    /// Nesting depth of `X` alone.
    pub fn next_depth(&self) -> usize {
        let below = self
            .children()
            .into_iter()
            .map(Ltl::next_depth)
            .max()
            .unwrap_or(0);
        if matches!(self, Ltl::Next(_)) {
            below + 1
        } else {
            below
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Ltl::size).sum::<usize>()
    }
}

// Printed fully parenthesized below the top level so the output always
// parses back to the same tree.
impl fmt::Display for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn sub(f: &mut fmt::Formatter<'_>, g: &Ltl) -> fmt::Result {
            match g {
                Ltl::True | Ltl::False | Ltl::Atom(_) => write!(f, "{g}"),
                Ltl::Not(_) | Ltl::Next(_) | Ltl::Eventually(_) | Ltl::Globally(_) => {
                    write!(f, "{g}")
                }
                _ => write!(f, "({g})"),
            }
        }
        match self {
            Ltl::True => f.write_str("true"),
            Ltl::False => f.write_str("false"),
            Ltl::Atom(n) => f.write_str(n),
            Ltl::Not(a) => {
                f.write_str("!")?;
                sub(f, a)
            }
            Ltl::Next(a) => {
                f.write_str("X ")?;
                sub(f, a)
            }
            Ltl::Eventually(a) => {
                f.write_str("F ")?;
                sub(f, a)
            }
            Ltl::Globally(a) => {
                f.write_str("G ")?;
                sub(f, a)
            }
            Ltl::And(a, b) | Ltl::Or(a, b) | Ltl::Implies(a, b) | Ltl::Until(a, b) | Ltl::Release(a, b) => {
                let op = match self {
                    Ltl::And(..) => "&&",
                    Ltl::Or(..) => "||",
                    Ltl::Implies(..) => "->",
                    Ltl::Until(..) => "U",
                    _ => "R",
                };
                sub(f, a)?;
                write!(f, " {op} ")?;
                sub(f, b)
            }
        }
    }
}
