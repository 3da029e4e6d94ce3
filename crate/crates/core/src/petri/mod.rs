//! Place/transition nets, marking predicates, structural agglomeration and
//! explicit state spaces.

mod agglo;
mod kripke;
mod parse;
mod pnml;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::NetError;

pub use agglo::{
    agglomerate, check_agglomeration, find_agglomerations, reduce_fixpoint, AggloError, AggloKind,
    Condition, ReductionStats,
};
pub use kripke::{build_kripke, KripkeGraph};
pub use parse::parse_net;
pub use pnml::parse_pnml;

/// A place/transition net. Weights are stored per transition: `w_minus[t][p]`
/// tokens are consumed from `p` and `w_plus[t][p]` produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PetriNet {
    pub places: Vec<String>,
    pub transitions: Vec<String>,
    pub w_minus: Vec<Vec<u32>>,
    pub w_plus: Vec<Vec<u32>>,
    pub m0: Vec<u32>,
}

impl PetriNet {
    pub fn num_places(&self) -> usize {
        self.places.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    pub fn place_index(&self, name: &str) -> Option<usize> {
        self.places.iter().position(|p| p == name)
    }

    /// Transitions producing into `p`.
    pub fn preset_of_place(&self, p: usize) -> Vec<usize> {
        (0..self.num_transitions()).filter(|&t| self.w_plus[t][p] > 0).collect()
    }

    /// Transitions consuming from `p`.
    pub fn postset_of_place(&self, p: usize) -> Vec<usize> {
        (0..self.num_transitions()).filter(|&t| self.w_minus[t][p] > 0).collect()
    }

    /// Places `t` consumes from.
    pub fn preset_of_transition(&self, t: usize) -> Vec<usize> {
        (0..self.num_places()).filter(|&p| self.w_minus[t][p] > 0).collect()
    }

    /// Places `t` produces into.
    pub fn postset_of_transition(&self, t: usize) -> Vec<usize> {
        (0..self.num_places()).filter(|&p| self.w_plus[t][p] > 0).collect()
    }

    pub fn is_enabled(&self, m: &[u32], t: usize) -> bool {
        m.iter().zip(&self.w_minus[t]).all(|(a, b)| a >= b)
    }

    /// The marking reached by firing `t`, or `None` when `t` is disabled or
    /// a count overflows.
    pub fn fire(&self, m: &[u32], t: usize) -> Option<Vec<u32>> {
        if !self.is_enabled(m, t) {
            return None;
        }
        m.iter()
            .zip(&self.w_minus[t])
            .zip(&self.w_plus[t])
            .map(|((&x, &minus), &plus)| (x - minus).checked_add(plus))
            .collect()
    }

    /// Renders the net and `binding` in the text format read by
    /// [`parse_net`].
    pub fn to_text(&self, binding: &PropertyBinding) -> String {
        let mut out = String::new();
        for (p, name) in self.places.iter().enumerate() {
            out.push_str("place ");
            out.push_str(name);
            if self.m0[p] > 0 {
                out.push_str(&format!(" init {}", self.m0[p]));
            }
            out.push('\n');
        }
        let arcs = |w: &[u32]| -> String {
            w.iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(p, &x)| {
                    if x == 1 {
                        self.places[p].clone()
                    } else {
                        format!("{}:{}", self.places[p], x)
                    }
                })
                .collect::<Vec<_>>()
                .join(",")
        };
        for (t, name) in self.transitions.iter().enumerate() {
            out.push_str("trans ");
            out.push_str(name);
            let (i, o) = (arcs(&self.w_minus[t]), arcs(&self.w_plus[t]));
            if !i.is_empty() {
                out.push_str(" in ");
                out.push_str(&i);
            }
            if !o.is_empty() {
                out.push_str(" out ");
                out.push_str(&o);
            }
            out.push('\n');
        }
        for (name, pred) in &binding.atoms {
            out.push_str(&format!("atom {name} := {pred}\n"));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl CmpOp {
    fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ge => lhs >= rhs,
            CmpOp::Gt => lhs > rhs,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }
}

/// `Σ coeff · m(place) + constant`, with places referred to by name so a
/// binding survives the renumbering done by reductions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearSum {
    pub terms: Vec<(i64, String)>,
    pub constant: i64,
}

impl fmt::Display for LinearSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, p) in &self.terms {
            let (sign, c) = if *c < 0 { ("-", -c) } else { ("+", *c) };
            match (first, sign) {
                (true, "-") => f.write_str("-")?,
                (true, _) => {}
                (false, s) => write!(f, " {s} ")?,
            }
            if c == 1 {
                write!(f, "m({p})")?;
            } else {
                write!(f, "{c}*m({p})")?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if self.constant > 0 {
            write!(f, " + {}", self.constant)
        } else if self.constant < 0 {
            write!(f, " - {}", -self.constant)
        } else {
            Ok(())
        }
    }
}

/// Boolean combination of comparisons between linear sums of place
/// markings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Predicate {
    Const(bool),
    Cmp(LinearSum, CmpOp, LinearSum),
    Not(Box<Predicate>),
    And(Box<Predicate>, Box<Predicate>),
    Or(Box<Predicate>, Box<Predicate>),
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Const(b) => write!(f, "{b}"),
            Predicate::Cmp(l, op, r) => write!(f, "{l} {} {r}", op.symbol()),
            Predicate::Not(p) => write!(f, "!({p})"),
            Predicate::And(a, b) => write!(f, "({a}) && ({b})"),
            Predicate::Or(a, b) => write!(f, "({a}) || ({b})"),
        }
    }
}

/// A predicate resolved against the places of one net: each comparison is
/// normalized to `Σ coeff · m(p) ⋈ k`.
#[derive(Clone, Debug)]
enum Compiled {
    Const(bool),
    Cmp(Vec<(usize, i64)>, CmpOp, i64),
    Not(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    fn eval(&self, m: &[u32]) -> bool {
        match self {
            Compiled::Const(b) => *b,
            Compiled::Cmp(terms, op, k) => {
                let sum: i64 = terms.iter().map(|&(p, c)| c * m[p] as i64).sum();
                op.holds(sum, *k)
            }
            Compiled::Not(a) => !a.eval(m),
            Compiled::And(a, b) => a.eval(m) && b.eval(m),
            Compiled::Or(a, b) => a.eval(m) || b.eval(m),
        }
    }

    fn support(&self, out: &mut BTreeSet<usize>) {
        match self {
            Compiled::Const(_) => {}
            Compiled::Cmp(terms, _, _) => out.extend(terms.iter().map(|&(p, _)| p)),
            Compiled::Not(a) => a.support(out),
            Compiled::And(a, b) | Compiled::Or(a, b) => {
                a.support(out);
                b.support(out);
            }
        }
    }
}

impl Predicate {
    fn compile(&self, net: &PetriNet) -> Result<Compiled, NetError> {
        Ok(match self {
            Predicate::Const(b) => Compiled::Const(*b),
            Predicate::Cmp(l, op, r) => {
                let mut coeff = vec![0i64; net.num_places()];
                for (sign, side) in [(1, l), (-1, r)] {
                    for (c, name) in &side.terms {
                        let p = net
                            .place_index(name)
                            .ok_or_else(|| NetError::UndeclaredPlace {
                                line: 0,
                                name: name.clone(),
                            })?;
                        coeff[p] += sign * c;
                    }
                }
                let terms = coeff
                    .into_iter()
                    .enumerate()
                    .filter(|&(_, c)| c != 0)
                    .collect();
                Compiled::Cmp(terms, *op, r.constant - l.constant)
            }
            Predicate::Not(a) => Compiled::Not(Box::new(a.compile(net)?)),
            Predicate::And(a, b) => Compiled::And(Box::new(a.compile(net)?), Box::new(b.compile(net)?)),
            Predicate::Or(a, b) => Compiled::Or(Box::new(a.compile(net)?), Box::new(b.compile(net)?)),
        })
    }
}

/// Named marking predicates, in declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropertyBinding {
    pub atoms: Vec<(String, Predicate)>,
}

impl PropertyBinding {
    pub fn get(&self, name: &str) -> Option<&Predicate> {
        self.atoms.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    pub fn names(&self) -> Vec<String> {
        self.atoms.iter().map(|(n, _)| n.clone()).collect()
    }

    /// The predicates for `names`, in that order.
    pub fn restrict(&self, names: &[String]) -> Result<PropertyBinding, NetError> {
        let atoms = names
            .iter()
            .map(|n| {
                self.get(n)
                    .map(|p| (n.clone(), p.clone()))
                    .ok_or_else(|| NetError::UnboundAtom(n.clone()))
            })
            .collect::<Result<_, _>>()?;
        Ok(PropertyBinding { atoms })
    }

    fn compile(&self, net: &PetriNet) -> Result<Vec<Compiled>, NetError> {
        self.atoms.iter().map(|(_, p)| p.compile(net)).collect()
    }
}

/// Places read by the binding (nonzero normalized coefficient in some
/// comparison) and transitions that leave every such place unchanged.
pub fn support_and_invisibles(
    net: &PetriNet,
    binding: &PropertyBinding,
) -> Result<(BTreeSet<usize>, BTreeSet<usize>), NetError> {
    let mut support = BTreeSet::new();
    for c in binding.compile(net)? {
        c.support(&mut support);
    }
    let invisibles = (0..net.num_transitions())
        .filter(|&t| support.iter().all(|&p| net.w_minus[t][p] == net.w_plus[t][p]))
        .collect();
    Ok((support, invisibles))
}
