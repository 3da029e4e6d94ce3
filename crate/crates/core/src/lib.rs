//! Stutter-aware LTL model checking of Petri nets.
//!
//! Properties are translated into transition-based generalized Büchi
//! automata, classified by how their language reacts to stutter, and checked
//! against the state space of structurally reduced nets. Each verdict says
//! whether the reduction makes it reliable.

pub mod alphabet;
pub mod automaton;
pub mod check;
pub mod error;
pub mod gen;
pub mod lasso;
pub mod limits;
pub mod ltl;
pub mod petri;
pub mod stutter;
pub mod translate;

pub use automaton::Tgba;
pub use error::{Error, ParseError, ResourceError};
pub use lasso::Lasso;
pub use limits::Limits;
pub use ltl::{parse, Ltl};
pub use stutter::{classify_sensitivity, partition_language, LanguagePartition, SensitivityClass};
pub use translate::translate;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/formulas.md")]
    mod formulas {}
    #[doc = include_str!("../../../book/src/sensitivity.md")]
    mod sensitivity {}
    #[doc = include_str!("../../../book/src/partition.md")]
    mod partition {}
    #[doc = include_str!("../../../book/src/nets.md")]
    mod nets {}
    #[doc = include_str!("../../../book/src/checking.md")]
    mod checking {}
}
