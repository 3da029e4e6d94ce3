use thiserror::Error;

/// Syntax error in an LTL formula, a lasso literal or a net description.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at offset {offset}")]
pub struct ParseError {
    /// Byte offset into the input (for line-oriented inputs, into the line).
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(offset: usize, message: impl Into<String>) -> Self {
        Self {
            offset,
            message: message.into(),
        }
    }
}

/// A computation hit one of its configured limits. Never a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResourceError {
    #[error("state cap of {cap} exceeded while building {what}")]
    StateCap { what: &'static str, cap: usize },
    #[error("rank bound {bound} too small to complement an automaton with {states} states")]
    RankCap { bound: usize, states: usize },
    #[error("time budget exhausted while building {what}")]
    Timeout { what: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("too many atomic propositions: {0} (at most {max})", max = crate::alphabet::MAX_AP)]
    TooManyAps(usize),
    #[error("too many acceptance marks: {0} (at most 32)")]
    TooManyMarks(usize),
    #[error("edge {src} -> {dst} refers to a state outside 0..{states}")]
    BadState { src: usize, dst: usize, states: usize },
    #[error("mark {mark} outside the acceptance set 0..{count}")]
    BadMark { mark: u32, count: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HoaError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unsupported HOA feature: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("line {line}: {source}")]
    Syntax { line: usize, source: ParseError },
    #[error("line {line}: duplicate {kind} name `{name}`")]
    Duplicate {
        line: usize,
        kind: &'static str,
        name: String,
    },
    #[error("line {line}: undeclared place `{name}`")]
    UndeclaredPlace { line: usize, name: String },
    #[error("line {line}: negative weight {weight}")]
    NegativeWeight { line: usize, weight: i64 },
    #[error("PNML: {0}")]
    Pnml(String),
    #[error("atom `{0}` is not bound to a marking predicate")]
    UnboundAtom(String),
}

/// Umbrella error for the high-level entry points.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Resource(#[from] ResourceError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Hoa(#[from] HoaError),
    #[error(transparent)]
    Net(#[from] NetError),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_))
    }
}
