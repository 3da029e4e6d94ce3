use std::time::{Duration, Instant};

use crate::error::ResourceError;

/// Caps shared by every construction that can blow up.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    /// Maximum number of states of any single constructed automaton or
    /// state space.
    pub state_cap: usize,
    /// Maximum rank used by complementation; `None` means `2n`.
    pub rank_cap: Option<usize>,
    pub deadline: Option<Instant>,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            state_cap: 1_000_000,
            rank_cap: None,
            deadline: None,
        }
    }
}

impl Limits {
    pub fn with_state_cap(mut self, cap: usize) -> Self {
        self.state_cap = cap;
        self
    }

    pub fn with_rank_cap(mut self, cap: usize) -> Self {
        self.rank_cap = Some(cap);
        self
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.deadline = Some(Instant::now() + timeout);
        self
    }

    pub(crate) fn check_states(&self, count: usize, what: &'static str) -> Result<(), ResourceError> {
        if count > self.state_cap {
            return Err(ResourceError::StateCap {
                what,
                cap: self.state_cap,
            });
        }
        Ok(())
    }

    pub(crate) fn check_time(&self, what: &'static str) -> Result<(), ResourceError> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(ResourceError::Timeout { what }),
            _ => Ok(()),
        }
    }
}
