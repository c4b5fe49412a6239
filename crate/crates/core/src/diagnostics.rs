//! Shared report primitives: pass/fail flags with witnesses.

use std::fmt;

/// A concrete counterexample: the covers involved and what went wrong.
#[derive(Clone, Debug)]
pub struct Witness {
    pub covers: Vec<String>,
    pub detail: String,
}

impl Witness {
    pub fn new(covers: Vec<String>, detail: impl Into<String>) -> Self {
        Witness { covers, detail: detail.into() }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.detail, self.covers.join("; "))
    }
}

/// Outcome of one checked condition. `checked` records how many cases were
/// examined, so exhaustive and sampled runs are distinguishable downstream.
#[derive(Clone, Debug)]
pub struct Flag {
    pub holds: bool,
    pub witness: Option<Witness>,
    pub checked: usize,
}

impl Flag {
    pub fn pass(checked: usize) -> Self {
        Flag { holds: true, witness: None, checked }
    }

    pub fn fail(checked: usize, witness: Witness) -> Self {
        Flag { holds: false, witness: Some(witness), checked }
    }

    /// Records a failure, keeping the first witness found.
    pub fn record_failure(&mut self, witness: Witness) {
        if self.holds {
            self.holds = false;
            self.witness = Some(witness);
        }
    }
}

impl Default for Flag {
    fn default() -> Self {
        Flag::pass(0)
    }
}
