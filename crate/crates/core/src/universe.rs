//! The finite environment model: states, facts (declarative programs), and
//! statements.
//!
//! A fact is the set of states in which it holds. A statement is a non-empty
//! set of facts whose members share at least one state; its truth set (the
//! intersection of its facts) is cached at construction and never changes.

use serde::{Deserialize, Serialize};

use crate::bits::{FactSet, StateSet};
use crate::error::{Error, Result, StatementError};
use crate::limits;

/// A finite set of environment states, identified by indices `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateSpace {
    n: usize,
}

#[allow(clippy::len_without_is_empty)] // a state space is never empty
impl StateSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Guardrail {
                name: "MIN_STATES",
                limit: 1,
                requested: 0,
            });
        }
        if n > limits::MAX_STATES {
            return Err(Error::Guardrail {
                name: "MAX_STATES",
                limit: limits::MAX_STATES as u64,
                requested: n as u64,
            });
        }
        Ok(Self { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.n)
    }

    pub fn check_state(&self, index: usize) -> Result<()> {
        if index < self.n {
            Ok(())
        } else {
            Err(Error::StateOutOfRange { index, n: self.n })
        }
    }
}

/// A declarative program: the subset of states in which it is true.
///
/// The empty fact is a legitimate member of the full vocabulary P; it simply
/// can never appear in a valid statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fact(pub StateSet);

impl Fact {
    pub fn from_states<I: IntoIterator<Item = usize>>(states: I) -> Self {
        Fact(StateSet::from_indices(states))
    }

    pub fn states(&self) -> StateSet {
        self.0
    }

    pub fn holds_in(&self, state: usize) -> bool {
        self.0.contains(state)
    }
}

/// A non-empty set of facts with non-empty intersection.
///
/// `facts` indexes into the owning vocabulary; `truth` caches the
/// intersection of the member facts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Statement {
    facts: FactSet,
    truth: StateSet,
}

impl Statement {
    /// Checks the definitional validity of a fact set over `facts` and builds
    /// the statement, distinguishing an empty fact set from an empty
    /// intersection.
    pub fn validate(vocabulary_facts: &[Fact], members: FactSet) -> std::result::Result<Self, StatementError> {
        if members.is_empty() {
            return Err(StatementError::EmptyStatement);
        }
        let truth = intersection_of(vocabulary_facts, members);
        if truth.is_empty() {
            return Err(StatementError::EmptyIntersection);
        }
        Ok(Self {
            facts: members,
            truth,
        })
    }

    pub fn facts(&self) -> FactSet {
        self.facts
    }

    /// The cached intersection of the member facts (the statement's truth set).
    pub fn intersection(&self) -> StateSet {
        self.truth
    }

    /// True given a state iff the statement is an aspect realised by it.
    pub fn is_true(&self, state: usize) -> bool {
        self.truth.contains(state)
    }

    /// Number of facts in the statement's form.
    pub fn description_length(&self) -> usize {
        self.facts.len()
    }

    /// Form containment: every fact of `self` appears in `other`.
    pub fn is_subform_of(&self, other: &Statement) -> bool {
        self.facts.is_subset_of(other.facts)
    }
}

/// Intersection of the facts selected by `members` (the whole state space for
/// an empty selection, matching the nullary-intersection convention used only
/// internally; public validity checks reject empty selections first).
pub fn intersection_of(vocabulary_facts: &[Fact], members: FactSet) -> StateSet {
    let mut truth = StateSet::full(64);
    for i in members.iter() {
        truth = truth.intersect(vocabulary_facts[i].states());
    }
    truth
}
