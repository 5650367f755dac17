//! Abstraction layers: a vocabulary of facts and the formal language it
//! induces.
//!
//! `Language::enumerate` materializes every valid statement over a vocabulary
//! in a fixed order: facts are canonically sorted by their state mask at
//! vocabulary construction, and statements by (description length, fact mask).
//! All downstream ids, reports, and tie-breaks refer to this order.
//!
//! Extensions (the set of completions of a statement within the language) are
//! computed lazily and memoized per statement; the memo is a write-once cache
//! with idempotent fills, so languages can be shared across threads.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::{submasks, FactSet, IdSet, StateSet};
use crate::error::{Error, Result, StatementError};
use crate::limits;
use crate::universe::{Fact, StateSpace, Statement};

/// Index of a statement within its language's canonical order.
pub type StatementId = usize;

/// How two statements are compared for equivalence.
///
/// The formal notion (equal completion sets) is `SyntacticExtension`; the
/// other two readings are weaker and are measured side by side wherever
/// equivalence matters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquivalenceMode {
    /// Extension sets are equal element by element.
    SyntacticExtension,
    /// Extension cardinalities are equal.
    WeaknessCardinality,
    /// Truth sets (fact intersections) are equal.
    SemanticTruthSet,
}

impl EquivalenceMode {
    pub const ALL: [EquivalenceMode; 3] = [
        EquivalenceMode::SyntacticExtension,
        EquivalenceMode::WeaknessCardinality,
        EquivalenceMode::SemanticTruthSet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EquivalenceMode::SyntacticExtension => "syntactic-extension",
            EquivalenceMode::WeaknessCardinality => "weakness-cardinality",
            EquivalenceMode::SemanticTruthSet => "semantic-truth-set",
        }
    }
}

impl fmt::Display for EquivalenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An ordered, duplicate-free set of facts over a state space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    space: StateSpace,
    facts: Vec<Fact>,
    is_full: bool,
}

impl Vocabulary {
    /// Builds a vocabulary, canonically sorting facts by state mask.
    pub fn new(space: StateSpace, facts: Vec<Fact>) -> Result<Self> {
        if facts.len() > limits::MAX_VOCAB_FACTS {
            return Err(Error::Guardrail {
                name: "MAX_VOCAB_FACTS",
                limit: limits::MAX_VOCAB_FACTS as u64,
                requested: facts.len() as u64,
            });
        }
        let all = space.all_states();
        let mut seen: Vec<u64> = Vec::with_capacity(facts.len());
        for (index, fact) in facts.iter().enumerate() {
            if !fact.states().is_subset_of(all) {
                let bad = fact
                    .states()
                    .iter()
                    .find(|&s| s >= space.len())
                    .expect("offending state");
                return Err(Error::StateOutOfRange {
                    index: bad,
                    n: space.len(),
                });
            }
            if seen.contains(&fact.states().bits()) {
                return Err(Error::DuplicateFact { index });
            }
            seen.push(fact.states().bits());
        }
        let mut facts = facts;
        facts.sort_by_key(|f| f.states().bits());
        let is_full =
            space.len() <= limits::MAX_FULL_VOCAB_STATES && facts.len() == 1usize << space.len();
        Ok(Self {
            space,
            facts,
            is_full,
        })
    }

    /// The no-abstraction vocabulary: every subset of states, including the
    /// empty fact.
    pub fn full(space: StateSpace) -> Result<Self> {
        if space.len() > limits::MAX_FULL_VOCAB_STATES {
            return Err(Error::Guardrail {
                name: "MAX_FULL_VOCAB_STATES",
                limit: limits::MAX_FULL_VOCAB_STATES as u64,
                requested: space.len() as u64,
            });
        }
        let facts = (0..1u64 << space.len())
            .map(|mask| Fact(StateSet(mask)))
            .collect();
        Ok(Self {
            space,
            facts,
            is_full: true,
        })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.is_full
    }

    pub fn fact(&self, index: usize) -> &Fact {
        &self.facts[index]
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    /// Index of a fact with exactly these states, if present.
    pub fn find_fact(&self, states: StateSet) -> Option<usize> {
        self.facts
            .binary_search_by_key(&states.bits(), |f| f.states().bits())
            .ok()
    }

    /// Validates a statement over this vocabulary, checking fact indices.
    pub fn statement(&self, members: FactSet) -> Result<Statement> {
        if let Some(bad) = members.iter().find(|&i| i >= self.facts.len()) {
            return Err(Error::FactOutOfRange {
                index: bad,
                len: self.facts.len(),
            });
        }
        Ok(Statement::validate(&self.facts, members)?)
    }

    /// Same as [`Vocabulary::statement`] but reporting the validity reason.
    pub fn validate_statement(
        &self,
        members: FactSet,
    ) -> std::result::Result<Statement, StatementError> {
        debug_assert!(members.iter().all(|i| i < self.facts.len()));
        Statement::validate(&self.facts, members)
    }
}

/// The set of completions of a statement (or a set of statements) within a
/// language: statement ids plus the cached cardinality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionSet {
    members: IdSet,
    cardinality: usize,
}

impl ExtensionSet {
    fn new(members: IdSet) -> Self {
        let cardinality = members.len();
        Self {
            members,
            cardinality,
        }
    }

    pub fn members(&self) -> &IdSet {
        &self.members
    }

    pub fn cardinality(&self) -> usize {
        self.cardinality
    }

    pub fn contains(&self, id: StatementId) -> bool {
        self.members.contains(id)
    }
}

/// Every valid statement over a vocabulary, in canonical order, with
/// memoized extension structure.
pub struct Language {
    vocabulary: Vocabulary,
    statements: Vec<Statement>,
    id_by_mask: HashMap<u64, StatementId>,
    extensions: Vec<OnceLock<ExtensionSet>>,
    fingerprint: u64,
}

impl Language {
    /// Enumerates all valid statements over the vocabulary.
    pub fn enumerate(vocabulary: Vocabulary) -> Result<Self> {
        let m = vocabulary.len();
        if m > limits::MAX_ENUMERABLE_VOCAB_FACTS {
            return Err(Error::Guardrail {
                name: "MAX_ENUMERABLE_VOCAB_FACTS",
                limit: limits::MAX_ENUMERABLE_VOCAB_FACTS as u64,
                requested: m as u64,
            });
        }
        let mut statements = Self::enumerate_masks(&vocabulary, m >= 17);
        // Ascending mask order is already in place; a stable sort by
        // description length yields the canonical (length, mask) order.
        statements.sort_by_key(|s| s.description_length());
        let id_by_mask = statements
            .iter()
            .enumerate()
            .map(|(id, s)| (s.facts().bits(), id))
            .collect();
        let extensions = statements.iter().map(|_| OnceLock::new()).collect();
        let fingerprint = fingerprint(&vocabulary);
        Ok(Self {
            vocabulary,
            statements,
            id_by_mask,
            extensions,
            fingerprint,
        })
    }

    /// Candidate walk shared by the sequential and data-parallel paths; the
    /// parallel collect preserves ascending mask order.
    fn enumerate_masks(vocabulary: &Vocabulary, parallel: bool) -> Vec<Statement> {
        let m = vocabulary.len();
        let total: u64 = if m == 0 { 0 } else { (1u64 << m) - 1 };
        let validate = |mask: u64| -> Option<Statement> {
            Statement::validate(vocabulary.facts(), FactSet(mask)).ok()
        };
        if parallel {
            (1..=total).into_par_iter().filter_map(validate).collect()
        } else {
            (1..=total).filter_map(validate).collect()
        }
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn space(&self) -> &StateSpace {
        self.vocabulary.space()
    }

    pub fn len(&self) -> usize {
        self.statements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    /// Stable identity for cross-language usage checks.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn statement(&self, id: StatementId) -> &Statement {
        &self.statements[id]
    }

    pub fn statements(&self) -> &[Statement] {
        &self.statements
    }

    pub fn ids(&self) -> std::ops::Range<StatementId> {
        0..self.statements.len()
    }

    pub fn id_of_mask(&self, facts: FactSet) -> Option<StatementId> {
        self.id_by_mask.get(&facts.bits()).copied()
    }

    pub fn id_of(&self, statement: &Statement) -> Option<StatementId> {
        self.id_of_mask(statement.facts())
    }

    /// Id lookup that reports non-membership as a usage error.
    pub fn require_id(&self, facts: FactSet) -> Result<StatementId> {
        self.id_of_mask(facts).ok_or(Error::NotInLanguage)
    }

    /// Truth of a statement given a state, with a range-checked state index.
    pub fn is_true(&self, id: StatementId, state: usize) -> Result<bool> {
        self.space().check_state(state)?;
        Ok(self.statement(id).is_true(state))
    }

    /// The set of completions of `id`, memoized on first use.
    ///
    /// Supersets of the fact mask are walked directly (the carry-rippler over
    /// the complement) rather than filtering the whole language.
    pub fn extension(&self, id: StatementId) -> &ExtensionSet {
        self.extensions[id].get_or_init(|| {
            let base = self.statements[id].facts().bits();
            let free = FactSet::full(self.vocabulary.len()).bits() & !base;
            let mut members = IdSet::with_capacity(self.statements.len());
            for extra in submasks(free) {
                if let Some(sup) = self.id_of_mask(FactSet(base | extra)) {
                    members.insert(sup);
                }
            }
            ExtensionSet::new(members)
        })
    }

    /// Union of member extensions.
    pub fn extension_of_set(&self, ids: &IdSet) -> ExtensionSet {
        let mut members = IdSet::with_capacity(self.statements.len());
        for id in ids.iter() {
            members.union_with(self.extension(id).members());
        }
        ExtensionSet::new(members)
    }

    /// Cardinality of the statement's extension.
    pub fn weakness(&self, id: StatementId) -> usize {
        self.extension(id).cardinality()
    }

    pub fn description_length(&self, id: StatementId) -> usize {
        self.statement(id).description_length()
    }

    pub fn equivalent(&self, x: StatementId, y: StatementId, mode: EquivalenceMode) -> bool {
        match mode {
            EquivalenceMode::SyntacticExtension => self
                .extension(x)
                .members()
                .same_ids(self.extension(y).members()),
            EquivalenceMode::WeaknessCardinality => {
                self.extension(x).cardinality() == self.extension(y).cardinality()
            }
            EquivalenceMode::SemanticTruthSet => {
                self.statement(x).intersection() == self.statement(y).intersection()
            }
        }
    }

    /// The first statement in canonical order equivalent to `id` under
    /// `mode`. Canonical order sorts by description length first, so the
    /// result has minimal length; ties resolve to the earliest mask.
    pub fn minimal_equivalent_form(&self, id: StatementId, mode: EquivalenceMode) -> StatementId {
        self.ids()
            .find(|&candidate| self.equivalent(id, candidate, mode))
            .expect("a statement is always equivalent to itself")
    }
}

impl fmt::Debug for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Language")
            .field("states", &self.space().len())
            .field("facts", &self.vocabulary.len())
            .field("statements", &self.statements.len())
            .finish()
    }
}

fn fingerprint(vocabulary: &Vocabulary) -> u64 {
    let mut h = splitmix64(vocabulary.space().len() as u64);
    for fact in vocabulary.facts() {
        h = splitmix64(h ^ fact.states().bits());
    }
    h
}

pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}
