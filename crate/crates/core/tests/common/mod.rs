//! Naive definitional oracles, independent of the bit-parallel kernels.
#![allow(dead_code)] // shared across test targets with different usage
//!
//! Everything here works on `BTreeSet`s of plain indices and re-derives each
//! definition from scratch: languages by filtering all fact subsets,
//! extensions by scanning for supersets, task universes by the double loop
//! over input and output subsets, and policy sets by the definitional
//! filter. Tests compare these against the optimized implementations.

use std::collections::BTreeSet;

use ockham_core::{FactSet, IdSet, Language, StateSpace, SubsetMode, Vocabulary};
use ockham_core::universe::Fact;

pub type Set = BTreeSet<usize>;

/// Builds a language from plain fact lists (facts as state-index lists).
pub fn build_language(n_states: usize, facts: &[Vec<usize>]) -> Language {
    let space = StateSpace::new(n_states).unwrap();
    let facts: Vec<Fact> = facts
        .iter()
        .map(|f| Fact::from_states(f.iter().copied()))
        .collect();
    Language::enumerate(Vocabulary::new(space, facts).unwrap()).unwrap()
}

/// The worked four-state fixture: a = {0,1,3}, b = {0,2,3}.
pub fn fixture_language() -> Language {
    build_language(4, &[vec![0, 1, 3], vec![0, 2, 3]])
}

fn intersection(sets: &[Set]) -> Option<Set> {
    let mut iter = sets.iter();
    let mut acc = iter.next()?.clone();
    for s in iter {
        acc = acc.intersection(s).copied().collect();
    }
    Some(acc)
}

/// All valid statements (as fact-index sets) over facts given as state sets,
/// by filtering every non-empty fact subset for non-empty intersection.
pub fn naive_language(facts: &[Set]) -> Vec<Set> {
    let m = facts.len();
    let mut out = Vec::new();
    for selection in 1u64..(1u64 << m) {
        let chosen: Vec<usize> = (0..m).filter(|&i| selection & (1 << i) != 0).collect();
        let members: Vec<Set> = chosen.iter().map(|&i| facts[i].clone()).collect();
        if let Some(truth) = intersection(&members) {
            if !truth.is_empty() {
                out.push(chosen.into_iter().collect());
            }
        }
    }
    out
}

/// Indices of statements in `language` that are supersets of statement
/// `base` (base included).
pub fn naive_extension(language: &[Set], base: usize) -> Set {
    language
        .iter()
        .enumerate()
        .filter(|(_, candidate)| language[base].is_subset(candidate))
        .map(|(i, _)| i)
        .collect()
}

pub fn naive_extension_of_set(language: &[Set], bases: &Set) -> Set {
    let mut out = Set::new();
    for &b in bases {
        out.extend(naive_extension(language, b));
    }
    out
}

/// Every valid task: a non-empty proper input subset paired with every
/// admissible output subset of its extension.
pub fn naive_tasks(language: &[Set], mode: SubsetMode) -> Vec<(Set, Set)> {
    let n = language.len();
    let mut out = Vec::new();
    for input_selection in 1u64..(1u64 << n).wrapping_sub(1) {
        let inputs: Set = (0..n).filter(|&i| input_selection & (1 << i) != 0).collect();
        let extension: Vec<usize> = naive_extension_of_set(language, &inputs)
            .into_iter()
            .collect();
        let e = extension.len();
        for output_selection in 1u64..(1u64 << e) {
            if mode == SubsetMode::Strict && output_selection == (1u64 << e) - 1 {
                continue;
            }
            let outputs: Set = (0..e)
                .filter(|&i| output_selection & (1 << i) != 0)
                .map(|i| extension[i])
                .collect();
            out.push((inputs.clone(), outputs));
        }
    }
    out
}

/// The definitional policy filter: statements whose extension meets the
/// input extension in exactly the outputs.
pub fn naive_policies(language: &[Set], inputs: &Set, outputs: &Set) -> Set {
    let input_extension = naive_extension_of_set(language, inputs);
    (0..language.len())
        .filter(|&pi| {
            let selected: Set = input_extension
                .intersection(&naive_extension(language, pi))
                .copied()
                .collect();
            selected == *outputs
        })
        .collect()
}

/// Statements of the real language as fact-index sets, in id order.
pub fn statement_sets(language: &Language) -> Vec<Set> {
    language
        .statements()
        .iter()
        .map(|s| s.facts().indices().into_iter().collect())
        .collect()
}

/// Facts of the real vocabulary as state sets, in canonical order.
pub fn fact_sets(language: &Language) -> Vec<Set> {
    language
        .vocabulary()
        .facts()
        .iter()
        .map(|f| f.states().indices().into_iter().collect())
        .collect()
}

/// Maps a naive statement (fact-index set) to its id in the real language.
pub fn id_of(language: &Language, statement: &Set) -> usize {
    language
        .id_of_mask(FactSet::from_indices(statement.iter().copied()))
        .expect("oracle statement must exist in the language")
}

pub fn idset_of(language: &Language, statements: &Set) -> IdSet {
    IdSet::from_ids(language.len(), statements.iter().copied())
}

/// Deterministic pseudo-random small vocabularies for sweep tests.
pub fn sweep_vocabularies(count: usize, max_states: usize, max_facts: usize) -> Vec<(usize, Vec<Vec<usize>>)> {
    let mut out = Vec::new();
    let mut state = 0x243f_6a88_85a3_08d3u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    while out.len() < count {
        let n = 1 + (next() as usize) % max_states;
        let fact_count = 1 + (next() as usize) % max_facts;
        let mut masks: Vec<u64> = (0..fact_count)
            .map(|_| next() & ((1u64 << n) - 1))
            .collect();
        masks.sort_unstable();
        masks.dedup();
        if masks.is_empty() {
            continue;
        }
        let facts: Vec<Vec<usize>> = masks
            .iter()
            .map(|&m| (0..n).filter(|&s| m & (1 << s) != 0).collect())
            .collect();
        out.push((n, facts));
    }
    out
}
