//! Guardrail and budget constants.
//!
//! Every limit is a named constant so that errors can report which guardrail
//! was hit instead of silently truncating.

/// Maximum number of environment states (state sets are 64-bit masks).
pub const MAX_STATES: usize = 64;

/// Maximum number of facts in a vocabulary (statements are 64-bit fact masks).
pub const MAX_VOCAB_FACTS: usize = 64;

/// Largest state count for which the full vocabulary P fits the fact width
/// (2^6 = 64 facts).
pub const MAX_FULL_VOCAB_STATES: usize = 6;

/// Language enumeration visits every non-empty fact subset, so vocabularies
/// beyond this size are rejected rather than enumerated (2^24 candidates).
pub const MAX_ENUMERABLE_VOCAB_FACTS: usize = 24;

/// Exhaustive task-universe enumeration is only attempted for languages up to
/// this size; the universe is doubly exponential in the language.
pub const MAX_EXHAUSTIVE_TASK_LANGUAGE: usize = 12;

/// Cap on the total number of tasks an exhaustive universe may hold.
pub const MAX_TASK_UNIVERSE: u64 = 1 << 24;

/// Exact-weight task sampling enumerates all input sets, so it requires
/// 2^|L| weights to fit in memory.
pub const MAX_EXACT_SAMPLER_LANGUAGE: usize = 20;

/// Attempts before `sample_child` reports failure.
pub const CHILD_RETRY_BUDGET: u32 = 64;

/// Attempts before an approximate task sampler reports failure.
pub const SAMPLER_RETRY_BUDGET: u32 = 4096;

/// Pairwise longest-chain computation is quadratic in the universe size.
pub const MAX_LEVEL_TASKS: usize = 1 << 12;

/// Proxy relations are materialized as |L| x |L| bit matrices up to this size.
pub const MAX_RELATION_LANGUAGE: usize = 256;
