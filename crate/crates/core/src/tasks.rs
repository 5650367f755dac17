//! Tasks over a language: validity, exhaustive enumeration, uniform
//! sampling, the child/parent hierarchy, correct-policy sets, and inference.
//!
//! A task pairs a non-empty proper subset of the language (its inputs) with a
//! non-empty set of correct outputs drawn from the inputs' extension. The
//! subset mode decides whether the outputs may equal the whole extension
//! (`Lax`) or must be a proper subset of it (`Strict`); every report carries
//! the mode it was computed under.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::abstraction::{Language, StatementId};
use crate::bits::{submasks, IdSet};
use crate::error::{Error, Result, TaskError};
use crate::limits;

/// Reading of the output-containment requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubsetMode {
    /// Outputs must be a proper subset of the inputs' extension.
    Strict,
    /// Outputs may equal the inputs' extension.
    Lax,
}

impl SubsetMode {
    pub fn name(self) -> &'static str {
        match self {
            SubsetMode::Strict => "strict",
            SubsetMode::Lax => "lax",
        }
    }

    /// Admissible output sets for an extension of the given cardinality.
    pub fn admissible_outputs(self, extension_size: usize) -> u64 {
        let all = if extension_size >= 64 {
            u64::MAX
        } else {
            (1u64 << extension_size) - 1
        };
        match self {
            SubsetMode::Lax => all,
            SubsetMode::Strict => all.saturating_sub(1),
        }
    }
}

impl std::fmt::Display for SubsetMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A pair (inputs, outputs) over one language, in one subset mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Task {
    inputs: IdSet,
    outputs: IdSet,
    mode: SubsetMode,
    language: u64,
}

impl Task {
    pub fn inputs(&self) -> &IdSet {
        &self.inputs
    }

    pub fn outputs(&self) -> &IdSet {
        &self.outputs
    }

    pub fn mode(&self) -> SubsetMode {
        self.mode
    }

    pub fn language_fingerprint(&self) -> u64 {
        self.language
    }
}

/// Checks the task invariants and reports the first violated one.
///
/// Inputs must be a non-empty proper subset of the language in both modes;
/// the mode only relaxes the output-containment requirement.
pub fn validate_task(
    language: &Language,
    inputs: IdSet,
    outputs: IdSet,
    mode: SubsetMode,
) -> std::result::Result<Task, TaskError> {
    debug_assert!(inputs.iter().all(|id| id < language.len()));
    debug_assert!(outputs.iter().all(|id| id < language.len()));
    if inputs.is_empty() {
        return Err(TaskError::EmptyInputs);
    }
    if inputs.len() == language.len() {
        return Err(TaskError::InputsEqualLanguage);
    }
    if outputs.is_empty() {
        return Err(TaskError::EmptyOutputs);
    }
    let extension = language.extension_of_set(&inputs);
    if !outputs.is_subset_of(extension.members()) {
        return Err(TaskError::OutputsOutsideExtension);
    }
    if mode == SubsetMode::Strict && outputs.len() == extension.cardinality() {
        return Err(TaskError::OutputsEqualExtension);
    }
    Ok(Task {
        inputs,
        outputs,
        mode,
        language: language.fingerprint(),
    })
}

/// Per-input summary used by counts, sampling, and reports.
#[derive(Debug, Clone, Serialize)]
pub struct InputClass {
    /// Input set as a statement-id bitmask.
    pub input_mask: u64,
    /// Cardinality of the inputs' extension.
    pub extension_size: usize,
    /// Number of admissible output sets under the universe's mode.
    pub admissible_outputs: u64,
}

/// The exhaustively enumerated set of all tasks over a language.
#[derive(Debug)]
pub struct TaskUniverse {
    mode: SubsetMode,
    language: u64,
    language_len: usize,
    inputs: Vec<InputClass>,
    tasks: Vec<Task>,
    total: u64,
}

impl TaskUniverse {
    pub fn mode(&self) -> SubsetMode {
        self.mode
    }

    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn tasks(&self) -> &[Task] {
        &self.tasks
    }

    pub fn input_classes(&self) -> &[InputClass] {
        &self.inputs
    }

    pub fn language_fingerprint(&self) -> u64 {
        self.language
    }

    pub fn language_len(&self) -> usize {
        self.language_len
    }
}

fn proper_nonempty_input_masks(language_len: usize) -> impl Iterator<Item = u64> {
    debug_assert!(language_len < 64);
    let full = (1u64 << language_len) - 1;
    1..full
}

fn extension_block(language: &Language, input_mask: u64) -> u64 {
    let inputs = IdSet::from_block(language.len(), input_mask);
    language.extension_of_set(&inputs).members().as_block()
}

/// Closed-form task count: the admissible-output sum over all input sets.
pub fn count_tasks(language: &Language, mode: SubsetMode) -> Result<u64> {
    if language.len() > limits::MAX_EXACT_SAMPLER_LANGUAGE {
        return Err(Error::BudgetExceeded {
            name: "MAX_EXACT_SAMPLER_LANGUAGE",
            limit: limits::MAX_EXACT_SAMPLER_LANGUAGE as u64,
            needed: language.len() as u64,
        });
    }
    let mut total = 0u64;
    for mask in proper_nonempty_input_masks(language.len()) {
        let e = extension_block(language, mask).count_ones() as usize;
        total += mode.admissible_outputs(e);
    }
    Ok(total)
}

/// Enumerates every valid task exactly once, in (input mask, output mask)
/// order.
pub fn enumerate_tasks(language: &Language, mode: SubsetMode) -> Result<TaskUniverse> {
    if language.len() > limits::MAX_EXHAUSTIVE_TASK_LANGUAGE {
        return Err(Error::BudgetExceeded {
            name: "MAX_EXHAUSTIVE_TASK_LANGUAGE",
            limit: limits::MAX_EXHAUSTIVE_TASK_LANGUAGE as u64,
            needed: language.len() as u64,
        });
    }
    let total = count_tasks(language, mode)?;
    if total > limits::MAX_TASK_UNIVERSE {
        return Err(Error::BudgetExceeded {
            name: "MAX_TASK_UNIVERSE",
            limit: limits::MAX_TASK_UNIVERSE,
            needed: total,
        });
    }
    let len = language.len();
    let mut inputs = Vec::new();
    let mut tasks = Vec::with_capacity(total as usize);
    for input_mask in proper_nonempty_input_masks(len) {
        let ext = extension_block(language, input_mask);
        let e = ext.count_ones() as usize;
        inputs.push(InputClass {
            input_mask,
            extension_size: e,
            admissible_outputs: mode.admissible_outputs(e),
        });
        for output_mask in submasks(ext) {
            if output_mask == 0 {
                continue;
            }
            if mode == SubsetMode::Strict && output_mask == ext {
                continue;
            }
            tasks.push(Task {
                inputs: IdSet::from_block(len, input_mask),
                outputs: IdSet::from_block(len, output_mask),
                mode,
                language: language.fingerprint(),
            });
        }
    }
    debug_assert_eq!(tasks.len() as u64, total);
    Ok(TaskUniverse {
        mode,
        language: language.fingerprint(),
        language_len: len,
        inputs,
        tasks,
        total,
    })
}

/// Which distribution a sampler draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistributionLabel {
    /// Exactly uniform over the task universe.
    Uniform,
    /// Inputs uniform, then outputs uniform: a different distribution, used
    /// when the input sets cannot be enumerated.
    InputUniform,
}

impl DistributionLabel {
    pub fn name(self) -> &'static str {
        match self {
            DistributionLabel::Uniform => "uniform",
            DistributionLabel::InputUniform => "input-uniform",
        }
    }
}

/// Draws tasks from the uniform distribution over the universe when the
/// input sets are enumerable, and from the labeled input-uniform fallback
/// otherwise.
#[derive(Debug)]
pub struct TaskSampler {
    mode: SubsetMode,
    language: u64,
    language_len: usize,
    kind: SamplerKind,
}

#[derive(Debug)]
enum SamplerKind {
    Exact {
        /// `(input mask, extension block, cumulative weight)` per admissible
        /// input, cumulative over admissible output counts.
        inputs: Vec<(u64, u64, u64)>,
        total: u64,
    },
    InputUniform,
}

impl TaskSampler {
    pub fn new(language: &Language, mode: SubsetMode) -> Result<Self> {
        let len = language.len();
        if len < 2 {
            // A proper non-empty input subset needs at least two statements.
            return Err(Error::NothingToSample {
                what: "task sampling",
                needed: "language with two or more statements",
            });
        }
        let kind = if len <= limits::MAX_EXACT_SAMPLER_LANGUAGE {
            let mut inputs = Vec::new();
            let mut cumulative = 0u64;
            for mask in proper_nonempty_input_masks(len) {
                let ext = extension_block(language, mask);
                let weight = mode.admissible_outputs(ext.count_ones() as usize);
                if weight == 0 {
                    continue;
                }
                cumulative += weight;
                inputs.push((mask, ext, cumulative));
            }
            if inputs.is_empty() {
                return Err(Error::NothingToSample {
                    what: "task sampling",
                    needed: "input set with an admissible output",
                });
            }
            SamplerKind::Exact {
                inputs,
                total: cumulative,
            }
        } else {
            SamplerKind::InputUniform
        };
        Ok(Self {
            mode,
            language: language.fingerprint(),
            language_len: len,
            kind,
        })
    }

    pub fn distribution(&self) -> DistributionLabel {
        match self.kind {
            SamplerKind::Exact { .. } => DistributionLabel::Uniform,
            SamplerKind::InputUniform => DistributionLabel::InputUniform,
        }
    }

    pub fn sample<R: Rng>(&self, language: &Language, rng: &mut R) -> Result<Task> {
        assert_eq!(language.fingerprint(), self.language, "sampler/language mismatch");
        match &self.kind {
            SamplerKind::Exact { inputs, total } => {
                let ticket = rng.random_range(0..*total);
                let idx = inputs.partition_point(|&(_, _, cum)| cum <= ticket);
                let (input_mask, ext, _) = inputs[idx];
                let outputs = uniform_output_mask(ext, self.mode, rng);
                Ok(Task {
                    inputs: IdSet::from_block(self.language_len, input_mask),
                    outputs: IdSet::from_block(self.language_len, outputs),
                    mode: self.mode,
                    language: self.language,
                })
            }
            SamplerKind::InputUniform => {
                for _ in 0..limits::SAMPLER_RETRY_BUDGET {
                    let inputs = random_subset(self.language_len, rng);
                    if inputs.is_empty() || inputs.len() == self.language_len {
                        continue;
                    }
                    let extension = language.extension_of_set(&inputs);
                    let outputs = match random_valid_outputs(
                        extension.members(),
                        self.mode,
                        rng,
                    ) {
                        Some(o) => o,
                        None => continue,
                    };
                    return Ok(Task {
                        inputs,
                        outputs,
                        mode: self.mode,
                        language: self.language,
                    });
                }
                Err(Error::SamplerExhausted {
                    attempts: limits::SAMPLER_RETRY_BUDGET,
                })
            }
        }
    }
}

/// Expands a rank in `[1, admissible]` onto the set bits of `extension`,
/// giving an exactly uniform admissible output mask.
fn uniform_output_mask<R: Rng>(extension: u64, mode: SubsetMode, rng: &mut R) -> u64 {
    let e = extension.count_ones() as usize;
    let admissible = mode.admissible_outputs(e);
    debug_assert!(admissible >= 1);
    let rank = rng.random_range(1..=admissible);
    let mut out = 0u64;
    let mut bits = rank;
    let mut rest = extension;
    while rest != 0 {
        let low = rest & rest.wrapping_neg();
        if bits & 1 == 1 {
            out |= low;
        }
        bits >>= 1;
        rest ^= low;
    }
    out
}

fn random_subset<R: Rng>(len: usize, rng: &mut R) -> IdSet {
    let mut set = IdSet::with_capacity(len);
    for id in 0..len {
        if rng.random::<bool>() {
            set.insert(id);
        }
    }
    set
}

/// Uniform non-empty (and, under strict mode, proper) subset of the members,
/// by rejection; `None` when no admissible subset exists.
fn random_valid_outputs<R: Rng>(
    members: &IdSet,
    mode: SubsetMode,
    rng: &mut R,
) -> Option<IdSet> {
    let size = members.len();
    if size == 0 || (mode == SubsetMode::Strict && size == 1) {
        return None;
    }
    loop {
        let mut picked: Vec<usize> = Vec::new();
        for id in members.iter() {
            if rng.random::<bool>() {
                picked.push(id);
            }
        }
        if picked.is_empty() {
            continue;
        }
        if mode == SubsetMode::Strict && picked.len() == size {
            continue;
        }
        let mut out = IdSet::with_capacity(size);
        for id in picked {
            out.insert(id);
        }
        return Some(out);
    }
}

/// The set of correct policies for a task: every statement whose extension
/// intersected with the inputs' extension is exactly the correct outputs.
#[derive(Debug, Clone)]
pub struct PolicySet {
    task: Task,
    members: IdSet,
}

impl PolicySet {
    pub fn task(&self) -> &Task {
        &self.task
    }

    pub fn members(&self) -> &IdSet {
        &self.members
    }

    pub fn contains(&self, id: StatementId) -> bool {
        self.members.contains(id)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }
}

pub fn correct_policies(language: &Language, task: &Task) -> PolicySet {
    assert_eq!(language.fingerprint(), task.language, "task/language mismatch");
    let input_extension = language.extension_of_set(&task.inputs);
    let mut members = IdSet::with_capacity(language.len());
    for policy in language.ids() {
        let selected = input_extension
            .members()
            .intersection(language.extension(policy).members());
        if selected.same_ids(&task.outputs) {
            members.insert(policy);
        }
    }
    PolicySet {
        task: task.clone(),
        members,
    }
}

/// The child relation: strictly fewer inputs, outputs contained in the
/// parent's.
pub fn is_child(child: &Task, parent: &Task) -> Result<bool> {
    if child.language != parent.language || child.mode != parent.mode {
        return Err(Error::LanguageMismatch);
    }
    Ok(child.inputs.is_subset_of(&parent.inputs)
        && !child.inputs.same_ids(&parent.inputs)
        && child.outputs.is_subset_of(&parent.outputs))
}

/// Length of the longest ascending child-to-parent chain starting at `task`.
pub fn task_level(universe: &TaskUniverse, task: &Task) -> Result<usize> {
    if universe.language != task.language || universe.mode != task.mode {
        return Err(Error::LanguageMismatch);
    }
    if universe.tasks.is_empty() {
        return Err(Error::RequiresExhaustive);
    }
    if universe.tasks.len() > limits::MAX_LEVEL_TASKS {
        return Err(Error::BudgetExceeded {
            name: "MAX_LEVEL_TASKS",
            limit: limits::MAX_LEVEL_TASKS as u64,
            needed: universe.tasks.len() as u64,
        });
    }
    let start = universe
        .tasks
        .iter()
        .position(|t| t.inputs.same_ids(&task.inputs) && t.outputs.same_ids(&task.outputs))
        .ok_or(Error::NotInLanguage)?;

    // Input cardinality strictly increases up the chain, so process tasks in
    // descending input size and take the best parent already resolved.
    let n = universe.tasks.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(universe.tasks[i].inputs.len()));
    let mut level = vec![0usize; n];
    for (pos, &i) in order.iter().enumerate() {
        let mut best = 0usize;
        let child = &universe.tasks[i];
        for &j in &order[..pos] {
            let parent = &universe.tasks[j];
            if parent.inputs.len() > child.inputs.len()
                && child.inputs.is_subset_of(&parent.inputs)
                && child.outputs.is_subset_of(&parent.outputs)
            {
                best = best.max(level[j] + 1);
            }
        }
        level[i] = best;
    }
    Ok(level[start])
}

/// Options for child sampling.
#[derive(Debug, Clone, Copy, Default)]
pub struct ChildOptions {
    /// Keep only a random non-empty subset of the visible correct outputs
    /// instead of all of them (sensitivity-analysis variant).
    pub subsample_outputs: bool,
}

/// Draws a child task with `m` of the parent's inputs and the correct
/// outputs visible through them. Retries up to the budget when the drawn
/// outputs violate the mode, and fails explicitly otherwise.
pub fn sample_child<R: Rng>(
    language: &Language,
    parent: &Task,
    m: usize,
    options: ChildOptions,
    rng: &mut R,
) -> Result<Task> {
    assert_eq!(language.fingerprint(), parent.language, "task/language mismatch");
    let input_ids = parent.inputs.ids();
    if m == 0 || m >= input_ids.len() {
        return Err(Error::ChildSizeOutOfRange {
            m,
            inputs: input_ids.len(),
        });
    }
    for _ in 0..limits::CHILD_RETRY_BUDGET {
        let chosen = sample_distinct(&input_ids, m, rng);
        let inputs = IdSet::from_ids(language.len(), chosen);
        let extension = language.extension_of_set(&inputs);
        let mut outputs = parent.outputs.intersection(extension.members());
        if options.subsample_outputs && !outputs.is_empty() {
            if let Some(subset) = random_valid_outputs(&outputs, SubsetMode::Lax, rng) {
                outputs = subset;
            }
        }
        if let Ok(child) = validate_task(language, inputs, outputs, parent.mode) {
            return Ok(child);
        }
    }
    Err(Error::ChildSearchExhausted {
        attempts: limits::CHILD_RETRY_BUDGET,
    })
}

fn sample_distinct<R: Rng>(pool: &[usize], m: usize, rng: &mut R) -> Vec<usize> {
    let mut indices: Vec<usize> = (0..pool.len()).collect();
    for i in 0..m {
        let j = rng.random_range(i..indices.len());
        indices.swap(i, j);
    }
    indices[..m].iter().map(|&i| pool[i]).collect()
}

/// How inference picks among the admissible outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Selector {
    /// Lowest statement id in canonical language order.
    FirstInOrder,
    /// Uniformly random admissible output.
    UniformRandom,
}

/// Outcome of one inference step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inference {
    /// Selected output, or `None` when the policy admits no completion of
    /// the input.
    pub output: Option<StatementId>,
    pub correct: bool,
}

/// Presented with an input, selects an output admitted by both the input and
/// the policy, and scores it against the task's correct outputs.
///
/// Any selected output of a correct policy is correct, but a correct policy
/// can admit no completion of one particular input (its extension may miss
/// that input's extension entirely); that case is the no-output result.
pub fn infer<R: Rng>(
    language: &Language,
    policy: StatementId,
    input: StatementId,
    task: &Task,
    selector: Selector,
    rng: &mut R,
) -> Result<Inference> {
    assert_eq!(language.fingerprint(), task.language, "task/language mismatch");
    if !task.inputs.contains(input) {
        return Err(Error::InputNotInTask);
    }
    let admissible = language
        .extension(input)
        .members()
        .intersection(language.extension(policy).members());
    let ids = admissible.ids();
    if ids.is_empty() {
        return Ok(Inference {
            output: None,
            correct: false,
        });
    }
    let chosen = match selector {
        Selector::FirstInOrder => ids[0],
        Selector::UniformRandom => ids[rng.random_range(0..ids.len())],
    };
    Ok(Inference {
        output: Some(chosen),
        correct: task.outputs.contains(chosen),
    })
}
