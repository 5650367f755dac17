//! Executable claim checks: extension-collapse under the full vocabulary,
//! weakness/simplicity confounding on the worked fixture, correlation
//! tables, the child-to-parent generalisation experiment, and the search for
//! fully confounded vocabularies.
//!
//! Reports never contain free-text judgments: verdicts derive from counts,
//! and every counterexample is serialized completely enough to replay
//! through the public operations.

use num_rational::Ratio;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abstraction::{EquivalenceMode, Language, StatementId, Vocabulary};
use crate::bits::{FactSet, IdSet};
use crate::error::{Error, Result};
use crate::proxies::{simplicity_less, weakness_less, GeneralisationTable, Population};
use crate::report::RatioRepr;
use crate::rng::stream_rng;
use crate::stats::{partial_spearman, percentile_sorted, spearman, Correlation};
use crate::tasks::{
    self, ChildOptions, DistributionLabel, SubsetMode, Task, TaskUniverse,
};
use crate::universe::{Fact, StateSpace};

/// Mechanical verdict for one checked interpretation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    NotApplicable,
}

impl Verdict {
    fn from_counts(passes: u64, total: u64) -> Self {
        if total == 0 {
            Verdict::NotApplicable
        } else if passes == total {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

/// Pass counts for one interpretation of a checked claim.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InterpretationResult {
    pub name: String,
    pub passes: u64,
    pub total: u64,
    pub verdict: Verdict,
}

impl InterpretationResult {
    fn new(name: impl Into<String>, passes: u64, total: u64) -> Self {
        Self {
            name: name.into(),
            passes,
            total,
            verdict: Verdict::from_counts(passes, total),
        }
    }
}

/// Cap on serialized counterexamples per report.
pub const COUNTEREXAMPLE_CAP: usize = 16;

/// A statement whose collapse to its intersection fact is not an equivalence
/// under the named interpretation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubjectivityCounterexample {
    /// Fact indices of the statement, in canonical vocabulary order.
    pub statement: Vec<usize>,
    /// The member facts spelled out as state lists.
    pub statement_facts: Vec<Vec<usize>>,
    /// States in the statement's intersection.
    pub truth_set: Vec<usize>,
    /// Index of the vocabulary fact equal to the intersection.
    pub collapsed_fact: usize,
    pub interpretation: EquivalenceMode,
    pub statement_extension_size: usize,
    pub singleton_extension_size: usize,
}

/// Result of the no-abstraction check at a given state count.
#[derive(Debug, Clone, Serialize)]
pub struct SubjectivityReport {
    pub states: usize,
    pub vocabulary_size: usize,
    pub language_size: usize,
    /// One row per equivalence interpretation of the collapse step.
    pub interpretations: Vec<InterpretationResult>,
    /// Every minimal truth-set-equivalent form must have length one.
    pub minimal_form: InterpretationResult,
    pub counterexamples: Vec<SubjectivityCounterexample>,
    pub counterexample_cap: usize,
    /// The asserted reading: truth-set interpretation plus minimal forms.
    pub claim_verdict: Verdict,
}

/// Largest state count for the full-vocabulary sweep.
pub const MAX_SUBJECTIVITY_STATES: usize = 3;

/// Checks, for every statement of the no-abstraction language, whether
/// collapsing it to its intersection fact preserves its extension, its
/// extension cardinality, and its truth set, and whether its minimal
/// truth-set-equivalent form has length one.
pub fn check_subjectivity(
    states: usize,
    interpretations: &[EquivalenceMode],
) -> Result<SubjectivityReport> {
    if states > MAX_SUBJECTIVITY_STATES {
        return Err(Error::Guardrail {
            name: "MAX_SUBJECTIVITY_STATES",
            limit: MAX_SUBJECTIVITY_STATES as u64,
            requested: states as u64,
        });
    }
    let space = StateSpace::new(states)?;
    let language = Language::enumerate(Vocabulary::full(space)?)?;
    let total = language.len() as u64;

    let mut passes = vec![0u64; interpretations.len()];
    let mut counterexamples = Vec::new();
    let mut minimal_passes = 0u64;
    for id in language.ids() {
        let statement = language.statement(id);
        let truth = statement.intersection();
        let fact_index = language
            .vocabulary()
            .find_fact(truth)
            .expect("the full vocabulary contains every truth set");
        let singleton = language
            .id_of_mask(FactSet::singleton(fact_index))
            .expect("singleton statements over non-empty facts are valid");
        for (k, &mode) in interpretations.iter().enumerate() {
            if language.equivalent(id, singleton, mode) {
                passes[k] += 1;
            } else if counterexamples.len() < COUNTEREXAMPLE_CAP {
                counterexamples.push(SubjectivityCounterexample {
                    statement: statement.facts().indices(),
                    statement_facts: statement
                        .facts()
                        .iter()
                        .map(|f| language.vocabulary().fact(f).states().indices())
                        .collect(),
                    truth_set: truth.indices(),
                    collapsed_fact: fact_index,
                    interpretation: mode,
                    statement_extension_size: language.weakness(id),
                    singleton_extension_size: language.weakness(singleton),
                });
            }
        }
        let minimal = language.minimal_equivalent_form(id, EquivalenceMode::SemanticTruthSet);
        if language.description_length(minimal) == 1 {
            minimal_passes += 1;
        }
    }

    let interpretations: Vec<InterpretationResult> = interpretations
        .iter()
        .zip(&passes)
        .map(|(&mode, &p)| InterpretationResult::new(mode.name(), p, total))
        .collect();
    let minimal_form =
        InterpretationResult::new("minimal-semantic-form-length-1", minimal_passes, total);
    let semantic_verdict = interpretations
        .iter()
        .find(|r| r.name == EquivalenceMode::SemanticTruthSet.name())
        .map(|r| r.verdict)
        .unwrap_or(Verdict::NotApplicable);
    let claim_verdict = if semantic_verdict == Verdict::Holds
        && minimal_form.verdict == Verdict::Holds
    {
        Verdict::Holds
    } else if semantic_verdict == Verdict::NotApplicable {
        Verdict::NotApplicable
    } else {
        Verdict::Fails
    };
    Ok(SubjectivityReport {
        states,
        vocabulary_size: language.vocabulary().len(),
        language_size: language.len(),
        interpretations,
        minimal_form,
        counterexamples,
        counterexample_cap: COUNTEREXAMPLE_CAP,
        claim_verdict,
    })
}

/// Re-runs a serialized counterexample; true when it still fails.
pub fn replay_subjectivity_counterexample(
    language: &Language,
    ce: &SubjectivityCounterexample,
) -> bool {
    let statement = match language.id_of_mask(FactSet::from_indices(ce.statement.iter().copied()))
    {
        Some(id) => id,
        None => return false,
    };
    let singleton = match language.id_of_mask(FactSet::singleton(ce.collapsed_fact)) {
        Some(id) => id,
        None => return false,
    };
    !language.equivalent(statement, singleton, ce.interpretation)
}

/// The four-state, two-fact vocabulary of the worked confounding example
/// (states re-indexed to 0-based: a = {0,1,3}, b = {0,2,3}).
pub fn confounding_fixture() -> Language {
    let space = StateSpace::new(4).expect("4 states");
    let vocab = Vocabulary::new(
        space,
        vec![Fact::from_states([0, 1, 3]), Fact::from_states([0, 2, 3])],
    )
    .expect("fixture vocabulary");
    Language::enumerate(vocab).expect("fixture language")
}

/// One asserted strict ordering between two fixture statements.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderingCheck {
    pub proxy: String,
    pub lesser: Vec<usize>,
    pub greater: Vec<usize>,
    pub holds: bool,
}

/// Agreement of the weakness and simplicity orders on one ordered pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairAgreement {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub weakness_less: bool,
    pub simplicity_less: bool,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfoundingReport {
    /// The enumerated language as fact-index lists.
    pub language: Vec<Vec<usize>>,
    pub language_as_expected: bool,
    pub orderings: Vec<OrderingCheck>,
    pub pairs: Vec<PairAgreement>,
    pub ordering_result: InterpretationResult,
    pub pair_result: InterpretationResult,
    pub claim_verdict: Verdict,
}

/// Builds the worked fixture and checks the four asserted orderings plus the
/// full pairwise equivalence of the weakness and simplicity orders.
pub fn check_confounding() -> ConfoundingReport {
    let language = confounding_fixture();
    let forms: Vec<Vec<usize>> = language
        .statements()
        .iter()
        .map(|s| s.facts().indices())
        .collect();
    let language_as_expected = forms == vec![vec![0], vec![1], vec![0, 1]];

    let a = language.id_of_mask(FactSet::singleton(0)).expect("{a}");
    let b = language.id_of_mask(FactSet::singleton(1)).expect("{b}");
    let ab = language
        .id_of_mask(FactSet::from_indices([0, 1]))
        .expect("{a,b}");

    let mut orderings = Vec::new();
    for (proxy, lesser, greater, holds) in [
        ("weakness", ab, a, weakness_less(&language, ab, a)),
        ("weakness", ab, b, weakness_less(&language, ab, b)),
        (
            "description-length",
            ab,
            a,
            simplicity_less(&language, ab, a),
        ),
        (
            "description-length",
            ab,
            b,
            simplicity_less(&language, ab, b),
        ),
    ] {
        orderings.push(OrderingCheck {
            proxy: proxy.to_string(),
            lesser: language.statement(lesser).facts().indices(),
            greater: language.statement(greater).facts().indices(),
            holds,
        });
    }

    let mut pairs = Vec::new();
    for i in language.ids() {
        for j in language.ids() {
            let w = weakness_less(&language, i, j);
            let d = simplicity_less(&language, i, j);
            pairs.push(PairAgreement {
                left: language.statement(i).facts().indices(),
                right: language.statement(j).facts().indices(),
                weakness_less: w,
                simplicity_less: d,
                agree: w == d,
            });
        }
    }

    let ordering_passes = orderings.iter().filter(|o| o.holds).count() as u64;
    let pair_passes = pairs.iter().filter(|p| p.agree).count() as u64;
    let ordering_result =
        InterpretationResult::new("asserted-orderings", ordering_passes, orderings.len() as u64);
    let pair_result = InterpretationResult::new(
        "weakness-simplicity-agreement",
        pair_passes,
        pairs.len() as u64,
    );
    let claim_verdict = if language_as_expected
        && ordering_result.verdict == Verdict::Holds
        && pair_result.verdict == Verdict::Holds
    {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    ConfoundingReport {
        language: forms,
        language_as_expected,
        orderings,
        pairs,
        ordering_result,
        pair_result,
        claim_verdict,
    }
}

/// Rank correlations between weakness, negated description length, and the
/// generalisation probability.
#[derive(Debug, Clone, Serialize)]
pub struct CorrelationReport {
    pub mode: SubsetMode,
    pub population: Population,
    pub statements: usize,
    pub weakness_vs_simplicity: Correlation,
    pub simplicity_vs_generalisation: Correlation,
    pub simplicity_vs_generalisation_given_weakness: Correlation,
}

/// Spearman correlations over all statements: (weakness, -length),
/// (-length, generalisation), and the latter controlling for weakness.
pub fn correlation_report(
    language: &Language,
    table: &GeneralisationTable,
) -> CorrelationReport {
    let weakness: Vec<i128> = language
        .ids()
        .map(|id| language.weakness(id) as i128)
        .collect();
    let neg_length: Vec<i128> = language
        .ids()
        .map(|id| -(language.description_length(id) as i128))
        .collect();
    // Probabilities share one denominator, so counts rank identically.
    let generalisation: Vec<i128> = table.counts().iter().map(|&c| c as i128).collect();
    CorrelationReport {
        mode: table.mode(),
        population: table.population(),
        statements: language.len(),
        weakness_vs_simplicity: spearman(&weakness, &neg_length),
        simplicity_vs_generalisation: spearman(&neg_length, &generalisation),
        simplicity_vs_generalisation_given_weakness: partial_spearman(
            &neg_length,
            &generalisation,
            &weakness,
        ),
    }
}

/// Configuration of the child-to-parent generalisation experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenExperimentConfig {
    pub mode: SubsetMode,
    pub trials: u64,
    pub child_size: usize,
    pub seed: u64,
    pub bootstrap_resamples: u64,
    /// Keep only a random subset of the visible correct outputs when
    /// forming children (sensitivity variant).
    pub subsample_outputs: bool,
}

impl Default for GenExperimentConfig {
    fn default() -> Self {
        Self {
            mode: SubsetMode::Lax,
            trials: 1000,
            child_size: 1,
            seed: 0,
            bootstrap_resamples: 1000,
            subsample_outputs: false,
        }
    }
}

/// Percentile bootstrap interval for the rate ratio.
#[derive(Debug, Clone, Serialize)]
pub struct BootstrapCi {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub level: f64,
    pub resamples: u64,
    pub degenerate_resamples: u64,
    pub method: String,
}

/// Outcome of the generalisation experiment.
#[derive(Debug, Clone, Serialize)]
pub struct GenExperimentReport {
    pub mode: SubsetMode,
    pub population: Population,
    pub distribution: DistributionLabel,
    pub seed: u64,
    pub trials: u64,
    pub completed_trials: u64,
    pub failed_child_trials: u64,
    pub child_size: usize,
    pub eligible_parents: u64,
    /// Mean fraction of weakness-maximal child policies that solve the
    /// parent.
    pub rate_weakness: f64,
    /// Mean fraction of simplicity-maximal child policies that solve the
    /// parent.
    pub rate_description_length: f64,
    pub ratio: Option<f64>,
    pub ci: BootstrapCi,
}

#[derive(Debug, Clone, Copy)]
enum TrialOutcome {
    Done { weakness: f64, simplicity: f64 },
    ChildFailed,
}

/// Per input set, the sorted achievable output masks (each policy selects
/// exactly one output set from a given input set).
fn achievable_outputs(
    language: &Language,
    universe: &TaskUniverse,
) -> Vec<(u64, Vec<u64>)> {
    let extensions: Vec<u64> = language
        .ids()
        .map(|id| language.extension(id).members().as_block())
        .collect();
    universe
        .input_classes()
        .iter()
        .map(|class| {
            let inputs = IdSet::from_block(language.len(), class.input_mask);
            let input_ext = language.extension_of_set(&inputs).members().as_block();
            let mut outs: Vec<u64> = extensions
                .iter()
                .map(|ext| input_ext & ext)
                .filter(|&sel| {
                    sel != 0 && (universe.mode() == SubsetMode::Lax || sel != input_ext)
                })
                .collect();
            outs.sort_unstable();
            outs.dedup();
            (class.input_mask, outs)
        })
        .collect()
}

fn solvable_task_indices(language: &Language, universe: &TaskUniverse) -> Vec<usize> {
    let achievable = achievable_outputs(language, universe);
    let mut by_input: std::collections::HashMap<u64, &Vec<u64>> =
        std::collections::HashMap::new();
    for (mask, outs) in &achievable {
        by_input.insert(*mask, outs);
    }
    universe
        .tasks()
        .iter()
        .enumerate()
        .filter(|(_, task)| {
            let outs = by_input
                .get(&task.inputs().as_block())
                .expect("every input class is recorded");
            outs.binary_search(&task.outputs().as_block()).is_ok()
        })
        .map(|(i, _)| i)
        .collect()
}

/// Statements of a policy set that are maximal under a key (no member scores
/// strictly higher).
fn maximal_by<K: Ord + Copy>(
    members: &[StatementId],
    key: impl Fn(StatementId) -> K,
) -> Vec<StatementId> {
    let best = members.iter().map(|&id| key(id)).max();
    match best {
        None => Vec::new(),
        Some(best) => members.iter().copied().filter(|&id| key(id) == best).collect(),
    }
}

/// Samples solvable parents, derives children from `child_size` examples,
/// and scores the weakness- and simplicity-maximal child policies against
/// the parent's correct policies.
pub fn generalisation_experiment(
    language: &Language,
    config: &GenExperimentConfig,
) -> Result<GenExperimentReport> {
    if config.trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    if config.child_size == 0 {
        return Err(Error::Config("child_size must be at least 1".into()));
    }
    let universe = tasks::enumerate_tasks(language, config.mode)?;
    let solvable = solvable_task_indices(language, &universe);
    let eligible: Vec<usize> = solvable
        .into_iter()
        .filter(|&i| universe.tasks()[i].inputs().len() > config.child_size)
        .collect();
    if eligible.is_empty() {
        return Err(Error::NothingToSample {
            what: "generalisation experiment",
            needed: "solvable parent with more inputs than child_size",
        });
    }

    let child_options = ChildOptions {
        subsample_outputs: config.subsample_outputs,
    };
    let outcomes: Vec<TrialOutcome> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream_rng(config.seed, trial);
            let parent: &Task =
                &universe.tasks()[eligible[rng.random_range(0..eligible.len())]];
            let child = match tasks::sample_child(
                language,
                parent,
                config.child_size,
                child_options,
                &mut rng,
            ) {
                Ok(child) => child,
                Err(_) => return TrialOutcome::ChildFailed,
            };
            let child_policies = tasks::correct_policies(language, &child);
            let members = child_policies.members().ids();
            if members.is_empty() {
                // Cannot happen for children of solvable parents; counted as
                // a failed trial rather than silently skipped.
                return TrialOutcome::ChildFailed;
            }
            let parent_policies = tasks::correct_policies(language, parent);
            let weakest = maximal_by(&members, |id| language.weakness(id));
            let simplest = maximal_by(&members, |id| {
                std::cmp::Reverse(language.description_length(id))
            });
            let frac = |set: &[StatementId]| {
                set.iter().filter(|&&id| parent_policies.contains(id)).count() as f64
                    / set.len() as f64
            };
            TrialOutcome::Done {
                weakness: frac(&weakest),
                simplicity: frac(&simplest),
            }
        })
        .collect();

    let mut w_scores = Vec::with_capacity(outcomes.len());
    let mut d_scores = Vec::with_capacity(outcomes.len());
    let mut failed = 0u64;
    for outcome in outcomes {
        match outcome {
            TrialOutcome::Done {
                weakness,
                simplicity,
            } => {
                w_scores.push(weakness);
                d_scores.push(simplicity);
            }
            TrialOutcome::ChildFailed => failed += 1,
        }
    }
    if w_scores.is_empty() {
        return Err(Error::ChildSearchExhausted {
            attempts: crate::limits::CHILD_RETRY_BUDGET,
        });
    }
    let completed = w_scores.len() as u64;
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    let rate_w = mean(&w_scores);
    let rate_d = mean(&d_scores);
    let ratio = (rate_d > 0.0).then(|| rate_w / rate_d);

    // Percentile bootstrap over trial pairs.
    let mut rng = stream_rng(config.seed, u64::MAX);
    let mut ratios: Vec<f64> = Vec::with_capacity(config.bootstrap_resamples as usize);
    let mut degenerate = 0u64;
    for _ in 0..config.bootstrap_resamples {
        let mut sw = 0.0;
        let mut sd = 0.0;
        for _ in 0..w_scores.len() {
            let i = rng.random_range(0..w_scores.len());
            sw += w_scores[i];
            sd += d_scores[i];
        }
        if sd > 0.0 {
            ratios.push(sw / sd);
        } else {
            degenerate += 1;
        }
    }
    ratios.sort_by(f64::total_cmp);
    let (lower, upper) = if ratios.is_empty() {
        (None, None)
    } else {
        (
            Some(percentile_sorted(&ratios, 0.025)),
            Some(percentile_sorted(&ratios, 0.975)),
        )
    };

    Ok(GenExperimentReport {
        mode: config.mode,
        population: Population::Solvable,
        distribution: DistributionLabel::Uniform,
        seed: config.seed,
        trials: config.trials,
        completed_trials: completed,
        failed_child_trials: failed,
        child_size: config.child_size,
        eligible_parents: eligible.len() as u64,
        rate_weakness: rate_w,
        rate_description_length: rate_d,
        ratio,
        ci: BootstrapCi {
            lower,
            upper,
            level: 0.95,
            resamples: config.bootstrap_resamples,
            degenerate_resamples: degenerate,
            method: "bootstrap-percentile".to_string(),
        },
    })
}

/// Guardrail on the state count for vocabulary search.
pub const MAX_SEARCH_STATES: usize = 8;
/// Guardrail on the vocabulary size for search (language is 2^k - 1
/// candidates per evaluation).
pub const MAX_SEARCH_VOCAB: usize = 16;
/// Cap on serialized perfect solutions.
pub const PERFECT_SOLUTION_CAP: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStrategy {
    Exhaustive,
    HillClimb,
}

/// Configuration of the confounded-vocabulary search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VocabSearchConfig {
    pub states: usize,
    pub vocab_size: usize,
    /// Cap on the number of vocabulary evaluations.
    pub budget: u64,
    pub seed: u64,
    pub restarts: u32,
}

impl Default for VocabSearchConfig {
    fn default() -> Self {
        Self {
            states: 4,
            vocab_size: 2,
            budget: 100_000,
            seed: 0,
            restarts: 16,
        }
    }
}

/// One evaluated vocabulary: facts as state lists plus the agreement score.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ScoredVocabulary {
    pub facts: Vec<Vec<usize>>,
    pub language_size: usize,
    pub score: RatioRepr,
}

#[derive(Debug, Clone, Serialize)]
pub struct VocabSearchReport {
    pub states: usize,
    pub vocab_size: usize,
    pub strategy: SearchStrategy,
    pub budget: u64,
    pub evaluations: u64,
    pub incomplete: bool,
    pub seed: u64,
    pub best: ScoredVocabulary,
    pub perfect_count: u64,
    /// Perfect (score 1) vocabularies, capped.
    pub perfect_solutions: Vec<ScoredVocabulary>,
    /// Full sweep table in candidate order (exhaustive strategy only).
    pub table: Option<Vec<ScoredVocabulary>>,
    /// Best score after each accepted move, per restart (hill-climb only).
    pub restart_trajectories: Option<Vec<Vec<RatioRepr>>>,
}

/// Fraction of distinct ordered statement pairs on which the weakness and
/// simplicity orders agree; vacuously 1 when no distinct pairs exist.
pub fn confounding_score(language: &Language) -> Ratio<u64> {
    let n = language.len() as u64;
    if n < 2 {
        return Ratio::new(1, 1);
    }
    let mut matched = 0u64;
    for i in language.ids() {
        for j in language.ids() {
            if i == j {
                continue;
            }
            if weakness_less(language, i, j) == simplicity_less(language, i, j) {
                matched += 1;
            }
        }
    }
    Ratio::new(matched, n * (n - 1))
}

fn score_fact_masks(states: usize, masks: &[u64]) -> Result<(Ratio<u64>, usize)> {
    let space = StateSpace::new(states)?;
    let facts = masks.iter().map(|&m| Fact(crate::bits::StateSet(m))).collect();
    let language = Language::enumerate(Vocabulary::new(space, facts)?)?;
    Ok((confounding_score(&language), language.len()))
}

fn scored_vocabulary(states: usize, masks: &[u64]) -> Result<ScoredVocabulary> {
    let (score, language_size) = score_fact_masks(states, masks)?;
    Ok(ScoredVocabulary {
        facts: masks
            .iter()
            .map(|&m| crate::bits::StateSet(m).indices())
            .collect(),
        language_size,
        score: score.into(),
    })
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

struct Combinations {
    pool: usize,
    indices: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(pool: usize, k: usize) -> Self {
        Self {
            pool,
            indices: (0..k).collect(),
            done: k > pool,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let current = self.indices.clone();
        let k = self.indices.len();
        // Advance to the next lexicographic combination.
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.indices[i] != i + self.pool - k {
                self.indices[i] += 1;
                for j in i + 1..k {
                    self.indices[j] = self.indices[j - 1] + 1;
                }
                break;
            }
        }
        Some(current)
    }
}

/// Searches vocabularies of `vocab_size` facts over `states` states for
/// maximal weakness/simplicity agreement: exhaustively when the candidate
/// count fits the budget, by seeded hill-climbing with restarts otherwise.
pub fn search_confounded_vocabulary(config: &VocabSearchConfig) -> Result<VocabSearchReport> {
    if config.states > MAX_SEARCH_STATES {
        return Err(Error::Guardrail {
            name: "MAX_SEARCH_STATES",
            limit: MAX_SEARCH_STATES as u64,
            requested: config.states as u64,
        });
    }
    let pool: u64 = 1u64 << config.states;
    if config.vocab_size == 0 || config.vocab_size as u64 > pool {
        return Err(Error::Config(format!(
            "vocab_size must be in 1..={pool} for {} states",
            config.states
        )));
    }
    if config.vocab_size > MAX_SEARCH_VOCAB {
        return Err(Error::Guardrail {
            name: "MAX_SEARCH_VOCAB",
            limit: MAX_SEARCH_VOCAB as u64,
            requested: config.vocab_size as u64,
        });
    }
    let candidates = binomial(pool, config.vocab_size as u64);
    if candidates <= config.budget as u128 {
        exhaustive_search(config)
    } else {
        hill_climb_search(config)
    }
}

fn exhaustive_search(config: &VocabSearchConfig) -> Result<VocabSearchReport> {
    let one = Ratio::new(1u64, 1u64);
    let mut evaluations = 0u64;
    let mut table = Vec::new();
    let mut best: Option<(Ratio<u64>, ScoredVocabulary)> = None;
    let mut perfect_count = 0u64;
    let mut perfect = Vec::new();
    for combo in Combinations::new(1usize << config.states, config.vocab_size) {
        let masks: Vec<u64> = combo.iter().map(|&i| i as u64).collect();
        let entry = scored_vocabulary(config.states, &masks)?;
        evaluations += 1;
        let score = entry.score.ratio();
        if score == one {
            perfect_count += 1;
            if perfect.len() < PERFECT_SOLUTION_CAP {
                perfect.push(entry.clone());
            }
        }
        if best.as_ref().is_none_or(|(b, _)| score > *b) {
            best = Some((score, entry.clone()));
        }
        table.push(entry);
    }
    let (_, best) = best.expect("at least one candidate");
    Ok(VocabSearchReport {
        states: config.states,
        vocab_size: config.vocab_size,
        strategy: SearchStrategy::Exhaustive,
        budget: config.budget,
        evaluations,
        incomplete: false,
        seed: config.seed,
        best,
        perfect_count,
        perfect_solutions: perfect,
        table: Some(table),
        restart_trajectories: None,
    })
}

fn hill_climb_search(config: &VocabSearchConfig) -> Result<VocabSearchReport> {
    let one = Ratio::new(1u64, 1u64);
    let pool: Vec<u64> = (0..1u64 << config.states).collect();
    let mut evaluations = 0u64;
    let mut incomplete = false;
    let mut best: Option<(Ratio<u64>, ScoredVocabulary)> = None;
    let mut trajectories = Vec::new();

    'restarts: for restart in 0..config.restarts.max(1) {
        let mut rng = stream_rng(config.seed, restart as u64);
        let mut current: Vec<u64> = {
            let mut indices: Vec<usize> = (0..pool.len()).collect();
            for i in 0..config.vocab_size {
                let j = rng.random_range(i..indices.len());
                indices.swap(i, j);
            }
            let mut masks: Vec<u64> =
                indices[..config.vocab_size].iter().map(|&i| pool[i]).collect();
            masks.sort_unstable();
            masks
        };
        if evaluations >= config.budget {
            incomplete = true;
            break;
        }
        let mut current_entry = scored_vocabulary(config.states, &current)?;
        evaluations += 1;
        let mut current_score = current_entry.score.ratio();
        let mut trajectory = vec![current_entry.score];
        if best.as_ref().is_none_or(|(b, _)| current_score > *b) {
            best = Some((current_score, current_entry.clone()));
        }

        loop {
            if current_score == one {
                break;
            }
            let mut improved: Option<(Ratio<u64>, Vec<u64>, ScoredVocabulary)> = None;
            for slot in 0..current.len() {
                for &replacement in &pool {
                    if current.contains(&replacement) {
                        continue;
                    }
                    if evaluations >= config.budget {
                        incomplete = true;
                        trajectories.push(trajectory.clone());
                        break 'restarts;
                    }
                    let mut neighbor = current.clone();
                    neighbor[slot] = replacement;
                    neighbor.sort_unstable();
                    let entry = scored_vocabulary(config.states, &neighbor)?;
                    evaluations += 1;
                    let score = entry.score.ratio();
                    if score > current_score
                        && improved.as_ref().is_none_or(|(b, _, _)| score > *b)
                    {
                        improved = Some((score, neighbor, entry));
                    }
                }
            }
            match improved {
                Some((score, neighbor, entry)) => {
                    current = neighbor;
                    current_score = score;
                    current_entry = entry;
                    trajectory.push(current_entry.score);
                    if best.as_ref().is_none_or(|(b, _)| current_score > *b) {
                        best = Some((current_score, current_entry.clone()));
                    }
                }
                None => break,
            }
        }
        trajectories.push(trajectory);
        if best.as_ref().is_some_and(|(b, _)| *b == one) {
            break;
        }
    }

    let (best_score, best) = best.ok_or(Error::BudgetExceeded {
        name: "VOCAB_SEARCH_BUDGET",
        limit: config.budget,
        needed: 1,
    })?;
    let perfect = if best_score == one {
        vec![best.clone()]
    } else {
        Vec::new()
    };
    Ok(VocabSearchReport {
        states: config.states,
        vocab_size: config.vocab_size,
        strategy: SearchStrategy::HillClimb,
        budget: config.budget,
        evaluations,
        incomplete,
        seed: config.seed,
        best,
        perfect_count: perfect.len() as u64,
        perfect_solutions: perfect,
        table: None,
        restart_trajectories: Some(trajectories),
    })
}
