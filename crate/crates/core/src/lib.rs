//! Finite-model workbench for abstraction layers, tasks, and policy-selection
//! proxies.
//!
//! The model is entirely combinatorial: environment states are indices,
//! facts are state sets, statements are fact sets with non-empty
//! intersection, and everything downstream (tasks, policies, proxy scores)
//! is computed exactly over bit-parallel set kernels. Probabilities on the
//! comparison path are exact rationals; floating point appears only in
//! descriptive statistics.

pub mod abstraction;
pub mod bits;
pub mod error;
pub mod experiments;
pub mod limits;
pub mod proxies;
pub mod report;
pub mod rng;
pub mod stats;
pub mod tasks;
pub mod universe;

pub use abstraction::{EquivalenceMode, ExtensionSet, Language, StatementId, Vocabulary};
pub use bits::{FactSet, IdSet, StateSet};
pub use error::{Error, Result, StatementError, TaskError};
pub use experiments::{
    check_confounding, check_subjectivity, confounding_fixture, confounding_score,
    correlation_report, generalisation_experiment, replay_subjectivity_counterexample,
    search_confounded_vocabulary, ConfoundingReport, CorrelationReport, GenExperimentConfig,
    GenExperimentReport, InterpretationResult, ScoredVocabulary, SearchStrategy,
    SubjectivityCounterexample, SubjectivityReport, Verdict, VocabSearchConfig,
    VocabSearchReport,
};
pub use proxies::{
    default_battery, disagreement_score, estimate_generalisation, proxy_battery_table,
    sample_efficiency_delta, simplicity_less, weakness_less, BatteryReport, BatteryRow,
    GeneralisationEstimate, GeneralisationTable, Population, Probability, Proxy, ProxyKind,
    RelationMatrix,
};
pub use tasks::{
    correct_policies, count_tasks, enumerate_tasks, infer, is_child, sample_child, task_level,
    validate_task, ChildOptions, DistributionLabel, Inference, PolicySet, Selector, SubsetMode,
    Task, TaskSampler, TaskUniverse,
};
pub use universe::{Fact, StateSpace, Statement};
