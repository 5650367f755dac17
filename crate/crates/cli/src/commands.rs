//! Command execution: each command produces JSON results, a CSV table, and
//! an optional claim verdict that drives the exit code.

use serde::Serialize;
use serde_json::Value;

use ockham_core::experiments::{
    self, GenExperimentConfig, SearchStrategy, Verdict, VocabSearchConfig,
};
use ockham_core::proxies::{default_battery, GeneralisationTable, Population};
use ockham_core::report::{index_list, CsvTable, RatioRepr};
use ockham_core::tasks::DistributionLabel;
use ockham_core::{correct_policies, enumerate_tasks, EquivalenceMode, Error, Language, StatementId};

use crate::config::{build_language, build_task, require_fields, ResolvedConfig};

#[derive(Debug)]
pub enum CliError {
    /// Usage or configuration problem (exit 2).
    Config(String),
    /// A named budget was exceeded (exit 3).
    Budget(String),
}

impl CliError {
    fn from_core(err: Error) -> Self {
        match err {
            Error::BudgetExceeded { .. } => CliError::Budget(err.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<String> for CliError {
    fn from(msg: String) -> Self {
        // String-typed errors come from config handling.
        if msg.contains("budget") && msg.contains("exceeded") {
            CliError::Budget(msg)
        } else {
            CliError::Config(msg)
        }
    }
}

pub struct CommandOutput {
    pub results: Value,
    pub csv: CsvTable,
    pub claim: Option<Verdict>,
    pub distribution: Option<DistributionLabel>,
    /// Serialized counterexamples, replayable through the public operations.
    pub counterexamples: Vec<Value>,
    /// Report produced, but a search budget ran out (exit 3).
    pub budget_exhausted: bool,
}

fn to_value<T: Serialize>(value: &T) -> Result<Value, CliError> {
    serde_json::to_value(value).map_err(|e| CliError::Config(format!("serialization: {e}")))
}

#[derive(Serialize)]
struct StatementRow {
    id: StatementId,
    facts: Vec<usize>,
    fact_states: Vec<Vec<usize>>,
    description_length: usize,
    weakness: usize,
    truth_set: Vec<usize>,
}

fn statement_row(language: &Language, id: StatementId) -> StatementRow {
    let statement = language.statement(id);
    StatementRow {
        id,
        facts: statement.facts().indices(),
        fact_states: statement
            .facts()
            .iter()
            .map(|f| language.vocabulary().fact(f).states().indices())
            .collect(),
        description_length: statement.description_length(),
        weakness: language.weakness(id),
        truth_set: statement.intersection().indices(),
    }
}

pub fn run_lang(cfg: &ResolvedConfig) -> Result<CommandOutput, CliError> {
    let language = build_language(cfg)?;
    #[derive(Serialize)]
    struct LangResults {
        states: usize,
        vocabulary: Vec<Vec<usize>>,
        vocabulary_is_full: bool,
        language_size: usize,
        statements: Vec<StatementRow>,
    }
    let results = LangResults {
        states: language.space().len(),
        vocabulary: language
            .vocabulary()
            .facts()
            .iter()
            .map(|f| f.states().indices())
            .collect(),
        vocabulary_is_full: language.vocabulary().is_full(),
        language_size: language.len(),
        statements: language.ids().map(|id| statement_row(&language, id)).collect(),
    };
    let mut csv = CsvTable::new(vec![
        "statement_id",
        "facts",
        "description_length",
        "weakness",
        "truth_set",
    ]);
    for row in &results.statements {
        csv.push_row(vec![
            row.id.to_string(),
            index_list(&row.facts),
            row.description_length.to_string(),
            row.weakness.to_string(),
            index_list(&row.truth_set),
        ]);
    }
    Ok(CommandOutput {
        results: to_value(&results)?,
        csv,
        claim: None,
        distribution: None,
        counterexamples: Vec::new(),
        budget_exhausted: false,
    })
}

pub fn run_tasks(cfg: &ResolvedConfig) -> Result<CommandOutput, CliError> {
    let language = build_language(cfg)?;
    let universe = enumerate_tasks(&language, cfg.subset_mode).map_err(CliError::from_core)?;
    #[derive(Serialize)]
    struct TaskRow {
        id: usize,
        inputs: Vec<usize>,
        outputs: Vec<usize>,
    }
    #[derive(Serialize)]
    struct InputRow {
        input: Vec<usize>,
        extension_size: usize,
        admissible_outputs: u64,
    }
    #[derive(Serialize)]
    struct TasksResults {
        language_size: usize,
        total: u64,
        input_classes: Vec<InputRow>,
        tasks: Vec<TaskRow>,
    }
    let results = TasksResults {
        language_size: language.len(),
        total: universe.len(),
        input_classes: universe
            .input_classes()
            .iter()
            .map(|c| InputRow {
                input: ockham_core::IdSet::from_block(language.len(), c.input_mask).ids(),
                extension_size: c.extension_size,
                admissible_outputs: c.admissible_outputs,
            })
            .collect(),
        tasks: universe
            .tasks()
            .iter()
            .enumerate()
            .map(|(id, t)| TaskRow {
                id,
                inputs: t.inputs().ids(),
                outputs: t.outputs().ids(),
            })
            .collect(),
    };
    let mut csv = CsvTable::new(vec!["task_id", "inputs", "outputs"]);
    for row in &results.tasks {
        csv.push_row(vec![
            row.id.to_string(),
            index_list(&row.inputs),
            index_list(&row.outputs),
        ]);
    }
    Ok(CommandOutput {
        results: to_value(&results)?,
        csv,
        claim: None,
        distribution: None,
        counterexamples: Vec::new(),
        budget_exhausted: false,
    })
}

pub fn run_policies(cfg: &ResolvedConfig) -> Result<CommandOutput, CliError> {
    require_fields(cfg, &["task"]).map_err(CliError::Config)?;
    let language = build_language(cfg)?;
    let task = build_task(&language, cfg.task.as_ref().unwrap(), cfg.subset_mode)
        .map_err(CliError::Config)?;
    let policies = correct_policies(&language, &task);
    #[derive(Serialize)]
    struct PoliciesResults {
        inputs: Vec<usize>,
        outputs: Vec<usize>,
        count: usize,
        members: Vec<StatementRow>,
    }
    let results = PoliciesResults {
        inputs: task.inputs().ids(),
        outputs: task.outputs().ids(),
        count: policies.len(),
        members: policies
            .members()
            .iter()
            .map(|id| statement_row(&language, id))
            .collect(),
    };
    let mut csv = CsvTable::new(vec![
        "statement_id",
        "facts",
        "description_length",
        "weakness",
    ]);
    for row in &results.members {
        csv.push_row(vec![
            row.id.to_string(),
            index_list(&row.facts),
            row.description_length.to_string(),
            row.weakness.to_string(),
        ]);
    }
    Ok(CommandOutput {
        results: to_value(&results)?,
        csv,
        claim: None,
        distribution: None,
        counterexamples: Vec::new(),
        budget_exhausted: false,
    })
}

pub fn run_prop1(cfg: &ResolvedConfig) -> Result<CommandOutput, CliError> {
    require_fields(cfg, &["n"]).map_err(CliError::Config)?;
    if let Some(v) = &cfg.vocabulary {
        match v {
            crate::config::VocabSpec::Token(t) if t == "full" => {}
            other => {
                return Err(CliError::Config(format!(
                    "prop1 runs on the full vocabulary; remove `vocabulary` or set it to \"full\" (got {other})"
                )))
            }
        }
    }
    let report = experiments::check_subjectivity(cfg.n.unwrap(), &EquivalenceMode::ALL)
        .map_err(CliError::from_core)?;
    let mut csv = CsvTable::new(vec!["interpretation", "passes", "total", "verdict"]);
    for row in report.interpretations.iter().chain([&report.minimal_form]) {
        csv.push_row(vec![
            row.name.clone(),
            row.passes.to_string(),
            row.total.to_string(),
            format!("{:?}", row.verdict).to_lowercase(),
        ]);
    }
    let claim = report.claim_verdict;
    let counterexamples = report
        .counterexamples
        .iter()
        .map(to_value)
        .collect::<Result<Vec<_>, _>>()?;
    // Counterexamples live at the envelope level; drop the duplicate copy
    // inside the results object.
    let mut results = to_value(&report)?;
    if let Some(object) = results.as_object_mut() {
        object.remove("counterexamples");
    }
    Ok(CommandOutput {
        results,
        csv,
        claim: Some(claim),
        distribution: None,
        counterexamples,
        budget_exhausted: false,
    })
}

pub fn run_prop2() -> Result<CommandOutput, CliError> {
    let report = experiments::check_confounding();
    let mut csv = CsvTable::new(vec!["check", "left", "right", "holds"]);
    for o in &report.orderings {
        csv.push_row(vec![
            format!("ordering:{}", o.proxy),
            index_list(&o.lesser),
            index_list(&o.greater),
            o.holds.to_string(),
        ]);
    }
    for p in &report.pairs {
        csv.push_row(vec![
            "pair-agreement".to_string(),
            index_list(&p.left),
            index_list(&p.right),
            p.agree.to_string(),
        ]);
    }
    let claim = report.claim_verdict;
    let mut counterexamples = Vec::new();
    for o in report.orderings.iter().filter(|o| !o.holds) {
        counterexamples.push(to_value(o)?);
    }
    for p in report.pairs.iter().filter(|p| !p.agree) {
        counterexamples.push(to_value(p)?);
    }
    Ok(CommandOutput {
        results: to_value(&report)?,
        csv,
        claim: Some(claim),
        distribution: None,
        counterexamples,
        budget_exhausted: false,
    })
}

pub fn run_proxies(cfg: &ResolvedConfig) -> Result<CommandOutput, CliError> {
    let language = build_language(cfg)?;
    let table = GeneralisationTable::build(&language, cfg.subset_mode, cfg.population)
        .map_err(CliError::from_core)?;
    let battery = default_battery(cfg.seed);
    let battery_report = ockham_core::proxy_battery_table(&language, &table, &battery)
        .map_err(CliError::from_core)?;
    let correlations = experiments::correlation_report(&language, &table);
    #[derive(Serialize)]
    struct GenRow {
        id: StatementId,
        facts: Vec<usize>,
        count: u64,
        probability: RatioRepr,
        value: f64,
    }
    #[derive(Serialize)]
    struct ProxiesResults {
        battery: ockham_core::BatteryReport,
        correlations: experiments::CorrelationReport,
        generalisation: Vec<GenRow>,
    }
    let generalisation = language
        .ids()
        .map(|id| {
            let probability: RatioRepr = table.probability(id).into();
            GenRow {
                id,
                facts: language.statement(id).facts().indices(),
                count: table.count(id),
                value: probability.value(),
                probability,
            }
        })
        .collect();
    let results = ProxiesResults {
        battery: battery_report,
        correlations,
        generalisation,
    };
    let mut csv = CsvTable::new(vec!["proxy", "score", "delta_w", "rank"]);
    for row in &results.battery.rows {
        csv.push_row(vec![
            row.proxy.clone(),
            row.score.to_string(),
            row.delta_w.to_string(),
            row.rank.to_string(),
        ]);
    }
    let claim = if results.battery.weakness_minimal {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    Ok(CommandOutput {
        results: to_value(&results)?,
        csv,
        claim: Some(claim),
        distribution: Some(DistributionLabel::Uniform),
        counterexamples: Vec::new(),
        budget_exhausted: false,
    })
}

pub fn run_genexp(cfg: &ResolvedConfig) -> Result<CommandOutput, CliError> {
    if cfg.population != Population::Solvable {
        return Err(CliError::Config(
            "genexp runs on the solvable population; set population to \"solvable\" or omit it"
                .into(),
        ));
    }
    let language = build_language(cfg)?;
    let experiment = GenExperimentConfig {
        mode: cfg.subset_mode,
        trials: cfg.trials,
        child_size: cfg.child_size,
        seed: cfg.seed,
        bootstrap_resamples: cfg.bootstrap_resamples,
        subsample_outputs: cfg.subsample_outputs,
    };
    let report = experiments::generalisation_experiment(&language, &experiment)
        .map_err(CliError::from_core)?;
    let mut csv = CsvTable::new(vec!["metric", "value"]);
    let fmt_opt = |v: Option<f64>| v.map_or_else(|| "undefined".to_string(), |x| x.to_string());
    for (metric, value) in [
        ("trials", report.trials.to_string()),
        ("completed_trials", report.completed_trials.to_string()),
        ("failed_child_trials", report.failed_child_trials.to_string()),
        ("eligible_parents", report.eligible_parents.to_string()),
        ("rate_weakness", report.rate_weakness.to_string()),
        (
            "rate_description_length",
            report.rate_description_length.to_string(),
        ),
        ("ratio", fmt_opt(report.ratio)),
        ("ci_lower", fmt_opt(report.ci.lower)),
        ("ci_upper", fmt_opt(report.ci.upper)),
    ] {
        csv.push_row(vec![metric.to_string(), value]);
    }
    let distribution = report.distribution;
    Ok(CommandOutput {
        results: to_value(&report)?,
        csv,
        claim: None,
        distribution: Some(distribution),
        counterexamples: Vec::new(),
        budget_exhausted: false,
    })
}

pub fn run_vocabsearch(cfg: &ResolvedConfig) -> Result<CommandOutput, CliError> {
    require_fields(cfg, &["n", "k"]).map_err(CliError::Config)?;
    let search = VocabSearchConfig {
        states: cfg.n.unwrap(),
        vocab_size: cfg.k.unwrap(),
        budget: cfg.budget,
        seed: cfg.seed,
        restarts: cfg.restarts,
    };
    let report =
        experiments::search_confounded_vocabulary(&search).map_err(CliError::from_core)?;
    let csv = match report.strategy {
        SearchStrategy::Exhaustive => {
            let mut csv = CsvTable::new(vec!["candidate", "score", "num", "den", "facts"]);
            if let Some(table) = &report.table {
                for (i, entry) in table.iter().enumerate() {
                    csv.push_row(vec![
                        i.to_string(),
                        entry.score.value().to_string(),
                        entry.score.num.to_string(),
                        entry.score.den.to_string(),
                        entry
                            .facts
                            .iter()
                            .map(|f| index_list(f))
                            .collect::<Vec<_>>()
                            .join(";"),
                    ]);
                }
            }
            csv
        }
        SearchStrategy::HillClimb => {
            let mut csv = CsvTable::new(vec!["restart", "step", "score", "num", "den"]);
            if let Some(trajectories) = &report.restart_trajectories {
                for (r, trajectory) in trajectories.iter().enumerate() {
                    for (s, score) in trajectory.iter().enumerate() {
                        csv.push_row(vec![
                            r.to_string(),
                            s.to_string(),
                            score.value().to_string(),
                            score.num.to_string(),
                            score.den.to_string(),
                        ]);
                    }
                }
            }
            csv
        }
    };
    let budget_exhausted = report.incomplete;
    Ok(CommandOutput {
        results: to_value(&report)?,
        csv,
        claim: None,
        distribution: None,
        counterexamples: Vec::new(),
        budget_exhausted,
    })
}
