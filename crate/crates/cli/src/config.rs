//! Run configuration: JSON file format, flag merging, validation, and the
//! resolved echo embedded in every report.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use ockham_core::proxies::Population;
use ockham_core::universe::{Fact, StateSpace};
use ockham_core::{FactSet, IdSet, Language, SubsetMode, Task, Vocabulary};

/// Vocabulary specification: explicit fact lists, or `"full"` for the whole
/// powerset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VocabSpec {
    Token(String),
    Facts(Vec<Vec<usize>>),
}

impl fmt::Display for VocabSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VocabSpec::Token(t) => write!(f, "\"{t}\""),
            VocabSpec::Facts(facts) => write!(f, "{facts:?}"),
        }
    }
}

/// A task literal: statements as fact-index lists into the vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskLiteral {
    pub inputs: Vec<Vec<usize>>,
    pub outputs: Vec<Vec<usize>>,
}

/// The configuration file: every field optional, unknown fields rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub n: Option<usize>,
    pub vocabulary: Option<VocabSpec>,
    pub subset_mode: Option<SubsetMode>,
    pub population: Option<Population>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub child_size: Option<usize>,
    pub bootstrap_resamples: Option<u64>,
    pub subsample_outputs: Option<bool>,
    pub k: Option<usize>,
    pub budget: Option<u64>,
    pub restarts: Option<u32>,
    pub task: Option<TaskLiteral>,
}

/// Fully resolved configuration with defaults applied; embedded verbatim in
/// every report.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub n: Option<usize>,
    pub vocabulary: Option<VocabSpec>,
    pub subset_mode: SubsetMode,
    pub population: Population,
    pub seed: u64,
    pub trials: u64,
    pub child_size: usize,
    pub bootstrap_resamples: u64,
    pub subsample_outputs: bool,
    pub k: Option<usize>,
    pub budget: u64,
    pub restarts: u32,
    pub task: Option<TaskLiteral>,
    pub out_dir: String,
    pub formats: Vec<String>,
}

/// Flag-level overrides (flags win over the file).
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub mode: Option<SubsetMode>,
    pub population: Option<Population>,
}

pub fn parse_config(text: &str) -> Result<RawConfig, String> {
    serde_json::from_str(text).map_err(|e| format!("invalid config: {e}"))
}

pub fn load_config(path: Option<&Path>) -> Result<RawConfig, String> {
    match path {
        None => Ok(RawConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
            parse_config(&text)
        }
    }
}

pub fn resolve(
    raw: RawConfig,
    overrides: &Overrides,
    out_dir: &str,
    formats: &[String],
    default_population: Population,
) -> ResolvedConfig {
    ResolvedConfig {
        n: raw.n,
        vocabulary: raw.vocabulary,
        subset_mode: overrides.mode.or(raw.subset_mode).unwrap_or(SubsetMode::Strict),
        population: overrides
            .population
            .or(raw.population)
            .unwrap_or(default_population),
        seed: overrides.seed.or(raw.seed).unwrap_or(0),
        trials: raw.trials.unwrap_or(1000),
        child_size: raw.child_size.unwrap_or(1),
        bootstrap_resamples: raw.bootstrap_resamples.unwrap_or(1000),
        subsample_outputs: raw.subsample_outputs.unwrap_or(false),
        k: raw.k,
        budget: raw.budget.unwrap_or(100_000),
        restarts: raw.restarts.unwrap_or(16),
        task: raw.task,
        out_dir: out_dir.to_string(),
        formats: formats.to_vec(),
    }
}

/// Names every missing required field at once.
pub fn require_fields(cfg: &ResolvedConfig, fields: &[&str]) -> Result<(), String> {
    let missing: Vec<&str> = fields
        .iter()
        .copied()
        .filter(|&f| match f {
            "n" => cfg.n.is_none(),
            "vocabulary" => cfg.vocabulary.is_none(),
            "k" => cfg.k.is_none(),
            "task" => cfg.task.is_none(),
            other => unreachable!("unknown required field {other}"),
        })
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(format!("missing required fields: {}", missing.join(", ")))
    }
}

/// Builds the configured language (requires `n` and `vocabulary`).
pub fn build_language(cfg: &ResolvedConfig) -> Result<Language, String> {
    require_fields(cfg, &["n", "vocabulary"])?;
    let space = StateSpace::new(cfg.n.unwrap()).map_err(|e| e.to_string())?;
    let vocabulary = match cfg.vocabulary.as_ref().unwrap() {
        VocabSpec::Token(token) if token == "full" => {
            Vocabulary::full(space).map_err(|e| e.to_string())?
        }
        VocabSpec::Token(other) => {
            return Err(format!(
                "unknown vocabulary token \"{other}\" (expected \"full\" or fact lists)"
            ))
        }
        VocabSpec::Facts(facts) => {
            let facts: Vec<Fact> = facts
                .iter()
                .map(|f| Fact::from_states(f.iter().copied()))
                .collect();
            Vocabulary::new(space, facts).map_err(|e| e.to_string())?
        }
    };
    Language::enumerate(vocabulary).map_err(|e| e.to_string())
}

/// Resolves a task literal against the language.
pub fn build_task(
    language: &Language,
    literal: &TaskLiteral,
    mode: SubsetMode,
) -> Result<Task, String> {
    let resolve_side = |side: &[Vec<usize>], name: &str| -> Result<IdSet, String> {
        let mut ids = IdSet::with_capacity(language.len());
        for statement in side {
            let mask = FactSet::from_indices(statement.iter().copied());
            match language.id_of_mask(mask) {
                Some(id) => ids.insert(id),
                None => {
                    return Err(format!(
                        "{name} statement {statement:?} is not in the language"
                    ))
                }
            }
        }
        Ok(ids)
    };
    let inputs = resolve_side(&literal.inputs, "input")?;
    let outputs = resolve_side(&literal.outputs, "output")?;
    ockham_core::validate_task(language, inputs, outputs, mode)
        .map_err(|e| format!("invalid task: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_fixture_config() {
        let raw = parse_config(
            r#"{"n":4,"vocabulary":[[0,1,3],[0,2,3]],"subset_mode":"strict","seed":7}"#,
        )
        .unwrap();
        assert_eq!(raw.n, Some(4));
        assert_eq!(raw.seed, Some(7));
        let cfg = resolve(
            raw,
            &Overrides::default(),
            "out",
            &["json".into()],
            Population::All,
        );
        assert_eq!(cfg.subset_mode, SubsetMode::Strict);
        let lang = build_language(&cfg).unwrap();
        assert_eq!(lang.len(), 3);
    }

    #[test]
    fn full_token_and_guardrails() {
        let raw = parse_config(r#"{"n":4,"vocabulary":"full"}"#).unwrap();
        let cfg = resolve(
            raw,
            &Overrides::default(),
            "out",
            &[],
            Population::All,
        );
        assert!(build_language(&cfg).is_ok());
        let raw = parse_config(r#"{"n":7,"vocabulary":"full"}"#).unwrap();
        let cfg = resolve(raw, &Overrides::default(), "out", &[], Population::All);
        let err = build_language(&cfg).unwrap_err();
        assert!(err.contains("MAX_FULL_VOCAB_STATES"), "{err}");
    }

    #[test]
    fn unknown_fields_and_missing_fields_error() {
        assert!(parse_config(r#"{"bogus":1}"#).is_err());
        let cfg = resolve(
            RawConfig::default(),
            &Overrides::default(),
            "out",
            &[],
            Population::All,
        );
        let err = require_fields(&cfg, &["n", "vocabulary"]).unwrap_err();
        assert!(err.contains("n") && err.contains("vocabulary"));
    }

    #[test]
    fn flags_override_file_values() {
        let raw = parse_config(r#"{"seed":1,"subset_mode":"strict"}"#).unwrap();
        let overrides = Overrides {
            seed: Some(9),
            mode: Some(SubsetMode::Lax),
            population: None,
        };
        let cfg = resolve(raw, &overrides, "out", &[], Population::All);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.subset_mode, SubsetMode::Lax);
    }
}
