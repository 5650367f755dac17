//! Proxy orderings over statements and their exact disagreement with the
//! generalisation order.
//!
//! Probabilities of generalisation are kept as integer counts over the task
//! universe; every comparison happens on counts or reduced rationals, never
//! on floats. Relations are materialized as bit matrices so the
//! pair-disagreement sum reduces to XOR + popcount over rows.

use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::abstraction::{splitmix64, Language, StatementId};
use crate::bits::IdSet;
use crate::error::{Error, Result};
use crate::limits;
use crate::rng::derive_seed;
use crate::tasks::{self, DistributionLabel, SubsetMode, TaskSampler};

/// An exact probability: a count over the universe size.
pub type Probability = Ratio<u64>;

/// Which tasks count toward the generalisation denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Population {
    /// Every task in the universe.
    All,
    /// Only tasks with at least one correct policy.
    Solvable,
}

impl Population {
    pub fn name(self) -> &'static str {
        match self {
            Population::All => "all",
            Population::Solvable => "solvable",
        }
    }
}

impl std::fmt::Display for Population {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Exact per-statement generalisation counts over the whole task universe.
///
/// For a fixed input set `I` and policy `l` there is exactly one output set
/// making `l` correct (the part of `E_I` selected by `E_l`), so counting over
/// inputs is equivalent to the definitional loop over all tasks.
#[derive(Debug, Clone)]
pub struct GeneralisationTable {
    counts: Vec<u64>,
    total_tasks: u64,
    solvable_tasks: u64,
    mode: SubsetMode,
    population: Population,
}

impl GeneralisationTable {
    pub fn build(
        language: &Language,
        mode: SubsetMode,
        population: Population,
    ) -> Result<Self> {
        let len = language.len();
        if len > limits::MAX_EXACT_SAMPLER_LANGUAGE {
            return Err(Error::BudgetExceeded {
                name: "MAX_EXACT_SAMPLER_LANGUAGE",
                limit: limits::MAX_EXACT_SAMPLER_LANGUAGE as u64,
                needed: len as u64,
            });
        }
        let extensions: Vec<u64> = (0..len)
            .map(|id| language.extension(id).members().as_block())
            .collect();
        let mut counts = vec![0u64; len];
        let mut total_tasks = 0u64;
        let mut solvable_tasks = 0u64;
        let full = (1u64 << len) - 1;
        let mut distinct: Vec<u64> = Vec::with_capacity(len);
        for input_mask in 1..full {
            let mut input_ext = 0u64;
            let mut rest = input_mask;
            while rest != 0 {
                let id = rest.trailing_zeros() as usize;
                input_ext |= extensions[id];
                rest &= rest - 1;
            }
            total_tasks += mode.admissible_outputs(input_ext.count_ones() as usize);
            distinct.clear();
            for (policy, ext) in extensions.iter().enumerate() {
                let selected = input_ext & ext;
                let valid = selected != 0
                    && (mode == SubsetMode::Lax || selected != input_ext);
                if valid {
                    counts[policy] += 1;
                    distinct.push(selected);
                }
            }
            distinct.sort_unstable();
            distinct.dedup();
            solvable_tasks += distinct.len() as u64;
        }
        Ok(Self {
            counts,
            total_tasks,
            solvable_tasks,
            mode,
            population,
        })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, id: StatementId) -> u64 {
        self.counts[id]
    }

    pub fn total_tasks(&self) -> u64 {
        self.total_tasks
    }

    pub fn solvable_tasks(&self) -> u64 {
        self.solvable_tasks
    }

    pub fn mode(&self) -> SubsetMode {
        self.mode
    }

    pub fn population(&self) -> Population {
        self.population
    }

    pub fn distribution(&self) -> DistributionLabel {
        DistributionLabel::Uniform
    }

    fn denominator(&self) -> u64 {
        match self.population {
            Population::All => self.total_tasks,
            Population::Solvable => self.solvable_tasks,
        }
    }

    /// Exact probability that the statement generalises to a task drawn
    /// uniformly from the population.
    pub fn probability(&self, id: StatementId) -> Probability {
        let den = self.denominator();
        if den == 0 {
            Ratio::new(0, 1)
        } else {
            Ratio::new(self.counts[id], den)
        }
    }

    /// The generalisation order: strictly less probable to generalise.
    ///
    /// The denominator is shared, so the order reduces to count comparison
    /// and is identical under both populations.
    pub fn g_less(&self, l1: StatementId, l2: StatementId) -> bool {
        self.counts[l1] < self.counts[l2]
    }
}

/// Monte Carlo estimate of the generalisation probabilities, for descriptive
/// reports when the universe is not enumerable. Never feeds the exact
/// disagreement sum.
#[derive(Debug, Clone, Serialize)]
pub struct GeneralisationEstimate {
    pub hits: Vec<u64>,
    pub trials: u64,
    pub population_trials: u64,
    pub mode: SubsetMode,
    pub population: Population,
    pub distribution: DistributionLabel,
}

pub fn estimate_generalisation<R: Rng>(
    language: &Language,
    mode: SubsetMode,
    population: Population,
    trials: u64,
    rng: &mut R,
) -> Result<GeneralisationEstimate> {
    let sampler = TaskSampler::new(language, mode)?;
    let mut hits = vec![0u64; language.len()];
    let mut population_trials = 0u64;
    for _ in 0..trials {
        let task = sampler.sample(language, rng)?;
        let policies = tasks::correct_policies(language, &task);
        if population == Population::Solvable && policies.is_empty() {
            continue;
        }
        population_trials += 1;
        for id in policies.members().iter() {
            hits[id] += 1;
        }
    }
    Ok(GeneralisationEstimate {
        hits,
        trials,
        population_trials,
        mode,
        population,
        distribution: sampler.distribution(),
    })
}

/// `l1` is weaker than `l2`: its extension is strictly smaller.
pub fn weakness_less(language: &Language, l1: StatementId, l2: StatementId) -> bool {
    language.weakness(l1) < language.weakness(l2)
}

/// `l1` is simpler-ranked below `l2`: its form is strictly larger.
pub fn simplicity_less(language: &Language, l1: StatementId, l2: StatementId) -> bool {
    language.description_length(l1) > language.description_length(l2)
}

/// A total 0/1 decision rule over ordered statement pairs.
///
/// The built-ins cover the orders under study plus adversarial battery
/// members; arbitrary rules can be added through [`ProxyKind::Custom`].
pub struct Proxy {
    name: String,
    kind: ProxyKind,
}

/// An arbitrary pair-decision rule over a language and its generalisation
/// table.
pub type ProxyRule =
    Box<dyn Fn(&Language, &GeneralisationTable, StatementId, StatementId) -> bool + Send + Sync>;

pub enum ProxyKind {
    /// Strictly smaller extension.
    Weakness,
    /// Strictly larger form.
    DescriptionLength,
    /// Reverse of the weakness order.
    AntiWeakness,
    /// The exact generalisation order itself.
    Generalisation,
    /// Deterministic coin flip per ordered pair, keyed by the seed.
    SeededRandom(u64),
    /// Arbitrary decision rule.
    Custom(ProxyRule),
}

impl Proxy {
    pub fn new(name: impl Into<String>, kind: ProxyKind) -> Self {
        Self {
            name: name.into(),
            kind,
        }
    }

    pub fn weakness() -> Self {
        Self::new("weakness", ProxyKind::Weakness)
    }

    pub fn description_length() -> Self {
        Self::new("description-length", ProxyKind::DescriptionLength)
    }

    pub fn anti_weakness() -> Self {
        Self::new("anti-weakness", ProxyKind::AntiWeakness)
    }

    pub fn generalisation() -> Self {
        Self::new("generalisation", ProxyKind::Generalisation)
    }

    pub fn seeded_random(index: usize, seed: u64) -> Self {
        Self::new(
            format!("random-{index}"),
            ProxyKind::SeededRandom(derive_seed(seed, 0x52_4e_44 ^ index as u64)),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn holds(
        &self,
        language: &Language,
        table: &GeneralisationTable,
        l1: StatementId,
        l2: StatementId,
    ) -> bool {
        match &self.kind {
            ProxyKind::Weakness => weakness_less(language, l1, l2),
            ProxyKind::DescriptionLength => simplicity_less(language, l1, l2),
            ProxyKind::AntiWeakness => weakness_less(language, l2, l1),
            ProxyKind::Generalisation => table.g_less(l1, l2),
            ProxyKind::SeededRandom(seed) => {
                let pair = ((l1 as u64) << 32) | l2 as u64;
                splitmix64(seed ^ splitmix64(pair)) & 1 == 1
            }
            ProxyKind::Custom(rule) => rule(language, table, l1, l2),
        }
    }
}

impl std::fmt::Debug for Proxy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Proxy").field("name", &self.name).finish()
    }
}

/// The default battery: the two orders under study, their reversal, and five
/// seeded coin-flip relations.
pub fn default_battery(seed: u64) -> Vec<Proxy> {
    let mut battery = vec![
        Proxy::weakness(),
        Proxy::description_length(),
        Proxy::anti_weakness(),
    ];
    for i in 1..=5 {
        battery.push(Proxy::seeded_random(i, seed));
    }
    battery
}

/// A proxy materialized as an |L| x |L| bit matrix (row i holds the pairs
/// `(i, j)` for which the relation holds).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationMatrix {
    len: usize,
    rows: Vec<IdSet>,
}

impl RelationMatrix {
    pub fn build(
        proxy: &Proxy,
        language: &Language,
        table: &GeneralisationTable,
    ) -> Result<Self> {
        let len = language.len();
        if len > limits::MAX_RELATION_LANGUAGE {
            return Err(Error::BudgetExceeded {
                name: "MAX_RELATION_LANGUAGE",
                limit: limits::MAX_RELATION_LANGUAGE as u64,
                needed: len as u64,
            });
        }
        let rows = (0..len)
            .map(|i| {
                IdSet::from_ids(
                    len,
                    (0..len).filter(|&j| proxy.holds(language, table, i, j)),
                )
            })
            .collect();
        Ok(Self { len, rows })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn holds(&self, i: StatementId, j: StatementId) -> bool {
        self.rows[i].contains(j)
    }

    /// Pairs on which the two relations disagree, summed over all ordered
    /// pairs including the diagonal.
    pub fn disagreement(&self, other: &Self) -> u64 {
        assert_eq!(self.len, other.len);
        let mut sum = 0u64;
        for (a, b) in self.rows.iter().zip(&other.rows) {
            let mut diff = a.clone();
            // Symmetric difference via two subset-aware ops: union minus
            // intersection.
            let inter = a.intersection(b);
            diff.union_with(b);
            sum += (diff.len() - inter.len()) as u64;
        }
        sum
    }
}

/// Total disagreement of a proxy with the generalisation order over all
/// ordered pairs of statements.
pub fn disagreement_score(
    proxy: &Proxy,
    language: &Language,
    table: &GeneralisationTable,
) -> Result<u64> {
    let g = RelationMatrix::build(&Proxy::generalisation(), language, table)?;
    let q = RelationMatrix::build(proxy, language, table)?;
    Ok(q.disagreement(&g))
}

/// The exact sample-efficiency criterion: negative means `qa` is more sample
/// efficient than `qb`.
pub fn sample_efficiency_delta(
    qa: &Proxy,
    qb: &Proxy,
    language: &Language,
    table: &GeneralisationTable,
) -> Result<i64> {
    let a = disagreement_score(qa, language, table)?;
    let b = disagreement_score(qb, language, table)?;
    Ok(a as i64 - b as i64)
}

/// One battery row: a proxy's exact disagreement with the generalisation
/// order.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct BatteryRow {
    pub proxy: String,
    pub score: u64,
    pub delta_w: i64,
    pub rank: usize,
}

/// Scores of every battery member, sorted ascending, with the flag for
/// whether the weakness proxy attains the minimum.
#[derive(Debug, Clone, Serialize)]
pub struct BatteryReport {
    pub rows: Vec<BatteryRow>,
    pub weakness_score: u64,
    pub weakness_minimal: bool,
    pub mode: SubsetMode,
    pub population: Population,
    pub language_size: usize,
    pub total_tasks: u64,
    pub solvable_tasks: u64,
}

/// Scores a battery of proxies against the generalisation order.
///
/// The battery must contain the weakness proxy (by name) so the report can
/// flag whether it attains the minimal score.
pub fn proxy_battery_table(
    language: &Language,
    table: &GeneralisationTable,
    battery: &[Proxy],
) -> Result<BatteryReport> {
    let g = RelationMatrix::build(&Proxy::generalisation(), language, table)?;
    let mut scored: Vec<(String, u64)> = Vec::with_capacity(battery.len());
    for proxy in battery {
        let q = RelationMatrix::build(proxy, language, table)?;
        scored.push((proxy.name().to_string(), q.disagreement(&g)));
    }
    let weakness_score = scored
        .iter()
        .find(|(name, _)| name == "weakness")
        .map(|&(_, s)| s)
        .ok_or_else(|| Error::Config("battery must include the weakness proxy".into()))?;
    let min_score = scored.iter().map(|&(_, s)| s).min().unwrap_or(0);
    let mut rows: Vec<BatteryRow> = scored
        .into_iter()
        .map(|(proxy, score)| BatteryRow {
            proxy,
            score,
            delta_w: score as i64 - weakness_score as i64,
            rank: 0,
        })
        .collect();
    rows.sort_by(|a, b| a.score.cmp(&b.score).then_with(|| a.proxy.cmp(&b.proxy)));
    let scores: Vec<u64> = rows.iter().map(|r| r.score).collect();
    for row in rows.iter_mut() {
        row.rank = scores.iter().filter(|&&s| s < row.score).count() + 1;
    }
    Ok(BatteryReport {
        rows,
        weakness_score,
        weakness_minimal: weakness_score <= min_score,
        mode: table.mode(),
        population: table.population(),
        language_size: language.len(),
        total_tasks: table.total_tasks(),
        solvable_tasks: table.solvable_tasks(),
    })
}
