//! Equivalence of the optimized implementations with the naive definitional
//! oracles, plus frozen values derived from them.

mod common;

use common::*;
use num_rational::Ratio;
use ockham_core::proxies::{GeneralisationTable, Population, Proxy};
use ockham_core::{
    correct_policies, count_tasks, enumerate_tasks, proxy_battery_table, sample_efficiency_delta,
    validate_task, EquivalenceMode, Language, StateSpace, SubsetMode, Vocabulary,
};

fn languages_under_test() -> Vec<Language> {
    let mut langs = vec![fixture_language()];
    for n in 1..=3 {
        langs.push(Language::enumerate(Vocabulary::full(StateSpace::new(n).unwrap()).unwrap()).unwrap());
    }
    for (n, facts) in sweep_vocabularies(30, 4, 4) {
        langs.push(build_language(n, &facts));
    }
    langs
}

#[test]
fn language_enumeration_matches_subset_filter() {
    for lang in languages_under_test() {
        let expected = naive_language(&fact_sets(&lang));
        let actual = statement_sets(&lang);
        assert_eq!(actual.len(), expected.len());
        let expected_set: std::collections::BTreeSet<_> = expected.into_iter().collect();
        let actual_set: std::collections::BTreeSet<_> = actual.iter().cloned().collect();
        assert_eq!(actual_set, expected_set);
        // Canonical order: by length, then by fact mask.
        for pair in actual.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let key = |s: &Set| {
                (
                    s.len(),
                    s.iter().map(|i| 1u64 << i).sum::<u64>(),
                )
            };
            assert!(key(a) < key(b), "order violated: {a:?} !< {b:?}");
        }
    }
}

#[test]
fn extension_matches_superset_scan() {
    for lang in languages_under_test() {
        if lang.len() > 64 {
            continue;
        }
        let sets = statement_sets(&lang);
        for id in lang.ids() {
            let expected = naive_extension(&sets, id);
            let actual: Set = lang.extension(id).members().iter().collect();
            assert_eq!(actual, expected);
            assert_eq!(lang.weakness(id), expected.len());
            assert!(lang.extension(id).contains(id), "reflexivity");
        }
    }
}

#[test]
fn task_universe_matches_double_loop() {
    for lang in languages_under_test() {
        if lang.len() < 2 || lang.len() > 8 {
            continue;
        }
        let sets = statement_sets(&lang);
        for mode in [SubsetMode::Strict, SubsetMode::Lax] {
            let expected = naive_tasks(&sets, mode);
            let universe = enumerate_tasks(&lang, mode).unwrap();
            assert_eq!(universe.len(), expected.len() as u64);
            assert_eq!(count_tasks(&lang, mode).unwrap(), expected.len() as u64);
            let expected_set: std::collections::BTreeSet<_> = expected.into_iter().collect();
            let actual_set: std::collections::BTreeSet<(Set, Set)> = universe
                .tasks()
                .iter()
                .map(|t| {
                    (
                        t.inputs().iter().collect(),
                        t.outputs().iter().collect(),
                    )
                })
                .collect();
            assert_eq!(actual_set, expected_set);
        }
    }
}

#[test]
fn fixture_universe_counts() {
    let lang = fixture_language();
    assert_eq!(enumerate_tasks(&lang, SubsetMode::Strict).unwrap().len(), 14);
    assert_eq!(enumerate_tasks(&lang, SubsetMode::Lax).unwrap().len(), 20);
}

#[test]
fn policy_sets_match_definitional_filter() {
    for lang in languages_under_test() {
        if lang.len() < 2 || lang.len() > 6 {
            continue;
        }
        let sets = statement_sets(&lang);
        for mode in [SubsetMode::Strict, SubsetMode::Lax] {
            let universe = enumerate_tasks(&lang, mode).unwrap();
            for task in universe.tasks() {
                let inputs: Set = task.inputs().iter().collect();
                let outputs: Set = task.outputs().iter().collect();
                let expected = naive_policies(&sets, &inputs, &outputs);
                let actual: Set = correct_policies(&lang, task).members().iter().collect();
                assert_eq!(actual, expected, "task ({inputs:?}, {outputs:?})");
            }
        }
    }
}

#[test]
fn generalisation_counts_match_definitional_loop() {
    for lang in languages_under_test() {
        if lang.len() < 2 || lang.len() > 6 {
            continue;
        }
        let sets = statement_sets(&lang);
        for mode in [SubsetMode::Strict, SubsetMode::Lax] {
            let tasks = naive_tasks(&sets, mode);
            let table = GeneralisationTable::build(&lang, mode, Population::All).unwrap();
            assert_eq!(table.total_tasks(), tasks.len() as u64);
            let mut solvable = 0u64;
            for id in lang.ids() {
                let expected = tasks
                    .iter()
                    .filter(|(i, o)| naive_policies(&sets, i, o).contains(&id))
                    .count() as u64;
                assert_eq!(table.count(id), expected, "statement {id}");
            }
            for (i, o) in &tasks {
                if !naive_policies(&sets, i, o).is_empty() {
                    solvable += 1;
                }
            }
            assert_eq!(table.solvable_tasks(), solvable);
        }
    }
}

#[test]
fn fixture_probabilities_are_exact() {
    let lang = fixture_language();
    let table = GeneralisationTable::build(&lang, SubsetMode::Strict, Population::All).unwrap();
    let a = id_of(&lang, &Set::from([0]));
    let b = id_of(&lang, &Set::from([1]));
    let ab = id_of(&lang, &Set::from([0, 1]));
    assert_eq!(table.probability(ab), Ratio::new(5, 14));
    assert_eq!(table.probability(a), Ratio::new(3, 14));
    assert_eq!(table.probability(b), Ratio::new(3, 14));
}

/// Lax-mode closed form: a statement generalises to an input set iff the set
/// holds a statement whose truth set meets its own, so its task count is
/// 2^|L| - 2^(|L| - c) - 1 with c the number of compatible statements.
#[test]
fn lax_counts_match_compatibility_closed_form() {
    for lang in languages_under_test() {
        if lang.len() < 2 || lang.len() > 12 {
            continue;
        }
        let table = GeneralisationTable::build(&lang, SubsetMode::Lax, Population::All).unwrap();
        let l = lang.len() as u32;
        for id in lang.ids() {
            let truth = lang.statement(id).intersection();
            let compatible = lang
                .ids()
                .filter(|&other| !lang.statement(other).intersection().intersect(truth).is_empty())
                .count() as u32;
            let expected = (1u64 << l) - (1u64 << (l - compatible)) - 1;
            assert_eq!(table.count(id), expected, "statement {id}");
        }
    }
}

/// The exact pair-disagreement sum on the strict fixture, computed by the
/// definitional loop and frozen: the weakness and simplicity relations
/// coincide there, so their difference is zero while both disagree with the
/// generalisation order on 4 of the 9 ordered pairs.
#[test]
fn sample_efficiency_delta_fixture_golden() {
    let lang = fixture_language();
    let table = GeneralisationTable::build(&lang, SubsetMode::Strict, Population::All).unwrap();

    // Definitional oracle: evaluate the displayed sum term by term.
    let g = |x: usize, y: usize| u64::from(table.probability(x) < table.probability(y));
    let w = |x: usize, y: usize| u64::from(lang.weakness(x) < lang.weakness(y));
    let d = |x: usize, y: usize| {
        u64::from(lang.description_length(x) > lang.description_length(y))
    };
    let mut oracle_delta: i64 = 0;
    let mut oracle_score_w: i64 = 0;
    let mut oracle_score_d: i64 = 0;
    for x in lang.ids() {
        for y in lang.ids() {
            oracle_delta += (g(x, y).abs_diff(w(x, y))) as i64
                - (g(x, y).abs_diff(d(x, y))) as i64;
            oracle_score_w += g(x, y).abs_diff(w(x, y)) as i64;
            oracle_score_d += g(x, y).abs_diff(d(x, y)) as i64;
        }
    }
    assert_eq!(oracle_score_w, 4);
    assert_eq!(oracle_score_d, 4);
    assert_eq!(oracle_delta, 0);

    let delta = sample_efficiency_delta(
        &Proxy::weakness(),
        &Proxy::description_length(),
        &lang,
        &table,
    )
    .unwrap();
    assert_eq!(delta, oracle_delta);
}

/// Battery scores on the lax fixture, frozen after oracle computation. The
/// generalisation order is empty there (all statements share one
/// probability), so each proxy's score is the number of pairs it relates.
#[test]
fn lax_fixture_battery_golden() {
    let lang = fixture_language();
    let table = GeneralisationTable::build(&lang, SubsetMode::Lax, Population::All).unwrap();
    for id in lang.ids() {
        assert_eq!(table.probability(id), Ratio::new(3, 10)); // 6/20 reduced
    }
    let report = proxy_battery_table(&lang, &table, &ockham_core::default_battery(0)).unwrap();
    let scores: Vec<(String, u64)> = report
        .rows
        .iter()
        .map(|r| (r.proxy.clone(), r.score))
        .collect();
    // Deterministic for seed 0; w, d, and anti each relate 2 pairs.
    let expected: Vec<(String, u64)> = [
        ("anti-weakness", 2),
        ("description-length", 2),
        ("weakness", 2),
        ("random-2", 5),
        ("random-5", 5),
        ("random-4", 6),
        ("random-1", 7),
        ("random-3", 7),
    ]
    .into_iter()
    .map(|(n, s)| (n.to_string(), s))
    .collect();
    assert_eq!(scores, expected);
    assert!(report.weakness_minimal);
}

/// Correlation table on a four-state ring vocabulary, frozen after checking
/// the generalisation counts against the definitional loop: the weakness and
/// simplicity ranks coincide, simplicity tracks generalisation perfectly,
/// and the partial correlation is undefined through the collinear control.
#[test]
fn correlation_report_ring_vocabulary_golden() {
    use ockham_core::stats::Correlation;

    let lang = build_language(4, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]);
    assert_eq!(lang.len(), 8);
    let table = GeneralisationTable::build(&lang, SubsetMode::Strict, Population::All).unwrap();

    // Oracle: definitional loop over the enumerated universe.
    let sets = statement_sets(&lang);
    let tasks = naive_tasks(&sets, SubsetMode::Strict);
    for id in lang.ids() {
        let expected = tasks
            .iter()
            .filter(|(i, o)| naive_policies(&sets, i, o).contains(&id))
            .count() as u64;
        assert_eq!(table.count(id), expected);
        let frozen = if lang.description_length(id) == 1 { 240 } else { 222 };
        assert_eq!(table.count(id), frozen);
    }

    let report = ockham_core::correlation_report(&lang, &table);
    assert_eq!(
        report.weakness_vs_simplicity,
        Correlation::Defined { value: 1.0 }
    );
    assert_eq!(
        report.simplicity_vs_generalisation,
        Correlation::Defined { value: 1.0 }
    );
    assert!(matches!(
        report.simplicity_vs_generalisation_given_weakness,
        Correlation::Undefined { .. }
    ));
}

#[test]
fn sampled_estimates_track_exact_probabilities() {
    use ockham_core::estimate_generalisation;
    use ockham_core::rng::stream_rng;

    let lang = fixture_language();
    let table = GeneralisationTable::build(&lang, SubsetMode::Strict, Population::All).unwrap();
    let mut rng = stream_rng(7, 0);
    let estimate =
        estimate_generalisation(&lang, SubsetMode::Strict, Population::All, 2000, &mut rng)
            .unwrap();
    assert_eq!(estimate.population_trials, 2000);
    for id in lang.ids() {
        let exact = table.count(id) as f64 / table.total_tasks() as f64;
        let sampled = estimate.hits[id] as f64 / estimate.population_trials as f64;
        assert!(
            (exact - sampled).abs() < 0.05,
            "statement {id}: exact {exact} vs sampled {sampled}"
        );
    }
}

#[test]
fn oversized_language_sampling_is_labeled_input_uniform() {
    use ockham_core::rng::stream_rng;
    use ockham_core::{DistributionLabel, StateSpace, TaskSampler, Vocabulary};

    // The full three-state vocabulary induces 37 statements, past the exact
    // sampler's input-enumeration budget.
    let lang = ockham_core::Language::enumerate(
        Vocabulary::full(StateSpace::new(3).unwrap()).unwrap(),
    )
    .unwrap();
    let sampler = TaskSampler::new(&lang, SubsetMode::Lax).unwrap();
    assert_eq!(sampler.distribution(), DistributionLabel::InputUniform);
    let mut rng = stream_rng(5, 0);
    for _ in 0..20 {
        let task = sampler.sample(&lang, &mut rng).unwrap();
        assert!(validate_task(
            &lang,
            task.inputs().clone(),
            task.outputs().clone(),
            SubsetMode::Lax
        )
        .is_ok());
    }
}

#[test]
fn language_enumeration_guardrail_names_the_limit() {
    use ockham_core::universe::{Fact, StateSpace};
    use ockham_core::{Error, Language, StateSet, Vocabulary};

    let space = StateSpace::new(5).unwrap();
    let facts: Vec<Fact> = (1..=25u64).map(|m| Fact(StateSet(m))).collect();
    let vocab = Vocabulary::new(space, facts).unwrap();
    match Language::enumerate(vocab) {
        Err(Error::Guardrail { name, .. }) => {
            assert_eq!(name, "MAX_ENUMERABLE_VOCAB_FACTS")
        }
        other => panic!("expected a guardrail error, got {other:?}"),
    }
}

#[test]
fn minimal_forms_match_cardinality_scan_oracle() {
    for lang in languages_under_test() {
        if lang.len() > 40 {
            continue;
        }
        let sets = statement_sets(&lang);
        for id in lang.ids() {
            for mode in EquivalenceMode::ALL {
                let minimal = lang.minimal_equivalent_form(id, mode);
                // Oracle: scan every statement in (length, mask) order and
                // keep the first equivalent one.
                let oracle = lang
                    .ids()
                    .find(|&cand| match mode {
                        EquivalenceMode::SyntacticExtension => {
                            naive_extension(&sets, id) == naive_extension(&sets, cand)
                        }
                        EquivalenceMode::WeaknessCardinality => {
                            naive_extension(&sets, id).len()
                                == naive_extension(&sets, cand).len()
                        }
                        EquivalenceMode::SemanticTruthSet => {
                            lang.statement(id).intersection()
                                == lang.statement(cand).intersection()
                        }
                    })
                    .unwrap();
                assert_eq!(minimal, oracle);
                assert_eq!(lang.minimal_equivalent_form(minimal, mode), minimal);
            }
        }
    }
}

/// Def-style soundness spot check: policies from the definitional filter are
/// correct under both selectors, and the fixture exhibits a correct output
/// from an incorrect policy.
#[test]
fn policy_soundness_and_lucky_incorrect_policy() {
    let lang = fixture_language();
    let universe = enumerate_tasks(&lang, SubsetMode::Strict).unwrap();
    let mut rng = ockham_core::rng::stream_rng(99, 0);
    let mut lucky_found = false;
    for task in universe.tasks() {
        let policies = correct_policies(&lang, task);
        for pi in lang.ids() {
            for input in task.inputs().iter() {
                for selector in [
                    ockham_core::Selector::FirstInOrder,
                    ockham_core::Selector::UniformRandom,
                ] {
                    let outcome =
                        ockham_core::infer(&lang, pi, input, task, selector, &mut rng).unwrap();
                    if policies.contains(pi) {
                        assert!(outcome.correct, "correct policy gave incorrect output");
                    } else if outcome.correct {
                        lucky_found = true;
                    }
                }
            }
        }
    }
    assert!(
        lucky_found,
        "expected at least one incorrect policy implying a correct output"
    );
}

#[test]
fn task_literal_validation_round_trip() {
    // Round-trip: every enumerated task re-validates; mutated outputs fail.
    let lang = fixture_language();
    for mode in [SubsetMode::Strict, SubsetMode::Lax] {
        let universe = enumerate_tasks(&lang, mode).unwrap();
        for task in universe.tasks() {
            let again = validate_task(
                &lang,
                task.inputs().clone(),
                task.outputs().clone(),
                mode,
            )
            .unwrap();
            assert_eq!(&again, task);
        }
    }
}
