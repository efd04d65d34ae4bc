mod common;

use common::realizations_brute_force;
use pgd::feasibility::{feasible_rows, FeasibilityCase};
use pgd::search::Budget;
use pgd::{
    realize, verify_pgd, verify_witness, CirculantRow, ConcurrenceMatrix, IncidenceStructure, SearchMode,
    SearchOutcome, SearchTask,
};
use proptest::prelude::*;
use std::collections::BTreeSet;

fn shift(d: &IncidenceStructure, s: usize) -> IncidenceStructure {
    let perm: Vec<usize> = (0..d.v()).map(|x| (x + s) % d.v()).collect();
    d.relabel(&perm)
}

/// Small tactical targets: cyclic developments of a random block, or arbitrary circulant rows.
fn micro_task() -> impl Strategy<Value = (ConcurrenceMatrix, usize, usize)> {
    let developed = (3usize..=6).prop_flat_map(|v| {
        (1usize..=3.min(v - 1)).prop_flat_map(move |k| {
            proptest::sample::subsequence((0..v).collect::<Vec<_>>(), k).prop_map(move |base| {
                let d = IncidenceStructure::new(v, (0..v).map(|s| base.iter().map(|x| (x + s) % v).collect()).collect())
                    .unwrap();
                (d.pair_counts(), k, v)
            })
        })
    });
    let shapes: Vec<(usize, usize, u64, usize)> = (3usize..=6)
        .flat_map(|v| (1..=3usize.min(v - 1)).flat_map(move |k| (1u64..=3).map(move |r| (v, k, r))))
        .filter(|&(v, k, r)| v * r as usize % k == 0 && v * r as usize / k <= 6)
        .map(|(v, k, r)| (v, k, r, v * r as usize / k))
        .collect();
    let rows = proptest::sample::select(shapes).prop_flat_map(|(v, k, r, b)| {
        prop::collection::vec(0..=r, v / 2).prop_map(move |rest| {
            let mut c = vec![r];
            c.extend(rest);
            (CirculantRow::new(v, c).unwrap().matrix(), k, b)
        })
    });
    prop_oneof![developed, rows]
}

fn all_witnesses(task: &SearchTask) -> BTreeSet<IncidenceStructure> {
    match realize(&task.clone().with_mode(SearchMode::All)) {
        SearchOutcome::Realized { witnesses, count } => {
            assert_eq!(count as usize, witnesses.len());
            witnesses.into_iter().collect()
        }
        SearchOutcome::Unrealizable => BTreeSet::new(),
        other => panic!("micro search ran out of budget: {other:?}"),
    }
}

fn small_cases() -> Vec<FeasibilityCase> {
    let mut out = Vec::new();
    for v in 5..=9 {
        for k in 3..=4u64 {
            for sigma in 1..v as u64 {
                out.extend(feasible_rows(v, k, sigma, 6).into_iter().filter(|c| c.params.b <= 24));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn all_mode_equals_brute_force((target, k, b) in micro_task()) {
        let task = SearchTask::new(target.clone(), k, b);
        let expected = realizations_brute_force(&target, k, b);
        let got = all_witnesses(&task);
        prop_assert_eq!(&got, &expected);
        for w in &got {
            prop_assert!(verify_witness(w, &task));
        }
    }

    #[test]
    fn cyclic_shifts_of_witnesses_are_witnesses((target, k, b) in micro_task(), s in 1usize..6) {
        prop_assume!(target.circulant_first_row().is_some());
        let got = all_witnesses(&SearchTask::new(target, k, b));
        for w in &got {
            let moved = shift(w, s % w.v());
            prop_assert!(got.contains(&moved), "{:?} shifted by {}", w, s);
        }
    }

    #[test]
    fn realized_witnesses_are_sound(i in any::<prop::sample::Index>(), flags in any::<bool>()) {
        let cases = small_cases();
        let case = &cases[i.index(cases.len())];
        let mut task = SearchTask::from_case(case).with_budget(Budget::nodes(200_000));
        if flags {
            task = task.without_flag_filter();
        }
        if let Some(w) = realize(&task).witness() {
            prop_assert!(verify_witness(w, &task), "{}", case.row);
            prop_assert_eq!(verify_pgd(w).unwrap(), case.params, "{}", case.row);
        }
    }
}

#[test]
fn outcomes_do_not_depend_on_thread_count() {
    let tasks: Vec<SearchTask> = [("6:2,1,1,0", 3, 4), ("6:6,4,3,4", 4, 9), ("8:4,2,2,2,0", 4, 8), ("9:6,2,2,0,2", 3, 18)]
        .iter()
        .map(|&(row, k, b)| SearchTask::new(row.parse::<CirculantRow>().unwrap().matrix(), k, b))
        .collect();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            tasks
                .iter()
                .flat_map(|t| [realize(t), realize(&t.clone().with_mode(SearchMode::All))])
                .collect::<Vec<_>>()
        })
    };
    let one = run(1);
    assert!(one.iter().all(SearchOutcome::is_realized));
    assert_eq!(one, run(4));
}
