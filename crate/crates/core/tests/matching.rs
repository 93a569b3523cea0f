mod common;

use std::collections::{HashMap, HashSet};

use common::{faculty, forty_case_roster};
use fairshare::cohort::{match_pairs, FacultyRecord, MatchOutcome};
use proptest::prelude::*;

fn assert_valid(roster: &[FacultyRecord], out: &MatchOutcome, ratio: usize) {
    let by_id: HashMap<&str, &FacultyRecord> =
        roster.iter().map(|r| (r.person_id.as_str(), r)).collect();
    let mut used = HashSet::new();
    for pair in &out.pairs {
        assert_eq!(pair.control_ids.len(), ratio);
        let case = by_id[pair.case_id.as_str()];
        for id in &pair.control_ids {
            let control = by_id[id.as_str()];
            assert_eq!(case.gender, control.gender);
            assert_eq!(case.degree, control.degree);
            assert_eq!(case.title, control.title);
            assert_eq!(case.specialty, control.specialty);
            assert_eq!(case.school_id, control.school_id);
            assert_ne!(case.group_label, control.group_label);
            assert!(used.insert(id.clone()), "control {id} reused");
        }
    }
}

#[test]
fn forty_cases_one_to_two() {
    let roster = forty_case_roster();
    let out = match_pairs(&roster, "black", "white", 2, 7).unwrap();
    assert_eq!(out.pairs.len(), 40);
    assert!(out.unmatched.is_empty());
    let people: HashSet<&String> = out
        .pairs
        .iter()
        .flat_map(|p| std::iter::once(&p.case_id).chain(&p.control_ids))
        .collect();
    assert_eq!(people.len(), 120);
    assert_valid(&roster, &out, 2);
}

#[test]
fn same_seed_same_pairs_and_seeds_matter() {
    let roster = forty_case_roster();
    let a = match_pairs(&roster, "black", "white", 2, 99).unwrap();
    let b = match_pairs(&roster, "black", "white", 2, 99).unwrap();
    assert_eq!(a, b);
    let differs = (0..10).any(|s| match_pairs(&roster, "black", "white", 2, s).unwrap() != a);
    assert!(differs);
}

#[test]
fn selection_is_uniform_among_eligible() {
    let roster = vec![
        faculty("b", "black", "F", "Full", "s", 1),
        faculty("w0", "white", "F", "Full", "s", 1),
        faculty("w1", "white", "F", "Full", "s", 1),
        faculty("w2", "white", "F", "Full", "s", 1),
    ];
    let mut counts = HashMap::new();
    let trials = 3000;
    for seed in 0..trials {
        let out = match_pairs(&roster, "black", "white", 1, seed).unwrap();
        *counts
            .entry(out.pairs[0].control_ids[0].clone())
            .or_insert(0u32) += 1;
    }
    for id in ["w0", "w1", "w2"] {
        let share = f64::from(counts[id]) / trials as f64;
        assert!((share - 1.0 / 3.0).abs() < 0.04, "{id}: {share}");
    }
}

fn roster_strategy() -> impl Strategy<Value = Vec<FacultyRecord>> {
    prop::collection::vec((any::<bool>(), 0u8..2, 0u8..2, 0u8..3), 2..60).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, (is_case, g, t, s))| {
                let label = if is_case || i == 0 { "black" } else { "white" };
                let label = if i == 1 { "white" } else { label };
                faculty(
                    &format!("p{i}"),
                    label,
                    ["F", "M"][g as usize],
                    ["Full", "Assistant"][t as usize],
                    &format!("s{s}"),
                    1 + s,
                )
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn emitted_pairs_always_satisfy_criteria(roster in roster_strategy(), ratio in 1usize..=2, seed in any::<u64>()) {
        let out = match_pairs(&roster, "black", "white", ratio, seed).unwrap();
        assert_valid(&roster, &out, ratio);
        let cases = roster.iter().filter(|r| r.group_label == "black").count();
        prop_assert_eq!(out.pairs.len() + out.unmatched.len(), cases);
        prop_assert_eq!(&out, &match_pairs(&roster, "black", "white", ratio, seed).unwrap());
    }
}
