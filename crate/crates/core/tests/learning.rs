use mwer_core::fixtures::binary_learning_problem;
use mwer_core::learning::{compare_updaters, simulate, ObservationModel, Probe, UpdaterSummary};
use mwer_core::rational::ratio;
use mwer_core::WeightedMeasureSet;

const LIK: usize = 0;
const MBM: usize = 1;
const ES: usize = 2;
const ALL: usize = 5;

fn binary() -> (ObservationModel, WeightedMeasureSet, Probe) {
    binary_learning_problem(ratio(9, 10), ratio(1, 2))
}

#[test]
fn trajectories_replay_from_their_seed() {
    let (model, prior, probe) = binary();
    let a = simulate(&model, &prior, &probe, 80, 17).unwrap();
    let b = simulate(&model, &prior, &probe, 80, 17).unwrap();
    let c = simulate(&model, &prior, &probe, 80, 18).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    assert_ne!(a.to_csv(), c.to_csv());
    assert_eq!(a.records.len(), 81);
}

#[test]
fn settle_rounds_for_the_binary_model() {
    let (model, prior, probe) = binary();
    let mut settles: Vec<usize> = (0..100)
        .map(|seed| simulate(&model, &prior, &probe, 500, seed).unwrap().settle_round().unwrap())
        .collect();
    settles.sort_unstable();
    assert_eq!(settles[49], 1, "median");
    assert_eq!(*settles.last().unwrap(), 19);
}

#[test]
fn updater_agreement_rates_are_pinned() {
    let (model, prior, probe) = binary();
    let seeds: Vec<u64> = (0..100).collect();
    let s = compare_updaters(&model, &prior, &probe, 500, &seeds, 0.1).unwrap();
    assert_eq!(s.runs, 100);
    assert_eq!(s.counts.len(), 501);
    // before any data every scheme holds both hypotheses at full weight
    assert_eq!(s.counts[0], [0, 0, 0, 100, 100, 100]);
    assert_eq!(s.counts[1][LIK], 89);
    assert_eq!(s.counts[5][ES], 66);
    assert_eq!(s.counts[10][ES], 80);
    let last_miss = |col: usize| (0..=500).rev().find(|&r| s.counts[r][col] < 100).unwrap();
    assert_eq!(last_miss(LIK), 18);
    assert_eq!(last_miss(ES), 45);
    // measure-by-measure conditioning on observations never moves the set
    for round in 0..=500 {
        assert_eq!(s.counts[round][MBM], 0, "round {round}");
    }
    // once likelihood updating settles it parts ways with the static set
    assert!((30..=500).all(|r| s.counts[r][ALL] == 0));
    let csv = s.to_csv();
    assert!(csv.starts_with(&format!("round,runs,{}\n", UpdaterSummary::COLUMNS.join(","))));
    assert_eq!(csv.lines().count(), 502);
}

#[test]
fn threshold_must_be_a_probability() {
    let (model, prior, probe) = binary();
    assert!(compare_updaters(&model, &prior, &probe, 5, &[1], 0.0).is_err());
    assert!(compare_updaters(&model, &prior, &probe, 5, &[1], 1.0).is_err());
}
