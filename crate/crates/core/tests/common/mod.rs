//! Seeded random instances shared by the integration tests.
#![allow(dead_code)]

use mwer_core::rational::{q, ratio};
use mwer_core::{Act, Event, Lottery, Measure, Menu, Q, StateSpace, UtilitySpec, WeightedMeasureSet};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const UTILITY_RANGE: i64 = 10;

pub fn prize(k: i64) -> String {
    if k < 0 {
        format!("m{}", -k)
    } else {
        format!("p{k}")
    }
}

/// Integer utilities `-10..=10` on prizes `m10..p10`.
pub fn utility() -> UtilitySpec {
    UtilitySpec::new((-UTILITY_RANGE..=UTILITY_RANGE).map(|k| (prize(k), q(k)))).unwrap()
}

pub fn space(rng: &mut ChaCha8Rng, max_states: usize) -> StateSpace {
    let n = rng.gen_range(2..=max_states);
    StateSpace::new((0..n).map(|i| format!("s{i}"))).unwrap()
}

/// Random measure with small denominators; some states may get zero mass.
pub fn measure(rng: &mut ChaCha8Rng, s: &StateSpace) -> Measure {
    loop {
        let raw: Vec<i64> = (0..s.len()).map(|_| rng.gen_range(0..6)).collect();
        let total: i64 = raw.iter().sum();
        if total > 0 {
            return Measure::new(s, raw.iter().map(|&r| ratio(r, total)).collect()).unwrap();
        }
    }
}

pub fn weight(rng: &mut ChaCha8Rng) -> Q {
    ratio(rng.gen_range(1..=10), 10)
}

pub fn weighted_set(rng: &mut ChaCha8Rng, s: &StateSpace, max_measures: usize) -> WeightedMeasureSet {
    let k = rng.gen_range(1..=max_measures);
    let items = (0..k).map(|i| (format!("h{i}"), measure(rng, s), weight(rng))).collect();
    WeightedMeasureSet::new(s, items).unwrap()
}

pub fn unweighted_set(rng: &mut ChaCha8Rng, s: &StateSpace, max_measures: usize) -> WeightedMeasureSet {
    let k = rng.gen_range(1..=max_measures);
    let items = (0..k).map(|i| (format!("h{i}"), measure(rng, s))).collect();
    WeightedMeasureSet::unweighted(s, items).unwrap()
}

pub fn event(rng: &mut ChaCha8Rng, s: &StateSpace) -> Event {
    loop {
        let flags: Vec<bool> = (0..s.len()).map(|_| rng.gen_bool(0.5)).collect();
        if flags.iter().any(|&f| f) {
            return Event::from_flags(s, flags).unwrap();
        }
    }
}

/// Degenerate or two-prize lottery over the integer grid.
pub fn lottery(rng: &mut ChaCha8Rng) -> Lottery {
    let a = rng.gen_range(-UTILITY_RANGE..=UTILITY_RANGE);
    if rng.gen_bool(0.7) {
        return Lottery::degenerate(prize(a));
    }
    let b = rng.gen_range(-UTILITY_RANGE..=UTILITY_RANGE);
    if a == b {
        return Lottery::degenerate(prize(a));
    }
    let p = ratio(rng.gen_range(1..10), 10);
    Lottery::new([(prize(a), p.clone()), (prize(b), q(1) - p)]).unwrap()
}

pub fn act(rng: &mut ChaCha8Rng, s: &StateSpace, name: &str) -> Act {
    Act::new(name, s, (0..s.len()).map(|_| lottery(rng)).collect()).unwrap()
}

pub fn menu(rng: &mut ChaCha8Rng, s: &StateSpace, max_acts: usize) -> Menu {
    let n = rng.gen_range(2..=max_acts);
    Menu::new((0..n).map(|i| act(rng, s, &format!("a{i}"))).collect()).unwrap()
}

pub fn table(rng: &mut ChaCha8Rng, states: usize, max_acts: usize) -> Vec<Vec<Q>> {
    let n = rng.gen_range(1..=max_acts);
    (0..n)
        .map(|_| (0..states).map(|_| q(rng.gen_range(-UTILITY_RANGE..=UTILITY_RANGE))).collect())
        .collect()
}
