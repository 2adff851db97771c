mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mwer_core::decision::{profile_scores, rank, regret_profile};
use mwer_core::dsl::parse_problem;
use mwer_core::rational::{fmt_q, parse_q, q, ratio};
use mwer_core::{Belief, Q, Rule, WeightedMeasureSet};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Problem text for a random instance, written in a deliberately
/// non-canonical order.
fn problem_text(seed: u64) -> String {
    let mut r = rng(seed);
    let s = common::space(&mut r, 4);
    let set = common::weighted_set(&mut r, &s, 3);
    let menu = common::menu(&mut r, &s, 4);
    let mut text = String::new();
    for wm in set.entries().iter().rev() {
        let body: Vec<String> =
            s.labels().iter().zip(wm.measure.probs()).map(|(l, p)| format!("{l}: {}", fmt_q(p))).collect();
        text.push_str(&format!("hypothesis {} weight {} = {{ {} }}\n", wm.label, fmt_q(&wm.weight), body.join(", ")));
    }
    let mut states: Vec<&String> = s.labels().iter().collect();
    states.reverse();
    text.push_str(&format!("states: {}\n", states.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(" ")));
    let prizes: Vec<String> = (-common::UTILITY_RANGE..=common::UTILITY_RANGE).map(common::prize).collect();
    text.push_str(&format!("prizes: {}\n", prizes.join(" ")));
    let utils: Vec<String> = (-common::UTILITY_RANGE..=common::UTILITY_RANGE)
        .map(|k| format!("{} = {k}", common::prize(k)))
        .collect();
    text.push_str(&format!("utility: {}\n", utils.join(", ")));
    for a in menu.acts() {
        let body: Vec<String> = s
            .labels()
            .iter()
            .zip(a.outcomes())
            .map(|(l, lot)| {
                let parts: Vec<String> = lot.probs().iter().map(|(y, p)| format!("{y}: {}", fmt_q(p))).collect();
                format!("{l}: {{ {} }}", parts.join(", "))
            })
            .collect();
        text.push_str(&format!("act {} = {{ {} }}\n", a.name(), body.join(", ")));
    }
    let names: Vec<&str> = menu.acts().iter().map(|a| a.name()).collect();
    text.push_str(&format!("menu m = [{}]\n", names.join(", ")));
    text
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rationals_print_and_parse_back(n in -10_000i64..10_000, d in 1i64..10_000) {
        let x = ratio(n, d);
        prop_assert_eq!(parse_q(&fmt_q(&x)), Some(x));
    }

    #[test]
    fn normalization_is_idempotent_with_top_weight_one(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = common::space(&mut r, 5);
        let set = common::weighted_set(&mut r, &s, 5);
        prop_assert!(set.is_normalized());
        prop_assert!(set.entries().iter().any(|e| e.weight == q(1)));
        prop_assert_eq!(set.normalize().unwrap().to_canonical_text(), set.to_canonical_text());
    }

    #[test]
    fn update_order_does_not_matter(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = common::space(&mut r, 5);
        let set = common::weighted_set(&mut r, &s, 4);
        let (e1, e2) = (common::event(&mut r, &s), common::event(&mut r, &s));
        let both = e1.intersect(&e2).unwrap();
        prop_assume!(set.upper_likelihood(&both) > q(0));
        let a = set.sequential_update(&e1, &e2).unwrap().to_canonical_text();
        let b = set.sequential_update(&e2, &e1).unwrap().to_canonical_text();
        let c = set.likelihood_update(&both).unwrap().to_canonical_text();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&b, &c);
    }

    #[test]
    fn update_keeps_a_weight_of_one(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = common::space(&mut r, 5);
        let set = common::weighted_set(&mut r, &s, 4);
        let e = common::event(&mut r, &s);
        match set.likelihood_update(&e) {
            Ok(updated) => prop_assert!(updated.is_normalized()),
            Err(_) => prop_assert_eq!(set.upper_likelihood(&e), q(0)),
        }
    }

    #[test]
    fn full_weights_reduce_mwer_to_mer(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = common::space(&mut r, 5);
        let set = common::unweighted_set(&mut r, &s, 4);
        let t = common::table(&mut r, s.len(), 5);
        let a = profile_scores(Rule::Mwer, &t, &Belief::Weighted(set.clone())).unwrap();
        let b = profile_scores(Rule::Mer, &t, &Belief::Set(set.measures())).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn single_measure_mwer_ranks_like_seu(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = common::space(&mut r, 5);
        let pr = common::measure(&mut r, &s);
        let menu = common::menu(&mut r, &s, 5);
        let u = common::utility();
        let single = WeightedMeasureSet::unweighted(&s, vec![("only", pr.clone())]).unwrap();
        let a = rank(Rule::Mwer, &menu, &u, &Belief::Weighted(single)).unwrap();
        let b = rank(Rule::Seu, &menu, &u, &Belief::Measure(pr)).unwrap();
        prop_assert_eq!(a.groups(), b.groups());
    }

    #[test]
    fn lowering_weights_never_raises_mwer(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = common::space(&mut r, 4);
        let set = common::weighted_set(&mut r, &s, 4);
        let t = common::table(&mut r, s.len(), 4);
        let full = WeightedMeasureSet::unweighted(
            &s,
            set.entries().iter().map(|e| (e.label.clone(), e.measure.clone())).collect(),
        )
        .unwrap();
        let lower = profile_scores(Rule::Mwer, &t, &Belief::Weighted(set)).unwrap();
        let upper = profile_scores(Rule::Mwer, &t, &Belief::Weighted(full)).unwrap();
        for (a, b) in lower.iter().zip(&upper) {
            prop_assert!(a <= b);
        }
    }

    #[test]
    fn regrets_are_nonnegative_and_zero_at_the_state_best(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = common::space(&mut r, 4);
        let menu = common::menu(&mut r, &s, 5);
        let u = common::utility();
        let profiles: Vec<Vec<Q>> =
            menu.acts().iter().map(|a| regret_profile(a, &menu, &u).unwrap()).collect();
        for state in 0..s.len() {
            prop_assert!(profiles.iter().all(|p| p[state] >= q(0)));
            prop_assert!(profiles.iter().any(|p| p[state] == q(0)));
        }
    }

    #[test]
    fn positive_affine_utility_keeps_rankings(seed in any::<u64>(), scale in 1i64..20, shift in -50i64..50) {
        let mut r = rng(seed);
        let s = common::space(&mut r, 4);
        let set = common::weighted_set(&mut r, &s, 3);
        let menu = common::menu(&mut r, &s, 4);
        let u = common::utility();
        let v = u.affine(&ratio(scale, 3), &q(shift));
        for rule in [Rule::Mwer, Rule::Mmeu, Rule::Regret] {
            let belief = match rule {
                Rule::Mwer => Belief::Weighted(set.clone()),
                Rule::Mmeu => Belief::Set(set.measures()),
                _ => Belief::None,
            };
            let a = rank(rule, &menu, &u, &belief).unwrap();
            let b = rank(rule, &menu, &v, &belief).unwrap();
            prop_assert_eq!(a.groups(), b.groups());
        }
    }

    #[test]
    fn generated_problems_round_trip(seed in any::<u64>()) {
        let text = problem_text(seed);
        let doc = parse_problem(&text).map_err(|d| TestCaseError::fail(format!("{d:?}\n{text}")))?;
        let canon = doc.to_canonical_text();
        let again = parse_problem(&canon).map_err(|d| TestCaseError::fail(format!("{d:?}\n{canon}")))?;
        prop_assert_eq!(again.to_canonical_text(), canon);
    }
}
