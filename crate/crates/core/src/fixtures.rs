//! Worked example problems: the robot delivery problem on its two-class
//! quotient state space and its variants with mixed and modified acts,
//! and the two-restaurant decision tree.

use crate::decision::{mix, Act, Lottery, Menu, UtilitySpec};
use crate::dynamics::{DecisionTree, NatureBranch};
use crate::measures::{Measure, StateSpace, WeightedMeasureSet};
use crate::rational::{q, Q};

pub const ONE_BROKEN: &str = "one_broken";
pub const TEN_BROKEN: &str = "ten_broken";

pub fn delivery_space() -> StateSpace {
    StateSpace::new([ONE_BROKEN, TEN_BROKEN]).expect("two distinct labels")
}

/// Prize label for a payoff value.
pub fn payoff_prize(value: i64) -> String {
    format!("y{value}")
}

/// Utility over every payoff that appears in the delivery tables.
pub fn delivery_utility() -> UtilitySpec {
    let values = [-20000, -10000, -5000, -4999, 0, 5000, 5001, 10000, 20000];
    UtilitySpec::new(values.iter().map(|&v| (payoff_prize(v), q(v)))).expect("distinct utilities")
}

/// An act paying `payoffs[s]` (a degenerate lottery) in state `s`.
pub fn payoff_act(name: &str, space: &StateSpace, payoffs: &[i64]) -> Act {
    let outcomes = payoffs.iter().map(|&v| Lottery::degenerate(payoff_prize(v))).collect();
    Act::new(name, space, outcomes).expect("one payoff per state")
}

pub fn cont() -> Act {
    payoff_act("cont", &delivery_space(), &[10000, -10000])
}

pub fn back() -> Act {
    payoff_act("back", &delivery_space(), &[0, 0])
}

pub fn check() -> Act {
    payoff_act("check", &delivery_space(), &[5001, -4999])
}

pub fn new_act() -> Act {
    payoff_act("new", &delivery_space(), &[20000, -20000])
}

pub fn base_menu() -> Menu {
    Menu::new(vec![cont(), back(), check()]).expect("distinct names")
}

pub fn extended_menu() -> Menu {
    Menu::new(vec![cont(), back(), check(), new_act()]).expect("distinct names")
}

/// `Pr₁` and `Pr₁₀` as point masses on the quotient states.
pub fn delivery_measures() -> Vec<Measure> {
    let s = delivery_space();
    vec![Measure::point_mass(&s, 0), Measure::point_mass(&s, 1)]
}

pub fn delivery_belief(weight_ten: Q) -> WeightedMeasureSet {
    let s = delivery_space();
    WeightedMeasureSet::new(
        &s,
        vec![
            ("pr1", Measure::point_mass(&s, 0), q(1)),
            ("pr10", Measure::point_mass(&s, 1), weight_ten),
        ],
    )
    .expect("valid weights")
}

/// `½cont + ½back`, named as in the tables.
pub fn half_cont_back() -> Act {
    mix(&crate::rational::ratio(1, 2), &cont(), &back()).renamed("half_cont_back")
}

/// Menu with `cont` mixed with the constant act `back`.
pub fn mixed_menu() -> Menu {
    Menu::new(vec![cont(), half_cont_back(), back(), check()]).expect("distinct names")
}

/// Menu whose acts share the same outcome distribution in every state.
pub fn state_independent_menu() -> Menu {
    let s = delivery_space();
    Menu::new(vec![
        cont(),
        half_cont_back(),
        back(),
        payoff_act("check1", &s, &[-5000, 5000]),
        payoff_act("check2", &s, &[-10000, 10000]),
    ])
    .expect("distinct names")
}

/// States for the restaurant problem: allergic to MSG, or to basil.
pub fn restaurant_space() -> StateSpace {
    StateSpace::new(["msg", "basil"]).expect("two distinct labels")
}

/// Chinese (then rice or stir-fry) versus Italian, with utilities
/// per allergy: Italian (5, -3), stir-fry (-2, 3), rice (0, 0).
/// Reproduces regrets 5 for Chinese+rice ex ante, 2 versus 3 at the
/// Chinese node, and Italian at the root under both menu policies.
pub fn restaurant_tree() -> DecisionTree {
    let s = restaurant_space();
    let msg = s.event(&["msg"]).expect("known state");
    let basil = s.event(&["basil"]).expect("known state");
    let dish = |m: i64, b: i64| DecisionTree::Nature {
        branches: vec![
            NatureBranch { event_name: "msg".into(), event: msg.clone(), child: DecisionTree::Utility(q(m)) },
            NatureBranch { event_name: "basil".into(), event: basil.clone(), child: DecisionTree::Utility(q(b)) },
        ],
    };
    DecisionTree::Decision {
        name: "root".into(),
        branches: vec![
            (
                "chinese".into(),
                DecisionTree::Decision {
                    name: "chinese".into(),
                    branches: vec![("rice".into(), dish(0, 0)), ("stirfry".into(), dish(-2, 3))],
                },
            ),
            ("italian".into(), dish(5, -3)),
        ],
    }
}

/// Two hypotheses about a binary outcome (`hit` with probability
/// `truth_hit` or `alt_hit`), equal prior weights, and a probe menu of bets
/// on the next outcome: `bet_hit` (1, -1), `bet_miss` (-1, 1), `safe` (0, 0).
pub fn binary_learning_problem(
    truth_hit: Q,
    alt_hit: Q,
) -> (crate::learning::ObservationModel, WeightedMeasureSet, crate::learning::Probe) {
    let s = StateSpace::new(["hit", "miss"]).expect("two distinct labels");
    let m = |p: &Q| Measure::new(&s, vec![p.clone(), q(1) - p]).expect("binary measure");
    let (truth, alt) = (m(&truth_hit), m(&alt_hit));
    let prior = WeightedMeasureSet::unweighted(&s, vec![("truth", truth.clone()), ("alt", alt.clone())])
        .expect("distinct measures");
    let model = crate::learning::ObservationModel::new(
        &s,
        vec![("truth".to_string(), truth.clone()), ("alt".to_string(), alt.clone())],
        "truth",
    )
    .expect("truth is listed");
    let u = UtilitySpec::new([("lose", q(-1)), ("even", q(0)), ("win", q(1))]).expect("distinct utilities");
    let act = |name: &str, a: &str, b: &str| {
        Act::new(name, &s, vec![Lottery::degenerate(a), Lottery::degenerate(b)]).expect("two outcomes")
    };
    let menu = Menu::new(vec![act("bet_hit", "win", "lose"), act("bet_miss", "lose", "win"), act("safe", "even", "even")])
        .expect("distinct names");
    let probe = crate::learning::Probe { menu, utility: u, measures: vec![truth, alt] };
    (model, prior, probe)
}
