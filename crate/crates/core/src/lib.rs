//! Decision making under ambiguity with weighted sets of probability
//! measures: exact rule evaluation (SEU, MMEU, minimax regret, MER, MWER),
//! likelihood updating, randomized axiom checks, decision trees and
//! learning simulations.

pub mod axioms;
pub mod decision;
pub mod dsl;
pub mod dynamics;
pub mod error;
pub mod fixtures;
pub mod learning;
pub mod measures;
pub mod rational;

pub use decision::{Act, Belief, Lottery, Menu, Ranking, Rule, UtilitySpec};
pub use error::{Error, Result};
pub use measures::{Event, Measure, StateSpace, WeightedMeasure, WeightedMeasureSet};
pub use rational::Q;
