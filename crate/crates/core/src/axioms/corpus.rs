//! Known counterexamples, replayed before any random search.

use crate::fixtures;
use crate::rational::ratio;

use super::{AxiomId, AxiomInstance};

#[derive(Clone, Debug)]
pub struct CuratedInstance {
    pub name: String,
    pub axiom: AxiomId,
    pub instance: AxiomInstance,
}

fn curated(name: &str, axiom: AxiomId, instance: AxiomInstance) -> CuratedInstance {
    CuratedInstance { name: name.to_string(), axiom, instance }
}

/// Corpus entries; each applies only to oracles over the same state space.
pub fn curated_corpus() -> Vec<CuratedInstance> {
    let u = fixtures::delivery_utility();
    vec![
        // Mixing `cont` with the constant `back` on a state-independent menu:
        // with weights (1, 1/2) both are at 10000 but the mixture scores 7500.
        curated(
            "delivery-state-independent-mix",
            AxiomId::StateIndependentBetweenness,
            AxiomInstance {
                utility: u.clone(),
                menu: fixtures::state_independent_menu(),
                other_menu: None,
                acts: vec![fixtures::cont(), fixtures::back()],
                mixtures: vec![ratio(1, 2)],
                event: None,
            },
        ),
        // Same mixture without state independence; unweighted sets already fail.
        curated(
            "delivery-mixed-menu",
            AxiomId::UnrestrictedBetweenness,
            AxiomInstance {
                utility: u.clone(),
                menu: fixtures::mixed_menu(),
                other_menu: None,
                acts: vec![fixtures::cont(), fixtures::back()],
                mixtures: vec![ratio(1, 2)],
                event: None,
            },
        ),
        // Adding `new` to the menu flips `cont` against `check`.
        curated(
            "delivery-menu-extension",
            AxiomId::MenuIndependence,
            AxiomInstance {
                utility: u,
                menu: fixtures::base_menu(),
                other_menu: Some(fixtures::extended_menu()),
                acts: vec![fixtures::check(), fixtures::cont()],
                mixtures: vec![],
                event: None,
            },
        ),
    ]
}
