//! Rule × axiom-group verdict table.

use num_traits::One;
use serde::Serialize;

use crate::decision::{Belief, Rule};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::measures::{Measure, StateSpace, WeightedMeasureSet};
use crate::rational::{q, ratio};

use super::{check_axiom, AxiomId, AxiomReport, GeneratorConfig, PreferenceOracle, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum AxiomGroup {
    /// Axioms 1–6 and 8–10.
    Core,
    Independence,
    CIndependence,
    Betweenness,
}

impl AxiomGroup {
    pub const ALL: [AxiomGroup; 4] =
        [AxiomGroup::Core, AxiomGroup::Independence, AxiomGroup::CIndependence, AxiomGroup::Betweenness];

    pub fn axioms(self) -> Vec<AxiomId> {
        use AxiomId::*;
        match self {
            AxiomGroup::Core => vec![
                Transitivity,
                Completeness,
                Nontriviality,
                Monotonicity,
                MixtureContinuity,
                AmbiguityAversion,
                ConstantMenuIndependence,
                Ina,
                Boundedness,
            ],
            AxiomGroup::Independence => vec![Independence],
            AxiomGroup::CIndependence => vec![CIndependence],
            AxiomGroup::Betweenness => vec![StateIndependentBetweenness],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            AxiomGroup::Core => "Ax.1-6,8-10",
            AxiomGroup::Independence => "Ind",
            AxiomGroup::CIndependence => "C-Ind",
            AxiomGroup::Betweenness => "Ax.12",
        }
    }
}

/// A named weighted belief; each rule reads the part it needs.
#[derive(Clone, Debug)]
pub struct BeliefFixture {
    pub name: String,
    pub set: WeightedMeasureSet,
}

impl BeliefFixture {
    pub fn new(name: impl Into<String>, set: WeightedMeasureSet) -> Self {
        BeliefFixture { name: name.into(), set }
    }

    pub fn belief_for(&self, rule: Rule) -> Belief {
        match rule {
            Rule::Seu => {
                let top = self.set.entries().iter().find(|e| e.weight.is_one()).expect("normalized set");
                Belief::Measure(top.measure.clone())
            }
            Rule::Regret => Belief::None,
            Rule::Mer | Rule::Mmeu => Belief::Set(self.set.entries().iter().map(|e| e.measure.clone()).collect()),
            Rule::Mwer => Belief::Weighted(self.set.clone()),
        }
    }

    fn is_multi_measure(&self) -> bool {
        self.set.len() > 1
    }

    fn has_partial_weight(&self) -> bool {
        self.set.entries().iter().any(|e| !e.weight.is_one())
    }
}

/// Delivery beliefs with weights (1, 1/2) plus two small random-looking
/// beliefs on three and four states.
pub fn default_fixtures() -> Vec<BeliefFixture> {
    let three = StateSpace::new(["a", "b", "c"]).expect("distinct labels");
    let four = StateSpace::new(["w", "x", "y", "z"]).expect("distinct labels");
    let m = |s: &StateSpace, p: &[(i64, i64)]| {
        Measure::new(s, p.iter().map(|&(n, d)| ratio(n, d)).collect()).expect("valid measure")
    };
    vec![
        BeliefFixture::new("delivery", fixtures::delivery_belief(ratio(1, 2))),
        BeliefFixture::new(
            "three-state",
            WeightedMeasureSet::new(
                &three,
                vec![
                    ("p", m(&three, &[(1, 2), (1, 3), (1, 6)]), q(1)),
                    ("r", m(&three, &[(1, 10), (1, 5), (7, 10)]), ratio(2, 5)),
                ],
            )
            .expect("valid weights"),
        ),
        BeliefFixture::new(
            "four-state",
            WeightedMeasureSet::new(
                &four,
                vec![
                    ("p", m(&four, &[(1, 4), (1, 4), (1, 4), (1, 4)]), q(1)),
                    ("r", m(&four, &[(3, 5), (1, 5), (1, 10), (1, 10)]), ratio(3, 4)),
                    ("t", m(&four, &[(0, 1), (1, 8), (3, 8), (1, 2)]), ratio(1, 3)),
                ],
            )
            .expect("valid weights"),
        ),
    ]
}

#[derive(Clone, Debug)]
pub struct MatrixCell {
    pub rule: Rule,
    pub group: AxiomGroup,
    pub verdict: Verdict,
    pub reports: Vec<AxiomReport>,
}

impl MatrixCell {
    /// Premise-satisfying samples per axiom, summed over fixtures.
    pub fn samples_per_axiom(&self) -> Vec<(AxiomId, usize)> {
        let mut out: Vec<(AxiomId, usize)> = Vec::new();
        for r in &self.reports {
            match out.iter_mut().find(|(a, _)| *a == r.axiom) {
                Some((_, n)) => *n += r.samples,
                None => out.push((r.axiom, r.samples)),
            }
        }
        out
    }

    pub fn violation(&self) -> Option<&AxiomReport> {
        self.reports.iter().find(|r| r.verdict == Verdict::Violated)
    }
}

#[derive(Clone, Debug)]
pub struct AxiomMatrix {
    pub rules: Vec<Rule>,
    pub cells: Vec<MatrixCell>,
    pub seed: u64,
}

impl AxiomMatrix {
    pub fn cell(&self, rule: Rule, group: AxiomGroup) -> Option<&MatrixCell> {
        self.cells.iter().find(|c| c.rule == rule && c.group == group)
    }

    /// Fixed-width table: `✓` no violation found, `✗` violated, `-` not run.
    pub fn to_text(&self) -> String {
        let mut out = format!("{:<12}", "");
        for r in &self.rules {
            out.push_str(&format!("{:>6}", r.to_string()));
        }
        out.push('\n');
        for g in AxiomGroup::ALL {
            out.push_str(&format!("{:<12}", g.label()));
            for r in &self.rules {
                let mark = match self.cell(*r, g).map(|c| c.verdict) {
                    Some(Verdict::Violated) => "✗",
                    Some(_) => "✓",
                    None => "-",
                };
                out.push_str(&format!("{:>6}", mark));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let cells: Vec<_> = self
            .cells
            .iter()
            .map(|c| {
                serde_json::json!({
                    "rule": c.rule.to_string(),
                    "group": c.group.label(),
                    "verdict": c.verdict.to_string(),
                    "samples": c.samples_per_axiom().iter()
                        .map(|(a, n)| (a.to_string(), *n)).collect::<std::collections::BTreeMap<_, _>>(),
                    "reports": c.reports.iter().map(AxiomReport::to_json).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({ "seed": self.seed, "cells": cells })
    }
}

// Instances whose continuity witness lies outside the mixture grid are
// inconclusive rather than failures; they stay visible in the reports.
fn combine(reports: &[AxiomReport]) -> Verdict {
    if reports.iter().any(|r| r.verdict == Verdict::Violated) {
        Verdict::Violated
    } else {
        Verdict::NoViolationFound
    }
}

/// Checks every axiom group for every rule across all fixtures. A cell is
/// violated as soon as one fixture yields a counterexample; later
/// fixtures are skipped for that axiom.
pub fn axiom_matrix(
    rules: &[Rule],
    belief_fixtures: &[BeliefFixture],
    config: &GeneratorConfig,
    seed: u64,
) -> Result<AxiomMatrix> {
    if !belief_fixtures.iter().any(BeliefFixture::is_multi_measure)
        || !belief_fixtures.iter().any(BeliefFixture::has_partial_weight)
    {
        return Err(Error::InvalidArgument(
            "fixtures need a multi-measure belief and a weight below 1".into(),
        ));
    }
    let mut cells = Vec::new();
    for &rule in rules {
        for group in AxiomGroup::ALL {
            let mut reports = Vec::new();
            for axiom in group.axioms() {
                for (i, fx) in belief_fixtures.iter().enumerate() {
                    let oracle = PreferenceOracle::new(rule, fx.belief_for(rule), fx.set.space())?;
                    let report = check_axiom(axiom, &oracle, config, seed.wrapping_add(i as u64))?;
                    let violated = report.verdict == Verdict::Violated;
                    reports.push(report);
                    if violated {
                        break;
                    }
                }
            }
            cells.push(MatrixCell { rule, group, verdict: combine(&reports), reports });
        }
    }
    Ok(AxiomMatrix { rules: rules.to_vec(), cells, seed })
}
