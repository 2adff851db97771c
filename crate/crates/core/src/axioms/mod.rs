//! Randomized checks of the preference axioms against a decision rule.
//!
//! A [`PreferenceOracle`] answers `f ⪰_M g` queries for one rule and belief.
//! [`check_axiom`] first replays the curated corpus of published
//! counterexamples that fit the oracle's state space, then draws seeded
//! random instances until `samples` of them satisfy the axiom's premise.
//! A `violated` verdict always carries an instance that [`replay`]
//! reproduces. `no-violation-found` is evidence, not proof.

mod corpus;
mod generate;
mod matrix;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decision::{mix, mix_menu, profile_scores, scores_against, Act, Belief, Lottery, Menu, Rule, UtilitySpec};
use crate::error::{Error, Result};
use crate::measures::{Event, StateSpace};
use crate::rational::{fmt_q, ratio, Q};

pub use corpus::{curated_corpus, CuratedInstance};
pub use generate::{grid_utility, GeneratorConfig};
pub use matrix::{axiom_matrix, default_fixtures, AxiomGroup, AxiomMatrix, BeliefFixture, MatrixCell};

pub(crate) use generate::{grid_prize, Gen};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AxiomId {
    Transitivity,
    Completeness,
    Nontriviality,
    Monotonicity,
    MixtureContinuity,
    AmbiguityAversion,
    Independence,
    ConstantMenuIndependence,
    Ina,
    Boundedness,
    CIndependence,
    /// Betweenness for constant `h` on menus with state-independent outcome distributions.
    StateIndependentBetweenness,
    /// The same statement without the state-independence side condition.
    UnrestrictedBetweenness,
    /// Full menu independence for arbitrary acts.
    MenuIndependence,
    /// Menu-dependent dynamic consistency; see [`crate::dynamics::check_mdc`].
    DynamicConsistency,
}

impl AxiomId {
    pub const NUMBERED: [AxiomId; 12] = [
        AxiomId::Transitivity,
        AxiomId::Completeness,
        AxiomId::Nontriviality,
        AxiomId::Monotonicity,
        AxiomId::MixtureContinuity,
        AxiomId::AmbiguityAversion,
        AxiomId::Independence,
        AxiomId::ConstantMenuIndependence,
        AxiomId::Ina,
        AxiomId::Boundedness,
        AxiomId::CIndependence,
        AxiomId::StateIndependentBetweenness,
    ];

    pub fn number(self) -> Option<u8> {
        AxiomId::NUMBERED.iter().position(|&a| a == self).map(|i| i as u8 + 1)
    }

    pub fn from_number(n: u8) -> Result<Self> {
        AxiomId::NUMBERED
            .get((n as usize).wrapping_sub(1))
            .copied()
            .ok_or_else(|| Error::UnknownAxiom(n.to_string()))
    }

    pub fn name(self) -> &'static str {
        match self {
            AxiomId::Transitivity => "transitivity",
            AxiomId::Completeness => "completeness",
            AxiomId::Nontriviality => "nontriviality",
            AxiomId::Monotonicity => "monotonicity",
            AxiomId::MixtureContinuity => "mixture-continuity",
            AxiomId::AmbiguityAversion => "ambiguity-aversion",
            AxiomId::Independence => "independence",
            AxiomId::ConstantMenuIndependence => "constant-menu-independence",
            AxiomId::Ina => "ina",
            AxiomId::Boundedness => "boundedness",
            AxiomId::CIndependence => "c-independence",
            AxiomId::StateIndependentBetweenness => "state-independent-betweenness",
            AxiomId::UnrestrictedBetweenness => "unrestricted-betweenness",
            AxiomId::MenuIndependence => "menu-independence",
            AxiomId::DynamicConsistency => "mdc",
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.number() {
            Some(n) => write!(f, "Ax.{n} {}", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

impl FromStr for AxiomId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(n) = s.parse::<u8>() {
            return AxiomId::from_number(n);
        }
        let all = AxiomId::NUMBERED
            .iter()
            .chain(&[AxiomId::UnrestrictedBetweenness, AxiomId::MenuIndependence, AxiomId::DynamicConsistency]);
        all.copied()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::UnknownAxiom(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Preference {
    Prefers,
    Indifferent,
    Disprefers,
}

impl Preference {
    pub fn weak(self) -> bool {
        self != Preference::Disprefers
    }

    pub fn flip(self) -> Self {
        match self {
            Preference::Prefers => Preference::Disprefers,
            Preference::Indifferent => Preference::Indifferent,
            Preference::Disprefers => Preference::Prefers,
        }
    }
}

/// Menu-indexed preferences induced by one rule and belief.
#[derive(Clone, Debug)]
pub struct PreferenceOracle {
    rule: Rule,
    belief: Belief,
    space: StateSpace,
}

impl PreferenceOracle {
    pub fn new(rule: Rule, belief: Belief, space: &StateSpace) -> Result<Self> {
        // a one-row table validates the belief kind up front
        profile_scores(rule, &[vec![Q::default(); space.len()]], &belief)?;
        Ok(PreferenceOracle { rule, belief, space: space.clone() })
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn belief(&self) -> &Belief {
        &self.belief
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn score(&self, act: &Act, menu: &Menu, u: &UtilitySpec) -> Result<Q> {
        crate::decision::score(self.rule, act, menu, u, &self.belief)
    }

    /// `f` versus `g` in `menu`; both must belong to the menu.
    pub fn compare(&self, f: &Act, g: &Act, menu: &Menu, u: &UtilitySpec) -> Result<Preference> {
        let (sf, sg) = self.pair(f, g, menu, u)?;
        Ok(self.orient(&sf, &sg))
    }

    fn pair(&self, f: &Act, g: &Act, menu: &Menu, u: &UtilitySpec) -> Result<(Q, Q)> {
        let (i, j) = (menu.position(f)?, menu.position(g)?);
        let rows = menu.utility_table(u)?;
        let maxima = crate::decision::state_maxima(&rows);
        let mut s = scores_against(self.rule, &maxima, &[&rows[i], &rows[j]], &self.belief)?;
        let sg = s.pop().expect("two rows");
        Ok((s.pop().expect("two rows"), sg))
    }

    fn orient(&self, sf: &Q, sg: &Q) -> Preference {
        use std::cmp::Ordering::*;
        let ord = if self.rule.lower_is_better() { sg.cmp(sf) } else { sf.cmp(sg) };
        match ord {
            Greater => Preference::Prefers,
            Equal => Preference::Indifferent,
            Less => Preference::Disprefers,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NoViolationFound,
    Violated,
    NoWitnessInGrid,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::NoViolationFound => "no-violation-found",
            Verdict::Violated => "violated",
            Verdict::NoWitnessInGrid => "no-witness-in-grid",
        })
    }
}

/// Acts, menus and mixture weights for one axiom query. Roles are
/// positional: `acts[0]` is `f`, `acts[1]` is `g`, `acts[2]` is `h`
/// unless the axiom says otherwise.
#[derive(Clone, Debug)]
pub struct AxiomInstance {
    pub utility: UtilitySpec,
    pub menu: Menu,
    pub other_menu: Option<Menu>,
    pub acts: Vec<Act>,
    pub mixtures: Vec<Q>,
    /// Conditioning event, for dynamic-consistency checks.
    pub event: Option<Event>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScoreLine {
    pub label: String,
    #[serde(with = "crate::rational::serde_q")]
    pub score: Q,
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub instance: AxiomInstance,
    pub scores: Vec<ScoreLine>,
    pub pattern: String,
    /// Name of the curated corpus entry, when the witness came from it.
    pub curated: Option<String>,
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub axiom: AxiomId,
    pub rule: Rule,
    pub verdict: Verdict,
    pub counterexample: Option<Counterexample>,
    /// Instances whose premise held and were checked.
    pub samples: usize,
    /// Random draws made, including those whose premise failed.
    pub attempts: usize,
    pub curated_checked: usize,
    /// Instances of an existential axiom without a witness on the grid.
    pub no_witness: usize,
    pub seed: u64,
}

impl AxiomReport {
    pub fn to_json(&self) -> serde_json::Value {
        let cx = self.counterexample.as_ref().map(|c| {
            serde_json::json!({
                "pattern": c.pattern,
                "curated": c.curated,
                "acts": c.instance.acts.iter().map(|a| a.name()).collect::<Vec<_>>(),
                "menu": c.instance.menu.acts().iter().map(|a| a.name()).collect::<Vec<_>>(),
                "other_menu": c.instance.other_menu.as_ref()
                    .map(|m| m.acts().iter().map(|a| a.name().to_string()).collect::<Vec<_>>()),
                "mixtures": c.instance.mixtures.iter().map(fmt_q).collect::<Vec<_>>(),
                "scores": c.scores,
            })
        });
        serde_json::json!({
            "axiom": self.axiom.to_string(),
            "rule": self.rule.to_string(),
            "verdict": self.verdict.to_string(),
            "samples": self.samples,
            "attempts": self.attempts,
            "curated_checked": self.curated_checked,
            "no_witness": self.no_witness,
            "seed": self.seed,
            "counterexample": cx,
        })
    }
}

enum Outcome {
    PremiseFailed,
    Holds { witness: bool },
    Violated { scores: Vec<ScoreLine>, pattern: String },
}

struct Probe<'a> {
    oracle: &'a PreferenceOracle,
    u: &'a UtilitySpec,
    scores: Vec<ScoreLine>,
}

impl<'a> Probe<'a> {
    fn cmp(&mut self, f: &Act, g: &Act, menu: &Menu, tag: &str) -> Result<Preference> {
        let (sf, sg) = self.oracle.pair(f, g, menu, self.u)?;
        self.record(format!("{}@{tag}", f.name()), &sf);
        self.record(format!("{}@{tag}", g.name()), &sg);
        Ok(self.oracle.orient(&sf, &sg))
    }

    fn record(&mut self, label: String, score: &Q) {
        if !self.scores.iter().any(|l| l.label == label) {
            self.scores.push(ScoreLine { label, score: score.clone() });
        }
    }

    /// `(a)* ⪰ (b)*` compared as constant acts in the two-act menu.
    fn constants(&mut self, a: &Lottery, b: &Lottery) -> Result<Preference> {
        let space = self.oracle.space();
        let ca = Act::constant("x*", space, a.clone());
        let cb = Act::constant("y*", space, b.clone());
        let menu = Menu::new(vec![ca.clone(), cb.clone()])?;
        let (sa, sb) = self.oracle.pair(&ca, &cb, &menu, self.u)?;
        Ok(self.oracle.orient(&sa, &sb))
    }

    fn violated(self, pattern: impl Into<String>) -> Outcome {
        Outcome::Violated { scores: self.scores, pattern: pattern.into() }
    }
}

fn mixture_grid(max_den: i64) -> Vec<Q> {
    let mut grid: Vec<Q> = (2..=max_den.max(2))
        .flat_map(|d| (1..d).map(move |a| ratio(a, d)))
        .collect();
    grid.sort();
    grid.dedup();
    grid
}

fn has_state_independent_utilities(menu: &Menu, u: &UtilitySpec) -> Result<bool> {
    let rows = menu.utility_table(u)?;
    let column = |s: usize| {
        let mut c: Vec<Q> = rows.iter().map(|r| r[s].clone()).collect();
        c.sort();
        c.dedup();
        c
    };
    let first = column(0);
    Ok((1..menu.space().len()).all(|s| column(s) == first))
}

fn evaluate(axiom: AxiomId, oracle: &PreferenceOracle, inst: &AxiomInstance, grid: &[Q]) -> Result<Outcome> {
    let mut probe = Probe { oracle, u: &inst.utility, scores: Vec::new() };
    let m = &inst.menu;
    let acts = &inst.acts;
    let p = inst.mixtures.first().cloned().unwrap_or_else(|| ratio(1, 2));
    Ok(match axiom {
        AxiomId::DynamicConsistency => {
            return Err(Error::InvalidArgument("dynamic consistency needs an updating family".into()))
        }
        AxiomId::Transitivity => {
            let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
            let mut rel = [[Preference::Indifferent; 3]; 3];
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                rel[i][j] = probe.cmp(&acts[i], &acts[j], m, "M")?;
                rel[j][i] = rel[i][j].flip();
            }
            for [x, y, z] in perms {
                let (xy, yz, xz) = (rel[x][y], rel[y][z], rel[x][z]);
                if xy.weak() && yz.weak() && !xz.weak() {
                    let pattern = format!(
                        "{} ⪰ {} ⪰ {} but not {} ⪰ {}",
                        acts[x].name(),
                        acts[y].name(),
                        acts[z].name(),
                        acts[x].name(),
                        acts[z].name()
                    );
                    return Ok(probe.violated(pattern));
                }
            }
            Outcome::Holds { witness: true }
        }
        AxiomId::Completeness => {
            let fg = probe.cmp(&acts[0], &acts[1], m, "M")?;
            let gf = probe.cmp(&acts[1], &acts[0], m, "M")?;
            if fg != gf.flip() || !(fg.weak() || gf.weak()) {
                return Ok(probe.violated("comparisons are not complete and antisymmetric"));
            }
            Outcome::Holds { witness: true }
        }
        AxiomId::Nontriviality => {
            if probe.cmp(&acts[0], &acts[1], m, "M")? == Preference::Indifferent {
                return Ok(probe.violated("best and worst constant acts are indifferent"));
            }
            Outcome::Holds { witness: true }
        }
        AxiomId::Monotonicity => {
            let (f, g) = (&acts[0], &acts[1]);
            for s in 0..f.space().len() {
                if !probe.constants(f.outcome(s), g.outcome(s))?.weak() {
                    return Ok(Outcome::PremiseFailed);
                }
            }
            if !probe.cmp(f, g, m, "M")?.weak() {
                return Ok(probe.violated("f statewise weakly better but g strictly preferred"));
            }
            Outcome::Holds { witness: true }
        }
        AxiomId::MixtureContinuity => {
            let (f, g, h) = (&acts[0], &acts[1], &acts[2]);
            if probe.cmp(f, g, m, "M")? != Preference::Prefers
                || probe.cmp(g, h, m, "M")? != Preference::Prefers
            {
                return Ok(Outcome::PremiseFailed);
            }
            let mut q_found = false;
            for q in grid.iter().rev() {
                let mq = mix(q, f, h);
                let menu = m.with(mq.clone());
                if oracle.compare(&mq, g, &menu, &inst.utility)? == Preference::Prefers {
                    q_found = true;
                    break;
                }
            }
            let mut r_found = false;
            for r in grid {
                let mr = mix(r, f, h);
                let menu = m.with(mr.clone());
                if oracle.compare(g, &mr, &menu, &inst.utility)? == Preference::Prefers {
                    r_found = true;
                    break;
                }
            }
            Outcome::Holds { witness: q_found && r_found }
        }
        AxiomId::AmbiguityAversion => {
            let (f, g) = (&acts[0], &acts[1]);
            if probe.cmp(f, g, m, "M")? != Preference::Indifferent {
                return Ok(Outcome::PremiseFailed);
            }
            let hedge = mix(&p, f, g);
            let menu = m.with(hedge.clone());
            if !probe.cmp(&hedge, g, &menu, "M+mix")?.weak() {
                return Ok(probe.violated("f ∼ g but g strictly preferred to the hedge"));
            }
            Outcome::Holds { witness: true }
        }
        AxiomId::Independence | AxiomId::CIndependence => {
            let (f, g, h) = (&acts[0], &acts[1], &acts[2]);
            if axiom == AxiomId::CIndependence && !h.is_constant() {
                return Ok(Outcome::PremiseFailed);
            }
            let before = probe.cmp(f, g, m, "M")?;
            let mixed = mix_menu(&p, m, h);
            let idx = |a: &Act| m.acts().iter().position(|x| x.name() == a.name());
            let (Some(fi), Some(gi)) = (idx(f), idx(g)) else {
                return Err(Error::ActNotInMenu(f.name().to_string()));
            };
            let after = probe.cmp(&mixed.acts()[fi], &mixed.acts()[gi], &mixed, "pM+(1-p)h")?;
            if before != after {
                return Ok(probe.violated(format!("{before:?} in M but {after:?} after mixing with h")));
            }
            Outcome::Holds { witness: true }
        }
        AxiomId::ConstantMenuIndependence | AxiomId::MenuIndependence => {
            let (f, g) = (&acts[0], &acts[1]);
            if axiom == AxiomId::ConstantMenuIndependence && !(f.is_constant() && g.is_constant()) {
                return Ok(Outcome::PremiseFailed);
            }
            let other = inst.other_menu.as_ref().ok_or_else(|| Error::InvalidArgument("missing M'".into()))?;
            let a = probe.cmp(f, g, m, "M")?;
            let b = probe.cmp(f, g, other, "M'")?;
            if a != b {
                return Ok(probe.violated(format!("{a:?} in M but {b:?} in M'")));
            }
            Outcome::Holds { witness: true }
        }
        AxiomId::Ina => {
            let (f, g) = (&acts[0], &acts[1]);
            let bigger = inst.other_menu.as_ref().ok_or_else(|| Error::InvalidArgument("missing M ∪ M'".into()))?;
            for extra in bigger.acts().iter().filter(|a| m.get(a.name()).is_none()) {
                for s in 0..extra.space().len() {
                    let mut dominated = false;
                    for k in m.acts() {
                        if probe.constants(k.outcome(s), extra.outcome(s))?.weak() {
                            dominated = true;
                            break;
                        }
                    }
                    if !dominated {
                        return Ok(Outcome::PremiseFailed);
                    }
                }
            }
            let a = probe.cmp(f, g, m, "M")?;
            let b = probe.cmp(f, g, bigger, "M+M'")?;
            if a != b {
                return Ok(probe.violated(format!("{a:?} in M but {b:?} after adding never-optimal acts")));
            }
            Outcome::Holds { witness: true }
        }
        AxiomId::Boundedness => {
            let top = &acts[0];
            for f in m.acts() {
                for s in 0..f.space().len() {
                    if !probe.constants(top.outcome(0), f.outcome(s))?.weak() {
                        return Ok(probe.violated(format!("{}({}) exceeds the bound", f.name(), s)));
                    }
                }
            }
            Outcome::Holds { witness: true }
        }
        AxiomId::StateIndependentBetweenness | AxiomId::UnrestrictedBetweenness => {
            let (f, h) = (&acts[0], &acts[1]);
            if !h.is_constant() {
                return Ok(Outcome::PremiseFailed);
            }
            if axiom == AxiomId::StateIndependentBetweenness
                && !has_state_independent_utilities(m, &inst.utility)?
            {
                return Ok(Outcome::PremiseFailed);
            }
            if probe.cmp(h, f, m, "M")? != Preference::Indifferent {
                return Ok(Outcome::PremiseFailed);
            }
            let blend = mix(&p, f, h);
            let menu = m.with(blend.clone());
            let rel = probe.cmp(&blend, f, &menu, "M+mix")?;
            if rel != Preference::Indifferent {
                return Ok(probe.violated(format!(
                    "h ∼ f in M but mixture {rel:?} f at p = {}",
                    fmt_q(&p)
                )));
            }
            Outcome::Holds { witness: true }
        }
    })
}

fn draw(axiom: AxiomId, gen: &mut Gen<'_>, u: &UtilitySpec) -> Result<AxiomInstance> {
    let inst = |menu: Menu, other: Option<Menu>, acts: Vec<Act>, mixtures: Vec<Q>| AxiomInstance {
        utility: u.clone(),
        menu,
        other_menu: other,
        acts,
        mixtures,
        event: None,
    };
    let d = gen.config.utility_denominator;
    Ok(match axiom {
        AxiomId::DynamicConsistency => {
            return Err(Error::InvalidArgument("dynamic consistency needs an updating family".into()))
        }
        AxiomId::Transitivity | AxiomId::MixtureContinuity => {
            let menu = gen.menu(3, false);
            let acts = gen.pick(&menu, 3).into_iter().cloned().collect();
            inst(menu, None, acts, vec![])
        }
        AxiomId::Completeness => {
            let menu = gen.menu(2, false);
            let acts = gen.pick(&menu, 2).into_iter().cloned().collect();
            inst(menu, None, acts, vec![])
        }
        AxiomId::Nontriviality => {
            let best = Act::constant("best", gen.space, Lottery::degenerate(grid_prize(d)));
            let worst = Act::constant("worst", gen.space, Lottery::degenerate(grid_prize(-d)));
            let menu = Menu::new(vec![best.clone(), worst.clone()])?;
            inst(menu, None, vec![best, worst], vec![])
        }
        AxiomId::Monotonicity => {
            let g = gen.act(false);
            let f0 = gen.act(false);
            let outcomes = (0..gen.space.len())
                .map(|s| {
                    let (a, b) = (f0.outcome(s), g.outcome(s));
                    Ok(if u.lottery_utility(a)? >= u.lottery_utility(b)? { a.clone() } else { b.clone() })
                })
                .collect::<Result<Vec<_>>>()?;
            let f = Act::new(format!("{}^", f0.name()), gen.space, outcomes)?;
            let menu = gen.menu(1, false).with(f.clone()).with(g.clone());
            inst(menu, None, vec![f, g], vec![])
        }
        AxiomId::AmbiguityAversion => {
            let menu = gen.menu(2, true);
            let acts = gen.pick(&menu, 2).into_iter().cloned().collect();
            let p = gen.mixture();
            inst(menu, None, acts, vec![p])
        }
        AxiomId::Independence | AxiomId::CIndependence => {
            let menu = gen.menu(2, false);
            let mut acts: Vec<Act> = gen.pick(&menu, 2).into_iter().cloned().collect();
            let h = if axiom == AxiomId::CIndependence { gen.constant_act(false) } else { gen.act(false) };
            acts.push(h);
            let p = gen.mixture();
            inst(menu, None, acts, vec![p])
        }
        AxiomId::ConstantMenuIndependence => {
            let l1 = gen.constant_act(false);
            let l2 = gen.constant_act(false);
            let m1 = gen.menu(1, false).with(l1.clone()).with(l2.clone());
            let m2 = gen.menu(1, false).with(l1.clone()).with(l2.clone());
            inst(m1, Some(m2), vec![l1, l2], vec![])
        }
        AxiomId::MenuIndependence => {
            let menu = gen.menu(2, false);
            let acts: Vec<Act> = gen.pick(&menu, 2).into_iter().cloned().collect();
            let other = gen.menu(1, false).with(acts[0].clone()).with(acts[1].clone());
            inst(menu, Some(other), acts, vec![])
        }
        AxiomId::Ina => {
            let menu = gen.menu(2, false);
            let acts: Vec<Act> = gen.pick(&menu, 2).into_iter().cloned().collect();
            let rows = menu.utility_table(u)?;
            let maxima = crate::decision::state_maxima(&rows);
            let extra_count = gen.menu_size(1).min(3);
            let mut bigger = menu.clone();
            for _ in 0..extra_count {
                let levels: Vec<i64> = maxima
                    .iter()
                    .map(|mx| {
                        let cap = (mx * Q::from_integer(d.into())).floor().to_integer();
                        let cap: i64 = cap.try_into().unwrap_or(d);
                        use rand::Rng;
                        gen.rng.gen_range(-d..=cap.clamp(-d, d))
                    })
                    .collect();
                bigger = bigger.with(gen.act_from_levels(&levels));
            }
            inst(menu, Some(bigger), acts, vec![])
        }
        AxiomId::Boundedness => {
            let menu = gen.menu(1, false);
            let top = Act::constant("top", gen.space, Lottery::degenerate(grid_prize(d)));
            inst(menu, None, vec![top], vec![])
        }
        AxiomId::StateIndependentBetweenness => {
            let (h, menu) = gen.state_independent_menu();
            let others: Vec<&Act> = menu.acts().iter().filter(|a| a.name() != h.name()).collect();
            use rand::seq::SliceRandom;
            let f = (*others.choose(&mut gen.rng).expect("menu has three acts")).clone();
            let p = gen.mixture();
            inst(menu, None, vec![f, h], vec![p])
        }
        AxiomId::UnrestrictedBetweenness => {
            let h = gen.constant_act(true);
            let menu = gen.menu(2, true).with(h.clone());
            let f = gen.pick(&menu, 1)[0].clone();
            let p = gen.mixture();
            inst(menu, None, vec![f, h], vec![p])
        }
    })
}

fn axiom_salt(axiom: AxiomId) -> u64 {
    (axiom as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Checks one axiom for `oracle`: curated instances first, then seeded
/// random instances over the oracle's state space.
pub fn check_axiom(
    axiom: AxiomId,
    oracle: &PreferenceOracle,
    config: &GeneratorConfig,
    seed: u64,
) -> Result<AxiomReport> {
    if config.max_menu > 6 || config.mixture_denominator > 20 || oracle.space().len() > 6 {
        return Err(Error::InvalidArgument(
            "generator bounds: at most 6 states, 6 acts per menu, mixture denominators ≤ 20".into(),
        ));
    }
    if config.samples == 0 || config.mixture_denominator < 2 || config.utility_denominator < 1 {
        return Err(Error::InvalidArgument(
            "need at least one sample, mixture denominator ≥ 2 and utility denominator ≥ 1".into(),
        ));
    }
    let grid = mixture_grid(config.mixture_denominator);
    let mut report = AxiomReport {
        axiom,
        rule: oracle.rule(),
        verdict: Verdict::NoViolationFound,
        counterexample: None,
        samples: 0,
        attempts: 0,
        curated_checked: 0,
        no_witness: 0,
        seed,
    };

    for cur in curated_corpus().into_iter().filter(|c| c.axiom == axiom) {
        if cur.instance.menu.space() != oracle.space() {
            continue;
        }
        report.curated_checked += 1;
        if let Outcome::Violated { scores, pattern } = evaluate(axiom, oracle, &cur.instance, &grid)? {
            report.verdict = Verdict::Violated;
            report.counterexample =
                Some(Counterexample { instance: cur.instance, scores, pattern, curated: Some(cur.name) });
            return Ok(report);
        }
    }

    let u = grid_utility(config.utility_denominator);
    let rng = ChaCha8Rng::seed_from_u64(seed ^ axiom_salt(axiom));
    let mut gen = Gen::new(rng, oracle.space(), config);
    let target = config.samples;
    let max_attempts = target.saturating_mul(config.attempt_factor.max(1));
    while report.samples < target && report.attempts < max_attempts {
        report.attempts += 1;
        let instance = draw(axiom, &mut gen, &u)?;
        match evaluate(axiom, oracle, &instance, &grid)? {
            Outcome::PremiseFailed => {}
            Outcome::Holds { witness } => {
                report.samples += 1;
                if !witness {
                    report.no_witness += 1;
                }
            }
            Outcome::Violated { scores, pattern } => {
                report.samples += 1;
                report.verdict = Verdict::Violated;
                report.counterexample = Some(Counterexample { instance, scores, pattern, curated: None });
                return Ok(report);
            }
        }
    }
    if report.no_witness > 0 {
        report.verdict = Verdict::NoWitnessInGrid;
    }
    Ok(report)
}

/// Re-evaluates a stored counterexample; `true` when the oracle reproduces
/// the recorded violation with identical scores.
pub fn replay(report: &AxiomReport, oracle: &PreferenceOracle, config: &GeneratorConfig) -> Result<bool> {
    let Some(cx) = &report.counterexample else {
        return Ok(false);
    };
    let grid = mixture_grid(config.mixture_denominator);
    Ok(match evaluate(report.axiom, oracle, &cx.instance, &grid)? {
        Outcome::Violated { scores, pattern } => scores == cx.scores && pattern == cx.pattern,
        _ => false,
    })
}

/// Evaluates a single hand-built instance.
pub fn check_instance(
    axiom: AxiomId,
    oracle: &PreferenceOracle,
    instance: &AxiomInstance,
) -> Result<Option<Counterexample>> {
    let grid = mixture_grid(GeneratorConfig::default().mixture_denominator);
    Ok(match evaluate(axiom, oracle, instance, &grid)? {
        Outcome::Violated { scores, pattern } => {
            Some(Counterexample { instance: instance.clone(), scores, pattern, curated: None })
        }
        _ => None,
    })
}
