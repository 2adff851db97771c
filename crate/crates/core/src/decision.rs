//! Anscombe–Aumann acts, menus, regret and the five decision rules.
//!
//! Regret-family rules (REG, MER, MWER) are minimized; utility-family
//! rules (SEU, MMEU) are maximized. A [`Ranking`] records which
//! orientation applies so consumers never re-derive it.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{Measure, StateSpace, WeightedMeasureSet};
use crate::rational::{fmt_decimal, fmt_q, Q};

/// Utility of each prize.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UtilitySpec {
    utils: BTreeMap<String, Q>,
}

impl UtilitySpec {
    /// At least two prizes must carry distinct utilities.
    pub fn new<S: Into<String>>(pairs: impl IntoIterator<Item = (S, Q)>) -> Result<Self> {
        let utils: BTreeMap<String, Q> = pairs.into_iter().map(|(k, v)| (k.into(), v)).collect();
        let mut values = utils.values();
        let first = values.next();
        if !values.any(|v| Some(v) != first) {
            return Err(Error::InvalidArgument(
                "utility needs two prizes with distinct utilities".into(),
            ));
        }
        Ok(UtilitySpec { utils })
    }

    pub fn utility(&self, prize: &str) -> Result<&Q> {
        self.utils.get(prize).ok_or_else(|| Error::UnknownPrize(prize.to_string()))
    }

    pub fn prizes(&self) -> impl Iterator<Item = (&String, &Q)> {
        self.utils.iter()
    }

    /// `u(l) = Σ l(y)·U(y)`.
    pub fn lottery_utility(&self, lottery: &Lottery) -> Result<Q> {
        lottery.probs.iter().try_fold(Q::zero(), |acc, (y, p)| Ok(acc + p * self.utility(y)?))
    }

    /// `a·U + b`, used to check invariance of rankings under affine rescaling.
    pub fn affine(&self, scale: &Q, shift: &Q) -> Self {
        UtilitySpec { utils: self.utils.iter().map(|(k, v)| (k.clone(), v * scale + shift)).collect() }
    }
}

/// Finite-support lottery over prizes. Zero-probability prizes are dropped.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lottery {
    probs: BTreeMap<String, Q>,
}

impl Lottery {
    pub fn new<S: Into<String>>(pairs: impl IntoIterator<Item = (S, Q)>) -> Result<Self> {
        let mut probs: BTreeMap<String, Q> = BTreeMap::new();
        for (k, v) in pairs {
            if v.is_negative() {
                return Err(Error::InvalidLottery("negative probability".into()));
            }
            *probs.entry(k.into()).or_insert_with(Q::zero) += v;
        }
        let total: Q = probs.values().sum();
        if !total.is_one() {
            return Err(Error::InvalidLottery(format!("probabilities sum to {}", fmt_q(&total))));
        }
        probs.retain(|_, v| !v.is_zero());
        Ok(Lottery { probs })
    }

    pub fn degenerate(prize: impl Into<String>) -> Self {
        Lottery { probs: BTreeMap::from([(prize.into(), Q::one())]) }
    }

    pub fn probs(&self) -> &BTreeMap<String, Q> {
        &self.probs
    }

    /// `p·self + (1-p)·other`.
    pub fn mix(&self, p: &Q, other: &Lottery) -> Lottery {
        let rest = Q::one() - p;
        let mut probs: BTreeMap<String, Q> = BTreeMap::new();
        for (k, v) in &self.probs {
            *probs.entry(k.clone()).or_insert_with(Q::zero) += v * p;
        }
        for (k, v) in &other.probs {
            *probs.entry(k.clone()).or_insert_with(Q::zero) += v * &rest;
        }
        probs.retain(|_, v| !v.is_zero());
        Lottery { probs }
    }

    pub fn canonical_body(&self) -> String {
        let parts: Vec<String> = self.probs.iter().map(|(k, v)| format!("{k}: {}", fmt_q(v))).collect();
        format!("{{ {} }}", parts.join(", "))
    }
}

impl fmt::Debug for Lottery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_body())
    }
}

/// A named map from states to lotteries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Act {
    name: String,
    space: StateSpace,
    outcomes: Vec<Lottery>,
}

impl Act {
    pub fn new(name: impl Into<String>, space: &StateSpace, outcomes: Vec<Lottery>) -> Result<Self> {
        if outcomes.len() != space.len() {
            return Err(Error::DimensionMismatch);
        }
        Ok(Act { name: name.into(), space: space.clone(), outcomes })
    }

    /// `l*`: the same lottery in every state.
    pub fn constant(name: impl Into<String>, space: &StateSpace, lottery: Lottery) -> Self {
        Act { name: name.into(), space: space.clone(), outcomes: vec![lottery; space.len()] }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn outcomes(&self) -> &[Lottery] {
        &self.outcomes
    }

    pub fn outcome(&self, state: usize) -> &Lottery {
        &self.outcomes[state]
    }

    pub fn renamed(&self, name: impl Into<String>) -> Act {
        Act { name: name.into(), ..self.clone() }
    }

    pub fn is_constant(&self) -> bool {
        self.outcomes.windows(2).all(|w| w[0] == w[1])
    }

    pub fn same_outcomes(&self, other: &Act) -> bool {
        self.space == other.space && self.outcomes == other.outcomes
    }

    pub fn utility_profile(&self, u: &UtilitySpec) -> Result<Vec<Q>> {
        self.outcomes.iter().map(|l| u.lottery_utility(l)).collect()
    }
}

impl fmt::Debug for Act {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {:?}", self.name, self.outcomes)
    }
}

/// A finite, nonempty list of acts with distinct names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Menu {
    acts: Vec<Act>,
}

impl Menu {
    pub fn new(acts: Vec<Act>) -> Result<Self> {
        let Some(first) = acts.first() else {
            return Err(Error::InvalidArgument("menu is empty".into()));
        };
        for (i, a) in acts.iter().enumerate() {
            if a.space() != first.space() {
                return Err(Error::DimensionMismatch);
            }
            if acts[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::InvalidArgument(format!("duplicate act `{}` in menu", a.name)));
            }
        }
        Ok(Menu { acts })
    }

    pub fn acts(&self) -> &[Act] {
        &self.acts
    }

    pub fn space(&self) -> &StateSpace {
        self.acts[0].space()
    }

    pub fn len(&self) -> usize {
        self.acts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.acts.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Act> {
        self.acts.iter().find(|a| a.name == name)
    }

    pub(crate) fn position(&self, act: &Act) -> Result<usize> {
        self.acts
            .iter()
            .position(|a| a.name == act.name && a.outcomes == act.outcomes)
            .ok_or_else(|| Error::ActNotInMenu(act.name.clone()))
    }

    /// The menu with `act` appended unless an act of that name is present.
    pub fn with(&self, act: Act) -> Menu {
        let mut acts = self.acts.clone();
        if !acts.iter().any(|a| a.name == act.name) {
            acts.push(act);
        }
        Menu { acts }
    }

    pub fn union(&self, other: &Menu) -> Menu {
        other.acts.iter().fold(self.clone(), |m, a| m.with(a.clone()))
    }

    /// Per-act utility profiles, in menu order.
    pub fn utility_table(&self, u: &UtilitySpec) -> Result<Vec<Vec<Q>>> {
        self.acts.iter().map(|a| a.utility_profile(u)).collect()
    }
}

/// Per-state best utility over a table of profiles.
pub fn state_maxima(rows: &[Vec<Q>]) -> Vec<Q> {
    let n = rows.first().map_or(0, Vec::len);
    (0..n).map(|s| rows.iter().map(|r| &r[s]).max().cloned().unwrap_or_default()).collect()
}

/// Regret profile of `row` against the per-state maxima.
pub fn regret_row(maxima: &[Q], row: &[Q]) -> Vec<Q> {
    maxima.iter().zip(row).map(|(m, v)| m - v).collect()
}

pub fn act_utility(act: &Act, u: &UtilitySpec, state: usize) -> Result<Q> {
    u.lottery_utility(act.outcome(state))
}

/// `regret_M(f, s) = max_{g ∈ M} u(g(s)) − u(f(s))`.
pub fn regret(act: &Act, state: usize, menu: &Menu, u: &UtilitySpec) -> Result<Q> {
    Ok(regret_profile(act, menu, u)?.swap_remove(state))
}

pub fn regret_profile(act: &Act, menu: &Menu, u: &UtilitySpec) -> Result<Vec<Q>> {
    let idx = menu.position(act)?;
    let rows = menu.utility_table(u)?;
    Ok(regret_row(&state_maxima(&rows), &rows[idx]))
}

/// Probability-free minimax regret score: worst regret over states.
pub fn max_regret(act: &Act, menu: &Menu, u: &UtilitySpec) -> Result<Q> {
    Ok(regret_profile(act, menu, u)?.into_iter().max().unwrap_or_default())
}

pub fn expected_regret(act: &Act, menu: &Menu, u: &UtilitySpec, pr: &Measure) -> Result<Q> {
    Ok(pr.expectation(&regret_profile(act, menu, u)?))
}

pub fn mer(act: &Act, menu: &Menu, u: &UtilitySpec, measures: &[Measure]) -> Result<Q> {
    let r = regret_profile(act, menu, u)?;
    Ok(measures.iter().map(|m| m.expectation(&r)).max().unwrap_or_default())
}

pub fn mwer(act: &Act, menu: &Menu, u: &UtilitySpec, set: &WeightedMeasureSet) -> Result<Q> {
    Ok(weighted_worst(set, &regret_profile(act, menu, u)?))
}

/// `max_{(Pr, α)} α·E_Pr[values]`.
pub fn weighted_worst(set: &WeightedMeasureSet, values: &[Q]) -> Q {
    set.entries()
        .iter()
        .map(|e| &e.weight * e.measure.expectation(values))
        .max()
        .unwrap_or_default()
}

pub fn seu(act: &Act, u: &UtilitySpec, pr: &Measure) -> Result<Q> {
    Ok(pr.expectation(&act.utility_profile(u)?))
}

pub fn mmeu(act: &Act, u: &UtilitySpec, measures: &[Measure]) -> Result<Q> {
    let profile = act.utility_profile(u)?;
    Ok(measures.iter().map(|m| m.expectation(&profile)).min().unwrap_or_default())
}

/// `p·f + (1-p)·g`, statewise.
pub fn mix(p: &Q, f: &Act, g: &Act) -> Act {
    if p.is_one() {
        return f.clone();
    }
    if p.is_zero() {
        return g.clone();
    }
    let name = format!("{}*{}+{}*{}", fmt_q(p), f.name, fmt_q(&(Q::one() - p)), g.name);
    let outcomes = f.outcomes.iter().zip(&g.outcomes).map(|(a, b)| a.mix(p, b)).collect();
    Act { name, space: f.space.clone(), outcomes }
}

/// `pM + (1-p)h`; each mixed act is named `f[p|h]`.
pub fn mix_menu(p: &Q, menu: &Menu, h: &Act) -> Menu {
    if p.is_one() {
        return menu.clone();
    }
    let acts = menu
        .acts
        .iter()
        .map(|f| mix(p, f, h).renamed(format!("{}[{}|{}]", f.name, fmt_q(p), h.name)))
        .collect();
    Menu { acts }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Seu,
    Mmeu,
    #[serde(rename = "regret")]
    Regret,
    Mer,
    Mwer,
}

impl Rule {
    pub const ALL: [Rule; 5] = [Rule::Seu, Rule::Regret, Rule::Mer, Rule::Mwer, Rule::Mmeu];

    pub fn lower_is_better(self) -> bool {
        matches!(self, Rule::Regret | Rule::Mer | Rule::Mwer)
    }

    pub fn is_menu_dependent(self) -> bool {
        self.lower_is_better()
    }

    fn expected_belief(self) -> &'static str {
        match self {
            Rule::Seu => "measure",
            Rule::Mmeu | Rule::Mer => "set",
            Rule::Mwer => "weighted",
            Rule::Regret => "none",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Seu => "SEU",
            Rule::Mmeu => "MMEU",
            Rule::Regret => "REG",
            Rule::Mer => "MER",
            Rule::Mwer => "MWER",
        })
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "seu" => Ok(Rule::Seu),
            "mmeu" => Ok(Rule::Mmeu),
            "regret" | "reg" => Ok(Rule::Regret),
            "mer" => Ok(Rule::Mer),
            "mwer" => Ok(Rule::Mwer),
            other => Err(Error::InvalidArgument(format!("unknown rule `{other}`"))),
        }
    }
}

/// What the agent believes, in the shape each rule expects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Belief {
    None,
    Measure(Measure),
    Set(Vec<Measure>),
    Weighted(WeightedMeasureSet),
}

/// Scores of utility profiles under `rule`. Regret rules use the
/// per-state maxima of `rows` as the menu benchmark.
pub fn profile_scores(rule: Rule, rows: &[Vec<Q>], belief: &Belief) -> Result<Vec<Q>> {
    let refs: Vec<&[Q]> = rows.iter().map(Vec::as_slice).collect();
    scores_against(rule, &state_maxima(rows), &refs, belief)
}

/// Like [`profile_scores`] for a subset of rows, with the menu maxima
/// supplied by the caller.
pub(crate) fn scores_against(rule: Rule, maxima: &[Q], rows: &[&[Q]], belief: &Belief) -> Result<Vec<Q>> {
    let mismatch = || Error::BeliefKindMismatch {
        rule: rule.to_string(),
        expected: rule.expected_belief().to_string(),
    };
    let regrets = || rows.iter().map(|r| regret_row(maxima, r));
    Ok(match (rule, belief) {
        (Rule::Seu, Belief::Measure(pr)) => rows.iter().map(|r| pr.expectation(r)).collect(),
        (Rule::Mmeu, Belief::Set(ms)) => rows
            .iter()
            .map(|r| ms.iter().map(|m| m.expectation(r)).min().unwrap_or_default())
            .collect(),
        (Rule::Regret, Belief::None) => regrets().map(|r| r.into_iter().max().unwrap_or_default()).collect(),
        (Rule::Mer, Belief::Set(ms)) => regrets()
            .map(|r| ms.iter().map(|m| m.expectation(&r)).max().unwrap_or_default())
            .collect(),
        (Rule::Mwer, Belief::Weighted(set)) => regrets().map(|r| weighted_worst(set, &r)).collect(),
        _ => return Err(mismatch()),
    })
}

/// Score of a single act of `menu` under `rule`.
pub fn score(rule: Rule, act: &Act, menu: &Menu, u: &UtilitySpec, belief: &Belief) -> Result<Q> {
    let idx = menu.position(act)?;
    let rows = menu.utility_table(u)?;
    Ok(profile_scores(rule, &rows, belief)?.swap_remove(idx))
}

pub fn rank(rule: Rule, menu: &Menu, u: &UtilitySpec, belief: &Belief) -> Result<Ranking> {
    let rows = menu.utility_table(u)?;
    let scores = profile_scores(rule, &rows, belief)?;
    let names = menu.acts.iter().map(|a| a.name.clone()).collect();
    Ok(Ranking::from_scores(rule, names, scores))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankedAct {
    pub rank: usize,
    pub act: String,
    #[serde(with = "crate::rational::serde_q")]
    pub score: Q,
}

/// Total preorder on acts: groups of equal score, best group first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ranking {
    pub rule: Rule,
    pub lower_is_better: bool,
    pub entries: Vec<RankedAct>,
}

impl Ranking {
    pub fn from_scores(rule: Rule, names: Vec<String>, scores: Vec<Q>) -> Ranking {
        let lower = rule.lower_is_better();
        let mut pairs: Vec<(String, Q)> = names.into_iter().zip(scores).collect();
        pairs.sort_by(|a, b| {
            let by_score = if lower { a.1.cmp(&b.1) } else { b.1.cmp(&a.1) };
            by_score.then_with(|| a.0.cmp(&b.0))
        });
        let mut entries: Vec<RankedAct> = Vec::with_capacity(pairs.len());
        for (act, score) in pairs {
            let rank = match entries.last() {
                Some(prev) if prev.score == score => prev.rank,
                Some(prev) => prev.rank + 1,
                None => 1,
            };
            entries.push(RankedAct { rank, act, score });
        }
        Ranking { rule, lower_is_better: lower, entries }
    }

    pub fn groups(&self) -> Vec<Vec<&str>> {
        let mut groups: Vec<Vec<&str>> = Vec::new();
        let mut last_rank = 0;
        for e in &self.entries {
            if e.rank != last_rank {
                groups.push(Vec::new());
                last_rank = e.rank;
            }
            groups.last_mut().expect("group pushed").push(&e.act);
        }
        groups
    }

    pub fn best(&self) -> Vec<&str> {
        self.groups().into_iter().next().unwrap_or_default()
    }

    pub fn score_of(&self, act: &str) -> Option<&Q> {
        self.entries.iter().find(|e| e.act == act).map(|e| &e.score)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("rank\tact\tscore\tdecimal\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                e.rank,
                e.act,
                fmt_q(&e.score),
                fmt_decimal(&e.score, 6)
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|e| {
                serde_json::json!({
                    "rank": e.rank,
                    "act": e.act,
                    "score": fmt_q(&e.score),
                    "decimal": fmt_decimal(&e.score, 6),
                })
            })
            .collect();
        serde_json::json!({
            "rule": self.rule.to_string(),
            "lower_is_better": self.lower_is_better,
            "groups": self.groups(),
            "entries": entries,
        })
    }
}
