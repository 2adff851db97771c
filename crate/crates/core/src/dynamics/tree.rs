//! Decision trees, plans, and ex-ante versus sophisticated planning.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::decision::{profile_scores, Belief, Lottery, Rule, UtilitySpec};
use crate::error::{Error, Result};
use crate::measures::{Event, StateSpace, WeightedMeasureSet};
use crate::rational::{fmt_q, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatureBranch {
    pub event_name: String,
    pub event: Event,
    pub child: DecisionTree,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecisionTree {
    Decision { name: String, branches: Vec<(String, DecisionTree)> },
    Nature { branches: Vec<NatureBranch> },
    Utility(Q),
    Lottery(Lottery),
}

impl DecisionTree {
    /// Checks branch names, decision-node name uniqueness and that every
    /// nature node partitions the states still possible when it is reached.
    pub fn validate(&self, space: &StateSpace) -> Result<()> {
        let mut names = BTreeSet::new();
        self.validate_at(&space.full_event(), &mut names)
    }

    fn validate_at(&self, live: &Event, names: &mut BTreeSet<String>) -> Result<()> {
        match self {
            DecisionTree::Decision { name, branches } => {
                if !names.insert(name.clone()) {
                    return Err(Error::MalformedTree(format!("decision node `{name}` defined twice")));
                }
                if branches.is_empty() {
                    return Err(Error::MalformedTree(format!("decision node `{name}` has no branches")));
                }
                let mut seen = BTreeSet::new();
                for (b, child) in branches {
                    if !seen.insert(b) {
                        return Err(Error::MalformedTree(format!("branch `{b}` repeated at `{name}`")));
                    }
                    child.validate_at(live, names)?;
                }
                Ok(())
            }
            DecisionTree::Nature { branches } => {
                check_partition(live, branches.iter().map(|b| (b.event_name.as_str(), &b.event)))
                    .map_err(Error::MalformedTree)?;
                for b in branches {
                    b.child.validate_at(&live.intersect(&b.event)?, names)?;
                }
                Ok(())
            }
            DecisionTree::Utility(_) | DecisionTree::Lottery(_) => Ok(()),
        }
    }

    /// Number of decision layers on the deepest path.
    pub fn decision_depth(&self) -> usize {
        match self {
            DecisionTree::Decision { branches, .. } => {
                1 + branches.iter().map(|(_, c)| c.decision_depth()).max().unwrap_or(0)
            }
            DecisionTree::Nature { branches } => branches.iter().map(|b| b.child.decision_depth()).max().unwrap_or(0),
            _ => 0,
        }
    }

    /// Number of nature layers on the deepest path.
    pub fn nature_depth(&self) -> usize {
        match self {
            DecisionTree::Decision { branches, .. } => {
                branches.iter().map(|(_, c)| c.nature_depth()).max().unwrap_or(0)
            }
            DecisionTree::Nature { branches } => {
                1 + branches.iter().map(|b| b.child.nature_depth()).max().unwrap_or(0)
            }
            _ => 0,
        }
    }
}

/// Restricted to `live`, the events must be disjoint and cover it. The
/// error message names the offending states.
pub(crate) fn check_partition<'a>(
    live: &Event,
    events: impl Iterator<Item = (&'a str, &'a Event)>,
) -> std::result::Result<(), String> {
    let space = live.space();
    let mut owner: Vec<Option<&str>> = vec![None; space.len()];
    for (name, e) in events {
        if e.space() != space {
            return Err(format!("event `{name}` is over a different state space"));
        }
        for s in (0..space.len()).filter(|&s| live.contains(s) && e.contains(s)) {
            if let Some(prev) = owner[s] {
                return Err(format!("state `{}` is in both `{prev}` and `{name}`", space.label(s)));
            }
            owner[s] = Some(name);
        }
    }
    let missing: Vec<&str> = (0..space.len())
        .filter(|&s| live.contains(s) && owner[s].is_none())
        .map(|s| space.label(s))
        .collect();
    if !missing.is_empty() {
        return Err(format!("states not covered: {}", missing.join(", ")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Planning {
    ExAnte,
    Sophisticated,
}

impl FromStr for Planning {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ex-ante" => Ok(Planning::ExAnte),
            "sophisticated" => Ok(Planning::Sophisticated),
            _ => Err(Error::InvalidArgument(format!("unknown planning mode `{s}`"))),
        }
    }
}

impl fmt::Display for Planning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Planning::ExAnte => "ex-ante",
            Planning::Sophisticated => "sophisticated",
        })
    }
}

/// Which continuations a decision node compares against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MenuPolicy {
    /// Every continuation plan of the subtree.
    Full,
    /// Only continuations that survive backward induction below the node.
    Viable,
}

impl FromStr for MenuPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(MenuPolicy::Full),
            "viable" => Ok(MenuPolicy::Viable),
            _ => Err(Error::InvalidArgument(format!("unknown menu policy `{s}`"))),
        }
    }
}

impl fmt::Display for MenuPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MenuPolicy::Full => "full",
            MenuPolicy::Viable => "viable",
        })
    }
}

/// A strategy: the branch taken at each reachable decision node, and the
/// utility profile it induces (zero outside the node's live states).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    pub choices: Vec<(String, String)>,
    pub utilities: Vec<Q>,
}

impl Plan {
    /// Chosen branches in tree order joined by `+`; `(leaf)` without choices.
    pub fn name(&self) -> String {
        if self.choices.is_empty() {
            return "(leaf)".to_string();
        }
        self.choices.iter().map(|(_, b)| b.as_str()).collect::<Vec<_>>().join("+")
    }

    pub fn choice(&self, node: &str) -> Option<&str> {
        self.choices.iter().find(|(n, _)| n == node).map(|(_, b)| b.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeDiagnostics {
    pub node: String,
    pub live_states: Vec<String>,
    pub menu: Vec<String>,
    /// Score of every plan in the comparison menu.
    pub scores: Vec<(String, Q)>,
    pub kept: Vec<String>,
    pub eliminated_branches: Vec<String>,
    pub tied: bool,
}

#[derive(Clone, Debug)]
pub struct TreeEvaluation {
    pub rule: Rule,
    pub planning: Planning,
    pub menu_policy: MenuPolicy,
    pub plan: Plan,
    /// The chosen plan's root score against every plan of the tree.
    pub score: Q,
    pub diagnostics: Vec<NodeDiagnostics>,
}

impl TreeEvaluation {
    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<_> = self
            .diagnostics
            .iter()
            .map(|d| {
                serde_json::json!({
                    "node": d.node,
                    "live_states": d.live_states,
                    "menu": d.menu,
                    "scores": d.scores.iter().map(|(p, s)| serde_json::json!({"plan": p, "score": fmt_q(s)})).collect::<Vec<_>>(),
                    "kept": d.kept,
                    "eliminated_branches": d.eliminated_branches,
                    "tied": d.tied,
                })
            })
            .collect();
        serde_json::json!({
            "rule": self.rule.to_string(),
            "planning": self.planning.to_string(),
            "menu_policy": self.menu_policy.to_string(),
            "plan": self.plan.name(),
            "choices": self.plan.choices.iter().map(|(n, b)| (n.clone(), b.clone())).collect::<BTreeMap<_, _>>(),
            "score": fmt_q(&self.score),
            "nodes": nodes,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "plan\t{}\nscore\t{}\nrule\t{}\nplanning\t{}\nmenu-policy\t{}\n",
            self.plan.name(),
            fmt_q(&self.score),
            self.rule,
            self.planning,
            self.menu_policy
        );
        for d in &self.diagnostics {
            out.push_str(&format!("\nnode\t{}\nlive\t{}\n", d.node, d.live_states.join(",")));
            for (p, s) in &d.scores {
                let mark = if d.kept.contains(p) { "*" } else { "" };
                out.push_str(&format!("score\t{p}\t{}{mark}\n", fmt_q(s)));
            }
            if !d.eliminated_branches.is_empty() {
                out.push_str(&format!("eliminated\t{}\n", d.eliminated_branches.join(",")));
            }
            if d.tied {
                out.push_str("tie\tbroken by plan name\n");
            }
        }
        out
    }
}

struct Evaluator<'a> {
    space: &'a StateSpace,
    u: &'a UtilitySpec,
    rule: Rule,
    wset: Option<&'a WeightedMeasureSet>,
    policy: MenuPolicy,
    diagnostics: Vec<NodeDiagnostics>,
}

impl<'a> Evaluator<'a> {
    fn leaf_plan(&self, live: &Event, value: &Q) -> Plan {
        let utilities = (0..self.space.len()).map(|s| if live.contains(s) { value.clone() } else { Q::zero() }).collect();
        Plan { choices: Vec::new(), utilities }
    }

    /// Every plan of the subtree rooted at `node`.
    fn all_plans(&self, node: &DecisionTree, live: &Event) -> Result<Vec<Plan>> {
        match node {
            DecisionTree::Utility(v) => Ok(vec![self.leaf_plan(live, v)]),
            DecisionTree::Lottery(l) => Ok(vec![self.leaf_plan(live, &self.u.lottery_utility(l)?)]),
            DecisionTree::Decision { name, branches } => {
                let mut out = Vec::new();
                for (b, child) in branches {
                    for mut p in self.all_plans(child, live)? {
                        p.choices.insert(0, (name.clone(), b.clone()));
                        out.push(p);
                    }
                }
                Ok(out)
            }
            DecisionTree::Nature { branches } => {
                let mut parts = Vec::new();
                for b in branches {
                    let sub = live.intersect(&b.event)?;
                    parts.push(self.all_plans(&b.child, &sub)?);
                }
                Ok(self.product(parts))
            }
        }
    }

    /// Combines one plan per nature branch; live sets are disjoint so
    /// utilities add.
    fn product(&self, parts: Vec<Vec<Plan>>) -> Vec<Plan> {
        let start = Plan { choices: Vec::new(), utilities: vec![Q::zero(); self.space.len()] };
        parts.into_iter().fold(vec![start], |acc, options| {
            let mut out = Vec::new();
            for a in &acc {
                for o in &options {
                    let mut choices = a.choices.clone();
                    choices.extend(o.choices.iter().cloned());
                    let utilities = a.utilities.iter().zip(&o.utilities).map(|(x, y)| x + y).collect();
                    out.push(Plan { choices, utilities });
                }
            }
            out
        })
    }

    /// Scores of `plans` against the comparison `menu` at a node whose
    /// reachable states are `live`.
    fn score(&self, node: &str, live: &Event, plans: &[Plan], menu: &[Plan]) -> Result<Vec<Q>> {
        let cols: Vec<usize> = (0..self.space.len()).filter(|&s| live.contains(s)).collect();
        let mut rows: Vec<Vec<Q>> = menu.iter().map(|p| p.utilities.clone()).collect();
        rows.extend(plans.iter().map(|p| p.utilities.clone()));
        let scores = match self.rule {
            Rule::Regret => {
                let restricted: Vec<Vec<Q>> =
                    rows.iter().map(|r| cols.iter().map(|&s| r[s].clone()).collect()).collect();
                profile_scores(Rule::Regret, &restricted, &Belief::None)?
            }
            Rule::Mwer => {
                let wset = self.wset.ok_or_else(|| Error::InvalidArgument("MWER needs hypotheses".into()))?;
                if super::is_null(live, wset) {
                    return Err(Error::NullEventAtNode(node.to_string()));
                }
                profile_scores(Rule::Mwer, &rows, &Belief::Weighted(wset.likelihood_update(live)?))?
            }
            other => {
                return Err(Error::InvalidArgument(format!("trees are evaluated with REG or MWER, not {other}")))
            }
        };
        Ok(scores[menu.len()..].to_vec())
    }

    /// Backward induction: the continuation plans that survive at `node`.
    fn solve(&mut self, node: &DecisionTree, live: &Event) -> Result<Vec<Plan>> {
        match node {
            DecisionTree::Utility(_) | DecisionTree::Lottery(_) => self.all_plans(node, live),
            DecisionTree::Nature { branches } => {
                let mut parts = Vec::new();
                for b in branches {
                    let sub = live.intersect(&b.event)?;
                    parts.push(self.solve(&b.child, &sub)?);
                }
                Ok(self.product(parts))
            }
            DecisionTree::Decision { name, branches } => {
                let mut candidates = Vec::new();
                for (b, child) in branches {
                    for mut p in self.solve(child, live)? {
                        p.choices.insert(0, (name.clone(), b.clone()));
                        candidates.push(p);
                    }
                }
                let menu = match self.policy {
                    MenuPolicy::Full => self.all_plans(node, live)?,
                    MenuPolicy::Viable => candidates.clone(),
                };
                let scores = self.score(name, live, &candidates, &menu)?;
                let best = scores.iter().min().cloned().expect("decision node has branches");
                let kept: Vec<Plan> =
                    candidates.iter().zip(&scores).filter(|(_, s)| **s == best).map(|(p, _)| p.clone()).collect();
                let kept_branches: BTreeSet<&str> = kept.iter().filter_map(|p| p.choice(name)).collect();
                let menu_scores = self.score(name, live, &menu, &menu)?;
                self.diagnostics.push(NodeDiagnostics {
                    node: name.clone(),
                    live_states: live.member_labels().into_iter().map(String::from).collect(),
                    menu: menu.iter().map(Plan::name).collect(),
                    scores: menu.iter().map(Plan::name).zip(menu_scores).collect(),
                    kept: kept.iter().map(Plan::name).collect(),
                    eliminated_branches: branches
                        .iter()
                        .map(|(b, _)| b.clone())
                        .filter(|b| !kept_branches.contains(b.as_str()))
                        .collect(),
                    tied: kept.len() > 1,
                });
                Ok(kept)
            }
        }
    }
}

/// Chooses a plan for `tree`. Regret-based rules only (REG ignores
/// `wset`; MWER conditions it on each node's live states). Ties that
/// remain at the root go to the lexicographically smallest plan name.
pub fn evaluate_tree(
    tree: &DecisionTree,
    space: &StateSpace,
    u: &UtilitySpec,
    rule: Rule,
    wset: Option<&WeightedMeasureSet>,
    planning: Planning,
    menu_policy: MenuPolicy,
) -> Result<TreeEvaluation> {
    tree.validate(space)?;
    if let Some(w) = wset {
        if w.space() != space {
            return Err(Error::DimensionMismatch);
        }
    }
    let mut ev = Evaluator { space, u, rule, wset, policy: menu_policy, diagnostics: Vec::new() };
    let full = space.full_event();
    let all = ev.all_plans(tree, &full)?;
    let root_name = match tree {
        DecisionTree::Decision { name, .. } => name.clone(),
        _ => "(root)".to_string(),
    };
    let pool = match planning {
        Planning::ExAnte => {
            let scores = ev.score(&root_name, &full, &all, &all)?;
            let best = scores.iter().min().cloned().unwrap_or_default();
            let kept: Vec<Plan> =
                all.iter().zip(&scores).filter(|(_, s)| **s == best).map(|(p, _)| p.clone()).collect();
            ev.diagnostics.push(NodeDiagnostics {
                node: root_name.clone(),
                live_states: full.member_labels().into_iter().map(String::from).collect(),
                menu: all.iter().map(Plan::name).collect(),
                scores: all.iter().map(Plan::name).zip(scores).collect(),
                kept: kept.iter().map(Plan::name).collect(),
                eliminated_branches: Vec::new(),
                tied: kept.len() > 1,
            });
            kept
        }
        Planning::Sophisticated => ev.solve(tree, &full)?,
    };
    let plan = pool
        .into_iter()
        .min_by(|a, b| a.name().cmp(&b.name()).then_with(|| a.choices.cmp(&b.choices)))
        .ok_or_else(|| Error::MalformedTree("no plans".into()))?;
    let score = {
        let idx = all.iter().position(|p| p.choices == plan.choices).expect("plan comes from the tree");
        ev.score(&root_name, &full, &all[idx..=idx], &all)?.remove(0)
    };
    Ok(TreeEvaluation { rule, planning, menu_policy, plan, score, diagnostics: ev.diagnostics })
}
