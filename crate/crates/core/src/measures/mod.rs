//! Weighted sets of probability measures over a finite state space.
//!
//! A [`WeightedMeasureSet`] pairs each measure with a weight in `[0, 1]`;
//! in normalized form some weight equals 1 and no measure appears twice.
//! Updating is likelihood updating: every measure is conditioned and its
//! weight rescaled by the relative likelihood of the observed event.
//! The geometric side (sub-probability vectors, regular hulls, support
//! values and weight recovery) lives in [`hull`].

mod hull;
mod simplex;

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, Q};

pub use hull::{recover_weights, RegularHull, SubProbabilityVector};

/// Ordered list of state labels shared by every measure, event and act
/// built over it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateSpace(Arc<Vec<String>>);

impl StateSpace {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidArgument("state space is empty".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidArgument(format!("duplicate state `{l}`")));
            }
        }
        Ok(StateSpace(Arc::new(labels)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.0
    }

    pub fn label(&self, index: usize) -> &str {
        &self.0[index]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.0
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownState(label.to_string()))
    }

    /// State indices ordered by label, used by every canonical rendering.
    pub fn sorted_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| self.0[a].cmp(&self.0[b]));
        idx
    }

    pub fn event<S: AsRef<str>>(&self, members: &[S]) -> Result<Event> {
        let mut flags = vec![false; self.len()];
        for m in members {
            flags[self.index_of(m.as_ref())?] = true;
        }
        Ok(Event { space: self.clone(), members: flags })
    }

    pub fn full_event(&self) -> Event {
        Event { space: self.clone(), members: vec![true; self.len()] }
    }

    pub fn empty_event(&self) -> Event {
        Event { space: self.clone(), members: vec![false; self.len()] }
    }
}

impl fmt::Debug for StateSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// A subset of the state space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Event {
    space: StateSpace,
    members: Vec<bool>,
}

impl Event {
    pub fn from_flags(space: &StateSpace, members: Vec<bool>) -> Result<Self> {
        if members.len() != space.len() {
            return Err(Error::DimensionMismatch);
        }
        Ok(Event { space: space.clone(), members })
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn contains(&self, state: usize) -> bool {
        self.members[state]
    }

    pub fn flags(&self) -> &[bool] {
        &self.members
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }

    pub fn is_full(&self) -> bool {
        self.members.iter().all(|&m| m)
    }

    pub fn intersect(&self, other: &Event) -> Result<Event> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch);
        }
        let members = self.members.iter().zip(&other.members).map(|(a, b)| *a && *b).collect();
        Ok(Event { space: self.space.clone(), members })
    }

    pub fn complement(&self) -> Event {
        Event { space: self.space.clone(), members: self.members.iter().map(|m| !m).collect() }
    }

    pub fn member_labels(&self) -> Vec<&str> {
        let mut labels: Vec<&str> = (0..self.members.len())
            .filter(|&i| self.members[i])
            .map(|i| self.space.label(i))
            .collect();
        labels.sort_unstable();
        labels
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.member_labels().join(", "))
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A probability measure: nonnegative rationals over every state, summing to 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Measure {
    space: StateSpace,
    probs: Vec<Q>,
}

impl Measure {
    pub fn new(space: &StateSpace, probs: Vec<Q>) -> Result<Self> {
        if probs.len() != space.len() {
            return Err(Error::DimensionMismatch);
        }
        if let Some(i) = probs.iter().position(|p| p.is_negative()) {
            return Err(Error::InvalidMeasure(format!(
                "negative probability at `{}`",
                space.label(i)
            )));
        }
        let total: Q = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!("probabilities sum to {}", fmt_q(&total))));
        }
        Ok(Measure { space: space.clone(), probs })
    }

    /// Builds a measure from `(state, probability)` pairs; absent states get 0.
    pub fn from_pairs<S: AsRef<str>>(space: &StateSpace, pairs: &[(S, Q)]) -> Result<Self> {
        let mut probs = vec![Q::zero(); space.len()];
        for (label, p) in pairs {
            probs[space.index_of(label.as_ref())?] += p.clone();
        }
        Measure::new(space, probs)
    }

    pub fn point_mass(space: &StateSpace, state: usize) -> Self {
        let mut probs = vec![Q::zero(); space.len()];
        probs[state] = Q::one();
        Measure { space: space.clone(), probs }
    }

    pub fn uniform(space: &StateSpace) -> Self {
        let p = Q::new(1.into(), (space.len() as i64).into());
        Measure { space: space.clone(), probs: vec![p; space.len()] }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn probs(&self) -> &[Q] {
        &self.probs
    }

    pub fn prob(&self, state: usize) -> &Q {
        &self.probs[state]
    }

    pub fn event_prob(&self, event: &Event) -> Q {
        self.probs
            .iter()
            .zip(event.flags())
            .filter(|(_, &m)| m)
            .map(|(p, _)| p)
            .sum()
    }

    /// `Pr | E`, or `None` when `Pr(E) = 0`.
    pub fn condition(&self, event: &Event) -> Option<Measure> {
        let mass = self.event_prob(event);
        if mass.is_zero() {
            return None;
        }
        let probs = self
            .probs
            .iter()
            .zip(event.flags())
            .map(|(p, &m)| if m { p / &mass } else { Q::zero() })
            .collect();
        Some(Measure { space: self.space.clone(), probs })
    }

    pub fn expectation(&self, values: &[Q]) -> Q {
        self.probs.iter().zip(values).map(|(p, v)| p * v).sum()
    }

    pub(crate) fn canonical_body(&self) -> String {
        let parts: Vec<String> = self
            .space
            .sorted_indices()
            .into_iter()
            .map(|i| format!("{}: {}", self.space.label(i), fmt_q(&self.probs[i])))
            .collect();
        format!("{{ {} }}", parts.join(", "))
    }
}

impl fmt::Debug for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_body())
    }
}

#[derive(Clone, Debug)]
pub struct WeightedMeasure {
    pub label: String,
    pub measure: Measure,
    pub weight: Q,
}

/// Finite weighted set of probability measures.
///
/// Equality ignores labels and entry order: two sets are equal when they
/// hold the same measures with the same weights.
#[derive(Clone, Debug)]
pub struct WeightedMeasureSet {
    space: StateSpace,
    entries: Vec<WeightedMeasure>,
}

impl PartialEq for WeightedMeasureSet {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.canonical_pairs() == other.canonical_pairs()
    }
}

impl Eq for WeightedMeasureSet {}

impl WeightedMeasureSet {
    /// Wraps raw entries without normalizing. Weights must lie in `[0, 1]`
    /// after scaling is ignored, so only negativity is rejected here.
    pub fn from_entries(space: &StateSpace, entries: Vec<WeightedMeasure>) -> Result<Self> {
        for e in &entries {
            if e.measure.space() != space {
                return Err(Error::DimensionMismatch);
            }
            if e.weight.is_negative() {
                return Err(Error::InvalidArgument(format!("negative weight for `{}`", e.label)));
            }
        }
        Ok(WeightedMeasureSet { space: space.clone(), entries })
    }

    /// Convenience constructor that normalizes the given `(label, measure, weight)` triples.
    pub fn new<S: Into<String>>(space: &StateSpace, items: Vec<(S, Measure, Q)>) -> Result<Self> {
        let entries = items
            .into_iter()
            .map(|(label, measure, weight)| WeightedMeasure { label: label.into(), measure, weight })
            .collect();
        WeightedMeasureSet::from_entries(space, entries)?.normalize()
    }

    /// Every measure at weight 1 (an unweighted credal set).
    pub fn unweighted<S: Into<String>>(space: &StateSpace, items: Vec<(S, Measure)>) -> Result<Self> {
        WeightedMeasureSet::new(space, items.into_iter().map(|(l, m)| (l, m, Q::one())).collect())
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn entries(&self) -> &[WeightedMeasure] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn measures(&self) -> Vec<Measure> {
        self.entries.iter().map(|e| e.measure.clone()).collect()
    }

    pub fn is_normalized(&self) -> bool {
        self.entries.iter().any(|e| e.weight.is_one())
            && self.entries.iter().all(|e| e.weight <= Q::one())
    }

    fn canonical_pairs(&self) -> Vec<(&[Q], &Q)> {
        let mut pairs: Vec<(&[Q], &Q)> =
            self.entries.iter().map(|e| (e.measure.probs(), &e.weight)).collect();
        pairs.sort();
        pairs
    }

    /// Divides all weights by the maximum and merges duplicate measures,
    /// keeping the larger weight.
    pub fn normalize(&self) -> Result<Self> {
        if self.entries.is_empty() {
            return Err(Error::EmptySet);
        }
        let max = self.entries.iter().map(|e| &e.weight).max().cloned().unwrap_or_default();
        if max.is_zero() {
            return Err(Error::AllZeroWeights);
        }
        let scaled = self.entries.iter().map(|e| WeightedMeasure {
            label: e.label.clone(),
            measure: e.measure.clone(),
            weight: &e.weight / &max,
        });
        Ok(WeightedMeasureSet { space: self.space.clone(), entries: merge_duplicates(scaled) })
    }

    /// `max` over entries of `weight · Pr(E)`.
    pub fn upper_likelihood(&self, event: &Event) -> Q {
        self.entries
            .iter()
            .map(|e| &e.weight * e.measure.event_prob(event))
            .max()
            .unwrap_or_default()
    }

    /// Likelihood updating: condition every measure with `Pr(E) > 0` and
    /// give `Pr | E` the largest candidate weight `α·Pr(E) / ᾱ(E)`.
    pub fn likelihood_update(&self, event: &Event) -> Result<Self> {
        if event.space() != &self.space {
            return Err(Error::DimensionMismatch);
        }
        let upper = self.upper_likelihood(event);
        if upper.is_zero() {
            return Err(Error::UndefinedUpdate(event.to_string()));
        }
        let updated = self.entries.iter().filter_map(|e| {
            let mass = e.measure.event_prob(event);
            let measure = e.measure.condition(event)?;
            Some(WeightedMeasure { label: e.label.clone(), measure, weight: &e.weight * mass / &upper })
        });
        Ok(WeightedMeasureSet { space: self.space.clone(), entries: merge_duplicates(updated) })
    }

    /// Two successive single-event updates, `(P⁺|E₁)|E₂`.
    pub fn sequential_update(&self, first: &Event, second: &Event) -> Result<Self> {
        self.likelihood_update(first)?.likelihood_update(second)
    }

    /// Measure-by-measure conditioning with weights left as they are
    /// (renormalized so some weight is 1 again).
    pub fn measure_by_measure_update(&self, event: &Event) -> Result<Self> {
        let updated: Vec<WeightedMeasure> = self
            .entries
            .iter()
            .filter_map(|e| {
                let measure = e.measure.condition(event)?;
                Some(WeightedMeasure { label: e.label.clone(), measure, weight: e.weight.clone() })
            })
            .filter(|e| !e.weight.is_zero())
            .collect();
        if updated.is_empty() {
            return Err(Error::UndefinedUpdate(event.to_string()));
        }
        WeightedMeasureSet { space: self.space.clone(), entries: updated }.normalize()
    }

    /// Rescales weights by externally supplied per-entry likelihoods of an
    /// observation that leaves every measure unchanged.
    pub fn reweight(&self, likelihoods: &[Q]) -> Result<Self> {
        if likelihoods.len() != self.entries.len() {
            return Err(Error::DimensionMismatch);
        }
        let entries: Vec<WeightedMeasure> = self
            .entries
            .iter()
            .zip(likelihoods)
            .map(|(e, l)| WeightedMeasure {
                label: e.label.clone(),
                measure: e.measure.clone(),
                weight: &e.weight * l,
            })
            .filter(|e| !e.weight.is_zero())
            .collect();
        if entries.is_empty() {
            return Err(Error::UndefinedUpdate("observation".into()));
        }
        WeightedMeasureSet { space: self.space.clone(), entries }.normalize()
    }

    pub fn weight_of(&self, label: &str) -> Option<&Q> {
        self.entries.iter().find(|e| e.label == label).map(|e| &e.weight)
    }

    pub fn to_hull(&self) -> RegularHull {
        RegularHull::from_weighted_set(self)
    }

    /// Canonical text: a `states:` line followed by one `hypothesis` line
    /// per entry, states and entries sorted by label.
    pub fn to_canonical_text(&self) -> String {
        let mut states: Vec<&str> = self.space.labels().iter().map(String::as_str).collect();
        states.sort_unstable();
        let mut out = format!("states: {}\n", states.join(" "));
        for line in self.hypothesis_lines() {
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub(crate) fn hypothesis_lines(&self) -> Vec<String> {
        let mut lines: Vec<String> = self
            .entries
            .iter()
            .map(|e| {
                format!(
                    "hypothesis {} weight {} = {}",
                    e.label,
                    fmt_q(&e.weight),
                    e.measure.canonical_body()
                )
            })
            .collect();
        lines.sort();
        lines
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|e| {
                let probs: serde_json::Map<String, serde_json::Value> = self
                    .space
                    .sorted_indices()
                    .into_iter()
                    .map(|i| (self.space.label(i).to_string(), fmt_q(e.measure.prob(i)).into()))
                    .collect();
                serde_json::json!({ "label": e.label, "weight": fmt_q(&e.weight), "probs": probs })
            })
            .collect();
        entries.sort_by_key(|v| v.to_string());
        let mut states = self.space.labels().to_vec();
        states.sort();
        serde_json::json!({ "states": states, "entries": entries })
    }
}

fn merge_duplicates(entries: impl Iterator<Item = WeightedMeasure>) -> Vec<WeightedMeasure> {
    let mut merged: Vec<WeightedMeasure> = Vec::new();
    for e in entries {
        match merged.iter_mut().find(|m| m.measure == e.measure) {
            Some(existing) => {
                if e.weight > existing.weight
                    || (e.weight == existing.weight && e.label < existing.label)
                {
                    *existing = e;
                }
            }
            None => merged.push(e),
        }
    }
    merged
}
