//! Sub-probability geometry: the regular (convex, downward-closed, closed)
//! set generated by the scaled measures `α·Pr` of a weighted set.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::simplex::{is_feasible, Constraint, Rel};
use super::{Measure, StateSpace, WeightedMeasureSet};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, Q};

/// Nonnegative vector over the states with total mass at most 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubProbabilityVector {
    values: Vec<Q>,
}

impl SubProbabilityVector {
    pub fn new(values: Vec<Q>) -> Result<Self> {
        if values.iter().any(Signed::is_negative) {
            return Err(Error::InvalidArgument("sub-probability vector has a negative entry".into()));
        }
        let total: Q = values.iter().sum();
        if total > Q::one() {
            return Err(Error::InvalidArgument(format!("mass {} exceeds 1", fmt_q(&total))));
        }
        Ok(SubProbabilityVector { values })
    }

    pub fn scaled(measure: &Measure, weight: &Q) -> Self {
        SubProbabilityVector { values: measure.probs().iter().map(|p| p * weight).collect() }
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn mass(&self) -> Q {
        self.values.iter().sum()
    }

    pub fn dot(&self, direction: &[Q]) -> Q {
        self.values.iter().zip(direction).map(|(a, b)| a * b).sum()
    }

    fn dominated_by(&self, other: &SubProbabilityVector) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }
}

impl fmt::Debug for SubProbabilityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(fmt_q).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Generator form of a regular set of sub-probability measures: the set is
/// the downward closure of the convex hull of `generators`.
#[derive(Clone, Debug)]
pub struct RegularHull {
    space: StateSpace,
    generators: Vec<SubProbabilityVector>,
}

impl RegularHull {
    /// Builds a hull from arbitrary generators, pruning dominated ones.
    pub fn new(space: &StateSpace, generators: Vec<SubProbabilityVector>) -> Result<Self> {
        if generators.iter().any(|g| g.values.len() != space.len()) {
            return Err(Error::DimensionMismatch);
        }
        if !generators.iter().any(|g| g.mass().is_one()) {
            return Err(Error::InvalidArgument("hull contains no probability measure".into()));
        }
        Ok(RegularHull { space: space.clone(), generators: prune(generators) })
    }

    /// `C(P⁺)` for a normalized weighted set.
    pub fn from_weighted_set(set: &WeightedMeasureSet) -> Self {
        let gens = set
            .entries()
            .iter()
            .map(|e| SubProbabilityVector::scaled(&e.measure, &e.weight))
            .collect();
        RegularHull { space: set.space().clone(), generators: prune(gens) }
    }

    /// The full simplex: point masses at every state.
    pub fn simplex(space: &StateSpace) -> Self {
        let gens = (0..space.len())
            .map(|i| SubProbabilityVector::scaled(&Measure::point_mass(space, i), &Q::one()))
            .collect();
        RegularHull { space: space.clone(), generators: gens }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn generators(&self) -> &[SubProbabilityVector] {
        &self.generators
    }

    /// Is `point` inside the downward-closed convex hull?
    pub fn contains(&self, point: &SubProbabilityVector) -> bool {
        in_down_hull(point, self.generators.iter())
    }

    /// Maximum of `⟨p, direction⟩` over the hull, for nonnegative directions.
    pub fn support_value(&self, direction: &[Q]) -> Result<Q> {
        if direction.len() != self.space.len() {
            return Err(Error::DimensionMismatch);
        }
        if let Some(i) = direction.iter().position(Signed::is_negative) {
            return Err(Error::NegativeDirection(self.space.label(i).to_string()));
        }
        Ok(self.generators.iter().map(|g| g.dot(direction)).max().unwrap_or_default())
    }

    /// Set equality of the represented regular sets.
    pub fn equals(&self, other: &RegularHull) -> Result<bool> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch);
        }
        Ok(self.generators.iter().all(|g| other.contains(g))
            && other.generators.iter().all(|g| self.contains(g)))
    }

    pub fn to_canonical_text(&self) -> String {
        let order = self.space.sorted_indices();
        let labels: Vec<&str> = order.iter().map(|&i| self.space.label(i)).collect();
        let mut lines: Vec<String> = self
            .generators
            .iter()
            .map(|g| {
                let parts: Vec<String> = order
                    .iter()
                    .map(|&i| format!("{}: {}", self.space.label(i), fmt_q(&g.values[i])))
                    .collect();
                format!("generator = {{ {} }}", parts.join(", "))
            })
            .collect();
        lines.sort();
        format!("states: {}\n{}\n", labels.join(" "), lines.join("\n"))
    }
}

fn prune(generators: Vec<SubProbabilityVector>) -> Vec<SubProbabilityVector> {
    let mut gens: Vec<SubProbabilityVector> = Vec::new();
    for g in generators {
        if !g.values.iter().all(Zero::is_zero) && !gens.contains(&g) {
            gens.push(g);
        }
    }
    gens.sort();
    let mut i = 0;
    while i < gens.len() {
        let others = gens.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g);
        if in_down_hull(&gens[i], others) {
            gens.remove(i);
        } else {
            i += 1;
        }
    }
    gens
}

/// `∃ λ ≥ 0, Σλ ≤ 1, Σ λ_j g_j ≥ point` componentwise.
fn in_down_hull<'a>(
    point: &SubProbabilityVector,
    generators: impl Iterator<Item = &'a SubProbabilityVector> + Clone,
) -> bool {
    if point.values.iter().all(Zero::is_zero) {
        return true;
    }
    if generators.clone().any(|g| point.dominated_by(g)) {
        return true;
    }
    let gens: Vec<&SubProbabilityVector> = generators.collect();
    if gens.is_empty() {
        return false;
    }
    let mut constraints: Vec<Constraint> = (0..point.values.len())
        .filter(|&s| point.values[s].is_positive())
        .map(|s| Constraint {
            coeffs: gens.iter().map(|g| g.values[s].clone()).collect(),
            rel: Rel::Ge,
            rhs: point.values[s].clone(),
        })
        .collect();
    constraints.push(Constraint { coeffs: vec![Q::one(); gens.len()], rel: Rel::Le, rhs: Q::one() });
    is_feasible(gens.len(), &constraints)
}

/// Upper approximation of each candidate's canonical weight from a
/// worst-case regret oracle over nonpositive utility vectors.
///
/// With `I(b) = -oracle(b)`, the weight of `Pr` is approximated by the
/// infimum of `I(b) / E_Pr(b)` over the directions with `E_Pr(b) < 0`.
pub fn recover_weights<F>(oracle: F, candidates: &[Measure], directions: &[Vec<Q>]) -> Result<Vec<Q>>
where
    F: Fn(&[Q]) -> Q,
{
    let minus_one = -Q::one();
    for b in directions {
        if b.iter().any(|v| v.is_positive() || *v < minus_one) {
            return Err(Error::InvalidArgument("directions must lie in [-1, 0]".into()));
        }
    }
    let values: Vec<Q> = directions.iter().map(|b| -oracle(b)).collect();
    candidates
        .iter()
        .enumerate()
        .map(|(k, pr)| {
            directions
                .iter()
                .zip(&values)
                .filter_map(|(b, ib)| {
                    let e = pr.expectation(b);
                    e.is_negative().then(|| ib / e)
                })
                .min()
                .ok_or_else(|| Error::NoInformativeDirection(format!("candidate #{k}")))
        })
        .collect()
}
