//! Conditional preferences, null events and menu-dependent dynamic
//! consistency, plus decision trees in [`tree`].

mod tree;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::axioms::{
    grid_utility, AxiomId, AxiomInstance, AxiomReport, Counterexample, GeneratorConfig, Gen, ScoreLine,
    Verdict,
};
use crate::decision::{mwer, Act, Menu, UtilitySpec};
use crate::error::{Error, Result};
use crate::measures::{Event, WeightedMeasureSet};
use crate::rational::Q;

pub(crate) use tree::check_partition;
pub use tree::{
    evaluate_tree, DecisionTree, MenuPolicy, NatureBranch, NodeDiagnostics, Plan, Planning, TreeEvaluation,
};

/// `fEh`: `f` on `e`, `h` off it. The result keeps `f`'s name so it can be
/// looked up in [`splice_menu`].
pub fn splice(f: &Act, e: &Event, h: &Act) -> Result<Act> {
    if f.space() != e.space() || h.space() != e.space() {
        return Err(Error::DimensionMismatch);
    }
    let outcomes = (0..e.space().len())
        .map(|s| if e.contains(s) { f.outcome(s).clone() } else { h.outcome(s).clone() })
        .collect();
    Act::new(f.name(), e.space(), outcomes)
}

/// `MEh = {fEh : f ∈ M}`, act names unchanged.
pub fn splice_menu(menu: &Menu, e: &Event, h: &Act) -> Result<Menu> {
    Menu::new(menu.acts().iter().map(|f| splice(f, e, h)).collect::<Result<_>>()?)
}

/// `E` is null iff every entry has `weight · Pr(E) = 0`.
pub fn is_null(e: &Event, wset: &WeightedMeasureSet) -> bool {
    use num_traits::Zero;
    wset.upper_likelihood(e).is_zero()
}

/// MWER of `f` in `menu` after likelihood updating on `e`.
pub fn conditional_score(f: &Act, e: &Event, menu: &Menu, u: &UtilitySpec, wset: &WeightedMeasureSet) -> Result<Q> {
    if is_null(e, wset) {
        return Err(Error::NullEvent(e.to_string()));
    }
    mwer(f, menu, u, &wset.likelihood_update(e)?)
}

/// Both sides of `regret_{MEh}(fEh) = ᾱ(E) · regret_{M, P⁺|E}(f)`.
pub fn mdc_scaling_check(
    f: &Act,
    e: &Event,
    menu: &Menu,
    h: &Act,
    u: &UtilitySpec,
    wset: &WeightedMeasureSet,
) -> Result<(Q, Q)> {
    if is_null(e, wset) {
        return Err(Error::NullEvent(e.to_string()));
    }
    for a in [f, h] {
        if menu.get(a.name()).is_none_or(|m| !m.same_outcomes(a)) {
            return Err(Error::ActNotInMenu(a.name().to_string()));
        }
    }
    let lhs = mwer(&splice(f, e, h)?, &splice_menu(menu, e, h)?, u, wset)?;
    let rhs = wset.upper_likelihood(e) * conditional_score(f, e, menu, u, wset)?;
    Ok((lhs, rhs))
}

/// How the belief is revised on learning an event.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Updating {
    /// Weights rescaled by relative likelihood.
    Likelihood,
    /// Each measure conditioned, weights kept.
    MeasureByMeasure,
}

impl Updating {
    pub fn apply(self, wset: &WeightedMeasureSet, e: &Event) -> Result<WeightedMeasureSet> {
        match self {
            Updating::Likelihood => wset.likelihood_update(e),
            Updating::MeasureByMeasure => wset.measure_by_measure_update(e),
        }
    }
}

fn prefers(a: &Q, b: &Q) -> std::cmp::Ordering {
    // lower MWER is better
    b.cmp(a)
}

/// Conditional comparison of `f` and `g` and its spliced counterpart for
/// every `h ∈ M`; `None` when all agree.
fn mdc_probe(
    updating: Updating,
    wset: &WeightedMeasureSet,
    u: &UtilitySpec,
    menu: &Menu,
    f: &Act,
    g: &Act,
    e: &Event,
) -> Result<Option<(Vec<ScoreLine>, String, usize)>> {
    let updated = updating.apply(wset, e)?;
    let sf = mwer(f, menu, u, &updated)?;
    let sg = mwer(g, menu, u, &updated)?;
    let lhs = prefers(&sf, &sg);
    let mut lines = vec![
        ScoreLine { label: format!("{}@M|E", f.name()), score: sf },
        ScoreLine { label: format!("{}@M|E", g.name()), score: sg },
    ];
    for (i, h) in menu.acts().iter().enumerate() {
        let spliced = splice_menu(menu, e, h)?;
        let fh = mwer(spliced.get(f.name()).expect("same names"), &spliced, u, wset)?;
        let gh = mwer(spliced.get(g.name()).expect("same names"), &spliced, u, wset)?;
        let rhs = prefers(&fh, &gh);
        lines.push(ScoreLine { label: format!("{}Eh@MEh[h={}]", f.name(), h.name()), score: fh });
        lines.push(ScoreLine { label: format!("{}Eh@MEh[h={}]", g.name(), h.name()), score: gh });
        if rhs != lhs {
            let pattern = format!("conditional order {lhs:?} but spliced order {rhs:?} with h = {}", h.name());
            return Ok(Some((lines, pattern, i)));
        }
    }
    Ok(None)
}

fn random_event(rng: &mut ChaCha8Rng, wset: &WeightedMeasureSet) -> Option<Event> {
    let n = wset.space().len();
    for _ in 0..32 {
        let flags: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        let e = Event::from_flags(wset.space(), flags).ok()?;
        if !e.is_empty() && !is_null(&e, wset) {
            return Some(e);
        }
    }
    None
}

/// Checks `f ⪰_{E,M} g ⟺ fEh ⪰_{MEh} gEh` for every `h ∈ M`, where the
/// conditional order is MWER under `updating` and the spliced side uses the
/// unconditional belief.
pub fn check_mdc(
    updating: Updating,
    wset: &WeightedMeasureSet,
    config: &GeneratorConfig,
    seed: u64,
) -> Result<AxiomReport> {
    let mut report = AxiomReport {
        axiom: AxiomId::DynamicConsistency,
        rule: crate::decision::Rule::Mwer,
        verdict: Verdict::NoViolationFound,
        counterexample: None,
        samples: 0,
        attempts: 0,
        curated_checked: 0,
        no_witness: 0,
        seed,
    };
    let u = grid_utility(config.utility_denominator);
    let mut gen = Gen::new(ChaCha8Rng::seed_from_u64(seed), wset.space(), config);
    let max_attempts = config.samples.saturating_mul(config.attempt_factor.max(1));
    while report.samples < config.samples && report.attempts < max_attempts {
        report.attempts += 1;
        let Some(e) = random_event(&mut gen.rng, wset) else {
            continue;
        };
        let menu = gen.menu(2, false);
        let picked: Vec<Act> = menu.acts().choose_multiple(&mut gen.rng, 2).cloned().collect();
        report.samples += 1;
        if let Some((scores, pattern, hi)) = mdc_probe(updating, wset, &u, &menu, &picked[0], &picked[1], &e)? {
            let h = menu.acts()[hi].clone();
            let instance = AxiomInstance {
                utility: u,
                other_menu: Some(splice_menu(&menu, &e, &h)?),
                menu,
                acts: vec![picked[0].clone(), picked[1].clone(), h],
                mixtures: vec![],
                event: Some(e),
            };
            report.verdict = Verdict::Violated;
            report.counterexample = Some(Counterexample { instance, scores, pattern, curated: None });
            return Ok(report);
        }
    }
    Ok(report)
}

/// Re-runs a stored dynamic-consistency counterexample.
pub fn replay_mdc(report: &AxiomReport, updating: Updating, wset: &WeightedMeasureSet) -> Result<bool> {
    let Some(cx) = &report.counterexample else {
        return Ok(false);
    };
    let inst = &cx.instance;
    let e = inst.event.as_ref().ok_or_else(|| Error::InvalidArgument("counterexample has no event".into()))?;
    Ok(match mdc_probe(updating, wset, &inst.utility, &inst.menu, &inst.acts[0], &inst.acts[1], e)? {
        Some((scores, pattern, _)) => scores == cx.scores && pattern == cx.pattern,
        None => false,
    })
}
