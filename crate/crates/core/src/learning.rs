//! Repeated i.i.d. observations: likelihood-updated weights, convergence of
//! MWER to SEU under the true measure, and threshold elimination.
//!
//! Simulations accumulate log-likelihoods in `f64`; the closed-form
//! cupcake weight and threshold updates on single events stay exact.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decision::{Menu, UtilitySpec};
use crate::error::{Error, Result};
use crate::measures::{Event, Measure, StateSpace, WeightedMeasureSet};
use crate::rational::{binomial, to_f64, Q};

/// Outcome distributions per hypothesis over a shared alphabet, one of
/// which generates the data.
#[derive(Clone, Debug)]
pub struct ObservationModel {
    pub outcomes: StateSpace,
    pub hypotheses: Vec<(String, Measure)>,
    pub truth: usize,
}

impl ObservationModel {
    pub fn new(outcomes: &StateSpace, hypotheses: Vec<(String, Measure)>, truth: &str) -> Result<Self> {
        if hypotheses.is_empty() {
            return Err(Error::EmptySet);
        }
        if hypotheses.iter().any(|(_, m)| m.space() != outcomes) {
            return Err(Error::DimensionMismatch);
        }
        let truth = hypotheses
            .iter()
            .position(|(l, _)| l == truth)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown hypothesis `{truth}`")))?;
        Ok(ObservationModel { outcomes: outcomes.clone(), hypotheses, truth })
    }

    /// Hypotheses taken from a weighted set (labels and measures, in order).
    pub fn from_set(set: &WeightedMeasureSet, truth: &str) -> Result<Self> {
        let hyps = set.entries().iter().map(|e| (e.label.clone(), e.measure.clone())).collect();
        ObservationModel::new(set.space(), hyps, truth)
    }

    pub fn labels(&self) -> Vec<&str> {
        self.hypotheses.iter().map(|(l, _)| l.as_str()).collect()
    }

    fn log_likelihoods(&self) -> Vec<Vec<f64>> {
        self.hypotheses.iter().map(|(_, m)| m.probs().iter().map(|p| to_f64(p).ln()).collect()).collect()
    }

    fn draw(&self, rng: &mut ChaCha8Rng, cumulative: &[f64]) -> usize {
        let x: f64 = rng.gen();
        cumulative.iter().position(|&c| x < c).unwrap_or(cumulative.len() - 1)
    }

    fn truth_cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.hypotheses[self.truth]
            .1
            .probs()
            .iter()
            .map(|p| {
                acc += to_f64(p);
                acc
            })
            .collect()
    }
}

/// Menu of acts judged each round, with each hypothesis's prediction over
/// the menu's states.
#[derive(Clone, Debug)]
pub struct Probe {
    pub menu: Menu,
    pub utility: UtilitySpec,
    pub measures: Vec<Measure>,
}

/// Regret and utility tables of the probe in `f64`.
struct ProbeTables {
    names: Vec<String>,
    utilities: Vec<Vec<f64>>,
    regrets: Vec<Vec<f64>>,
    predictions: Vec<Vec<f64>>,
}

impl ProbeTables {
    fn new(probe: &Probe, hypotheses: usize) -> Result<Self> {
        if probe.measures.len() != hypotheses {
            return Err(Error::DimensionMismatch);
        }
        if probe.measures.iter().any(|m| m.space() != probe.menu.space()) {
            return Err(Error::DimensionMismatch);
        }
        let rows = probe.menu.utility_table(&probe.utility)?;
        let maxima = crate::decision::state_maxima(&rows);
        let conv = |r: &[Q]| r.iter().map(to_f64).collect::<Vec<f64>>();
        Ok(ProbeTables {
            names: probe.menu.acts().iter().map(|a| a.name().to_string()).collect(),
            regrets: rows.iter().map(|r| conv(&crate::decision::regret_row(&maxima, r))).collect(),
            utilities: rows.iter().map(|r| conv(r)).collect(),
            predictions: probe.measures.iter().map(|m| conv(m.probs())).collect(),
        })
    }

    fn expect(p: &[f64], v: &[f64]) -> f64 {
        p.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// MWER scores with per-hypothesis weights; a weight of zero drops the hypothesis.
    fn mwer(&self, weights: &[f64]) -> Vec<f64> {
        self.regrets
            .iter()
            .map(|r| {
                self.predictions
                    .iter()
                    .zip(weights)
                    .filter(|(_, w)| **w > 0.0)
                    .map(|(p, w)| w * Self::expect(p, r))
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect()
    }

    fn seu(&self, truth: usize) -> Vec<f64> {
        self.utilities.iter().map(|r| -Self::expect(&self.predictions[truth], r)).collect()
    }

    /// Acts grouped by score (lower first); near-equal scores share a group.
    fn ranking(&self, scores: &[f64]) -> Vec<Vec<String>> {
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then_with(|| self.names[a].cmp(&self.names[b])));
        let mut groups: Vec<Vec<String>> = Vec::new();
        let mut last: Option<f64> = None;
        for i in order {
            let s = scores[i];
            match last {
                Some(prev) if (s - prev).abs() <= 1e-9 * prev.abs().max(1.0) => {
                    groups.last_mut().expect("a group is open").push(self.names[i].clone())
                }
                _ => groups.push(vec![self.names[i].clone()]),
            }
            last = Some(s);
        }
        groups
    }
}

fn normalize_logs(logs: &[f64]) -> Vec<f64> {
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    logs.iter().map(|l| if l.is_finite() { (l - max).exp() } else { 0.0 }).collect()
}

fn prior_logs(model: &ObservationModel, prior: &WeightedMeasureSet) -> Result<Vec<f64>> {
    model
        .hypotheses
        .iter()
        .map(|(label, measure)| {
            // duplicate measures are merged in a normalized set, so fall back to the measure
            prior
                .weight_of(label)
                .or_else(|| prior.entries().iter().find(|e| &e.measure == measure).map(|e| &e.weight))
                .map(|w| to_f64(w).ln())
                .ok_or_else(|| Error::InvalidArgument(format!("prior has no hypothesis `{label}`")))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoundRecord {
    pub round: usize,
    /// `None` for round 0 (the prior).
    pub outcome: Option<String>,
    pub weights: Vec<f64>,
    pub mwer_ranking: Vec<Vec<String>>,
    pub seu_ranking: Vec<Vec<String>>,
}

impl RoundRecord {
    pub fn agrees(&self) -> bool {
        self.mwer_ranking == self.seu_ranking
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub seed: u64,
    pub rounds: usize,
    pub hypotheses: Vec<String>,
    pub records: Vec<RoundRecord>,
}

impl Trajectory {
    /// First round from which the MWER ranking equals the truth's SEU
    /// ranking at every later round; `None` if the last round disagrees.
    pub fn settle_round(&self) -> Option<usize> {
        let mut settled = None;
        for r in self.records.iter().rev() {
            if !r.agrees() {
                break;
            }
            settled = Some(r.round);
        }
        settled
    }

    pub fn final_record(&self) -> &RoundRecord {
        self.records.last().expect("round 0 is always recorded")
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("seed,round,outcome,{},mwer_matches_seu\n", self.hypotheses.iter().map(|h| format!("w_{h}")).collect::<Vec<_>>().join(","));
        for r in &self.records {
            let ws: Vec<String> = r.weights.iter().map(|w| format!("{w:.6e}")).collect();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                self.seed,
                r.round,
                r.outcome.as_deref().unwrap_or(""),
                ws.join(","),
                u8::from(r.agrees())
            ));
        }
        out
    }
}

/// Draws `rounds` outcomes from the true hypothesis; after each, weights
/// are multiplied by the outcome's likelihood and renormalized to max 1.
pub fn simulate(
    model: &ObservationModel,
    prior: &WeightedMeasureSet,
    probe: &Probe,
    rounds: usize,
    seed: u64,
) -> Result<Trajectory> {
    if rounds == 0 {
        return Err(Error::InvalidArgument("at least one round".into()));
    }
    let tables = ProbeTables::new(probe, model.hypotheses.len())?;
    let seu = tables.ranking(&tables.seu(model.truth));
    let ll = model.log_likelihoods();
    let cumulative = model.truth_cumulative();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut logs = prior_logs(model, prior)?;
    let mut records = Vec::with_capacity(rounds + 1);
    for round in 0..=rounds {
        let outcome = if round == 0 {
            None
        } else {
            let o = model.draw(&mut rng, &cumulative);
            for (l, h) in logs.iter_mut().zip(&ll) {
                *l += h[o];
            }
            Some(model.outcomes.label(o).to_string())
        };
        let weights = normalize_logs(&logs);
        records.push(RoundRecord {
            round,
            outcome,
            mwer_ranking: tables.ranking(&tables.mwer(&weights)),
            seu_ranking: seu.clone(),
            weights,
        });
    }
    Ok(Trajectory {
        seed,
        rounds,
        hypotheses: model.labels().into_iter().map(String::from).collect(),
        records,
    })
}

/// Weight of the ten-broken hypothesis after the first `n` of 1000
/// cupcakes are seen to be good: `C(1000−N,10)/C(1000,10) · 1000/(1000−N)`.
pub fn cupcake_weight(n: u64) -> Result<Q> {
    if n > 1000 {
        return Err(Error::InvalidArgument(format!("N = {n} exceeds 1000 cupcakes")));
    }
    if n >= 991 {
        return Ok(Q::zero());
    }
    let num = binomial(1000 - n, 10) * BigInt::from(1000);
    let den = binomial(1000, 10) * BigInt::from(1000 - n);
    Ok(Q::new(num, den))
}

/// Relative likelihoods `Pr(E) / max Pr'(E)` of an unweighted set.
pub fn relative_likelihoods(set: &WeightedMeasureSet, e: &Event) -> Result<Vec<Q>> {
    let probs: Vec<Q> = set.entries().iter().map(|m| m.measure.event_prob(e)).collect();
    let max = probs.iter().max().cloned().unwrap_or_default();
    if max.is_zero() {
        return Err(Error::UndefinedUpdate(e.to_string()));
    }
    Ok(probs.into_iter().map(|p| p / &max).collect())
}

/// Threshold updating: drop every measure whose relative likelihood is at
/// most `alpha`, condition the rest on `e`; all survivors get weight 1.
pub fn es_update(set: &WeightedMeasureSet, e: &Event, alpha: &Q) -> Result<WeightedMeasureSet> {
    if !(alpha > &Q::zero() && alpha < &Q::one()) {
        return Err(Error::InvalidArgument("threshold must lie in (0, 1)".into()));
    }
    let rel = relative_likelihoods(set, e)?;
    let survivors: Vec<(String, Measure)> = set
        .entries()
        .iter()
        .zip(&rel)
        .filter(|(_, r)| *r > alpha)
        .filter_map(|(m, _)| Some((m.label.clone(), m.measure.condition(e)?)))
        .collect();
    if survivors.is_empty() {
        return Err(Error::AllEliminated);
    }
    WeightedMeasureSet::unweighted(set.space(), survivors)
}

/// Per-round agreement flags of one seeded run of the three updaters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpdaterRun {
    pub seed: u64,
    /// Per round: `[lik=seu, mbm=seu, es=seu, lik=mbm, lik=es, all three equal]`.
    pub flags: Vec<[bool; 6]>,
}

/// Runs MWER with likelihood updating, MER with measure-by-measure updating
/// and MER after threshold elimination side by side on one seeded history.
pub fn run_updaters(
    model: &ObservationModel,
    prior: &WeightedMeasureSet,
    probe: &Probe,
    rounds: usize,
    seed: u64,
    alpha: f64,
) -> Result<UpdaterRun> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument("threshold must lie in (0, 1)".into()));
    }
    let tables = ProbeTables::new(probe, model.hypotheses.len())?;
    let seu = tables.ranking(&tables.seu(model.truth));
    let ll = model.log_likelihoods();
    let cumulative = model.truth_cumulative();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut logs = prior_logs(model, prior)?;
    // history log-likelihoods without the prior, for the threshold rule
    let mut hist = vec![0.0f64; model.hypotheses.len()];
    let mut flags = Vec::with_capacity(rounds + 1);
    for round in 0..=rounds {
        if round > 0 {
            let o = model.draw(&mut rng, &cumulative);
            for ((l, h), x) in logs.iter_mut().zip(&ll).zip(hist.iter_mut()) {
                *l += h[o];
                *x += h[o];
            }
        }
        let lik = tables.ranking(&tables.mwer(&normalize_logs(&logs)));
        let alive: Vec<f64> = hist.iter().map(|h| if h.is_finite() { 1.0 } else { 0.0 }).collect();
        let mbm = tables.ranking(&tables.mwer(&alive));
        let rel = normalize_logs(&hist);
        let kept: Vec<f64> = rel.iter().map(|&r| if r > alpha { 1.0 } else { 0.0 }).collect();
        let es = tables.ranking(&tables.mwer(&kept));
        flags.push([lik == seu, mbm == seu, es == seu, lik == mbm, lik == es, lik == mbm && mbm == es]);
    }
    Ok(UpdaterRun { seed, flags })
}

/// Agreement counts per round, summed over runs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpdaterSummary {
    pub runs: usize,
    pub counts: Vec<[usize; 6]>,
}

impl UpdaterSummary {
    pub const COLUMNS: [&'static str; 6] =
        ["lik_vs_seu", "mbm_vs_seu", "es_vs_seu", "lik_vs_mbm", "lik_vs_es", "all_agree"];

    /// Runs must share a round count; order does not matter.
    pub fn from_runs(runs: &[UpdaterRun]) -> Result<Self> {
        let n = runs.first().map_or(0, |r| r.flags.len());
        if runs.iter().any(|r| r.flags.len() != n) {
            return Err(Error::DimensionMismatch);
        }
        let mut counts = vec![[0usize; 6]; n];
        for r in runs {
            for (c, f) in counts.iter_mut().zip(&r.flags) {
                for k in 0..6 {
                    c[k] += usize::from(f[k]);
                }
            }
        }
        Ok(UpdaterSummary { runs: runs.len(), counts })
    }

    pub fn rate(&self, round: usize, column: usize) -> f64 {
        self.counts[round][column] as f64 / self.runs.max(1) as f64
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("round,runs,{}\n", Self::COLUMNS.join(","));
        for (round, c) in self.counts.iter().enumerate() {
            let rates: Vec<String> = (0..6).map(|k| format!("{:.4}", c[k] as f64 / self.runs.max(1) as f64)).collect();
            out.push_str(&format!("{round},{},{}\n", self.runs, rates.join(",")));
        }
        out
    }
}

/// Agreement rates of the three updating schemes over `seeds`.
pub fn compare_updaters(
    model: &ObservationModel,
    prior: &WeightedMeasureSet,
    probe: &Probe,
    rounds: usize,
    seeds: &[u64],
    alpha: f64,
) -> Result<UpdaterSummary> {
    let runs = seeds
        .iter()
        .map(|&s| run_updaters(model, prior, probe, rounds, s, alpha))
        .collect::<Result<Vec<_>>>()?;
    UpdaterSummary::from_runs(&runs)
}
