//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//! Runs without the libtest harness so the lines are always printed.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mwer_core::axioms::{
    axiom_matrix, check_axiom, check_instance, default_fixtures, replay, AxiomGroup, AxiomId, AxiomInstance,
    GeneratorConfig, PreferenceOracle, Verdict,
};
use mwer_core::decision::{self, mer, profile_scores, rank, regret_profile};
use mwer_core::dsl::{parse_problem, parse_tree, tree_to_canonical_text, ProblemDoc};
use mwer_core::dynamics::{check_mdc, evaluate_tree, mdc_scaling_check, MenuPolicy, Planning, Updating};
use mwer_core::fixtures::{self, delivery_belief, delivery_measures, delivery_space, delivery_utility};
use mwer_core::learning::{cupcake_weight, simulate};
use mwer_core::rational::{binomial, q, ratio, to_f64};
use mwer_core::{Belief, Measure, Q, Rule, WeightedMeasureSet};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fixture_text(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn load(name: &str) -> ProblemDoc {
    parse_problem(&fixture_text(name)).unwrap_or_else(|d| panic!("{name}: {d:?}"))
}

fn qs(values: &[i64]) -> Vec<Q> {
    values.iter().map(|&v| q(v)).collect()
}

fn delivery_regret_table() -> Check {
    let doc = load("delivery.dp");
    let u = doc.utility().map_err(|e| e.to_string())?;
    let menu = doc.menu("base").map_err(|e| e.to_string())?;
    let expected = [("cont", [0, 10000]), ("back", [10000, 0]), ("check", [4999, 4999])];
    for (name, regrets) in expected {
        let got = regret_profile(menu.get(name).unwrap(), &menu, u).map_err(|e| e.to_string())?;
        ensure!(got == qs(&regrets), "regrets of {name}: {got:?}");
    }
    let measures = delivery_measures();
    for (name, score) in [("cont", 10000), ("back", 10000), ("check", 4999)] {
        let got = mer(menu.get(name).unwrap(), &menu, u, &measures).map_err(|e| e.to_string())?;
        ensure!(got == q(score), "MER of {name} = {got}");
    }
    let ranking = rank(Rule::Mer, &menu, u, &Belief::Set(measures)).map_err(|e| e.to_string())?;
    ensure!(ranking.best() == ["check"], "MER best is {:?}", ranking.best());
    // the hand-built fixture agrees with the file
    let built = rank(Rule::Mer, &fixtures::base_menu(), &delivery_utility(), &Belief::Set(delivery_measures()))
        .map_err(|e| e.to_string())?;
    ensure!(built.to_tsv() == ranking.to_tsv(), "file and built fixtures disagree");
    Ok(())
}

fn menu_dependence() -> Check {
    let doc = load("delivery.dp");
    let u = doc.utility().map_err(|e| e.to_string())?;
    let menu = doc.menu("extended").map_err(|e| e.to_string())?;
    let expected =
        [("cont", [10000, 10000]), ("back", [20000, 0]), ("check", [14999, 4999]), ("new", [0, 20000])];
    for (name, regrets) in expected {
        let got = regret_profile(menu.get(name).unwrap(), &menu, u).map_err(|e| e.to_string())?;
        ensure!(got == qs(&regrets), "regrets of {name}: {got:?}");
    }
    let ranking = rank(Rule::Mer, &menu, u, &Belief::Set(delivery_measures())).map_err(|e| e.to_string())?;
    ensure!(ranking.best() == ["cont"], "MER best is {:?}", ranking.best());
    ensure!(ranking.score_of("cont") == Some(&q(10000)), "cont score");
    ensure!(ranking.score_of("check") == Some(&q(14999)), "check score");
    Ok(())
}

fn weighted_counterexample() -> Check {
    let belief = delivery_belief(ratio(1, 2));
    let menu = fixtures::state_independent_menu();
    let u = delivery_utility();
    for (name, score) in [("cont", 10000), ("back", 10000), ("half_cont_back", 7500)] {
        let got = decision::mwer(menu.get(name).unwrap(), &menu, &u, &belief).map_err(|e| e.to_string())?;
        ensure!(got == q(score), "MWER of {name} = {got}");
    }
    let oracle = PreferenceOracle::new(Rule::Mwer, Belief::Weighted(belief), &delivery_space())
        .map_err(|e| e.to_string())?;
    let config = GeneratorConfig::with_samples(500);
    let report =
        check_axiom(AxiomId::StateIndependentBetweenness, &oracle, &config, 1).map_err(|e| e.to_string())?;
    ensure!(report.verdict == Verdict::Violated, "verdict {}", report.verdict);
    let cx = report.counterexample.as_ref().ok_or("no counterexample")?;
    ensure!(cx.curated.as_deref() == Some("delivery-state-independent-mix"), "witness {:?}", cx.curated);
    let score = |label_start: &str| {
        cx.scores.iter().find(|l| l.label.starts_with(label_start)).map(|l| l.score.clone())
    };
    ensure!(score("cont@") == Some(q(10000)), "cont in witness: {:?}", cx.scores);
    ensure!(score("back@") == Some(q(10000)), "back in witness: {:?}", cx.scores);
    ensure!(score("1/2*cont+1/2*back@") == Some(q(7500)), "mixture in witness: {:?}", cx.scores);
    ensure!(replay(&report, &oracle, &config).map_err(|e| e.to_string())?, "witness does not replay");
    Ok(())
}

fn likelihood_update() -> Check {
    let doc = load("cupcake.dp");
    let set = doc.hypotheses().map_err(|e| e.to_string())?;
    let e = doc.event("first100good").map_err(|e| e.to_string())?;
    let updated = set.likelihood_update(e).map_err(|e| e.to_string())?;
    let expected = Q::new(binomial(900, 10) * 10, binomial(1000, 10) * 9);
    ensure!(updated.weight_of("pr10") == Some(&expected), "pr10 weight {:?}", updated.weight_of("pr10"));
    ensure!(updated.weight_of("pr1") == Some(&q(1)), "pr1 weight {:?}", updated.weight_of("pr1"));
    ensure!(cupcake_weight(100).map_err(|e| e.to_string())? == expected, "closed form differs at N=100");
    let pr10 = doc.measure("pr10").map_err(|e| e.to_string())?;
    let p = to_f64(&pr10.event_prob(e));
    let close = (p - 0.35).abs() < 0.01;
    ensure!(close, "Pr10(E) = {p}");
    ensure!(cupcake_weight(991).map_err(|e| e.to_string())? == q(0), "weight at 991 is not 0");
    for n in 1..=990u64 {
        let w = cupcake_weight(n).map_err(|e| e.to_string())?;
        let base = ratio(999 - n as i64, 999);
        let bound = (0..9).fold(q(1), |acc, _| acc * &base);
        ensure!(w < bound, "bound fails at N={n}");
    }
    Ok(())
}

fn update_orders_commute() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 200 {
        let s = common::space(&mut rng, 5);
        let set = common::weighted_set(&mut rng, &s, 4);
        let (e1, e2) = (common::event(&mut rng, &s), common::event(&mut rng, &s));
        let both = e1.intersect(&e2).unwrap();
        if set.upper_likelihood(&both) == q(0) {
            continue;
        }
        let a = set.sequential_update(&e1, &e2).map_err(|e| e.to_string())?;
        let b = set.sequential_update(&e2, &e1).map_err(|e| e.to_string())?;
        let c = set.likelihood_update(&both).map_err(|e| e.to_string())?;
        let (ta, tb, tc) = (a.to_canonical_text(), b.to_canonical_text(), c.to_canonical_text());
        ensure!(ta == tb && tb == tc, "orders differ on instance {checked}:\n{ta}\n{tb}\n{tc}");
        checked += 1;
    }
    Ok(())
}

fn mdc_scaling() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let u = common::utility();
    let mut checked = 0;
    while checked < 200 {
        let s = common::space(&mut rng, 4);
        let set = common::weighted_set(&mut rng, &s, 4);
        let e = common::event(&mut rng, &s);
        if set.upper_likelihood(&e) == q(0) {
            continue;
        }
        let menu = common::menu(&mut rng, &s, 4);
        let f = &menu.acts()[rng.gen_range(0..menu.len())];
        let h = &menu.acts()[rng.gen_range(0..menu.len())];
        let (lhs, rhs) = mdc_scaling_check(f, &e, &menu, h, &u, &set).map_err(|e| e.to_string())?;
        ensure!(lhs == rhs, "scaling identity fails: {lhs} vs {rhs}");
        checked += 1;
    }
    let s = mwer_core::StateSpace::new(["a", "b", "c"]).unwrap();
    let set = WeightedMeasureSet::new(
        &s,
        vec![
            ("p", Measure::new(&s, vec![ratio(1, 2), ratio(1, 3), ratio(1, 6)]).unwrap(), q(1)),
            ("r", Measure::new(&s, vec![ratio(1, 10), ratio(1, 5), ratio(7, 10)]).unwrap(), ratio(2, 5)),
            ("t", Measure::new(&s, vec![ratio(1, 4), ratio(1, 2), ratio(1, 4)]).unwrap(), ratio(3, 4)),
        ],
    )
    .unwrap();
    let report = check_mdc(Updating::Likelihood, &set, &GeneratorConfig::with_samples(500), 6)
        .map_err(|e| e.to_string())?;
    ensure!(report.verdict == Verdict::NoViolationFound, "likelihood updating: {}", report.verdict);
    ensure!(report.samples >= 500, "only {} samples", report.samples);
    Ok(())
}

fn degenerations() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..100 {
        let s = common::space(&mut rng, 5);
        let set = common::unweighted_set(&mut rng, &s, 4);
        let t = common::table(&mut rng, s.len(), 5);
        let mwer = profile_scores(Rule::Mwer, &t, &Belief::Weighted(set.clone())).map_err(|e| e.to_string())?;
        let mer = profile_scores(Rule::Mer, &t, &Belief::Set(set.measures())).map_err(|e| e.to_string())?;
        ensure!(mwer == mer, "MWER and MER differ on instance {i}");
    }
    let u = common::utility();
    for i in 0..100 {
        let s = common::space(&mut rng, 5);
        let pr = common::measure(&mut rng, &s);
        let menu = common::menu(&mut rng, &s, 5);
        let single = WeightedMeasureSet::unweighted(&s, vec![("only", pr.clone())]).unwrap();
        let by_mwer = rank(Rule::Mwer, &menu, &u, &Belief::Weighted(single)).map_err(|e| e.to_string())?;
        let by_seu = rank(Rule::Seu, &menu, &u, &Belief::Measure(pr)).map_err(|e| e.to_string())?;
        ensure!(by_mwer.groups() == by_seu.groups(), "rankings differ on instance {i}");
    }
    for i in 0..100 {
        let s = common::space(&mut rng, 5);
        let t = common::table(&mut rng, s.len(), 5);
        let vertices = (0..s.len()).map(|k| Measure::point_mass(&s, k)).collect();
        let mer = profile_scores(Rule::Mer, &t, &Belief::Set(vertices)).map_err(|e| e.to_string())?;
        let reg = profile_scores(Rule::Regret, &t, &Belief::None).map_err(|e| e.to_string())?;
        ensure!(mer == reg, "simplex MER differs from max regret on instance {i}");
    }
    Ok(())
}

fn axiom_matrix_pattern() -> Check {
    let config = GeneratorConfig::with_samples(500);
    let m = axiom_matrix(&Rule::ALL, &default_fixtures(), &config, 7).map_err(|e| e.to_string())?;
    let cell = |r: Rule, g: AxiomGroup| m.cell(r, g).expect("every cell is run");
    for r in [Rule::Mer, Rule::Mwer] {
        for g in [AxiomGroup::Core, AxiomGroup::Independence] {
            let c = cell(r, g);
            ensure!(c.verdict == Verdict::NoViolationFound, "{r} {} is {}", g.label(), c.verdict);
            for rep in &c.reports {
                ensure!(rep.samples >= 500, "{r} {} has {} samples", rep.axiom, rep.samples);
            }
        }
    }
    for g in AxiomGroup::ALL {
        let c = cell(Rule::Seu, g);
        ensure!(c.verdict == Verdict::NoViolationFound, "SEU {} is {}", g.label(), c.verdict);
    }
    let betweenness = cell(Rule::Mwer, AxiomGroup::Betweenness);
    let v = betweenness.violation().ok_or("MWER passes Ax.12")?;
    let cx = v.counterexample.as_ref().ok_or("no witness")?;
    ensure!(cx.curated.as_deref() == Some("delivery-state-independent-mix"), "Ax.12 witness {:?}", cx.curated);

    let ind = cell(Rule::Mmeu, AxiomGroup::Independence);
    let v = ind.violation().ok_or("MMEU passes Independence")?;
    let cx = v.counterexample.as_ref().ok_or("no witness")?;
    ensure!(cx.curated.is_none(), "MMEU witness should be discovered, got {:?}", cx.curated);
    let fixture = default_fixtures().into_iter().find(|f| {
        let oracle = PreferenceOracle::new(Rule::Mmeu, f.belief_for(Rule::Mmeu), f.set.space());
        oracle.is_ok_and(|o| replay(v, &o, &config).unwrap_or(false))
    });
    ensure!(fixture.is_some(), "discovered MMEU witness does not replay");

    // pinned: cont versus back mixed half-and-half with the mirror bet
    let s = delivery_space();
    let mirror = fixtures::payoff_act("mirror", &s, &[-10000, 10000]);
    let pinned = AxiomInstance {
        utility: delivery_utility(),
        menu: mwer_core::Menu::new(vec![fixtures::cont(), fixtures::back()]).unwrap(),
        other_menu: None,
        acts: vec![fixtures::cont(), fixtures::back(), mirror],
        mixtures: vec![ratio(1, 2)],
        event: None,
    };
    let oracle = PreferenceOracle::new(Rule::Mmeu, Belief::Set(delivery_measures()), &s).unwrap();
    ensure!(
        check_instance(AxiomId::Independence, &oracle, &pinned).map_err(|e| e.to_string())?.is_some(),
        "pinned MMEU independence witness holds"
    );
    Ok(())
}

fn restaurant_dynamics() -> Check {
    let doc = load("restaurant.dp");
    let tree = parse_tree(&fixture_text("restaurant.tree"), &doc).map_err(|d| format!("{d:?}"))?;
    let u = doc.utility().map_err(|e| e.to_string())?;
    let eval = |planning, policy| {
        evaluate_tree(&tree, &doc.space, u, Rule::Regret, None, planning, policy).map_err(|e| e.to_string())
    };
    let ex_ante = eval(Planning::ExAnte, MenuPolicy::Full)?;
    ensure!(ex_ante.plan.name() == "chinese+rice", "ex-ante plan {}", ex_ante.plan.name());
    ensure!(ex_ante.score == q(5), "ex-ante regret {}", ex_ante.score);
    for policy in [MenuPolicy::Full, MenuPolicy::Viable] {
        let soph = eval(Planning::Sophisticated, policy)?;
        ensure!(soph.plan.name() == "italian", "{policy}: plan {}", soph.plan.name());
        let node = soph.diagnostics.iter().find(|d| d.node == "chinese").ok_or("no chinese node")?;
        let score = |k: &str| node.scores.iter().find(|(n, _)| n == k).map(|(_, s)| s.clone());
        ensure!(score("stirfry") == Some(q(2)) && score("rice") == Some(q(3)), "{policy}: {:?}", node.scores);
        ensure!(node.eliminated_branches == ["rice"], "{policy}: eliminated {:?}", node.eliminated_branches);
    }
    Ok(())
}

fn convergence() -> Check {
    let (model, prior, probe) = fixtures::binary_learning_problem(ratio(9, 10), ratio(1, 2));
    let (mut concentrated, mut agreeing) = (0, 0);
    for seed in 0..100 {
        let t = simulate(&model, &prior, &probe, 500, seed).map_err(|e| e.to_string())?;
        let alt = t.hypotheses.iter().position(|h| h == "alt").ok_or("no alt hypothesis")?;
        let last = t.final_record();
        concentrated += usize::from(last.weights[alt] < 1e-3);
        agreeing += usize::from(last.agrees());
    }
    ensure!(concentrated >= 95, "alternative below 1e-3 in only {concentrated} runs");
    ensure!(agreeing >= 99, "MWER matches SEU in only {agreeing} runs");
    Ok(())
}

const FIXTURES: [&str; 5] = ["delivery.dp", "delivery-mixtures.dp", "cupcake.dp", "restaurant.dp", "binary.dp"];

const FRAGMENTS: &[&str] = &[
    ":", "=", "{", "}", "[", "]", ",", "/", "1/0", "-", "0.5", "1e9", "\n", "#", " ", "states", "prizes",
    "utility", "lottery", "act", "menu", "hypothesis", "weight", "event", "x", "é", "\t", "99999999999999999999999",
    "decision", "nature", "on", "leaf", "branch", "-1/3", "{}", "[]", "\u{0}",
];

fn mutate(rng: &mut ChaCha8Rng, text: &str) -> String {
    let mut chars: Vec<char> = text.chars().collect();
    for _ in 0..rng.gen_range(1..=4) {
        let at = rng.gen_range(0..=chars.len());
        match rng.gen_range(0..5) {
            0 if !chars.is_empty() => {
                let end = (at + rng.gen_range(1..8)).min(chars.len());
                chars.drain(at.min(end)..end);
            }
            1 => {
                let frag = FRAGMENTS[rng.gen_range(0..FRAGMENTS.len())];
                chars.splice(at..at, frag.chars());
            }
            2 => chars.truncate(at),
            3 => {
                let c = char::from_u32(rng.gen_range(0..0x250)).unwrap_or('?');
                chars.insert(at, c);
            }
            _ => {
                let lines: Vec<String> = chars.iter().collect::<String>().lines().map(String::from).collect();
                if lines.len() > 1 {
                    let (a, b) = (rng.gen_range(0..lines.len()), rng.gen_range(0..lines.len()));
                    let mut lines = lines;
                    lines.swap(a, b);
                    chars = lines.join("\n").chars().collect();
                }
            }
        }
    }
    chars.into_iter().collect()
}

fn positioned(diags: &[mwer_core::dsl::ParseDiagnostic], text: &str) -> Check {
    ensure!(!diags.is_empty(), "rejection without diagnostics");
    let lines = text.split('\n').count();
    for d in diags {
        ensure!(d.line >= 1 && d.column >= 1 && d.line <= lines, "bad position {}:{}", d.line, d.column);
    }
    Ok(())
}

fn parser_round_trip() -> Check {
    for name in FIXTURES {
        let doc = load(name);
        let once = doc.to_canonical_text();
        let again = parse_problem(&once).map_err(|d| format!("{name}: canonical text rejected: {d:?}"))?;
        ensure!(again.to_canonical_text() == once, "{name} does not round-trip");
    }
    let doc = load("restaurant.dp");
    let tree = parse_tree(&fixture_text("restaurant.tree"), &doc).map_err(|d| format!("{d:?}"))?;
    let once = tree_to_canonical_text(&tree);
    let again = parse_tree(&once, &doc).map_err(|d| format!("tree canonical text rejected: {d:?}"))?;
    ensure!(tree_to_canonical_text(&again) == once, "tree does not round-trip");

    let sources: Vec<String> = FIXTURES.iter().map(|n| fixture_text(n)).collect();
    let tree_source = fixture_text("restaurant.tree");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let prev_hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let mut failure = None;
    for case in 0..10_000 {
        let is_tree = case % 5 == 4;
        let base = if is_tree { &tree_source } else { &sources[rng.gen_range(0..sources.len())] };
        let text = mutate(&mut rng, base);
        let outcome = panic::catch_unwind(AssertUnwindSafe(|| -> Check {
            if is_tree {
                match parse_tree(&text, &doc) {
                    Ok(_) => Ok(()),
                    Err(d) => positioned(&d, &text),
                }
            } else {
                match parse_problem(&text) {
                    Ok(parsed) => {
                        let canon = parsed.to_canonical_text();
                        let back = parse_problem(&canon).map_err(|d| format!("canonical text rejected: {d:?}"))?;
                        ensure!(back.to_canonical_text() == canon, "mutant does not round-trip");
                        Ok(())
                    }
                    Err(d) => positioned(&d, &text),
                }
            }
        }));
        let result = outcome.unwrap_or_else(|_| Err("parser panicked".into()));
        if let Err(msg) = result {
            failure = Some(format!("fuzz case {case}: {msg}\n{text:?}"));
            break;
        }
    }
    panic::set_hook(prev_hook);
    failure.map_or(Ok(()), Err)
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("delivery regret table and MER choice", delivery_regret_table),
        ("menu dependence with the extra act", menu_dependence),
        ("weighted betweenness counterexample", weighted_counterexample),
        ("likelihood update of the cupcake hypotheses", likelihood_update),
        ("update orders commute", update_orders_commute),
        ("dynamic-consistency scaling identity", mdc_scaling),
        ("rule degenerations", degenerations),
        ("axiom matrix pattern", axiom_matrix_pattern),
        ("restaurant tree planning", restaurant_dynamics),
        ("learning convergence", convergence),
        ("parser round-trip and fuzzing", parser_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("acceptance {:>2} PASS {name} ({secs:.1}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("acceptance {:>2} FAIL {name} ({secs:.1}s): {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
