//! `mwer`: evaluate, update, axiom-check, plan and simulate decision
//! problems written in the `.dp` text format.
//!
//! Exit codes: 0 success, 1 domain error, 2 parse error, 3 usage error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use mwer_core::axioms::{
    axiom_matrix, check_axiom, default_fixtures, AxiomId, BeliefFixture, GeneratorConfig, PreferenceOracle,
};
use mwer_core::dsl::{parse_problem, parse_tree, ParseDiagnostic, ProblemDoc};
use mwer_core::dynamics::{evaluate_tree, MenuPolicy, Planning};
use mwer_core::learning::{run_updaters, simulate, ObservationModel, Probe, UpdaterSummary};
use mwer_core::{decision, Belief, Rule};

#[derive(Parser)]
#[command(name = "mwer", version, about = "Decisions under ambiguity with weighted sets of probability measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TextFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Seu,
    Mmeu,
    Regret,
    Mer,
    Mwer,
}

impl From<RuleArg> for Rule {
    fn from(r: RuleArg) -> Rule {
        match r {
            RuleArg::Seu => Rule::Seu,
            RuleArg::Mmeu => Rule::Mmeu,
            RuleArg::Regret => Rule::Regret,
            RuleArg::Mer => Rule::Mer,
            RuleArg::Mwer => Rule::Mwer,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PlanningArg {
    ExAnte,
    Sophisticated,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Full,
    Viable,
}

#[derive(Subcommand)]
enum Command {
    /// Rank the acts of a menu under a decision rule.
    Eval {
        file: PathBuf,
        #[arg(long, value_enum)]
        rule: RuleArg,
        #[arg(long)]
        menu: String,
        /// Hypothesis used by SEU (defaults to the only one).
        #[arg(long)]
        measure: Option<String>,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
    /// Likelihood-update the hypotheses on an event.
    Update {
        file: PathBuf,
        #[arg(long)]
        event: String,
        #[arg(long, value_enum, default_value = "text")]
        format: TextFormat,
    },
    /// Check one axiom (number or name) or build the rule-by-axiom matrix.
    Axioms {
        file: PathBuf,
        #[arg(long)]
        axiom: String,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Rule for a single-axiom check.
        #[arg(long, value_enum, default_value = "mwer")]
        rule: RuleArg,
        #[arg(long, value_enum, default_value = "text")]
        format: TextFormat,
    },
    /// Choose a plan in a decision tree.
    Tree {
        file: PathBuf,
        tree: PathBuf,
        #[arg(long, value_enum)]
        planning: PlanningArg,
        #[arg(long, value_enum)]
        menu_policy: PolicyArg,
        /// `regret` or `mwer`; defaults to `mwer` when the problem has hypotheses.
        #[arg(long, value_enum)]
        rule: Option<RuleArg>,
        #[arg(long, value_enum, default_value = "text")]
        format: TextFormat,
    },
    /// Simulate repeated observations drawn from one hypothesis.
    Simulate {
        file: PathBuf,
        #[arg(long)]
        truth: String,
        #[arg(long)]
        rounds: usize,
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Compare updating schemes with this elimination threshold.
        #[arg(long)]
        es_threshold: Option<f64>,
        /// Probe menu (defaults to the only menu).
        #[arg(long)]
        menu: Option<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

enum Failure {
    Domain(String),
    Parse(Vec<String>),
    Usage(String),
}

impl From<mwer_core::Error> for Failure {
    fn from(e: mwer_core::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn positioned(path: &Path, diags: Vec<ParseDiagnostic>) -> Failure {
    Failure::Parse(diags.into_iter().map(|d| format!("{}:{d}", path.display())).collect())
}

fn load(path: &Path) -> Result<ProblemDoc, Failure> {
    parse_problem(&read(path)?).map_err(|d| positioned(path, d))
}

fn belief_for(doc: &ProblemDoc, rule: Rule, measure: Option<&str>) -> Result<Belief, Failure> {
    Ok(match rule {
        Rule::Regret => Belief::None,
        Rule::Seu => {
            let set = doc.hypotheses()?;
            match measure {
                Some(m) => Belief::Measure(doc.measure(m)?),
                None if set.len() == 1 => Belief::Measure(set.entries()[0].measure.clone()),
                None => return Err(Failure::Usage("SEU needs --measure when there are several hypotheses".into())),
            }
        }
        Rule::Mer | Rule::Mmeu => Belief::Set(doc.hypotheses()?.measures()),
        Rule::Mwer => Belief::Weighted(doc.hypotheses()?.clone()),
    })
}

fn json(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn eval(file: &Path, rule: Rule, menu: &str, measure: Option<&str>, format: Format) -> Outcome {
    let doc = load(file)?;
    let menu = doc.menu(menu)?;
    let belief = belief_for(&doc, rule, measure)?;
    let ranking = decision::rank(rule, &menu, doc.utility()?, &belief)?;
    Ok(match format {
        Format::Tsv => ranking.to_tsv(),
        Format::Json => json(&ranking.to_json()),
    })
}

fn update(file: &Path, event: &str, format: TextFormat) -> Outcome {
    let doc = load(file)?;
    let updated = doc.hypotheses()?.likelihood_update(doc.event(event)?)?;
    Ok(match format {
        TextFormat::Text => updated.to_canonical_text(),
        TextFormat::Json => json(&updated.to_json()),
    })
}

fn axioms(file: &Path, axiom: &str, samples: usize, seed: u64, rule: Rule, format: TextFormat) -> Outcome {
    if samples == 0 {
        return Err(Failure::Usage("--samples must be positive".into()));
    }
    let doc = load(file)?;
    let config = GeneratorConfig::with_samples(samples);
    if axiom == "matrix" {
        let mut fixtures = Vec::new();
        if let Some(set) = &doc.hypotheses {
            fixtures.push(BeliefFixture::new("file", set.clone()));
        }
        fixtures.extend(default_fixtures());
        let m = axiom_matrix(&Rule::ALL, &fixtures, &config, seed)?;
        return Ok(match format {
            TextFormat::Text => m.to_text(),
            TextFormat::Json => json(&m.to_json()),
        });
    }
    let id: AxiomId = axiom.parse().map_err(|e: mwer_core::Error| Failure::Usage(e.to_string()))?;
    let fixture = BeliefFixture::new("file", doc.hypotheses()?.clone());
    let oracle = PreferenceOracle::new(rule, fixture.belief_for(rule), &doc.space)?;
    let report = check_axiom(id, &oracle, &config, seed)?;
    Ok(match format {
        TextFormat::Json => json(&report.to_json()),
        TextFormat::Text => {
            let mut out = format!(
                "axiom\t{}\nrule\t{}\nverdict\t{}\nsamples\t{}\nattempts\t{}\nseed\t{}\n",
                report.axiom, report.rule, report.verdict, report.samples, report.attempts, report.seed
            );
            if let Some(cx) = &report.counterexample {
                let _ = writeln!(out, "pattern\t{}", cx.pattern);
                if let Some(name) = &cx.curated {
                    let _ = writeln!(out, "curated\t{name}");
                }
                for line in &cx.scores {
                    let _ = writeln!(out, "score\t{}\t{}", line.label, mwer_core::rational::fmt_q(&line.score));
                }
            }
            out
        }
    })
}

fn tree(
    file: &Path,
    tree_file: &Path,
    planning: Planning,
    policy: MenuPolicy,
    rule: Option<Rule>,
    format: TextFormat,
) -> Outcome {
    let doc = load(file)?;
    let tree = parse_tree(&read(tree_file)?, &doc).map_err(|d| positioned(tree_file, d))?;
    let rule = rule.unwrap_or(if doc.hypotheses.is_some() { Rule::Mwer } else { Rule::Regret });
    // a tree with only numeric leaves needs no utility section
    let u = match &doc.utility {
        Some(u) => u.clone(),
        None => mwer_core::UtilitySpec::new([("low", mwer_core::rational::q(0)), ("high", mwer_core::rational::q(1))])?,
    };
    let ev = evaluate_tree(&tree, &doc.space, &u, rule, doc.hypotheses.as_ref(), planning, policy)?;
    Ok(match format {
        TextFormat::Text => ev.to_text(),
        TextFormat::Json => json(&ev.to_json()),
    })
}

#[allow(clippy::too_many_arguments)]
fn simulate_cmd(
    file: &Path,
    truth: &str,
    rounds: usize,
    seeds: u64,
    seed: u64,
    threshold: Option<f64>,
    menu: Option<&str>,
    jobs: usize,
) -> Outcome {
    let doc = load(file)?;
    let prior = doc.hypotheses()?.clone();
    let model = ObservationModel::from_set(&prior, truth)?;
    let menu_name = match menu {
        Some(m) => m.to_string(),
        None if doc.menus.len() == 1 => doc.menus.keys().next().expect("one menu").clone(),
        None => return Err(Failure::Usage("--menu is required when the file has several menus".into())),
    };
    let probe = Probe {
        menu: doc.menu(&menu_name)?,
        utility: doc.utility()?.clone(),
        measures: model.hypotheses.iter().map(|(_, m)| m.clone()).collect(),
    };
    if rounds == 0 || seeds == 0 {
        return Err(Failure::Usage("--rounds and --seeds must be positive".into()));
    }
    let seed_list: Vec<u64> = (0..seeds).map(|i| seed.wrapping_add(i)).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    pool.install(|| match threshold {
        Some(alpha) => {
            let runs = seed_list
                .par_iter()
                .map(|&s| run_updaters(&model, &prior, &probe, rounds, s, alpha))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(UpdaterSummary::from_runs(&runs)?.to_csv())
        }
        None => {
            let trajectories = seed_list
                .par_iter()
                .map(|&s| simulate(&model, &prior, &probe, rounds, s))
                .collect::<Result<Vec<_>, _>>()?;
            let mut out = String::new();
            for (i, t) in trajectories.iter().enumerate() {
                let csv = t.to_csv();
                // one header for the whole stream
                let body = if i == 0 { csv.as_str() } else { csv.split_once('\n').map_or("", |(_, b)| b) };
                out.push_str(body);
            }
            Ok(out)
        }
    })
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Eval { file, rule, menu, measure, format } => eval(&file, rule.into(), &menu, measure.as_deref(), format),
        Command::Update { file, event, format } => update(&file, &event, format),
        Command::Axioms { file, axiom, samples, seed, rule, format } => {
            axioms(&file, &axiom, samples, seed, rule.into(), format)
        }
        Command::Tree { file, tree: tree_file, planning, menu_policy, rule, format } => {
            let planning = match planning {
                PlanningArg::ExAnte => Planning::ExAnte,
                PlanningArg::Sophisticated => Planning::Sophisticated,
            };
            let policy = match menu_policy {
                PolicyArg::Full => MenuPolicy::Full,
                PolicyArg::Viable => MenuPolicy::Viable,
            };
            tree(&file, &tree_file, planning, policy, rule.map(Rule::from), format)
        }
        Command::Simulate { file, truth, rounds, seeds, seed, es_threshold, menu, jobs } => {
            simulate_cmd(&file, &truth, rounds, seeds, seed, es_threshold, menu.as_deref(), jobs)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Parse(lines)) => {
            for l in lines {
                eprintln!("{l}");
            }
            ExitCode::from(2)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(3)
        }
    }
}
