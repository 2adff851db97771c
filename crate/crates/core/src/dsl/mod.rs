//! Text format for decision problems and trees.
//!
//! ```text
//! states: one_broken ten_broken
//! prizes: y0 y10000
//! utility: y0 = 0, y10000 = 10000
//! lottery coin = { y0: 1/2, y10000: 1/2 }
//! act cont = { one_broken: y10000, ten_broken: coin }
//! menu base = [ cont, back ]
//! hypothesis pr1 weight 1 = { one_broken: 1, ten_broken: 0 }
//! event e = { one_broken }
//! ```
//!
//! Line-oriented with `#` comments; line breaks inside `{}` and `[]` are
//! ignored. Rationals are integers, `a/b`, or exact decimals. Parsing
//! never panics: every rejection carries positioned diagnostics.

mod lexer;
mod tree;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::decision::{Act, Lottery, Menu, UtilitySpec};
use crate::error::{Error, Result};
use crate::measures::{Event, Measure, StateSpace, WeightedMeasure, WeightedMeasureSet};
use crate::rational::{fmt_q, Q};

use lexer::{lex, Cursor, PResult, Tok, Token};

pub use tree::{parse_tree, tree_to_canonical_text};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub token: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {sev}: {}", self.line, self.column, self.message)?;
        if !self.token.is_empty() && self.token != "\n" {
            write!(f, " (at `{}`)", self.token.escape_debug())?;
        }
        Ok(())
    }
}

/// A parsed and cross-checked decision problem.
#[derive(Clone, Debug)]
pub struct ProblemDoc {
    pub space: StateSpace,
    pub prizes: Vec<String>,
    pub utility: Option<UtilitySpec>,
    pub lotteries: BTreeMap<String, Lottery>,
    pub acts: BTreeMap<String, Act>,
    /// Per act, the canonical text of each state's outcome (a name or an
    /// inline lottery), keyed by state label.
    act_sources: BTreeMap<String, BTreeMap<String, String>>,
    pub menus: BTreeMap<String, Vec<String>>,
    pub hypotheses: Option<WeightedMeasureSet>,
    pub events: BTreeMap<String, Event>,
}

impl ProblemDoc {
    pub fn utility(&self) -> Result<&UtilitySpec> {
        self.utility.as_ref().ok_or_else(|| Error::InvalidArgument("problem has no utility section".into()))
    }

    pub fn hypotheses(&self) -> Result<&WeightedMeasureSet> {
        self.hypotheses.as_ref().ok_or_else(|| Error::InvalidArgument("problem has no hypotheses".into()))
    }

    pub fn menu(&self, name: &str) -> Result<Menu> {
        let names = self.menus.get(name).ok_or_else(|| Error::InvalidArgument(format!("unknown menu `{name}`")))?;
        Menu::new(names.iter().map(|a| self.acts[a].clone()).collect())
    }

    pub fn event(&self, name: &str) -> Result<&Event> {
        self.events.get(name).ok_or_else(|| Error::InvalidArgument(format!("unknown event `{name}`")))
    }

    pub fn measure(&self, label: &str) -> Result<Measure> {
        self.hypotheses()?
            .entries()
            .iter()
            .find(|e| e.label == label)
            .map(|e| e.measure.clone())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown hypothesis `{label}`")))
    }

    /// Replaces the hypotheses (for writing out an updated belief).
    pub fn with_hypotheses(&self, set: WeightedMeasureSet) -> Result<ProblemDoc> {
        if set.space() != &self.space {
            return Err(Error::DimensionMismatch);
        }
        Ok(ProblemDoc { hypotheses: Some(set), ..self.clone() })
    }

    /// Canonical text: fixed section order, entries sorted by name, keys
    /// sorted, rationals as `n/d`. Menus keep their act order.
    pub fn to_canonical_text(&self) -> String {
        let mut out = String::new();
        let mut states: Vec<&str> = self.space.labels().iter().map(String::as_str).collect();
        states.sort_unstable();
        out.push_str(&format!("states: {}\n", states.join(" ")));
        if !self.prizes.is_empty() {
            let mut prizes: Vec<&str> = self.prizes.iter().map(String::as_str).collect();
            prizes.sort_unstable();
            out.push_str(&format!("prizes: {}\n", prizes.join(" ")));
        }
        if let Some(u) = &self.utility {
            let parts: Vec<String> = u.prizes().map(|(p, v)| format!("{p} = {}", fmt_q(v))).collect();
            out.push_str(&format!("utility: {}\n", parts.join(", ")));
        }
        for (name, l) in &self.lotteries {
            out.push_str(&format!("lottery {name} = {}\n", l.canonical_body()));
        }
        for (name, sources) in &self.act_sources {
            let parts: Vec<String> = sources.iter().map(|(s, o)| format!("{s}: {o}")).collect();
            out.push_str(&format!("act {name} = {{ {} }}\n", parts.join(", ")));
        }
        for (name, acts) in &self.menus {
            out.push_str(&format!("menu {name} = [ {} ]\n", acts.join(", ")));
        }
        if let Some(h) = &self.hypotheses {
            for line in h.hypothesis_lines() {
                out.push_str(&line);
                out.push('\n');
            }
        }
        for (name, e) in &self.events {
            let mut members = e.member_labels();
            members.sort_unstable();
            out.push_str(&format!("event {name} = {{ {} }}\n", members.join(", ")));
        }
        out
    }
}

struct Pair {
    key: Token,
    value: Q,
}

pub(crate) struct Body {
    open: Token,
    pairs: Vec<Pair>,
}

enum RawOutcome {
    Name(Token),
    Inline(Body),
}

/// `act` keyword, act name, and `state: outcome` entries.
type RawAct = (Token, Token, Vec<(Token, RawOutcome)>);

#[derive(Default)]
struct Raw {
    states: Option<(Token, Vec<Token>)>,
    prizes: Option<(Token, Vec<Token>)>,
    utility: Option<(Token, Vec<Pair>)>,
    lotteries: Vec<(Token, Body)>,
    acts: Vec<RawAct>,
    menus: Vec<(Token, Vec<Token>)>,
    hypotheses: Vec<(Token, Token, Q, Body)>,
    events: Vec<(Token, Vec<Token>)>,
}

pub(crate) fn parse_body(c: &mut Cursor) -> PResult<Body> {
    let open = c.expect_sym('{')?;
    let mut pairs = Vec::new();
    while !c.peek().is_sym('}') {
        let key = c.expect_ident("a name")?;
        c.expect_sym(':')?;
        let (_, value) = c.expect_number()?;
        pairs.push(Pair { key, value });
        if !c.eat_sym(',') {
            break;
        }
    }
    c.expect_sym('}')?;
    Ok(Body { open, pairs })
}

fn parse_name_list(c: &mut Cursor, open: char, close: char) -> PResult<Vec<Token>> {
    c.expect_sym(open)?;
    let mut names = Vec::new();
    while !c.peek().is_sym(close) {
        names.push(c.expect_ident("a name")?);
        if !c.eat_sym(',') {
            break;
        }
    }
    c.expect_sym(close)?;
    Ok(names)
}

fn parse_words_to_eol(c: &mut Cursor) -> Vec<Token> {
    let mut out = Vec::new();
    while c.peek().tok == Tok::Ident {
        out.push(c.next());
    }
    out
}

fn parse_statement(c: &mut Cursor, raw: &mut Raw) -> PResult<()> {
    let kw = c.expect_ident("a section keyword")?;
    match kw.text.as_str() {
        "states" | "prizes" => {
            c.expect_sym(':')?;
            let words = parse_words_to_eol(c);
            let slot = if kw.text == "states" { &mut raw.states } else { &mut raw.prizes };
            if slot.is_some() {
                return Err(Cursor::error_at(&kw, format!("duplicate `{}` section", kw.text)));
            }
            *slot = Some((kw, words));
        }
        "utility" => {
            c.expect_sym(':')?;
            let mut pairs = Vec::new();
            while c.peek().tok == Tok::Ident {
                let key = c.next();
                c.expect_sym('=')?;
                let (_, value) = c.expect_number()?;
                pairs.push(Pair { key, value });
                // a trailing comma continues the section on the next line
                if c.eat_sym(',') {
                    c.skip_newlines();
                }
            }
            if raw.utility.is_some() {
                return Err(Cursor::error_at(&kw, "duplicate `utility` section"));
            }
            raw.utility = Some((kw, pairs));
        }
        "lottery" => {
            let name = c.expect_ident("a lottery name")?;
            c.expect_sym('=')?;
            raw.lotteries.push((name, parse_body(c)?));
        }
        "act" => {
            let name = c.expect_ident("an act name")?;
            c.expect_sym('=')?;
            let open = c.expect_sym('{')?;
            let mut outcomes = Vec::new();
            while !c.peek().is_sym('}') {
                let state = c.expect_ident("a state")?;
                c.expect_sym(':')?;
                let outcome = if c.peek().is_sym('{') {
                    RawOutcome::Inline(parse_body(c)?)
                } else {
                    RawOutcome::Name(c.expect_ident("a lottery or prize")?)
                };
                outcomes.push((state, outcome));
                if !c.eat_sym(',') {
                    break;
                }
            }
            c.expect_sym('}')?;
            raw.acts.push((name, open, outcomes));
        }
        "menu" => {
            let name = c.expect_ident("a menu name")?;
            c.expect_sym('=')?;
            raw.menus.push((name, parse_name_list(c, '[', ']')?));
        }
        "hypothesis" => {
            let name = c.expect_ident("a hypothesis name")?;
            let w = c.expect_word("weight")?;
            let (_, weight) = c.expect_number()?;
            c.expect_sym('=')?;
            raw.hypotheses.push((name, w, weight, parse_body(c)?));
        }
        "event" => {
            let name = c.expect_ident("an event name")?;
            c.expect_sym('=')?;
            raw.events.push((name, parse_name_list(c, '{', '}')?));
        }
        other => return Err(Cursor::error_at(&kw, format!("unknown section `{other}`"))),
    }
    c.end_statement()
}

pub(crate) struct Checker {
    pub(crate) diags: Vec<ParseDiagnostic>,
}

impl Checker {
    fn err(&mut self, t: &Token, message: impl Into<String>) {
        self.diags.push(Cursor::error_at(t, message));
    }

    /// Names must be unique within a section.
    fn unique<'a>(&mut self, kind: &str, names: impl Iterator<Item = &'a Token>) -> BTreeSet<String> {
        let mut seen = BTreeSet::new();
        for t in names {
            if !seen.insert(t.text.clone()) {
                self.err(t, format!("duplicate {kind} `{}`", t.text));
            }
        }
        seen
    }

    fn sum_is_one(&mut self, at: &Token, what: &str, pairs: &[Pair]) -> bool {
        let mut ok = true;
        for p in pairs {
            if p.value < Q::zero() {
                self.err(&p.key, format!("negative probability {} in {what}", fmt_q(&p.value)));
                ok = false;
            }
        }
        let sum: Q = pairs.iter().map(|p| &p.value).sum();
        if !sum.is_one() {
            self.err(at, format!("probabilities in {what} sum to {}, not 1", fmt_q(&sum)));
            ok = false;
        }
        ok
    }

    pub(crate) fn lottery(&mut self, body: &Body, what: &str, prizes: &BTreeSet<String>) -> Option<Lottery> {
        let mut ok = self.sum_is_one(&body.open, what, &body.pairs);
        self.unique("prize", body.pairs.iter().map(|p| &p.key));
        for p in &body.pairs {
            if !prizes.contains(&p.key.text) {
                self.err(&p.key, format!("unknown prize `{}`", p.key.text));
                ok = false;
            }
        }
        if !ok {
            return None;
        }
        Lottery::new(body.pairs.iter().map(|p| (p.key.text.clone(), p.value.clone()))).ok()
    }
}

/// Parses and validates a problem file.
pub fn parse_problem(text: &str) -> std::result::Result<ProblemDoc, Vec<ParseDiagnostic>> {
    let (tokens, mut diags) = lex(text);
    let mut c = Cursor::new(tokens);
    let mut raw = Raw::default();
    c.skip_newlines();
    while !c.at_eof() {
        if let Err(d) = parse_statement(&mut c, &mut raw) {
            diags.push(d);
            c.recover();
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    resolve(raw, &c)
}

fn resolve(raw: Raw, c: &Cursor) -> std::result::Result<ProblemDoc, Vec<ParseDiagnostic>> {
    let mut ck = Checker { diags: Vec::new() };
    let Some((states_kw, state_toks)) = &raw.states else {
        return Err(vec![Cursor::error_at(c.peek(), "no states section")]);
    };
    ck.unique("state", state_toks.iter());
    if state_toks.is_empty() {
        ck.err(states_kw, "states section lists no states");
    }
    if !ck.diags.is_empty() {
        return Err(ck.diags);
    }
    let space = StateSpace::new(state_toks.iter().map(|t| t.text.clone())).map_err(|e| vec![Cursor::error_at(states_kw, e.to_string())])?;
    let state_set: BTreeSet<String> = space.labels().iter().cloned().collect();

    // prizes: declared, or taken from the utility section
    let prizes: Vec<String> = match (&raw.prizes, &raw.utility) {
        (Some((_, toks)), _) => {
            ck.unique("prize", toks.iter());
            toks.iter().map(|t| t.text.clone()).collect::<BTreeSet<_>>().into_iter().collect()
        }
        (None, Some((_, pairs))) => pairs.iter().map(|p| p.key.text.clone()).collect::<BTreeSet<_>>().into_iter().collect(),
        (None, None) => Vec::new(),
    };
    let prize_set: BTreeSet<String> = prizes.iter().cloned().collect();

    let utility = match &raw.utility {
        None => None,
        Some((kw, pairs)) => {
            ck.unique("utility entry", pairs.iter().map(|p| &p.key));
            for p in pairs {
                if !prize_set.contains(&p.key.text) {
                    ck.err(&p.key, format!("unknown prize `{}`", p.key.text));
                }
            }
            let covered: BTreeSet<&String> = pairs.iter().map(|p| &p.key.text).collect();
            for p in &prizes {
                if !covered.contains(p) {
                    ck.err(kw, format!("prize `{p}` has no utility"));
                }
            }
            match UtilitySpec::new(pairs.iter().map(|p| (p.key.text.clone(), p.value.clone()))) {
                Ok(u) => Some(u),
                Err(e) => {
                    ck.err(kw, e.to_string());
                    None
                }
            }
        }
    };

    ck.unique("lottery", raw.lotteries.iter().map(|(n, _)| n));
    let mut lotteries = BTreeMap::new();
    for (name, body) in &raw.lotteries {
        if prize_set.contains(&name.text) {
            ck.err(name, format!("lottery `{}` has the same name as a prize", name.text));
        }
        if let Some(l) = ck.lottery(body, &format!("lottery `{}`", name.text), &prize_set) {
            lotteries.entry(name.text.clone()).or_insert(l);
        }
    }

    ck.unique("act", raw.acts.iter().map(|(n, _, _)| n));
    let mut acts = BTreeMap::new();
    let mut act_sources = BTreeMap::new();
    for (name, open, outcomes) in &raw.acts {
        ck.unique("state", outcomes.iter().map(|(s, _)| s));
        let mut by_state: BTreeMap<String, (Lottery, String)> = BTreeMap::new();
        for (state, outcome) in outcomes {
            if !state_set.contains(&state.text) {
                ck.err(state, format!("unknown state `{}`", state.text));
                continue;
            }
            let resolved = match outcome {
                RawOutcome::Name(t) => {
                    if let Some(l) = lotteries.get(&t.text) {
                        Some((l.clone(), t.text.clone()))
                    } else if prize_set.contains(&t.text) {
                        Some((Lottery::degenerate(t.text.clone()), t.text.clone()))
                    } else {
                        ck.err(t, format!("unknown lottery or prize `{}`", t.text));
                        None
                    }
                }
                RawOutcome::Inline(body) => ck
                    .lottery(body, &format!("act `{}` at `{}`", name.text, state.text), &prize_set)
                    .map(|l| {
                        let text = l.canonical_body();
                        (l, text)
                    }),
            };
            if let Some(r) = resolved {
                by_state.entry(state.text.clone()).or_insert(r);
            }
        }
        let missing: Vec<&str> = space.labels().iter().filter(|s| !by_state.contains_key(*s)).map(String::as_str).collect();
        if !missing.is_empty() {
            ck.err(open, format!("act `{}` has no outcome for {}", name.text, missing.join(", ")));
            continue;
        }
        let lotteries_in_order = space.labels().iter().map(|s| by_state[s].0.clone()).collect();
        if let Ok(act) = Act::new(name.text.clone(), &space, lotteries_in_order) {
            acts.entry(name.text.clone()).or_insert(act);
            act_sources
                .entry(name.text.clone())
                .or_insert_with(|| by_state.into_iter().map(|(s, (_, text))| (s, text)).collect());
        }
    }

    ck.unique("menu", raw.menus.iter().map(|(n, _)| n));
    let mut menus = BTreeMap::new();
    for (name, list) in &raw.menus {
        if list.is_empty() {
            ck.err(name, format!("menu `{}` is empty", name.text));
        }
        ck.unique("menu entry", list.iter());
        let mut ok = true;
        for t in list {
            if !acts.contains_key(&t.text) {
                // acts that failed validation already carry a diagnostic
                if !raw.acts.iter().any(|(n, _, _)| n.text == t.text) {
                    ck.err(t, format!("unknown act `{}`", t.text));
                }
                ok = false;
            }
        }
        if ok {
            menus.entry(name.text.clone()).or_insert_with(|| list.iter().map(|t| t.text.clone()).collect());
        }
    }

    ck.unique("hypothesis", raw.hypotheses.iter().map(|(n, _, _, _)| n));
    let mut entries = Vec::new();
    for (name, wtok, weight, body) in &raw.hypotheses {
        if *weight < Q::zero() || *weight > Q::one() {
            ck.err(wtok, format!("weight {} of `{}` is outside [0, 1]", fmt_q(weight), name.text));
        }
        ck.unique("state", body.pairs.iter().map(|p| &p.key));
        let mut ok = ck.sum_is_one(&body.open, &format!("hypothesis `{}`", name.text), &body.pairs);
        for p in &body.pairs {
            if !state_set.contains(&p.key.text) {
                ck.err(&p.key, format!("unknown state `{}`", p.key.text));
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        let pairs: Vec<(String, Q)> = body.pairs.iter().map(|p| (p.key.text.clone(), p.value.clone())).collect();
        if let Ok(m) = Measure::from_pairs(&space, &pairs) {
            entries.push(WeightedMeasure { label: name.text.clone(), measure: m, weight: weight.clone() });
        }
    }
    let hypotheses = if raw.hypotheses.is_empty() || !ck.diags.is_empty() {
        None
    } else {
        match WeightedMeasureSet::from_entries(&space, entries).and_then(|s| s.normalize()) {
            Ok(s) => Some(s),
            Err(e) => {
                ck.err(&raw.hypotheses[0].0, e.to_string());
                None
            }
        }
    };

    ck.unique("event", raw.events.iter().map(|(n, _)| n));
    let mut events = BTreeMap::new();
    for (name, members) in &raw.events {
        ck.unique("event member", members.iter());
        let mut flags = vec![false; space.len()];
        for t in members {
            match space.index_of(&t.text) {
                Ok(i) => flags[i] = true,
                Err(_) => ck.err(t, format!("unknown state `{}`", t.text)),
            }
        }
        if let Ok(e) = Event::from_flags(&space, flags) {
            events.entry(name.text.clone()).or_insert(e);
        }
    }

    if !ck.diags.is_empty() {
        ck.diags.sort_by_key(|d| (d.line, d.column));
        return Err(ck.diags);
    }
    Ok(ProblemDoc { space, prizes, utility, lotteries, acts, act_sources, menus, hypotheses, events })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
# two states
states: a b
prizes: lose win
utility: lose = 0, win = 1
lottery coin = { win: 1/2, lose: 0.5 }
act f = { a: win, b: coin }
act g = {
  a: { lose: 1 },
  b: win
}
menu m = [ f, g ]
hypothesis p weight 1 = { a: 1/4, b: 3/4 }
hypothesis r weight 1/2 = { a: 1 }
event e = { a }
";

    #[test]
    fn parses_small_problem() {
        let doc = parse_problem(SMALL).unwrap();
        assert_eq!(doc.space.labels(), &["a".to_string(), "b".to_string()]);
        assert_eq!(doc.menu("m").unwrap().len(), 2);
        assert_eq!(doc.hypotheses().unwrap().len(), 2);
        assert!(doc.event("e").unwrap().contains(0));
    }

    #[test]
    fn canonical_text_round_trips() {
        let doc = parse_problem(SMALL).unwrap();
        let text = doc.to_canonical_text();
        let again = parse_problem(&text).unwrap().to_canonical_text();
        assert_eq!(text, again);
        assert!(text.contains("lottery coin = { lose: 1/2, win: 1/2 }"));
        assert!(text.contains("act g = { a: { lose: 1/1 }, b: win }"));
    }

    #[test]
    fn sum_error_cites_exact_sum() {
        let text = "states: a\nprizes: win lose\nutility: win = 1, lose = 0\nlottery l = {win: 1/2, lose: 1/3}\n";
        let diags = parse_problem(text).unwrap_err();
        assert_eq!(diags.len(), 1);
        assert!(diags[0].message.contains("5/6"), "{}", diags[0]);
        assert_eq!((diags[0].line, diags[0].column), (4, 13));
    }

    #[test]
    fn empty_input_needs_states() {
        let diags = parse_problem("").unwrap_err();
        assert_eq!(diags[0].message, "no states section");
        assert_eq!((diags[0].line, diags[0].column), (1, 1));
    }

    #[test]
    fn unknown_names_and_duplicates() {
        let text = "states: a b\nprizes: x y\nutility: x = 0, y = 1\nact f = { a: x, b: z }\nact f = { a: x, b: y }\nmenu m = [ f, h ]\n";
        let diags = parse_problem(text).unwrap_err();
        let msgs: Vec<&str> = diags.iter().map(|d| d.message.as_str()).collect();
        assert!(msgs.contains(&"unknown lottery or prize `z`"));
        assert!(msgs.contains(&"duplicate act `f`"));
        assert!(msgs.contains(&"unknown act `h`"));
    }

    #[test]
    fn weight_range_is_checked() {
        let text = "states: a\nhypothesis p weight 3/2 = { a: 1 }\n";
        let diags = parse_problem(text).unwrap_err();
        assert!(diags[0].message.contains("outside [0, 1]"));
    }

    #[test]
    fn weights_are_normalized_on_load() {
        let text = "states: a b\nhypothesis p weight 1/2 = { a: 1 }\nhypothesis r weight 1/4 = { b: 1 }\n";
        let doc = parse_problem(text).unwrap();
        assert_eq!(doc.hypotheses().unwrap().weight_of("p"), Some(&Q::one()));
        assert_eq!(doc.hypotheses().unwrap().weight_of("r"), Some(&crate::rational::ratio(1, 2)));
    }

    #[test]
    fn garbage_gets_positioned_diagnostics() {
        for text in ["states a", "states: a\n@@", "act = {", "}}}", "states: a\nlottery l = { x: 1/0 }"] {
            let diags = parse_problem(text).unwrap_err();
            assert!(!diags.is_empty());
            assert!(diags.iter().all(|d| d.line >= 1 && d.column >= 1));
        }
    }
}
