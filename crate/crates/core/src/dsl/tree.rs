//! Decision-tree files, parsed against an already loaded problem.
//!
//! ```text
//! decision root {
//!   branch chinese = decision chinese {
//!     branch rice = leaf utility 0
//!     branch stirfry = nature { on msg: leaf utility -2  on basil: leaf utility 3 }
//!   }
//!   branch italian = nature { on msg: leaf utility 5  on basil: leaf utility -3 }
//! }
//! ```

use std::collections::BTreeSet;

use super::lexer::{lex, Cursor, PResult, Tok};
use super::{parse_body, Checker, ParseDiagnostic, ProblemDoc};
use crate::dynamics::{check_partition, DecisionTree, NatureBranch};
use crate::decision::Lottery;
use crate::measures::Event;
use crate::rational::fmt_q;

const MAX_DEPTH: usize = 200;

struct TreeParser<'a> {
    c: Cursor,
    doc: &'a ProblemDoc,
    names: BTreeSet<String>,
}

impl TreeParser<'_> {
    fn node(&mut self, live: &Event, depth: usize) -> PResult<DecisionTree> {
        let kw = self.c.expect_ident("`decision`, `nature` or `leaf`")?;
        if depth > MAX_DEPTH {
            return Err(Cursor::error_at(&kw, "tree is nested too deeply"));
        }
        match kw.text.as_str() {
            "decision" => {
                let name = self.c.expect_ident("a decision node name")?;
                if !self.names.insert(name.text.clone()) {
                    return Err(Cursor::error_at(&name, format!("decision node `{}` defined twice", name.text)));
                }
                self.c.expect_sym('{')?;
                let mut branches: Vec<(String, DecisionTree)> = Vec::new();
                while !self.c.peek().is_sym('}') {
                    self.c.expect_word("branch")?;
                    let b = self.c.expect_ident("a branch name")?;
                    if branches.iter().any(|(n, _)| *n == b.text) {
                        return Err(Cursor::error_at(&b, format!("branch `{}` repeated", b.text)));
                    }
                    self.c.expect_sym('=')?;
                    let child = self.node(live, depth + 1)?;
                    branches.push((b.text, child));
                }
                let close = self.c.expect_sym('}')?;
                if branches.is_empty() {
                    return Err(Cursor::error_at(&close, format!("decision node `{}` has no branches", name.text)));
                }
                Ok(DecisionTree::Decision { name: name.text, branches })
            }
            "nature" => {
                self.c.expect_sym('{')?;
                let mut branches = Vec::new();
                while !self.c.peek().is_sym('}') {
                    self.c.expect_word("on")?;
                    let ev = self.c.expect_ident("an event name")?;
                    let Some(event) = self.doc.events.get(&ev.text).cloned() else {
                        return Err(Cursor::error_at(&ev, format!("unknown event `{}`", ev.text)));
                    };
                    self.c.expect_sym(':')?;
                    let sub = live.intersect(&event).map_err(|e| Cursor::error_at(&ev, e.to_string()))?;
                    let child = self.node(&sub, depth + 1)?;
                    branches.push(NatureBranch { event_name: ev.text, event, child });
                }
                self.c.expect_sym('}')?;
                check_partition(live, branches.iter().map(|b| (b.event_name.as_str(), &b.event)))
                    .map_err(|m| Cursor::error_at(&kw, format!("nature node does not partition its states: {m}")))?;
                Ok(DecisionTree::Nature { branches })
            }
            "leaf" => {
                let t = self.c.peek().clone();
                if t.is_word("utility") {
                    self.c.next();
                    let (_, v) = self.c.expect_number()?;
                    return Ok(DecisionTree::Utility(v));
                }
                if t.is_sym('{') {
                    let body = parse_body(&mut self.c)?;
                    let mut ck = Checker { diags: Vec::new() };
                    let prizes = self.doc.prizes.iter().cloned().collect();
                    return match ck.lottery(&body, "leaf lottery", &prizes) {
                        Some(l) => Ok(DecisionTree::Lottery(l)),
                        None => Err(ck.diags.swap_remove(0)),
                    };
                }
                let name = self.c.expect_ident("`utility`, a lottery or a prize")?;
                if let Some(l) = self.doc.lotteries.get(&name.text) {
                    Ok(DecisionTree::Lottery(l.clone()))
                } else if self.doc.prizes.contains(&name.text) {
                    Ok(DecisionTree::Lottery(Lottery::degenerate(name.text)))
                } else {
                    Err(Cursor::error_at(&name, format!("unknown lottery or prize `{}`", name.text)))
                }
            }
            other => Err(Cursor::error_at(&kw, format!("unknown node kind `{other}`"))),
        }
    }
}

/// Parses a tree whose events and lotteries come from `doc`. Every nature
/// node must partition the states still possible when it is reached.
pub fn parse_tree(text: &str, doc: &ProblemDoc) -> std::result::Result<DecisionTree, Vec<ParseDiagnostic>> {
    let (tokens, diags) = lex(text);
    if !diags.is_empty() {
        return Err(diags);
    }
    let mut p = TreeParser { c: Cursor::new(tokens), doc, names: BTreeSet::new() };
    p.c.skip_newlines();
    let tree = p.node(&doc.space.full_event(), 0).map_err(|d| vec![d])?;
    p.c.skip_newlines();
    let t = p.c.peek();
    if t.tok != Tok::Eof {
        return Err(vec![Cursor::error_at(t, format!("unexpected {} after the tree", t.describe()))]);
    }
    Ok(tree)
}

/// Indented canonical form; rationals as `n/d`, branch order kept.
pub fn tree_to_canonical_text(tree: &DecisionTree) -> String {
    let mut out = String::new();
    write_node(tree, 0, &mut out);
    out.push('\n');
    out
}

fn write_node(tree: &DecisionTree, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent + 1);
    match tree {
        DecisionTree::Decision { name, branches } => {
            out.push_str(&format!("decision {name} {{\n"));
            for (b, child) in branches {
                out.push_str(&format!("{pad}branch {b} = "));
                write_node(child, indent + 1, out);
                out.push('\n');
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        DecisionTree::Nature { branches } => {
            out.push_str("nature {\n");
            for b in branches {
                out.push_str(&format!("{pad}on {}: ", b.event_name));
                write_node(&b.child, indent + 1, out);
                out.push('\n');
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        DecisionTree::Utility(v) => out.push_str(&format!("leaf utility {}", fmt_q(v))),
        DecisionTree::Lottery(l) => out.push_str(&format!("leaf {}", l.canonical_body())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_problem;

    const PROBLEM: &str = "states: msg basil\nevent msg = { msg }\nevent basil = { basil }\nevent all = { msg, basil }\n";
    const TREE: &str = "\
decision root {
  branch chinese = decision chinese {
    branch rice = leaf utility 0
    branch stirfry = nature { on msg: leaf utility -2  on basil: leaf utility 3 }
  }
  branch italian = nature {
    on msg: leaf utility 5
    on basil: leaf utility -3
  }
}
";

    #[test]
    fn parses_and_round_trips() {
        let doc = parse_problem(PROBLEM).unwrap();
        let tree = parse_tree(TREE, &doc).unwrap();
        assert_eq!(tree.decision_depth(), 2);
        assert_eq!(tree.nature_depth(), 1);
        let text = tree_to_canonical_text(&tree);
        let again = tree_to_canonical_text(&parse_tree(&text, &doc).unwrap());
        assert_eq!(text, again);
    }

    #[test]
    fn overlapping_events_are_rejected() {
        let doc = parse_problem(PROBLEM).unwrap();
        let diags = parse_tree("nature { on all: leaf utility 1 on basil: leaf utility 0 }", &doc).unwrap_err();
        assert_eq!(diags.len(), 1);
        assert!(diags[0].message.contains("`basil` is in both `all` and `basil`"), "{}", diags[0]);
        assert_eq!((diags[0].line, diags[0].column), (1, 1));
    }

    #[test]
    fn missing_states_are_named() {
        let doc = parse_problem(PROBLEM).unwrap();
        let diags = parse_tree("nature { on msg: leaf utility 1 }", &doc).unwrap_err();
        assert!(diags[0].message.contains("states not covered: basil"), "{}", diags[0]);
    }

    #[test]
    fn nested_nature_only_partitions_live_states() {
        let doc = parse_problem(PROBLEM).unwrap();
        let text = "nature { on msg: nature { on msg: leaf utility 1 } on basil: leaf utility 0 }";
        assert!(parse_tree(text, &doc).is_ok());
    }

    #[test]
    fn single_leaf() {
        let doc = parse_problem(PROBLEM).unwrap();
        assert_eq!(parse_tree("leaf utility 7", &doc).unwrap(), DecisionTree::Utility(crate::rational::q(7)));
    }
}
