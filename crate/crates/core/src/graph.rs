//! Degeneration graphs: the preorder generated by verified witnesses, its
//! maximal elements, coverage of the drawn figures, and DOT output with a
//! small grammar checker.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::catalog::{Corpus, Figure, FigureEdge};
use crate::invariants::derivation_dim;

/// Directed graph on algebra ids. Family members collapse onto the family
/// id.
#[derive(Clone, Debug, Default)]
pub struct Preorder {
    pub nodes: BTreeSet<String>,
    /// `(from, to) -> witness ids`
    pub edges: BTreeMap<(String, String), Vec<String>>,
}

impl Preorder {
    pub fn new<I: IntoIterator<Item = String>>(nodes: I) -> Self {
        Preorder { nodes: nodes.into_iter().collect(), edges: BTreeMap::new() }
    }

    /// Self-loops (a family degenerating into another member) are dropped.
    pub fn add(&mut self, from: &str, to: &str, witness: &str) {
        if from == to {
            return;
        }
        self.nodes.insert(from.to_string());
        self.nodes.insert(to.to_string());
        self.edges.entry((from.to_string(), to.to_string())).or_default().push(witness.to_string());
    }

    fn successors<'a>(&'a self, x: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.edges.keys().filter(move |(a, _)| a == x).map(|(_, b)| b.as_str())
    }

    /// A shortest path `from = p_0 -> ... -> p_m = to`, `m >= 1`.
    pub fn path(&self, from: &str, to: &str) -> Option<Vec<String>> {
        let mut prev: BTreeMap<&str, &str> = BTreeMap::new();
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for y in self.successors(x) {
                if prev.contains_key(y) {
                    continue;
                }
                prev.insert(y, x);
                if y == to {
                    let mut path = vec![to.to_string()];
                    let mut cur = to;
                    loop {
                        cur = prev[cur];
                        path.push(cur.to_string());
                        if cur == from {
                            break;
                        }
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(y);
            }
        }
        None
    }

    pub fn reaches(&self, from: &str, to: &str) -> bool {
        from == to || self.path(from, to).is_some()
    }

    /// Elements not strictly below anything.
    pub fn maximal(&self) -> Vec<String> {
        self.nodes
            .iter()
            .filter(|x| self.nodes.iter().all(|y| y == *x || !self.reaches(y, x) || self.reaches(x, y)))
            .cloned()
            .collect()
    }

    /// Nodes reachable from none of `tops`.
    pub fn undominated(&self, tops: &[String]) -> Vec<String> {
        self.nodes.iter().filter(|x| !tops.iter().any(|t| self.reaches(t, x))).cloned().collect()
    }
}

/// The verified preorder of one class from `(source id, target id, witness)`
/// triples.
pub fn class_preorder<'a>(corpus: &Corpus, class: &str, verified: impl IntoIterator<Item = (&'a str, &'a str, &'a str)>) -> Preorder {
    let mut g = Preorder::new(corpus.class(class).iter().map(|e| e.id.clone()));
    for (a, b, w) in verified {
        if g.nodes.contains(a) && g.nodes.contains(b) {
            g.add(a, b, w);
        }
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coverage {
    Direct(Vec<String>),
    Composite(Vec<String>),
    Missing,
}

/// Each drawn edge with the verified route realizing it.
pub fn figure_coverage(fig: &Figure, g: &Preorder) -> Vec<(FigureEdge, Coverage)> {
    fig.edges
        .iter()
        .map(|e| {
            let cov = match g.edges.get(&(e.from.clone(), e.to.clone())) {
                Some(ws) => Coverage::Direct(ws.clone()),
                None => g.path(&e.from, &e.to).map_or(Coverage::Missing, Coverage::Composite),
            };
            (e.clone(), cov)
        })
        .collect()
}

/// `n^2 - dim Der`, minimized over the default samples for families.
pub fn node_level(corpus: &Corpus, id: &str) -> Option<usize> {
    let e = corpus.get(id).ok()?;
    let der = if e.is_family() {
        e.default_samples().iter().filter_map(|s| e.algebra(Some(s)).ok()).map(|a| derivation_dim(&a)).min()?
    } else {
        derivation_dim(&e.algebra(None).ok()?)
    };
    Some(e.dim * e.dim - der)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT rendering of a figure: nodes ranked by level, drawn edges solid when
/// a verified route exists and dashed otherwise, rigid nodes doubled.
pub fn to_dot(corpus: &Corpus, fig: &Figure, g: &Preorder) -> String {
    let mut by_level: BTreeMap<usize, Vec<&(String, String)>> = BTreeMap::new();
    for node in &fig.nodes {
        by_level.entry(node_level(corpus, &node.0).unwrap_or(0)).or_default().push(node);
    }
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(&fig.name));
    out.push_str("  rankdir=TB;\n  node [shape=plaintext];\n");
    let levels: Vec<usize> = by_level.keys().rev().copied().collect();
    for l in &levels {
        let _ = writeln!(out, "  {} [label={}];", quote(&format!("level {l}")), quote(&l.to_string()));
    }
    for w in levels.windows(2) {
        let _ = writeln!(out, "  {} -> {} [style=invis];", quote(&format!("level {}", w[0])), quote(&format!("level {}", w[1])));
    }
    for (l, nodes) in by_level.iter().rev() {
        let _ = write!(out, "  {{ rank=same; {};", quote(&format!("level {l}")));
        for (id, label) in nodes {
            let rigid = fig.rigid.contains(id);
            let _ = write!(
                out,
                " {} [label={}, shape={}{}];",
                quote(id),
                quote(label),
                if rigid { "doublecircle" } else { "circle" },
                if rigid { ", style=bold" } else { "" }
            );
        }
        out.push_str(" }\n");
    }
    for (e, cov) in figure_coverage(fig, g) {
        let mut attrs = Vec::new();
        if let Some(n) = &e.note {
            attrs.push(format!("label={}", quote(n)));
        }
        if cov == Coverage::Missing {
            attrs.push("style=dashed".to_string());
        }
        let _ = write!(out, "  {} -> {}", quote(&e.from), quote(&e.to));
        if !attrs.is_empty() {
            let _ = write!(out, " [{}]", attrs.join(", "));
        }
        out.push_str(";\n");
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("DOT syntax error at byte {pos}: {msg}")]
pub struct DotError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Id(String),
    Sym(&'static str),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, DotError> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if s[i..].starts_with("//") {
            i = s[i..].find('\n').map_or(b.len(), |p| i + p);
        } else if s[i..].starts_with("->") {
            out.push((i, Tok::Sym("->")));
            i += 2;
        } else if let Some(sym) = ["{", "}", "[", "]", "=", ";", ","].iter().find(|x| x.as_bytes()[0] == c) {
            out.push((i, Tok::Sym(sym)));
            i += 1;
        } else if c == b'"' {
            let start = i;
            i += 1;
            let mut val = String::new();
            loop {
                match s[i..].chars().next() {
                    None => return Err(DotError { pos: start, msg: "unterminated string".into() }),
                    Some('"') => {
                        i += 1;
                        break;
                    }
                    Some('\\') => {
                        let n = s[i + 1..].chars().next().ok_or(DotError { pos: i, msg: "dangling escape".into() })?;
                        val.push(n);
                        i += 1 + n.len_utf8();
                    }
                    Some(ch) => {
                        val.push(ch);
                        i += ch.len_utf8();
                    }
                }
            }
            out.push((start, Tok::Id(val)));
        } else if c.is_ascii_alphanumeric() || c == b'_' || c == b'.' || c == b'-' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_' || b[i] == b'.' || (b[i] == b'-' && i == start)) {
                i += 1;
            }
            let word = &s[start..i];
            let numeric = word.trim_start_matches('-').chars().all(|ch| ch.is_ascii_digit() || ch == '.');
            let ident = !word.starts_with(|ch: char| ch.is_ascii_digit() || ch == '-' || ch == '.') && !word.contains(['.', '-']);
            if !(numeric || ident) || word == "-" {
                return Err(DotError { pos: start, msg: format!("bad identifier `{word}`") });
            }
            out.push((start, Tok::Id(word.to_string())));
        } else {
            return Err(DotError { pos: i, msg: format!("unexpected character `{}`", s[i..].chars().next().unwrap_or('?')) });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: &str) -> Result<T, DotError> {
        Err(DotError { pos: self.pos(), msg: msg.to_string() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<(), DotError> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.err(&format!("expected `{sym}`"))
        }
    }

    fn id(&mut self) -> Result<String, DotError> {
        match self.peek() {
            Some(Tok::Id(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn keyword(&self, k: &str) -> bool {
        matches!(self.peek(), Some(Tok::Id(s)) if s.eq_ignore_ascii_case(k))
    }

    fn attr_list(&mut self) -> Result<(), DotError> {
        while self.eat("[") {
            while !self.eat("]") {
                self.id()?;
                self.expect("=")?;
                self.id()?;
                if !self.eat(",") {
                    self.eat(";");
                }
            }
        }
        Ok(())
    }

    fn subgraph(&mut self) -> Result<(), DotError> {
        if self.keyword("subgraph") {
            self.at += 1;
            if matches!(self.peek(), Some(Tok::Id(_))) {
                self.id()?;
            }
        }
        self.expect("{")?;
        self.stmt_list()?;
        self.expect("}")
    }

    fn endpoint(&mut self) -> Result<(), DotError> {
        if self.keyword("subgraph") || matches!(self.peek(), Some(Tok::Sym("{"))) {
            self.subgraph()
        } else {
            self.id().map(|_| ())
        }
    }

    fn stmt(&mut self) -> Result<(), DotError> {
        if ["graph", "node", "edge"].iter().any(|k| self.keyword(k)) {
            self.at += 1;
            if !matches!(self.peek(), Some(Tok::Sym("["))) {
                return self.err("expected attribute list");
            }
            return self.attr_list();
        }
        let is_id = matches!(self.peek(), Some(Tok::Id(_))) && !self.keyword("subgraph");
        if is_id && matches!(self.toks.get(self.at + 1), Some((_, Tok::Sym("=")))) {
            self.id()?;
            self.expect("=")?;
            self.id()?;
            return Ok(());
        }
        self.endpoint()?;
        while self.eat("->") {
            self.endpoint()?;
        }
        self.attr_list()
    }

    fn stmt_list(&mut self) -> Result<(), DotError> {
        while !matches!(self.peek(), Some(Tok::Sym("}")) | None) {
            self.stmt()?;
            self.eat(";");
        }
        Ok(())
    }
}

/// Accepts the directed subset of the Graphviz grammar: `strict`, attribute,
/// node, edge and subgraph statements, quoted or bare ids. Ports and HTML
/// strings are rejected.
pub fn check_dot(text: &str) -> Result<(), DotError> {
    let mut p = Parser { toks: tokenize(text)?, at: 0, end: text.len() };
    if p.keyword("strict") {
        p.at += 1;
    }
    if !p.keyword("digraph") {
        return p.err("expected `digraph`");
    }
    p.at += 1;
    if matches!(p.peek(), Some(Tok::Id(_))) {
        p.id()?;
    }
    p.expect("{")?;
    p.stmt_list()?;
    p.expect("}")?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximal_elements_of_a_chain_with_cycle() {
        let mut g = Preorder::new(["a", "b", "c", "d"].map(String::from));
        g.add("a", "b", "w1");
        g.add("b", "a", "w2");
        g.add("b", "c", "w3");
        assert_eq!(g.maximal(), vec!["a", "b", "d"]);
        assert_eq!(g.path("a", "c").unwrap(), vec!["a", "b", "c"]);
        assert_eq!(g.undominated(&["a".to_string()]), vec!["d"]);
    }

    #[test]
    fn dot_checker_accepts_and_rejects() {
        assert!(check_dot("digraph g { a -> b [label=\"x\\\"y\"]; { rank=same; c; d } }").is_ok());
        assert!(check_dot("strict digraph { node [shape=circle] a -> b -> c }").is_ok());
        assert!(check_dot("digraph g { a -> }").is_err());
        assert!(check_dot("digraph g { a -> b [label=] }").is_err());
        assert!(check_dot("graph g { a }").is_err());
        assert!(check_dot("digraph g { \"open }").is_err());
        assert!(check_dot("digraph g { a } b").is_err());
    }
}
