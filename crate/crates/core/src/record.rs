//! Invariant walk records.
//!
//! Vertices are named by order of first discovery starting at 1, so a record
//! never depends on how the graph happens to be indexed. The text form uses
//! `-` before a walked step, `;` before a restart and `#` before each named
//! neighbor, e.g. `1-2-3#1-4#1#2`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::walk::Walk;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Step(usize),
    Restart(usize),
    Neighbor(usize),
}

impl Token {
    pub fn id(self) -> usize {
        match self {
            Token::Step(i) | Token::Restart(i) | Token::Neighbor(i) => i,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Record {
    tokens: Vec<Token>,
}

impl Record {
    /// Validates the token sequence:
    /// * the first token is `Step(1)`;
    /// * a new id is always `1 + max id so far`;
    /// * restarts return to id 1;
    /// * neighbor tokens follow a step (or another neighbor of that step),
    ///   name an already-known vertex other than the step's own, and are
    ///   not repeated within the group.
    pub fn from_tokens(tokens: Vec<Token>) -> Result<Self> {
        let err = |pos: usize, msg: String| Error::RecordParse { pos, msg };
        if tokens.first() != Some(&Token::Step(1)) {
            return Err(err(0, "record must start with vertex 1".into()));
        }
        let mut max_id = 1;
        let mut cur = 1;
        let mut group: Option<Vec<usize>> = Some(Vec::new());
        for (i, &tok) in tokens.iter().enumerate().skip(1) {
            let id = tok.id();
            if id == 0 || id > max_id + 1 {
                return Err(err(
                    i,
                    format!("id {id} introduced before {}", max_id + 1),
                ));
            }
            match tok {
                Token::Step(_) => {
                    if id == cur {
                        return Err(err(i, format!("step from {cur} to itself")));
                    }
                    max_id = max_id.max(id);
                    cur = id;
                    group = Some(Vec::new());
                }
                Token::Restart(_) => {
                    if id != 1 {
                        return Err(err(i, format!("restart must return to 1, got {id}")));
                    }
                    cur = 1;
                    group = None;
                }
                Token::Neighbor(_) => {
                    let Some(seen) = group.as_mut() else {
                        return Err(err(i, "named neighbor after a restart".into()));
                    };
                    if id > max_id {
                        return Err(err(i, format!("named neighbor {id} is not yet named")));
                    }
                    if id == cur || seen.contains(&id) {
                        return Err(err(i, format!("invalid named neighbor {id} of {cur}")));
                    }
                    seen.push(id);
                }
            }
        }
        Ok(Record { tokens })
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    /// Number of distinct ids `K`; ids are exactly `1..=K`.
    pub fn vertex_count(&self) -> usize {
        self.tokens.iter().map(|t| t.id()).max().unwrap_or(0)
    }

    pub fn serialize(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Self> {
        text.parse()
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, tok) in self.tokens.iter().enumerate() {
            let sep = match (i, tok) {
                (0, _) => "",
                (_, Token::Step(_)) => "-",
                (_, Token::Restart(_)) => ";",
                (_, Token::Neighbor(_)) => "#",
            };
            write!(f, "{sep}{}", tok.id())?;
        }
        Ok(())
    }
}

impl FromStr for Record {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        let mut tokens = Vec::new();
        let mut pos = 0;
        let mut kind: fn(usize) -> Token = Token::Step;
        loop {
            let begin = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if begin == pos {
                return Err(Error::RecordParse {
                    pos,
                    msg: "expected a vertex id".into(),
                });
            }
            let id: usize = s[begin..pos].parse().map_err(|e| Error::RecordParse {
                pos: begin,
                msg: format!("{e}"),
            })?;
            tokens.push(kind(id));
            if pos == bytes.len() {
                break;
            }
            kind = match bytes[pos] {
                b'-' => Token::Step,
                b';' => Token::Restart,
                b'#' => Token::Neighbor,
                c => {
                    return Err(Error::RecordParse {
                        pos,
                        msg: format!("unexpected character {:?}", c as char),
                    })
                }
            };
            pos += 1;
        }
        Record::from_tokens(tokens).map_err(|e| match e {
            Error::RecordParse { pos: i, msg } => Error::RecordParse {
                pos: i,
                msg: format!("token {i}: {msg}"),
            },
            e => e,
        })
    }
}

/// Which recording function to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Anonymized,
    NamedNeighbors,
}

/// Order-of-discovery naming shared by all recorders.
#[derive(Default)]
struct Namespace {
    ids: HashMap<usize, usize>,
}

impl Namespace {
    /// Returns the id of `v`, naming it if needed, and whether it is new.
    fn name(&mut self, v: usize) -> (usize, bool) {
        let next = self.ids.len() + 1;
        let mut fresh = false;
        let id = *self.ids.entry(v).or_insert_with(|| {
            fresh = true;
            next
        });
        (id, fresh)
    }

    fn get(&self, v: usize) -> Option<usize> {
        self.ids.get(&v).copied()
    }
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Records a walk by anonymization alone.
pub fn record_anonymized(walk: &Walk) -> Record {
    let mut names = Namespace::default();
    let mut tokens = Vec::with_capacity(walk.vertices.len());
    tokens.push(Token::Step(names.name(walk.start()).0));
    for (&v, &r) in walk.vertices[1..].iter().zip(&walk.restarts) {
        let (id, _) = names.name(v);
        tokens.push(if r { Token::Restart(id) } else { Token::Step(id) });
    }
    Record { tokens }
}

/// Records a walk by anonymization plus named neighbors: after each walked
/// step to `v`, every already-named neighbor `u` of `v` whose edge has not
/// been recorded yet is emitted (ascending by id) and the edge is marked.
pub fn record_named_neighbors(walk: &Walk, g: &Graph) -> Record {
    let mut names = Namespace::default();
    let mut recorded: HashSet<(usize, usize)> = HashSet::new();
    let mut tokens = Vec::with_capacity(walk.vertices.len());
    tokens.push(Token::Step(names.name(walk.start()).0));
    let mut named_nbrs = Vec::new();
    for t in 1..walk.vertices.len() {
        let v = walk.vertices[t];
        let (id, _) = names.name(v);
        if walk.restarts[t - 1] {
            tokens.push(Token::Restart(id));
            continue;
        }
        tokens.push(Token::Step(id));
        recorded.insert(edge_key(walk.vertices[t - 1], v));
        named_nbrs.clear();
        named_nbrs.extend(
            g.neighbors(v)
                .iter()
                .filter_map(|&u| names.get(u).map(|i| (i, u))),
        );
        named_nbrs.sort_unstable();
        for &(uid, u) in &named_nbrs {
            if recorded.insert(edge_key(v, u)) {
                tokens.push(Token::Neighbor(uid));
            }
        }
    }
    Record { tokens }
}

pub fn record(walk: &Walk, g: &Graph, scheme: Scheme) -> Record {
    match scheme {
        Scheme::Anonymized => record_anonymized(walk),
        Scheme::NamedNeighbors => record_named_neighbors(walk, g),
    }
}

/// Per-vertex text and optional edge directions for attributed records.
#[derive(Debug, Clone, Default)]
pub struct AttributeProvider {
    /// Main text of each vertex (a title, say).
    pub vertex_text: HashMap<usize, String>,
    /// Optional trailing text (an abstract, say).
    pub vertex_detail: HashMap<usize, String>,
    pub labels: HashMap<usize, String>,
    /// Directed edges `(a, b)` meaning "a -> b". When `None`, edges are
    /// rendered with the undirected link word.
    pub edge_direction: Option<HashSet<(usize, usize)>>,
}

/// Wording of attributed records. The defaults reproduce the citation
/// network template: `Paper 1 - Title: ..., Abstract: ... Paper 1 cites
/// Paper 2 - ..., Category: ..., Abstract: ... Restart at Paper 1.`
#[derive(Debug, Clone)]
pub struct RecordTemplate {
    pub entity: String,
    pub forward: String,
    pub backward: String,
    pub undirected: String,
    pub title_prefix: String,
    pub label_prefix: String,
    pub detail_prefix: String,
    pub restart: String,
}

impl Default for RecordTemplate {
    fn default() -> Self {
        RecordTemplate {
            entity: "Paper".into(),
            forward: "cites".into(),
            backward: "is cited by".into(),
            undirected: "is linked to".into(),
            title_prefix: "Title: ".into(),
            label_prefix: "Category: ".into(),
            detail_prefix: "Abstract: ".into(),
            restart: "Restart at".into(),
        }
    }
}

impl RecordTemplate {
    fn link(&self, attrs: &AttributeProvider, a: usize, b: usize) -> &str {
        match &attrs.edge_direction {
            None => &self.undirected,
            Some(dirs) if dirs.contains(&(a, b)) => &self.forward,
            Some(_) => &self.backward,
        }
    }
}

/// Attributed text record. The start vertex contributes its text (and
/// detail) but never its label, since the start is the query vertex. Every
/// other vertex contributes text, label and detail on first visit.
pub fn record_attributed(
    walk: &Walk,
    g: &Graph,
    attrs: &AttributeProvider,
    tpl: &RecordTemplate,
) -> Result<String> {
    let text = |v: usize| {
        attrs
            .vertex_text
            .get(&v)
            .map(String::as_str)
            .ok_or(Error::MissingAttribute(v))
    };
    let e = &tpl.entity;
    let mut names = Namespace::default();
    let mut recorded: HashSet<(usize, usize)> = HashSet::new();
    let v0 = walk.start();
    names.name(v0);
    let mut z = format!("{e} 1 - {}{}", tpl.title_prefix, text(v0)?);
    if let Some(d) = attrs.vertex_detail.get(&v0) {
        z.push_str(&format!(", {}{d}", tpl.detail_prefix));
    }
    for t in 1..walk.vertices.len() {
        let (prev, v) = (walk.vertices[t - 1], walk.vertices[t]);
        let (id, fresh) = names.name(v);
        if walk.restarts[t - 1] {
            z.push_str(&format!(" {} {e} 1.", tpl.restart));
            continue;
        }
        let pid = names.get(prev).expect("previous vertex is named");
        z.push_str(&format!(" {e} {pid} {} {e} {id}", tpl.link(attrs, prev, v)));
        recorded.insert(edge_key(prev, v));
        if fresh {
            z.push_str(&format!(" - {}", text(v)?));
            if let Some(y) = attrs.labels.get(&v) {
                z.push_str(&format!(", {}{y}", tpl.label_prefix));
            }
            if let Some(d) = attrs.vertex_detail.get(&v) {
                z.push_str(&format!(", {}{d}", tpl.detail_prefix));
            }
        } else {
            z.push('.');
        }
        let mut nbrs: Vec<(usize, usize)> = g
            .neighbors(v)
            .iter()
            .filter_map(|&u| names.get(u).map(|i| (i, u)))
            .collect();
        nbrs.sort_unstable();
        for (uid, u) in nbrs {
            if recorded.insert(edge_key(v, u)) {
                z.push_str(&format!(" {e} {id} {} {e} {uid}.", tpl.link(attrs, v, u)));
            }
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::*;
    use crate::walk::Walk;

    #[test]
    fn anonymization_examples() {
        // a b c a with a=7, b=3, c=5
        let w = Walk::plain(vec![7, 3, 5, 7]);
        assert_eq!(record_anonymized(&w).to_string(), "1-2-3-1");
        assert_eq!(record_anonymized(&Walk::plain(vec![4])).to_string(), "1");
        let w = Walk::new(vec![0, 1, 0, 2], vec![false, true, false]).unwrap();
        assert_eq!(record_anonymized(&w).to_string(), "1-2;1-3");
    }

    #[test]
    fn named_neighbor_examples() {
        let k4 = gen_clique(4).unwrap();
        let w = Walk::plain(vec![2, 0, 3, 1]);
        assert_eq!(record_named_neighbors(&w, &k4).to_string(), "1-2-3#1-4#1#2");

        let tri = gen_cycle(3).unwrap();
        let w = Walk::plain(vec![0, 1, 2, 0]);
        assert_eq!(record_named_neighbors(&w, &tri).to_string(), "1-2-3#1-1");

        let k2 = gen_path(2).unwrap();
        assert_eq!(
            record_named_neighbors(&Walk::plain(vec![0, 1]), &k2).to_string(),
            "1-2"
        );
    }

    #[test]
    fn restarts_never_emit_neighbors() {
        // Triangle, 0 -> 1, restart, 0 -> 2: the step to 2 records 2's named
        // neighbor 1, the restart itself records nothing.
        let tri = gen_cycle(3).unwrap();
        let w = Walk::new(vec![0, 1, 0, 2], vec![false, true, false]).unwrap();
        assert_eq!(record_named_neighbors(&w, &tri).to_string(), "1-2;1-3#2");
    }

    #[test]
    fn parse_examples() {
        let r: Record = "1-2;1".parse().unwrap();
        assert_eq!(
            r.tokens(),
            &[Token::Step(1), Token::Step(2), Token::Restart(1)]
        );
        let k4: Record = "1-2-3#1-4#1#2".parse().unwrap();
        assert_eq!(k4.serialize(), "1-2-3#1-4#1#2");
        assert_eq!(k4.vertex_count(), 4);
        assert!(Record::parse("1-12").is_err());
    }

    #[test]
    fn parse_rejects_malformed() {
        for bad in [
            "", "2", "1-3", "1-2-", "1--2", "1-2;2", "1#1", "1-2#3", "1-2#2", "1-2#1#1", "1;1#1",
            "1-1", "1-2x", "a",
        ] {
            assert!(bad.parse::<Record>().is_err(), "{bad:?} should be rejected");
        }
        for good in ["1", "1-2-1", "1-2;1-3#2", "1-2-3#1-1", "1-2-1;1"] {
            assert_eq!(good.parse::<Record>().unwrap().to_string(), good);
        }
    }

    #[test]
    fn multi_digit_ids() {
        let w = Walk::plain((0..12).collect());
        let r = record_anonymized(&w);
        assert!(r.to_string().ends_with("-10-11-12"));
        assert_eq!(r.to_string().parse::<Record>().unwrap(), r);
    }

    fn attrs(texts: &[&str]) -> AttributeProvider {
        AttributeProvider {
            vertex_text: texts
                .iter()
                .enumerate()
                .map(|(i, t)| (i, t.to_string()))
                .collect(),
            ..Default::default()
        }
    }

    #[test]
    fn attributed_two_vertex_walk() {
        let k2 = gen_path(2).unwrap();
        let z = record_attributed(
            &Walk::plain(vec![0, 1]),
            &k2,
            &attrs(&["A", "B"]),
            &RecordTemplate::default(),
        )
        .unwrap();
        assert_eq!(z, "Paper 1 - Title: A Paper 1 is linked to Paper 2 - B");
    }

    #[test]
    fn attributed_restart_label_and_direction() {
        let tri = gen_cycle(3).unwrap();
        let mut a = attrs(&["A", "B", "C"]);
        a.labels.insert(2, "cs.AI".into());
        a.vertex_detail.insert(0, "abs0".into());
        a.edge_direction = Some([(0, 1), (2, 0), (1, 2)].into_iter().collect());
        let w = Walk::new(vec![0, 1, 0, 2], vec![false, true, false]).unwrap();
        let z = record_attributed(&w, &tri, &a, &RecordTemplate::default()).unwrap();
        assert_eq!(
            z,
            "Paper 1 - Title: A, Abstract: abs0 Paper 1 cites Paper 2 - B \
             Restart at Paper 1. Paper 1 is cited by Paper 3 - C, Category: cs.AI \
             Paper 3 is cited by Paper 2."
        );
        let w = Walk::plain(vec![0, 1, 0]);
        let z = record_attributed(&w, &tri, &a, &RecordTemplate::default()).unwrap();
        assert!(z.ends_with("Paper 2 is cited by Paper 1."));
    }

    #[test]
    fn attributed_missing_text() {
        let k2 = gen_path(2).unwrap();
        let e = record_attributed(
            &Walk::plain(vec![0, 1]),
            &k2,
            &attrs(&["A"]),
            &RecordTemplate::default(),
        );
        assert_eq!(e, Err(Error::MissingAttribute(1)));
    }
}
