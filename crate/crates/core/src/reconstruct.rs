//! Decoding records back into graphs, and small-graph isomorphism.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, Permutation};
use crate::record::{record, Record, Scheme, Token};
use crate::walk::{WalkConfig, WalkEngine};

/// Graph spanned by the vertices and edges a record mentions. Record id `i`
/// becomes vertex `i - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodedGraph {
    pub graph: Graph,
    /// Set by callers that know the walk covered the source graph.
    pub complete: bool,
}

/// Every walked step contributes its edge, every named neighbor contributes
/// the edge to its step; restarts contribute nothing.
pub fn decode(rec: &Record) -> DecodedGraph {
    let mut edges = Vec::new();
    let mut cur = 1;
    for &tok in &rec.tokens()[1..] {
        match tok {
            Token::Step(id) => {
                edges.push((cur - 1, id - 1));
                cur = id;
            }
            Token::Restart(id) => cur = id,
            Token::Neighbor(id) => edges.push((cur - 1, id - 1)),
        }
    }
    let graph = Graph::from_edges(rec.vertex_count(), &edges)
        .expect("validated records decode to connected simple graphs");
    DecodedGraph {
        graph,
        complete: false,
    }
}

/// Largest graph accepted by the isomorphism search.
pub const ISOMORPHISM_LIMIT: usize = 16;

/// Adjacency-preserving bijection from `g` to `h`, if one exists.
///
/// Backtracking over `g`'s vertices in BFS order; candidates in `h` must
/// share the vertex's degree and sorted neighbor-degree multiset, and agree
/// on adjacency with every vertex already placed.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Result<Option<Permutation>> {
    for x in [g, h] {
        if x.n() > ISOMORPHISM_LIMIT {
            return Err(Error::TooLargeForIsomorphism {
                n: x.n(),
                limit: ISOMORPHISM_LIMIT,
            });
        }
    }
    let n = g.n();
    if n != h.n() || g.m() != h.m() {
        return Ok(None);
    }
    let signature = |x: &Graph, u: usize| {
        let mut nd: Vec<usize> = x.neighbors(u).iter().map(|&w| x.degree(w)).collect();
        nd.sort_unstable();
        (x.degree(u), nd)
    };
    let sig_g: Vec<_> = (0..n).map(|u| signature(g, u)).collect();
    let sig_h: Vec<_> = (0..n).map(|u| signature(h, u)).collect();
    let mut sorted_g = sig_g.clone();
    let mut sorted_h = sig_h.clone();
    sorted_g.sort();
    sorted_h.sort();
    if sorted_g != sorted_h {
        return Ok(None);
    }

    let mask = |x: &Graph| -> Vec<u32> {
        (0..n)
            .map(|u| x.neighbors(u).iter().fold(0u32, |m, &w| m | 1 << w))
            .collect()
    };
    let adj_g = mask(g);
    let adj_h = mask(h);

    let order = search_order(g);
    let candidates: Vec<Vec<usize>> = order
        .iter()
        .map(|&u| (0..n).filter(|&x| sig_h[x] == sig_g[u]).collect())
        .collect();

    struct Search<'a> {
        order: &'a [usize],
        candidates: &'a [Vec<usize>],
        adj_g: &'a [u32],
        adj_h: &'a [u32],
        map: Vec<usize>,
        used: u32,
    }

    impl Search<'_> {
        fn extend(&mut self, depth: usize) -> bool {
            if depth == self.order.len() {
                return true;
            }
            let u = self.order[depth];
            for &x in &self.candidates[depth] {
                if self.used & (1 << x) != 0 {
                    continue;
                }
                let consistent = self.order[..depth].iter().all(|&w| {
                    let in_g = self.adj_g[u] & (1 << w) != 0;
                    let in_h = self.adj_h[x] & (1 << self.map[w]) != 0;
                    in_g == in_h
                });
                if !consistent {
                    continue;
                }
                self.map[u] = x;
                self.used |= 1 << x;
                if self.extend(depth + 1) {
                    return true;
                }
                self.used &= !(1 << x);
            }
            false
        }
    }

    let mut s = Search {
        order: &order,
        candidates: &candidates,
        adj_g: &adj_g,
        adj_h: &adj_h,
        map: vec![usize::MAX; n],
        used: 0,
    };
    if s.extend(0) {
        Ok(Some(Permutation::new(s.map).expect("search builds a bijection")))
    } else {
        Ok(None)
    }
}

/// BFS order from the highest-degree vertex, so each placed vertex has as
/// many already-placed neighbors as possible.
fn search_order(g: &Graph) -> Vec<usize> {
    let mut order = Vec::with_capacity(g.n());
    let mut seen = vec![false; g.n()];
    let mut roots: Vec<usize> = (0..g.n()).collect();
    roots.sort_by_key(|&u| std::cmp::Reverse(g.degree(u)));
    for r in roots {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let mut head = order.len();
        order.push(r);
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    order
}

pub fn is_isomorphic(g: &Graph, h: &Graph) -> Result<bool> {
    Ok(find_isomorphism(g, h)?.is_some())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReconstructionReport {
    pub trials: usize,
    /// Trials whose walk met the coverage condition of the scheme.
    pub covering: usize,
    /// Covering trials whose decoded graph was isomorphic to the source.
    pub reconstructed: usize,
}

impl ReconstructionReport {
    pub fn coverage_fraction(&self) -> f64 {
        self.covering as f64 / self.trials as f64
    }
}

/// Whether a walk's record is guaranteed to carry the whole graph: all
/// vertices visited for named-neighbor records, all edges traversed (in
/// either direction) for anonymized records.
pub fn walk_covers(g: &Graph, walk: &crate::walk::Walk, scheme: Scheme) -> bool {
    match scheme {
        Scheme::NamedNeighbors => walk.visited(g.n()).into_iter().all(|v| v),
        Scheme::Anonymized => {
            let mut seen = vec![false; g.m()];
            for t in 1..walk.vertices.len() {
                if !walk.restarts[t - 1] {
                    let arc = g
                        .find_arc(walk.vertices[t - 1], walk.vertices[t])
                        .expect("walk follows edges");
                    seen[g.arc_edge(arc)] = true;
                }
            }
            seen.into_iter().all(|e| e)
        }
    }
}

/// Samples `trials` walks (stream `i` for trial `i`) and, for every walk
/// meeting the coverage condition, requires the decoded record to be
/// isomorphic to `g`. A covering walk that fails to reconstruct is an error.
pub fn check_reconstruction(
    g: &Graph,
    config: &WalkConfig,
    trials: usize,
    scheme: Scheme,
) -> Result<ReconstructionReport> {
    if g.n() > ISOMORPHISM_LIMIT {
        return Err(Error::TooLargeForIsomorphism {
            n: g.n(),
            limit: ISOMORPHISM_LIMIT,
        });
    }
    let engine = WalkEngine::new(g, config)?;
    // Per trial: None if the walk did not cover, Some(Err) on a failed
    // reconstruction.
    let outcomes: Vec<Option<std::result::Result<(), Error>>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let walk = match engine.sample(None, i as u64) {
                Ok(w) => w,
                Err(e) => return Some(Err(e)),
            };
            if !walk_covers(g, &walk, scheme) {
                return None;
            }
            let rec = record(&walk, g, scheme);
            Some(match is_isomorphic(&decode(&rec).graph, g) {
                Ok(true) => Ok(()),
                Ok(false) => Err(Error::ReconstructionFailed {
                    trial: i,
                    record: rec.to_string(),
                }),
                Err(e) => Err(e),
            })
        })
        .collect();
    let mut report = ReconstructionReport {
        trials,
        covering: 0,
        reconstructed: 0,
    };
    for o in outcomes.into_iter().flatten() {
        o?;
        report.covering += 1;
        report.reconstructed += 1;
    }
    Ok(report)
}
