//! Undirected simple graphs, vertex permutations, local balls and
//! first-order transition matrices.
//!
//! Vertices are `0..n`. Adjacency is stored in compressed form with every
//! neighbor list sorted ascending, so neighbor iteration order (and hence
//! sampling) is deterministic. Each directed slot in the adjacency array is
//! an *arc*; `arc_edge` maps it back to the undirected edge id.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::conductance::Conductance;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    arc_edge: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Builds a connected simple graph. Duplicate edges (in either
    /// orientation) are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let g = Self::from_edges_relaxed(n, edges)?;
        let comps = g.component_sizes();
        if comps.len() > 1 {
            return Err(Error::Disconnected {
                count: comps.len(),
                sizes: comps,
            });
        }
        Ok(g)
    }

    /// Same as [`Graph::from_edges`] without the connectivity requirement.
    /// Only meant for subgraph extraction; walks assume connectivity.
    pub fn from_edges_relaxed(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut canon = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        canon.dedup();

        let mut degree = vec![0usize; n];
        for &(u, v) in &canon {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0usize; 2 * canon.len()];
        let mut arc_edge = vec![0usize; 2 * canon.len()];
        // Edges are sorted by (min, max), so pushing in this order keeps each
        // neighbor list ascending.
        let mut incoming: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (id, &(u, v)) in canon.iter().enumerate() {
            incoming[v].push((u, id));
        }
        for u in 0..n {
            for &(w, id) in &incoming[u] {
                targets[fill[u]] = w;
                arc_edge[fill[u]] = id;
                fill[u] += 1;
            }
        }
        for (id, &(u, v)) in canon.iter().enumerate() {
            targets[fill[u]] = v;
            arc_edge[fill[u]] = id;
            fill[u] += 1;
        }
        Ok(Graph {
            offsets,
            targets,
            arc_edge,
            edges: canon,
        })
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|u| self.degree(u)).max().unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|u| self.degree(u)).collect()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Undirected edges as `(min, max)` pairs, sorted. The position in this
    /// slice is the edge id.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Total number of arcs, `2m`.
    pub fn arc_count(&self) -> usize {
        self.targets.len()
    }

    /// Arc id of the `idx`-th neighbor of `u`.
    #[inline]
    pub fn arc(&self, u: usize, idx: usize) -> usize {
        self.offsets[u] + idx
    }

    #[inline]
    pub fn arc_edge(&self, arc: usize) -> usize {
        self.arc_edge[arc]
    }

    #[inline]
    pub fn arc_target(&self, arc: usize) -> usize {
        self.targets[arc]
    }

    /// Arc id for `u -> v`, if it is an edge.
    pub fn find_arc(&self, u: usize, v: usize) -> Option<usize> {
        self.neighbors(u)
            .binary_search(&v)
            .ok()
            .map(|i| self.arc(u, i))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            })
        }
    }

    /// Hop distances from `src`; `usize::MAX` for unreachable vertices.
    pub fn bfs_distances(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn component_sizes(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n()];
        let mut sizes = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            let mut size = 0;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                size += 1;
                for &w in self.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            sizes.push(size);
        }
        sizes
    }

    pub fn is_connected(&self) -> bool {
        self.component_sizes().len() == 1
    }

    pub fn is_bipartite(&self) -> bool {
        is_bipartite_by(self.n(), |u| self.neighbors(u).to_vec())
    }

    pub fn diameter(&self) -> usize {
        (0..self.n())
            .map(|s| {
                self.bfs_distances(s)
                    .into_iter()
                    .filter(|&d| d != usize::MAX)
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    /// Writes the edge-list text format: `n m` followed by one `u v` line per
    /// edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.m());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::EdgeListParse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let nums = parse_pair(header, hline)?;
        let (n, m) = nums;
        let mut edges = Vec::with_capacity(m);
        for (line, l) in lines {
            edges.push(parse_pair(l, line)?);
        }
        if edges.len() != m {
            return Err(Error::EdgeListParse {
                line: hline,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Graph::from_edges(n, &edges)
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Graph::parse_edge_list(s)
    }
}

fn parse_pair(l: &str, line: usize) -> Result<(usize, usize)> {
    let mut it = l.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::EdgeListParse {
                line,
                msg: "expected two integers".into(),
            })?
            .parse()
            .map_err(|e| Error::EdgeListParse {
                line,
                msg: format!("{e}"),
            })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::EdgeListParse {
            line,
            msg: "trailing tokens".into(),
        });
    }
    Ok((a, b))
}

pub(crate) fn is_bipartite_by(n: usize, neighbors: impl Fn(usize) -> Vec<usize>) -> bool {
    let mut color = vec![u8::MAX; n];
    for s in 0..n {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for w in neighbors(u) {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[u];
                    queue.push_back(w);
                } else if color[w] == color[u] {
                    return false;
                }
            }
        }
    }
    true
}

/// A bijection on `0..n`. `get(u)` is the new index of vertex `u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &x in &mapping {
            if x >= n {
                return Err(Error::InvalidPermutation(format!(
                    "{x} out of range for length {n}"
                )));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!("{x} appears twice")));
            }
        }
        Ok(Permutation(mapping))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.shuffle(rng);
        Permutation(v)
    }

    /// The cyclic shift `u -> (u + k) mod n`.
    pub fn rotation(n: usize, k: usize) -> Self {
        Permutation((0..n).map(|u| (u + k) % n).collect())
    }

    #[inline]
    pub fn get(&self, u: usize) -> usize {
        self.0[u]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (u, &x) in self.0.iter().enumerate() {
            inv[x] = u;
        }
        Permutation(inv)
    }
}

/// Re-indexes `g` so that `(p(u), p(v))` is an edge of the result iff
/// `(u, v)` is an edge of `g`.
pub fn apply_permutation(g: &Graph, p: &Permutation) -> Result<Graph> {
    if p.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: p.len(),
        });
    }
    let edges: Vec<_> = g.edges().iter().map(|&(u, v)| (p.get(u), p.get(v))).collect();
    Graph::from_edges_relaxed(g.n(), &edges)
}

/// The induced subgraph on all vertices within `radius` hops of `center`.
#[derive(Debug, Clone)]
pub struct LocalBall {
    pub center: usize,
    pub radius: usize,
    /// Parent-graph vertices, ascending. Member `i` is vertex `i` of `induced`.
    pub members: Vec<usize>,
    pub induced: Graph,
}

impl LocalBall {
    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn local_index(&self, v: usize) -> Option<usize> {
        self.members.binary_search(&v).ok()
    }
}

pub fn local_ball(g: &Graph, center: usize, radius: usize) -> Result<LocalBall> {
    g.check_vertex(center)?;
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::from([center]);
    dist[center] = 0;
    let mut members = vec![center];
    while let Some(u) = queue.pop_front() {
        if dist[u] == radius {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                members.push(w);
                queue.push_back(w);
            }
        }
    }
    members.sort_unstable();
    let local = |v: usize| members.binary_search(&v).ok();
    let mut edges = Vec::new();
    for (i, &u) in members.iter().enumerate() {
        for &w in g.neighbors(u) {
            if u < w {
                if let Some(j) = local(w) {
                    edges.push((i, j));
                }
            }
        }
    }
    let induced = Graph::from_edges_relaxed(members.len(), &edges)?;
    Ok(LocalBall {
        center,
        radius,
        members,
        induced,
    })
}

/// Dense row-stochastic matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    n: usize,
    data: Vec<f64>,
}

impl TransitionMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(TransitionMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.data[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[f64] {
        &self.data[u * self.n..(u + 1) * self.n]
    }

    /// Vertices reachable in one step from `u`.
    pub fn support(&self, u: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.get(u, v) > 0.0).collect()
    }

    /// `P y`
    pub fn apply(&self, y: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|u| self.row(u).iter().zip(y).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `y P`
    pub fn apply_left(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (u, &yu) in y.iter().enumerate() {
            if yu == 0.0 {
                continue;
            }
            for (o, &p) in out.iter_mut().zip(self.row(u)) {
                *o += yu * p;
            }
        }
        out
    }
}

/// First-order transition matrix for the given conductance.
pub fn transition_matrix(g: &Graph, c: &Conductance) -> Result<TransitionMatrix> {
    let n = g.n();
    let mut data = vec![0.0; n * n];
    for u in 0..n {
        let weights: Vec<f64> = g
            .neighbors(u)
            .iter()
            .map(|&x| c.weight(g, u, x))
            .collect::<Result<_>>()?;
        let total: f64 = weights.iter().sum();
        for (&x, w) in g.neighbors(u).iter().zip(weights) {
            data[u * n + x] = w / total;
        }
    }
    Ok(TransitionMatrix { n, data })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &e).unwrap()
    }

    #[test]
    fn triangle_has_degree_two() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(g.degrees(), vec![2, 2, 2]);
        assert_eq!(g.m(), 3);
        assert_eq!(g.neighbors(0), &[1, 2]);
    }

    #[test]
    fn duplicate_edges_are_merged() {
        let g = Graph::from_edges(2, &[(0, 1), (0, 1), (1, 0)]).unwrap();
        assert_eq!(g.m(), 1);
        assert_eq!(g.degrees(), vec![1, 1]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Graph::from_edges(2, &[(1, 1)]), Err(Error::SelfLoop(1)));
        assert!(matches!(
            Graph::from_edges(2, &[(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        ));
        match Graph::from_edges(4, &[(0, 1), (2, 3)]) {
            Err(Error::Disconnected { count, sizes }) => {
                assert_eq!(count, 2);
                assert_eq!(sizes, vec![2, 2]);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(Graph::from_edges(0, &[]), Err(Error::EmptyGraph));
        assert!(Graph::from_edges(1, &[]).is_ok());
    }

    #[test]
    fn arcs_map_to_edges() {
        let g = path(4);
        for u in 0..g.n() {
            for (i, &w) in g.neighbors(u).iter().enumerate() {
                let e = g.edges()[g.arc_edge(g.arc(u, i))];
                assert_eq!(e, (u.min(w), u.max(w)));
                assert_eq!(g.arc_target(g.arc(u, i)), w);
            }
        }
        assert_eq!(g.arc_count(), 6);
        assert_eq!(g.find_arc(1, 2), Some(g.arc(1, 1)));
        assert_eq!(g.find_arc(0, 2), None);
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![1, 0, 2]).is_ok());
        assert!(Permutation::new(vec![1, 1, 2]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        let q = p.inverse();
        for u in 0..3 {
            assert_eq!(q.get(p.get(u)), u);
        }
    }

    #[test]
    fn permutation_examples() {
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(apply_permutation(&tri, &Permutation::identity(3)).unwrap(), tri);

        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let swap = Permutation::new(vec![1, 0]).unwrap();
        assert_eq!(apply_permutation(&k2, &swap).unwrap(), k2);

        let p3 = path(3);
        let h = apply_permutation(&p3, &Permutation::new(vec![2, 1, 0]).unwrap()).unwrap();
        assert_eq!(h.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(h.degrees(), vec![1, 2, 1]);

        let bad = Permutation::identity(2);
        assert!(matches!(
            apply_permutation(&p3, &bad),
            Err(Error::LengthMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn local_ball_on_path() {
        let g = path(5);
        let b = local_ball(&g, 2, 1).unwrap();
        assert_eq!(b.members, vec![1, 2, 3]);
        assert_eq!(b.induced.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(b.local_index(2), Some(1));

        let b0 = local_ball(&g, 2, 0).unwrap();
        assert_eq!(b0.members, vec![2]);
        assert_eq!(b0.induced.m(), 0);

        let whole = local_ball(&g, 0, g.diameter()).unwrap();
        assert_eq!(whole.members, (0..5).collect::<Vec<_>>());
        assert_eq!(whole.induced, g);

        assert!(local_ball(&g, 5, 1).is_err());
    }

    #[test]
    fn local_ball_of_star_center() {
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let b = local_ball(&star, 0, 1).unwrap();
        assert_eq!(b.induced, star);
    }

    #[test]
    fn transition_matrix_examples() {
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let p = transition_matrix(&tri, &Conductance::Constant).unwrap();
        assert_eq!(p.row(0), &[0.0, 0.5, 0.5]);

        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let p = transition_matrix(&star, &Conductance::Constant).unwrap();
        for leaf in 1..4 {
            assert!((p.get(0, leaf) - 1.0 / 3.0).abs() < 1e-15);
        }

        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        for c in [Conductance::Constant, Conductance::Mdlr] {
            let p = transition_matrix(&k2, &c).unwrap();
            assert_eq!(p.row(0), &[0.0, 1.0]);
            assert_eq!(p.row(1), &[1.0, 0.0]);
        }
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let text = g.to_edge_list();
        assert!(text.starts_with("4 4\n"));
        assert_eq!(text.parse::<Graph>().unwrap(), g);
        assert!("3 2\n0 1\n".parse::<Graph>().is_err());
        assert!("2 1\n0 x\n".parse::<Graph>().is_err());
    }

    #[test]
    fn bipartite_detection() {
        assert!(path(4).is_bipartite());
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(!tri.is_bipartite());
    }
}
