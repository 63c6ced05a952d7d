//! Deterministic graph families.

use crate::error::{Error, Result};
use crate::graph::Graph;
use rand::Rng;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidGenerator(msg.into())
}

fn clique_edges(offset: usize, k: usize) -> Vec<(usize, usize)> {
    let mut e = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            e.push((offset + i, offset + j));
        }
    }
    e
}

pub fn gen_clique(k: usize) -> Result<Graph> {
    if k < 1 {
        return Err(invalid("clique needs k >= 1"));
    }
    Graph::from_edges(k, &clique_edges(0, k))
}

pub fn gen_path(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(invalid("path needs n >= 1"));
    }
    let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &e)
}

pub fn gen_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(invalid("cycle needs n >= 3"));
    }
    let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &e)
}

/// `K_{1,k}` with center 0.
pub fn gen_star(k: usize) -> Result<Graph> {
    if k < 1 {
        return Err(invalid("star needs k >= 1"));
    }
    let e: Vec<_> = (1..=k).map(|i| (0, i)).collect();
    Graph::from_edges(k + 1, &e)
}

/// Two copies of `K_k` on `0..k` and `k..2k`, joined by the bridge
/// `(k-1, k)`.
pub fn gen_barbell(k: usize) -> Result<Graph> {
    if k < 1 {
        return Err(invalid("barbell needs k >= 1"));
    }
    let mut e = clique_edges(0, k);
    e.extend(clique_edges(k, k));
    e.push((k - 1, k));
    Graph::from_edges(2 * k, &e)
}

/// `K_m` on `0..m` with an `m`-vertex path `m, m+1, .., 2m-1` hanging off
/// clique vertex `m-1`.
pub fn gen_lollipop(m: usize) -> Result<Graph> {
    if m < 2 {
        return Err(invalid("lollipop needs m >= 2"));
    }
    let mut e = clique_edges(0, m);
    for i in m..2 * m {
        e.push((i - 1, i));
    }
    Graph::from_edges(2 * m, &e)
}

/// Circular skip link graph: the cycle `0..n` plus chords `(i, i+s mod n)`.
pub fn gen_csl(n: usize, s: usize) -> Result<Graph> {
    if n < 5 {
        return Err(invalid("csl needs n >= 5"));
    }
    if s < 2 || 2 * s >= n {
        return Err(invalid(format!(
            "csl skip must satisfy 2 <= s < n/2 (got n={n}, s={s})"
        )));
    }
    let mut e = Vec::with_capacity(2 * n);
    for i in 0..n {
        e.push((i, (i + 1) % n));
        e.push((i, (i + s) % n));
    }
    Graph::from_edges(n, &e)
}

/// The skip lengths whose `csl(41, s)` graphs form the 10 isomorphism
/// classes of the CSL benchmark.
pub const CSL_SKIPS: [usize; 10] = [2, 3, 4, 5, 6, 9, 11, 12, 13, 16];

/// 4x4 rook's graph: vertex `4i + j` is cell `(i, j)`; cells sharing a row
/// or a column are adjacent.
pub fn gen_rook4x4() -> Graph {
    let mut e = Vec::new();
    for a in 0..16 {
        for b in a + 1..16 {
            if a / 4 == b / 4 || a % 4 == b % 4 {
                e.push((a, b));
            }
        }
    }
    Graph::from_edges(16, &e).expect("rook graph is connected")
}

/// Shrikhande graph as the Cayley graph on `Z4 x Z4` with connection set
/// `{±(1,0), ±(0,1), ±(1,1)}`; vertex `4i + j` is `(i, j)`.
pub fn gen_shrikhande() -> Graph {
    let gens = [(1, 0), (0, 1), (1, 1)];
    let mut e = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            for (di, dj) in gens {
                let (x, y) = ((i + di) % 4, (j + dj) % 4);
                e.push((4 * i + j, 4 * x + y));
            }
        }
    }
    Graph::from_edges(16, &e).expect("Shrikhande graph is connected")
}

/// Star `K_{1,3}` plus the leaf edge `(1, 2)`: the smallest non-regular,
/// non-bipartite test graph used by the mixing checks.
pub fn gen_star_plus_edge() -> Graph {
    Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2)]).expect("connected")
}

/// Every connected simple graph on vertices `0..n` (labeled, so isomorphic
/// copies are listed separately). Limited to `n <= 6`.
pub fn connected_labeled_graphs(n: usize) -> Result<Vec<Graph>> {
    if n == 0 || n > 6 {
        return Err(invalid(format!("labeled enumeration supports 1..=6 vertices, got {n}")));
    }
    let pairs = clique_edges(0, n);
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &e)| e)
            .collect();
        if let Ok(g) = Graph::from_edges(n, &edges) {
            out.push(g);
        }
    }
    Ok(out)
}

/// Erdős–Rényi `G(n, p)` conditioned on connectivity by rejection.
pub fn gen_random_connected<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if n == 0 {
        return Err(invalid("random graph needs at least one vertex"));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(invalid(format!("edge probability must lie in (0, 1], got {p}")));
    }
    let pairs = clique_edges(0, n);
    loop {
        let edges: Vec<_> = pairs.iter().copied().filter(|_| rng.gen_bool(p)).collect();
        if let Ok(g) = Graph::from_edges(n, &edges) {
            return Ok(g);
        }
    }
}

/// Size of the largest clique, by brute force over vertex subsets. Only for
/// small graphs.
pub fn max_clique_size(g: &Graph) -> usize {
    fn grow(g: &Graph, clique: &mut Vec<usize>, cands: &[usize], best: &mut usize) {
        *best = (*best).max(clique.len());
        for (i, &v) in cands.iter().enumerate() {
            if clique.len() + cands.len() - i <= *best {
                return;
            }
            let next: Vec<usize> = cands[i + 1..]
                .iter()
                .copied()
                .filter(|&w| g.has_edge(v, w))
                .collect();
            clique.push(v);
            grow(g, clique, &next, best);
            clique.pop();
        }
    }
    let all: Vec<usize> = (0..g.n()).collect();
    let mut best = 0;
    grow(g, &mut Vec::new(), &all, &mut best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{apply_permutation, Permutation};

    #[test]
    fn lollipop_shapes() {
        let g = gen_lollipop(2).unwrap();
        assert_eq!(g, gen_path(4).unwrap());

        let g = gen_lollipop(3).unwrap();
        assert_eq!((g.n(), g.m()), (6, 6));

        let g = gen_lollipop(4).unwrap();
        assert_eq!(g.degrees(), vec![3, 3, 3, 4, 2, 2, 2, 1]);
        assert_eq!(g.max_degree(), 4);

        assert!(gen_lollipop(1).is_err());
    }

    #[test]
    fn labeled_connected_counts() {
        // Known counts of connected labeled graphs: 1, 1, 4, 38, 728.
        let counts: Vec<usize> = (1..=5)
            .map(|n| connected_labeled_graphs(n).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 1, 4, 38, 728]);
        assert!(connected_labeled_graphs(7).is_err());
    }

    #[test]
    fn random_graphs_are_connected() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for n in 1..12 {
            let g = gen_random_connected(n, 0.3, &mut rng).unwrap();
            assert_eq!(g.n(), n);
            assert!(g.is_connected());
        }
    }

    #[test]
    fn csl_is_four_regular() {
        for s in CSL_SKIPS {
            let g = gen_csl(41, s).unwrap();
            assert_eq!(g.n(), 41);
            assert_eq!(g.m(), 82);
            assert!(g.degrees().iter().all(|&d| d == 4));
        }
        assert!(gen_csl(41, 1).is_err());
        assert!(gen_csl(41, 40).is_err());
        assert!(gen_csl(10, 5).is_err());
        assert!(gen_csl(4, 2).is_err());
    }

    #[test]
    fn csl_is_rotation_invariant() {
        let g = gen_csl(41, 9).unwrap();
        for k in [1, 7, 20] {
            let h = apply_permutation(&g, &Permutation::rotation(41, k)).unwrap();
            assert_eq!(h, g);
        }
    }

    #[test]
    fn standard_families() {
        let b = gen_barbell(10).unwrap();
        assert_eq!(b.n(), 20);
        assert_eq!(b.m(), 2 * 45 + 1);
        assert_eq!(b.degree(9), 10);
        assert_eq!(b.degree(10), 10);
        let bridges: Vec<_> = b
            .edges()
            .iter()
            .filter(|&&(u, v)| (u < 10) != (v < 10))
            .collect();
        assert_eq!(bridges, vec![&(9, 10)]);

        let k = gen_clique(20).unwrap();
        assert_eq!((k.n(), k.m()), (20, 190));

        assert_eq!(gen_cycle(3).unwrap(), gen_clique(3).unwrap());
        assert!(gen_cycle(2).is_err());
        assert_eq!(gen_star(3).unwrap().degrees(), vec![3, 1, 1, 1]);
        assert!(gen_clique(0).is_err());
    }

    #[test]
    fn sr16_pair() {
        let rook = gen_rook4x4();
        let shri = gen_shrikhande();
        for g in [&rook, &shri] {
            assert_eq!(g.n(), 16);
            assert_eq!(g.m(), 48);
            assert!(g.degrees().iter().all(|&d| d == 6));
        }
        assert_eq!(max_clique_size(&rook), 4);
        assert_eq!(max_clique_size(&shri), 3);
    }

    #[test]
    fn star_plus_edge_is_not_bipartite() {
        let g = gen_star_plus_edge();
        assert!(!g.is_bipartite());
        assert_eq!(g.degrees(), vec![3, 2, 2, 1]);
    }
}
