//! Exact trajectory distributions by exhaustive branching.
//!
//! Used as the oracle for the probabilistic invariance properties: two walks
//! are equal in distribution iff these maps agree.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Graph, Permutation};
use crate::walk::{Restart, Walk, WalkConfig, WalkEngine};

/// Upper limit on the number of enumerated trajectories.
pub const ENUMERATION_LIMIT: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct WalkDistribution {
    pub probs: BTreeMap<Walk, f64>,
}

impl WalkDistribution {
    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn get(&self, w: &Walk) -> f64 {
        self.probs.get(w).copied().unwrap_or(0.0)
    }

    /// Relabels every trajectory through `p`.
    pub fn map(&self, p: &Permutation) -> WalkDistribution {
        WalkDistribution {
            probs: self.probs.iter().map(|(w, &pr)| (w.map(p), pr)).collect(),
        }
    }

    /// Pushes the distribution forward through `f`, summing collisions.
    pub fn push_forward<K: Ord>(&self, mut f: impl FnMut(&Walk) -> K) -> BTreeMap<K, f64> {
        let mut out = BTreeMap::new();
        for (w, &p) in &self.probs {
            *out.entry(f(w)).or_insert(0.0) += p;
        }
        out
    }
}

/// Largest absolute difference between two finite distributions over the
/// same key type.
pub fn max_abs_diff<K: Ord>(a: &BTreeMap<K, f64>, b: &BTreeMap<K, f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for (k, &p) in a {
        worst = worst.max((p - b.get(k).copied().unwrap_or(0.0)).abs());
    }
    for (k, &p) in b {
        if !a.contains_key(k) {
            worst = worst.max(p.abs());
        }
    }
    worst
}

struct Enumerator<'a, 'g> {
    engine: &'a WalkEngine<'g>,
    length: usize,
    restart: Restart,
    vertices: Vec<usize>,
    restarts: Vec<bool>,
    out: BTreeMap<Walk, f64>,
    /// Dry run: only count trajectories.
    counting: bool,
    leaves: usize,
}

impl Enumerator<'_, '_> {
    fn push(&mut self, v: usize, r: bool) {
        self.vertices.push(v);
        self.restarts.push(r);
    }

    fn pop(&mut self) {
        self.vertices.pop();
        self.restarts.pop();
    }

    fn visit(&mut self, prob: f64, prev: Option<usize>, restarted_last: bool) -> Result<()> {
        let t = self.restarts.len() + 1;
        if t > self.length {
            self.leaves += 1;
            if self.leaves > ENUMERATION_LIMIT {
                return Err(Error::EnumerationTooLarge {
                    limit: ENUMERATION_LIMIT,
                });
            }
            if self.counting {
                return Ok(());
            }
            let w = Walk {
                vertices: self.vertices.clone(),
                restarts: self.restarts.clone(),
            };
            *self.out.entry(w).or_insert(0.0) += prob;
            return Ok(());
        }
        let start = self.vertices[0];
        let cur = *self.vertices.last().unwrap();
        let restart_prob = if t < 2 {
            0.0
        } else {
            match self.restart {
                Restart::None => 0.0,
                Restart::Prob(a) if !restarted_last => a,
                Restart::Prob(_) => 0.0,
                Restart::Period(k) if t % k == 0 => 1.0,
                Restart::Period(_) => 0.0,
            }
        };
        if restart_prob > 0.0 {
            self.push(start, true);
            self.visit(prob * restart_prob, None, true)?;
            self.pop();
        }
        let stay = 1.0 - restart_prob;
        if stay > 0.0 {
            for (x, p) in self.engine.step_distribution(prev, cur) {
                self.push(x, false);
                self.visit(prob * stay * p, Some(cur), false)?;
                self.pop();
            }
        }
        Ok(())
    }
}

/// Exact probability of every length-`config.length` trajectory from
/// `start`, or from a uniformly chosen start when `start` is `None`.
pub fn enumerate_walk_distribution(
    g: &Graph,
    config: &WalkConfig,
    start: Option<usize>,
) -> Result<WalkDistribution> {
    let engine = WalkEngine::new(g, config)?;
    let starts: Vec<usize> = match start {
        Some(v) => {
            g.check_vertex(v)?;
            vec![v]
        }
        None => (0..g.n()).collect(),
    };
    let p0 = 1.0 / starts.len() as f64;
    let mut e = Enumerator {
        engine: &engine,
        length: config.length,
        restart: config.restart,
        vertices: Vec::new(),
        restarts: Vec::new(),
        out: BTreeMap::new(),
        counting: true,
        leaves: 0,
    };
    for counting in [true, false] {
        e.counting = counting;
        e.leaves = 0;
        for &s in &starts {
            e.vertices.clear();
            e.restarts.clear();
            e.vertices.push(s);
            e.visit(p0, None, false)?;
        }
    }
    Ok(WalkDistribution { probs: e.out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::*;

    #[test]
    fn k2_is_deterministic() {
        let g = gen_clique(2).unwrap();
        let d = enumerate_walk_distribution(&g, &WalkConfig::uniform(2), Some(0)).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.get(&Walk::plain(vec![0, 1, 0])), 1.0);
    }

    #[test]
    fn triangle_one_step() {
        let g = gen_cycle(3).unwrap();
        let d = enumerate_walk_distribution(&g, &WalkConfig::uniform(1), Some(0)).unwrap();
        assert_eq!(d.get(&Walk::plain(vec![0, 1])), 0.5);
        assert_eq!(d.get(&Walk::plain(vec![0, 2])), 0.5);
    }

    #[test]
    fn triangle_nb_two_steps() {
        let g = gen_cycle(3).unwrap();
        let cfg = WalkConfig::uniform(2).non_backtracking();
        let d = enumerate_walk_distribution(&g, &cfg, Some(0)).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.get(&Walk::plain(vec![0, 1, 2])), 0.5);
        assert_eq!(d.get(&Walk::plain(vec![0, 2, 1])), 0.5);
    }

    #[test]
    fn restart_branches_are_enumerated() {
        let g = gen_path(3).unwrap();
        let cfg = WalkConfig::uniform(3).restart(Restart::Prob(0.25));
        let d = enumerate_walk_distribution(&g, &cfg, Some(1)).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-12);
        // 1 -> 0, then restart (0.25), then no restart allowed: -> 0 or 2.
        let w = Walk::new(vec![1, 0, 1, 2], vec![false, true, false]).unwrap();
        assert!((d.get(&w) - 0.5 * 0.25 * 0.5).abs() < 1e-15);
        // Never two restarts in a row.
        assert!(d
            .probs
            .keys()
            .all(|w| w.restarts.windows(2).all(|p| !(p[0] && p[1]))));
    }

    #[test]
    fn uniform_start_sums_to_one() {
        let g = gen_lollipop(3).unwrap();
        let cfg = WalkConfig::uniform(4).node2vec(2.0, 0.5);
        let d = enumerate_walk_distribution(&g, &cfg, None).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn explosion_guard() {
        let g = gen_clique(12).unwrap();
        let cfg = WalkConfig::uniform(7);
        assert!(matches!(
            enumerate_walk_distribution(&g, &cfg, Some(0)),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }
}
