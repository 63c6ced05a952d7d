//! Exact isomorphism-invariance checks.
//!
//! For a graph `G`, a relabeling `p` and a walk configuration, the walk on
//! `p(G)` must have the same trajectory distribution as `p` applied to the
//! walk on `G`, and the records of corresponding trajectories must be byte
//! identical. Distributions are computed by exhaustive enumeration, so the
//! comparison is exact up to floating-point summation.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::conductance::Conductance;
use crate::enumerate::{enumerate_walk_distribution, max_abs_diff};
use crate::error::Result;
use crate::generators::{connected_labeled_graphs, gen_random_connected};
use crate::graph::{apply_permutation, Graph, Permutation};
use crate::record::{record, Record, Scheme};
use crate::walk::{Restart, WalkConfig};

const SCHEMES: [Scheme; 2] = [Scheme::Anonymized, Scheme::NamedNeighbors];

/// Outcome of comparing one `(G, p, config)` triple.
#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceCheck {
    pub trajectory_diff: f64,
    /// Largest record-distribution difference over both schemes.
    pub record_diff: f64,
    pub walks: usize,
    /// Walks whose record on `G` differs from the record of the relabeled
    /// walk on `p(G)`.
    pub record_mismatches: usize,
}

/// Compares the walk on `G` with the walk on `p(G)`. The start is uniform,
/// which covers every start vertex at once.
pub fn check_invariance(g: &Graph, p: &Permutation, config: &WalkConfig) -> Result<InvarianceCheck> {
    let h = apply_permutation(g, p)?;
    let dist_g = enumerate_walk_distribution(g, config, None)?;
    let dist_h = enumerate_walk_distribution(&h, config, None)?;
    let trajectory_diff = max_abs_diff(&dist_g.map(p).probs, &dist_h.probs);

    let mut record_diff: f64 = 0.0;
    let mut record_mismatches = 0;
    for scheme in SCHEMES {
        let mut rec_g: BTreeMap<Record, f64> = BTreeMap::new();
        for (w, &pr) in &dist_g.probs {
            let r = record(w, g, scheme);
            if r != record(&w.map(p), &h, scheme) {
                record_mismatches += 1;
            }
            *rec_g.entry(r).or_insert(0.0) += pr;
        }
        let rec_h = dist_h.push_forward(|w| record(w, &h, scheme));
        record_diff = record_diff.max(max_abs_diff(&rec_g, &rec_h));
    }
    Ok(InvarianceCheck {
        trajectory_diff,
        record_diff,
        walks: dist_g.len(),
        record_mismatches,
    })
}

/// The walk configurations exercised by the suite: both conductances, each
/// with no second-order rule, non-backtracking and node2vec, each with and
/// without restarts.
pub fn suite_configs(length: usize) -> Vec<WalkConfig> {
    let mut out = Vec::new();
    for c in [Conductance::Constant, Conductance::Mdlr] {
        let base = WalkConfig::new(length, c);
        for walk in [
            base.clone(),
            base.clone().non_backtracking(),
            base.clone().node2vec(2.0, 1.0),
        ] {
            for r in [Restart::None, Restart::Prob(0.3), Restart::Period(2)] {
                out.push(walk.clone().restart(r));
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct InvarianceSuite {
    /// All connected labeled graphs up to this size are checked.
    pub exhaustive_up_to: usize,
    /// Sizes checked on random connected graphs.
    pub sampled_sizes: Vec<usize>,
    pub samples_per_size: usize,
    pub length: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for InvarianceSuite {
    fn default() -> Self {
        InvarianceSuite {
            exhaustive_up_to: 4,
            sampled_sizes: vec![5, 6],
            samples_per_size: 200,
            length: 4,
            tolerance: 1e-9,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct InvarianceReport {
    pub graphs: usize,
    pub cases: usize,
    pub walks: usize,
    pub max_trajectory_diff: f64,
    pub max_record_diff: f64,
    pub record_mismatches: usize,
    /// One line per failing case.
    pub failures: Vec<String>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl InvarianceSuite {
    /// Graphs checked by the suite, in a fixed order.
    pub fn graphs(&self) -> Result<Vec<Graph>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Vec::new();
        for n in 2..=self.exhaustive_up_to {
            out.extend(connected_labeled_graphs(n)?);
        }
        for &n in &self.sampled_sizes {
            for _ in 0..self.samples_per_size {
                out.push(gen_random_connected(n, 0.5, &mut rng)?);
            }
        }
        Ok(out)
    }

    pub fn run(&self) -> Result<InvarianceReport> {
        let graphs = self.graphs()?;
        let configs = suite_configs(self.length);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x5eed);
        let mut report = InvarianceReport {
            graphs: graphs.len(),
            ..Default::default()
        };
        for (gi, g) in graphs.iter().enumerate() {
            let p = Permutation::random(g.n(), &mut rng);
            for cfg in &configs {
                let c = check_invariance(g, &p, cfg)?;
                report.cases += 1;
                report.walks += c.walks;
                report.max_trajectory_diff = report.max_trajectory_diff.max(c.trajectory_diff);
                report.max_record_diff = report.max_record_diff.max(c.record_diff);
                report.record_mismatches += c.record_mismatches;
                if c.trajectory_diff > self.tolerance
                    || c.record_diff > self.tolerance
                    || c.record_mismatches > 0
                {
                    report.failures.push(format!(
                        "graph #{gi} (n={}, edges {:?}), perm {:?}, {}: trajectory diff {:.3e}, record diff {:.3e}, {} mismatched records",
                        g.n(),
                        g.edges(),
                        p.as_slice(),
                        cfg.label(),
                        c.trajectory_diff,
                        c.record_diff,
                        c.record_mismatches
                    ));
                }
            }
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::*;
    use crate::walk::Walk;

    #[test]
    fn lollipop_under_relabeling() {
        let g = gen_lollipop(3).unwrap();
        let p = Permutation::new(vec![5, 3, 0, 1, 4, 2]).unwrap();
        for cfg in suite_configs(4) {
            let c = check_invariance(&g, &p, &cfg).unwrap();
            assert!(c.trajectory_diff < 1e-12, "{}", cfg.label());
            assert!(c.record_diff < 1e-12, "{}", cfg.label());
            assert_eq!(c.record_mismatches, 0);
        }
    }

    #[test]
    fn suite_covers_eighteen_configs() {
        let cfgs = suite_configs(3);
        assert_eq!(cfgs.len(), 18);
        let labels: std::collections::BTreeSet<_> = cfgs.iter().map(|c| c.label()).collect();
        assert_eq!(labels.len(), 18);
    }

    #[test]
    fn small_suite_passes() {
        let suite = InvarianceSuite {
            exhaustive_up_to: 3,
            sampled_sizes: vec![5],
            samples_per_size: 3,
            length: 3,
            ..Default::default()
        };
        let r = suite.run().unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.graphs, 1 + 4 + 3);
        assert_eq!(r.cases, r.graphs * 18);
    }

    /// A recorder that leaks raw vertex ids must be caught by the same
    /// comparison.
    #[test]
    fn raw_ids_are_not_invariant() {
        let g = gen_path(3).unwrap();
        let p = Permutation::new(vec![1, 0, 2]).unwrap();
        let h = apply_permutation(&g, &p).unwrap();
        let cfg = WalkConfig::uniform(2);
        let raw = |w: &Walk| w.vertices.clone();
        let a = enumerate_walk_distribution(&g, &cfg, Some(0)).unwrap().push_forward(raw);
        let b = enumerate_walk_distribution(&h, &cfg, Some(p.get(0))).unwrap().push_forward(raw);
        assert!(max_abs_diff(&a, &b) > 0.1);
    }
}
