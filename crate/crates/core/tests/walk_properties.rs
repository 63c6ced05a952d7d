mod common;

use std::collections::BTreeMap;

use common::*;
use proptest::prelude::*;
use walklab::conductance::Conductance;
use walklab::enumerate::{enumerate_walk_distribution, max_abs_diff};
use walklab::generators::*;
use walklab::graph::apply_permutation;
use walklab::walk::{sample_walks, Walk};
use walklab::{Restart, WalkConfig, WalkEngine};

proptest! {
    #[test]
    fn sampled_walks_satisfy_invariants(g in graphs(2, 16), cfg in configs(0..=40)) {
        let engine = WalkEngine::new(&g, &cfg).unwrap();
        for i in 0..8 {
            let w = engine.sample(None, i).unwrap();
            prop_assert_eq!(w.len(), cfg.length);
            if let Err(e) = w.check(&g, cfg.second_order) {
                return Err(TestCaseError::fail(format!("{e}: {w}")));
            }
            if let Restart::Period(k) = cfg.restart {
                for (t, &r) in w.restarts.iter().enumerate() {
                    prop_assert_eq!(r, (t + 1) % k == 0 && t + 1 >= 2);
                }
            }
            prop_assert_eq!(w.to_string().parse::<Walk>().unwrap(), w);
        }
    }

    #[test]
    fn step_distributions_sum_to_one(g in graphs(2, 16), cfg in configs(1..=1), v in any::<prop::sample::Index>()) {
        let engine = WalkEngine::new(&g, &cfg).unwrap();
        let cur = v.index(g.n());
        let mut prevs = vec![None];
        prevs.extend(g.neighbors(cur).iter().map(|&x| Some(x)));
        for prev in prevs {
            let d = engine.step_distribution(prev, cur);
            let s: f64 = d.iter().map(|(_, p)| p).sum();
            prop_assert!((s - 1.0).abs() < 1e-9);
            prop_assert!(d.iter().all(|&(x, p)| p > 0.0 && g.has_edge(cur, x)));
        }
    }

    #[test]
    fn sampling_is_deterministic(g in graphs(2, 12), cfg in configs(0..=30), start in any::<prop::sample::Index>()) {
        let s = Some(start.index(g.n()));
        prop_assert_eq!(sample_walks(&g, &cfg, s, 5).unwrap(), sample_walks(&g, &cfg, s, 5).unwrap());
    }

    /// First-order walks with degree-based conductances, any restart rule.
    #[test]
    fn first_order_walks_are_invariant(g in graphs(2, 6), seed in any::<u64>(), l in 0usize..=4, mdlr in any::<bool>(), restart in 0usize..3) {
        let c = if mdlr { Conductance::Mdlr } else { Conductance::Constant };
        let r = [Restart::None, Restart::Prob(0.3), Restart::Period(2)][restart];
        check_trajectory_invariance(&g, seed, &WalkConfig::new(l, c).restart(r))?;
    }

    #[test]
    fn second_order_walks_are_invariant(g in graphs(2, 5), seed in any::<u64>(), cfg in configs(0..=4)) {
        check_trajectory_invariance(&g, seed, &cfg)?;
    }
}

fn check_trajectory_invariance(g: &walklab::Graph, seed: u64, cfg: &WalkConfig) -> Result<(), TestCaseError> {
    let p = random_permutation(g.n(), seed);
    let h = apply_permutation(g, &p).unwrap();
    for start in [None, Some(0)] {
        let a = enumerate_walk_distribution(g, cfg, start).unwrap().map(&p);
        let b = enumerate_walk_distribution(&h, cfg, start.map(|v| p.get(v))).unwrap();
        prop_assert!((b.total() - 1.0).abs() < 1e-9);
        let d = max_abs_diff(&a.probs, &b.probs);
        prop_assert!(d < 1e-9, "{}: diff {d}", cfg.label());
    }
    Ok(())
}

/// Sampled trajectory frequencies agree with the exact distribution within
/// four binomial standard deviations per trajectory.
#[test]
fn sampled_frequencies_match_enumeration() {
    let trials = 100_000u64;
    let cases = [
        (gen_lollipop(3).unwrap(), WalkConfig::new(3, Conductance::Mdlr)),
        (gen_lollipop(3).unwrap(), WalkConfig::new(3, Conductance::Mdlr).non_backtracking()),
        (gen_star_plus_edge(), WalkConfig::uniform(4).node2vec(0.5, 2.0)),
        (gen_star_plus_edge(), WalkConfig::uniform(4).node2vec(1.0, 2.0).non_backtracking()),
        (gen_barbell(3).unwrap(), WalkConfig::uniform(3).restart(Restart::Prob(0.4))),
        (gen_cycle(5).unwrap(), WalkConfig::uniform(4).restart(Restart::Period(3))),
    ];
    for (g, cfg) in cases {
        let cfg = cfg.seed(17);
        let exact = enumerate_walk_distribution(&g, &cfg, None).unwrap();
        let engine = WalkEngine::new(&g, &cfg).unwrap();
        let mut counts: BTreeMap<Walk, u64> = BTreeMap::new();
        for i in 0..trials {
            *counts.entry(engine.sample(None, i).unwrap()).or_insert(0) += 1;
        }
        for w in counts.keys() {
            assert!(exact.get(w) > 0.0, "{}: sampled impossible walk {w}", cfg.label());
        }
        for (w, &p) in &exact.probs {
            let f = counts.get(w).copied().unwrap_or(0) as f64 / trials as f64;
            let sigma = (p * (1.0 - p) / trials as f64).sqrt();
            assert!(
                (f - p).abs() <= 4.0 * sigma,
                "{}: {w} sampled {f}, exact {p}",
                cfg.label()
            );
        }
    }
}
