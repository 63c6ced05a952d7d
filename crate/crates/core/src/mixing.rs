//! Stationary distributions and averaged powers of a transition matrix.
//!
//! A GNN-style readout that averages a signal over a walk's vertices sees,
//! in expectation, `(1/(l+1)) * sum_{t=0..l} P^t x`. As `l` grows this tends
//! to the constant vector `x . pi`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{is_bipartite_by, Graph, TransitionMatrix};
use crate::walk::{Restart, SecondOrder, WalkConfig, WalkEngine};

pub const STATIONARY_TOLERANCE: f64 = 1e-12;
pub const STATIONARY_MAX_ITER: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDistribution {
    pub pi: Vec<f64>,
    pub iterations: usize,
}

/// Stationary distribution by power iteration from the uniform vector.
///
/// Periodic (bipartite) chains are rejected since plain iteration does not
/// converge on them. The iteration runs on the lazy chain `(I + P) / 2`,
/// which has the same stationary distribution and no oscillating modes.
pub fn stationary(p: &TransitionMatrix) -> Result<StationaryDistribution> {
    let n = p.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if is_bipartite_by(n, |u| p.support(u)) {
        return Err(Error::Bipartite);
    }
    let mut pi = vec![1.0 / n as f64; n];
    for it in 1..=STATIONARY_MAX_ITER {
        let moved = p.apply_left(&pi);
        let next: Vec<f64> = pi.iter().zip(&moved).map(|(a, b)| 0.5 * (a + b)).collect();
        let delta = next
            .iter()
            .zip(&pi)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        pi = next;
        if delta < STATIONARY_TOLERANCE {
            let s: f64 = pi.iter().sum();
            pi.iter_mut().for_each(|x| *x /= s);
            return Ok(StationaryDistribution { pi, iterations: it });
        }
    }
    Err(Error::NoConvergence(STATIONARY_MAX_ITER))
}

/// `(1/(l+1)) * sum_{t=0..l} P^t x`.
pub fn expected_output(p: &TransitionMatrix, x: &[f64], l: usize) -> Result<Vec<f64>> {
    if x.len() != p.n() {
        return Err(Error::Dimension {
            expected: p.n(),
            got: x.len(),
        });
    }
    let mut acc = x.to_vec();
    let mut cur = x.to_vec();
    for _ in 0..l {
        cur = p.apply(&cur);
        acc.iter_mut().zip(&cur).for_each(|(a, c)| *a += c);
    }
    let scale = 1.0 / (l + 1) as f64;
    acc.iter_mut().for_each(|a| *a *= scale);
    Ok(acc)
}

/// Row `u` of `(1/(l+1)) * sum_{t=0..l} P^t`: the expected fraction of a
/// length-`l` walk from `u` spent at each vertex.
pub fn averaged_row(p: &TransitionMatrix, u: usize, l: usize) -> Result<Vec<f64>> {
    let n = p.n();
    if u >= n {
        return Err(Error::VertexOutOfRange { vertex: u, n });
    }
    let mut cur = vec![0.0; n];
    cur[u] = 1.0;
    let mut acc = cur.clone();
    for _ in 0..l {
        cur = p.apply_left(&cur);
        acc.iter_mut().zip(&cur).for_each(|(a, c)| *a += c);
    }
    let scale = 1.0 / (l + 1) as f64;
    acc.iter_mut().for_each(|a| *a *= scale);
    Ok(acc)
}

/// Full matrix `(1/(l+1)) * sum_{t=0..l} P^t`, row-major.
pub fn averaged_powers(p: &TransitionMatrix, l: usize) -> Result<Vec<Vec<f64>>> {
    (0..p.n()).map(|u| averaged_row(p, u, l)).collect()
}

/// Entry `(u, v)` of the averaged powers: the expected sensitivity of the
/// averaged readout at `u` to the input at `v`.
pub fn jacobian_expectation(p: &TransitionMatrix, u: usize, v: usize, l: usize) -> Result<f64> {
    let row = averaged_row(p, u, l)?;
    row.get(v).copied().ok_or(Error::VertexOutOfRange {
        vertex: v,
        n: p.n(),
    })
}

const MC_CHUNK: u64 = 1024;

/// Monte Carlo estimate of the mean fraction of time a length-`config.length`
/// walk from `u` spends at each vertex. Trial `i` uses stream `i` of
/// `config.seed`; the result does not depend on the thread count.
pub fn monte_carlo_visit_frequencies(
    g: &Graph,
    config: &WalkConfig,
    u: usize,
    trials: usize,
) -> Result<Vec<f64>> {
    if config.second_order != SecondOrder::None || config.restart != Restart::None {
        return Err(Error::InvalidConfig(
            "visit frequencies compare against P, so the walk must be first order without restarts"
                .into(),
        ));
    }
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    g.check_vertex(u)?;
    let engine = WalkEngine::new(g, config)?;
    let n = g.n();
    let l = config.length;
    let trials = trials as u64;
    let chunks = trials.div_ceil(MC_CHUNK);
    let counts: Vec<Vec<u64>> = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<Vec<u64>> {
            let mut counts = vec![0u64; n];
            for i in c * MC_CHUNK..((c + 1) * MC_CHUNK).min(trials) {
                let mut w = engine.walker(Some(u), i)?;
                counts[w.start()] += 1;
                for _ in 0..l {
                    counts[w.step().vertex] += 1;
                }
            }
            Ok(counts)
        })
        .collect::<Result<_>>()?;
    let mut total = vec![0u64; n];
    for c in &counts {
        total.iter_mut().zip(c).for_each(|(t, x)| *t += x);
    }
    let denom = (trials * (l as u64 + 1)) as f64;
    Ok(total.into_iter().map(|t| t as f64 / denom).collect())
}

pub fn monte_carlo_visit_frequency(
    g: &Graph,
    config: &WalkConfig,
    u: usize,
    v: usize,
    trials: usize,
) -> Result<f64> {
    g.check_vertex(v)?;
    Ok(monte_carlo_visit_frequencies(g, config, u, trials)?[v])
}

/// Standard deviation of the mean of `trials` samples in `[0, 1]` with mean
/// `p`, using the Bernoulli bound `p (1 - p)` on the variance.
pub fn bernoulli_sigma(p: f64, trials: usize) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conductance::Conductance;
    use crate::generators::*;
    use crate::graph::transition_matrix;

    fn uniform_p(g: &Graph) -> TransitionMatrix {
        transition_matrix(g, &Conductance::Constant).unwrap()
    }

    #[test]
    fn stationary_is_degree_proportional() {
        let g = gen_star_plus_edge();
        let pi = stationary(&uniform_p(&g)).unwrap().pi;
        let want = [3.0 / 8.0, 2.0 / 8.0, 2.0 / 8.0, 1.0 / 8.0];
        for (a, b) in pi.iter().zip(want) {
            assert!((a - b).abs() < 1e-9, "{pi:?}");
        }
        let pi = stationary(&uniform_p(&gen_cycle(3).unwrap())).unwrap().pi;
        assert!(pi.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-9));
    }

    #[test]
    fn bipartite_rejected() {
        let p = uniform_p(&gen_clique(2).unwrap());
        assert_eq!(stationary(&p), Err(Error::Bipartite));
        assert_eq!(stationary(&uniform_p(&gen_cycle(6).unwrap())), Err(Error::Bipartite));
    }

    #[test]
    fn zero_length_is_identity() {
        let g = gen_path(4).unwrap();
        let p = uniform_p(&g);
        assert_eq!(expected_output(&p, &[1.0, 2.0, 3.0, 4.0], 0).unwrap(), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(jacobian_expectation(&p, 1, 1, 0).unwrap(), 1.0);
        assert_eq!(jacobian_expectation(&p, 1, 2, 0).unwrap(), 0.0);
        // One step from 1: half the time at 1, a quarter at each neighbor.
        assert_eq!(averaged_row(&p, 1, 1).unwrap(), vec![0.25, 0.5, 0.25, 0.0]);
    }

    #[test]
    fn rows_sum_to_one() {
        let g = gen_lollipop(4).unwrap();
        let p = transition_matrix(&g, &Conductance::Mdlr).unwrap();
        for row in averaged_powers(&p, 7).unwrap() {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn long_averages_flatten_to_pi_dot_x() {
        let g = gen_barbell(5).unwrap();
        let p = uniform_p(&g);
        let pi = stationary(&p).unwrap().pi;
        let x: Vec<f64> = (0..g.n()).map(|i| (i as f64).sin()).collect();
        let target: f64 = x.iter().zip(&pi).map(|(a, b)| a * b).sum();
        let dev = |l| {
            expected_output(&p, &x, l)
                .unwrap()
                .iter()
                .map(|h| (h - target).abs())
                .fold(0.0, f64::max)
        };
        assert!(dev(1000) < dev(10));
        assert!(dev(100_000) < 1e-3);
    }

    #[test]
    fn dimension_checked() {
        let p = uniform_p(&gen_cycle(3).unwrap());
        assert!(matches!(expected_output(&p, &[1.0], 2), Err(Error::Dimension { .. })));
    }

    #[test]
    fn monte_carlo_tracks_exact_row() {
        let g = gen_star_plus_edge();
        let cfg = WalkConfig::uniform(5).seed(11);
        let mc = monte_carlo_visit_frequencies(&g, &cfg, 3, 20_000).unwrap();
        let exact = averaged_row(&uniform_p(&g), 3, 5).unwrap();
        for (a, b) in mc.iter().zip(&exact) {
            assert!((a - b).abs() < 5.0 * bernoulli_sigma(*b, 20_000) + 1e-12);
        }
        let nb = WalkConfig::uniform(5).non_backtracking();
        assert!(monte_carlo_visit_frequencies(&g, &nb, 0, 10).is_err());
    }
}
