//! Monte Carlo cover times.
//!
//! A trial runs an open-ended walk until every target vertex has been
//! visited ([`CoverMode::Vertex`]), every target edge has been traversed in
//! at least one direction ([`CoverMode::Edge`]), or every target edge has
//! been traversed in both directions ([`CoverMode::Arc`]). The count is the
//! number of steps taken, restarts included. Trials that exceed the step
//! budget are censored: counted separately and left out of the mean.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{local_ball, Graph};
use crate::walk::{Restart, WalkConfig, WalkEngine};

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoverMode {
    Vertex,
    /// Each edge traversed at least once, in either direction.
    Edge,
    /// Each edge traversed in both directions.
    Arc,
}

impl CoverMode {
    pub fn name(self) -> &'static str {
        match self {
            CoverMode::Vertex => "vertex",
            CoverMode::Edge => "edge",
            CoverMode::Arc => "arc",
        }
    }
}

impl fmt::Display for CoverMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CoverMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vertex" => Ok(CoverMode::Vertex),
            "edge" => Ok(CoverMode::Edge),
            "arc" => Ok(CoverMode::Arc),
            _ => Err(Error::InvalidConfig(format!("unknown cover mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartPolicy {
    Fixed(usize),
    /// Start drawn uniformly per trial.
    Uniform,
    /// Every start gets its own batch of trials; the largest mean is
    /// reported.
    WorstOverStarts,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverStats {
    pub mean: f64,
    pub std_err: f64,
    /// Completed (uncensored) trials behind `mean`.
    pub trials: usize,
    pub censored: usize,
    pub mode: CoverMode,
    pub start_policy: StartPolicy,
    /// The start that produced the reported mean, for `Fixed` and
    /// `WorstOverStarts`.
    pub start: Option<usize>,
}

impl CoverStats {
    fn from_samples(
        samples: &[Option<u64>],
        mode: CoverMode,
        start_policy: StartPolicy,
        start: Option<usize>,
    ) -> Self {
        let done: Vec<f64> = samples.iter().flatten().map(|&x| x as f64).collect();
        let censored = samples.len() - done.len();
        let (mean, std_err) = mean_and_stderr(&done);
        CoverStats {
            mean,
            std_err,
            trials: done.len(),
            censored,
            mode,
            start_policy,
            start,
        }
    }
}

/// Sample mean and standard error of the mean; `(NaN, NaN)` when empty.
pub fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let k = xs.len();
    if k == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / k as f64;
    if k == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
    (mean, (var / k as f64).sqrt())
}

/// What a trial has to cover.
#[derive(Debug, Clone)]
pub struct CoverTarget {
    mode: CoverMode,
    /// Vertex flags, edge-id flags or arc-id flags depending on `mode`.
    wanted: Vec<bool>,
    count: usize,
}

impl CoverTarget {
    pub fn whole(g: &Graph, mode: CoverMode) -> Self {
        let len = match mode {
            CoverMode::Vertex => g.n(),
            CoverMode::Edge => g.m(),
            CoverMode::Arc => g.arc_count(),
        };
        CoverTarget {
            mode,
            wanted: vec![true; len],
            count: len,
        }
    }

    /// Vertices of `B_r(center)`, or the edges with both endpoints in it.
    pub fn ball(g: &Graph, center: usize, radius: usize, mode: CoverMode) -> Result<Self> {
        let ball = local_ball(g, center, radius)?;
        let mut inside = vec![false; g.n()];
        for &v in &ball.members {
            inside[v] = true;
        }
        let wanted: Vec<bool> = match mode {
            CoverMode::Vertex => inside.clone(),
            CoverMode::Edge => g
                .edges()
                .iter()
                .map(|&(u, v)| inside[u] && inside[v])
                .collect(),
            CoverMode::Arc => (0..g.n())
                .flat_map(|u| g.neighbors(u).iter().map(move |&w| (u, w)))
                .map(|(u, w)| inside[u] && inside[w])
                .collect(),
        };
        let count = wanted.iter().filter(|&&w| w).count();
        Ok(CoverTarget { mode, wanted, count })
    }

    pub fn mode(&self) -> CoverMode {
        self.mode
    }
}

/// Runs one trial on random stream `index`. `None` means censored.
pub fn sample_cover_time(
    engine: &WalkEngine<'_>,
    start: Option<usize>,
    target: &CoverTarget,
    budget: u64,
    index: u64,
) -> Result<Option<u64>> {
    let g = engine.graph();
    let mut walker = engine.walker(start, index)?;
    let mut remaining = target.count;
    let mut hit = vec![false; target.wanted.len()];
    let mut mark = |i: usize, remaining: &mut usize| {
        if target.wanted[i] && !hit[i] {
            hit[i] = true;
            *remaining -= 1;
        }
    };
    if target.mode == CoverMode::Vertex {
        mark(walker.start(), &mut remaining);
    }
    let mut steps = 0u64;
    while remaining > 0 {
        if steps >= budget {
            return Ok(None);
        }
        let s = walker.step();
        steps += 1;
        match (target.mode, s.arc) {
            (CoverMode::Vertex, _) => mark(s.vertex, &mut remaining),
            (CoverMode::Edge, Some(a)) => mark(g.arc_edge(a), &mut remaining),
            (CoverMode::Arc, Some(a)) => mark(a, &mut remaining),
            (_, None) => {}
        }
    }
    Ok(Some(steps))
}

fn run_trials(
    engine: &WalkEngine<'_>,
    start: Option<usize>,
    target: &CoverTarget,
    trials: usize,
    budget: u64,
    first_index: u64,
) -> Result<Vec<Option<u64>>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|i| sample_cover_time(engine, start, target, budget, first_index + i))
        .collect()
}

/// Global cover time of `g`. `config.restart` must be `None`.
pub fn estimate_cover_time(
    g: &Graph,
    config: &WalkConfig,
    mode: CoverMode,
    trials: usize,
    policy: StartPolicy,
) -> Result<CoverStats> {
    estimate_cover_time_with_budget(g, config, mode, trials, policy, DEFAULT_BUDGET)
}

pub fn estimate_cover_time_with_budget(
    g: &Graph,
    config: &WalkConfig,
    mode: CoverMode,
    trials: usize,
    policy: StartPolicy,
    budget: u64,
) -> Result<CoverStats> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    if config.restart != Restart::None {
        return Err(Error::InvalidConfig(
            "global cover times are defined for walks without restarts".into(),
        ));
    }
    let engine = WalkEngine::new(g, config)?;
    let target = CoverTarget::whole(g, mode);
    match policy {
        StartPolicy::Fixed(v) => {
            g.check_vertex(v)?;
            let s = run_trials(&engine, Some(v), &target, trials, budget, 0)?;
            Ok(CoverStats::from_samples(&s, mode, policy, Some(v)))
        }
        StartPolicy::Uniform => {
            let s = run_trials(&engine, None, &target, trials, budget, 0)?;
            Ok(CoverStats::from_samples(&s, mode, policy, None))
        }
        StartPolicy::WorstOverStarts => {
            let mut worst: Option<CoverStats> = None;
            for v in 0..g.n() {
                let first = (v * trials) as u64;
                let s = run_trials(&engine, Some(v), &target, trials, budget, first)?;
                let stats = CoverStats::from_samples(&s, mode, policy, Some(v));
                let replace = match &worst {
                    None => true,
                    Some(w) => stats.censored > w.censored
                        || (stats.censored == w.censored && stats.mean > w.mean),
                };
                if replace {
                    worst = Some(stats);
                }
            }
            Ok(worst.expect("graph has at least one vertex"))
        }
    }
}

/// Cover time of the ball `B_radius(center)` for walks started at `center`.
pub fn local_cover_time(
    g: &Graph,
    center: usize,
    radius: usize,
    config: &WalkConfig,
    mode: CoverMode,
    trials: usize,
    budget: u64,
) -> Result<CoverStats> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    let engine = WalkEngine::new(g, config)?;
    let target = CoverTarget::ball(g, center, radius, mode)?;
    let s = run_trials(&engine, Some(center), &target, trials, budget, 0)?;
    Ok(CoverStats::from_samples(
        &s,
        mode,
        StartPolicy::Fixed(center),
        Some(center),
    ))
}

/// Closed-form upper bound on the local cover time of a radius-`r` ball in a
/// graph of maximum degree `max_degree`, for walks restarting at the center.
///
/// Built from a spanning tree of the ball walked edge by edge, each leg
/// bounded by the restart hitting-time bound:
///
/// * vertex, probability `a`: `2(D^r - 1)(1/a + (1/a)(D/(1-a))^r + (1/a)(1/a - 1)(D/(1-a))^{2r})`
/// * vertex, period `k >= r`: `2(D^r - 1)(k + k D^r)`
/// * edge, probability `a`: `2(D^{2r} - 1)(1/a + (1/a)(D/(1-a))^{r+1} + (1/a)(1/a - 1)(D/(1-a))^{2r+1})`
/// * edge, period `k >= r + 1`: `2(D^{2r} - 1)(k + k D^{r+1})`
///
/// The edge bound covers both one-direction and two-direction edge cover.
pub fn local_cover_bound(max_degree: usize, radius: usize, restart: Restart, mode: CoverMode) -> Result<f64> {
    let d = max_degree as f64;
    let r = radius as i32;
    let edge = mode != CoverMode::Vertex;
    let tree = if edge {
        2.0 * (d.powi(2 * r) - 1.0)
    } else {
        2.0 * (d.powi(r) - 1.0)
    };
    let leg = match restart {
        Restart::Prob(a) => {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::InvalidBound(format!(
                    "restart probability must lie in (0, 1), got {a}"
                )));
            }
            let ratio = d / (1.0 - a);
            let (near, far) = if edge { (r + 1, 2 * r + 1) } else { (r, 2 * r) };
            1.0 / a + ratio.powi(near) / a + (1.0 / a) * (1.0 / a - 1.0) * ratio.powi(far)
        }
        Restart::Period(k) => {
            let need = if edge { radius + 1 } else { radius };
            if k < need || k < 2 {
                return Err(Error::InvalidBound(format!(
                    "restart period {k} too short for radius {radius} ({} cover needs k >= {})",
                    mode,
                    need.max(2)
                )));
            }
            let k = k as f64;
            k + k * d.powi(if edge { r + 1 } else { r })
        }
        Restart::None => {
            return Err(Error::InvalidBound(
                "walks without restarts have no finite local cover bound".into(),
            ))
        }
    };
    let bound = tree * leg;
    if !bound.is_finite() {
        return Err(Error::InvalidBound("bound overflows".into()));
    }
    Ok(bound)
}
