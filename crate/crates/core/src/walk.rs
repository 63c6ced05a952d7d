//! Walk sampling.
//!
//! A walk starts at `v_0` (given or uniform), takes its first transition
//! with the first-order rule, and from `t = 2` on may restart at `v_0`:
//!
//! * `Restart::Prob(a)` restarts with probability `a`, except directly after
//!   a restart (two restarts in a row never happen).
//! * `Restart::Period(k)` restarts at every `t ≡ 0 (mod k)`, whether or not
//!   the walk already sits at `v_0`.
//!
//! Non-backtracking walks renormalise the first-order probabilities over
//! `N(v_t) \ {v_{t-1}}` and only backtrack when that set is empty. node2vec
//! walks reweight them by `1/p`, `1`, `1/q` according to the distance between
//! the candidate and `v_{t-1}`. The transition right after a restart has no
//! meaningful predecessor and uses the first-order rule, like the very first
//! transition.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::conductance::Conductance;
use crate::error::{Error, Result};
use crate::graph::{Graph, Permutation};
use crate::rng::{stream_rng, WalkRng};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Restart {
    None,
    Prob(f64),
    Period(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SecondOrder {
    None,
    NonBacktracking,
    Node2Vec { p: f64, q: f64 },
    /// node2vec biases over `N(v_t) \ {v_{t-1}}`, backtracking only when
    /// that set is empty. `p` has no effect and is kept for labeling.
    Node2VecNonBacktracking { p: f64, q: f64 },
}

impl SecondOrder {
    pub fn is_non_backtracking(self) -> bool {
        matches!(
            self,
            SecondOrder::NonBacktracking | SecondOrder::Node2VecNonBacktracking { .. }
        )
    }
}

#[derive(Debug, Clone)]
pub struct WalkConfig {
    pub length: usize,
    pub conductance: Conductance,
    pub second_order: SecondOrder,
    pub restart: Restart,
    pub seed: u64,
}

impl WalkConfig {
    pub fn new(length: usize, conductance: Conductance) -> Self {
        WalkConfig {
            length,
            conductance,
            second_order: SecondOrder::None,
            restart: Restart::None,
            seed: 0,
        }
    }

    pub fn uniform(length: usize) -> Self {
        Self::new(length, Conductance::Constant)
    }

    /// Adds the non-backtracking rule; composes with node2vec.
    pub fn non_backtracking(mut self) -> Self {
        self.second_order = match self.second_order {
            SecondOrder::Node2Vec { p, q } | SecondOrder::Node2VecNonBacktracking { p, q } => {
                SecondOrder::Node2VecNonBacktracking { p, q }
            }
            _ => SecondOrder::NonBacktracking,
        };
        self
    }

    /// Adds node2vec biases; composes with the non-backtracking rule.
    pub fn node2vec(mut self, p: f64, q: f64) -> Self {
        self.second_order = if self.second_order.is_non_backtracking() {
            SecondOrder::Node2VecNonBacktracking { p, q }
        } else {
            SecondOrder::Node2Vec { p, q }
        };
        self
    }

    pub fn restart(mut self, r: Restart) -> Self {
        self.restart = r;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.restart {
            Restart::Prob(a) if !(a > 0.0 && a < 1.0) => {
                return Err(Error::InvalidConfig(format!(
                    "restart probability must lie in (0, 1), got {a}"
                )))
            }
            Restart::Period(k) if k < 2 => {
                return Err(Error::InvalidConfig(format!(
                    "restart period must exceed 1, got {k}"
                )))
            }
            _ => {}
        }
        if let SecondOrder::Node2Vec { p, q } | SecondOrder::Node2VecNonBacktracking { p, q } =
            self.second_order
        {
            if !(p > 0.0 && q > 0.0 && p.is_finite() && q.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "node2vec parameters must be positive, got p={p}, q={q}"
                )));
            }
        }
        Ok(())
    }

    /// Short label such as `mdlr+nb`, used in CSV output.
    pub fn label(&self) -> String {
        let mut s = self.conductance.name().to_string();
        match self.second_order {
            SecondOrder::None => {}
            SecondOrder::NonBacktracking => s.push_str("+nb"),
            SecondOrder::Node2Vec { p, q } => s.push_str(&format!("+node2vec(p={p};q={q})")),
            SecondOrder::Node2VecNonBacktracking { p, q } => {
                s.push_str(&format!("+node2vec(p={p};q={q})+nb"))
            }
        }
        match self.restart {
            Restart::None => {}
            Restart::Prob(a) => s.push_str(&format!("+restart(a={a})")),
            Restart::Period(k) => s.push_str(&format!("+restart(k={k})")),
        }
        s
    }
}

/// A sampled trajectory `v_0 .. v_l` with restart flags `r_1 .. r_l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Walk {
    pub vertices: Vec<usize>,
    pub restarts: Vec<bool>,
}

impl Walk {
    pub fn new(vertices: Vec<usize>, restarts: Vec<bool>) -> Result<Self> {
        if vertices.is_empty() || restarts.len() + 1 != vertices.len() {
            return Err(Error::InvalidConfig(format!(
                "walk with {} vertices needs {} restart flags, got {}",
                vertices.len(),
                vertices.len().saturating_sub(1),
                restarts.len()
            )));
        }
        Ok(Walk { vertices, restarts })
    }

    /// A walk without restarts.
    pub fn plain(vertices: Vec<usize>) -> Self {
        let l = vertices.len().saturating_sub(1);
        Walk {
            vertices,
            restarts: vec![false; l],
        }
    }

    pub fn len(&self) -> usize {
        self.restarts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.restarts.is_empty()
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn map(&self, p: &Permutation) -> Walk {
        Walk {
            vertices: self.vertices.iter().map(|&v| p.get(v)).collect(),
            restarts: self.restarts.clone(),
        }
    }

    /// Distinct vertices visited.
    pub fn visited(&self, n: usize) -> Vec<bool> {
        let mut seen = vec![false; n];
        for &v in &self.vertices {
            seen[v] = true;
        }
        seen
    }

    /// Checks adjacency, restart and second-order constraints.
    pub fn check(&self, g: &Graph, second_order: SecondOrder) -> std::result::Result<(), String> {
        if self.restarts.len() + 1 != self.vertices.len() {
            return Err("flag count mismatch".into());
        }
        if let Some(&v) = self.vertices.iter().find(|&&v| v >= g.n()) {
            return Err(format!("vertex {v} out of range"));
        }
        if self.restarts.first() == Some(&true) {
            return Err("r_1 must be false".into());
        }
        let v0 = self.vertices[0];
        for t in 1..self.vertices.len() {
            let (a, b) = (self.vertices[t - 1], self.vertices[t]);
            if self.restarts[t - 1] {
                if b != v0 {
                    return Err(format!("restart at t={t} lands on {b}, not {v0}"));
                }
                if t >= 2 && self.restarts[t - 2] {
                    // Only Prob mode forbids this; Period(k>1) cannot produce it.
                    return Err(format!("consecutive restarts at t={t}"));
                }
                continue;
            }
            if !g.has_edge(a, b) {
                return Err(format!("({a}, {b}) at t={t} is not an edge"));
            }
            let has_pred = t >= 2 && !self.restarts[t - 2];
            if has_pred && second_order.is_non_backtracking() {
                let prev = self.vertices[t - 2];
                if b == prev && g.degree(a) > 1 {
                    return Err(format!("backtrack {prev} -> {a} -> {b} at t={t}"));
                }
            }
        }
        Ok(())
    }
}

/// Engine text format: comma-separated vertex ids, restart steps suffixed
/// with `R`, e.g. `0,1,0R,2`.
impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.vertices[0])?;
        for (v, r) in self.vertices[1..].iter().zip(&self.restarts) {
            write!(f, ",{v}{}", if *r { "R" } else { "" })?;
        }
        Ok(())
    }
}

impl FromStr for Walk {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::WalkParse { line: 1, msg };
        let mut vertices = Vec::new();
        let mut restarts = Vec::new();
        for (i, tok) in s.trim().split(',').enumerate() {
            let tok = tok.trim();
            let (num, r) = match tok.strip_suffix('R') {
                Some(rest) => (rest, true),
                None => (tok, false),
            };
            let v: usize = num.parse().map_err(|e| bad(format!("`{tok}`: {e}")))?;
            if i == 0 {
                if r {
                    return Err(bad("v_0 cannot be a restart".into()));
                }
            } else {
                restarts.push(r);
            }
            vertices.push(v);
        }
        Walk::new(vertices, restarts)
    }
}

/// One transition of an open-ended walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub vertex: usize,
    pub restart: bool,
    /// Arc traversed, `None` for restarts.
    pub arc: Option<usize>,
}

/// Precomputed first-order weights plus the second-order rule for one graph
/// and configuration. Shared read-only by any number of walkers.
#[derive(Debug, Clone)]
pub struct WalkEngine<'g> {
    g: &'g Graph,
    config: WalkConfig,
    arc_weight: Vec<f64>,
    total: Vec<f64>,
    /// Per-vertex alias tables over the first-order weights, laid out like
    /// the arcs.
    alias_prob: Vec<f64>,
    alias_idx: Vec<u32>,
    /// Largest second-order bias, the envelope for rejection sampling.
    max_bias: f64,
}

impl<'g> WalkEngine<'g> {
    pub fn new(g: &'g Graph, config: &WalkConfig) -> Result<Self> {
        config.validate()?;
        let mut arc_weight = Vec::with_capacity(g.arc_count());
        let mut total = Vec::with_capacity(g.n());
        for u in 0..g.n() {
            let mut s = 0.0;
            for &x in g.neighbors(u) {
                let w = config.conductance.weight(g, u, x)?;
                arc_weight.push(w);
                s += w;
            }
            total.push(s);
        }
        let mut alias_prob = vec![1.0; arc_weight.len()];
        let mut alias_idx = vec![0u32; arc_weight.len()];
        for u in 0..g.n() {
            let range = g.arc(u, 0)..g.arc(u, 0) + g.degree(u);
            build_alias(
                &arc_weight[range.clone()],
                total[u],
                &mut alias_prob[range.clone()],
                &mut alias_idx[range],
            );
        }
        let max_bias = match config.second_order {
            SecondOrder::Node2Vec { p, q } => (1.0 / p).max(1.0).max(1.0 / q),
            SecondOrder::Node2VecNonBacktracking { q, .. } => (1.0f64).max(1.0 / q),
            _ => 1.0,
        };
        Ok(WalkEngine {
            g,
            config: config.clone(),
            alias_prob,
            alias_idx,
            max_bias,
            arc_weight,
            total,
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    pub fn config(&self) -> &WalkConfig {
        &self.config
    }

    #[inline]
    fn weights(&self, u: usize) -> &[f64] {
        let start = self.g.arc(u, 0);
        &self.arc_weight[start..start + self.g.degree(u)]
    }

    /// Unnormalised weights over `N(cur)` (in neighbor order) for the next
    /// transition. `prev = None` selects the first-order rule.
    pub fn transition_weights(&self, prev: Option<usize>, cur: usize) -> Vec<f64> {
        let base = self.weights(cur);
        let nbrs = self.g.neighbors(cur);
        let Some(prev) = prev else {
            return base.to_vec();
        };
        match self.config.second_order {
            SecondOrder::None => base.to_vec(),
            SecondOrder::NonBacktracking => {
                if nbrs.len() == 1 && nbrs[0] == prev {
                    return vec![1.0];
                }
                nbrs.iter()
                    .zip(base)
                    .map(|(&x, &w)| if x == prev { 0.0 } else { w })
                    .collect()
            }
            SecondOrder::Node2Vec { p, q } => nbrs
                .iter()
                .zip(base)
                .map(|(&x, &w)| w * self.node2vec_bias(prev, x, p, q))
                .collect(),
            SecondOrder::Node2VecNonBacktracking { p, q } => {
                if nbrs.len() == 1 && nbrs[0] == prev {
                    return vec![1.0];
                }
                nbrs.iter()
                    .zip(base)
                    .map(|(&x, &w)| if x == prev { 0.0 } else { w * self.node2vec_bias(prev, x, p, q) })
                    .collect()
            }
        }
    }

    #[inline]
    fn node2vec_bias(&self, prev: usize, x: usize, p: f64, q: f64) -> f64 {
        if x == prev {
            1.0 / p
        } else if self.g.has_edge(prev, x) {
            1.0
        } else {
            1.0 / q
        }
    }

    /// Normalised next-vertex distribution, zero-probability entries dropped.
    pub fn step_distribution(&self, prev: Option<usize>, cur: usize) -> Vec<(usize, f64)> {
        let w = self.transition_weights(prev, cur);
        let total: f64 = w.iter().sum();
        self.g
            .neighbors(cur)
            .iter()
            .zip(w)
            .filter(|(_, w)| *w > 0.0)
            .map(|(&x, w)| (x, w / total))
            .collect()
    }

    /// First-order draw from the alias table of `cur`.
    #[inline]
    fn draw(&self, cur: usize, rng: &mut WalkRng) -> usize {
        let base = self.g.arc(cur, 0);
        let i = rng.gen_range(0..self.g.degree(cur));
        let keep = self.alias_prob[base + i];
        if keep >= 1.0 || rng.gen::<f64>() < keep {
            i
        } else {
            self.alias_idx[base + i] as usize
        }
    }

    /// Picks a neighbor index of `cur`. First-order draws use the alias
    /// table; second-order rules reject first-order draws against their
    /// bias and fall back to cumulative-sum inversion after repeated
    /// rejections. Either way the result has the exact target distribution.
    #[inline]
    fn choose(&self, prev: Option<usize>, cur: usize, rng: &mut WalkRng, buf: &mut Vec<f64>) -> usize {
        const ATTEMPTS: usize = 16;
        let Some(prev) = prev else {
            return self.draw(cur, rng);
        };
        let nbrs = self.g.neighbors(cur);
        let nb = self.config.second_order.is_non_backtracking();
        if nb && nbrs.len() == 1 {
            return 0;
        }
        match self.config.second_order {
            SecondOrder::None => self.draw(cur, rng),
            SecondOrder::NonBacktracking => {
                let skip = nbrs.binary_search(&prev).ok();
                for _ in 0..ATTEMPTS {
                    let i = self.draw(cur, rng);
                    if Some(i) != skip {
                        return i;
                    }
                }
                let base = self.weights(cur);
                let total = self.total[cur] - skip.map_or(0.0, |i| base[i]);
                invert(base, rng.gen::<f64>() * total, skip)
            }
            SecondOrder::Node2Vec { p, q } | SecondOrder::Node2VecNonBacktracking { p, q } => {
                let bias = |x: usize| {
                    if nb && x == prev {
                        0.0
                    } else {
                        self.node2vec_bias(prev, x, p, q)
                    }
                };
                for _ in 0..ATTEMPTS {
                    let i = self.draw(cur, rng);
                    if rng.gen::<f64>() * self.max_bias < bias(nbrs[i]) {
                        return i;
                    }
                }
                buf.clear();
                let mut total = 0.0;
                for (&x, &w) in nbrs.iter().zip(self.weights(cur)) {
                    let b = w * bias(x);
                    total += b;
                    buf.push(b);
                }
                invert(buf, rng.gen::<f64>() * total, None)
            }
        }
    }

    /// Open-ended walker from `start` (uniform when `None`) using the random
    /// stream `index` of the configured seed.
    pub fn walker(&self, start: Option<usize>, index: u64) -> Result<Walker<'_, 'g>> {
        self.walker_with_rng(start, stream_rng(self.config.seed, index))
    }

    pub fn walker_with_rng(&self, start: Option<usize>, mut rng: WalkRng) -> Result<Walker<'_, 'g>> {
        let start = match start {
            Some(v) => {
                self.g.check_vertex(v)?;
                v
            }
            None => rng.gen_range(0..self.g.n()),
        };
        Ok(Walker {
            engine: self,
            rng,
            start,
            prev: None,
            cur: start,
            t: 0,
            restarted_last: false,
            buf: Vec::new(),
        })
    }

    /// Fixed-length walk of `config.length` steps on stream `index`.
    pub fn sample(&self, start: Option<usize>, index: u64) -> Result<Walk> {
        let mut w = self.walker(start, index)?;
        let l = self.config.length;
        let mut vertices = Vec::with_capacity(l + 1);
        let mut restarts = Vec::with_capacity(l);
        vertices.push(w.start());
        for _ in 0..l {
            let s = w.step();
            vertices.push(s.vertex);
            restarts.push(s.restart);
        }
        Ok(Walk { vertices, restarts })
    }
}

/// Vose's alias method over `weights` (summing to `total`).
fn build_alias(weights: &[f64], total: f64, prob: &mut [f64], alias: &mut [u32]) {
    let k = weights.len();
    let mut scaled: Vec<f64> = weights.iter().map(|w| w * k as f64 / total).collect();
    let (mut small, mut large): (Vec<usize>, Vec<usize>) = (0..k).partition(|&i| scaled[i] < 1.0);
    while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
        small.pop();
        prob[s] = scaled[s];
        alias[s] = l as u32;
        scaled[l] -= 1.0 - scaled[s];
        if scaled[l] < 1.0 {
            large.pop();
            small.push(l);
        }
    }
    // Leftovers are 1 up to rounding.
    for i in small.into_iter().chain(large) {
        prob[i] = 1.0;
        alias[i] = i as u32;
    }
}

#[inline]
fn invert(weights: &[f64], target: f64, skip: Option<usize>) -> usize {
    let mut acc = 0.0;
    let mut last = usize::MAX;
    for (i, &w) in weights.iter().enumerate() {
        if Some(i) == skip || w <= 0.0 {
            continue;
        }
        acc += w;
        last = i;
        if acc > target {
            return i;
        }
    }
    debug_assert!(last != usize::MAX);
    last
}

/// Stateful walker that can run for any number of steps.
pub struct Walker<'e, 'g> {
    engine: &'e WalkEngine<'g>,
    rng: WalkRng,
    start: usize,
    prev: Option<usize>,
    cur: usize,
    t: usize,
    restarted_last: bool,
    buf: Vec<f64>,
}

impl Walker<'_, '_> {
    pub fn start(&self) -> usize {
        self.start
    }

    pub fn current(&self) -> usize {
        self.cur
    }

    /// Steps taken so far.
    pub fn time(&self) -> usize {
        self.t
    }

    pub fn step(&mut self) -> Step {
        self.t += 1;
        let restart = self.t >= 2
            && match self.engine.config.restart {
                Restart::None => false,
                Restart::Prob(a) => !self.restarted_last && self.rng.gen::<f64>() < a,
                Restart::Period(k) => self.t % k == 0,
            };
        self.restarted_last = restart;
        if restart {
            self.prev = None;
            self.cur = self.start;
            return Step {
                vertex: self.start,
                restart: true,
                arc: None,
            };
        }
        let g = self.engine.g;
        let idx = self.engine.choose(self.prev, self.cur, &mut self.rng, &mut self.buf);
        let arc = g.arc(self.cur, idx);
        let next = g.arc_target(arc);
        self.prev = Some(self.cur);
        self.cur = next;
        Step {
            vertex: next,
            restart: false,
            arc: Some(arc),
        }
    }
}

impl Iterator for Walker<'_, '_> {
    type Item = Step;

    fn next(&mut self) -> Option<Step> {
        Some(self.step())
    }
}

/// Samples one walk using random stream 0 of `config.seed`.
pub fn sample_walk(g: &Graph, config: &WalkConfig, start: Option<usize>) -> Result<Walk> {
    WalkEngine::new(g, config)?.sample(start, 0)
}

/// Samples `count` walks on streams `0..count`.
pub fn sample_walks(
    g: &Graph,
    config: &WalkConfig,
    start: Option<usize>,
    count: usize,
) -> Result<Vec<Walk>> {
    let engine = WalkEngine::new(g, config)?;
    (0..count as u64).map(|i| engine.sample(start, i)).collect()
}

/// First-order next-vertex distribution from `u`.
pub fn step_distribution_first_order(
    g: &Graph,
    kind: &Conductance,
    u: usize,
) -> Result<Vec<(usize, f64)>> {
    g.check_vertex(u)?;
    let w: Vec<f64> = g
        .neighbors(u)
        .iter()
        .map(|&x| kind.weight(g, u, x))
        .collect::<Result<_>>()?;
    let total: f64 = w.iter().sum();
    Ok(g.neighbors(u).iter().zip(w).map(|(&x, w)| (x, w / total)).collect())
}

/// Second-order next-vertex distribution after traversing `prev -> cur`.
pub fn step_distribution_second_order(
    g: &Graph,
    config: &WalkConfig,
    prev: usize,
    cur: usize,
) -> Result<Vec<(usize, f64)>> {
    g.check_vertex(prev)?;
    g.check_vertex(cur)?;
    if !g.has_edge(prev, cur) {
        return Err(Error::NotAnEdge(prev, cur));
    }
    Ok(WalkEngine::new(g, config)?.step_distribution(Some(prev), cur))
}
