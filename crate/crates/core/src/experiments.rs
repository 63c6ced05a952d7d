//! Cover-time and mixing experiments with CSV output.
//!
//! Every table is a pure function of its parameters and seed: trials use
//! per-index random streams and results are gathered in index order, so the
//! CSV bytes do not depend on the number of worker threads.

use std::fmt::Write as _;

use crate::conductance::Conductance;
use crate::cover::{estimate_cover_time_with_budget, CoverMode, CoverStats, StartPolicy, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::generators::{gen_lollipop, gen_rook4x4, gen_shrikhande};
use crate::graph::{transition_matrix, Graph};
use crate::mixing::{averaged_row, bernoulli_sigma, monte_carlo_visit_frequencies};
use crate::rng::derive_seed;
use crate::walk::WalkConfig;

pub const COVER_CSV_HEADER: &str = "graph,walk,mode,mean,std_err,trials,censored";
pub const MIXING_CSV_HEADER: &str = "l,u,v,mc_estimate,exact_value,abs_err";

/// One line of a cover-time table.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverRow {
    pub graph: String,
    pub walk: String,
    pub stats: CoverStats,
}

impl CoverRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{:.6},{:.6},{},{}",
            self.graph,
            self.walk,
            self.stats.mode,
            self.stats.mean,
            self.stats.std_err,
            self.stats.trials,
            self.stats.censored
        )
    }
}

pub fn cover_csv(rows: &[CoverRow]) -> String {
    let mut out = String::from(COVER_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

/// Where lollipop cover runs start.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LollipopStart {
    /// Clique vertex 0, away from the attachment point. The walk has to
    /// cross the clique and then reach the far end of the path.
    Clique,
    /// The free end of the path.
    PathEnd,
    /// Every vertex, reporting the worst mean.
    Scan,
}

impl LollipopStart {
    fn policy(self, m: usize) -> StartPolicy {
        match self {
            LollipopStart::Clique => StartPolicy::Fixed(0),
            LollipopStart::PathEnd => StartPolicy::Fixed(2 * m - 1),
            LollipopStart::Scan => StartPolicy::WorstOverStarts,
        }
    }
}

/// The six lollipop walk variants: uniform, MDLR and node2vec(p, q), each
/// with and without the non-backtracking rule.
pub fn fig3_walks(p: f64, q: f64) -> Vec<WalkConfig> {
    let uniform = WalkConfig::new(0, Conductance::Constant);
    let mdlr = WalkConfig::new(0, Conductance::Mdlr);
    let n2v = uniform.clone().node2vec(p, q);
    vec![
        uniform.clone(),
        uniform.non_backtracking(),
        mdlr.clone(),
        mdlr.non_backtracking(),
        n2v.clone(),
        n2v.non_backtracking(),
    ]
}

#[derive(Debug, Clone)]
pub struct Fig3Params {
    /// Clique sizes `m`; the lollipop has `2m` vertices.
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub start: LollipopStart,
    pub node2vec_p: f64,
    pub node2vec_q: f64,
    pub modes: Vec<CoverMode>,
    pub budget: u64,
}

impl Default for Fig3Params {
    fn default() -> Self {
        Fig3Params {
            sizes: vec![10, 20, 40],
            trials: 2000,
            seed: 0,
            start: LollipopStart::Clique,
            node2vec_p: 1.0,
            node2vec_q: 2.0,
            modes: vec![CoverMode::Vertex, CoverMode::Edge],
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Cover times of every walk variant on lollipops of the given sizes.
pub fn experiment_fig3(params: &Fig3Params) -> Result<Vec<CoverRow>> {
    let mut rows = Vec::new();
    for &m in &params.sizes {
        let g = gen_lollipop(m)?;
        let graph = format!("lollipop-{}", 2 * m);
        for walk in fig3_walks(params.node2vec_p, params.node2vec_q) {
            let label = walk.label();
            for &mode in &params.modes {
                let seed = derive_seed(params.seed, &format!("{graph}/{label}/{mode}"));
                let stats = estimate_cover_time_with_budget(
                    &g,
                    &walk.clone().seed(seed),
                    mode,
                    params.trials,
                    params.start.policy(m),
                    params.budget,
                )?;
                rows.push(CoverRow {
                    graph: graph.clone(),
                    walk: label.clone(),
                    stats,
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone)]
pub struct Sr16Params {
    pub trials: usize,
    pub seed: u64,
    pub modes: Vec<CoverMode>,
}

impl Default for Sr16Params {
    fn default() -> Self {
        Sr16Params {
            trials: 10_000,
            seed: 0,
            modes: vec![CoverMode::Vertex, CoverMode::Edge, CoverMode::Arc],
        }
    }
}

pub fn sr16_walk() -> WalkConfig {
    WalkConfig::new(0, Conductance::Mdlr).non_backtracking()
}

/// Cover times of the MDLR non-backtracking walk on the 4x4 rook's graph
/// and the Shrikhande graph from uniformly random starts, plus their
/// average (`sr16` rows).
pub fn experiment_sr16(params: &Sr16Params) -> Result<Vec<CoverRow>> {
    let graphs = [("rook4x4", gen_rook4x4()), ("shrikhande", gen_shrikhande())];
    let walk = sr16_walk();
    let label = walk.label();
    let mut rows = Vec::new();
    for &mode in &params.modes {
        let mut per_graph = Vec::new();
        for (name, g) in &graphs {
            let seed = derive_seed(params.seed, &format!("{name}/{label}/{mode}"));
            let stats = estimate_cover_time_with_budget(
                g,
                &walk.clone().seed(seed),
                mode,
                params.trials,
                StartPolicy::Uniform,
                DEFAULT_BUDGET,
            )?;
            per_graph.push(stats.clone());
            rows.push(CoverRow {
                graph: name.to_string(),
                walk: label.clone(),
                stats,
            });
        }
        let (a, b) = (&per_graph[0], &per_graph[1]);
        rows.push(CoverRow {
            graph: "sr16".into(),
            walk: label.clone(),
            stats: CoverStats {
                mean: 0.5 * (a.mean + b.mean),
                std_err: 0.5 * (a.std_err.powi(2) + b.std_err.powi(2)).sqrt(),
                trials: a.trials + b.trials,
                censored: a.censored + b.censored,
                mode,
                start_policy: StartPolicy::Uniform,
                start: None,
            },
        });
    }
    Ok(rows)
}

/// One `(l, u, v)` comparison of Monte Carlo visit frequency with the exact
/// averaged-power entry.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingRow {
    pub l: usize,
    pub u: usize,
    pub v: usize,
    pub mc_estimate: f64,
    pub exact_value: f64,
    pub abs_err: f64,
    /// Binomial standard deviation of the estimate at the exact value.
    pub sigma: f64,
}

pub fn mixing_csv(rows: &[MixingRow]) -> String {
    let mut out = String::from(MIXING_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{:.8},{:.8},{:.8}",
            r.l, r.u, r.v, r.mc_estimate, r.exact_value, r.abs_err
        );
    }
    out
}

/// Visit frequencies of the first-order walk `config` (its length is
/// ignored) for every `(u, v)` and every length in `lengths`.
pub fn experiment_mixing(
    g: &Graph,
    config: &WalkConfig,
    lengths: &[usize],
    trials: usize,
) -> Result<Vec<MixingRow>> {
    if lengths.is_empty() {
        return Err(Error::InvalidConfig("at least one walk length is required".into()));
    }
    let p = transition_matrix(g, &config.conductance)?;
    let mut rows = Vec::new();
    for &l in lengths {
        for u in 0..g.n() {
            let seed = derive_seed(config.seed, &format!("l={l}/u={u}"));
            let cfg = WalkConfig {
                length: l,
                seed,
                ..config.clone()
            };
            let mc = monte_carlo_visit_frequencies(g, &cfg, u, trials)?;
            let exact = averaged_row(&p, u, l)?;
            for v in 0..g.n() {
                rows.push(MixingRow {
                    l,
                    u,
                    v,
                    mc_estimate: mc[v],
                    exact_value: exact[v],
                    abs_err: (mc[v] - exact[v]).abs(),
                    sigma: bernoulli_sigma(exact[v], trials),
                });
            }
        }
    }
    Ok(rows)
}
