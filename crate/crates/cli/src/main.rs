mod config;

use std::collections::HashSet;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use walklab::cover::{
    estimate_cover_time_with_budget, local_cover_time, CoverMode, StartPolicy, DEFAULT_BUDGET,
};
use walklab::experiments::{
    cover_csv, experiment_fig3, experiment_mixing, experiment_sr16, mixing_csv, CoverRow,
    Fig3Params, LollipopStart, Sr16Params, COVER_CSV_HEADER, MIXING_CSV_HEADER,
};
use walklab::generators::*;
use walklab::invariance::InvarianceSuite;
use walklab::reconstruct::{check_reconstruction, decode};
use walklab::record::{record, record_attributed, AttributeProvider, RecordTemplate};
use walklab::{Conductance, Error, Graph, Record, Restart, Scheme, Walk, WalkConfig, WalkEngine};

const COVER_SCHEMA: &str = "Output: CSV with header `graph,walk,mode,mean,std_err,trials,censored`. \
`mean` and `std_err` are in steps over uncensored trials; `censored` counts trials that hit the step budget.";
const MIXING_SCHEMA: &str = "Output: CSV with header `l,u,v,mc_estimate,exact_value,abs_err`. \
`mc_estimate` is the mean fraction of a length-l walk from u spent at v; `exact_value` is entry (u, v) of (1/(l+1)) sum_t P^t.";
const RECONSTRUCT_SCHEMA: &str = "Output: CSV with header `graph,walk,scheme,trials,covering,reconstructed,coverage_fraction`. \
Exits with status 1 if a covering walk fails to reconstruct the graph.";

#[derive(Parser)]
#[command(name = "walklab", version, about = "Random walks on graphs, invariant walk records, cover times and mixing checks")]
struct Cli {
    /// Worker threads for trial-parallel work. Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run file of `key = value` lines using the subcommand's long flag
    /// names. Flags on the command line take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Clique,
    Path,
    Cycle,
    Star,
    Barbell,
    Lollipop,
    Csl,
    Rook4x4,
    Shrikhande,
    StarPlusEdge,
    Random,
}

#[derive(Args)]
struct GraphArgs {
    /// Edge-list file: `n m` header line, then one `u v` line per edge.
    #[arg(long, value_name = "FILE", conflicts_with = "family")]
    graph: Option<PathBuf>,
    /// Built-in graph family.
    #[arg(long, value_enum)]
    family: Option<Family>,
    /// Clique or star size (clique, star, barbell).
    #[arg(long)]
    k: Option<usize>,
    /// Vertex count (path, cycle, csl, random).
    #[arg(long)]
    n: Option<usize>,
    /// Clique size of a lollipop; the graph has 2m vertices.
    #[arg(long)]
    m: Option<usize>,
    /// Skip length (csl).
    #[arg(long)]
    s: Option<usize>,
    /// Edge probability (random).
    #[arg(long, default_value_t = 0.5)]
    edge_prob: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConductanceArg {
    Uniform,
    Mdlr,
}

#[derive(Args)]
struct WalkArgs {
    #[arg(long, value_enum, default_value = "uniform")]
    conductance: ConductanceArg,
    /// Non-backtracking: never return to the previous vertex unless forced.
    #[arg(long)]
    nb: bool,
    /// node2vec return parameter (requires --node2vec-q).
    #[arg(long, requires = "node2vec_q")]
    node2vec_p: Option<f64>,
    /// node2vec in-out parameter (requires --node2vec-p).
    #[arg(long, requires = "node2vec_p")]
    node2vec_q: Option<f64>,
    /// Restart at the start vertex with this probability per step.
    #[arg(long, conflicts_with = "restart_period")]
    restart_prob: Option<f64>,
    /// Restart at the start vertex every this many steps.
    #[arg(long)]
    restart_period: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Anonymized,
    Named,
    Attributed,
}

#[derive(Clone, Copy, ValueEnum)]
enum StartArg {
    Clique,
    PathEnd,
    Scan,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a graph as an edge list.
    Gen {
        #[command(flatten)]
        graph: GraphArgs,
        /// Seed for the random family.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample walks, one per line as comma-separated vertices with restart
    /// steps suffixed by `R`.
    Walk {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long)]
        length: usize,
        /// Start vertex; uniform when omitted.
        #[arg(long)]
        start: Option<usize>,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Record walks (read from --walks, or sampled) as text, one per line.
    #[command(after_help = "Attribute file: one `vertex<TAB>title[<TAB>detail[<TAB>label]]` line per vertex. \
Direction file: one `a b` line per directed edge a -> b.")]
    Record {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value = "named")]
        scheme: SchemeArg,
        /// Walks in the `walk` output format; sampled when omitted.
        #[arg(long, value_name = "FILE")]
        walks: Option<PathBuf>,
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long)]
        length: Option<usize>,
        #[arg(long)]
        start: Option<usize>,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Required when sampling.
        #[arg(long)]
        seed: Option<u64>,
        /// Vertex attributes for the attributed scheme.
        #[arg(long, value_name = "FILE")]
        attributes: Option<PathBuf>,
        /// Edge directions for the attributed scheme.
        #[arg(long, value_name = "FILE")]
        directions: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode a record into the edge list of the graph it describes.
    Decode {
        /// Record text; read from standard input when omitted.
        #[arg(long)]
        record: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate global or local cover times.
    #[command(after_help = COVER_SCHEMA)]
    Cover {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long, value_enum, default_value = "vertex")]
        mode: ModeArg,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Fixed start vertex (the center for local cover).
        #[arg(long, conflicts_with_all = ["worst_starts", "uniform_start"])]
        start: Option<usize>,
        /// Run every start and report the worst mean.
        #[arg(long, conflicts_with = "uniform_start")]
        worst_starts: bool,
        /// Draw the start uniformly per trial.
        #[arg(long)]
        uniform_start: bool,
        /// Local cover of the ball of this radius around --start; needs a
        /// restart rule.
        #[arg(long, requires = "start")]
        radius: Option<usize>,
        /// Steps after which a trial is censored.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that covering walks decode to the source graph.
    #[command(name = "reconstruct-test", after_help = RECONSTRUCT_SCHEMA)]
    ReconstructTest {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, value_enum, default_value = "named")]
        scheme: SchemeArg,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact invariance of walk and record distributions under relabeling.
    #[command(after_help = "Output: a summary report. Exits with status 1 on any failed check.")]
    Invariance {
        /// Largest graph size.
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        /// Sizes up to this are enumerated exhaustively; larger ones sampled.
        #[arg(long, default_value_t = 4)]
        exhaustive_n: usize,
        /// Random graphs per sampled size.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Walk length.
        #[arg(long, default_value_t = 4)]
        max_l: usize,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long)]
        seed: u64,
    },
    /// Monte Carlo visit frequencies against exact averaged transition
    /// powers.
    #[command(after_help = MIXING_SCHEMA)]
    Mixing {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value = "uniform")]
        conductance: ConductanceArg,
        #[arg(long, value_delimiter = ',', default_value = "5,20")]
        lengths: Vec<usize>,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cover times of uniform, MDLR and node2vec walks, with and without
    /// non-backtracking, on lollipops.
    #[command(after_help = COVER_SCHEMA)]
    Fig3 {
        /// Lollipop clique sizes m (graphs have 2m vertices).
        #[arg(long, value_delimiter = ',', default_value = "10,20,40")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        /// Start vertex: a clique vertex (the worst start), the path end, or
        /// a scan over all starts.
        #[arg(long, value_enum, default_value = "clique")]
        start: StartArg,
        /// Same as `--start scan`.
        #[arg(long)]
        worst_starts: bool,
        #[arg(long, default_value_t = 1.0)]
        node2vec_p: f64,
        #[arg(long, default_value_t = 2.0)]
        node2vec_q: f64,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "vertex,edge")]
        modes: Vec<ModeArg>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cover times of the MDLR non-backtracking walk on the 4x4 rook's graph
    /// and the Shrikhande graph, from uniform starts.
    #[command(after_help = COVER_SCHEMA)]
    Sr16 {
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "vertex,edge,arc")]
        modes: Vec<ModeArg>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Vertex,
    Edge,
    Arc,
}

impl From<ModeArg> for CoverMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Vertex => CoverMode::Vertex,
            ModeArg::Edge => CoverMode::Edge,
            ModeArg::Arc => CoverMode::Arc,
        }
    }
}

enum Failure {
    Usage(anyhow::Error),
    Assertion(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(Error::ReconstructionFailed { .. }) => Failure::Assertion(format!("{e:#}")),
            _ => Failure::Usage(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

type CmdResult = Result<(), Failure>;

impl GraphArgs {
    fn build(&self, seed: Option<u64>) -> anyhow::Result<(Graph, String)> {
        if let Some(path) = &self.graph {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let g = Graph::parse_edge_list(&text).with_context(|| format!("in {}", path.display()))?;
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "graph".into());
            return Ok((g, name));
        }
        let family = self
            .family
            .ok_or_else(|| anyhow!("give either --graph FILE or --family NAME"))?;
        let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| anyhow!("this family needs --{flag}"));
        Ok(match family {
            Family::Clique => {
                let k = need(self.k, "k")?;
                (gen_clique(k)?, format!("clique-{k}"))
            }
            Family::Path => {
                let n = need(self.n, "n")?;
                (gen_path(n)?, format!("path-{n}"))
            }
            Family::Cycle => {
                let n = need(self.n, "n")?;
                (gen_cycle(n)?, format!("cycle-{n}"))
            }
            Family::Star => {
                let k = need(self.k, "k")?;
                (gen_star(k)?, format!("star-{k}"))
            }
            Family::Barbell => {
                let k = need(self.k, "k")?;
                (gen_barbell(k)?, format!("barbell-{k}"))
            }
            Family::Lollipop => {
                let m = need(self.m, "m")?;
                (gen_lollipop(m)?, format!("lollipop-{}", 2 * m))
            }
            Family::Csl => {
                let (n, s) = (need(self.n, "n")?, need(self.s, "s")?);
                (gen_csl(n, s)?, format!("csl-{n}-{s}"))
            }
            Family::Rook4x4 => (gen_rook4x4(), "rook4x4".into()),
            Family::Shrikhande => (gen_shrikhande(), "shrikhande".into()),
            Family::StarPlusEdge => (gen_star_plus_edge(), "star-plus-edge".into()),
            Family::Random => {
                use rand::SeedableRng;
                let n = need(self.n, "n")?;
                let seed = seed.ok_or_else(|| anyhow!("the random family needs --seed"))?;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                (
                    gen_random_connected(n, self.edge_prob, &mut rng)?,
                    format!("random-{n}"),
                )
            }
        })
    }
}

impl WalkArgs {
    fn config(&self, length: usize, seed: u64) -> WalkConfig {
        let c = match self.conductance {
            ConductanceArg::Uniform => Conductance::Constant,
            ConductanceArg::Mdlr => Conductance::Mdlr,
        };
        let mut cfg = WalkConfig::new(length, c).seed(seed);
        if let (Some(p), Some(q)) = (self.node2vec_p, self.node2vec_q) {
            cfg = cfg.node2vec(p, q);
        }
        if self.nb {
            cfg = cfg.non_backtracking();
        }
        if let Some(a) = self.restart_prob {
            cfg = cfg.restart(Restart::Prob(a));
        }
        if let Some(k) = self.restart_period {
            cfg = cfg.restart(Restart::Period(k));
        }
        cfg
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn read_attributes(path: &Path) -> anyhow::Result<AttributeProvider> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut attrs = AttributeProvider::default();
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let mut cols = line.split('\t');
        let v: usize = cols
            .next()
            .unwrap_or("")
            .trim()
            .parse()
            .with_context(|| format!("{}:{}: bad vertex id", path.display(), i + 1))?;
        let title = cols
            .next()
            .with_context(|| format!("{}:{}: missing title", path.display(), i + 1))?;
        attrs.vertex_text.insert(v, title.to_string());
        if let Some(d) = cols.next().filter(|d| !d.is_empty()) {
            attrs.vertex_detail.insert(v, d.to_string());
        }
        if let Some(y) = cols.next().filter(|y| !y.is_empty()) {
            attrs.labels.insert(v, y.to_string());
        }
    }
    Ok(attrs)
}

fn read_directions(path: &Path) -> anyhow::Result<HashSet<(usize, usize)>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let mut it = l.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
                _ => bail!("{}:{}: expected `a b`", path.display(), i + 1),
            }
        })
        .collect()
}

fn run(cli: Cli) -> CmdResult {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Failure::Usage(anyhow!("--threads must be at least 1")));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::Usage(e.into()))?;
    }
    match cli.command {
        Cmd::Gen { graph, seed, out } => {
            let (g, _) = graph.build(seed)?;
            emit(&out, &g.to_edge_list())?;
        }
        Cmd::Walk {
            graph,
            walk,
            length,
            start,
            count,
            seed,
            out,
        } => {
            let (g, _) = graph.build(Some(seed))?;
            let engine = WalkEngine::new(&g, &walk.config(length, seed))?;
            let mut text = String::new();
            for i in 0..count {
                text.push_str(&engine.sample(start, i as u64)?.to_string());
                text.push('\n');
            }
            emit(&out, &text)?;
        }
        Cmd::Record {
            graph,
            scheme,
            walks,
            walk,
            length,
            start,
            count,
            seed,
            attributes,
            directions,
            out,
        } => {
            let (g, _) = graph.build(seed)?;
            let walks: Vec<Walk> = match walks {
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    let mut ws = Vec::new();
                    for line in text.lines().filter(|l| !l.trim().is_empty()) {
                        let w: Walk = line.parse()?;
                        w.check(&g, walklab::SecondOrder::None)
                            .map_err(|e| anyhow!("walk `{line}` is not valid on this graph: {e}"))?;
                        ws.push(w);
                    }
                    ws
                }
                None => {
                    let length = length.ok_or_else(|| anyhow!("give --walks FILE or --length to sample"))?;
                    let seed = seed.ok_or_else(|| anyhow!("sampling walks needs --seed"))?;
                    let engine = WalkEngine::new(&g, &walk.config(length, seed))?;
                    (0..count)
                        .map(|i| engine.sample(start, i as u64))
                        .collect::<Result<_, _>>()?
                }
            };
            let mut text = String::new();
            match scheme {
                SchemeArg::Attributed => {
                    let mut attrs = match &attributes {
                        Some(p) => read_attributes(p)?,
                        None => return Err(Failure::Usage(anyhow!("the attributed scheme needs --attributes"))),
                    };
                    if let Some(p) = &directions {
                        attrs.edge_direction = Some(read_directions(p)?);
                    }
                    let tpl = RecordTemplate::default();
                    for w in &walks {
                        text.push_str(&record_attributed(w, &g, &attrs, &tpl)?);
                        text.push('\n');
                    }
                }
                s => {
                    let scheme = if matches!(s, SchemeArg::Named) {
                        Scheme::NamedNeighbors
                    } else {
                        Scheme::Anonymized
                    };
                    for w in &walks {
                        text.push_str(&record(w, &g, scheme).to_string());
                        text.push('\n');
                    }
                }
            }
            emit(&out, &text)?;
        }
        Cmd::Decode { record, out } => {
            let text = match record {
                Some(r) => r,
                None => {
                    let mut s = String::new();
                    io::stdin().read_to_string(&mut s).context("reading standard input")?;
                    s
                }
            };
            let rec: Record = text.trim().parse()?;
            emit(&out, &decode(&rec).graph.to_edge_list())?;
        }
        Cmd::Cover {
            graph,
            walk,
            mode,
            trials,
            start,
            worst_starts,
            uniform_start,
            radius,
            budget,
            seed,
            out,
        } => {
            let (g, name) = graph.build(Some(seed))?;
            let cfg = walk.config(0, seed);
            let mode = CoverMode::from(mode);
            let stats = match radius {
                Some(r) => {
                    if cfg.restart == Restart::None {
                        eprintln!("note: local cover without restarts may not be finite; see the censored column");
                    }
                    local_cover_time(&g, start.expect("clap requires --start"), r, &cfg, mode, trials, budget)?
                }
                None => {
                    let policy = match (start, worst_starts, uniform_start) {
                        (Some(v), _, _) => StartPolicy::Fixed(v),
                        (None, true, _) => StartPolicy::WorstOverStarts,
                        (None, false, true) => StartPolicy::Uniform,
                        (None, false, false) => {
                            return Err(Failure::Usage(anyhow!(
                                "choose a start: --start V, --worst-starts or --uniform-start"
                            )))
                        }
                    };
                    estimate_cover_time_with_budget(&g, &cfg, mode, trials, policy, budget)?
                }
            };
            let graph = match radius {
                Some(r) => format!("{name}-ball-{}-{r}", start.unwrap_or(0)),
                None => name,
            };
            let row = CoverRow {
                graph,
                walk: cfg.label(),
                stats,
            };
            emit(&out, &cover_csv(&[row]))?;
        }
        Cmd::ReconstructTest {
            graph,
            walk,
            length,
            trials,
            scheme,
            seed,
            out,
        } => {
            let (g, name) = graph.build(Some(seed))?;
            let (scheme, label) = match scheme {
                SchemeArg::Anonymized => (Scheme::Anonymized, "anonymized"),
                SchemeArg::Named => (Scheme::NamedNeighbors, "named"),
                SchemeArg::Attributed => {
                    return Err(Failure::Usage(anyhow!(
                        "reconstruct-test supports the anonymized and named schemes"
                    )))
                }
            };
            let cfg = walk.config(length, seed);
            let r = check_reconstruction(&g, &cfg, trials, scheme)?;
            let text = format!(
                "graph,walk,scheme,trials,covering,reconstructed,coverage_fraction\n{name},{},{label},{},{},{},{:.6}\n",
                cfg.label(),
                r.trials,
                r.covering,
                r.reconstructed,
                r.coverage_fraction()
            );
            emit(&out, &text)?;
        }
        Cmd::Invariance {
            max_n,
            exhaustive_n,
            samples,
            max_l,
            tolerance,
            seed,
        } => {
            if exhaustive_n > 6 || max_n > 12 {
                return Err(Failure::Usage(anyhow!(
                    "--exhaustive-n is limited to 6 and --max-n to 12"
                )));
            }
            let suite = InvarianceSuite {
                exhaustive_up_to: exhaustive_n.min(max_n),
                sampled_sizes: (exhaustive_n + 1..=max_n).collect(),
                samples_per_size: samples,
                length: max_l,
                tolerance,
                seed,
            };
            let r = suite.run()?;
            println!(
                "{} graphs, {} cases, {} walks; max trajectory diff {:.3e}, max record diff {:.3e}, {} mismatched records",
                r.graphs, r.cases, r.walks, r.max_trajectory_diff, r.max_record_diff, r.record_mismatches
            );
            if !r.passed() {
                for f in &r.failures {
                    println!("FAIL {f}");
                }
                return Err(Failure::Assertion(format!("{} invariance checks failed", r.failures.len())));
            }
            println!("all distribution-equality checks passed");
        }
        Cmd::Mixing {
            graph,
            conductance,
            lengths,
            trials,
            seed,
            out,
        } => {
            let (g, _) = graph.build(Some(seed))?;
            let walk = WalkArgs {
                conductance,
                nb: false,
                node2vec_p: None,
                node2vec_q: None,
                restart_prob: None,
                restart_period: None,
            };
            let rows = experiment_mixing(&g, &walk.config(0, seed), &lengths, trials)?;
            emit(&out, &mixing_csv(&rows))?;
        }
        Cmd::Fig3 {
            sizes,
            trials,
            start,
            worst_starts,
            node2vec_p,
            node2vec_q,
            modes,
            seed,
            out,
        } => {
            let start = match (worst_starts, start) {
                (true, _) | (_, StartArg::Scan) => LollipopStart::Scan,
                (false, StartArg::Clique) => LollipopStart::Clique,
                (false, StartArg::PathEnd) => LollipopStart::PathEnd,
            };
            let params = Fig3Params {
                sizes,
                trials,
                seed,
                start,
                node2vec_p,
                node2vec_q,
                modes: modes.into_iter().map(CoverMode::from).collect(),
                budget: DEFAULT_BUDGET,
            };
            emit(&out, &cover_csv(&experiment_fig3(&params)?))?;
        }
        Cmd::Sr16 {
            trials,
            modes,
            seed,
            out,
        } => {
            let params = Sr16Params {
                trials,
                seed,
                modes: modes.into_iter().map(CoverMode::from).collect(),
            };
            emit(&out, &cover_csv(&experiment_sr16(&params)?))?;
        }
    }
    Ok(())
}

/// Position of the subcommand name in `argv`, skipping global options.
fn subcommand_index(argv: &[String]) -> Option<usize> {
    let mut i = 1;
    while i < argv.len() {
        let a = argv[i].as_str();
        if a == "--threads" || a == "--config" {
            i += 2;
        } else if a.starts_with('-') {
            i += 1;
        } else {
            return Some(i);
        }
    }
    None
}

/// Splices run-file entries in front of the subcommand's own flags.
fn expand_config(argv: Vec<String>) -> anyhow::Result<Vec<String>> {
    let mut path = None;
    let mut rest = Vec::with_capacity(argv.len());
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            path = Some(it.next().ok_or_else(|| anyhow!("--config needs a file"))?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let entries = config::load(Path::new(&path))?;
    let Some(idx) = subcommand_index(&rest) else {
        bail!("--config needs a subcommand");
    };
    // List-valued flags append rather than override, so drop file entries
    // the command line sets itself.
    let given: HashSet<&str> = rest[idx + 1..]
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a))
        .collect();
    let entries: Vec<_> = entries
        .into_iter()
        .filter(|e| !given.contains(e.key.as_str()))
        .collect();
    let flags = config::to_flags(&command(), &rest[idx], &entries)?;
    rest.splice(idx + 1..idx + 1, flags);
    Ok(rest)
}

fn command() -> clap::Command {
    Cli::command()
        .args_override_self(true)
        .mut_subcommands(|s| s.args_override_self(true))
        .after_help(format!(
            "Cover-time CSV columns: {COVER_CSV_HEADER}\nMixing CSV columns: {MIXING_CSV_HEADER}"
        ))
}

fn main() -> ExitCode {
    let argv = match expand_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let matches = match command().try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => e.exit(),
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Assertion(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
    }
}
