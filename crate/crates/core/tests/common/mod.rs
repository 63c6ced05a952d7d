#![allow(dead_code)]

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use walklab::generators::*;
use walklab::{Conductance, Graph, Permutation, Restart, WalkConfig};

/// Random connected graph on `n` vertices with density drawn from the seed.
pub fn random_graph(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = [0.25, 0.5, 0.8][(seed % 3) as usize];
    gen_random_connected(n, p, &mut rng).unwrap()
}

pub fn random_permutation(n: usize, seed: u64) -> Permutation {
    Permutation::random(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn family_graph(which: usize) -> Graph {
    match which % 9 {
        0 => gen_clique(5).unwrap(),
        1 => gen_path(7).unwrap(),
        2 => gen_cycle(6).unwrap(),
        3 => gen_star(5).unwrap(),
        4 => gen_barbell(4).unwrap(),
        5 => gen_lollipop(4).unwrap(),
        6 => gen_csl(11, 3).unwrap(),
        7 => gen_rook4x4(),
        _ => gen_shrikhande(),
    }
}

/// Random connected graphs with `lo..=hi` vertices, plus the named families
/// when `hi` allows.
pub fn graphs(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    let random = (lo..=hi, any::<u64>()).prop_map(|(n, s)| random_graph(n, s));
    let families = (0usize..9)
        .prop_map(family_graph)
        .prop_filter("too large", move |g| g.n() <= hi && g.n() >= lo);
    prop_oneof![3 => random, 1 => families]
}

pub fn conductances() -> impl Strategy<Value = Conductance> {
    prop_oneof![
        Just(Conductance::Constant),
        Just(Conductance::Mdlr),
        Just(Conductance::degree_rule(|du, dv| (du + dv) as f64)),
    ]
}

/// Any valid walk configuration of the given length range.
pub fn configs(lengths: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = WalkConfig> {
    (
        lengths,
        conductances(),
        0usize..5,
        prop_oneof![
            Just(Restart::None),
            (0.05f64..0.95).prop_map(Restart::Prob),
            (2usize..6).prop_map(Restart::Period),
        ],
        (0.25f64..4.0, 0.25f64..4.0),
        any::<u64>(),
    )
        .prop_map(|(l, c, second, restart, (p, q), seed)| {
            let base = WalkConfig::new(l, c).restart(restart).seed(seed);
            match second {
                0 => base,
                1 => base.non_backtracking(),
                2 => base.node2vec(p, q),
                3 => base.node2vec(p, q).non_backtracking(),
                _ => base.node2vec(2.0, 1.0),
            }
        })
}
