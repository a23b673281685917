//! Test corpus: small connected graphs, named fixtures and seeded random
//! multigraphs.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fixtures;
use crate::graph::Graph;

#[derive(Debug, Clone)]
pub struct CorpusGraph {
    pub name: String,
    pub graph: Graph,
}

/// Edge cap for random multigraphs.
pub const RANDOM_EDGE_CAP: usize = 12;

/// One representative of every isomorphism class of connected simple graphs
/// on `vertices` vertices.
pub fn connected_simple_graphs(vertices: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..vertices)
        .flat_map(|u| (u + 1..vertices).map(move |v| (u, v)))
        .collect();
    let perms = permutations(vertices);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 1u32..1 << pairs.len() {
        let edges: Vec<(usize, usize)> = (0..pairs.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| pairs[i])
            .collect();
        let g = Graph::new(vertices, edges.clone()).expect("simple edges");
        if !g.is_connected() {
            continue;
        }
        let canonical = perms
            .iter()
            .map(|p| {
                let mut relabelled: Vec<(usize, usize)> = edges
                    .iter()
                    .map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v])))
                    .collect();
                relabelled.sort();
                relabelled
            })
            .min()
            .expect("at least one permutation");
        if seen.insert(canonical) {
            out.push(g);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    permutations(n - 1)
        .into_iter()
        .flat_map(|p| {
            (0..n).map(move |pos| {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                q
            })
        })
        .collect()
}

/// Connected multigraphs on 3..=7 vertices with at most
/// [`RANDOM_EDGE_CAP`] edges: a random spanning tree plus random extra
/// edges, parallels allowed.
pub fn random_multigraphs(seed: u64, count: usize) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(3..=7);
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut edges: Vec<(usize, usize)> = (1..n)
                .map(|i| (order[rng.gen_range(0..i)], order[i]))
                .collect();
            let extra = rng.gen_range(0..=RANDOM_EDGE_CAP - (n - 1));
            for _ in 0..extra {
                let u = rng.gen_range(0..n);
                let v = (u + rng.gen_range(1..n)) % n;
                edges.push((u, v));
            }
            edges.shuffle(&mut rng);
            Graph::new(n, edges).expect("no self-loops")
        })
        .collect()
}

/// Connected graphs on 2..=5 vertices, the named fixtures and `count`
/// random multigraphs from `seed`.
pub fn corpus(seed: u64, count: usize) -> Vec<CorpusGraph> {
    let mut out = Vec::new();
    for n in 2..=5 {
        for (i, graph) in connected_simple_graphs(n).into_iter().enumerate() {
            out.push(CorpusGraph {
                name: format!("simple{n}-{i}"),
                graph,
            });
        }
    }
    for (name, graph) in fixtures::all() {
        out.push(CorpusGraph {
            name: name.to_string(),
            graph,
        });
    }
    for (i, graph) in random_multigraphs(seed, count).into_iter().enumerate() {
        out.push(CorpusGraph {
            name: format!("random{seed}-{i}"),
            graph,
        });
    }
    out
}
