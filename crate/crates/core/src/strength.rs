//! Cut-rates, the graph cut-rate `opt` (the reciprocal of the strength) and
//! the prime-set subroutine.
//!
//! `opt_w = max over E' of (C(E') - C) / w(E')` is computed by Dinkelbach
//! iteration on the ratio. For a fixed ratio `lambda` the inner problem is
//! the network attack problem
//!
//! ```text
//! min over vertex partitions P:  lambda * w(delta(P)) - |P|
//! ```
//!
//! which equals `k*|V| - max { x(E) : 0 <= x <= W, x(E[S]) <= k(|S|-1) }`
//! after scaling to integers `W = lambda*w*scale`, `k = scale`. The maximum
//! is reached greedily; each greedy step and each tight-set query is one
//! minimum cut.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::graph::{component_count, EdgeSubset, Graph, UnionFind, WeightClasses};
use crate::rational::{from_usize, Rational, Scaled};

/// Strictly positive weight per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMap(Vec<Rational>);

impl WeightMap {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if let Some(e) = weights.iter().position(|w| !w.is_positive()) {
            return Err(Error::InvalidDistribution(format!(
                "weight of edge {e} must be positive"
            )));
        }
        Ok(WeightMap(weights))
    }

    pub fn unit(edge_count: usize) -> Self {
        WeightMap(vec![Rational::one(); edge_count])
    }

    pub fn weight(&self, edge: usize) -> &Rational {
        &self.0[edge]
    }

    pub fn total(&self, s: &EdgeSubset) -> Rational {
        s.iter().map(|&e| &self.0[e]).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrengthResult {
    pub opt: Rational,
    pub argmax: EdgeSubset,
}

/// `(C(s) - C) / w(s)`, or zero for a single vertex or an empty set.
pub fn cut_rate(g: &Graph, w: &WeightMap, s: &EdgeSubset) -> Rational {
    if g.vertex_count() <= 1 || s.is_empty() {
        return Rational::zero();
    }
    let gain = component_count(g, s) - component_count(g, &EdgeSubset::new());
    from_usize(gain) / w.total(s)
}

/// Unit-weight cut-rate.
pub fn unit_cut_rate(g: &Graph, s: &EdgeSubset) -> Rational {
    if g.vertex_count() <= 1 || s.is_empty() {
        return Rational::zero();
    }
    let gain = component_count(g, s) - component_count(g, &EdgeSubset::new());
    Rational::new(gain.into(), s.len().into())
}

/// Cut-rate of weight class `class` (0-based, heaviest first): components
/// gained by removing it after all heavier classes, per edge.
pub fn class_cut_rate(g: &Graph, wc: &WeightClasses, class: usize) -> Result<Rational> {
    if class >= wc.len() {
        return Err(Error::OutOfRange {
            index: class,
            len: wc.len(),
        });
    }
    let before: EdgeSubset = wc.classes[..class]
        .iter()
        .flat_map(|(_, s)| s.iter().copied())
        .collect();
    let current = &wc.classes[class].1;
    let after = before.union(current);
    let gain = component_count(g, &after) - component_count(g, &before);
    Ok(Rational::new(gain.into(), current.len().into()))
}

/// Exact `opt_w` of a connected graph with at least two vertices, with a
/// subset attaining it.
pub fn strength_opt(g: &Graph, w: &WeightMap) -> Result<StrengthResult> {
    if g.vertex_count() < 2 {
        return Err(Error::TooFewVertices {
            required: 2,
            found: g.vertex_count(),
        });
    }
    if w.len() != g.edge_count() {
        return Err(Error::InvalidDistribution(format!(
            "weight map has {} entries for {} edges",
            w.len(),
            g.edge_count()
        )));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let piece = Piece::whole(g);
    let weights: Vec<Rational> = piece.ids.iter().map(|&e| w.weight(e).clone()).collect();
    let (opt, local) = piece.max_cut_rate(&weights)?;
    Ok(StrengthResult {
        opt,
        argmax: piece.to_global(&local),
    })
}

/// A prime set: an inclusion-minimal edge set whose cut-rate is `opt`.
///
/// Each edge in ascending id order is tentatively given weight 2; the change
/// is kept when the weighted cut-rate still equals `opt`. Edges left at
/// weight 1 form the prime set. A disconnected graph is handled through the
/// component of largest cut-rate (lowest edge id on ties). An edgeless graph
/// yields `(0, {})`.
pub fn prime_set(g: &Graph) -> Result<(Rational, EdgeSubset)> {
    prime_set_where(g, |_| true)
}

/// `prime_set` on the spanning subgraph `(V, {e : keep(e)})`, reporting
/// edges by their ids in `g`.
pub(crate) fn prime_set_where(
    g: &Graph,
    keep: impl Fn(usize) -> bool,
) -> Result<(Rational, EdgeSubset)> {
    let pieces = Piece::components(g, keep);
    let mut best: Option<(Rational, Vec<usize>, &Piece)> = None;
    for piece in &pieces {
        let unit = vec![Rational::one(); piece.edges.len()];
        let (opt, witness) = piece.max_cut_rate(&unit)?;
        if best.as_ref().is_none_or(|(b, _, _)| opt > *b) {
            best = Some((opt, witness, piece));
        }
    }
    let Some((opt, mut witness, piece)) = best else {
        return Ok((Rational::zero(), EdgeSubset::new()));
    };

    let two = Rational::from_integer(BigInt::from(2));
    let mut weights = vec![Rational::one(); piece.edges.len()];
    for local in 0..piece.edges.len() {
        weights[local] = two.clone();
        if witness.binary_search(&local).is_ok() {
            let (candidate, new_witness) = piece.max_cut_rate(&weights)?;
            if candidate == opt {
                witness = new_witness;
            } else {
                weights[local] = Rational::one();
            }
        }
        // otherwise the current witness still attains opt under the new weights
    }
    let prime: Vec<usize> = (0..piece.edges.len())
        .filter(|&l| weights[l].is_one())
        .collect();
    Ok((opt, piece.to_global(&prime)))
}

/// A connected piece of a graph with local vertex and edge numbering. Local
/// edges are ordered by ascending global id.
#[derive(Debug, Clone)]
struct Piece {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    ids: Vec<usize>,
}

impl Piece {
    fn whole(g: &Graph) -> Self {
        Piece {
            vertex_count: g.vertex_count(),
            edges: g.edges().to_vec(),
            ids: (0..g.edge_count()).collect(),
        }
    }

    /// Components of the kept subgraph that contain at least one edge,
    /// ordered by their smallest edge id.
    fn components(g: &Graph, keep: impl Fn(usize) -> bool) -> Vec<Piece> {
        let mut uf = UnionFind::new(g.vertex_count());
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if keep(e) {
                uf.union(u, v);
            }
        }
        let mut by_root: BTreeMap<usize, (BTreeMap<usize, usize>, Piece)> = BTreeMap::new();
        let mut order = Vec::new();
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if !keep(e) {
                continue;
            }
            let root = uf.find(u);
            let (local, piece) = by_root.entry(root).or_insert_with(|| {
                order.push(root);
                (
                    BTreeMap::new(),
                    Piece {
                        vertex_count: 0,
                        edges: Vec::new(),
                        ids: Vec::new(),
                    },
                )
            });
            let mut id = |x: usize| {
                let next = local.len();
                *local.entry(x).or_insert(next)
            };
            let (a, b) = (id(u), id(v));
            piece.vertex_count = local.len();
            piece.edges.push((a, b));
            piece.ids.push(e);
        }
        order
            .into_iter()
            .map(|root| by_root.remove(&root).expect("root recorded").1)
            .collect()
    }

    fn to_global(&self, local: &[usize]) -> EdgeSubset {
        local.iter().map(|&l| self.ids[l]).collect()
    }

    /// Dinkelbach iteration for `max (|P|-1) / w(delta(P))` over nontrivial
    /// vertex partitions. Returns the ratio and the crossing edges (local
    /// ids, sorted) of a maximizing partition.
    fn max_cut_rate(&self, weights: &[Rational]) -> Result<(Rational, Vec<usize>)> {
        let mut witness: Vec<usize> = (0..self.edges.len()).collect();
        let total: Rational = weights.iter().sum();
        let mut ratio = from_usize(self.vertex_count - 1) / total;
        let scaled = Scaled::new(weights.iter())?;
        loop {
            // lambda * w_e = (p * wn_e / L) / q  ->  integers W_e = p*wn_e, k = q*L
            let p = ratio.numer().to_i128().ok_or(Error::Overflow)?;
            let q = ratio.denom().to_i128().ok_or(Error::Overflow)?;
            let big_w = scaled
                .numerators
                .iter()
                .map(|&wn| p.checked_mul(wn).ok_or(Error::Overflow))
                .collect::<Result<Vec<_>>>()?;
            let k = q.checked_mul(scaled.denominator).ok_or(Error::Overflow)?;
            let labels = min_attack(self.vertex_count, &self.edges, &big_w, k)?;
            let parts = labels.iter().max().map_or(0, |&m| m + 1);
            if parts < 2 {
                break;
            }
            let crossing: Vec<usize> = (0..self.edges.len())
                .filter(|&e| labels[self.edges[e].0] != labels[self.edges[e].1])
                .collect();
            let cut_weight: Rational = crossing.iter().map(|&e| &weights[e]).sum();
            let candidate = from_usize(parts - 1) / cut_weight;
            if candidate <= ratio {
                break;
            }
            ratio = candidate;
            witness = crossing;
        }
        Ok((ratio, witness))
    }
}

/// Solves `min over partitions P of W(delta(P)) - k|P|` on a connected
/// multigraph; returns a part label per vertex (labels `0..|P|`).
fn min_attack(n: usize, edges: &[(usize, usize)], w: &[i128], k: i128) -> Result<Vec<usize>> {
    let mut x = vec![0i128; edges.len()];
    for e in 0..edges.len() {
        let (slack, _) = min_slack(n, edges, &x, k, edges[e])?;
        x[e] = w[e].min(slack);
    }
    let mut uf = UnionFind::new(n);
    for &(u, v) in edges {
        if uf.same(u, v) {
            continue;
        }
        let (slack, side) = min_slack(n, edges, &x, k, (u, v))?;
        if slack == 0 {
            let members: Vec<usize> = (0..n).filter(|&a| side[a]).collect();
            for pair in members.windows(2) {
                uf.union(pair[0], pair[1]);
            }
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for a in 0..n {
        let r = uf.find(a);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        label[a] = label[r];
    }
    Ok(label)
}

/// `min over S containing u and v of k(|S|-1) - x(E[S])`, with the largest
/// minimizing `S`.
///
/// Doubling gives `2k|S| - sum_{a in S} deg_x(a) + x(delta(S))`, a cut
/// function: vertex costs `2k - deg_x(a)` go to the sink (or, when
/// negative, from the source with a constant offset) and each edge carries
/// `x_e` both ways.
fn min_slack(
    n: usize,
    edges: &[(usize, usize)],
    x: &[i128],
    k: i128,
    (u, v): (usize, usize),
) -> Result<(i128, Vec<bool>)> {
    let (s, t) = (n, n + 1);
    let mut deg = vec![0i128; n];
    for (e, &(a, b)) in edges.iter().enumerate() {
        deg[a] += x[e];
        deg[b] += x[e];
    }
    let two_k = k.checked_mul(2).ok_or(Error::Overflow)?;
    let mut offset = 0i128;
    let mut capacity = 0i128;
    let mut net = FlowNetwork::new(n + 2);
    for (a, &d) in deg.iter().enumerate().take(n) {
        let c = two_k - d;
        if c >= 0 {
            net.add_arc(a, t, c);
        } else {
            net.add_arc(s, a, -c);
            offset += c;
        }
        capacity = capacity.checked_add(c.abs()).ok_or(Error::Overflow)?;
    }
    for (e, &(a, b)) in edges.iter().enumerate() {
        if x[e] > 0 {
            net.add_edge(a, b, x[e]);
            capacity = capacity.checked_add(2 * x[e]).ok_or(Error::Overflow)?;
        }
    }
    let inf = capacity.checked_add(1).ok_or(Error::Overflow)?;
    net.add_arc(s, u, inf);
    net.add_arc(s, v, inf);
    let doubled = net.max_flow(s, t) + offset;
    debug_assert!(doubled % 2 == 0);
    let slack = doubled / 2 - k;
    debug_assert!(slack >= 0, "greedy vector left the polymatroid");
    Ok((slack, net.maximal_source_side(t)))
}
