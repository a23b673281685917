//! The parent-child order between non-degenerate prime-partition elements
//! and its layers.
//!
//! Ancestors of an element are found by shrinking the set of all
//! non-degenerate elements: any other element whose removal keeps the
//! union's cut-rate at `opt` is dropped. Parents are the transitive
//! reduction of the ancestor relation. The exchange-based "leads to"
//! relation is only evaluated by the exhaustive oracle in
//! [`leads_to_oracle`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{EdgeSubset, Graph, UnionFind};
use crate::oracle::Oracle;
use crate::partition::PrimePartition;
use crate::strength::unit_cut_rate;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderDag {
    /// Non-degenerate element indices, ascending.
    pub nodes: Vec<usize>,
    /// `(parent, child)` pairs.
    pub parent_edges: BTreeSet<(usize, usize)>,
    pub ancestors: BTreeMap<usize, BTreeSet<usize>>,
}

impl OrderDag {
    pub fn parents_of(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.parent_edges
            .iter()
            .filter(move |&&(_, c)| c == node)
            .map(|&(p, _)| p)
    }

    pub fn children_of(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.parent_edges
            .iter()
            .filter(move |&&(p, _)| p == node)
            .map(|&(_, c)| c)
    }

    pub fn sinks(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .copied()
            .filter(|&n| self.children_of(n).next().is_none())
            .collect()
    }

    /// `true` when `a` is a (strict) ancestor of `b`.
    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        self.ancestors.get(&b).is_some_and(|s| s.contains(&a))
    }

    /// Graphviz rendering: one node per element labelled with index and size,
    /// one arrow per parent-child pair.
    pub fn to_dot(&self, pp: &PrimePartition) -> String {
        self.to_dot_with(pp, |i| i)
    }

    /// As [`to_dot`](Self::to_dot) with elements renumbered by `label`.
    pub fn to_dot_with(&self, pp: &PrimePartition, label: impl Fn(usize) -> usize) -> String {
        let mut out = String::from("digraph order {\n");
        let mut nodes: Vec<(usize, usize)> = self.nodes.iter().map(|&n| (label(n), n)).collect();
        nodes.sort();
        for (l, n) in nodes {
            let _ = writeln!(out, "  P{l} [label=\"P{l} ({})\"];", pp.elements[n].len());
        }
        let edges: BTreeSet<(usize, usize)> = self
            .parent_edges
            .iter()
            .map(|&(p, c)| (label(p), label(c)))
            .collect();
        for (p, c) in edges {
            let _ = writeln!(out, "  P{p} -> P{c};");
        }
        out.push_str("}\n");
        out
    }
}

/// Strict ancestors of `target`.
pub fn ancestors(g: &Graph, pp: &PrimePartition, target: usize) -> Result<BTreeSet<usize>> {
    if target >= pp.len() {
        return Err(Error::OutOfRange {
            index: target,
            len: pp.len(),
        });
    }
    if pp.is_degenerate(target) {
        return Err(Error::DegenerateTarget(target));
    }
    let mut survivors: BTreeSet<usize> = pp.nondegenerate().collect();
    loop {
        let mut removed_any = false;
        let candidates: Vec<usize> = survivors.iter().copied().collect();
        for p in candidates {
            if p == target {
                continue;
            }
            let rest = pp.union_of(survivors.iter().copied().filter(|&q| q != p));
            if unit_cut_rate(g, &rest) == pp.opt {
                survivors.remove(&p);
                removed_any = true;
            }
        }
        if !removed_any {
            break;
        }
    }
    survivors.remove(&target);
    Ok(survivors)
}

/// Ancestor sets for every non-degenerate element and their transitive
/// reduction.
pub fn parent_child(g: &Graph, pp: &PrimePartition) -> Result<OrderDag> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let nodes: Vec<usize> = pp.nondegenerate().collect();
    let ancestors: BTreeMap<usize, BTreeSet<usize>> = nodes
        .par_iter()
        .map(|&n| ancestors(g, pp, n).map(|a| (n, a)))
        .collect::<Result<_>>()?;
    Ok(OrderDag {
        parent_edges: transitive_reduction(&nodes, &ancestors),
        nodes,
        ancestors,
    })
}

/// `(p, c)` with `p` an ancestor of `c` and no `m` strictly between.
pub fn transitive_reduction(
    nodes: &[usize],
    ancestors: &BTreeMap<usize, BTreeSet<usize>>,
) -> BTreeSet<(usize, usize)> {
    let empty = BTreeSet::new();
    let anc = |n: usize| ancestors.get(&n).unwrap_or(&empty);
    let mut out = BTreeSet::new();
    for &c in nodes {
        for &p in anc(c) {
            let skip = anc(c)
                .iter()
                .any(|&m| m != p && anc(m).contains(&p));
            if !skip {
                out.insert((p, c));
            }
        }
    }
    out
}

/// Transitive closure of a relation given as pairs, keyed by target:
/// `closure[b]` holds every `a` with a chain `a -> ... -> b`.
pub fn transitive_closure(
    nodes: &[usize],
    pairs: &BTreeSet<(usize, usize)>,
) -> BTreeMap<usize, BTreeSet<usize>> {
    let mut closure: BTreeMap<usize, BTreeSet<usize>> =
        nodes.iter().map(|&n| (n, BTreeSet::new())).collect();
    for &(a, b) in pairs {
        closure.entry(b).or_default().insert(a);
    }
    // Floyd-Warshall style: route through every intermediate node
    for &m in nodes {
        let via: BTreeSet<usize> = closure.get(&m).cloned().unwrap_or_default();
        for &n in nodes {
            if closure[&n].contains(&m) {
                closure.get_mut(&n).expect("node").extend(via.iter().copied());
            }
        }
    }
    closure
}

/// Layers of the order: sinks first, peeled repeatedly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layers {
    /// Element indices per layer, `L_1` first.
    pub elements: Vec<Vec<usize>>,
    /// Edge union per layer.
    pub layers: Vec<EdgeSubset>,
}

impl Layers {
    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    /// 1-based layer of every non-degenerate element.
    pub fn level_of(&self) -> BTreeMap<usize, usize> {
        self.elements
            .iter()
            .enumerate()
            .flat_map(|(i, els)| els.iter().map(move |&e| (e, i + 1)))
            .collect()
    }
}

pub fn layers(dag: &OrderDag, pp: &PrimePartition) -> Layers {
    let mut remaining: BTreeSet<usize> = dag.nodes.iter().copied().collect();
    let mut elements = Vec::new();
    while !remaining.is_empty() {
        let sinks: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&n| dag.children_of(n).all(|c| !remaining.contains(&c)))
            .collect();
        assert!(!sinks.is_empty(), "order contains a cycle");
        for s in &sinks {
            remaining.remove(s);
        }
        elements.push(sinks);
    }
    let layers = elements
        .iter()
        .map(|els| pp.union_of(els.iter().copied()))
        .collect();
    Layers { elements, layers }
}

/// Exhaustive "leads to" test: some OCSG `H`, `e` in `p` outside `H` and `e'`
/// in `q` inside `H` such that swapping `e'` for `e` keeps `H` connected and
/// spanning.
pub fn leads_to_oracle(
    g: &Graph,
    pp: &PrimePartition,
    oracle: &Oracle,
    p: usize,
    q: usize,
) -> Result<bool> {
    Ok(leads_to_relation(g, pp, oracle)?.contains(&(p, q)))
}

/// The whole "leads to" relation as `(p, q)` pairs. Only OCSGs containing
/// the whole degenerate set are scanned: an exchange valid in `H` stays valid
/// in `H` plus degenerate edges, which is again an OCSG.
pub fn leads_to_relation(
    g: &Graph,
    pp: &PrimePartition,
    oracle: &Oracle,
) -> Result<BTreeSet<(usize, usize)>> {
    let ocsgs = oracle.enumerate_saturated_ocsgs(g, pp).map_err(|err| match err {
        Error::CapExceeded { size, cap, .. } => Error::CapExceeded {
            what: "leads-to oracle (use the ancestors-based order instead)",
            size,
            cap,
        },
        other => other,
    })?;
    let element = pp.element_of(g.edge_count());
    let nondeg: Vec<usize> = (0..g.edge_count())
        .filter(|&e| !pp.is_degenerate(element[e]))
        .collect();
    let relation = ocsgs
        .par_iter()
        .map(|h| {
            let mut found = BTreeSet::new();
            for &removed in h.iter().filter(|&&e| !pp.is_degenerate(element[e])) {
                let mut uf = UnionFind::new(g.vertex_count());
                for &e in h.iter().filter(|&&e| e != removed) {
                    let (u, v) = g.endpoints(e);
                    uf.union(u, v);
                }
                let still_connected = uf.set_count() == 1;
                for &added in nondeg.iter().filter(|e| !h.contains(e)) {
                    let (p, q) = (element[added], element[removed]);
                    if p == q {
                        continue;
                    }
                    let (u, v) = g.endpoints(added);
                    if still_connected || !uf.same(u, v) {
                        found.insert((p, q));
                    }
                }
            }
            found
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    Ok(relation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::partition::prime_partition;

    /// Figure-1 partition with element indices located by a member edge.
    fn figure1() -> (Graph, PrimePartition, [usize; 5]) {
        let g = fixtures::figure1();
        let pp = prime_partition(&g).unwrap();
        let el = pp.element_of(g.edge_count());
        (g, pp, [el[0], el[2], el[4], el[10], el[16]])
    }

    #[test]
    fn figure1_ancestors() {
        let (g, pp, [e1, e2, e3, e4, _]) = figure1();
        assert_eq!(ancestors(&g, &pp, e1).unwrap(), BTreeSet::new());
        assert_eq!(ancestors(&g, &pp, e2).unwrap(), [e1].into());
        assert_eq!(ancestors(&g, &pp, e3).unwrap(), [e1, e2].into());
        assert_eq!(ancestors(&g, &pp, e4).unwrap(), [e1, e2].into());
    }

    #[test]
    fn ancestors_rejects_degenerate_target() {
        let (g, pp, [.., d]) = figure1();
        assert_eq!(ancestors(&g, &pp, d).unwrap_err(), Error::DegenerateTarget(d));
    }

    #[test]
    fn figure1_parent_child_and_layers() {
        let (g, pp, [e1, e2, e3, e4, _]) = figure1();
        let dag = parent_child(&g, &pp).unwrap();
        assert_eq!(dag.parent_edges, [(e1, e2), (e2, e3), (e2, e4)].into());
        let ly = layers(&dag, &pp);
        let sizes: Vec<usize> = ly.layers.iter().map(|l| l.len()).collect();
        assert_eq!(sizes, vec![12, 2, 2]);
        assert_eq!(ly.layers[1].to_vec(), vec![2, 3]);
        assert_eq!(ly.layers[2].to_vec(), vec![0, 1]);
        let dot = dag.to_dot(&pp);
        assert!(dot.contains(&format!("P{e1} -> P{e2};")));
    }

    #[test]
    fn small_orders() {
        let k3 = fixtures::k3();
        let pp = prime_partition(&k3).unwrap();
        let dag = parent_child(&k3, &pp).unwrap();
        assert_eq!(dag.nodes, vec![0]);
        assert!(dag.parent_edges.is_empty());
        assert_eq!(layers(&dag, &pp).layers, vec![k3.all_edges()]);

        let bow = fixtures::bowtie();
        let pp = prime_partition(&bow).unwrap();
        assert_eq!(ancestors(&bow, &pp, 0).unwrap(), BTreeSet::new());
        let dag = parent_child(&bow, &pp).unwrap();
        assert!(dag.parent_edges.is_empty());
        assert_eq!(layers(&dag, &pp).layers, vec![bow.all_edges()]);
    }

    #[test]
    fn leads_to_examples() {
        let oracle = Oracle::with_cap(26);
        let (g, pp, [e1, e2, e3, e4, _]) = figure1();
        let relation = leads_to_relation(&g, &pp, &oracle).unwrap();
        assert!(relation.contains(&(e1, e2)));
        assert!(!relation.contains(&(e3, e4)));
        assert!(leads_to_oracle(&g, &pp, &oracle, e1, e2).unwrap());

        let bow = fixtures::bowtie();
        let pp = prime_partition(&bow).unwrap();
        assert!(!leads_to_oracle(&bow, &pp, &oracle, 0, 1).unwrap());
    }

    #[test]
    fn leads_to_respects_cap() {
        let (g, pp, _) = figure1();
        let small = Oracle::with_cap(14);
        assert!(matches!(
            leads_to_relation(&g, &pp, &small),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn closure_and_reduction_round_trip() {
        let nodes = [0, 1, 2, 3];
        let pairs: BTreeSet<(usize, usize)> = [(0, 1), (1, 2), (1, 3), (0, 2)].into();
        let closure = transitive_closure(&nodes, &pairs);
        assert_eq!(closure[&2], [0, 1].into());
        assert_eq!(closure[&3], [0, 1].into());
        let reduced = transitive_reduction(&nodes, &closure);
        assert_eq!(reduced, [(0, 1), (1, 2), (1, 3)].into());
    }
}
