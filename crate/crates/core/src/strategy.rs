//! Maxmin polytope, pdist checks, the nucleolus and extreme points.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{EdgeDistribution, EdgeSubset, Graph};
use crate::order::{layers, Layers, OrderDag};
use crate::partition::PrimePartition;
use crate::rational::{from_usize, Rational};

/// Node cap for closed-set enumeration.
pub const CLOSED_SET_CAP: usize = 20;

/// Per-element variable system of the maxmin polytope. Inequalities and sinks
/// refer to positions in `variables`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopeDescription {
    /// Non-degenerate element index of every variable.
    pub variables: Vec<usize>,
    /// `|P|` per variable; the normalization is `sum sizes[i] * y[i] = 1`.
    pub sizes: Vec<usize>,
    /// `(parent, child)`: `y[parent] >= y[child]`.
    pub order_inequalities: Vec<(usize, usize)>,
    /// `y[i] >= 0` for every sink.
    pub nonneg: Vec<usize>,
    /// Variable of every edge; `None` on the degenerate set.
    pub edge_map: Vec<Option<usize>>,
}

impl PolytopeDescription {
    pub fn inequality_count(&self) -> usize {
        self.order_inequalities.len() + self.nonneg.len() + 1
    }

    /// Variable values of `d`, checked against every constraint.
    pub fn point(&self, d: &EdgeDistribution) -> Result<Vec<Rational>> {
        if d.len() != self.edge_map.len() {
            return Err(Error::Infeasible(format!(
                "{} weights for {} edges",
                d.len(),
                self.edge_map.len()
            )));
        }
        let mut y: Vec<Option<Rational>> = vec![None; self.variables.len()];
        for (e, var) in self.edge_map.iter().enumerate() {
            let w = d.weight(e);
            match var {
                None if !w.is_zero() => {
                    return Err(Error::Infeasible(format!("degenerate edge {e} has weight {w}")))
                }
                None => {}
                Some(i) => match &y[*i] {
                    Some(v) if v != w => {
                        return Err(Error::Infeasible(format!(
                            "edge {e} differs from its element"
                        )))
                    }
                    Some(_) => {}
                    None => y[*i] = Some(w.clone()),
                },
            }
        }
        let y: Vec<Rational> = y.into_iter().map(|v| v.unwrap_or_else(Rational::zero)).collect();
        for &(p, c) in &self.order_inequalities {
            if y[p] < y[c] {
                return Err(Error::Infeasible(format!(
                    "element {} below its child {}",
                    self.variables[p], self.variables[c]
                )));
            }
        }
        if let Some(&s) = self.nonneg.iter().find(|&&s| y[s] < Rational::zero()) {
            return Err(Error::Infeasible(format!("element {} negative", self.variables[s])));
        }
        let total: Rational = y
            .iter()
            .zip(&self.sizes)
            .map(|(v, &s)| v * from_usize(s))
            .sum();
        if !total.is_one() {
            return Err(Error::Infeasible(format!("normalization sums to {total}")));
        }
        Ok(y)
    }

    pub fn contains(&self, d: &EdgeDistribution) -> bool {
        self.point(d).is_ok()
    }

    /// Edge distribution from variable values.
    pub fn distribution(&self, y: &[Rational]) -> Result<EdgeDistribution> {
        EdgeDistribution::new(
            self.edge_map
                .iter()
                .map(|var| var.map_or_else(Rational::zero, |i| y[i].clone()))
                .collect(),
        )
    }
}

pub fn polytope_description(pp: &PrimePartition, dag: &OrderDag) -> PolytopeDescription {
    let variables: Vec<usize> = pp.nondegenerate().collect();
    let position = |el: usize| variables.iter().position(|&v| v == el).expect("node");
    let edge_count: usize = pp.elements.iter().map(|el| el.len()).sum();
    let mut edge_map = vec![None; edge_count];
    for (i, &el) in variables.iter().enumerate() {
        for &e in &pp.elements[el] {
            edge_map[e] = Some(i);
        }
    }
    PolytopeDescription {
        sizes: variables.iter().map(|&el| pp.elements[el].len()).collect(),
        order_inequalities: dag
            .parent_edges
            .iter()
            .map(|&(p, c)| (position(p), position(c)))
            .collect(),
        nonneg: dag.sinks().into_iter().map(position).collect(),
        edge_map,
        variables,
    }
}

/// Constant on every element, zero on the degenerate set and monotone along
/// the parent-child order.
pub fn is_maxmin(g: &Graph, pp: &PrimePartition, dag: &OrderDag, d: &EdgeDistribution) -> bool {
    d.len() == g.edge_count() && polytope_description(pp, dag).contains(d)
}

/// Maxmin, positive off the degenerate set and strictly decreasing from every
/// parent to each of its children.
pub fn is_pdist(pp: &PrimePartition, dag: &OrderDag, d: &EdgeDistribution) -> bool {
    let desc = polytope_description(pp, dag);
    let Ok(y) = desc.point(d) else {
        return false;
    };
    y.iter().all(|v| *v > Rational::zero())
        && desc.order_inequalities.iter().all(|&(p, c)| y[p] > y[c])
}

/// `1 / sum i * |L_i|`.
pub fn kappa(layers: &Layers) -> Rational {
    let total: usize = layers
        .layers
        .iter()
        .enumerate()
        .map(|(i, l)| (i + 1) * l.len())
        .sum();
    Rational::new(1.into(), total.into())
}

/// `i * kappa` on layer `i`, zero on the degenerate set.
pub fn nucleolus(pp: &PrimePartition, layers: &Layers) -> Result<EdgeDistribution> {
    if pp.opt >= Rational::one() {
        return Err(Error::AssumptionViolated(
            "opt = 1, the graph has a bridge".into(),
        ));
    }
    let k = kappa(layers);
    let edge_count: usize = pp.elements.iter().map(|el| el.len()).sum();
    let mut weights = vec![Rational::zero(); edge_count];
    for (i, layer) in layers.layers.iter().enumerate() {
        for &e in layer {
            weights[e] = from_usize(i + 1) * &k;
        }
    }
    EdgeDistribution::new(weights)
}

pub fn make_pdist(pp: &PrimePartition, dag: &OrderDag) -> Result<EdgeDistribution> {
    nucleolus(pp, &layers(dag, pp))
}

/// An ancestor-closed set of non-degenerate elements.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClosedSet {
    pub members: BTreeSet<usize>,
}

impl ClosedSet {
    pub fn edges(&self, pp: &PrimePartition) -> EdgeSubset {
        pp.union_of(self.members.iter().copied())
    }

    /// Uniform distribution on the member edges.
    pub fn uniform(&self, pp: &PrimePartition) -> EdgeDistribution {
        let edge_count = pp.elements.iter().map(|el| el.len()).sum();
        EdgeDistribution::uniform_on(edge_count, &self.edges(pp))
            .expect("closed sets are nonempty")
    }
}

/// Masks over `dag.nodes` positions.
struct NodeMasks {
    ancestors: Vec<u32>,
    related: Vec<u32>,
}

fn node_masks(dag: &OrderDag) -> Result<NodeMasks> {
    let n = dag.nodes.len();
    if n > CLOSED_SET_CAP {
        return Err(Error::CapExceeded {
            what: "closed_sets",
            size: n,
            cap: CLOSED_SET_CAP,
        });
    }
    let position = |el: usize| dag.nodes.iter().position(|&v| v == el).expect("node");
    let ancestors: Vec<u32> = dag
        .nodes
        .iter()
        .map(|node| {
            dag.ancestors
                .get(node)
                .into_iter()
                .flatten()
                .map(|&a| 1u32 << position(a))
                .sum()
        })
        .collect();
    let mut related = ancestors.clone();
    for (i, &anc) in ancestors.iter().enumerate() {
        for (j, rel) in related.iter_mut().enumerate() {
            if anc >> j & 1 == 1 {
                *rel |= 1 << i;
            }
        }
    }
    Ok(NodeMasks { ancestors, related })
}

fn closed_masks(masks: &NodeMasks) -> Vec<u32> {
    let n = masks.ancestors.len();
    (1u32..1 << n)
        .filter(|&m| {
            (0..n).all(|i| m >> i & 1 == 0 || masks.ancestors[i] & !m == 0)
        })
        .collect()
}

fn to_closed(dag: &OrderDag, mask: u32) -> ClosedSet {
    ClosedSet {
        members: (0..dag.nodes.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| dag.nodes[i])
            .collect(),
    }
}

fn sorted(mut sets: Vec<ClosedSet>) -> Vec<ClosedSet> {
    sets.sort_by(|a, b| (a.members.len(), &a.members).cmp(&(b.members.len(), &b.members)));
    sets
}

/// Every nonempty ancestor-closed set, by size then members.
pub fn closed_sets(dag: &OrderDag) -> Result<Vec<ClosedSet>> {
    let masks = node_masks(dag)?;
    Ok(sorted(
        closed_masks(&masks)
            .into_iter()
            .map(|m| to_closed(dag, m))
            .collect(),
    ))
}

/// Closed sets that are not a disjoint union of two nonempty closed sets,
/// i.e. whose members are connected through the ancestor relation.
pub fn extreme_closed_sets(dag: &OrderDag) -> Result<Vec<ClosedSet>> {
    let masks = node_masks(dag)?;
    Ok(sorted(
        closed_masks(&masks)
            .into_iter()
            .filter(|&m| connected(m, &masks.related))
            .map(|m| to_closed(dag, m))
            .collect(),
    ))
}

fn connected(mask: u32, related: &[u32]) -> bool {
    let start = mask & mask.wrapping_neg();
    let mut seen = start;
    let mut frontier = start;
    while frontier != 0 {
        let i = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = related[i] & mask & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen == mask
}

/// Uniform distributions on the edges of every extreme closed set.
pub fn extreme_points(pp: &PrimePartition, dag: &OrderDag) -> Result<Vec<EdgeDistribution>> {
    Ok(extreme_closed_sets(dag)?
        .iter()
        .map(|c| c.uniform(pp))
        .collect())
}

/// Closed sets that are not the union of two closed sets strictly contained
/// in them, by direct pair search.
pub fn pair_minimal_closed_sets(dag: &OrderDag) -> Result<Vec<ClosedSet>> {
    let masks = node_masks(dag)?;
    let all = closed_masks(&masks);
    Ok(sorted(
        all.iter()
            .copied()
            .filter(|&b| {
                let proper: Vec<u32> = all
                    .iter()
                    .copied()
                    .filter(|&s| s != b && s & !b == 0)
                    .collect();
                !proper
                    .iter()
                    .any(|&s1| proper.iter().any(|&s2| s1 | s2 == b))
            })
            .map(|m| to_closed(dag, m))
            .collect(),
    ))
}

/// `{P}` together with the ancestors of `P`, for every node.
pub fn principal_closures(dag: &OrderDag) -> Vec<ClosedSet> {
    let set: BTreeSet<ClosedSet> = dag
        .nodes
        .iter()
        .map(|&n| {
            let mut members = dag.ancestors.get(&n).cloned().unwrap_or_default();
            members.insert(n);
            ClosedSet { members }
        })
        .collect();
    sorted(set.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::min_csg;
    use crate::order::parent_child;
    use crate::partition::{canonical_beta, prime_partition};
    use crate::rational::ratio;

    fn analyse(g: &Graph) -> (PrimePartition, OrderDag) {
        let pp = prime_partition(g).unwrap();
        let dag = parent_child(g, &pp).unwrap();
        (pp, dag)
    }

    fn members(sets: &[ClosedSet]) -> Vec<Vec<usize>> {
        sets.iter()
            .map(|c| c.members.iter().copied().collect())
            .collect()
    }

    #[test]
    fn descriptions() {
        let k3 = fixtures::k3();
        let (pp, dag) = analyse(&k3);
        let desc = polytope_description(&pp, &dag);
        assert_eq!(desc.sizes, vec![3]);
        assert_eq!(desc.inequality_count(), 2);

        let bow = fixtures::bowtie();
        let (pp, dag) = analyse(&bow);
        let desc = polytope_description(&pp, &dag);
        assert_eq!(desc.sizes, vec![3, 3]);
        assert!(desc.order_inequalities.is_empty());
        assert_eq!(desc.nonneg, vec![0, 1]);

        let g = fixtures::figure1();
        let (pp, dag) = analyse(&g);
        let desc = polytope_description(&pp, &dag);
        let mut sizes = desc.sizes.clone();
        sizes.sort();
        assert_eq!(sizes, vec![2, 2, 6, 6]);
        assert_eq!(desc.order_inequalities.len(), 3);
        assert_eq!(desc.nonneg.len(), 2);
        assert_eq!(desc.inequality_count(), 6);
        assert!(desc.edge_map[16..].iter().all(Option::is_none));
    }

    #[test]
    fn figure1_nucleolus() {
        let g = fixtures::figure1();
        let (pp, dag) = analyse(&g);
        let ly = layers(&dag, &pp);
        assert_eq!(kappa(&ly), ratio(1, 22));
        let nu = nucleolus(&pp, &ly).unwrap();
        assert_eq!(nu.weight(0), &ratio(3, 22));
        assert_eq!(nu.weight(2), &ratio(2, 22));
        assert_eq!(nu.weight(4), &ratio(1, 22));
        assert_eq!(nu.weight(10), &ratio(1, 22));
        assert_eq!(nu.weight(20), &ratio(0, 1));
        assert_eq!(min_csg(&g, &nu).unwrap().weight, ratio(1, 2));
        assert!(is_maxmin(&g, &pp, &dag, &nu));
        assert!(is_pdist(&pp, &dag, &nu));
        assert_eq!(make_pdist(&pp, &dag).unwrap(), nu);

        let uniform = EdgeDistribution::uniform(26).unwrap();
        assert!(!is_maxmin(&g, &pp, &dag, &uniform));
        assert!(is_pdist(&pp, &dag, &canonical_beta(&pp)));
    }

    #[test]
    fn small_nucleoli() {
        let k3 = fixtures::k3();
        let (pp, dag) = analyse(&k3);
        let nu = make_pdist(&pp, &dag).unwrap();
        assert_eq!(nu, EdgeDistribution::uniform(3).unwrap());
        assert!(is_maxmin(&k3, &pp, &dag, &nu));

        let p3 = fixtures::p3();
        let (pp, dag) = analyse(&p3);
        assert!(matches!(
            make_pdist(&pp, &dag),
            Err(Error::AssumptionViolated(_))
        ));
    }

    #[test]
    fn bowtie_pdist() {
        let bow = fixtures::bowtie();
        let (pp, dag) = analyse(&bow);
        let split = |a: Rational, b: Rational| {
            EdgeDistribution::new(vec![a.clone(), a.clone(), a, b.clone(), b.clone(), b]).unwrap()
        };
        assert!(is_pdist(&pp, &dag, &split(ratio(2, 9), ratio(1, 9))));
        assert!(is_maxmin(&bow, &pp, &dag, &split(ratio(1, 3), ratio(0, 1))));
        assert!(!is_pdist(&pp, &dag, &split(ratio(1, 3), ratio(0, 1))));
    }

    #[test]
    fn closed_set_examples() {
        let k3 = fixtures::k3();
        let (_, dag) = analyse(&k3);
        assert_eq!(members(&closed_sets(&dag).unwrap()), vec![vec![0]]);

        let bow = fixtures::bowtie();
        let (pp, dag) = analyse(&bow);
        assert_eq!(
            members(&closed_sets(&dag).unwrap()),
            vec![vec![0], vec![1], vec![0, 1]]
        );
        assert_eq!(
            members(&extreme_closed_sets(&dag).unwrap()),
            vec![vec![0], vec![1]]
        );
        let points = extreme_points(&pp, &dag).unwrap();
        let inside = pp.elements[0].min_edge().unwrap();
        let outside = pp.elements[1].min_edge().unwrap();
        assert_eq!(points[0].weight(inside), &ratio(1, 3));
        assert_eq!(points[0].weight(outside), &ratio(0, 1));
    }

    #[test]
    fn figure1_closed_sets() {
        let g = fixtures::figure1();
        let (pp, dag) = analyse(&g);
        let el = pp.element_of(26);
        let (e1, e2, e3, e4) = (el[0], el[2], el[4], el[10]);
        let set = |ids: &[usize]| ClosedSet {
            members: ids.iter().copied().collect(),
        };
        let all = closed_sets(&dag).unwrap();
        assert_eq!(all.len(), 5);
        let principal = principal_closures(&dag);
        assert_eq!(
            principal.iter().cloned().collect::<BTreeSet<_>>(),
            [
                set(&[e1]),
                set(&[e1, e2]),
                set(&[e1, e2, e3]),
                set(&[e1, e2, e4])
            ]
            .into()
        );
        assert_eq!(pair_minimal_closed_sets(&dag).unwrap(), principal);

        // the full closure is a vertex too: every order inequality is tight
        let extreme = extreme_closed_sets(&dag).unwrap();
        assert_eq!(extreme.len(), 5);
        assert!(extreme.contains(&set(&[e1, e2, e3, e4])));
        let uniform_e1 = extreme_points(&pp, &dag).unwrap().remove(0);
        assert_eq!(uniform_e1.weight(0), &ratio(1, 2));
        assert_eq!(uniform_e1.weight(1), &ratio(1, 2));
    }

    #[test]
    fn infeasible_points() {
        let bow = fixtures::bowtie();
        let (pp, dag) = analyse(&bow);
        let desc = polytope_description(&pp, &dag);
        let uneven = EdgeDistribution::normalized(
            (1..=6).map(|i| ratio(i, 1)).collect(),
        )
        .unwrap();
        assert!(matches!(desc.point(&uneven), Err(Error::Infeasible(_))));
        let y = desc.point(&EdgeDistribution::uniform(6).unwrap()).unwrap();
        assert_eq!(y, vec![ratio(1, 6), ratio(1, 6)]);
        assert_eq!(
            desc.distribution(&y).unwrap(),
            EdgeDistribution::uniform(6).unwrap()
        );
    }
}
