//! Prime-partition construction, the degenerate set, the canonical maxmin
//! distribution and omni connected spanning subgraphs (OCSGs).

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{is_connected_spanning, min_csg, EdgeDistribution, EdgeSubset, Graph};
use crate::rational::{from_usize, Rational};
use crate::strength::prime_set_where;

/// The prime partition of `E`, in construction order. When a degenerate set
/// exists it is the last element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePartition {
    pub elements: Vec<EdgeSubset>,
    pub degenerate: Option<usize>,
    /// The graph cut-rate the partition was built for.
    pub opt: Rational,
}

impl PrimePartition {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_degenerate(&self, index: usize) -> bool {
        self.degenerate == Some(index)
    }

    /// Indices of the non-degenerate elements, ascending.
    pub fn nondegenerate(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.elements.len()).filter(move |&i| !self.is_degenerate(i))
    }

    pub fn degenerate_edges(&self) -> Option<&EdgeSubset> {
        self.degenerate.map(|d| &self.elements[d])
    }

    /// Element index of every edge.
    pub fn element_of(&self, edge_count: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; edge_count];
        for (i, el) in self.elements.iter().enumerate() {
            for &e in el {
                out[e] = i;
            }
        }
        out
    }

    /// Union of the given elements.
    pub fn union_of(&self, indices: impl IntoIterator<Item = usize>) -> EdgeSubset {
        indices
            .into_iter()
            .flat_map(|i| self.elements[i].iter().copied())
            .collect()
    }

    /// `|P| * opt`, the number of edges an OCSG takes from element `P`.
    pub fn quota(&self, index: usize) -> Rational {
        from_usize(self.elements[index].len()) * &self.opt
    }
}

/// Repeatedly extracts a prime set of the residual graph until the residual
/// cut-rate drops below `opt`; leftover edges form the last element.
pub fn prime_partition(g: &Graph) -> Result<PrimePartition> {
    if g.vertex_count() < 2 {
        return Err(Error::TooFewVertices {
            required: 2,
            found: g.vertex_count(),
        });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut removed = vec![false; g.edge_count()];
    let (opt, first) = prime_set_where(g, |_| true)?;
    let mut elements = vec![first];
    loop {
        for &e in elements.last().expect("nonempty") {
            removed[e] = true;
        }
        if removed.iter().all(|&r| r) {
            break;
        }
        let (rate, next) = prime_set_where(g, |e| !removed[e])?;
        if rate < opt {
            elements.push((0..g.edge_count()).filter(|&e| !removed[e]).collect());
            break;
        }
        elements.push(next);
    }
    let mut pp = PrimePartition {
        elements,
        degenerate: None,
        opt,
    };
    pp.degenerate = degenerate_index(g, &pp);
    Ok(pp)
}

/// `Some(last)` iff `(|V|-1)/|E| != opt`.
fn degenerate_index(g: &Graph, pp: &PrimePartition) -> Option<usize> {
    let whole = Rational::new(
        (g.vertex_count() - 1).into(),
        g.edge_count().into(),
    );
    (whole != pp.opt).then(|| pp.elements.len() - 1)
}

pub fn degenerate_set(g: &Graph, pp: &PrimePartition) -> Option<EdgeSubset> {
    degenerate_index(g, pp).map(|d| pp.elements[d].clone())
}

/// Weight proportional to `t + 1 - i` on the `i`-th non-degenerate element
/// (1-based, construction order, `t` of them), zero on the degenerate set.
pub fn canonical_beta(pp: &PrimePartition) -> EdgeDistribution {
    let edge_count: usize = pp.elements.iter().map(|el| el.len()).sum();
    let levels: Vec<usize> = pp.nondegenerate().collect();
    let t = levels.len();
    let mut weights = vec![Rational::zero(); edge_count];
    for (rank, &i) in levels.iter().enumerate() {
        for &e in &pp.elements[i] {
            weights[e] = from_usize(t - rank);
        }
    }
    EdgeDistribution::normalized(weights).expect("partition has a non-degenerate element")
}

/// A minimum connected spanning tree under the canonical distribution.
pub fn build_ocsg(g: &Graph, pp: &PrimePartition) -> Result<EdgeSubset> {
    let h = min_csg(g, &canonical_beta(pp))?.witness;
    debug_assert!(is_ocsg(g, pp, &h));
    Ok(h)
}

/// Connected spanning and exactly `|P| * opt` edges from every
/// non-degenerate element `P`.
pub fn is_ocsg(g: &Graph, pp: &PrimePartition, h: &EdgeSubset) -> bool {
    is_connected_spanning(g, h)
        && pp
            .nondegenerate()
            .all(|i| from_usize(h.intersection_len(&pp.elements[i])) == pp.quota(i))
}
