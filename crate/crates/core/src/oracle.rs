//! Exhaustive reference implementations, evaluated straight from the
//! definitions. Exponential in the edge count; every entry point checks the
//! configured cap first.

pub mod corpus;

use std::cmp::Ordering;

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{EdgeDistribution, EdgeSubset, Graph, UnionFind};
use crate::partition::PrimePartition;
use crate::rational::{Rational, Scaled};
use crate::strategy::PolytopeDescription;
use crate::strength::StrengthResult;

/// Largest mask width any enumeration accepts.
const MASK_BITS: usize = 63;

/// Enumeration caps, in edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    /// Cap for subset enumeration (`brute_opt`).
    pub subset_cap: usize,
    /// Cap for connected-spanning-subgraph enumeration.
    pub csg_cap: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            subset_cap: 20,
            csg_cap: 14,
        }
    }
}

/// Best-response statistics of the hider against a distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponseStats {
    pub best_weight: Rational,
    pub best_count: usize,
    pub second_best_weight: Option<Rational>,
}

impl Oracle {
    /// Both caps set to `edges`.
    pub fn with_cap(edges: usize) -> Self {
        Oracle {
            subset_cap: edges,
            csg_cap: edges,
        }
    }

    fn check(what: &'static str, size: usize, cap: usize) -> Result<()> {
        if size > cap.min(MASK_BITS) {
            return Err(Error::CapExceeded {
                what,
                size,
                cap: cap.min(MASK_BITS),
            });
        }
        Ok(())
    }

    /// Maximum unit cut-rate over all nonempty subsets. Ties go to the
    /// smaller subset, then to the lexicographically smaller id list.
    pub fn brute_opt(&self, g: &Graph) -> Result<StrengthResult> {
        let m = g.edge_count();
        Self::check("brute_opt", m, self.subset_cap)?;
        let base = components(g, (1u64 << m) - 1);
        // (gain, size, mask)
        let best = (1u64..1 << m)
            .into_par_iter()
            .map(|mask| {
                let gain = components(g, !mask & ((1u64 << m) - 1)) - base;
                (gain, mask.count_ones() as usize, mask)
            })
            .reduce(
                || (0, 1, 0),
                |a, b| if better(&b, &a) { b } else { a },
            );
        Ok(StrengthResult {
            opt: Rational::new(best.0.into(), best.1.into()),
            argmax: EdgeSubset::from_mask(best.2),
        })
    }

    /// Every subset of edges forming a connected spanning subgraph, by
    /// ascending mask.
    pub fn enumerate_csgs(&self, g: &Graph) -> Result<Vec<EdgeSubset>> {
        Ok(self.csg_masks(g)?.into_iter().map(EdgeSubset::from_mask).collect())
    }

    pub(crate) fn csg_masks(&self, g: &Graph) -> Result<Vec<u64>> {
        let m = g.edge_count();
        Self::check("enumerate_csgs", m, self.csg_cap)?;
        Ok((0u64..1 << m)
            .into_par_iter()
            .filter(|&mask| components(g, mask) == 1)
            .collect())
    }

    pub fn response_stats(&self, g: &Graph, d: &EdgeDistribution) -> Result<ResponseStats> {
        let masks = self.csg_masks(g)?;
        let scaled = Scaled::new(d.weights().iter())?;
        let mut weights: Vec<i128> = masks
            .par_iter()
            .map(|&mask| mask_weight(mask, &scaled.numerators))
            .collect();
        weights.sort_unstable();
        let best = weights[0];
        let best_count = weights.iter().take_while(|&&w| w == best).count();
        Ok(ResponseStats {
            best_weight: scaled.to_rational(best),
            best_count,
            second_best_weight: weights.get(best_count).map(|&w| scaled.to_rational(w)),
        })
    }

    /// Every OCSG: subsets taking exactly `|P| * opt` edges from each
    /// non-degenerate element and any edges of the degenerate set, kept when
    /// connected and spanning.
    pub fn enumerate_ocsgs(&self, g: &Graph, pp: &PrimePartition) -> Result<Vec<EdgeSubset>> {
        Self::check("enumerate_ocsgs", g.edge_count(), self.csg_cap)?;
        Ok(quota_candidates(pp, false)
            .into_par_iter()
            .filter(|&mask| components(g, mask) == 1)
            .map(EdgeSubset::from_mask)
            .collect())
    }

    /// OCSGs containing the whole degenerate set. Adding degenerate edges
    /// preserves every quota and connectivity, so these are the maximal ones.
    pub(crate) fn enumerate_saturated_ocsgs(
        &self,
        g: &Graph,
        pp: &PrimePartition,
    ) -> Result<Vec<EdgeSubset>> {
        Self::check("enumerate_ocsgs", g.edge_count(), self.csg_cap)?;
        Ok(quota_candidates(pp, true)
            .into_par_iter()
            .filter(|&mask| components(g, mask) == 1)
            .map(EdgeSubset::from_mask)
            .collect())
    }

    /// `true` when the constraints of `desc` that are tight at `d` have full
    /// rank in the element-variable space.
    pub fn vertex_check(&self, desc: &PolytopeDescription, d: &EdgeDistribution) -> Result<bool> {
        let y = desc.point(d)?;
        let n = desc.variables.len();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        rows.push(desc.sizes.iter().map(|&s| Rational::from_integer(s.into())).collect());
        for &(p, c) in &desc.order_inequalities {
            if y[p] == y[c] {
                let mut row = vec![Rational::zero(); n];
                row[p] = Rational::from_integer(1.into());
                row[c] = Rational::from_integer((-1).into());
                rows.push(row);
            }
        }
        for &s in &desc.nonneg {
            if y[s].is_zero() {
                let mut row = vec![Rational::zero(); n];
                row[s] = Rational::from_integer(1.into());
                rows.push(row);
            }
        }
        Ok(rank(rows) == n)
    }
}

fn better(a: &(usize, usize, u64), b: &(usize, usize, u64)) -> bool {
    // compare gain_a/size_a with gain_b/size_b
    match (a.0 * b.1).cmp(&(b.0 * a.1)) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => match a.1.cmp(&b.1) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => lex_ids(a.2, b.2) == Ordering::Less,
        },
    }
}

/// Lexicographic order of the ascending id lists of two equal-size masks.
fn lex_ids(a: u64, b: u64) -> Ordering {
    let diff = a ^ b;
    if diff == 0 {
        return Ordering::Equal;
    }
    // the first differing id belongs to the list that is smaller there
    if a >> diff.trailing_zeros() & 1 == 1 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Components of `(V, {e : bit e of kept})`.
pub(crate) fn components(g: &Graph, kept: u64) -> usize {
    let mut uf = UnionFind::new(g.vertex_count());
    let mut bits = kept;
    while bits != 0 {
        let e = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let (u, v) = g.endpoints(e);
        uf.union(u, v);
    }
    uf.set_count()
}

pub(crate) fn mask_weight(mask: u64, weights: &[i128]) -> i128 {
    let mut bits = mask;
    let mut total = 0;
    while bits != 0 {
        total += weights[bits.trailing_zeros() as usize];
        bits &= bits - 1;
    }
    total
}

/// Edge masks meeting every non-degenerate quota; the degenerate set is
/// either free or fully included.
fn quota_candidates(pp: &PrimePartition, saturate_degenerate: bool) -> Vec<u64> {
    let mut partial = vec![0u64];
    for i in 0..pp.len() {
        let members = pp.elements[i].to_vec();
        let options: Vec<u64> = if pp.is_degenerate(i) {
            let full: u64 = members.iter().map(|&e| 1u64 << e).sum();
            if saturate_degenerate {
                vec![full]
            } else {
                subsets_of(&members)
            }
        } else {
            let quota = pp.quota(i);
            if !quota.is_integer() {
                return Vec::new();
            }
            let k = quota.to_integer().to_usize().unwrap_or(usize::MAX);
            combinations(&members, k)
        };
        partial = partial
            .iter()
            .flat_map(|&p| options.iter().map(move |&o| p | o))
            .collect();
    }
    partial
}

fn subsets_of(members: &[usize]) -> Vec<u64> {
    (0u64..1 << members.len())
        .map(|sel| {
            members
                .iter()
                .enumerate()
                .filter(|(i, _)| sel >> i & 1 == 1)
                .map(|(_, &e)| 1u64 << e)
                .sum()
        })
        .collect()
}

fn combinations(members: &[usize], k: usize) -> Vec<u64> {
    subsets_of(members)
        .into_iter()
        .filter(|m| m.count_ones() as usize == k)
        .collect()
}

/// Rank by fraction-exact Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let lead = rows[rank][col].clone();
        for v in &mut rows[rank][col..] {
            *v /= &lead;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = row[col].clone();
                for (v, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *v -= &factor * p;
                }
            }
        }
        rank += 1;
    }
    rank
}
