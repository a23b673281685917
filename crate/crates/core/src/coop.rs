//! The spanning connectivity game: players are edges, a coalition wins when
//! it contains a spanning tree.

use std::cmp::Ordering;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{is_connected_spanning, EdgeDistribution, EdgeSubset, Graph};
use crate::oracle::components;
use crate::rational::{Rational, Scaled};
use crate::strength::{strength_opt, WeightMap};

/// Edge cap for coalition enumeration.
pub const COALITION_CAP: usize = 16;

pub type Imputation = EdgeDistribution;

fn require_three(g: &Graph) -> Result<()> {
    if g.vertex_count() < 3 {
        return Err(Error::TooFewVertices {
            required: 3,
            found: g.vertex_count(),
        });
    }
    Ok(())
}

pub fn coalition_value(g: &Graph, s: &EdgeSubset) -> Result<u8> {
    require_three(g)?;
    Ok(u8::from(is_connected_spanning(g, s)))
}

/// `x(S) - v(S)`.
pub fn excess(g: &Graph, x: &Imputation, s: &EdgeSubset) -> Result<Rational> {
    let v = coalition_value(g, s)?;
    Ok(x.total(s) - Rational::from_integer(v.into()))
}

/// Excesses of every proper nonempty coalition, ascending, as integer
/// numerators over a shared denominator.
#[derive(Debug, Clone)]
pub struct ExcessVector {
    denominator: i128,
    numerators: Vec<i128>,
}

impl ExcessVector {
    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn get(&self, index: usize) -> Rational {
        Rational::new(self.numerators[index].into(), self.denominator.into())
    }

    pub fn min_excess(&self) -> Option<Rational> {
        (!self.is_empty()).then(|| self.get(0))
    }

    pub fn to_vec(&self) -> Vec<Rational> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    /// Minimum excess over all coalitions, counting the empty and grand
    /// coalitions whose excess is 0.
    pub fn min_excess_all(&self) -> Rational {
        self.min_excess()
            .map_or_else(Rational::zero, |m| m.min(Rational::zero()))
    }

    /// Distinct excesses over all coalitions, ascending, counting the empty
    /// and grand coalitions.
    pub fn levels(&self) -> Vec<Rational> {
        let mut levels: Vec<i128> = self.numerators.clone();
        levels.push(0);
        levels.sort_unstable();
        levels.dedup();
        levels
            .into_iter()
            .map(|n| Rational::new(n.into(), self.denominator.into()))
            .collect()
    }

    /// Lexicographic comparison of the ascending excess lists.
    pub fn lex_cmp(&self, other: &ExcessVector) -> Ordering {
        for (a, b) in self.numerators.iter().zip(&other.numerators) {
            let ord = (a * other.denominator).cmp(&(b * self.denominator));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.len().cmp(&other.len())
    }
}

impl PartialEq for ExcessVector {
    fn eq(&self, other: &Self) -> bool {
        self.lex_cmp(other) == Ordering::Equal
    }
}

impl Eq for ExcessVector {}

impl PartialOrd for ExcessVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExcessVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_cmp(other)
    }
}

/// Winning flags of every coalition mask, computed once per graph.
#[derive(Debug, Clone)]
pub struct CoalitionTable {
    edge_count: usize,
    winning: Vec<bool>,
}

impl CoalitionTable {
    pub fn new(g: &Graph) -> Result<Self> {
        require_three(g)?;
        let m = g.edge_count();
        if m > COALITION_CAP {
            return Err(Error::CapExceeded {
                what: "excess_vector",
                size: m,
                cap: COALITION_CAP,
            });
        }
        let winning = (0u64..1 << m)
            .into_par_iter()
            .map(|mask| components(g, mask) == 1)
            .collect();
        Ok(CoalitionTable {
            edge_count: m,
            winning,
        })
    }

    pub fn excess_vector(&self, x: &Imputation) -> Result<ExcessVector> {
        let m = self.edge_count;
        if x.len() != m {
            return Err(Error::InvalidDistribution(format!(
                "{} weights for {m} edges",
                x.len()
            )));
        }
        let scaled = Scaled::new(x.weights().iter())?;
        let full = (1usize << m) - 1;
        let mut sums = vec![0i128; full + 1];
        for mask in 1..=full {
            let low = mask.trailing_zeros() as usize;
            sums[mask] = sums[mask & (mask - 1)] + scaled.numerators[low];
        }
        let den = scaled.denominator;
        let mut numerators: Vec<i128> = (1..full)
            .map(|mask| sums[mask] - if self.winning[mask] { den } else { 0 })
            .collect();
        numerators.par_sort_unstable();
        Ok(ExcessVector {
            denominator: den,
            numerators,
        })
    }

    /// Minimum excess over all coalitions equals `opt - 1`.
    pub fn least_core_check(&self, x: &Imputation, opt: &Rational) -> Result<bool> {
        let ev = self.excess_vector(x)?;
        Ok(ev.min_excess_all() == opt - Rational::one())
    }
}

pub fn excess_vector(g: &Graph, x: &Imputation) -> Result<ExcessVector> {
    CoalitionTable::new(g)?.excess_vector(x)
}

pub fn least_core_check(g: &Graph, x: &Imputation) -> Result<bool> {
    let table = CoalitionTable::new(g)?;
    let opt = strength_opt(g, &WeightMap::unit(g.edge_count()))?.opt;
    table.least_core_check(x, &opt)
}

/// `a` is lexicographically at least `b`.
pub fn lex_dominates(a: &ExcessVector, b: &ExcessVector) -> bool {
    a.lex_cmp(b) != Ordering::Less
}
