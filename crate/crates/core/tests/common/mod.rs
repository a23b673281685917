#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use wiretap::rational::ratio;
use wiretap::strategy::{extreme_closed_sets, polytope_description};
use wiretap::{EdgeDistribution, Graph, OrderDag, PrimePartition, Rational};

/// Random weights in `0..=10`, normalized; about a third of the draws are
/// sparse.
pub fn random_distribution(rng: &mut impl Rng, m: usize) -> EdgeDistribution {
    loop {
        let sparse = rng.gen_ratio(1, 3);
        let weights: Vec<Rational> = (0..m)
            .map(|_| {
                if sparse && rng.gen_bool(0.5) {
                    ratio(0, 1)
                } else {
                    ratio(rng.gen_range(0..=10), 1)
                }
            })
            .collect();
        if let Ok(d) = EdgeDistribution::normalized(weights) {
            return d;
        }
    }
}

/// Convex combination of the polytope vertices with random coefficients in
/// `lo..=10`, at least one positive.
pub fn random_polytope_point(
    rng: &mut impl Rng,
    pp: &PrimePartition,
    dag: &OrderDag,
    lo: i64,
) -> EdgeDistribution {
    let vertices: Vec<EdgeDistribution> = extreme_closed_sets(dag)
        .expect("small order")
        .iter()
        .map(|c| c.uniform(pp))
        .collect();
    loop {
        let coeffs: Vec<i64> = vertices.iter().map(|_| rng.gen_range(lo..=10)).collect();
        let total: i64 = coeffs.iter().sum();
        if total == 0 {
            continue;
        }
        return combine(&vertices, &coeffs);
    }
}

pub fn combine(points: &[EdgeDistribution], coeffs: &[i64]) -> EdgeDistribution {
    let m = points[0].len();
    let total: i64 = coeffs.iter().sum();
    let weights = (0..m)
        .map(|e| {
            points
                .iter()
                .zip(coeffs)
                .map(|(p, &c)| p.weight(e) * ratio(c, total))
                .sum()
        })
        .collect();
    EdgeDistribution::new(weights).expect("convex combination")
}

/// Moves a random share of one edge's weight to another edge.
pub fn shifted(rng: &mut impl Rng, d: &EdgeDistribution) -> EdgeDistribution {
    let m = d.len();
    let mut weights = d.weights().to_vec();
    let from = loop {
        let e = rng.gen_range(0..m);
        if weights[e] > ratio(0, 1) {
            break e;
        }
    };
    let mut others: Vec<usize> = (0..m).filter(|&e| e != from).collect();
    others.shuffle(rng);
    let to = others[0];
    let share = weights[from].clone() * ratio(rng.gen_range(1..=4), 5);
    weights[from] -= &share;
    weights[to] += share;
    EdgeDistribution::new(weights).expect("mass preserved")
}

/// `d` with `step / |P_a|` added on element `a` and `step / |P_b|` removed
/// from element `b`, for every ordered pair of non-degenerate elements and
/// both signs; only points inside the polytope are returned.
pub fn pair_perturbations(
    pp: &PrimePartition,
    dag: &OrderDag,
    d: &EdgeDistribution,
    step: &Rational,
    parent_child_only: bool,
) -> Vec<EdgeDistribution> {
    let desc = polytope_description(pp, dag);
    let y = desc.point(d).expect("base point feasible");
    let n = y.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            if parent_child_only
                && !desc.order_inequalities.contains(&(a, b))
                && !desc.order_inequalities.contains(&(b, a))
            {
                continue;
            }
            let mut moved = y.clone();
            moved[a] += step / Rational::from_integer(desc.sizes[a].into());
            moved[b] -= step / Rational::from_integer(desc.sizes[b].into());
            if let Ok(p) = desc.distribution(&moved) {
                if desc.contains(&p) {
                    out.push(p);
                }
            }
        }
    }
    out
}

pub fn figure1() -> Graph {
    wiretap::fixtures::figure1()
}
