//! Undirected multigraphs with stable edge ids, connectivity primitives and
//! minimum connected spanning subgraphs.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::Deref;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            sets: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` when `a` and `b` were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.sets -= 1;
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn set_count(&self) -> usize {
        self.sets
    }
}

/// A set of edge ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSubset(BTreeSet<usize>);

impl EdgeSubset {
    pub fn new() -> Self {
        EdgeSubset(BTreeSet::new())
    }

    pub fn full(edge_count: usize) -> Self {
        (0..edge_count).collect()
    }

    pub fn from_mask(mask: u64) -> Self {
        (0..64).filter(|i| mask >> i & 1 == 1).collect()
    }

    pub fn insert(&mut self, edge: usize) -> bool {
        self.0.insert(edge)
    }

    pub fn remove(&mut self, edge: usize) -> bool {
        self.0.remove(&edge)
    }

    pub fn union(&self, other: &EdgeSubset) -> EdgeSubset {
        self.0.union(&other.0).copied().collect()
    }

    pub fn difference(&self, other: &EdgeSubset) -> EdgeSubset {
        self.0.difference(&other.0).copied().collect()
    }

    pub fn intersection_len(&self, other: &EdgeSubset) -> usize {
        self.0.intersection(&other.0).count()
    }

    pub fn min_edge(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.iter().copied().collect()
    }

    pub fn into_inner(self) -> BTreeSet<usize> {
        self.0
    }
}

impl Deref for EdgeSubset {
    type Target = BTreeSet<usize>;

    fn deref(&self) -> &BTreeSet<usize> {
        &self.0
    }
}

impl FromIterator<usize> for EdgeSubset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        EdgeSubset(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a EdgeSubset {
    type Item = &'a usize;
    type IntoIter = std::collections::btree_set::Iter<'a, usize>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for EdgeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Undirected multigraph. Vertex ids are `0..vertex_count()`, edge ids are
/// `0..edge_count()` in input order. Self-loops are rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph on vertices `0..vertex_count` named `v0, v1, ...`.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let names = (0..vertex_count).map(|i| format!("v{i}")).collect();
        Self::with_names(names, edges)
    }

    pub fn with_names(names: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::TooFewVertices {
                required: 1,
                found: 0,
            });
        }
        for (i, &(u, v)) in edges.iter().enumerate() {
            for x in [u, v] {
                if x >= names.len() {
                    return Err(Error::OutOfRange {
                        index: x,
                        len: names.len(),
                    });
                }
            }
            if u == v {
                return Err(Error::SelfLoop {
                    line: i + 1,
                    vertex: names[u].clone(),
                });
            }
        }
        Ok(Graph { names, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        self.edges[edge]
    }

    pub fn vertex_name(&self, vertex: usize) -> &str {
        &self.names[vertex]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn all_edges(&self) -> EdgeSubset {
        EdgeSubset::full(self.edge_count())
    }

    pub fn is_connected(&self) -> bool {
        component_count(self, &EdgeSubset::new()) == 1
    }

    /// Same vertices, edges reordered so that new edge `i` is old edge
    /// `order[i]`.
    pub fn permute_edges(&self, order: &[usize]) -> Graph {
        Graph {
            names: self.names.clone(),
            edges: order.iter().map(|&i| self.edges[i]).collect(),
        }
    }

    /// Renders the graph in the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        self.edges
            .iter()
            .map(|&(u, v)| format!("{} {}\n", self.names[u], self.names[v]))
            .collect()
    }

    /// Number of components of `(V, E \ removed)` restricted by a predicate
    /// on kept edges; the building block for all component counts.
    pub(crate) fn components_where(&self, keep: impl Fn(usize) -> bool) -> usize {
        let mut uf = UnionFind::new(self.vertex_count());
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if keep(i) {
                uf.union(u, v);
            }
        }
        uf.set_count()
    }
}

/// Parses the edge-list format: one `u v` pair per line, `#` starts a
/// comment line, blank lines are skipped. Vertices are numbered by first
/// appearance.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut names = Vec::new();
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("expected `u v`, found {} tokens", tokens.len()),
            });
        }
        if tokens[0] == tokens[1] {
            return Err(Error::SelfLoop {
                line: lineno + 1,
                vertex: tokens[0].to_string(),
            });
        }
        let mut id = |name: &str| {
            *index.entry(name.to_string()).or_insert_with(|| {
                names.push(name.to_string());
                names.len() - 1
            })
        };
        let u = id(tokens[0]);
        let v = id(tokens[1]);
        edges.push((u, v));
    }
    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Ok(Graph { names, edges })
}

/// `C_G(removed)`: number of connected components of `(V, E \ removed)`.
pub fn component_count(g: &Graph, removed: &EdgeSubset) -> usize {
    g.components_where(|e| !removed.contains(&e))
}

pub fn is_connected_spanning(g: &Graph, s: &EdgeSubset) -> bool {
    g.components_where(|e| s.contains(&e)) == 1
}

/// Probability distribution over edges, indexed by edge id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeDistribution {
    weights: Vec<Rational>,
}

impl EdgeDistribution {
    /// Validates nonnegativity and that the weights sum to exactly one.
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if let Some(e) = weights.iter().position(|w| w.is_negative()) {
            return Err(Error::InvalidDistribution(format!(
                "edge {e} has negative weight {}",
                rational::format(&weights[e])
            )));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {}",
                rational::format(&total)
            )));
        }
        Ok(EdgeDistribution { weights })
    }

    /// Normalizes nonnegative weights with a positive total.
    pub fn normalized(weights: Vec<Rational>) -> Result<Self> {
        let total: Rational = weights.iter().sum();
        if !total.is_positive() {
            return Err(Error::InvalidDistribution(
                "weights must have a positive total".into(),
            ));
        }
        Self::new(weights.into_iter().map(|w| w / &total).collect())
    }

    /// Uniform on `support`, zero elsewhere.
    pub fn uniform_on(edge_count: usize, support: &EdgeSubset) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        let w = Rational::new(1.into(), support.len().into());
        Self::new(
            (0..edge_count)
                .map(|e| {
                    if support.contains(&e) {
                        w.clone()
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
        )
    }

    pub fn uniform(edge_count: usize) -> Result<Self> {
        Self::uniform_on(edge_count, &EdgeSubset::full(edge_count))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, edge: usize) -> &Rational {
        &self.weights[edge]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn total(&self, s: &EdgeSubset) -> Rational {
        s.iter().map(|&e| &self.weights[e]).sum()
    }

    pub fn support(&self) -> EdgeSubset {
        (0..self.len())
            .filter(|&e| self.weights[e].is_positive())
            .collect()
    }
}

/// Distinct weight levels of a distribution in strictly decreasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightClasses {
    pub classes: Vec<(Rational, EdgeSubset)>,
}

impl WeightClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Rebuilds the per-edge weights the classes were built from.
    pub fn to_weights(&self, edge_count: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); edge_count];
        for (w, set) in &self.classes {
            for &e in set {
                out[e] = w.clone();
            }
        }
        out
    }
}

pub fn weight_classes(_g: &Graph, d: &EdgeDistribution) -> WeightClasses {
    let mut by_weight: BTreeMap<&Rational, EdgeSubset> = BTreeMap::new();
    for (e, w) in d.weights().iter().enumerate() {
        by_weight.entry(w).or_default().insert(e);
    }
    WeightClasses {
        classes: by_weight
            .into_iter()
            .rev()
            .map(|(w, set)| (w.clone(), set))
            .collect(),
    }
}

/// A minimum-weight connected spanning subgraph and its weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCsg {
    pub weight: Rational,
    pub witness: EdgeSubset,
}

/// Minimum spanning tree under `d` with ties broken by ascending edge id.
/// With nonnegative weights it is a minimum-weight connected spanning
/// subgraph.
pub fn min_csg(g: &Graph, d: &EdgeDistribution) -> Result<MinCsg> {
    if d.len() != g.edge_count() {
        return Err(Error::InvalidDistribution(format!(
            "distribution has {} entries for {} edges",
            d.len(),
            g.edge_count()
        )));
    }
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.sort_by(|&a, &b| d.weight(a).cmp(d.weight(b)).then(a.cmp(&b)));
    let mut uf = UnionFind::new(g.vertex_count());
    let mut witness = EdgeSubset::new();
    let mut weight = Rational::zero();
    for e in order {
        let (u, v) = g.endpoints(e);
        if uf.union(u, v) {
            witness.insert(e);
            weight += d.weight(e);
        }
    }
    if uf.set_count() != 1 {
        return Err(Error::Disconnected);
    }
    Ok(MinCsg { weight, witness })
}
