//! The full analysis of a graph and its JSON form.
//!
//! Elements are numbered canonically in the JSON: ascending by smallest
//! contained edge id. Key order is fixed by the field order of the
//! serialized structs below.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::coop::{CoalitionTable, COALITION_CAP};
use crate::error::{Error, Result};
use crate::graph::{min_csg, EdgeDistribution, EdgeSubset, Graph};
use crate::oracle::Oracle;
use crate::order::{layers, leads_to_relation, parent_child, transitive_closure, transitive_reduction, OrderDag};
use crate::partition::{prime_partition, PrimePartition};
use crate::rational::{self, Rational};
use crate::strategy::{extreme_closed_sets, kappa, nucleolus, polytope_description};
use crate::strength::{strength_opt, WeightMap};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

/// Everything the analysis derives, keyed by edge sets so that it can be
/// relabelled and compared across edge orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub vertices: usize,
    pub edges: usize,
    pub opt: Rational,
    /// `(edges, degenerate)` in construction order.
    pub elements: Vec<(EdgeSubset, bool)>,
    /// `(parent, child)` indices into `elements`.
    pub parent_edges: BTreeSet<(usize, usize)>,
    pub layers: Vec<EdgeSubset>,
    /// Absent when opt = 1.
    pub kappa: Option<Rational>,
    pub nucleolus: Option<Vec<Rational>>,
    /// Closed sets, as indices into `elements`, giving the extreme points;
    /// absent when the order has too many nodes.
    pub extreme_points: Option<Vec<BTreeSet<usize>>>,
    /// Oracle checks, when requested.
    pub verification: Option<Vec<Check>>,
}

/// Element, order and layer computations shared by the CLI subcommands.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub opt: Rational,
    pub pp: PrimePartition,
    pub dag: OrderDag,
}

impl Pipeline {
    pub fn new(g: &Graph) -> Result<Self> {
        let pp = prime_partition(g)?;
        let dag = parent_child(g, &pp)?;
        Ok(Pipeline {
            opt: pp.opt.clone(),
            pp,
            dag,
        })
    }

    /// Construction-order indices sorted by smallest edge id.
    pub fn canonical_order(&self) -> Vec<usize> {
        canonical_order(self.pp.elements.iter())
    }

    /// Canonical number of every construction-order index.
    pub fn canonical_index(&self) -> Vec<usize> {
        invert(&self.canonical_order())
    }
}

fn canonical_order<'a>(elements: impl Iterator<Item = &'a EdgeSubset>) -> Vec<usize> {
    let mins: Vec<Option<usize>> = elements.map(|el| el.min_edge()).collect();
    let mut order: Vec<usize> = (0..mins.len()).collect();
    order.sort_by_key(|&i| mins[i]);
    order
}

fn invert(order: &[usize]) -> Vec<usize> {
    let mut inverse = vec![0; order.len()];
    for (canon, &i) in order.iter().enumerate() {
        inverse[i] = canon;
    }
    inverse
}

pub fn analyze(g: &Graph, verify: Option<&Oracle>) -> Result<AnalysisReport> {
    let p = Pipeline::new(g)?;
    let ly = layers(&p.dag, &p.pp);
    let nu = match nucleolus(&p.pp, &ly) {
        Ok(nu) => Some(nu),
        Err(Error::AssumptionViolated(_)) => None,
        Err(e) => return Err(e),
    };
    let extremes = match extreme_closed_sets(&p.dag) {
        Ok(sets) => Some(sets.into_iter().map(|c| c.members).collect()),
        Err(Error::CapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let mut report = AnalysisReport {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        opt: p.opt.clone(),
        elements: p
            .pp
            .elements
            .iter()
            .enumerate()
            .map(|(i, el)| (el.clone(), p.pp.is_degenerate(i)))
            .collect(),
        parent_edges: p.dag.parent_edges.clone(),
        layers: ly.layers.clone(),
        kappa: nu.as_ref().map(|_| kappa(&ly)),
        nucleolus: nu.as_ref().map(|d| d.weights().to_vec()),
        extreme_points: extremes,
        verification: None,
    };
    if let Some(oracle) = verify {
        report.verification = Some(verify_pipeline(g, &p, nu.as_ref(), oracle)?);
    }
    Ok(report)
}

/// Runs every oracle whose cap admits `g`. Fails with `CapExceeded` when the
/// graph is beyond the subset cap.
pub fn verify_pipeline(
    g: &Graph,
    p: &Pipeline,
    nu: Option<&EdgeDistribution>,
    oracle: &Oracle,
) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut check = |name: &str, passed: bool| {
        checks.push(Check {
            name: name.to_string(),
            passed,
        })
    };
    let brute = oracle.brute_opt(g)?;
    check("opt equals brute-force maximum cut-rate", brute.opt == p.opt);
    let fast = strength_opt(g, &WeightMap::unit(g.edge_count()))?;
    check("strength witness attains opt", crate::strength::unit_cut_rate(g, &fast.argmax) == p.opt);

    if g.edge_count() <= oracle.csg_cap {
        let relation = leads_to_relation(g, &p.pp, oracle)?;
        let closure = transitive_closure(&p.dag.nodes, &relation);
        check("leads-to closure equals ancestors", closure == p.dag.ancestors);
        check(
            "leads-to reduction equals parent edges",
            transitive_reduction(&p.dag.nodes, &closure) == p.dag.parent_edges,
        );
        if let Some(nu) = nu {
            let stats = oracle.response_stats(g, nu)?;
            let ocsgs = oracle.enumerate_ocsgs(g, &p.pp)?;
            let ly = layers(&p.dag, &p.pp);
            check("nucleolus best response equals opt", stats.best_weight == p.opt);
            check("nucleolus best responses are the OCSGs", stats.best_count == ocsgs.len());
            check(
                "nucleolus second best equals opt + kappa",
                stats.second_best_weight == Some(&p.opt + kappa(&ly)),
            );
        }
    } else {
        return Err(Error::CapExceeded {
            what: "verify (connected spanning subgraphs)",
            size: g.edge_count(),
            cap: oracle.csg_cap,
        });
    }

    if let Ok(sets) = extreme_closed_sets(&p.dag) {
        let desc = polytope_description(&p.pp, &p.dag);
        let all_vertices = sets
            .iter()
            .map(|c| oracle.vertex_check(&desc, &c.uniform(&p.pp)))
            .collect::<Result<Vec<bool>>>()?;
        check("extreme points are polytope vertices", all_vertices.iter().all(|&v| v));
    }

    if let Some(nu) = nu {
        if g.edge_count() <= COALITION_CAP && g.vertex_count() >= 3 {
            let table = CoalitionTable::new(g)?;
            check("nucleolus is in the least core", table.least_core_check(nu, &p.opt)?);
        }
        check(
            "nucleolus value equals opt",
            min_csg(g, nu)?.weight == p.opt,
        );
    }
    Ok(checks)
}

impl AnalysisReport {
    pub fn verified(&self) -> Option<bool> {
        self.verification
            .as_ref()
            .map(|checks| checks.iter().all(|c| c.passed))
    }

    /// Renames edges: edge `e` becomes `map[e]`.
    pub fn relabel_edges(&self, map: &[usize]) -> AnalysisReport {
        let relabel = |s: &EdgeSubset| s.iter().map(|&e| map[e]).collect::<EdgeSubset>();
        let mut out = self.clone();
        out.elements = self
            .elements
            .iter()
            .map(|(el, deg)| (relabel(el), *deg))
            .collect();
        out.layers = self.layers.iter().map(relabel).collect();
        out.nucleolus = self.nucleolus.as_ref().map(|nu| {
            let mut permuted = nu.clone();
            for (e, w) in nu.iter().enumerate() {
                permuted[map[e]] = w.clone();
            }
            permuted
        });
        out
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.json()).expect("serializable");
        text.push('\n');
        text
    }

    fn json(&self) -> ReportJson {
        let order = canonical_order(self.elements.iter().map(|(el, _)| el));
        let canon = invert(&order);
        let parent_edges: BTreeSet<(usize, usize)> = self
            .parent_edges
            .iter()
            .map(|&(p, c)| (canon[p], canon[c]))
            .collect();
        let variables: Vec<usize> = (0..self.elements.len())
            .filter(|&i| !self.elements[order[i]].1)
            .collect();
        let nonnegative: Vec<usize> = variables
            .iter()
            .copied()
            .filter(|&v| !parent_edges.iter().any(|&(p, _)| p == v))
            .collect();
        let extreme_points = self.extreme_points.as_ref().map(|sets| {
            let mut rows: Vec<ExtremeJson> = sets
                .iter()
                .map(|set| {
                    let closed: BTreeSet<usize> = set.iter().map(|&i| canon[i]).collect();
                    let support: usize = set.iter().map(|&i| self.elements[i].0.len()).sum();
                    ExtremeJson {
                        closed_set: closed.into_iter().collect(),
                        support_size: support,
                        weight: rational::format(&Rational::new(1.into(), support.into())),
                    }
                })
                .collect();
            rows.sort_by(|a, b| {
                (a.closed_set.len(), &a.closed_set).cmp(&(b.closed_set.len(), &b.closed_set))
            });
            rows
        });
        ReportJson {
            vertices: self.vertices,
            edges: self.edges,
            opt: rational::format(&self.opt),
            partition: order
                .iter()
                .map(|&i| ElementJson {
                    edges: self.elements[i].0.to_vec(),
                    degenerate: self.elements[i].1,
                })
                .collect(),
            parent_edges: parent_edges.iter().map(|&(p, c)| [p, c]).collect(),
            layers: self.layers.iter().map(|l| l.to_vec()).collect(),
            kappa: self.kappa.as_ref().map(rational::format),
            nucleolus: self.nucleolus.as_ref().map(|nu| EdgeMap(nu.iter().map(rational::format).collect())),
            polytope: PolytopeJson {
                normalization: NormalizationJson {
                    coefficients: variables
                        .iter()
                        .map(|&v| rational::format(&Rational::from_integer(self.elements[order[v]].0.len().into())))
                        .collect(),
                    rhs: rational::format(&Rational::one()),
                },
                order_inequalities: parent_edges.iter().map(|&(p, c)| [p, c]).collect(),
                nonnegative,
                inequality_count: parent_edges.len() + variables.iter().filter(|&&v| !parent_edges.iter().any(|&(p, _)| p == v)).count() + 1,
                variables,
            },
            extreme_points,
            verification: self.verification.as_ref().map(|checks| VerificationJson {
                status: if checks.iter().all(|c| c.passed) { "passed" } else { "failed" },
                checks: checks
                    .iter()
                    .map(|c| CheckJson {
                        name: c.name.clone(),
                        passed: c.passed,
                    })
                    .collect(),
            }),
        }
    }
}

#[derive(Serialize)]
struct ReportJson {
    vertices: usize,
    edges: usize,
    opt: String,
    partition: Vec<ElementJson>,
    parent_edges: Vec<[usize; 2]>,
    layers: Vec<Vec<usize>>,
    kappa: Option<String>,
    nucleolus: Option<EdgeMap>,
    polytope: PolytopeJson,
    extreme_points: Option<Vec<ExtremeJson>>,
    verification: Option<VerificationJson>,
}

#[derive(Serialize)]
struct ElementJson {
    edges: Vec<usize>,
    degenerate: bool,
}

#[derive(Serialize)]
struct PolytopeJson {
    /// Canonical element index of every variable.
    variables: Vec<usize>,
    normalization: NormalizationJson,
    order_inequalities: Vec<[usize; 2]>,
    nonnegative: Vec<usize>,
    inequality_count: usize,
}

#[derive(Serialize)]
struct NormalizationJson {
    coefficients: Vec<String>,
    rhs: String,
}

#[derive(Serialize)]
struct ExtremeJson {
    closed_set: Vec<usize>,
    support_size: usize,
    weight: String,
}

#[derive(Serialize)]
struct VerificationJson {
    status: &'static str,
    checks: Vec<CheckJson>,
}

#[derive(Serialize)]
struct CheckJson {
    name: String,
    passed: bool,
}

/// Edge id to value, keys in numeric order.
pub(crate) struct EdgeMap(pub Vec<String>);

impl Serialize for EdgeMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (e, value) in self.0.iter().enumerate() {
            map.serialize_entry(&e.to_string(), value)?;
        }
        map.end()
    }
}

/// Element index to its layer, canonical numbering; handy for text output.
pub fn canonical_levels(p: &Pipeline) -> BTreeMap<usize, usize> {
    let canon = p.canonical_index();
    layers(&p.dag, &p.pp)
        .level_of()
        .into_iter()
        .map(|(el, level)| (canon[el], level))
        .collect()
}
