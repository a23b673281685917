//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero when any
//! criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use wiretap::coop::{lex_dominates, CoalitionTable};
use wiretap::oracle::corpus::{corpus, CorpusGraph};
use wiretap::order::{leads_to_relation, transitive_closure, transitive_reduction};
use wiretap::rational::ratio;
use wiretap::report::analyze;
use wiretap::strategy::{extreme_closed_sets, kappa};
use wiretap::strength::unit_cut_rate;
use wiretap::*;

use common::*;

const SEED: u64 = 20_240_601;
const RANDOM_GRAPHS: usize = 100;

/// Everything the criteria share for one graph.
struct Case {
    name: String,
    g: Graph,
    opt: Rational,
    pp: PrimePartition,
    dag: OrderDag,
    layers: Layers,
    nu: Option<EdgeDistribution>,
}

impl Case {
    fn new(name: &str, g: Graph) -> Case {
        let opt = strength_opt(&g, &WeightMap::unit(g.edge_count())).unwrap().opt;
        let pp = prime_partition(&g).unwrap();
        let dag = parent_child(&g, &pp).unwrap();
        let ly = layers(&dag, &pp);
        let nu = nucleolus(&pp, &ly).ok();
        Case {
            name: name.to_string(),
            g,
            opt,
            pp,
            dag,
            layers: ly,
            nu,
        }
    }

    fn m(&self) -> usize {
        self.g.edge_count()
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        let h = self
            .name
            .bytes()
            .fold(salt, |h, b| h.wrapping_mul(31).wrapping_add(b.into()));
        ChaCha8Rng::seed_from_u64(h)
    }

    fn vertices(&self) -> Vec<EdgeDistribution> {
        extreme_closed_sets(&self.dag)
            .unwrap()
            .iter()
            .map(|c| c.uniform(&self.pp))
            .collect()
    }
}

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn from_failures(failures: Vec<String>) -> Self {
        Outcome {
            failures,
            notes: Vec::new(),
        }
    }
}

fn collect(per_case: Vec<Vec<String>>) -> Vec<String> {
    per_case.into_iter().flatten().collect()
}

fn criterion1() -> Outcome {
    let mut f = Vec::new();
    let g = figure1();
    let start = Instant::now();
    let case = Case::new("figure1", g.clone());
    let elapsed = start.elapsed();

    if (g.vertex_count(), g.edge_count()) != (13, 26) {
        f.push(format!("fixture has {} vertices, {} edges", g.vertex_count(), g.edge_count()));
    }
    if case.opt != ratio(1, 2) {
        f.push(format!("opt = {}", case.opt));
    }
    let mut sizes: Vec<usize> = case.pp.elements.iter().map(|e| e.len()).collect();
    sizes.sort();
    if sizes != vec![2, 2, 6, 6, 10] {
        f.push(format!("element sizes {sizes:?}"));
    }
    let k5: EdgeSubset = (16..26).collect();
    if degenerate_set(&g, &case.pp) != Some(k5) {
        f.push("degenerate set is not the K5".into());
    }
    let layer_sizes: Vec<usize> = case.layers.layers.iter().map(|l| l.len()).collect();
    if layer_sizes != vec![12, 2, 2] {
        f.push(format!("layer sizes {layer_sizes:?}"));
    }
    if kappa(&case.layers) != ratio(1, 22) {
        f.push(format!("kappa = {}", kappa(&case.layers)));
    }
    let nu = case.nu.as_ref().expect("opt < 1");
    let expected = |e: usize| match e {
        0 | 1 => ratio(3, 22),
        2 | 3 => ratio(2, 22),
        4..=15 => ratio(1, 22),
        _ => ratio(0, 1),
    };
    if (0..26).any(|e| *nu.weight(e) != expected(e)) {
        f.push("nucleolus values differ from 3/22, 2/22, 1/22, 0 by layer".into());
    }
    if min_csg(&g, nu).unwrap().weight != ratio(1, 2) {
        f.push("min_csg(nu) != 1/2".into());
    }
    if elapsed >= Duration::from_secs(1) {
        f.push(format!("pipeline took {elapsed:?}"));
    }
    Outcome {
        failures: f,
        notes: vec![format!("pipeline {elapsed:.2?}")],
    }
}

fn criterion2(graphs: &[CorpusGraph]) -> Outcome {
    let start = Instant::now();
    let oracle = Oracle::default();
    let checked: Vec<&CorpusGraph> = graphs
        .iter()
        .filter(|c| c.graph.edge_count() <= oracle.subset_cap)
        .collect();
    let failures = collect(
        checked
            .par_iter()
            .map(|c| {
                let fast = strength_opt(&c.graph, &WeightMap::unit(c.graph.edge_count()))
                    .unwrap();
                let brute = oracle.brute_opt(&c.graph).unwrap();
                let mut f = Vec::new();
                if fast.opt != brute.opt {
                    f.push(format!("{}: strength {} vs brute {}", c.name, fast.opt, brute.opt));
                }
                if unit_cut_rate(&c.graph, &fast.argmax) != fast.opt {
                    f.push(format!("{}: witness does not attain opt", c.name));
                }
                f
            })
            .collect(),
    );
    let elapsed = start.elapsed();
    let mut failures = failures;
    if elapsed >= Duration::from_secs(120) {
        failures.push(format!("took {elapsed:?}"));
    }
    Outcome {
        failures,
        notes: vec![format!("{} graphs, {elapsed:.2?}", checked.len())],
    }
}

fn criterion3(cases: &[Case]) -> Outcome {
    let failures = collect(
        cases
            .par_iter()
            .map(|c| {
                let mut f = Vec::new();
                if let Some(nu) = &c.nu {
                    let w = min_csg(&c.g, nu).unwrap().weight;
                    if w != c.opt {
                        f.push(format!("{}: min_csg(nu) = {w}, opt = {}", c.name, c.opt));
                    }
                }
                let mut rng = c.rng(3);
                for _ in 0..1000 {
                    let d = random_distribution(&mut rng, c.m());
                    let w = min_csg(&c.g, &d).unwrap().weight;
                    if w > c.opt {
                        f.push(format!("{}: min_csg {w} exceeds opt {}", c.name, c.opt));
                        break;
                    }
                }
                f
            })
            .collect(),
    );
    Outcome::from_failures(failures)
}

/// Up to `count` distributions outside the polytope, from random draws and
/// from shifted polytope points.
fn non_members(c: &Case, rng: &mut ChaCha8Rng, count: usize) -> Vec<EdgeDistribution> {
    let mut out = Vec::new();
    if c.m() < 2 {
        return out;
    }
    for attempt in 0..count * 20 {
        if out.len() == count {
            break;
        }
        let d = if attempt % 2 == 0 {
            random_distribution(rng, c.m())
        } else {
            let base = random_polytope_point(rng, &c.pp, &c.dag, 0);
            shifted(rng, &base)
        };
        if !is_maxmin(&c.g, &c.pp, &c.dag, &d) {
            out.push(d);
        }
    }
    out
}

fn criterion4(cases: &[&Case]) -> Outcome {
    let results: Vec<(Vec<String>, usize)> = cases
        .par_iter()
        .map(|c| {
            let mut f = Vec::new();
            let mut rng = c.rng(4);
            let mut members = c.vertices();
            members.extend((0..100).map(|_| random_polytope_point(&mut rng, &c.pp, &c.dag, 0)));
            for d in &members {
                let value = min_csg(&c.g, d).unwrap().weight;
                if !is_maxmin(&c.g, &c.pp, &c.dag, d) || value != c.opt {
                    f.push(format!("{}: polytope point with value {value}", c.name));
                    break;
                }
            }
            let outside = non_members(c, &mut rng, 100);
            for d in &outside {
                let value = min_csg(&c.g, d).unwrap().weight;
                if value == c.opt {
                    f.push(format!("{}: non-member attains opt", c.name));
                    break;
                }
            }
            (f, outside.len())
        })
        .collect();
    let short: Vec<&str> = cases
        .iter()
        .zip(&results)
        .filter(|(_, (_, n))| *n < 100)
        .map(|(c, _)| c.name.as_str())
        .collect();
    Outcome {
        failures: results.into_iter().flat_map(|(f, _)| f).collect(),
        notes: vec![format!(
            "{} graphs; fewer than 100 non-members exist or were found for: {}",
            cases.len(),
            if short.is_empty() { "none".to_string() } else { short.join(", ") }
        )],
    }
}

fn criterion5(cases: &[&Case], figure1: &Case) -> Outcome {
    let oracle = Oracle::default();
    let wide = Oracle::with_cap(figure1.m());
    let mut jobs: Vec<(&Case, &Oracle)> = cases.iter().map(|c| (*c, &oracle)).collect();
    jobs.push((figure1, &wide));
    let failures = collect(
        jobs.par_iter()
            .map(|(c, oracle)| {
                let relation = leads_to_relation(&c.g, &c.pp, oracle).unwrap();
                let closure = transitive_closure(&c.dag.nodes, &relation);
                let mut f = Vec::new();
                if closure != c.dag.ancestors {
                    f.push(format!("{}: closure differs from ancestors", c.name));
                }
                if transitive_reduction(&c.dag.nodes, &closure) != c.dag.parent_edges {
                    f.push(format!("{}: reduction differs from parent edges", c.name));
                }
                f
            })
            .collect(),
    );
    Outcome {
        failures,
        notes: vec![format!("{} graphs", jobs.len())],
    }
}

fn criterion6(cases: &[&Case]) -> Outcome {
    let oracle = Oracle::default();
    let results: Vec<(Vec<String>, usize)> = cases
        .par_iter()
        .filter(|c| c.nu.is_some())
        .map(|c| {
            let mut f = Vec::new();
            let nu = c.nu.as_ref().unwrap();
            let k = kappa(&c.layers);
            let ocsgs = oracle.enumerate_ocsgs(&c.g, &c.pp).unwrap().len();
            let stats = oracle.response_stats(&c.g, nu).unwrap();
            if stats.best_weight != c.opt || stats.best_count != ocsgs {
                f.push(format!(
                    "{}: nu best {} x{} vs opt {} x{ocsgs}",
                    c.name, stats.best_weight, stats.best_count, c.opt
                ));
            }
            let target = &c.opt + &k;
            if stats.second_best_weight.as_ref() != Some(&target) {
                f.push(format!(
                    "{}: second best {:?} vs opt + kappa {target}",
                    c.name, stats.second_best_weight
                ));
            }
            let mut rng = c.rng(6);
            let mut others: Vec<EdgeDistribution> =
                (0..20).map(|_| random_polytope_point(&mut rng, &c.pp, &c.dag, 1)).collect();
            others.extend(pair_perturbations(&c.pp, &c.dag, nu, &(&k / ratio(10, 1)), false));
            let mut tested = 0;
            for d in others.iter().filter(|d| *d != nu) {
                let s = oracle.response_stats(&c.g, d).unwrap();
                if is_pdist(&c.pp, &c.dag, d) {
                    tested += 1;
                    if s.best_count != ocsgs {
                        f.push(format!("{}: pdist with {} best responses", c.name, s.best_count));
                        break;
                    }
                    if s.second_best_weight.as_ref().is_none_or(|w| *w >= target) {
                        f.push(format!(
                            "{}: pdist second best {:?} not below {target}",
                            c.name, s.second_best_weight
                        ));
                        break;
                    }
                } else if s.best_count <= ocsgs {
                    f.push(format!("{}: non-pdist maxmin point with {} best responses", c.name, s.best_count));
                    break;
                }
            }
            (f, tested)
        })
        .collect();
    let graphs = results.len();
    let tested: usize = results.iter().map(|(_, t)| t).sum();
    Outcome {
        failures: results.into_iter().flat_map(|(f, _)| f).collect(),
        notes: vec![format!("{graphs} graphs, {tested} other pdists")],
    }
}

fn criterion7(cases: &[&Case]) -> Outcome {
    let checked: Vec<&&Case> = cases.iter().filter(|c| c.g.vertex_count() >= 3).collect();
    let failures = collect(
        checked
            .par_iter()
            .map(|c| {
                let mut f = Vec::new();
                let table = CoalitionTable::new(&c.g).unwrap();
                let mut rng = c.rng(7);
                let mut points = c.vertices();
                points.extend((0..100).map(|_| random_polytope_point(&mut rng, &c.pp, &c.dag, 0)));
                points.extend(non_members(c, &mut rng, 100));
                for x in &points {
                    let lc = table.least_core_check(x, &c.opt).unwrap();
                    if lc != is_maxmin(&c.g, &c.pp, &c.dag, x) {
                        f.push(format!("{}: least core {lc} disagrees with maxmin", c.name));
                        break;
                    }
                }
                let Some(nu) = &c.nu else {
                    return f;
                };
                let k = kappa(&c.layers);
                let ev = table.excess_vector(nu).unwrap();
                let levels = ev.levels();
                if levels[0] != &c.opt - ratio(1, 1) || levels.get(1) != Some(&(&c.opt + &k - ratio(1, 1))) {
                    f.push(format!("{}: first excess levels {:?}", c.name, &levels[..2.min(levels.len())]));
                }
                let mut rivals: Vec<EdgeDistribution> =
                    (0..200).map(|_| random_distribution(&mut rng, c.m())).collect();
                rivals.extend(c.vertices());
                rivals.extend(pair_perturbations(&c.pp, &c.dag, nu, &(&k / ratio(10, 1)), false));
                rivals.extend(pair_perturbations(&c.pp, &c.dag, nu, &(-&k / ratio(10, 1)), false));
                for x in &rivals {
                    if !lex_dominates(&ev, &table.excess_vector(x).unwrap()) {
                        f.push(format!("{}: nucleolus dominated", c.name));
                        break;
                    }
                }
                f
            })
            .collect(),
    );
    let mut notes = vec![format!("{} graphs", checked.len())];
    notes.extend(runtime_growth());
    Outcome { failures, notes }
}

/// Bridgeless random multigraphs: a Hamiltonian cycle plus random chords.
fn growth_graph(m: usize, rng: &mut ChaCha8Rng) -> Graph {
    let n = (m / 4).max(3);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (order[i], order[(i + 1) % n])).collect();
    while edges.len() < m {
        let u = rng.gen_range(0..n);
        let v = (u + rng.gen_range(1..n)) % n;
        edges.push((u, v));
    }
    Graph::new(n, edges).unwrap()
}

/// Timings of the main pipeline on growing graphs until the budget is spent.
fn runtime_growth() -> Vec<String> {
    let budget = Duration::from_secs(60);
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut rows = vec!["runtime growth (recorded, not asserted):".to_string()];
    let mut m = 25;
    while m <= 10_000 {
        let g = growth_graph(m, &mut rng);
        let t = Instant::now();
        let opt = strength_opt(&g, &WeightMap::unit(m)).unwrap().opt;
        let t_opt = t.elapsed();
        let t = Instant::now();
        let pp = prime_partition(&g).unwrap();
        let t_pp = t.elapsed();
        let t = Instant::now();
        let dag = parent_child(&g, &pp).unwrap();
        let t_dag = t.elapsed();
        rows.push(format!(
            "  |E| = {m:>5}: opt {opt} in {t_opt:.2?}, partition ({} elements) {t_pp:.2?}, order ({} parent edges) {t_dag:.2?}",
            pp.len(),
            dag.parent_edges.len()
        ));
        let spent = start.elapsed();
        // the next size costs roughly ten times as much
        if spent + (t_opt + t_pp + t_dag) * 10 > budget {
            rows.push(format!("  stopped before |E| = {} (budget {budget:?})", m * 2));
            break;
        }
        m *= 2;
    }
    rows
}

fn criterion8(cases: &[Case]) -> Outcome {
    let failures = collect(
        cases
            .par_iter()
            .map(|c| {
                let mut f = Vec::new();
                let base = analyze(&c.g, None).unwrap();
                let json = base.to_json();
                if analyze(&c.g, None).unwrap().to_json() != json {
                    f.push(format!("{}: repeated run differs", c.name));
                }
                let mut rng = c.rng(8);
                for _ in 0..3 {
                    let mut order: Vec<usize> = (0..c.m()).collect();
                    order.shuffle(&mut rng);
                    let permuted = c.g.permute_edges(&order);
                    let back = analyze(&permuted, None).unwrap().relabel_edges(&order);
                    if back.to_json() != json {
                        f.push(format!("{}: permuted analysis differs", c.name));
                        break;
                    }
                }
                f
            })
            .collect(),
    );
    Outcome {
        failures,
        notes: vec![format!("{} graphs x 3 permutations", cases.len())],
    }
}

fn main() -> ExitCode {
    let graphs = corpus(SEED, RANDOM_GRAPHS);
    let cases: Vec<Case> = graphs
        .par_iter()
        .map(|c| Case::new(&c.name, c.graph.clone()))
        .collect();
    let figure1 = cases.iter().find(|c| c.name == "figure1").expect("fixture");
    let small = |cap: usize| -> Vec<&Case> { cases.iter().filter(|c| c.m() <= cap).collect() };
    let mut with_figure1 = small(12);
    with_figure1.push(figure1);

    type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("Figure-1 reproduction", Box::new(criterion1)),
        ("oracle equivalence", Box::new(|| criterion2(&graphs))),
        ("value theorem", Box::new(|| criterion3(&cases))),
        ("maxmin characterization", Box::new(|| criterion4(&with_figure1))),
        ("order correctness", Box::new(|| criterion5(&small(14), figure1))),
        ("nucleolus second-best", Box::new(|| criterion6(&small(14)))),
        ("cooperative equivalence", Box::new(|| criterion7(&small(12)))),
        ("determinism", Box::new(|| criterion8(&cases))),
    ];

    println!("acceptance: {} corpus graphs (seed {SEED})", cases.len());
    let mut all_passed = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let passed = outcome.failures.is_empty();
        all_passed &= passed;
        println!(
            "{} criterion {}: {name} ({:.2?})",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed()
        );
        for note in &outcome.notes {
            println!("    {note}");
        }
        for failure in outcome.failures.iter().take(10) {
            println!("    - {failure}");
        }
        if outcome.failures.len() > 10 {
            println!("    ... {} more", outcome.failures.len() - 10);
        }
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
