//! Command-line front end.
//!
//! Exit codes: 0 success, 1 parse or usage error, 2 disconnected graph,
//! 3 assumption opt < 1 violated, 4 oracle cap exceeded, 5 verification
//! mismatch.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_traits::Zero;
use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::{min_csg, parse_graph, EdgeDistribution, Graph};
use crate::oracle::Oracle;
use crate::order::layers;
use crate::rational::{self, Rational};
use crate::report::{analyze, verify_pipeline, Check, Pipeline};
use crate::strategy::{extreme_closed_sets, is_maxmin, is_pdist, kappa, nucleolus, polytope_description};
use crate::strength::{strength_opt, WeightMap};

pub const EXIT_PARSE: i32 = 1;
pub const EXIT_DISCONNECTED: i32 = 2;
pub const EXIT_ASSUMPTION: i32 = 3;
pub const EXIT_CAP: i32 = 4;
pub const EXIT_VERIFY: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "wiretap", version, about = "Wiretap game analysis of an edge-list graph")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Game value opt (reciprocal of the strength) and a maximizing edge set.
    Strength(Common),
    /// Prime partition and degenerate set.
    Partition(Common),
    /// Parent-child order and layers.
    Order(Common),
    /// Nucleolus; requires opt < 1.
    Nucleolus(Common),
    /// Maxmin polytope description.
    Polytope(Common),
    /// Extreme points of the maxmin polytope.
    Extremes(Common),
    /// Test a distribution file for maxmin and pdist.
    Check(Common),
    /// Full analysis as JSON.
    Analyze(Common),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Edge-list file.
    pub input: PathBuf,
    /// Write JSON output to this path.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Write the order DAG in Graphviz format to this path.
    #[arg(long, value_name = "PATH")]
    pub dot: Option<PathBuf>,
    /// Check results against the exhaustive oracles.
    #[arg(long)]
    pub verify: bool,
    /// Edge cap for every oracle enumeration.
    #[arg(long, value_name = "N")]
    pub max_oracle_edges: Option<usize>,
    /// Distribution file for `check`: lines "edge_id p/q".
    #[arg(long, value_name = "PATH")]
    pub dist: Option<PathBuf>,
}

impl Common {
    fn oracle(&self) -> Oracle {
        self.max_oracle_edges.map_or_else(Oracle::default, Oracle::with_cap)
    }
}

/// Failure of a subcommand with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Disconnected => EXIT_DISCONNECTED,
            Error::AssumptionViolated(_) => EXIT_ASSUMPTION,
            Error::CapExceeded { .. } => EXIT_CAP,
            _ => EXIT_PARSE,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn io_failure(path: &Path, err: std::io::Error) -> Failure {
    Failure {
        code: EXIT_PARSE,
        message: format!("{}: {err}", path.display()),
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn write(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| io_failure(path, e))
}

fn load(common: &Common) -> std::result::Result<Graph, Failure> {
    Ok(parse_graph(&read(&common.input)?)?)
}

fn verification(checks: &[Check]) -> std::result::Result<String, Failure> {
    let mut text = String::new();
    for c in checks {
        let _ = writeln!(text, "verify {} {}", if c.passed { "ok" } else { "FAILED" }, c.name);
    }
    if checks.iter().all(|c| c.passed) {
        Ok(text)
    } else {
        Err(Failure {
            code: EXIT_VERIFY,
            message: format!("{text}oracle mismatch"),
        })
    }
}

fn execute(command: &Command) -> std::result::Result<String, Failure> {
    match command {
        Command::Strength(c) => strength(c),
        Command::Check(c) => check(c),
        Command::Analyze(c) => {
            let g = load(c)?;
            let report = analyze(&g, c.verify.then(|| c.oracle()).as_ref())?;
            if let Some(path) = &c.dot {
                write(path, &canonical_dot(&Pipeline::new(&g)?))?;
            }
            let text = report.to_json();
            if report.verified() == Some(false) {
                let failed: Vec<&str> = report
                    .verification
                    .iter()
                    .flatten()
                    .filter(|c| !c.passed)
                    .map(|c| c.name.as_str())
                    .collect();
                if let Some(path) = &c.json {
                    write(path, &text)?;
                }
                return Err(Failure {
                    code: EXIT_VERIFY,
                    message: format!("oracle mismatch: {}", failed.join(", ")),
                });
            }
            match &c.json {
                Some(path) => {
                    write(path, &text)?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        Command::Partition(c)
        | Command::Order(c)
        | Command::Nucleolus(c)
        | Command::Polytope(c)
        | Command::Extremes(c) => {
            let g = load(c)?;
            let p = Pipeline::new(&g)?;
            let mut text = match command {
                Command::Partition(_) => partition_text(&p),
                Command::Order(_) => order_text(&p),
                Command::Nucleolus(_) => nucleolus_text(&p)?,
                Command::Polytope(_) => polytope_text(&p),
                _ => extremes_text(&p)?,
            };
            if let Some(path) = &c.dot {
                write(path, &canonical_dot(&p))?;
            }
            if let Some(path) = &c.json {
                write(path, &analyze(&g, None)?.to_json())?;
            }
            if c.verify {
                let ly = layers(&p.dag, &p.pp);
                let nu = nucleolus(&p.pp, &ly).ok();
                text.push_str(&verification(&verify_pipeline(&g, &p, nu.as_ref(), &c.oracle())?)?);
            }
            Ok(text)
        }
    }
}

fn strength(c: &Common) -> std::result::Result<String, Failure> {
    let g = load(c)?;
    let result = strength_opt(&g, &WeightMap::unit(g.edge_count()))?;
    let mut text = format!(
        "opt {}\nstrength {}\nargmax {}\n",
        rational::format(&result.opt),
        rational::format(&result.opt.recip()),
        result.argmax
    );
    if let Some(path) = &c.json {
        let value = json!({
            "opt": rational::format(&result.opt),
            "argmax": result.argmax.to_vec(),
        });
        write(path, &format!("{}\n", serde_json::to_string_pretty(&value).expect("json")))?;
    }
    if c.verify {
        let brute = c.oracle().brute_opt(&g)?;
        text.push_str(&verification(&[Check {
            name: "opt equals brute-force maximum cut-rate".into(),
            passed: brute.opt == result.opt,
        }])?);
    }
    Ok(text)
}

/// Parses lines "edge_id p/q"; unlisted edges get weight 0.
pub fn parse_distribution(text: &str, edge_count: usize) -> Result<EdgeDistribution> {
    let mut weights: Vec<Option<Rational>> = vec![None; edge_count];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |message: String| Error::Parse {
            line: i + 1,
            message,
        };
        let mut tokens = line.split_whitespace();
        let (Some(id), Some(value), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(bad("expected `edge_id p/q`".into()));
        };
        let id: usize = id
            .parse()
            .map_err(|_| bad(format!("bad edge id `{id}`")))?;
        if id >= edge_count {
            return Err(bad(format!("edge {id} out of range")));
        }
        let value = rational::parse(value).ok_or_else(|| bad(format!("bad weight `{value}`")))?;
        if weights[id].replace(value).is_some() {
            return Err(bad(format!("edge {id} listed twice")));
        }
    }
    EdgeDistribution::new(
        weights
            .into_iter()
            .map(|w| w.unwrap_or_else(Rational::zero))
            .collect(),
    )
}

fn check(c: &Common) -> std::result::Result<String, Failure> {
    let g = load(c)?;
    let Some(dist_path) = &c.dist else {
        return Err(Failure {
            code: EXIT_PARSE,
            message: "check requires --dist PATH".into(),
        });
    };
    let d = parse_distribution(&read(dist_path)?, g.edge_count())?;
    let p = Pipeline::new(&g)?;
    let maxmin = is_maxmin(&g, &p.pp, &p.dag, &d);
    let pdist = is_pdist(&p.pp, &p.dag, &d);
    let value = min_csg(&g, &d)?.weight;
    let mut text = format!(
        "maxmin {maxmin}\npdist {pdist}\nvalue {}\nopt {}\n",
        rational::format(&value),
        rational::format(&p.opt)
    );
    if let Some(path) = &c.json {
        let v = json!({
            "maxmin": maxmin,
            "pdist": pdist,
            "value": rational::format(&value),
            "opt": rational::format(&p.opt),
        });
        write(path, &format!("{}\n", serde_json::to_string_pretty(&v).expect("json")))?;
    }
    if c.verify {
        let stats = c.oracle().response_stats(&g, &d)?;
        text.push_str(&verification(&[
            Check {
                name: "value equals best response weight".into(),
                passed: stats.best_weight == value,
            },
            Check {
                name: "maxmin iff value equals opt".into(),
                passed: maxmin == (value == p.opt),
            },
        ])?);
    }
    Ok(text)
}

fn partition_text(p: &Pipeline) -> String {
    let mut text = format!("opt {}\n", rational::format(&p.opt));
    for (canon, &i) in p.canonical_order().iter().enumerate() {
        let el = &p.pp.elements[i];
        let _ = writeln!(
            text,
            "P{canon} size {}{} edges {el}",
            el.len(),
            if p.pp.is_degenerate(i) { " degenerate" } else { "" }
        );
    }
    text
}

fn order_text(p: &Pipeline) -> String {
    let canon = p.canonical_index();
    let mut text = String::new();
    let edges: std::collections::BTreeSet<(usize, usize)> = p
        .dag
        .parent_edges
        .iter()
        .map(|&(a, b)| (canon[a], canon[b]))
        .collect();
    for (a, b) in edges {
        let _ = writeln!(text, "P{a} -> P{b}");
    }
    let ly = layers(&p.dag, &p.pp);
    for (i, (els, l)) in ly.elements.iter().zip(&ly.layers).enumerate() {
        let mut names: Vec<usize> = els.iter().map(|&e| canon[e]).collect();
        names.sort();
        let names: Vec<String> = names.iter().map(|n| format!("P{n}")).collect();
        let _ = writeln!(text, "L{} {} edges {l}", i + 1, names.join(" "));
    }
    text
}

fn nucleolus_text(p: &Pipeline) -> std::result::Result<String, Failure> {
    let ly = layers(&p.dag, &p.pp);
    let nu = nucleolus(&p.pp, &ly)?;
    let mut text = format!("kappa {}\n", rational::format(&kappa(&ly)));
    for (e, w) in nu.weights().iter().enumerate() {
        let _ = writeln!(text, "{e} {}", rational::format(w));
    }
    Ok(text)
}

fn polytope_text(p: &Pipeline) -> String {
    let desc = polytope_description(&p.pp, &p.dag);
    let canon = p.canonical_index();
    let name = |v: usize| format!("y{}", canon[desc.variables[v]]);
    let mut order: Vec<usize> = (0..desc.variables.len()).collect();
    order.sort_by_key(|&v| canon[desc.variables[v]]);
    let terms: Vec<String> = order
        .iter()
        .map(|&v| format!("{}*{}", desc.sizes[v], name(v)))
        .collect();
    let mut text = format!("{} = 1\n", terms.join(" + "));
    let mut ineqs: Vec<(usize, usize)> = desc
        .order_inequalities
        .iter()
        .map(|&(a, b)| (canon[desc.variables[a]], canon[desc.variables[b]]))
        .collect();
    ineqs.sort();
    for (a, b) in ineqs {
        let _ = writeln!(text, "y{a} >= y{b}");
    }
    let mut sinks: Vec<usize> = desc.nonneg.iter().map(|&v| canon[desc.variables[v]]).collect();
    sinks.sort();
    for s in sinks {
        let _ = writeln!(text, "y{s} >= 0");
    }
    if let Some(d) = p.pp.degenerate {
        let _ = writeln!(text, "x = 0 on P{}", canon[d]);
    }
    text
}

fn extremes_text(p: &Pipeline) -> std::result::Result<String, Failure> {
    let canon = p.canonical_index();
    let mut rows: Vec<(Vec<usize>, usize)> = extreme_closed_sets(&p.dag)?
        .iter()
        .map(|c| {
            let mut members: Vec<usize> = c.members.iter().map(|&m| canon[m]).collect();
            members.sort();
            (members, c.edges(&p.pp).len())
        })
        .collect();
    rows.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    let mut text = String::new();
    for (members, support) in rows {
        let names: Vec<String> = members.iter().map(|m| format!("P{m}")).collect();
        let _ = writeln!(
            text,
            "{{{}}} support {support} weight 1/{support}",
            names.join(",")
        );
    }
    Ok(text)
}

fn canonical_dot(p: &Pipeline) -> String {
    let canon = p.canonical_index();
    p.dag.to_dot_with(&p.pp, |i| canon[i])
}
