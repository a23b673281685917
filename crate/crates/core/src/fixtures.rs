//! Small named graphs used throughout the tests and documentation.

use crate::graph::{parse_graph, Graph};

pub const FIGURE1_EDGES: &str = include_str!("../fixtures/fig1.edges");
pub const K3_EDGES: &str = include_str!("../fixtures/k3.edges");
pub const P3_EDGES: &str = include_str!("../fixtures/p3.edges");
pub const BOWTIE_EDGES: &str = include_str!("../fixtures/bowtie.edges");
pub const TRIANGLE_PENDANT_EDGES: &str = include_str!("../fixtures/triangle_pendant.edges");
pub const PARALLEL2_EDGES: &str = include_str!("../fixtures/parallel2.edges");

fn parse(text: &str) -> Graph {
    parse_graph(text).expect("bundled fixture parses")
}

/// Two K4s and a K5 linked by four edges; edge ids 0..=3 are the links
/// (0,1 join the K4s to the K5, 2,3 join the K4s), 4..=9 the left K4,
/// 10..=15 the right K4 and 16..=25 the K5.
pub fn figure1() -> Graph {
    parse(FIGURE1_EDGES)
}

pub fn k3() -> Graph {
    parse(K3_EDGES)
}

pub fn p3() -> Graph {
    parse(P3_EDGES)
}

/// Two triangles sharing one vertex: edges 0..=2 and 3..=5.
pub fn bowtie() -> Graph {
    parse(BOWTIE_EDGES)
}

/// Triangle on edges 0..=2 with pendant edge 3.
pub fn triangle_pendant() -> Graph {
    parse(TRIANGLE_PENDANT_EDGES)
}

pub fn parallel2() -> Graph {
    parse(PARALLEL2_EDGES)
}

pub fn complete(n: usize) -> Graph {
    let edges = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Graph::new(n, edges).expect("complete graph is valid")
}

pub fn k4() -> Graph {
    complete(4)
}

pub fn k5() -> Graph {
    complete(5)
}

/// Every named fixture with a short label.
pub fn all() -> Vec<(&'static str, Graph)> {
    vec![
        ("k3", k3()),
        ("k4", k4()),
        ("k5", k5()),
        ("p3", p3()),
        ("bowtie", bowtie()),
        ("parallel2", parallel2()),
        ("triangle_pendant", triangle_pendant()),
        ("figure1", figure1()),
    ]
}
