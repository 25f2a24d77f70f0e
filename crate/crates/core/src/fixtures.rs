//! Small hand-written instances used by tests, benches and documentation.

use std::collections::BTreeMap;

use crate::augment::{Arborescence, AugmentedDigraph};
use crate::graph::{Digraph, EdgeSpec};

/// Builds `D` from `(label, weight)` vertices and `(label, src, dst, rank)`
/// edges. Panics on invalid input.
pub fn instance(vertices: &[(&str, i64)], edges: &[(&str, &str, &str, i64)]) -> AugmentedDigraph {
    let labels: Vec<String> = vertices.iter().map(|(v, _)| v.to_string()).collect();
    let weights: BTreeMap<String, i64> =
        vertices.iter().map(|(v, w)| (v.to_string(), *w)).collect();
    let specs: Vec<EdgeSpec> = edges
        .iter()
        .map(|(id, s, d, _)| EdgeSpec {
            id: id.to_string(),
            src: s.to_string(),
            dst: d.to_string(),
        })
        .collect();
    let ranks = edges
        .iter()
        .map(|(id, _, _, r)| (id.to_string(), *r))
        .collect();
    AugmentedDigraph::new(
        Digraph::build(&labels, &specs, &weights, &ranks).expect("invalid fixture"),
    )
}

/// Two vertices `a`, `b` with a single edge `ab = (a, b)`; unit weights.
pub fn pair() -> AugmentedDigraph {
    instance(&[("a", 1), ("b", 1)], &[("ab", "a", "b", 1)])
}

/// Directed triangle `a -> b -> c -> a` with the given weights for `a, b, c`.
pub fn cycle3(weights: &[i64; 3]) -> AugmentedDigraph {
    instance(
        &[("a", weights[0]), ("b", weights[1]), ("c", weights[2])],
        &[
            ("ab", "a", "b", 1),
            ("bc", "b", "c", 1),
            ("ca", "c", "a", 1),
        ],
    )
}

/// Resolves an arborescence from edge labels; `r:x` is the root edge into `x`.
pub fn arb(d: &AugmentedDigraph, labels: &[&str]) -> Arborescence {
    let edges = labels.iter().map(|l| match l.strip_prefix("r:") {
        Some(v) => d.root_edge(d.base().vertex_by_label(v).expect("unknown vertex")),
        None => d.base().edge_by_label(l).expect("unknown edge"),
    });
    Arborescence::from_edges(d, edges).expect("not an arborescence")
}
