//! Safe edges `S(X)`.
//!
//! An edge `(u, v)` inside `X` is safe when no other edge inside `X`
//! beats it at `v`, and it strictly beats every edge entering `v` from
//! outside `X` (root edges included). Under a total preorder this leaves,
//! per head, either nothing or the whole top tier of interior edges.

use crate::augment::AugmentedDigraph;
use crate::graph::{DigraphView, EdgeId, VertexSet};

/// `S(X)` in edge-id order.
pub fn safe_edges(d: &AugmentedDigraph, x: &VertexSet) -> Vec<EdgeId> {
    let mut out = Vec::new();
    for v in x.iter() {
        let mut best_inside = u32::MAX;
        let mut best_boundary = u32::MAX;
        for &e in d.in_edges(v) {
            let edge = d.edge(e);
            if x.contains(edge.src) {
                best_inside = best_inside.min(edge.rank);
            } else {
                best_boundary = best_boundary.min(edge.rank);
            }
        }
        if best_inside < best_boundary {
            out.extend(d.in_edges(v).iter().copied().filter(|&e| {
                let edge = d.edge(e);
                x.contains(edge.src) && edge.rank == best_inside
            }));
        }
    }
    out.sort_unstable();
    out
}

/// Edge-by-edge evaluation of the two safe-edge conditions. Quadratic in
/// the in-degree; kept as a cross-check for [`safe_edges`].
pub fn is_safe_edge(d: &AugmentedDigraph, x: &VertexSet, e: EdgeId) -> bool {
    let edge = d.edge(e);
    if !(x.contains(edge.src) && x.contains(edge.dst)) {
        return false;
    }
    d.in_edges(edge.dst).iter().all(|&f| {
        let other = d.edge(f);
        if x.contains(other.src) {
            other.rank >= edge.rank
        } else {
            edge.rank < other.rank
        }
    })
}
