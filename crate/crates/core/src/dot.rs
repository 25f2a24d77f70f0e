//! Graphviz export of an instance, its maximal family and a solution.

use std::fmt::Write;

use crate::augment::{edge_cost, Arborescence, AugmentedDigraph};
use crate::graph::DigraphView;
use crate::solver::MaximalFamily;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders `D`. Maximal sets become clusters; tree edges are bold and
/// every edge is labelled `(rank, c_A(e))`, or `(rank)` without a tree.
pub fn to_dot(
    d: &AugmentedDigraph,
    family: Option<&MaximalFamily>,
    tree: Option<&Arborescence>,
) -> String {
    let mut out = String::from("digraph D {\n  rankdir=TB;\n");
    let _ = writeln!(
        out,
        "  {} [shape=doublecircle];",
        quote(d.vertex_label(d.root()))
    );
    let node = |out: &mut String, indent: &str, v| {
        let _ = writeln!(
            out,
            "{indent}{} [label={}];",
            quote(d.vertex_label(v)),
            quote(&format!("{} (w={})", d.vertex_label(v), d.weight(v)))
        );
    };
    match family {
        Some(family) => {
            for (i, member) in family.members.iter().enumerate() {
                let _ = writeln!(out, "  subgraph cluster_{i} {{\n    style=rounded;");
                for v in member.set.iter() {
                    node(&mut out, "    ", v);
                }
                out.push_str("  }\n");
            }
        }
        None => {
            for v in d.vertices() {
                node(&mut out, "  ", v);
            }
        }
    }
    for e in d.edge_ids() {
        let edge = d.edge(e);
        let label = match tree {
            Some(a) => format!("({}, {})", edge.rank, edge_cost(d, a, e)),
            None => format!("({})", edge.rank),
        };
        let mut attrs = format!("label={}", quote(&label));
        if tree.is_some_and(|a| a.contains(d, e)) {
            attrs.push_str(", style=bold, color=red");
        } else if d.is_root_edge(e) {
            attrs.push_str(", style=dotted");
        }
        let _ = writeln!(
            out,
            "  {} -> {} [{attrs}];",
            quote(d.vertex_label(edge.src)),
            quote(d.vertex_label(edge.dst))
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{arb, pair};

    #[test]
    fn labels_rank_and_cost() {
        let d = pair();
        let a = arb(&d, &["r:a", "ab"]);
        let dot = to_dot(&d, None, Some(&a));
        assert!(dot.contains("\"a\" -> \"b\" [label=\"(1, 1)\", style=bold, color=red];"));
        assert!(dot.contains("\"r\" -> \"b\" [label=\"(2, 2)\", style=dotted];"));
        assert!(to_dot(&d, None, None).contains("[label=\"(1)\"]"));
    }
}
