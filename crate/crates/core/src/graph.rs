//! Vertex-weighted digraphs with per-head rank preferences.
//!
//! Labels from the outside world are mapped to dense indices sorted by
//! label, so every iteration order downstream is deterministic. Edges are
//! sorted by their label as well.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{HeadMismatch, IdKind, ModelError};

/// Label reserved for the artificial root vertex.
pub const ROOT_LABEL: &str = "r";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub src: VertexId,
    pub dst: VertexId,
    /// Smaller is better; equal ranks at the same head are indifferent.
    pub rank: u32,
}

/// Outcome of comparing two edges that enter the same vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preference {
    FirstPreferred,
    Indifferent,
    SecondPreferred,
}

impl Preference {
    fn from_ranks(first: u32, second: u32) -> Self {
        match first.cmp(&second) {
            Ordering::Less => Preference::FirstPreferred,
            Ordering::Equal => Preference::Indifferent,
            Ordering::Greater => Preference::SecondPreferred,
        }
    }
}

/// Read access shared by the instance graph and its rooted augmentation.
pub trait DigraphView {
    /// Number of vertex slots, i.e. the exclusive upper bound on vertex indices.
    fn vertex_capacity(&self) -> usize;
    fn edge_count(&self) -> usize;
    fn edge(&self, e: EdgeId) -> Edge;
    fn in_edges(&self, v: VertexId) -> &[EdgeId];
    fn out_edges(&self, v: VertexId) -> &[EdgeId];
}

/// Compares `e` and `f` under the total preorder of their common head.
pub fn compare<G: DigraphView + ?Sized>(
    graph: &G,
    e: EdgeId,
    f: EdgeId,
) -> Result<Preference, HeadMismatch> {
    let (a, b) = (graph.edge(e), graph.edge(f));
    if a.dst != b.dst {
        return Err(HeadMismatch {
            first: e.0,
            second: f.0,
        });
    }
    Ok(Preference::from_ranks(a.rank, b.rank))
}

/// `true` iff `e` is strictly preferred to `f`. Both must share a head.
pub fn dominates<G: DigraphView + ?Sized>(graph: &G, e: EdgeId, f: EdgeId) -> bool {
    let (a, b) = (graph.edge(e), graph.edge(f));
    debug_assert_eq!(a.dst, b.dst);
    a.rank < b.rank
}

/// A set of vertices over a fixed universe.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet(FixedBitSet);

impl VertexSet {
    pub fn empty(capacity: usize) -> Self {
        VertexSet(FixedBitSet::with_capacity(capacity))
    }

    /// The set `{0, .., count-1}` over a universe of `capacity` slots.
    pub fn prefix(capacity: usize, count: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(capacity);
        bits.insert_range(..count);
        VertexSet(bits)
    }

    pub fn from_vertices<I: IntoIterator<Item = VertexId>>(capacity: usize, vertices: I) -> Self {
        let mut set = Self::empty(capacity);
        for v in vertices {
            set.insert(v);
        }
        set
    }

    pub fn capacity(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, v: VertexId) {
        self.0.insert(v.0);
    }

    pub fn remove(&mut self, v: VertexId) {
        self.0.set(v.0, false);
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(v.0)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.ones().map(VertexId)
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.0.union_with(&other.0);
    }

    pub fn first(&self) -> Option<VertexId> {
        self.0.ones().next().map(VertexId)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.ones()).finish()
    }
}

/// A validated instance graph `G` with vertex weights and edge ranks.
#[derive(Debug, Clone)]
pub struct Digraph {
    vertex_labels: Vec<String>,
    vertex_index: HashMap<String, VertexId>,
    weights: Vec<u64>,
    edges: Vec<Edge>,
    edge_labels: Vec<String>,
    edge_index: HashMap<String, EdgeId>,
    in_adj: Vec<Vec<EdgeId>>,
    out_adj: Vec<Vec<EdgeId>>,
}

/// Edge description by label, as handed to [`Digraph::build`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpec {
    pub id: String,
    pub src: String,
    pub dst: String,
}

impl Digraph {
    /// Validates the raw description and builds adjacency indexes.
    pub fn build(
        vertices: &[String],
        edges: &[EdgeSpec],
        weights: &BTreeMap<String, i64>,
        ranks: &BTreeMap<String, i64>,
    ) -> Result<Self, ModelError> {
        let mut vertex_labels: Vec<String> = vertices.to_vec();
        vertex_labels.sort();
        for pair in vertex_labels.windows(2) {
            if pair[0] == pair[1] {
                return Err(ModelError::DuplicateId {
                    kind: IdKind::Vertex,
                    id: pair[0].clone(),
                });
            }
        }
        if vertex_labels.iter().any(|l| l == ROOT_LABEL) {
            return Err(ModelError::ReservedId(ROOT_LABEL.to_owned()));
        }
        let vertex_index: HashMap<String, VertexId> = vertex_labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), VertexId(i)))
            .collect();

        let mut vertex_weights = Vec::with_capacity(vertex_labels.len());
        for label in &vertex_labels {
            let w = *weights
                .get(label)
                .ok_or_else(|| ModelError::MissingWeight(label.clone()))?;
            if w <= 0 {
                return Err(ModelError::NonpositiveWeight {
                    vertex: label.clone(),
                    weight: w,
                });
            }
            vertex_weights.push(w as u64);
        }

        let mut sorted: Vec<&EdgeSpec> = edges.iter().collect();
        sorted.sort_by(|a, b| a.id.cmp(&b.id));
        for pair in sorted.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(ModelError::DuplicateId {
                    kind: IdKind::Edge,
                    id: pair[0].id.clone(),
                });
            }
        }

        let n = vertex_labels.len();
        let mut built = Vec::with_capacity(sorted.len());
        let mut in_adj = vec![Vec::new(); n];
        let mut out_adj = vec![Vec::new(); n];
        for (i, spec) in sorted.iter().enumerate() {
            let endpoint = |label: &String| {
                vertex_index
                    .get(label)
                    .copied()
                    .ok_or_else(|| ModelError::UnknownEndpoint {
                        edge: spec.id.clone(),
                        vertex: label.clone(),
                    })
            };
            let src = endpoint(&spec.src)?;
            let dst = endpoint(&spec.dst)?;
            if src == dst {
                return Err(ModelError::SelfLoop {
                    edge: spec.id.clone(),
                    vertex: spec.src.clone(),
                });
            }
            let rank = *ranks
                .get(&spec.id)
                .ok_or_else(|| ModelError::MissingRank(spec.id.clone()))?;
            if rank <= 0 || rank >= i64::from(u32::MAX) {
                return Err(ModelError::NonpositiveRank {
                    edge: spec.id.clone(),
                    rank,
                });
            }
            built.push(Edge {
                src,
                dst,
                rank: rank as u32,
            });
            in_adj[dst.0].push(EdgeId(i));
            out_adj[src.0].push(EdgeId(i));
        }
        let edge_labels: Vec<String> = sorted.iter().map(|s| s.id.clone()).collect();
        let edge_index = edge_labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), EdgeId(i)))
            .collect();

        Ok(Digraph {
            vertex_labels,
            vertex_index,
            weights: vertex_weights,
            edges: built,
            edge_labels,
            edge_index,
            in_adj,
            out_adj,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> {
        (0..self.vertex_labels.len()).map(VertexId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn weight(&self, v: VertexId) -> u64 {
        self.weights[v.0]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn vertex_label(&self, v: VertexId) -> &str {
        &self.vertex_labels[v.0]
    }

    pub fn edge_label(&self, e: EdgeId) -> &str {
        &self.edge_labels[e.0]
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.vertex_index.get(label).copied()
    }

    pub fn edge_by_label(&self, label: &str) -> Option<EdgeId> {
        self.edge_index.get(label).copied()
    }
}

impl DigraphView for Digraph {
    fn vertex_capacity(&self) -> usize {
        self.vertex_labels.len()
    }

    fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e.0]
    }

    fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_adj[v.0]
    }

    fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_adj[v.0]
    }
}

/// Vertices reachable from `start` using only `edges` (including `start`).
pub fn reachable_from<G: DigraphView + ?Sized>(
    graph: &G,
    edges: &[EdgeId],
    start: VertexId,
) -> VertexSet {
    let cap = graph.vertex_capacity();
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); cap];
    for &e in edges {
        let edge = graph.edge(e);
        adj[edge.src.0].push(edge.dst);
    }
    let mut seen = VertexSet::empty(cap);
    seen.insert(start);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &v in &adj[u.0] {
            if !seen.contains(v) {
                seen.insert(v);
                stack.push(v);
            }
        }
    }
    seen
}

/// Strongly connected components of `(vertices, edges)` together with the
/// number of edges entering each component from another component.
#[derive(Debug, Clone)]
pub struct Condensation {
    /// Components ordered by their smallest vertex.
    pub components: Vec<VertexSet>,
    pub in_degree: Vec<usize>,
    component_of: Vec<Option<usize>>,
}

impl Condensation {
    pub fn component_of(&self, v: VertexId) -> Option<usize> {
        self.component_of.get(v.0).copied().flatten()
    }

    /// Components with no entering edge.
    pub fn sources(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.components.len()).filter(|&c| self.in_degree[c] == 0)
    }
}

/// Tarjan's algorithm restricted to `vertices`; edges with an endpoint
/// outside `vertices` are ignored.
pub fn scc_partition<G: DigraphView + ?Sized>(
    graph: &G,
    vertices: &VertexSet,
    edges: &[EdgeId],
) -> Condensation {
    let cap = graph.vertex_capacity();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); cap];
    let mut kept = Vec::with_capacity(edges.len());
    for &e in edges {
        let edge = graph.edge(e);
        if vertices.contains(edge.src) && vertices.contains(edge.dst) {
            adj[edge.src.0].push(edge.dst.0);
            kept.push((edge.src.0, edge.dst.0));
        }
    }

    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; cap];
    let mut low = vec![0usize; cap];
    let mut on_stack = vec![false; cap];
    let mut stack = Vec::new();
    let mut raw: Vec<Vec<usize>> = Vec::new();
    let mut next_index = 0;
    // (vertex, position in its adjacency list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in vertices.iter().map(|v| v.0) {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (u, ref mut pos)) = call.last_mut() {
            if *pos < adj[u].len() {
                let w = adj[u][*pos];
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[u] = low[u].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[u]);
                }
                if low[u] == index[u] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == u {
                            break;
                        }
                    }
                    raw.push(comp);
                }
            }
        }
    }

    for comp in &mut raw {
        comp.sort_unstable();
    }
    raw.sort_by_key(|c| c[0]);
    let mut component_of = vec![None; cap];
    for (i, comp) in raw.iter().enumerate() {
        for &v in comp {
            component_of[v] = Some(i);
        }
    }
    let mut in_degree = vec![0; raw.len()];
    for (s, d) in kept {
        let (cs, cd) = (component_of[s].unwrap(), component_of[d].unwrap());
        if cs != cd {
            in_degree[cd] += 1;
        }
    }
    let components = raw
        .into_iter()
        .map(|c| VertexSet::from_vertices(cap, c.into_iter().map(VertexId)))
        .collect();
    Condensation {
        components,
        in_degree,
        component_of,
    }
}
