//! The rooted digraph `D`, arborescences in it, and the cost function
//! induced by a reference arborescence.

use crate::error::ArborescenceError;
use crate::graph::{Digraph, DigraphView, Edge, EdgeId, VertexId, ROOT_LABEL};

/// Label used for root edges in external output.
pub const ROOT_EDGE_LABEL: &str = "root";

/// `G` plus a root `r` and one least-preferred edge `(r, v)` per vertex.
///
/// Instance edges keep their indices `0..m`; the root edge into `v` has
/// index `m + v`. The root itself is vertex `n`.
#[derive(Debug, Clone)]
pub struct AugmentedDigraph {
    base: Digraph,
    edges: Vec<Edge>,
    in_adj: Vec<Vec<EdgeId>>,
    out_adj: Vec<Vec<EdgeId>>,
}

impl AugmentedDigraph {
    pub fn new(base: Digraph) -> Self {
        let n = base.vertex_count();
        let m = base.edges().len();
        let mut edges = base.edges().to_vec();
        let mut in_adj: Vec<Vec<EdgeId>> = (0..n)
            .map(|v| base.in_edges(VertexId(v)).to_vec())
            .collect();
        in_adj.push(Vec::new());
        let mut out_adj: Vec<Vec<EdgeId>> = (0..n)
            .map(|v| base.out_edges(VertexId(v)).to_vec())
            .collect();
        out_adj.push(Vec::new());

        let root = VertexId(n);
        for (v, incoming) in in_adj.iter_mut().take(n).enumerate() {
            // Sentinel rank: strictly worse than every instance edge at v.
            let worst = base
                .in_edges(VertexId(v))
                .iter()
                .map(|&e| base.edges()[e.0].rank)
                .max()
                .unwrap_or(0);
            let id = EdgeId(m + v);
            edges.push(Edge {
                src: root,
                dst: VertexId(v),
                rank: worst + 1,
            });
            incoming.push(id);
            out_adj[n].push(id);
        }
        AugmentedDigraph {
            base,
            edges,
            in_adj,
            out_adj,
        }
    }

    pub fn base(&self) -> &Digraph {
        &self.base
    }

    /// Number of non-root vertices, `|V_G|`.
    pub fn n(&self) -> usize {
        self.base.vertex_count()
    }

    pub fn root(&self) -> VertexId {
        VertexId(self.n())
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> {
        self.base.vertices()
    }

    pub fn edge_ids(&self) -> impl ExactSizeIterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn root_edge(&self, v: VertexId) -> EdgeId {
        EdgeId(self.base.edges().len() + v.0)
    }

    pub fn is_root_edge(&self, e: EdgeId) -> bool {
        e.0 >= self.base.edges().len()
    }

    pub fn weight(&self, v: VertexId) -> u64 {
        self.base.weight(v)
    }

    /// `w(V_G)`.
    pub fn total_weight(&self) -> u64 {
        self.base.weights().iter().sum()
    }

    pub fn vertex_label(&self, v: VertexId) -> &str {
        if v == self.root() {
            ROOT_LABEL
        } else {
            self.base.vertex_label(v)
        }
    }

    pub fn edge_label(&self, e: EdgeId) -> &str {
        if self.is_root_edge(e) {
            ROOT_EDGE_LABEL
        } else {
            self.base.edge_label(e)
        }
    }

    /// Human-readable `(src,dst)` rendering of an edge.
    pub fn describe_edge(&self, e: EdgeId) -> String {
        let edge = self.edges[e.0];
        format!(
            "({},{})",
            self.vertex_label(edge.src),
            self.vertex_label(edge.dst)
        )
    }
}

impl DigraphView for AugmentedDigraph {
    fn vertex_capacity(&self) -> usize {
        self.n() + 1
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

/// An r-rooted spanning out-tree of `D`, stored as `v -> A(v)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arborescence {
    in_edge: Vec<EdgeId>,
}

impl Arborescence {
    /// Builds an arborescence from an unordered edge list, checking that
    /// every vertex has exactly one in-edge and that there is no cycle.
    pub fn from_edges<I>(d: &AugmentedDigraph, edges: I) -> Result<Self, ArborescenceError>
    where
        I: IntoIterator<Item = EdgeId>,
    {
        let n = d.n();
        let mut slots: Vec<Option<EdgeId>> = vec![None; n];
        for e in edges {
            if e.0 >= d.edge_count() {
                return Err(ArborescenceError::UnknownEdge(e.0));
            }
            let head = d.edge(e).dst;
            if slots[head.0].replace(e).is_some() {
                return Err(ArborescenceError::DuplicateHead(head.0));
            }
        }
        let in_edge = slots
            .into_iter()
            .enumerate()
            .map(|(v, s)| s.ok_or(ArborescenceError::MissingHead(v)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_in_edges(d, in_edge)
    }

    /// Builds an arborescence from `A(v)` listed in vertex order.
    pub fn from_in_edges(
        d: &AugmentedDigraph,
        in_edge: Vec<EdgeId>,
    ) -> Result<Self, ArborescenceError> {
        let n = d.n();
        if in_edge.len() != n {
            return Err(ArborescenceError::MissingHead(in_edge.len().min(n)));
        }
        for (v, &e) in in_edge.iter().enumerate() {
            if e.0 >= d.edge_count() {
                return Err(ArborescenceError::UnknownEdge(e.0));
            }
            if d.edge(e).dst.0 != v {
                return Err(ArborescenceError::WrongHead {
                    vertex: v,
                    edge: e.0,
                });
            }
        }
        // 0 = unseen, 1 = on current walk, 2 = known to reach the root
        let mut state = vec![0u8; n];
        let mut walk = Vec::new();
        for start in 0..n {
            let mut v = start;
            while v < n && state[v] == 0 {
                state[v] = 1;
                walk.push(v);
                v = d.edge(in_edge[v]).src.0;
            }
            if v < n && state[v] == 1 {
                return Err(ArborescenceError::Cycle(v));
            }
            for u in walk.drain(..) {
                state[u] = 2;
            }
        }
        Ok(Arborescence { in_edge })
    }

    /// `A(v)`.
    pub fn edge_into(&self, v: VertexId) -> EdgeId {
        self.in_edge[v.0]
    }

    pub fn in_edges(&self) -> &[EdgeId] {
        &self.in_edge
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.in_edge.iter().copied()
    }

    pub fn contains(&self, d: &AugmentedDigraph, e: EdgeId) -> bool {
        self.in_edge[d.edge(e).dst.0] == e
    }

    pub fn len(&self) -> usize {
        self.in_edge.len()
    }

    pub fn is_empty(&self) -> bool {
        self.in_edge.is_empty()
    }
}

/// `c_A(e)`: 0 if `e` beats `A(v)`, `w(v)` on a tie, `2w(v)` if worse.
pub fn edge_cost(d: &AugmentedDigraph, a: &Arborescence, e: EdgeId) -> u64 {
    let edge = d.edge(e);
    let reference = d.edge(a.edge_into(edge.dst)).rank;
    let w = d.weight(edge.dst);
    match edge.rank.cmp(&reference) {
        std::cmp::Ordering::Less => 0,
        std::cmp::Ordering::Equal => w,
        std::cmp::Ordering::Greater => 2 * w,
    }
}

/// `c_A` for every edge of `D`, indexed by edge id.
pub fn cost_vector(d: &AugmentedDigraph, a: &Arborescence) -> Vec<u64> {
    d.edge_ids().map(|e| edge_cost(d, a, e)).collect()
}

/// `Δ_w(A, B)`: weight of vertices preferring `A` minus weight of those
/// preferring `B`.
pub fn delta_w(d: &AugmentedDigraph, a: &Arborescence, b: &Arborescence) -> i64 {
    d.vertices()
        .map(|v| {
            let ra = d.edge(a.edge_into(v)).rank;
            let rb = d.edge(b.edge_into(v)).rank;
            let w = d.weight(v) as i64;
            match ra.cmp(&rb) {
                std::cmp::Ordering::Less => w,
                std::cmp::Ordering::Equal => 0,
                std::cmp::Ordering::Greater => -w,
            }
        })
        .sum()
}

/// `c_A(B)`.
pub fn total_cost(d: &AugmentedDigraph, a: &Arborescence, b: &Arborescence) -> u64 {
    b.edges().map(|e| edge_cost(d, a, e)).sum()
}

/// Result of checking `w(s) + w(t) > w(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightCheck {
    /// Verdict for distinct `s` and `t`. This is the one that gates solving.
    pub holds: bool,
    /// A violating `(s, t, u)` when `holds` is false.
    pub violation: Option<(VertexId, VertexId, VertexId)>,
    /// Verdict when `s = t` is allowed, i.e. `2 w_min > w_max`.
    pub holds_with_repeats: bool,
}

pub fn check_weight_assumption(weights: &[u64]) -> WeightCheck {
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by_key(|&v| (weights[v], v));
    let holds_with_repeats = match (order.first(), order.last()) {
        (Some(&lo), Some(&hi)) => 2 * weights[lo] > weights[hi],
        _ => true,
    };
    if weights.len() <= 2 {
        return WeightCheck {
            holds: true,
            violation: None,
            holds_with_repeats,
        };
    }
    let (s, t) = (order[0], order[1]);
    let u = *order.last().unwrap();
    let holds = weights[s] + weights[t] > weights[u];
    WeightCheck {
        holds,
        violation: (!holds).then_some((VertexId(s), VertexId(t), VertexId(u))),
        holds_with_repeats,
    }
}
