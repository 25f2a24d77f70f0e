//! Finding a popular arborescence.
//!
//! The pipeline is:
//!
//! 1. For every vertex `v`, shrink `X = V_G` to the vertices `v` reaches
//!    through `S(X)` until `v` reaches all of `X`. The fixpoint is `X_v`.
//! 2. Keep the maximal sets. They partition `V_G`. Each has a unique
//!    source component `X̄` in `(X, S(X))`, and `M̄` is the set of
//!    minimum-weight vertices of `X̄`.
//! 3. If every vertex of `M̄` admits a cheaper "hijack" of itself (the
//!    [`hijack_witness`] witness), no popular arborescence exists.
//! 4. Otherwise contract every maximal set to a node, keep the entering
//!    edges that head into an unhijackable `M̄` vertex and are top-ranked
//!    among the edges entering that vertex from outside, and look for an
//!    arborescence of the contracted graph.
//! 5. Expand: each entered set is spanned from its entry vertex with safe
//!    edges.

use std::collections::{HashMap, VecDeque};

use crate::augment::{check_weight_assumption, Arborescence, AugmentedDigraph};
use crate::certificate::{build_dual, verify_feasible, verify_popularity_in, DualSolution};
use crate::error::SolveError;
use crate::graph::{reachable_from, scc_partition, DigraphView, EdgeId, VertexId, VertexSet};
use crate::safe::safe_edges;

/// `X_v` together with the shrinking sequence that led to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachSet {
    pub vertex: VertexId,
    pub set: VertexSet,
    /// `X⁰ ⊋ X¹ ⊋ … ⊋ X_v`; the last entry equals `set`.
    pub history: Vec<VertexSet>,
}

/// Memoizes `S(X)` across vertices; many vertices walk through the same sets.
#[derive(Default)]
struct SafeCache {
    map: HashMap<VertexSet, Vec<EdgeId>>,
}

impl SafeCache {
    fn get(&mut self, d: &AugmentedDigraph, x: &VertexSet) -> &[EdgeId] {
        self.map
            .entry(x.clone())
            .or_insert_with(|| safe_edges(d, x))
    }
}

fn reach_set_with(d: &AugmentedDigraph, v: VertexId, cache: &mut SafeCache) -> ReachSet {
    let mut x = VertexSet::prefix(d.vertex_capacity(), d.n());
    let mut history = Vec::new();
    loop {
        let reached = reachable_from(d, cache.get(d, &x), v);
        history.push(x.clone());
        if reached == x {
            return ReachSet {
                vertex: v,
                set: x,
                history,
            };
        }
        x = reached;
    }
}

/// Runs the shrinking loop for a single vertex.
pub fn compute_reach_set(d: &AugmentedDigraph, v: VertexId) -> ReachSet {
    reach_set_with(d, v, &mut SafeCache::default())
}

/// `X_v` for every vertex, in vertex order.
pub fn compute_reach_sets(d: &AugmentedDigraph) -> Vec<ReachSet> {
    let mut cache = SafeCache::default();
    d.vertices()
        .map(|v| reach_set_with(d, v, &mut cache))
        .collect()
}

/// One maximal reach set with its bottom component.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub set: VertexSet,
    /// `S(X)` in edge-id order.
    pub safe: Vec<EdgeId>,
    /// `X̄`: the source component of `(X, S(X))`.
    pub bottom: VertexSet,
    /// `M̄`: vertices of `X̄` with minimum weight, ascending.
    pub min_weight: Vec<VertexId>,
}

impl FamilyMember {
    pub fn is_safe(&self, e: EdgeId) -> bool {
        self.safe.binary_search(&e).is_ok()
    }
}

/// The maximal sets among all `X_v`. They partition `V_G`.
#[derive(Debug, Clone)]
pub struct MaximalFamily {
    /// Ordered by smallest vertex.
    pub members: Vec<FamilyMember>,
    member_of: Vec<usize>,
}

impl MaximalFamily {
    /// Index of the member containing `v`.
    pub fn member_of(&self, v: VertexId) -> usize {
        self.member_of[v.0]
    }
}

/// Selects the maximal sets, checking laminarity along the way.
pub fn maximal_family(
    d: &AugmentedDigraph,
    reach: &[ReachSet],
) -> Result<MaximalFamily, SolveError> {
    let n = d.n();
    if reach.len() != n {
        return Err(SolveError::Internal(format!(
            "expected {n} reach sets, got {}",
            reach.len()
        )));
    }
    for r in reach {
        if !r.set.contains(r.vertex) {
            return Err(SolveError::Internal(format!(
                "{} not in its own reach set",
                r.vertex
            )));
        }
        for u in r.set.iter() {
            if !reach[u.0].set.is_subset(&r.set) {
                return Err(SolveError::LaminarityViolation(format!(
                    "{u} lies in X_{} but X_{u} is not contained in it",
                    r.vertex
                )));
            }
        }
    }

    // With u ∈ X_v ⇒ X_u ⊆ X_v, X_v is maximal iff every set containing v equals X_v.
    let mut maximal: Vec<&VertexSet> = Vec::new();
    for r in reach {
        let v = r.vertex;
        let is_max = reach.iter().all(|o| !o.set.contains(v) || o.set == r.set);
        if is_max && !maximal.contains(&&r.set) {
            maximal.push(&r.set);
        }
    }
    maximal.sort_by_key(|s| s.first());

    let mut member_of = vec![usize::MAX; n];
    for (i, set) in maximal.iter().enumerate() {
        for v in set.iter() {
            if member_of[v.0] != usize::MAX {
                return Err(SolveError::LaminarityViolation(format!(
                    "maximal sets overlap at {v}"
                )));
            }
            member_of[v.0] = i;
        }
    }
    if let Some(v) = member_of.iter().position(|&m| m == usize::MAX) {
        return Err(SolveError::LaminarityViolation(format!(
            "vertex v{v} is not covered by a maximal set"
        )));
    }

    let mut members = Vec::with_capacity(maximal.len());
    for set in maximal {
        let safe = safe_edges(d, set);
        let cond = scc_partition(d, set, &safe);
        let sources: Vec<usize> = cond.sources().collect();
        if sources.len() != 1 {
            return Err(SolveError::Internal(format!(
                "(X, S(X)) for X = {set:?} has {} source components",
                sources.len()
            )));
        }
        let bottom = cond.components[sources[0]].clone();
        let min_w = bottom.iter().map(|v| d.weight(v)).min().unwrap_or(0);
        let min_weight = bottom.iter().filter(|&v| d.weight(v) == min_w).collect();
        members.push(FamilyMember {
            set: set.clone(),
            safe,
            bottom,
            min_weight,
        });
    }
    Ok(MaximalFamily { members, member_of })
}

/// Evidence that `vertex` can be displaced inside its set: a lighter
/// vertex `s` outside `X̄` reaches `vertex` through safe edges plus the
/// non-safe interior edge `f`, which beats every edge entering `vertex`
/// from outside.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HijackWitness {
    pub vertex: VertexId,
    pub s: VertexId,
    pub f: EdgeId,
}

/// Best (smallest) rank among edges entering `v` from outside `x`.
fn best_boundary_rank(d: &AugmentedDigraph, x: &VertexSet, v: VertexId) -> u32 {
    d.in_edges(v)
        .iter()
        .map(|&e| d.edge(e))
        .filter(|edge| !x.contains(edge.src))
        .map(|edge| edge.rank)
        .min()
        .expect("root edge always enters from outside")
}

/// Searches for a witness `(s, f)` for `target ∈ M̄`. Candidates `s` are
/// tried by ascending weight then id, and `f` by id; the first hit wins.
pub fn hijack_witness(
    d: &AugmentedDigraph,
    member: &FamilyMember,
    target: VertexId,
) -> Option<HijackWitness> {
    let x = &member.set;
    let boundary = best_boundary_rank(d, x, target);
    let candidates_f: Vec<EdgeId> = d
        .in_edges(target)
        .iter()
        .copied()
        .filter(|&e| {
            let edge = d.edge(e);
            x.contains(edge.src) && !member.is_safe(e) && edge.rank < boundary
        })
        .collect();
    let mut candidates_s: Vec<VertexId> = x
        .iter()
        .filter(|&s| !member.bottom.contains(s) && d.weight(s) < d.weight(target))
        .collect();
    if candidates_f.is_empty() || candidates_s.is_empty() {
        return None;
    }
    candidates_s.sort_by_key(|&s| (d.weight(s), s));

    let cap = d.vertex_capacity();
    let mut reverse: Vec<Vec<VertexId>> = vec![Vec::new(); cap];
    for &e in &member.safe {
        let edge = d.edge(e);
        reverse[edge.dst.0].push(edge.src);
    }
    // Vertices of X that reach `target` in (X, S(X) ∪ {f}), one set per f.
    let reaches: Vec<VertexSet> = candidates_f
        .iter()
        .map(|&f| {
            let extra = d.edge(f);
            let mut seen = VertexSet::empty(cap);
            seen.insert(target);
            let mut stack = vec![target];
            while let Some(v) = stack.pop() {
                let via_f = (v == extra.dst).then_some(extra.src);
                for &u in reverse[v.0].iter().chain(via_f.iter()) {
                    if x.contains(u) && !seen.contains(u) {
                        seen.insert(u);
                        stack.push(u);
                    }
                }
            }
            seen
        })
        .collect();

    for &s in &candidates_s {
        for (i, &f) in candidates_f.iter().enumerate() {
            if reaches[i].contains(s) {
                return Some(HijackWitness {
                    vertex: target,
                    s,
                    f,
                });
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ContractedNode {
    Root,
    Member(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContractedArc {
    pub from: ContractedNode,
    /// Index of the entered member.
    pub to: usize,
    /// Originating edge of `D`.
    pub payload: EdgeId,
}

/// `D'`: one node per maximal set plus the root.
#[derive(Debug, Clone)]
pub struct ContractedDigraph {
    pub member_count: usize,
    pub arcs: Vec<ContractedArc>,
}

/// Every minimum-weight bottom vertex of one maximal set has a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hijackable {
    pub member: usize,
    pub set: VertexSet,
    pub min_weight: Vec<VertexId>,
    pub witnesses: Vec<HijackWitness>,
}

/// Builds `D'`, or reports the first maximal set whose `M̄` is fully
/// hijackable.
pub fn build_contracted(
    d: &AugmentedDigraph,
    family: &MaximalFamily,
) -> Result<ContractedDigraph, Hijackable> {
    let mut arcs = Vec::new();
    for (i, member) in family.members.iter().enumerate() {
        let checks: Vec<(VertexId, Option<HijackWitness>)> = member
            .min_weight
            .iter()
            .map(|&v| (v, hijack_witness(d, member, v)))
            .collect();
        if checks.iter().all(|(_, w)| w.is_some()) {
            return Err(Hijackable {
                member: i,
                set: member.set.clone(),
                min_weight: member.min_weight.clone(),
                witnesses: checks.into_iter().filter_map(|(_, w)| w).collect(),
            });
        }
        // Only unhijackable entry points; the dual built afterwards relies on it.
        for (target, _) in checks.into_iter().filter(|(_, w)| w.is_none()) {
            let boundary = best_boundary_rank(d, &member.set, target);
            for &e in d.in_edges(target) {
                let edge = d.edge(e);
                if member.set.contains(edge.src) || edge.rank != boundary {
                    continue;
                }
                let from = if edge.src == d.root() {
                    ContractedNode::Root
                } else {
                    ContractedNode::Member(family.member_of(edge.src))
                };
                arcs.push(ContractedArc {
                    from,
                    to: i,
                    payload: e,
                });
            }
        }
    }
    Ok(ContractedDigraph {
        member_count: family.members.len(),
        arcs,
    })
}

/// BFS from the root; each node takes the first arc that discovers it,
/// scanning a node's out-arcs by payload id. Returns the chosen arc index
/// per member, or `None` when some member is unreachable.
pub fn find_r_arborescence(cd: &ContractedDigraph) -> Option<Vec<usize>> {
    let k = cd.member_count;
    let slot = |node: ContractedNode| match node {
        ContractedNode::Root => k,
        ContractedNode::Member(i) => i,
    };
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); k + 1];
    for (i, arc) in cd.arcs.iter().enumerate() {
        out[slot(arc.from)].push(i);
    }
    for list in &mut out {
        list.sort_by_key(|&i| cd.arcs[i].payload);
    }
    let mut chosen: Vec<Option<usize>> = vec![None; k];
    let mut queue = VecDeque::from([k]);
    while let Some(node) = queue.pop_front() {
        for &i in &out[node] {
            let to = cd.arcs[i].to;
            if chosen[to].is_none() {
                chosen[to] = Some(i);
                queue.push_back(to);
            }
        }
    }
    chosen.into_iter().collect()
}

/// A `root`-rooted spanning out-tree of `(x, safe)`, BFS with smallest
/// edge id first. `None` if `root` does not reach all of `x`.
fn bfs_tree(
    d: &AugmentedDigraph,
    x: &VertexSet,
    safe: &[EdgeId],
    root: VertexId,
) -> Option<Vec<EdgeId>> {
    let cap = d.vertex_capacity();
    let mut out: Vec<Vec<EdgeId>> = vec![Vec::new(); cap];
    for &e in safe {
        let edge = d.edge(e);
        if x.contains(edge.src) && x.contains(edge.dst) {
            out[edge.src.0].push(e);
        }
    }
    let mut seen = VertexSet::empty(cap);
    seen.insert(root);
    let mut queue = VecDeque::from([root]);
    let mut tree = Vec::new();
    while let Some(u) = queue.pop_front() {
        // `safe` is sorted, so each adjacency list already is.
        for &e in &out[u.0] {
            let v = d.edge(e).dst;
            if !seen.contains(v) {
                seen.insert(v);
                tree.push(e);
                queue.push_back(v);
            }
        }
    }
    (seen == *x).then_some(tree)
}

/// Lifts the contracted arborescence back to `D`.
pub fn expand(
    d: &AugmentedDigraph,
    family: &MaximalFamily,
    reach: &[ReachSet],
    cd: &ContractedDigraph,
    chosen: &[usize],
) -> Result<Arborescence, SolveError> {
    let lifted: Vec<EdgeId> = chosen.iter().map(|&i| cd.arcs[i].payload).collect();
    let mut edges = lifted.clone();
    for &e in &lifted {
        let v = d.edge(e).dst;
        let xv = &reach[v.0].set;
        if xv.len() < 2 {
            continue;
        }
        let member = &family.members[family.member_of(v)];
        let tree = if member.set == *xv {
            bfs_tree(d, xv, &member.safe, v)
        } else {
            bfs_tree(d, xv, &safe_edges(d, xv), v)
        };
        let tree = tree.ok_or_else(|| {
            SolveError::Internal(format!("{v} does not span its reach set with safe edges"))
        })?;
        edges.extend(tree);
    }
    Arborescence::from_edges(d, edges)
        .map_err(|err| SolveError::Internal(format!("expansion is not an arborescence: {err}")))
}

/// Why no popular arborescence was returned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NoneReason {
    Hijackable(Hijackable),
    NoArborescenceInContracted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    PopularFound {
        arborescence: Arborescence,
        certificate: DualSolution,
    },
    NoneExists(NoneReason),
    AssumptionViolated {
        triple: (VertexId, VertexId, VertexId),
    },
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    /// Run even when the weight assumption fails.
    pub force: bool,
}

/// Intermediate results, for inspection and export.
#[derive(Debug, Clone)]
pub struct Trace {
    pub reach: Vec<ReachSet>,
    pub family: MaximalFamily,
    pub contracted: Option<ContractedDigraph>,
}

pub fn solve(d: &AugmentedDigraph, options: SolveOptions) -> Result<SolveOutcome, SolveError> {
    solve_traced(d, options).map(|(outcome, _)| outcome)
}

pub fn solve_traced(
    d: &AugmentedDigraph,
    options: SolveOptions,
) -> Result<(SolveOutcome, Option<Trace>), SolveError> {
    let check = check_weight_assumption(d.base().weights());
    if let (false, Some(triple)) = (check.holds || options.force, check.violation) {
        return Ok((SolveOutcome::AssumptionViolated { triple }, None));
    }

    let reach = compute_reach_sets(d);
    let family = maximal_family(d, &reach)?;
    let contracted = match build_contracted(d, &family) {
        Ok(cd) => cd,
        Err(failure) => {
            let trace = Trace {
                reach,
                family,
                contracted: None,
            };
            return Ok((
                SolveOutcome::NoneExists(NoneReason::Hijackable(failure)),
                Some(trace),
            ));
        }
    };
    let Some(chosen) = find_r_arborescence(&contracted) else {
        let trace = Trace {
            reach,
            family,
            contracted: Some(contracted),
        };
        return Ok((
            SolveOutcome::NoneExists(NoneReason::NoArborescenceInContracted),
            Some(trace),
        ));
    };
    let arborescence = expand(d, &family, &reach, &contracted, &chosen)?;

    for member in &family.members {
        for e in arborescence.edges() {
            let edge = d.edge(e);
            if member.set.contains(edge.src) && member.set.contains(edge.dst) && !member.is_safe(e)
            {
                return Err(SolveError::Internal(format!(
                    "tree edge {} inside a maximal set is not safe",
                    d.describe_edge(e)
                )));
            }
        }
    }

    let certificate = build_dual(d, &family, &arborescence);
    let feasible = verify_feasible(d, &arborescence, &certificate);
    let popular = verify_popularity_in(d, &arborescence, &certificate, &family);
    for report in [&feasible, &popular] {
        if !report.passed() {
            return Err(SolveError::CertificateRejected(report.summary()));
        }
    }
    let trace = Trace {
        reach,
        family,
        contracted: Some(contracted),
    };
    Ok((
        SolveOutcome::PopularFound {
            arborescence,
            certificate,
        },
        Some(trace),
    ))
}
