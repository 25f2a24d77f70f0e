//! Dual certificates of popularity.
//!
//! A popular `A` is a min-cost arborescence under `c_A`, and a feasible
//! dual `y` of the cut LP with objective `w(V_G)` proves it. The dual here
//! is built explicitly from the solver's output: each vertex owns one
//! support set, priced at its own weight.

use std::fmt;

use crate::augment::{edge_cost, Arborescence, AugmentedDigraph};
use crate::graph::{scc_partition, DigraphView, EdgeId, VertexId, VertexSet};
use crate::solver::{compute_reach_sets, maximal_family, MaximalFamily};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualSet {
    pub members: VertexSet,
    pub y: u64,
    /// Entry point: the vertex whose tree edge enters this set.
    pub owner: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DualSolution {
    pub sets: Vec<DualSet>,
}

impl DualSolution {
    pub fn objective(&self) -> u64 {
        self.sets.iter().map(|s| s.y).sum()
    }

    fn support(&self) -> impl Iterator<Item = &DualSet> {
        self.sets.iter().filter(|s| s.y > 0)
    }
}

/// Sum of `y(Y)` over the support sets that edge `e` enters.
pub fn edge_load(d: &AugmentedDigraph, y: &DualSolution, e: EdgeId) -> u64 {
    let edge = d.edge(e);
    y.support()
        .filter(|s| s.members.contains(edge.dst) && !s.members.contains(edge.src))
        .map(|s| s.y)
        .sum()
}

fn all_loads(d: &AugmentedDigraph, y: &DualSolution) -> Vec<u64> {
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); d.vertex_capacity()];
    for (i, s) in y.sets.iter().enumerate() {
        if s.y > 0 {
            for v in s.members.iter() {
                containing[v.0].push(i);
            }
        }
    }
    d.edge_ids()
        .map(|e| {
            let edge = d.edge(e);
            containing[edge.dst.0]
                .iter()
                .map(|&i| &y.sets[i])
                .filter(|s| !s.members.contains(edge.src))
                .map(|s| s.y)
                .sum()
        })
        .collect()
}

/// Builds the dual for a solver output `a` over `family`.
///
/// For a maximal set `X` with `|X| ≥ 2` entered at `v`, the owner set of
/// `v` is the strongly connected component containing `v` of `X` under
/// `S(X)` plus the interior edges into `v` that beat `A(v)`. Every other
/// vertex owns its singleton.
pub fn build_dual(d: &AugmentedDigraph, family: &MaximalFamily, a: &Arborescence) -> DualSolution {
    let cap = d.vertex_capacity();
    let mut sets = Vec::with_capacity(d.n());
    for member in &family.members {
        let x = &member.set;
        let entry = x.iter().find(|&v| !x.contains(d.edge(a.edge_into(v)).src));
        let big_owner = match entry {
            Some(v) if x.len() >= 2 => {
                let reference = d.edge(a.edge_into(v)).rank;
                let mut edges = member.safe.clone();
                edges.extend(d.in_edges(v).iter().copied().filter(|&e| {
                    let edge = d.edge(e);
                    x.contains(edge.src) && edge.rank < reference
                }));
                let cond = scc_partition(d, x, &edges);
                let comp = cond.component_of(v).expect("entry lies in X");
                sets.push(DualSet {
                    members: cond.components[comp].clone(),
                    y: d.weight(v),
                    owner: v,
                });
                Some(v)
            }
            _ => None,
        };
        for t in x.iter().filter(|&t| Some(t) != big_owner) {
            sets.push(DualSet {
                members: VertexSet::from_vertices(cap, [t]),
                y: d.weight(t),
                owner: t,
            });
        }
    }
    sets.sort_by_key(|s| s.owner);
    DualSolution { sets }
}

/// One named verification step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Informational checks are reported but never fail a report.
    pub gating: bool,
    pub violations: Vec<String>,
}

impl Check {
    fn new(name: &'static str, violations: Vec<String>) -> Self {
        Check {
            name,
            passed: violations.is_empty(),
            gating: true,
            violations,
        }
    }

    fn informational(mut self) -> Self {
        self.gating = false;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    /// All gating checks passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.gating)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.gating && !c.passed)
    }

    pub fn summary(&self) -> String {
        self.failures()
            .map(|c| format!("{}: {}", c.name, c.violations.join("; ")))
            .collect::<Vec<_>>()
            .join(" | ")
    }

    pub fn merge(mut self, other: Report) -> Report {
        self.checks.extend(other.checks);
        self
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let verdict = match (c.passed, c.gating) {
                (true, _) => "ok",
                (false, true) => "FAIL",
                (false, false) => "note",
            };
            writeln!(f, "{verdict:>4}  {}", c.name)?;
            for v in c.violations.iter().take(10) {
                writeln!(f, "      {v}")?;
            }
            if c.violations.len() > 10 {
                writeln!(f, "      ... {} more", c.violations.len() - 10)?;
            }
        }
        Ok(())
    }
}

/// Dual feasibility: every edge's load stays within `c_A(e)`.
pub fn verify_feasible(d: &AugmentedDigraph, a: &Arborescence, y: &DualSolution) -> Report {
    let n = d.n();
    let malformed: Vec<String> = y
        .sets
        .iter()
        .enumerate()
        .filter(|(_, s)| {
            s.members.is_empty()
                || s.members.contains(d.root())
                || s.members.capacity() != d.vertex_capacity()
                || s.owner.0 >= n
        })
        .map(|(i, _)| format!("set #{i} is empty, contains the root, or has a bad owner"))
        .collect();
    if !malformed.is_empty() {
        return Report {
            checks: vec![Check::new("support_sets_valid", malformed)],
        };
    }

    let loads = all_loads(d, y);
    let over: Vec<String> = d
        .edge_ids()
        .filter_map(|e| {
            let cost = edge_cost(d, a, e);
            (loads[e.0] > cost).then(|| {
                format!(
                    "edge {} load {} exceeds cost {} (slack -{})",
                    d.describe_edge(e),
                    loads[e.0],
                    cost,
                    loads[e.0] - cost
                )
            })
        })
        .collect();
    let vertex_bound: Vec<String> = d
        .vertices()
        .filter_map(|v| {
            let covering: u64 = y
                .support()
                .filter(|s| s.members.contains(v))
                .map(|s| s.y)
                .sum();
            (covering > 2 * d.weight(v)).then(|| {
                format!(
                    "vertex {} covered by {covering} > 2w = {}",
                    d.vertex_label(v),
                    2 * d.weight(v)
                )
            })
        })
        .collect();
    Report {
        checks: vec![
            Check::new("support_sets_valid", Vec::new()),
            Check::new("edge_loads", over),
            Check::new("vertex_load_bound", vertex_bound),
        ],
    }
}

/// Optimality and structure checks. Recomputes the maximal family of `D`
/// for the entry-weight check.
pub fn verify_popularity(d: &AugmentedDigraph, a: &Arborescence, y: &DualSolution) -> Report {
    let reach = compute_reach_sets(d);
    match maximal_family(d, &reach) {
        Ok(family) => verify_popularity_in(d, a, y, &family),
        Err(err) => {
            let mut report = verify_popularity_core(d, a, y);
            report.checks.push(Check::new(
                "entry_min_weight_in_bottom",
                vec![err.to_string()],
            ));
            report
        }
    }
}

/// As [`verify_popularity`], with a precomputed maximal family.
pub fn verify_popularity_in(
    d: &AugmentedDigraph,
    a: &Arborescence,
    y: &DualSolution,
    family: &MaximalFamily,
) -> Report {
    let mut report = verify_popularity_core(d, a, y);
    let mut entry_issues = Vec::new();
    for member in &family.members {
        let entries: Vec<VertexId> = member
            .set
            .iter()
            .filter(|&v| !member.set.contains(d.edge(a.edge_into(v)).src))
            .collect();
        let [v] = entries[..] else {
            entry_issues.push(format!(
                "maximal set {:?} is entered {} times",
                member.set,
                entries.len()
            ));
            continue;
        };
        if !member.bottom.contains(v) {
            entry_issues.push(format!(
                "entry {} lies outside the bottom component",
                d.vertex_label(v)
            ));
        } else if !member.min_weight.contains(&v) {
            entry_issues.push(format!(
                "entry {} is not of minimum weight in the bottom component",
                d.vertex_label(v)
            ));
        }
    }
    report
        .checks
        .push(Check::new("entry_min_weight_in_bottom", entry_issues));
    report
}

fn verify_popularity_core(d: &AugmentedDigraph, a: &Arborescence, y: &DualSolution) -> Report {
    let mut checks = Vec::new();
    let support: Vec<&DualSet> = y.support().collect();

    let objective = y.objective();
    let total = d.total_weight();
    checks.push(Check::new(
        "objective",
        if objective == total {
            Vec::new()
        } else {
            vec![format!("sum of y = {objective}, w(V_G) = {total}")]
        },
    ));

    let entering = |s: &DualSet| -> Vec<VertexId> {
        s.members
            .iter()
            .filter(|&v| !s.members.contains(d.edge(a.edge_into(v)).src))
            .collect()
    };
    checks.push(Check::new(
        "single_entry",
        support
            .iter()
            .filter_map(|s| {
                let count = entering(s).len();
                (count != 1).then(|| format!("set {:?} entered by {count} tree edges", s.members))
            })
            .collect(),
    ));

    let loads = all_loads(d, y);
    checks.push(Check::new(
        "tight_tree_edges",
        a.edges()
            .filter_map(|e| {
                let w = d.weight(d.edge(e).dst);
                (loads[e.0] != w).then(|| {
                    format!(
                        "tree edge {} load {} != w = {w}",
                        d.describe_edge(e),
                        loads[e.0]
                    )
                })
            })
            .collect(),
    ));

    let mut crossing = Vec::new();
    for (i, s) in support.iter().enumerate() {
        for t in &support[i + 1..] {
            let nested = s.members.is_subset(&t.members) || t.members.is_subset(&s.members);
            if !nested && !s.members.is_disjoint(&t.members) {
                crossing.push(format!("{:?} crosses {:?}", s.members, t.members));
            }
        }
    }
    checks.push(Check::new("laminar", crossing));

    checks.push(Check::new(
        "two_layer",
        d.vertices()
            .filter_map(|v| {
                let depth = support.iter().filter(|s| s.members.contains(v)).count();
                (depth > 2).then(|| format!("{} lies in {depth} support sets", d.vertex_label(v)))
            })
            .collect(),
    ));

    let mut owned: Vec<Option<&DualSet>> = vec![None; d.n()];
    let mut bijection = Vec::new();
    for s in &y.sets {
        let v = s.owner;
        if owned[v.0].replace(s).is_some() {
            bijection.push(format!("{} owns more than one set", d.vertex_label(v)));
        }
        if s.y != d.weight(v) {
            bijection.push(format!(
                "y of set owned by {} is {} != w = {}",
                d.vertex_label(v),
                s.y,
                d.weight(v)
            ));
        }
        if !s.members.contains(v) {
            bijection.push(format!("owner {} is not in its set", d.vertex_label(v)));
        } else if s.members.contains(d.edge(a.edge_into(v)).src) {
            bijection.push(format!("A({}) does not enter its set", d.vertex_label(v)));
        }
    }
    for v in d.vertices().filter(|v| owned[v.0].is_none()) {
        bijection.push(format!("{} owns no set", d.vertex_label(v)));
    }
    checks.push(Check::new("entry_bijection", bijection));

    let mut non_entry = Vec::new();
    for s in support.iter().filter(|s| s.members.len() >= 2) {
        for u in s.members.iter().filter(|&u| u != s.owner) {
            match owned[u.0] {
                Some(t) if t.members.len() == 1 => {}
                _ => non_entry.push(format!(
                    "{} in the set of {} does not own a singleton",
                    d.vertex_label(u),
                    d.vertex_label(s.owner)
                )),
            }
        }
    }
    checks.push(Check::new("non_entry_singletons", non_entry));

    // Exactly one vertex of each support set is outside its maximal proper subsets.
    let mut one_new = Vec::new();
    for s in &support {
        let mut covered = VertexSet::empty(d.vertex_capacity());
        for t in &support {
            if t.members != s.members && t.members.is_subset(&s.members) {
                covered.union_with(&t.members);
            }
        }
        let fresh = s.members.iter().filter(|&v| !covered.contains(v)).count();
        if fresh != 1 {
            one_new.push(format!(
                "{:?} has {fresh} vertices outside its subsets",
                s.members
            ));
        }
    }
    checks.push(Check::new("one_new_vertex", one_new).informational());

    Report { checks }
}
