//! Ground truth for small instances, independent of the solver.
//!
//! Two routes: a min-cost arborescence under `c_A` (an arborescence is
//! popular iff `A` itself is min-cost), and exhaustive enumeration with
//! pairwise margins.

use std::collections::HashSet;

use crate::augment::{cost_vector, Arborescence, AugmentedDigraph};
use crate::error::CapExceeded;
use crate::graph::{DigraphView, EdgeId};

/// Default bound on enumerated arborescences.
pub const DEFAULT_CAP: usize = 20_000_000;

/// Chu-Liu/Edmonds on an explicit edge list. Returns the index of the
/// chosen in-edge for every node (`usize::MAX` for the root). Every node
/// must be reachable from `root`.
fn edmonds(node_count: usize, root: usize, edges: &[(usize, usize, i64)]) -> Vec<usize> {
    let mut best = vec![usize::MAX; node_count];
    for (i, &(u, v, c)) in edges.iter().enumerate() {
        if u == v || v == root {
            continue;
        }
        if best[v] == usize::MAX || c < edges[best[v]].2 {
            best[v] = i;
        }
    }
    for (v, &b) in best.iter().enumerate() {
        assert!(v == root || b != usize::MAX, "node {v} has no in-edge");
    }

    // Label cycles of the best-in-edge graph.
    const NONE: usize = usize::MAX;
    let mut comp = vec![NONE; node_count];
    let mut visited_by = vec![NONE; node_count];
    let mut next = 0;
    let mut in_cycle = vec![false; node_count];
    for start in 0..node_count {
        let mut v = start;
        while v != root && visited_by[v] == NONE && comp[v] == NONE {
            visited_by[v] = start;
            v = edges[best[v]].0;
        }
        if v != root && visited_by[v] == start && comp[v] == NONE {
            let mut u = v;
            loop {
                comp[u] = next;
                in_cycle[u] = true;
                u = edges[best[u]].0;
                if u == v {
                    break;
                }
            }
            next += 1;
        }
    }
    if next == 0 {
        return best;
    }
    for c in comp.iter_mut() {
        if *c == NONE {
            *c = next;
            next += 1;
        }
    }

    let mut reduced = Vec::with_capacity(edges.len());
    let mut origin = Vec::with_capacity(edges.len());
    for (i, &(u, v, c)) in edges.iter().enumerate() {
        let (cu, cv) = (comp[u], comp[v]);
        if cu == cv {
            continue;
        }
        let adjust = if in_cycle[v] { edges[best[v]].2 } else { 0 };
        reduced.push((cu, cv, c - adjust));
        origin.push(i);
    }
    let sub = edmonds(next, comp[root], &reduced);

    let mut chosen = vec![usize::MAX; node_count];
    for (node, &j) in sub.iter().enumerate() {
        if node == comp[root] {
            continue;
        }
        let i = origin[j];
        chosen[edges[i].1] = i;
    }
    for v in 0..node_count {
        if v != root && chosen[v] == usize::MAX {
            chosen[v] = best[v];
        }
    }
    chosen
}

/// A minimum-cost r-arborescence of `D` under `costs` (indexed by edge id)
/// and its cost.
pub fn min_cost_arborescence(d: &AugmentedDigraph, costs: &[u64]) -> (Arborescence, u64) {
    assert_eq!(costs.len(), d.edge_count());
    let edges: Vec<(usize, usize, i64)> = d
        .edge_ids()
        .map(|e| {
            let edge = d.edge(e);
            (edge.src.0, edge.dst.0, costs[e.0] as i64)
        })
        .collect();
    let chosen = edmonds(d.vertex_capacity(), d.root().0, &edges);
    let in_edges: Vec<EdgeId> = chosen[..d.n()].iter().map(|&i| EdgeId(i)).collect();
    let total = in_edges.iter().map(|e| costs[e.0]).sum();
    let arb = Arborescence::from_in_edges(d, in_edges).expect("edmonds returns an arborescence");
    (arb, total)
}

/// Calls `visit` with `A(v)` (in vertex order) for every r-arborescence of
/// `D`, exactly once each. Returns the count.
pub fn for_each_arborescence<F>(
    d: &AugmentedDigraph,
    cap: usize,
    mut visit: F,
) -> Result<usize, CapExceeded>
where
    F: FnMut(&[EdgeId]),
{
    struct Walk<'a, F> {
        d: &'a AugmentedDigraph,
        choice: Vec<EdgeId>,
        cap: usize,
        count: usize,
        visit: F,
    }

    impl<F: FnMut(&[EdgeId])> Walk<'_, F> {
        fn closes_cycle(&self, v: usize, mut u: usize) -> bool {
            // Assigned vertices are exactly 0..v; stop at the root or an unassigned vertex.
            while u < v {
                u = self.d.edge(self.choice[u]).src.0;
            }
            u == v
        }

        fn go(&mut self, v: usize) -> Result<(), CapExceeded> {
            let n = self.d.n();
            if v == n {
                self.count += 1;
                if self.count > self.cap {
                    return Err(CapExceeded { cap: self.cap });
                }
                (self.visit)(&self.choice);
                return Ok(());
            }
            for &e in self.d.in_edges(crate::graph::VertexId(v)) {
                let u = self.d.edge(e).src.0;
                if self.closes_cycle(v, u) {
                    continue;
                }
                self.choice.push(e);
                self.go(v + 1)?;
                self.choice.pop();
            }
            Ok(())
        }
    }

    let mut walk = Walk {
        d,
        choice: Vec::with_capacity(d.n()),
        cap,
        count: 0,
        visit: &mut visit,
    };
    walk.go(0)?;
    Ok(walk.count)
}

/// Collects every r-arborescence of `D`.
pub fn enumerate_arborescences(
    d: &AugmentedDigraph,
    cap: usize,
) -> Result<Vec<Arborescence>, CapExceeded> {
    let mut out = Vec::new();
    for_each_arborescence(d, cap, |choice| {
        out.push(Arborescence::from_in_edges(d, choice.to_vec()).expect("enumerated arborescence"));
    })?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopularityVerdict {
    pub popular: bool,
    /// An arborescence strictly more popular than the tested one.
    pub witness: Option<Arborescence>,
    /// Minimum of `c_A` over all arborescences.
    pub min_cost: u64,
}

/// `A` is popular iff no arborescence is cheaper than `A` under `c_A`,
/// i.e. the min-cost value equals `c_A(A) = w(V_G)`.
pub fn is_popular_exact(d: &AugmentedDigraph, a: &Arborescence) -> PopularityVerdict {
    let costs = cost_vector(d, a);
    let (best, min_cost) = min_cost_arborescence(d, &costs);
    let popular = min_cost == d.total_weight();
    PopularityVerdict {
        popular,
        witness: (!popular).then_some(best),
        min_cost,
    }
}

/// Rank of `A(v)` per vertex. Margins between arborescences only depend
/// on these vectors.
fn profile(d: &AugmentedDigraph, choice: &[EdgeId]) -> Vec<u32> {
    choice.iter().map(|&e| d.edge(e).rank).collect()
}

/// `Δ_w` evaluated on rank profiles: weight preferring `p` minus weight
/// preferring `q`.
fn profile_margin(weights: &[u64], p: &[u32], q: &[u32]) -> i64 {
    p.iter()
        .zip(q)
        .zip(weights)
        .map(|((a, b), &w)| match a.cmp(b) {
            std::cmp::Ordering::Less => w as i64,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => -(w as i64),
        })
        .sum()
}

/// Rank profiles not weakly dominated by another achievable profile.
///
/// A profile that some other profile improves at one vertex and matches
/// elsewhere loses to it, and improving a challenger never lowers its
/// margin, so popularity only needs comparisons among this front.
fn pareto_front(d: &AugmentedDigraph, cap: usize) -> Result<Vec<Vec<u32>>, CapExceeded> {
    let weakly_below = |p: &[u32], q: &[u32]| p.iter().zip(q).all(|(a, b)| a <= b);
    let mut front: Vec<Vec<u32>> = Vec::new();
    let mut current = vec![0u32; d.n()];
    for_each_arborescence(d, cap, |choice| {
        for (slot, &e) in current.iter_mut().zip(choice) {
            *slot = d.edge(e).rank;
        }
        if front.iter().any(|f| weakly_below(f, &current)) {
            return;
        }
        front.retain(|f| !weakly_below(&current, f));
        front.push(current.clone());
    })?;
    Ok(front)
}

fn popular_profiles(d: &AugmentedDigraph, cap: usize) -> Result<HashSet<Vec<u32>>, CapExceeded> {
    let front = pareto_front(d, cap)?;
    let weights = d.base().weights();
    Ok(front
        .iter()
        .filter(|p| front.iter().all(|q| profile_margin(weights, q, p) <= 0))
        .cloned()
        .collect())
}

/// Every popular arborescence of `D`, in enumeration order.
pub fn brute_popular_set(
    d: &AugmentedDigraph,
    cap: usize,
) -> Result<Vec<Arborescence>, CapExceeded> {
    let popular = popular_profiles(d, cap)?;
    let mut out = Vec::new();
    if popular.is_empty() {
        return Ok(out);
    }
    for_each_arborescence(d, cap, |choice| {
        if popular.contains(&profile(d, choice)) {
            out.push(
                Arborescence::from_in_edges(d, choice.to_vec()).expect("enumerated arborescence"),
            );
        }
    })?;
    Ok(out)
}

/// Whether any popular arborescence exists, by enumeration.
pub fn brute_popular_exists(d: &AugmentedDigraph, cap: usize) -> Result<bool, CapExceeded> {
    popular_profiles(d, cap).map(|p| !p.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augment::{delta_w, total_cost};
    use crate::fixtures::{arb, cycle3, instance, pair};

    /// Plain quadratic definition, for checking the front-based filter.
    fn popular_by_definition(d: &AugmentedDigraph) -> Vec<Arborescence> {
        let all = enumerate_arborescences(d, DEFAULT_CAP).unwrap();
        all.iter()
            .filter(|a| all.iter().all(|b| delta_w(d, b, a) <= 0))
            .cloned()
            .collect()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_arborescences(&pair(), 10).unwrap().len(), 2);
        assert_eq!(
            enumerate_arborescences(&cycle3(&[1, 1, 1]), 10)
                .unwrap()
                .len(),
            7
        );
        let single = instance(&[("v", 4)], &[]);
        let all = enumerate_arborescences(&single, 10).unwrap();
        assert_eq!(all, vec![arb(&single, &["r:v"])]);
        assert_eq!(
            enumerate_arborescences(&cycle3(&[1, 1, 1]), 6),
            Err(CapExceeded { cap: 6 })
        );
    }

    #[test]
    fn enumeration_is_duplicate_free() {
        let d = instance(
            &[("a", 1), ("b", 1), ("c", 1)],
            &[
                ("ab", "a", "b", 1),
                ("ab2", "a", "b", 1),
                ("ba", "b", "a", 2),
                ("bc", "b", "c", 1),
                ("ca", "c", "a", 1),
                ("ac", "a", "c", 3),
            ],
        );
        let all = enumerate_arborescences(&d, DEFAULT_CAP).unwrap();
        let unique: HashSet<_> = all.iter().collect();
        assert_eq!(unique.len(), all.len());
    }

    #[test]
    fn min_cost_on_pair() {
        let d = pair();
        let chain = arb(&d, &["r:a", "ab"]);
        let (best, cost) = min_cost_arborescence(&d, &cost_vector(&d, &chain));
        assert_eq!(cost, 2);
        assert_eq!(best, chain);
        let zero = vec![0; d.edge_count()];
        assert_eq!(min_cost_arborescence(&d, &zero).1, 0);
    }

    #[test]
    fn min_cost_contracts_cycles() {
        // The cheap edges form a cycle that must be broken at the best spot.
        let d = cycle3(&[1, 1, 1]);
        let mut costs = vec![0; d.edge_count()];
        for v in d.vertices() {
            costs[d.root_edge(v).0] = 10 + v.0 as u64;
        }
        let (best, cost) = min_cost_arborescence(&d, &costs);
        assert_eq!(cost, 10);
        assert_eq!(best, arb(&d, &["r:a", "ab", "bc"]));
    }

    #[test]
    fn exact_popularity_examples() {
        let d = pair();
        let chain = arb(&d, &["r:a", "ab"]);
        let star = arb(&d, &["r:a", "r:b"]);
        assert!(is_popular_exact(&d, &chain).popular);
        let verdict = is_popular_exact(&d, &star);
        assert!(!verdict.popular);
        assert_eq!(verdict.witness, Some(chain.clone()));
        assert_eq!(verdict.min_cost, 1);

        let d = cycle3(&[3, 2, 2]);
        let via_a = arb(&d, &["r:a", "ab", "bc"]);
        let via_b = arb(&d, &["r:b", "bc", "ca"]);
        let verdict = is_popular_exact(&d, &via_a);
        assert!(!verdict.popular);
        let w = verdict.witness.unwrap();
        assert!(delta_w(&d, &w, &via_a) > 0);
        assert_eq!(total_cost(&d, &via_a, &w), verdict.min_cost);
        assert!(is_popular_exact(&d, &via_b).popular);
    }

    #[test]
    fn brute_popular_examples() {
        let d = pair();
        assert_eq!(
            brute_popular_set(&d, 100).unwrap(),
            vec![arb(&d, &["r:a", "ab"])]
        );

        let d = cycle3(&[1, 1, 1]);
        let mut got = brute_popular_set(&d, 100).unwrap();
        got.sort();
        let mut want = vec![
            arb(&d, &["r:a", "ab", "bc"]),
            arb(&d, &["r:b", "bc", "ca"]),
            arb(&d, &["r:c", "ca", "ab"]),
        ];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(popular_by_definition(&d).len(), 3);

        let d = cycle3(&[3, 2, 2]);
        let mut got = brute_popular_set(&d, 100).unwrap();
        got.sort();
        let mut want = vec![arb(&d, &["r:b", "bc", "ca"]), arb(&d, &["r:c", "ca", "ab"])];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn front_filter_matches_definition_on_tied_instance() {
        let d = instance(
            &[("a", 2), ("b", 1), ("c", 2), ("d", 2)],
            &[
                ("ab", "a", "b", 1),
                ("cb", "c", "b", 1),
                ("bc", "b", "c", 1),
                ("dc", "d", "c", 2),
                ("ca", "c", "a", 1),
                ("ad", "a", "d", 1),
                ("bd", "b", "d", 1),
            ],
        );
        let mut got = brute_popular_set(&d, DEFAULT_CAP).unwrap();
        got.sort();
        let mut want = popular_by_definition(&d);
        want.sort();
        assert_eq!(got, want);
    }
}
