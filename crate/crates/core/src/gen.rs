//! Seeded random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::augment::check_weight_assumption;
use crate::io::{EdgeEntry, InstanceFile, VertexEntry};

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub n: usize,
    /// Probability of each ordered pair `(u, v)`, `u != v`, being an edge.
    pub density: f64,
    pub max_weight: u64,
    /// Probability that an in-edge shares the rank of the previous one.
    pub tie_prob: f64,
    pub enforce_assumption: bool,
    pub seed: u64,
}

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("{name} must lie in [0, 1], got {value}")]
    Probability { name: &'static str, value: f64 },
    #[error("max_weight must be at least 1")]
    MaxWeight,
}

fn width(n: usize) -> usize {
    n.saturating_sub(1).to_string().len()
}

/// Erdős–Rényi style instance. Identical parameters give identical output.
pub fn generate_random(params: &GenParams) -> Result<InstanceFile, GenError> {
    for (name, value) in [("density", params.density), ("tie_prob", params.tie_prob)] {
        if !(0.0..=1.0).contains(&value) {
            return Err(GenError::Probability { name, value });
        }
    }
    if params.max_weight == 0 {
        return Err(GenError::MaxWeight);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.n;

    let mut weights: Vec<u64> = (0..n)
        .map(|_| rng.gen_range(1..=params.max_weight))
        .collect();
    if params.enforce_assumption {
        // Redraw the heaviest vertex until w(s) + w(t) > w(u) for distinct s, t.
        while let Some((_, _, heavy)) = check_weight_assumption(&weights).violation {
            weights[heavy.0] = rng.gen_range(1..=params.max_weight);
        }
    }

    let mut pairs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(params.density) {
                pairs.push((u, v));
            }
        }
    }

    let mut ranks = vec![0i64; pairs.len()];
    let mut by_head: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &(_, v)) in pairs.iter().enumerate() {
        by_head[v].push(i);
    }
    for incoming in &mut by_head {
        incoming.shuffle(&mut rng);
        let mut rank = 0;
        for (k, &i) in incoming.iter().enumerate() {
            if k == 0 || !rng.gen_bool(params.tie_prob) {
                rank += 1;
            }
            ranks[i] = rank;
        }
    }

    let vw = width(n);
    let ew = width(pairs.len());
    let name = |v: usize| format!("v{v:0vw$}");
    Ok(InstanceFile {
        vertices: weights
            .iter()
            .enumerate()
            .map(|(v, &w)| VertexEntry {
                id: name(v),
                weight: w as i64,
            })
            .collect(),
        edges: pairs
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| EdgeEntry {
                id: format!("e{i:0ew$}"),
                src: name(u),
                dst: name(v),
                rank: ranks[i],
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(seed: u64) -> GenParams {
        GenParams {
            n: 7,
            density: 0.4,
            max_weight: 5,
            tie_prob: 0.3,
            enforce_assumption: true,
            seed,
        }
    }

    #[test]
    fn deterministic_bytes() {
        let a = generate_random(&params(42)).unwrap().to_json();
        let b = generate_random(&params(42)).unwrap().to_json();
        assert_eq!(a, b);
        assert_ne!(a, generate_random(&params(43)).unwrap().to_json());
    }

    #[test]
    fn assumption_enforced() {
        for seed in 0..200 {
            let file = generate_random(&params(seed)).unwrap();
            let w: Vec<u64> = file.vertices.iter().map(|v| v.weight as u64).collect();
            assert!(check_weight_assumption(&w).holds, "seed {seed}");
            assert!(file.to_digraph().is_ok());
        }
    }

    #[test]
    fn single_vertex_without_edges() {
        let file = generate_random(&GenParams {
            n: 1,
            density: 0.0,
            ..params(0)
        })
        .unwrap();
        assert_eq!(file.vertices.len(), 1);
        assert!(file.edges.is_empty());
    }

    #[test]
    fn ids_sort_numerically() {
        let file = generate_random(&GenParams {
            n: 12,
            density: 0.3,
            ..params(9)
        })
        .unwrap();
        let ids: Vec<&str> = file.vertices.iter().map(|v| v.id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
        assert_eq!(ids[0], "v00");
    }

    #[test]
    fn rejects_bad_params() {
        assert!(generate_random(&GenParams {
            density: 1.5,
            ..params(0)
        })
        .is_err());
        assert!(generate_random(&GenParams {
            max_weight: 0,
            ..params(0)
        })
        .is_err());
    }
}
