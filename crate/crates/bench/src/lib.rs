//! Shared inputs for the criterion benches.

use popbranch::gen::{generate_random, GenParams};
use popbranch::AugmentedDigraph;

/// A seeded random instance with roughly `avg_out * n` edges and the
/// weight assumption enforced.
pub fn random_instance(n: usize, avg_out: f64, seed: u64) -> AugmentedDigraph {
    let density = if n > 1 {
        (avg_out / (n - 1) as f64).min(1.0)
    } else {
        0.0
    };
    let file = generate_random(&GenParams {
        n,
        density,
        max_weight: 5,
        tie_prob: 0.3,
        enforce_assumption: true,
        seed,
    })
    .expect("valid parameters");
    AugmentedDigraph::new(file.to_digraph().expect("generated instance is valid"))
}
