#![allow(dead_code)]

use popbranch::gen::{generate_random, GenParams};
use popbranch::AugmentedDigraph;

pub const DENSITIES: [f64; 3] = [0.2, 0.4, 0.7];
pub const MAX_WEIGHTS: [u64; 3] = [1, 3, 5];
pub const TIE_PROBS: [f64; 2] = [0.0, 0.3];
pub const CORPUS_SIZE: u64 = 1000;

/// Parameters of corpus instance `i`: the 18 (density, max weight, tie)
/// combinations cycle fastest, then `n` runs through 1..=8.
pub fn corpus_params(i: u64) -> GenParams {
    let combo = (i % 18) as usize;
    GenParams {
        n: 1 + ((i / 18) % 8) as usize,
        density: DENSITIES[combo % 3],
        max_weight: MAX_WEIGHTS[(combo / 3) % 3],
        tie_prob: TIE_PROBS[combo / 9],
        enforce_assumption: true,
        seed: i,
    }
}

pub fn instance(params: &GenParams) -> AugmentedDigraph {
    let file = generate_random(params).expect("valid parameters");
    AugmentedDigraph::new(file.to_digraph().expect("generated instances are valid"))
}

pub fn corpus() -> impl Iterator<Item = (GenParams, AugmentedDigraph)> {
    (0..CORPUS_SIZE).map(|i| {
        let p = corpus_params(i);
        let d = instance(&p);
        (p, d)
    })
}
