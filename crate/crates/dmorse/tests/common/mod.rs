//! Shared helpers for the integration suites. Each suite uses its own
//! subset, so the unused-code lint is off here.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dmorse::complex::{Simplex, SimplicialComplex};
use dmorse::corpus::{generate, CorpusInstance, CorpusParams};
use dmorse::gvf::DiscreteVectorField;

pub fn corpus(instances: usize, seed: u64) -> Vec<CorpusInstance> {
    generate(&CorpusParams {
        instances,
        seed,
        ..CorpusParams::default()
    })
}

/// Random matching that respects only the matching clauses (pairing a facet
/// with a coface, each simplex at most once); acyclicity is NOT enforced, so
/// cyclic fields occur. Used to exercise the gradient test itself.
pub fn random_unfiltered_matching(
    complex: &SimplicialComplex,
    seed: u64,
    density: f64,
) -> DiscreteVectorField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<(Simplex, Simplex)> = Vec::new();
    for q in 1..=complex.dim() as isize {
        for upper in complex.simplices(q) {
            for lower in upper.facets() {
                candidates.push((lower, upper.clone()));
            }
        }
    }
    candidates.shuffle(&mut rng);
    let mut matched = std::collections::HashSet::new();
    let mut pairs = Vec::new();
    for (lower, upper) in candidates {
        if matched.contains(&lower) || matched.contains(&upper) {
            continue;
        }
        if rng.gen_bool(density) {
            matched.insert(lower.clone());
            matched.insert(upper.clone());
            pairs.push((lower, upper));
        }
    }
    DiscreteVectorField::new(complex, pairs).expect("clauses hold by construction")
}
