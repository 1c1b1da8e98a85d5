//! Seeded random instances: small pure complexes with random greedy
//! matchings. Test and benchmark plumbing, not part of the mathematical
//! surface. A fixed seed reproduces the corpus bit-for-bit.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{Simplex, SimplicialComplex};
use crate::gvf::engine::LevelDigraph;
use crate::gvf::DiscreteVectorField;

#[derive(Debug, Clone)]
pub struct CorpusParams {
    pub instances: usize,
    pub max_dim: usize,
    pub max_vertices: usize,
    pub seed: u64,
}

impl Default for CorpusParams {
    fn default() -> Self {
        Self {
            instances: 200,
            max_dim: 3,
            max_vertices: 12,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusInstance {
    pub id: usize,
    pub complex: SimplicialComplex,
    pub field: DiscreteVectorField,
}

/// Generates `params.instances` random instances. Instance `i` depends only
/// on `(seed, i)`, so corpora are reproducible and extendable.
pub fn generate(params: &CorpusParams) -> Vec<CorpusInstance> {
    (0..params.instances)
        .map(|id| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ (id as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let complex = random_pure_complex(&mut rng, params.max_dim, params.max_vertices);
            let field = random_greedy_matching(&mut rng, &complex);
            CorpusInstance { id, complex, field }
        })
        .collect()
}

/// A random pure complex: all facets share one dimension `d <= max_dim`,
/// over at most `max_vertices` vertices.
pub fn random_pure_complex(
    rng: &mut impl Rng,
    max_dim: usize,
    max_vertices: usize,
) -> SimplicialComplex {
    let d = rng.gen_range(1..=max_dim.max(1));
    let n = rng.gen_range((d + 2) as u32..=max_vertices.max(d + 2) as u32);
    let mut all_facets: Vec<Vec<u32>> = combinations(n, d as u32 + 1);
    all_facets.shuffle(rng);
    let upper = all_facets.len().min(2 * n as usize);
    let count = rng.gen_range(1..=upper.max(1));
    SimplicialComplex::from_facets(&all_facets[..count]).expect("nonempty valid facets")
}

fn combinations(n: u32, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = Vec::new();
    fn rec(start: u32, n: u32, k: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k as usize {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Random greedy acyclic matching: candidate (face, coface) pairs are tried
/// in shuffled order; a pair is kept only if both cells are still unmatched
/// and the level digraph stays acyclic.
pub fn random_greedy_matching(
    rng: &mut impl Rng,
    complex: &SimplicialComplex,
) -> DiscreteVectorField {
    let mut candidates: Vec<(Simplex, Simplex)> = Vec::new();
    for q in 1..=complex.dim() as isize {
        for upper in complex.simplices(q) {
            for lower in upper.facets() {
                candidates.push((lower, upper.clone()));
            }
        }
    }
    candidates.shuffle(rng);
    let mut accepted: Vec<(Simplex, Simplex)> = Vec::new();
    let mut matched: std::collections::HashSet<Simplex> = std::collections::HashSet::new();
    for (lower, upper) in candidates {
        if matched.contains(&lower) || matched.contains(&upper) {
            continue;
        }
        accepted.push((lower.clone(), upper.clone()));
        let trial = DiscreteVectorField::new(complex, accepted.clone())
            .expect("greedy candidates satisfy the matching clauses");
        let q = upper.dim();
        let acyclic = LevelDigraph::forward(complex, &trial, q).topo().is_some();
        if acyclic {
            matched.insert(lower);
            matched.insert(upper);
        } else {
            accepted.pop();
        }
    }
    DiscreteVectorField::new(complex, accepted).expect("validated incrementally")
}
