//! Parallel vs sequential Morse matrix assembly. Columns of the boundary
//! matrix are independent DP passes, so with the `parallel` feature the
//! assembly fans out over rayon; this bench pins the same work to a
//! one-thread pool for the sequential baseline. Without the feature only
//! the sequential path exists and is benched alone.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use dmorse::complex::SimplicialComplex;
use dmorse::corpus::random_greedy_matching;
use dmorse::gvf::DiscreteVectorField;
use dmorse::morse::morse_boundary_matrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn workload() -> (SimplicialComplex, DiscreteVectorField) {
    let complex = SimplicialComplex::matching_complex(8).unwrap();
    // A sparse matching keeps many critical cells, i.e. many columns.
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut field = random_greedy_matching(&mut rng, &complex);
    let keep = field.pairs().len() / 4;
    field = DiscreteVectorField::new(&complex, field.pairs()[..keep].to_vec()).unwrap();
    (complex, field)
}

fn assemble_all(complex: &SimplicialComplex, field: &DiscreteVectorField) {
    for q in 0..=complex.dim() as isize + 1 {
        black_box(morse_boundary_matrix(complex, field, q).unwrap());
    }
}

fn bench_assembly(c: &mut Criterion) {
    let (complex, field) = workload();
    let mut group = c.benchmark_group("morse_assembly/matching_complex_8");

    #[cfg(feature = "parallel")]
    {
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        group.bench_function("sequential_1_thread", |b| {
            b.iter(|| single.install(|| assemble_all(&complex, &field)))
        });
        group.bench_function("parallel_default_threads", |b| {
            b.iter(|| assemble_all(&complex, &field))
        });
    }

    #[cfg(not(feature = "parallel"))]
    group.bench_function("sequential_no_feature", |b| {
        b.iter(|| assemble_all(&complex, &field))
    });

    group.finish();
}

criterion_group!(benches, bench_assembly);
criterion_main!(benches);
