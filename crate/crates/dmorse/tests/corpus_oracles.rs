//! Corpus-wide oracle checks: every fast matrix update is compared against
//! full re-enumeration on the cancelled field, the trajectory-sum identities
//! behind the update formula are asserted by brute force, and Morse homology
//! is pinned to simplicial homology on every instance.

mod common;

use num_bigint::BigInt;

use dmorse::cancel::{
    apply_cancellation, cancel_many, cancel_pair, find_cancellable_pairs,
    simultaneous_cancellable, update_boundary_k, CancelMode, CancellablePair, SimultaneousCheck,
};
use dmorse::complex::{Simplex, SimplicialComplex};
use dmorse::gvf::{
    critical_simplices, enumerate_trajectories, trajectory_aggregate, DiscreteVectorField,
    Trajectory,
};
use dmorse::homology::{morse_homology, simplicial_homology, smith_normal_form};
use dmorse::matrix::IntegerMatrix;
use dmorse::morse::{morse_boundary_matrix, MorseComplexData};

const CORPUS_SIZE: usize = 48;
const CORPUS_SEED: u64 = 20_240_801;

fn all_cancellable_pairs(
    complex: &SimplicialComplex,
    field: &DiscreteVectorField,
) -> Vec<CancellablePair> {
    (1..=complex.dim() as isize)
        .flat_map(|k| find_cancellable_pairs(complex, field, k).unwrap())
        .collect()
}

#[test]
fn chain_laws_duality_and_homology_on_every_instance() {
    for inst in common::corpus(CORPUS_SIZE, CORPUS_SEED) {
        let data = MorseComplexData::build(&inst.complex, &inst.field).unwrap();
        data.check_chain_laws()
            .unwrap_or_else(|e| panic!("instance {}: {e}", inst.id));
        for q in 0..=inst.complex.dim() as isize + 1 {
            assert_eq!(
                data.coboundary(q).unwrap(),
                &data.boundary(q).unwrap().transpose(),
                "instance {}: coboundary is not the transposed boundary at q={q}",
                inst.id
            );
        }
        for q in 0..=inst.complex.dim() as isize {
            let simplicial = simplicial_homology(&inst.complex, q);
            let morse = morse_homology(&inst.complex, &inst.field, q).unwrap();
            assert_eq!(
                simplicial, morse,
                "instance {}: homology mismatch at q={q}",
                inst.id
            );
        }
    }
}

#[test]
fn fast_updates_equal_reenumeration_for_every_cancellable_pair() {
    for inst in common::corpus(CORPUS_SIZE, CORPUS_SEED) {
        let data = MorseComplexData::build(&inst.complex, &inst.field).unwrap();
        for pair in all_cancellable_pairs(&inst.complex, &inst.field) {
            let cancelled = cancel_pair(&inst.complex, &inst.field, &pair).unwrap();
            let fast = apply_cancellation(&data, &pair).unwrap();
            let oracle = MorseComplexData::build(&inst.complex, &cancelled).unwrap();
            assert_eq!(
                fast, oracle,
                "instance {}: fast update disagrees with re-enumeration for {pair}",
                inst.id
            );
            // The updated family is again a chain complex.
            fast.check_chain_laws().unwrap();
            // Homology is untouched by the cancellation.
            for q in 0..=inst.complex.dim() as isize {
                assert_eq!(
                    morse_homology(&inst.complex, &cancelled, q).unwrap(),
                    simplicial_homology(&inst.complex, q),
                    "instance {}: homology changed at q={q} after cancelling {pair}",
                    inst.id
                );
            }
        }
    }
}

#[test]
fn row_operation_trace_replays_bit_exactly() {
    for inst in common::corpus(CORPUS_SIZE, CORPUS_SEED) {
        let data = MorseComplexData::build(&inst.complex, &inst.field).unwrap();
        for pair in all_cancellable_pairs(&inst.complex, &inst.field) {
            let k = pair.sigma0.dim() as isize;
            let boundary = data.boundary(k).unwrap();
            let (updated, trace) =
                update_boundary_k(boundary, &pair.tau0.label(), &pair.sigma0.label()).unwrap();
            assert_eq!(trace.replay(boundary).unwrap(), updated);
            // The pivot is the weight of the unique trajectory.
            assert_eq!(
                boundary
                    .entry_by_labels(&pair.tau0.label(), &pair.sigma0.label())
                    .unwrap(),
                &BigInt::from(pair.weight)
            );
        }
    }
}

/// The weighted sums feeding the update formula: reversing the unique
/// trajectory turns every trajectory into `sigma0`'s old target into a
/// trajectory onto `sigma0` itself, with weights scaled by `-w(P0)`.
#[test]
fn reversal_identity_for_sums_onto_the_cancelled_cell() {
    for inst in common::corpus(CORPUS_SIZE, CORPUS_SEED) {
        for pair in all_cancellable_pairs(&inst.complex, &inst.field) {
            let cancelled = cancel_pair(&inst.complex, &inst.field, &pair).unwrap();
            let k = pair.sigma0.dim() as isize;
            for sigma_j in critical_simplices(&inst.complex, &cancelled, k) {
                let lhs =
                    trajectory_aggregate(&inst.complex, &cancelled, &sigma_j, &pair.sigma0)
                        .unwrap()
                        .weight_sum;
                let rhs = trajectory_aggregate(&inst.complex, &inst.field, &sigma_j, &pair.tau0)
                    .unwrap()
                    .weight_sum
                    * (-pair.weight);
                assert_eq!(
                    lhs, rhs,
                    "instance {}: reversal identity fails for {sigma_j} with {pair}",
                    inst.id
                );
            }
        }
    }
}

fn meets(trajectory: &Trajectory, marked: &std::collections::HashSet<Simplex>) -> bool {
    trajectory.simplices.iter().any(|s| marked.contains(s))
}

fn filtered_weight_sum(
    complex: &SimplicialComplex,
    field: &DiscreteVectorField,
    from: &Simplex,
    to: &Simplex,
    marked: &std::collections::HashSet<Simplex>,
) -> Option<BigInt> {
    let listed = enumerate_trajectories(complex, field, from, to, 20_000).ok()?;
    Some(
        listed
            .iter()
            .filter(|t| meets(t, marked))
            .map(|t| BigInt::from(t.weight()))
            .sum(),
    )
}

/// Splitting the trajectories through the reversed path: the sums over
/// trajectories that touch the cancelled trajectory differ, between the old
/// and the new field, by exactly the product of the two aggregate sums
/// through the cancelled pair. Asserted in both equivalent phrasings.
#[test]
fn meeting_sum_identity_by_filtered_enumeration() {
    for inst in common::corpus(CORPUS_SIZE, CORPUS_SEED) {
        if inst.complex.total_size() > 140 {
            continue;
        }
        for pair in all_cancellable_pairs(&inst.complex, &inst.field) {
            let cancelled = cancel_pair(&inst.complex, &inst.field, &pair).unwrap();
            let marked: std::collections::HashSet<Simplex> =
                pair.trajectory.simplices.iter().cloned().collect();
            let k = pair.sigma0.dim() as isize;
            for sigma_j in critical_simplices(&inst.complex, &cancelled, k).iter().take(6) {
                for tau_i in critical_simplices(&inst.complex, &cancelled, k - 1)
                    .iter()
                    .take(6)
                {
                    let Some(lhs) =
                        filtered_weight_sum(&inst.complex, &cancelled, sigma_j, tau_i, &marked)
                    else {
                        continue;
                    };
                    let Some(old_meeting) =
                        filtered_weight_sum(&inst.complex, &inst.field, sigma_j, tau_i, &marked)
                    else {
                        continue;
                    };
                    let onto_sigma0 =
                        trajectory_aggregate(&inst.complex, &cancelled, sigma_j, &pair.sigma0)
                            .unwrap()
                            .weight_sum;
                    let from_sigma0 =
                        trajectory_aggregate(&inst.complex, &inst.field, &pair.sigma0, tau_i)
                            .unwrap()
                            .weight_sum;
                    let rhs_product = &old_meeting + &onto_sigma0 * &from_sigma0;
                    assert_eq!(
                        lhs, rhs_product,
                        "instance {}: meeting-sum identity (new-field phrasing) fails",
                        inst.id
                    );
                    let to_tau0 =
                        trajectory_aggregate(&inst.complex, &inst.field, sigma_j, &pair.tau0)
                            .unwrap()
                            .weight_sum;
                    let rhs_old_field =
                        &old_meeting - BigInt::from(pair.weight) * &to_tau0 * &from_sigma0;
                    assert_eq!(
                        lhs, rhs_old_field,
                        "instance {}: meeting-sum identity (old-field phrasing) fails",
                        inst.id
                    );
                }
            }
        }
    }
}

#[test]
fn matrices_far_from_the_pair_are_untouched() {
    for inst in common::corpus(CORPUS_SIZE, CORPUS_SEED) {
        let data = MorseComplexData::build(&inst.complex, &inst.field).unwrap();
        for pair in all_cancellable_pairs(&inst.complex, &inst.field) {
            let cancelled = cancel_pair(&inst.complex, &inst.field, &pair).unwrap();
            let k = pair.sigma0.dim() as isize;
            for q in 0..=inst.complex.dim() as isize + 1 {
                if (k - 1..=k + 1).contains(&q) {
                    continue;
                }
                assert_eq!(
                    &morse_boundary_matrix(&inst.complex, &cancelled, q).unwrap(),
                    data.boundary(q).unwrap(),
                    "instance {}: far matrix changed at q={q}",
                    inst.id
                );
            }
        }
    }
}

#[test]
fn euler_characteristic_and_rank_bounds() {
    for inst in common::corpus(CORPUS_SIZE, CORPUS_SEED) {
        let d = inst.complex.dim() as isize;
        let mut euler_critical: i64 = 0;
        for q in 0..=d {
            let crit = critical_simplices(&inst.complex, &inst.field, q).len() as i64;
            euler_critical += if q % 2 == 0 { crit } else { -crit };
        }
        let mut euler_betti: i64 = 0;
        for q in 0..=d {
            let b = simplicial_homology(&inst.complex, q).betti as i64;
            euler_betti += if q % 2 == 0 { b } else { -b };
        }
        assert_eq!(euler_critical, euler_betti, "instance {}", inst.id);
        for q in 0..=d {
            let rank_here = smith_normal_form(&inst.complex.chain_boundary_matrix(q)).rank;
            let rank_above = smith_normal_form(&inst.complex.chain_boundary_matrix(q + 1)).rank;
            assert!(
                rank_here + rank_above <= inst.complex.size(q),
                "instance {}: rank bound broken at q={q}",
                inst.id
            );
        }
    }
}

#[test]
fn batch_cancellation_modes_agree_on_corpus() {
    let mut batches_checked = 0;
    for inst in common::corpus(CORPUS_SIZE, CORPUS_SEED) {
        let pairs = all_cancellable_pairs(&inst.complex, &inst.field);
        // Greedily grow a batch that stays simultaneously cancellable.
        let mut batch: Vec<CancellablePair> = Vec::new();
        for pair in pairs {
            if batch.len() >= 5 {
                break;
            }
            batch.push(pair);
            let check = simultaneous_cancellable(&inst.complex, &inst.field, &batch).unwrap();
            if !matches!(check, SimultaneousCheck::Cancellable) {
                batch.pop();
            }
        }
        if batch.len() < 2 {
            continue;
        }
        batches_checked += 1;
        let sequential =
            cancel_many(&inst.complex, &inst.field, &batch, CancelMode::Sequential).unwrap();
        let one_shot =
            cancel_many(&inst.complex, &inst.field, &batch, CancelMode::OneShot).unwrap();
        assert_eq!(sequential, one_shot, "instance {}", inst.id);
        for q in 0..=inst.complex.dim() as isize {
            let expect = critical_simplices(&inst.complex, &inst.field, q).len()
                - batch
                    .iter()
                    .filter(|p| p.sigma0.dim() as isize == q || p.tau0.dim() as isize == q)
                    .count();
            assert_eq!(
                critical_simplices(&inst.complex, &sequential, q).len(),
                expect,
                "instance {}: critical count at q={q}",
                inst.id
            );
            assert_eq!(
                morse_homology(&inst.complex, &sequential, q).unwrap(),
                simplicial_homology(&inst.complex, q),
                "instance {}: batch cancellation changed homology at q={q}",
                inst.id
            );
        }
    }
    assert!(batches_checked > 5, "corpus produced too few batches: {batches_checked}");
}

#[test]
fn coboundary_updates_equal_transposed_boundary_updates() {
    use dmorse::cancel::{
        update_coboundary_k, update_coboundary_kminus1, update_coboundary_kplus1,
    };
    for inst in common::corpus(24, CORPUS_SEED ^ 0xBEEF) {
        let data = MorseComplexData::build(&inst.complex, &inst.field).unwrap();
        for pair in all_cancellable_pairs(&inst.complex, &inst.field) {
            let k = pair.sigma0.dim() as isize;
            let sigma = pair.sigma0.label();
            let tau = pair.tau0.label();
            let (b_k, _) = update_boundary_k(data.boundary(k).unwrap(), &tau, &sigma).unwrap();
            let (c_k, _) = update_coboundary_k(data.coboundary(k).unwrap(), &sigma, &tau).unwrap();
            assert_eq!(c_k, b_k.transpose());
            let c_up = update_coboundary_kplus1(data.coboundary(k + 1).unwrap(), &sigma).unwrap();
            let b_up = dmorse::cancel::update_boundary_kplus1(
                data.boundary(k + 1).unwrap(),
                &sigma,
            )
            .unwrap();
            assert_eq!(c_up, b_up.transpose());
            if k >= 1 {
                let c_dn =
                    update_coboundary_kminus1(data.coboundary(k - 1).unwrap(), &tau).unwrap();
                let b_dn = dmorse::cancel::update_boundary_kminus1(
                    data.boundary(k - 1).unwrap(),
                    &tau,
                )
                .unwrap();
                assert_eq!(c_dn, b_dn.transpose());
            }
        }
    }
}

#[test]
fn snf_is_permutation_and_transpose_invariant_on_corpus_matrices() {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    for inst in common::corpus(12, CORPUS_SEED ^ 0x5eed) {
        for q in 1..=inst.complex.dim() as isize {
            let m = inst.complex.chain_boundary_matrix(q);
            let base = smith_normal_form(&m);
            assert_eq!(smith_normal_form(&m.transpose()).diagonal, base.diagonal);
            // Shuffle rows via relabeled reconstruction.
            let mut order: Vec<usize> = (0..m.nrows()).collect();
            order.shuffle(&mut rng);
            let rows: Vec<String> = order.iter().map(|&i| m.row_labels()[i].clone()).collect();
            let mut grid = Vec::new();
            for &i in &order {
                let mut row = Vec::new();
                for j in 0..m.ncols() {
                    row.push(m.get(i, j).clone());
                }
                grid.push(row);
            }
            let shuffled = IntegerMatrix::from_parts(
                rows,
                m.col_labels().to_vec(),
                grid.into_iter().flatten().collect(),
            )
            .unwrap();
            assert_eq!(smith_normal_form(&shuffled).diagonal, base.diagonal);
        }
    }
}
