//! Exact integer homology via Smith normal form.
//!
//! The Smith normal form runs classic elimination with the pivot chosen by
//! minimal absolute value, entirely over arbitrary-precision integers; no
//! modular shortcuts. Matrices in this artifact stay small (hundreds of rows
//! at most), so correctness wins over asymptotics.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::complex::SimplicialComplex;
use crate::gvf::{DiscreteVectorField, GvfError};
use crate::matrix::IntegerMatrix;
use crate::morse::morse_boundary_matrix;

/// Diagonal of the Smith normal form: non-negative, each nonzero entry
/// divides the next, zeros last; `rank` counts the nonzero entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
}

/// A finitely generated abelian group `Z^betti + Z/d1 + ... + Z/dk` with the
/// torsion coefficients in divisibility order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            n => parts.push(format!("Z^{n}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error("boundary matrices do not chain: d_q has {cols} columns, d_(q+1) has {rows} rows")]
    Misaligned { cols: usize, rows: usize },
    #[error("chain law violated: d_q * d_(q+1) != 0")]
    ChainLawViolation,
    #[error(transparent)]
    Matrix(#[from] crate::matrix::MatrixError),
}

/// Smith normal form over the integers. Output invariants: the nonzero
/// diagonal entries form a divisibility chain and `rank` equals the matrix
/// rank; both are unchanged by row/column permutations and transposition.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let nrows = m.nrows();
    let ncols = m.ncols();
    let mut a: Vec<Vec<BigInt>> = (0..nrows)
        .map(|i| (0..ncols).map(|j| m.get(i, j).clone()).collect())
        .collect();
    let k = nrows.min(ncols);
    let mut t = 0;
    while t < k {
        let Some((pi, pj)) = min_abs_nonzero(&a, t) else {
            break;
        };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);
        loop {
            // Clear column t; a nonzero remainder becomes the new, strictly
            // smaller pivot.
            let mut restart = false;
            for i in t + 1..nrows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                if !q.is_zero() {
                    for j in t..ncols {
                        let delta = &q * &a[t][j];
                        a[i][j] -= delta;
                    }
                }
                if !a[i][t].is_zero() {
                    a.swap(i, t);
                    restart = true;
                }
            }
            if restart {
                continue;
            }
            for j in t + 1..ncols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                if !q.is_zero() {
                    for i in t..nrows {
                        let delta = &q * &a[i][t];
                        a[i][j] -= delta;
                    }
                }
                if !a[t][j].is_zero() {
                    swap_cols(&mut a, j, t);
                    restart = true;
                }
            }
            if restart {
                continue;
            }
            // Pivot row and column are clear; force divisibility of the rest.
            match first_nondivisible(&a, t) {
                Some(i) => {
                    for j in t..ncols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for j in t..ncols {
                let v = -a[t][j].clone();
                a[t][j] = v;
            }
        }
        t += 1;
    }
    let diagonal: Vec<BigInt> = (0..k).map(|i| a[i][i].clone()).collect();
    let rank = diagonal.iter().filter(|d| !d.is_zero()).count();
    SmithForm { diagonal, rank }
}

fn min_abs_nonzero(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if v.is_zero() {
                continue;
            }
            let abs = v.abs();
            match &best {
                Some((_, _, b)) if *b <= abs => {}
                _ => best = Some((i, j, abs)),
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn first_nondivisible(a: &[Vec<BigInt>], t: usize) -> Option<usize> {
    let pivot = &a[t][t];
    a.iter()
        .enumerate()
        .skip(t + 1)
        .find(|(_, row)| row.iter().skip(t + 1).any(|v| !(v % pivot).is_zero()))
        .map(|(i, _)| i)
}

fn swap_cols(a: &mut [Vec<BigInt>], x: usize, y: usize) {
    if x == y {
        return;
    }
    for row in a.iter_mut() {
        row.swap(x, y);
    }
}

/// Homology of one dimension from the two adjacent boundary maps:
/// `betti = dim ker d_q - rank d_(q+1)`, torsion from the nontrivial
/// invariant factors of `d_(q+1)`. Checks `d_q * d_(q+1) = 0` first.
pub fn homology_of_pair(
    boundary_above: &IntegerMatrix,
    boundary_here: &IntegerMatrix,
) -> Result<HomologyGroup, HomologyError> {
    if boundary_here.ncols() != boundary_above.nrows() {
        return Err(HomologyError::Misaligned {
            cols: boundary_here.ncols(),
            rows: boundary_above.nrows(),
        });
    }
    if boundary_here.col_labels() != boundary_above.row_labels() {
        return Err(HomologyError::Matrix(
            crate::matrix::MatrixError::IncompatibleProduct {
                left_cols: boundary_here.ncols(),
                right_rows: boundary_above.nrows(),
            },
        ));
    }
    if !boundary_here.mul(boundary_above)?.is_zero() {
        return Err(HomologyError::ChainLawViolation);
    }
    let n_chain = boundary_here.ncols();
    let rank_here = smith_normal_form(boundary_here).rank;
    let above = smith_normal_form(boundary_above);
    let betti = n_chain - rank_here - above.rank;
    let one = BigInt::from(1);
    let torsion = above
        .diagonal
        .into_iter()
        .filter(|d| !d.is_zero() && *d != one)
        .collect();
    Ok(HomologyGroup { betti, torsion })
}

/// Simplicial homology in dimension `q`, straight from the chain boundary
/// matrices. The baseline that every Morse computation is checked against.
pub fn simplicial_homology(complex: &SimplicialComplex, q: isize) -> HomologyGroup {
    homology_of_pair(
        &complex.chain_boundary_matrix(q + 1),
        &complex.chain_boundary_matrix(q),
    )
    .expect("simplicial boundary maps always chain")
}

/// Morse homology in dimension `q` for a gradient field.
pub fn morse_homology(
    complex: &SimplicialComplex,
    field: &DiscreteVectorField,
    q: isize,
) -> Result<HomologyGroup, GvfError> {
    let above = morse_boundary_matrix(complex, field, q + 1)?;
    let here = morse_boundary_matrix(complex, field, q)?;
    Ok(homology_of_pair(&above, &here).expect("Morse boundary maps always chain"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn labels(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn diag_i64(sf: &SmithForm) -> Vec<i64> {
        sf.diagonal.iter().map(|d| i64::try_from(d).unwrap()).collect()
    }

    #[test]
    fn snf_identity_and_zero() {
        let id = IntegerMatrix::from_i64_rows(labels("r", 3), labels("c", 3), &[
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
        ])
        .unwrap();
        let sf = smith_normal_form(&id);
        assert_eq!(diag_i64(&sf), vec![1, 1, 1]);
        assert_eq!(sf.rank, 3);

        let zero = IntegerMatrix::zeros(labels("r", 2), labels("c", 4)).unwrap();
        let sf = smith_normal_form(&zero);
        assert_eq!(diag_i64(&sf), vec![0, 0]);
        assert_eq!(sf.rank, 0);
    }

    #[test]
    fn snf_two_column_torsion_three() {
        // Rows (1,-2) and (2,-1) alone have determinant 3.
        let m = IntegerMatrix::from_i64_rows(labels("r", 2), labels("c", 2), &[
            vec![1, -2],
            vec![2, -1],
        ])
        .unwrap();
        let sf = smith_normal_form(&m);
        assert_eq!(diag_i64(&sf), vec![1, 3]);
    }

    #[test]
    fn snf_agrees_with_determinant_divisors() {
        // Independent oracle: d_k = gcd of all k x k minors, invariant
        // factors are the successive quotients.
        let cases: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]],
            vec![vec![0, 0], vec![0, 0]],
            vec![vec![6, 10], vec![15, 4], vec![9, -3]],
            vec![vec![1, -2, 0, 3], vec![2, -1, 1, 1]],
            vec![vec![-6, 111, -36, 6], vec![5, -672, 210, 74], vec![0, -255, 81, 24], vec![-7, 255, -81, -10]],
        ];
        for grid in cases {
            let rows = grid.len();
            let cols = grid[0].len();
            let m = IntegerMatrix::from_i64_rows(labels("r", rows), labels("c", cols), &grid)
                .unwrap();
            let sf = smith_normal_form(&m);
            let oracle = determinant_divisor_factors(&grid);
            let got: Vec<BigInt> = sf.diagonal.iter().cloned().collect();
            assert_eq!(got, oracle, "mismatch for {grid:?}");
            for w in sf.diagonal.windows(2) {
                if !w[0].is_zero() && !w[1].is_zero() {
                    assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken");
                }
            }
        }
    }

    fn determinant_divisor_factors(grid: &[Vec<i64>]) -> Vec<BigInt> {
        use num_integer::Integer;
        let rows = grid.len();
        let cols = grid[0].len();
        let k = rows.min(cols);
        let mut divisors = vec![BigInt::one()];
        for size in 1..=k {
            let mut g = BigInt::zero();
            for rsel in combinations(rows, size) {
                for csel in combinations(cols, size) {
                    let det = minor_det(grid, &rsel, &csel);
                    g = g.gcd(&det);
                }
            }
            divisors.push(g);
        }
        let mut factors = Vec::with_capacity(k);
        for i in 1..=k {
            if divisors[i].is_zero() {
                factors.push(BigInt::zero());
            } else {
                factors.push(&divisors[i] / &divisors[i - 1]);
            }
        }
        factors
    }

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut out);
        out
    }

    fn minor_det(grid: &[Vec<i64>], rsel: &[usize], csel: &[usize]) -> BigInt {
        // Cofactor expansion; minors here are at most 4x4.
        if rsel.len() == 1 {
            return BigInt::from(grid[rsel[0]][csel[0]]);
        }
        let mut det = BigInt::zero();
        for (pos, &c) in csel.iter().enumerate() {
            let sub_r = &rsel[1..];
            let sub_c: Vec<usize> = csel
                .iter()
                .copied()
                .filter(|&x| x != c)
                .collect();
            let cofactor = BigInt::from(grid[rsel[0]][c]) * minor_det(grid, sub_r, &sub_c);
            if pos % 2 == 0 {
                det += cofactor;
            } else {
                det -= cofactor;
            }
        }
        det
    }

    #[test]
    fn snf_invariant_under_permutation_and_transpose() {
        let m = IntegerMatrix::from_i64_rows(labels("r", 3), labels("c", 3), &[
            vec![2, 4, 4],
            vec![-6, 6, 12],
            vec![10, 4, 16],
        ])
        .unwrap();
        let base = smith_normal_form(&m);
        assert_eq!(smith_normal_form(&m.transpose()).diagonal, base.diagonal);
        let permuted = IntegerMatrix::from_i64_rows(labels("r", 3), labels("c", 3), &[
            vec![10, 16, 4],
            vec![2, 4, 4],
            vec![-6, 12, 6],
        ])
        .unwrap();
        assert_eq!(smith_normal_form(&permuted).diagonal, base.diagonal);
    }

    #[test]
    fn homology_of_zero_maps_is_free() {
        let d2 = IntegerMatrix::zeros(labels("g", 3), vec![]).unwrap();
        let d1 = IntegerMatrix::zeros(vec![], labels("g", 3)).unwrap();
        let h = homology_of_pair(&d2, &d1).unwrap();
        assert_eq!(h.betti, 3);
        assert!(h.torsion.is_empty());
    }

    #[test]
    fn simplicial_homology_point_and_circle() {
        let point = SimplicialComplex::from_facets(&[vec![0]]).unwrap();
        let h0 = simplicial_homology(&point, 0);
        assert_eq!((h0.betti, h0.torsion.len()), (1, 0));
        let h1 = simplicial_homology(&point, 1);
        assert_eq!(h1.betti, 0);

        let circle =
            SimplicialComplex::from_facets(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert_eq!(simplicial_homology(&circle, 0).betti, 1);
        let h1 = simplicial_homology(&circle, 1);
        assert_eq!((h1.betti, h1.torsion.len()), (1, 0));
    }

    #[test]
    fn simplicial_homology_two_sphere() {
        let sphere = SimplicialComplex::from_facets(&[
            vec![0, 1, 2],
            vec![0, 1, 3],
            vec![0, 2, 3],
            vec![1, 2, 3],
        ])
        .unwrap();
        let betti: Vec<usize> = (0..=2).map(|q| simplicial_homology(&sphere, q).betti).collect();
        assert_eq!(betti, vec![1, 0, 1]);
        assert!((0..=2).all(|q| simplicial_homology(&sphere, q).torsion.is_empty()));
    }

    #[test]
    fn morse_homology_with_empty_field_matches() {
        let c = SimplicialComplex::from_facets(&[vec![0, 1, 2], vec![2, 3], vec![3, 4], vec![2, 4]])
            .unwrap();
        let v = DiscreteVectorField::empty();
        for q in 0..=c.dim() as isize {
            assert_eq!(
                morse_homology(&c, &v, q).unwrap(),
                simplicial_homology(&c, q)
            );
        }
    }

    #[test]
    fn chain_law_violation_is_reported() {
        let d1 = IntegerMatrix::from_i64_rows(labels("v", 1), labels("e", 1), &[vec![1]]).unwrap();
        let d2 = IntegerMatrix::from_i64_rows(labels("e", 1), labels("f", 1), &[vec![1]]).unwrap();
        assert!(matches!(
            homology_of_pair(&d2, &d1),
            Err(HomologyError::ChainLawViolation)
        ));
    }
}
