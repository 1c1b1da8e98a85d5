//! Morse-complex boundary and co-Morse coboundary matrices.
//!
//! The boundary matrix for dimension `q` has one column per critical
//! q-simplex and one row per critical (q-1)-simplex; the entry is the
//! weighted sum of all trajectories between the two cells. One DP pass per
//! column covers all rows at once, and columns are independent, so with the
//! `parallel` feature the assembly fans out over rayon.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::complex::{Simplex, SimplicialComplex};
use crate::gvf::engine::LevelDigraph;
use crate::gvf::{critical_simplices, DiscreteVectorField, GvfError};
use crate::matrix::{IntegerMatrix, MatrixError};

/// Runs `f` over the items, in parallel when the feature is enabled.
pub(crate) fn map_columns<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

/// Matrix of the Morse boundary map on critical q-cells: entry
/// `(tau, sigma)` is the weighted trajectory sum from `sigma` to `tau`.
/// With an empty field this is exactly the simplicial boundary matrix.
pub fn morse_boundary_matrix(
    complex: &SimplicialComplex,
    field: &DiscreteVectorField,
    q: isize,
) -> Result<IntegerMatrix, GvfError> {
    let sources = critical_simplices(complex, field, q);
    let targets = critical_simplices(complex, field, q - 1);
    let rows: Vec<String> = targets.iter().map(Simplex::label).collect();
    let cols: Vec<String> = sources.iter().map(Simplex::label).collect();
    let mut m = IntegerMatrix::zeros(rows, cols).expect("critical labels are unique");
    if q < 1 || q as usize > complex.dim() {
        return Ok(m);
    }
    // The precondition is checked even when no critical cells remain at this
    // level: a fully matched level can still carry a cycle.
    let digraph = LevelDigraph::forward(complex, field, q as usize);
    if digraph.topo().is_none() {
        return Err(GvfError::NotGradient);
    }
    if sources.is_empty() || targets.is_empty() {
        return Ok(m);
    }
    let target_nodes: Vec<usize> = targets
        .iter()
        .map(|t| digraph.lower_node(complex.position(t).expect("critical cell is in complex")))
        .collect();
    let columns: Vec<Vec<BigInt>> = map_columns(sources, |sigma| {
        let source = digraph.upper_node(complex.position(&sigma).expect("critical cell"));
        let sums = digraph.path_sums(source).expect("acyclicity checked above");
        target_nodes
            .iter()
            .map(|&t| sums[t].0.clone())
            .collect()
    });
    for (j, col) in columns.into_iter().enumerate() {
        for (i, v) in col.into_iter().enumerate() {
            m.set(i, j, v);
        }
    }
    Ok(m)
}

/// Matrix of the co-Morse coboundary map into critical q-cells: rows are the
/// critical q-simplices, columns the critical (q-1)-simplices, entries the
/// weighted co-trajectory sums. Computed by its own pass over the dual
/// digraph; tests assert it equals the transposed boundary matrix instead
/// of defining it that way.
pub fn morse_coboundary_matrix(
    complex: &SimplicialComplex,
    field: &DiscreteVectorField,
    q: isize,
) -> Result<IntegerMatrix, GvfError> {
    let targets = critical_simplices(complex, field, q);
    let sources = critical_simplices(complex, field, q - 1);
    let rows: Vec<String> = targets.iter().map(Simplex::label).collect();
    let cols: Vec<String> = sources.iter().map(Simplex::label).collect();
    let mut m = IntegerMatrix::zeros(rows, cols).expect("critical labels are unique");
    if q < 1 || q as usize > complex.dim() {
        return Ok(m);
    }
    let digraph = LevelDigraph::co(complex, field, q as usize);
    if digraph.topo().is_none() {
        return Err(GvfError::NotGradient);
    }
    if sources.is_empty() || targets.is_empty() {
        return Ok(m);
    }
    let target_nodes: Vec<usize> = targets
        .iter()
        .map(|t| digraph.upper_node(complex.position(t).expect("critical cell is in complex")))
        .collect();
    let columns: Vec<Vec<BigInt>> = map_columns(sources, |tau| {
        let source = digraph.lower_node(complex.position(&tau).expect("critical cell"));
        let sums = digraph.path_sums(source).expect("acyclicity checked above");
        target_nodes
            .iter()
            .map(|&t| sums[t].0.clone())
            .collect()
    });
    for (j, col) in columns.into_iter().enumerate() {
        for (i, v) in col.into_iter().enumerate() {
            m.set(i, j, v);
        }
    }
    Ok(m)
}

#[derive(Debug, Error)]
pub enum MorseDataError {
    #[error(transparent)]
    Gvf(#[from] GvfError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("chain law fails at dimension {q}: the composite below is nonzero\n{product}")]
    ChainLaw { q: isize, product: IntegerMatrix },
    #[error("cochain law fails at dimension {q}: the composite below is nonzero\n{product}")]
    CochainLaw { q: isize, product: IntegerMatrix },
    #[error(
        "boundary matrices do not chain: matrix {index} has {rows} rows, matrix {prev} has {cols} columns"
    )]
    Misaligned {
        index: usize,
        rows: usize,
        prev: usize,
        cols: usize,
    },
}

/// Critical cells and the full family of Morse boundary / coboundary
/// matrices of one gradient field, indexed by dimension: `boundary(q)` maps
/// critical q-chains to critical (q-1)-chains for `q` in `0..=d+1`.
///
/// The same container also accepts externally supplied matrices (label-only
/// critical cells), so matrix-level fixtures can run through the exact same
/// cancellation machinery as fields built from a complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseComplexData {
    /// Per-dimension labels of the critical cells, canonical order.
    pub critical: Vec<Vec<String>>,
    /// `boundary[q]` is the matrix of the q-th Morse boundary map.
    pub boundary: Vec<IntegerMatrix>,
    /// `coboundary[q]` is the matrix of the q-th co-Morse coboundary map.
    pub coboundary: Vec<IntegerMatrix>,
}

impl MorseComplexData {
    /// Assembles every dimension of the Morse and co-Morse complex by
    /// trajectory enumeration. Verifies nothing beyond gradient-ness; use
    /// [`verify_chain_law`] for the composite checks.
    pub fn build(
        complex: &SimplicialComplex,
        field: &DiscreteVectorField,
    ) -> Result<Self, GvfError> {
        let d = complex.dim() as isize;
        let mut critical = Vec::new();
        let mut boundary = Vec::new();
        let mut coboundary = Vec::new();
        for q in 0..=d + 1 {
            if q <= d {
                critical.push(
                    critical_simplices(complex, field, q)
                        .iter()
                        .map(Simplex::label)
                        .collect(),
                );
            }
            boundary.push(morse_boundary_matrix(complex, field, q)?);
            coboundary.push(morse_coboundary_matrix(complex, field, q)?);
        }
        Ok(Self {
            critical,
            boundary,
            coboundary,
        })
    }

    /// Fixture mode: adopts externally supplied boundary matrices (e.g. a
    /// published table), derives critical-cell labels from their axes and
    /// coboundaries as transposes, and checks alignment plus both chain
    /// laws. `matrices[q]` must map q-chains to (q-1)-chains.
    pub fn from_boundary_matrices(matrices: Vec<IntegerMatrix>) -> Result<Self, MorseDataError> {
        for i in 1..matrices.len() {
            if matrices[i].row_labels() != matrices[i - 1].col_labels() {
                return Err(MorseDataError::Misaligned {
                    index: i,
                    rows: matrices[i].nrows(),
                    prev: i - 1,
                    cols: matrices[i - 1].ncols(),
                });
            }
        }
        let critical = matrices.iter().map(|m| m.col_labels().to_vec()).collect();
        let coboundary = matrices.iter().map(IntegerMatrix::transpose).collect();
        let data = Self {
            critical,
            boundary: matrices,
            coboundary,
        };
        data.check_chain_laws()?;
        Ok(data)
    }

    pub fn top_dimension(&self) -> isize {
        self.boundary.len() as isize - 2
    }

    /// The boundary matrix for dimension `q`; empty axes outside range.
    pub fn boundary(&self, q: isize) -> Option<&IntegerMatrix> {
        usize::try_from(q).ok().and_then(|q| self.boundary.get(q))
    }

    pub fn coboundary(&self, q: isize) -> Option<&IntegerMatrix> {
        usize::try_from(q).ok().and_then(|q| self.coboundary.get(q))
    }

    pub fn critical_labels(&self, q: isize) -> &[String] {
        usize::try_from(q)
            .ok()
            .and_then(|q| self.critical.get(q))
            .map_or(&[], Vec::as_slice)
    }

    /// Checks the chain law and cochain law at every dimension.
    pub fn check_chain_laws(&self) -> Result<(), MorseDataError> {
        for q in 1..self.boundary.len() {
            let product = self.boundary[q - 1].mul(&self.boundary[q])?;
            if !product.is_zero() {
                return Err(MorseDataError::ChainLaw {
                    q: q as isize,
                    product,
                });
            }
            let coproduct = self.coboundary[q].mul(&self.coboundary[q - 1])?;
            if !coproduct.is_zero() {
                return Err(MorseDataError::CochainLaw {
                    q: q as isize,
                    product: coproduct,
                });
            }
        }
        Ok(())
    }
}

/// Assembles all Morse matrices and checks that consecutive boundary maps
/// compose to zero, and dually for the coboundaries. A failure names the
/// dimension and carries the offending composite.
pub fn verify_chain_law(
    complex: &SimplicialComplex,
    field: &DiscreteVectorField,
) -> Result<(), MorseDataError> {
    MorseComplexData::build(complex, field)?.check_chain_laws()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gvf::{enumerate_trajectories, DiscreteVectorField};
    use num_traits::Zero;

    fn simplex(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    fn field(complex: &SimplicialComplex, pairs: &[(&[u32], &[u32])]) -> DiscreteVectorField {
        DiscreteVectorField::new(
            complex,
            pairs
                .iter()
                .map(|(a, b)| (simplex(a), simplex(b)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn empty_field_reproduces_simplicial_matrices() {
        let c = SimplicialComplex::from_facets(&[vec![0, 1, 2]]).unwrap();
        let v = DiscreteVectorField::empty();
        for q in 0..=(c.dim() as isize + 1) {
            assert_eq!(
                morse_boundary_matrix(&c, &v, q).unwrap(),
                c.chain_boundary_matrix(q),
                "boundary mismatch at q={q}"
            );
            assert_eq!(
                morse_coboundary_matrix(&c, &v, q).unwrap(),
                c.cochain_coboundary_matrix(q),
                "coboundary mismatch at q={q}"
            );
        }
    }

    #[test]
    fn triangle_boundary_entry_cancels_to_zero() {
        let c = SimplicialComplex::from_facets(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let v = field(&c, &[(&[1], &[0, 1]), (&[2], &[1, 2])]);
        let d1 = morse_boundary_matrix(&c, &v, 1).unwrap();
        assert_eq!(d1.nrows(), 1);
        assert_eq!(d1.ncols(), 1);
        assert!(d1.get(0, 0).is_zero());
        // Cross-check by explicit enumeration.
        let trajectories =
            enumerate_trajectories(&c, &v, &simplex(&[0, 2]), &simplex(&[0]), 10).unwrap();
        let total: i32 = trajectories.iter().map(|t| t.weight()).sum();
        assert_eq!(BigInt::from(total), *d1.get(0, 0));
    }

    #[test]
    fn coboundary_is_transpose_of_boundary() {
        let c = SimplicialComplex::from_facets(&[vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 4]])
            .unwrap();
        let v = field(&c, &[(&[1], &[0, 1]), (&[2, 3], &[1, 2, 3]), (&[4], &[3, 4])]);
        for q in 0..=(c.dim() as isize + 1) {
            let b = morse_boundary_matrix(&c, &v, q).unwrap();
            let cb = morse_coboundary_matrix(&c, &v, q).unwrap();
            assert_eq!(cb, b.transpose(), "transpose duality failed at q={q}");
        }
    }

    #[test]
    fn zero_critical_cells_gives_empty_axes() {
        let c = SimplicialComplex::from_facets(&[vec![0, 1]]).unwrap();
        let v = field(&c, &[(&[1], &[0, 1])]);
        // Only [0] is critical: dimension-1 boundary matrix is 1x0.
        let d1 = morse_boundary_matrix(&c, &v, 1).unwrap();
        assert_eq!((d1.nrows(), d1.ncols()), (1, 0));
        let cb1 = morse_coboundary_matrix(&c, &v, 1).unwrap();
        assert_eq!((cb1.nrows(), cb1.ncols()), (0, 1));
    }

    #[test]
    fn chain_law_holds_on_collapsed_tetrahedron_boundary() {
        let c = SimplicialComplex::from_facets(&[
            vec![0, 1, 2],
            vec![0, 1, 3],
            vec![0, 2, 3],
            vec![1, 2, 3],
        ])
        .unwrap();
        assert!(verify_chain_law(&c, &DiscreteVectorField::empty()).is_ok());
        let v = field(
            &c,
            &[
                (&[1], &[0, 1]),
                (&[2], &[0, 2]),
                (&[3], &[0, 3]),
                (&[1, 2], &[0, 1, 2]),
                (&[1, 3], &[0, 1, 3]),
                (&[2, 3], &[0, 2, 3]),
            ],
        );
        assert!(crate::gvf::is_gradient(&c, &v));
        assert!(verify_chain_law(&c, &v).is_ok());
        let data = MorseComplexData::build(&c, &v).unwrap();
        // Two critical cells remain: the vertex [0] and the top face [1,2,3].
        assert_eq!(data.critical_labels(0), ["0"]);
        assert!(data.critical_labels(1).is_empty());
        assert_eq!(data.critical_labels(2), ["1-2-3"]);
    }

    #[test]
    fn fixture_mode_accepts_external_matrices() {
        let d0 = IntegerMatrix::zeros(vec![], vec!["p".into()]).unwrap();
        let d1 = IntegerMatrix::from_i64_rows(
            vec!["p".into()],
            vec!["a".into(), "b".into()],
            &[vec![0, 0]],
        )
        .unwrap();
        let data = MorseComplexData::from_boundary_matrices(vec![d0, d1]).unwrap();
        assert_eq!(data.critical_labels(0), ["p"]);
        assert_eq!(data.critical_labels(1), ["a", "b"]);
        assert_eq!(data.coboundary(1).unwrap(), &data.boundary(1).unwrap().transpose());

        let bad_d1 = IntegerMatrix::from_i64_rows(
            vec!["q".into()],
            vec!["a".into()],
            &[vec![1]],
        )
        .unwrap();
        let d0 = IntegerMatrix::zeros(vec![], vec!["p".into()]).unwrap();
        assert!(matches!(
            MorseComplexData::from_boundary_matrices(vec![d0, bad_d1]),
            Err(MorseDataError::Misaligned { .. })
        ));
    }
}
