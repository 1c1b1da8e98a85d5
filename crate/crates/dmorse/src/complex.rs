//! Finite abstract simplicial complexes with canonical orientations.
//!
//! A simplex is a strictly increasing list of vertex ids; the ascending order
//! is the canonical orientation, and every incidence number is derived from
//! the sign `(-1)^i` of deleting the `i`-th vertex. Complexes are stored as
//! per-dimension lists sorted lexicographically, which fixes every matrix
//! layout deterministically.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::IntegerMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("facet list is empty")]
    NoFacets,
    #[error("facet {index} is empty")]
    EmptyFacet { index: usize },
    #[error("facet {index} repeats vertex {vertex}")]
    DuplicateVertex { index: usize, vertex: u32 },
    #[error("matching complex needs n >= 2, got {0}")]
    MatchingComplexOrder(u32),
}

/// An oriented simplex: strictly increasing vertex ids, dimension `len - 1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Simplex {
    vertices: Vec<u32>,
}

impl Simplex {
    /// Builds a simplex from a vertex set given in any order.
    /// Rejects empty input and repeated vertices.
    pub fn new(vertices: impl Into<Vec<u32>>) -> Result<Self, ComplexError> {
        let mut vertices = vertices.into();
        vertices.sort_unstable();
        if vertices.is_empty() {
            return Err(ComplexError::EmptyFacet { index: 0 });
        }
        for w in vertices.windows(2) {
            if w[0] == w[1] {
                return Err(ComplexError::DuplicateVertex {
                    index: 0,
                    vertex: w[0],
                });
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertex(v: u32) -> Self {
        Self { vertices: vec![v] }
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// The codimension-1 face obtained by deleting the `i`-th vertex.
    /// `None` for 0-simplices (the empty simplex is not materialized).
    pub fn facet(&self, i: usize) -> Option<Simplex> {
        if self.vertices.len() <= 1 {
            return None;
        }
        let mut v = self.vertices.clone();
        v.remove(i);
        Some(Simplex { vertices: v })
    }

    /// All codimension-1 faces, in vertex-deletion order.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        (0..self.vertices.len()).filter_map(|i| self.facet(i))
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        let mut it = other.vertices.iter();
        self.vertices
            .iter()
            .all(|v| it.by_ref().any(|w| w == v))
    }

    /// Canonical label, e.g. `"0-1-2"`. Used as matrix row/column label.
    pub fn label(&self) -> String {
        self.vertices.iter().join("-")
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.vertices.iter().join(","))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl TryFrom<Vec<u32>> for Simplex {
    type Error = ComplexError;
    fn try_from(v: Vec<u32>) -> Result<Self, ComplexError> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<u32> {
    fn from(s: Simplex) -> Vec<u32> {
        s.vertices
    }
}

/// Incidence number between two oriented simplices: `(-1)^i` when `tau` is
/// `sigma` with its `i`-th vertex (ascending order) deleted, `0` otherwise.
/// Total on all simplex pairs.
pub fn incidence(sigma: &Simplex, tau: &Simplex) -> i32 {
    if sigma.vertices.len() != tau.vertices.len() + 1 {
        return 0;
    }
    // Find the unique deleted position, if any.
    let mut deleted: Option<usize> = None;
    let mut ti = 0;
    for (si, v) in sigma.vertices.iter().enumerate() {
        if ti < tau.vertices.len() && tau.vertices[ti] == *v {
            ti += 1;
        } else if deleted.is_none() {
            deleted = Some(si);
        } else {
            return 0;
        }
    }
    if ti != tau.vertices.len() {
        return 0;
    }
    match deleted {
        Some(i) if i % 2 == 0 => 1,
        Some(_) => -1,
        None => 0,
    }
}

/// A downward-closed family of simplices with per-dimension indices.
/// Immutable after construction; all operations are pure.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ComplexFile", into = "ComplexFile")]
pub struct SimplicialComplex {
    by_dim: Vec<Vec<Simplex>>,
    positions: HashMap<Simplex, usize>,
}

impl SimplicialComplex {
    /// Downward closure of the given facets. Deterministic: per-dimension
    /// lists are sorted lexicographically by vertex list.
    pub fn from_facets<V: AsRef<[u32]>>(facets: &[V]) -> Result<Self, ComplexError> {
        if facets.is_empty() {
            return Err(ComplexError::NoFacets);
        }
        let mut all: BTreeSet<Simplex> = BTreeSet::new();
        for (index, facet) in facets.iter().enumerate() {
            let facet = facet.as_ref();
            let top = Simplex::new(facet.to_vec()).map_err(|e| match e {
                ComplexError::EmptyFacet { .. } => ComplexError::EmptyFacet { index },
                ComplexError::DuplicateVertex { vertex, .. } => {
                    ComplexError::DuplicateVertex { index, vertex }
                }
                other => other,
            })?;
            for size in 1..=top.vertices.len() {
                for sub in top.vertices.iter().copied().combinations(size) {
                    all.insert(Simplex { vertices: sub });
                }
            }
        }
        let dim = all.iter().map(|s| s.dim()).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); dim + 1];
        for s in all {
            by_dim[s.dim()].push(s);
        }
        // BTreeSet iteration is lexicographic, so each bucket stays sorted.
        let mut positions = HashMap::new();
        for bucket in &by_dim {
            for (i, s) in bucket.iter().enumerate() {
                positions.insert(s.clone(), i);
            }
        }
        Ok(Self { by_dim, positions })
    }

    /// The matching complex of the complete graph `K_n`: vertices are the
    /// edges of `K_n` (id = lexicographic position of `(i, j)` with `i < j`),
    /// simplices are sets of pairwise-disjoint edges.
    pub fn matching_complex(n: u32) -> Result<Self, ComplexError> {
        if n < 2 {
            return Err(ComplexError::MatchingComplexOrder(n));
        }
        let edge_id = |i: u32, j: u32| -> u32 {
            // position of (i, j), i < j, in lexicographic order over C(n, 2)
            i * (2 * n - i - 1) / 2 + (j - i - 1)
        };
        let mut facets: Vec<Vec<u32>> = Vec::new();
        // A maximal matching of a complete graph covers all but at most one
        // vertex: choose the uncovered vertex (odd n only), then a perfect
        // matching of the rest.
        let all: Vec<u32> = (0..n).collect();
        if n % 2 == 0 {
            perfect_matchings(&all, &mut Vec::new(), &mut |m| {
                facets.push(m.iter().map(|&(i, j)| edge_id(i, j)).collect());
            });
        } else {
            for skip in 0..n {
                let rest: Vec<u32> = all.iter().copied().filter(|&v| v != skip).collect();
                perfect_matchings(&rest, &mut Vec::new(), &mut |m| {
                    facets.push(m.iter().map(|&(i, j)| edge_id(i, j)).collect());
                });
            }
        }
        Self::from_facets(&facets)
    }

    /// Largest simplex dimension.
    pub fn dim(&self) -> usize {
        self.by_dim.len() - 1
    }

    /// The `q`-simplices in canonical order; empty outside `0..=dim`.
    pub fn simplices(&self, q: isize) -> &[Simplex] {
        if q < 0 || q as usize >= self.by_dim.len() {
            &[]
        } else {
            &self.by_dim[q as usize]
        }
    }

    pub fn size(&self, q: isize) -> usize {
        self.simplices(q).len()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(|b| b.len()).collect()
    }

    pub fn total_size(&self) -> usize {
        self.by_dim.iter().map(|b| b.len()).sum()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.positions.contains_key(s)
    }

    /// Position of `s` within its dimension's canonical list.
    pub fn position(&self, s: &Simplex) -> Option<usize> {
        self.positions.get(s).copied()
    }

    /// The maximal simplices (faces of nothing else). Rebuilding from these
    /// reproduces the complex exactly.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let mut out = Vec::new();
        for (q, bucket) in self.by_dim.iter().enumerate() {
            for s in bucket {
                let has_coface = self
                    .simplices(q as isize + 1)
                    .iter()
                    .any(|t| s.is_face_of(t));
                if !has_coface {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    pub fn is_downward_closed(&self) -> bool {
        self.by_dim.iter().flatten().all(|s| {
            s.dim() == 0 || s.facets().all(|f| self.contains(&f))
        })
    }

    /// Matrix of the boundary map on `q`-chains: rows labeled by the
    /// `(q-1)`-simplices, columns by the `q`-simplices, entry `(tau, sigma)`
    /// the incidence number of `sigma` and `tau`. Out-of-range `q` yields
    /// empty axes.
    pub fn chain_boundary_matrix(&self, q: isize) -> IntegerMatrix {
        let rows: Vec<String> = self.simplices(q - 1).iter().map(Simplex::label).collect();
        let cols: Vec<String> = self.simplices(q).iter().map(Simplex::label).collect();
        let mut m = IntegerMatrix::zeros(rows, cols).expect("simplex labels are unique");
        for (j, sigma) in self.simplices(q).iter().enumerate() {
            for (i, f) in sigma.facets().enumerate() {
                let r = self.position(&f).expect("complex is downward closed");
                let sign = if i % 2 == 0 { 1 } else { -1 };
                m.set(r, j, BigInt::from(sign));
            }
        }
        m
    }

    /// Matrix of the coboundary map into `q`-cochains: the transpose of
    /// [`chain_boundary_matrix`](Self::chain_boundary_matrix) with labels swapped.
    pub fn cochain_coboundary_matrix(&self, q: isize) -> IntegerMatrix {
        self.chain_boundary_matrix(q).transpose()
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplicialComplex(f = {:?})", self.f_vector())
    }
}

fn perfect_matchings(vertices: &[u32], acc: &mut Vec<(u32, u32)>, emit: &mut impl FnMut(&[(u32, u32)])) {
    if vertices.is_empty() {
        emit(acc);
        return;
    }
    let first = vertices[0];
    for idx in 1..vertices.len() {
        let partner = vertices[idx];
        let rest: Vec<u32> = vertices[1..]
            .iter()
            .copied()
            .filter(|&v| v != partner)
            .collect();
        acc.push((first, partner));
        perfect_matchings(&rest, acc, emit);
        acc.pop();
    }
}

/// Wire form: `{"facets": [[0,1,2], ...]}`.
#[derive(Serialize, Deserialize)]
struct ComplexFile {
    facets: Vec<Vec<u32>>,
}

impl From<SimplicialComplex> for ComplexFile {
    fn from(c: SimplicialComplex) -> Self {
        ComplexFile {
            facets: c
                .maximal_simplices()
                .into_iter()
                .map(|s| s.vertices)
                .collect(),
        }
    }
}

impl TryFrom<ComplexFile> for SimplicialComplex {
    type Error = ComplexError;
    fn try_from(f: ComplexFile) -> Result<Self, ComplexError> {
        SimplicialComplex::from_facets(&f.facets)
    }
}
