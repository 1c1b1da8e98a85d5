//! Discrete vector fields and the weighted trajectory engine.
//!
//! A discrete vector field is a partial matching on the Hasse diagram that
//! pairs each simplex with at most one codimension-1 coface. Orienting the
//! level-`q` Hasse diagram so that matched edges point up and all other
//! incidences point down turns trajectories into directed paths: a face edge
//! `beta -> alpha` with weight `<beta, alpha>` exists for every
//! codimension-1 face of `beta` except its matched partner, and a match edge
//! `alpha -> beta` with weight `-<beta, alpha>` exists for every pair
//! `(alpha, beta)` of the field. The product of edge weights along a path
//! equals the trajectory weight, so weighted trajectory sums and path counts
//! come out of a single dynamic-programming pass per source over the acyclic
//! digraph. The field is a gradient vector field exactly when every level
//! digraph is acyclic.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{incidence, Simplex, SimplicialComplex};

pub(crate) mod engine;

use engine::LevelDigraph;

/// Default cap for explicit trajectory enumeration; counts can grow
/// exponentially while the DP aggregates stay cheap.
pub const DEFAULT_TRAJECTORY_LIMIT: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GvfError {
    #[error("pair references simplex {simplex} absent from the complex")]
    UnknownSimplex { simplex: Simplex },
    #[error("discrete vector field violates its defining clauses: {}", format_violations(.violations))]
    InvalidField { violations: Vec<DvfViolation> },
    #[error("vector field admits a nontrivial closed trajectory; gradient field required")]
    NotGradient,
    #[error("simplex {simplex} is not in the complex")]
    SimplexNotInComplex { simplex: Simplex },
    #[error("trajectory endpoints have unusable dimensions: from dim {from_dim}, to dim {to_dim}")]
    DimensionMismatch { from_dim: usize, to_dim: usize },
    #[error("more than {limit} trajectories; enumeration aborted")]
    TooManyTrajectories { limit: usize },
}

/// One definitional violation found while validating a matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DvfViolation {
    /// Clause (i): the lower simplex is not a proper face of the upper one.
    NotProperFace { lower: Simplex, upper: Simplex },
    /// Clause (ii): dimensions do not differ by exactly one.
    WrongCodimension { lower: Simplex, upper: Simplex },
    /// Clause (iii): the simplex occurs in more than one pair.
    MatchedTwice { simplex: Simplex },
}

impl fmt::Display for DvfViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DvfViolation::NotProperFace { lower, upper } => {
                write!(f, "{lower} is not a proper face of {upper}")
            }
            DvfViolation::WrongCodimension { lower, upper } => {
                write!(f, "dim {upper} != dim {lower} + 1")
            }
            DvfViolation::MatchedTwice { simplex } => {
                write!(f, "{simplex} occurs in more than one pair")
            }
        }
    }
}

fn format_violations(violations: &[DvfViolation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// A validated discrete vector field over a fixed complex: a set of pairs
/// `(alpha, beta)` with `alpha` a codimension-1 face of `beta` and every
/// simplex in at most one pair. Immutable after validation.
#[derive(Clone, PartialEq, Eq)]
pub struct DiscreteVectorField {
    pairs: Vec<(Simplex, Simplex)>,
    up: HashMap<Simplex, Simplex>,
    down: HashMap<Simplex, Simplex>,
}

impl DiscreteVectorField {
    pub fn empty() -> Self {
        Self {
            pairs: Vec::new(),
            up: HashMap::new(),
            down: HashMap::new(),
        }
    }

    /// Validates the three defining clauses against `complex` and builds the
    /// field. Pairs referencing simplices absent from the complex are
    /// reported before any clause violations; clause violations are reported
    /// exhaustively.
    pub fn new(
        complex: &SimplicialComplex,
        pairs: Vec<(Simplex, Simplex)>,
    ) -> Result<Self, GvfError> {
        for (lower, upper) in &pairs {
            for s in [lower, upper] {
                if !complex.contains(s) {
                    return Err(GvfError::UnknownSimplex { simplex: s.clone() });
                }
            }
        }
        let mut violations = Vec::new();
        let mut seen: HashMap<&Simplex, usize> = HashMap::new();
        for (lower, upper) in &pairs {
            if upper.dim() != lower.dim() + 1 {
                violations.push(DvfViolation::WrongCodimension {
                    lower: lower.clone(),
                    upper: upper.clone(),
                });
            } else if !lower.is_face_of(upper) {
                violations.push(DvfViolation::NotProperFace {
                    lower: lower.clone(),
                    upper: upper.clone(),
                });
            }
            *seen.entry(lower).or_insert(0) += 1;
            *seen.entry(upper).or_insert(0) += 1;
        }
        let mut doubled: Vec<Simplex> = seen
            .into_iter()
            .filter(|(_, n)| *n > 1)
            .map(|(s, _)| s.clone())
            .collect();
        doubled.sort();
        violations.extend(
            doubled
                .into_iter()
                .map(|simplex| DvfViolation::MatchedTwice { simplex }),
        );
        if !violations.is_empty() {
            return Err(GvfError::InvalidField { violations });
        }
        let mut pairs = pairs;
        pairs.sort();
        let up = pairs.iter().cloned().collect();
        let down = pairs.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        Ok(Self { pairs, up, down })
    }

    /// Pairs in canonical order, sorted by the lower simplex.
    pub fn pairs(&self) -> &[(Simplex, Simplex)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The coface this simplex is matched up to, if any.
    pub fn partner_up(&self, s: &Simplex) -> Option<&Simplex> {
        self.up.get(s)
    }

    /// The face this simplex is matched down to, if any.
    pub fn partner_down(&self, s: &Simplex) -> Option<&Simplex> {
        self.down.get(s)
    }

    pub fn is_matched(&self, s: &Simplex) -> bool {
        self.up.contains_key(s) || self.down.contains_key(s)
    }
}

impl fmt::Debug for DiscreteVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiscreteVectorField({} pairs)", self.pairs.len())
    }
}

impl Serialize for DiscreteVectorField {
    fn serialize<S>(&self, serializer: S) -> Result<S::Ok, S::Error>
    where
        S: serde::Serializer,
    {
        MatchingFile::from(self).serialize(serializer)
    }
}

/// Wire form of a matching: `{"pairs": [[[1],[0,1]], ...]}` with each pair
/// given as (lower vertices, upper vertices). Validation against a complex
/// happens separately via [`MatchingFile::into_field`].
#[derive(Serialize, Deserialize, Default)]
pub struct MatchingFile {
    pub pairs: Vec<(Vec<u32>, Vec<u32>)>,
}

impl MatchingFile {
    pub fn into_field(
        self,
        complex: &SimplicialComplex,
    ) -> Result<DiscreteVectorField, MatchingFileError> {
        let mut pairs = Vec::with_capacity(self.pairs.len());
        for (lower, upper) in self.pairs {
            pairs.push((Simplex::new(lower)?, Simplex::new(upper)?));
        }
        Ok(DiscreteVectorField::new(complex, pairs)?)
    }
}

#[derive(Debug, Error)]
pub enum MatchingFileError {
    #[error("malformed simplex in matching file: {0}")]
    BadSimplex(#[from] crate::complex::ComplexError),
    #[error(transparent)]
    Invalid(#[from] GvfError),
}

impl From<&DiscreteVectorField> for MatchingFile {
    fn from(f: &DiscreteVectorField) -> Self {
        MatchingFile {
            pairs: f
                .pairs
                .iter()
                .map(|(a, b)| (a.vertices().to_vec(), b.vertices().to_vec()))
                .collect(),
        }
    }
}

/// Shapes a trajectory can take, named by start and end dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryKind {
    /// V-trajectory between two q-simplices.
    QtoQ,
    /// V-trajectory from a q-simplex ending on a (q-1)-simplex.
    QtoQminus1,
    /// co-V-trajectory between two q-simplices.
    CoQtoQ,
    /// co-V-trajectory from a q-simplex ending on a (q+1)-simplex.
    CoQtoQplus1,
}

/// An alternating sequence of simplices realizing one (co-)trajectory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub simplices: Vec<Simplex>,
    pub kind: TrajectoryKind,
}

impl Trajectory {
    pub fn start(&self) -> &Simplex {
        self.simplices.first().expect("trajectory is nonempty")
    }

    pub fn end(&self) -> &Simplex {
        self.simplices.last().expect("trajectory is nonempty")
    }

    /// Nontrivial and returning to its start.
    pub fn is_closed(&self) -> bool {
        matches!(self.kind, TrajectoryKind::QtoQ | TrajectoryKind::CoQtoQ)
            && self.simplices.len() > 1
            && self.start() == self.end()
    }

    /// Number of matched steps.
    pub fn matched_steps(&self) -> usize {
        (self.simplices.len() - 1) / 2
    }

    /// The weight: a product of incidence signs over the matched steps,
    /// times the final incidence when the trajectory ends one dimension away
    /// from its start. Always `1` or `-1`; the trivial trajectory has
    /// weight `1`.
    pub fn weight(&self) -> i32 {
        let s = &self.simplices;
        let mut w = 1;
        match self.kind {
            TrajectoryKind::QtoQ | TrajectoryKind::QtoQminus1 => {
                let r = self.matched_steps();
                for i in 1..=r {
                    let beta_prev = &s[2 * (i - 1)];
                    let alpha = &s[2 * i - 1];
                    let beta = &s[2 * i];
                    w *= -incidence(beta_prev, alpha) * incidence(beta, alpha);
                }
                if s.len() % 2 == 0 {
                    w *= incidence(&s[s.len() - 2], &s[s.len() - 1]);
                }
            }
            TrajectoryKind::CoQtoQ | TrajectoryKind::CoQtoQplus1 => {
                let r = self.matched_steps();
                for i in 1..=r {
                    let gamma_prev = &s[2 * (i - 1)];
                    let rho = &s[2 * i - 1];
                    let gamma = &s[2 * i];
                    w *= -incidence(rho, gamma_prev) * incidence(rho, gamma);
                }
                if s.len() % 2 == 0 {
                    w *= incidence(&s[s.len() - 1], &s[s.len() - 2]);
                }
            }
        }
        w
    }

    /// Checks every per-step constraint against the complex and field:
    /// alternating dimensions, membership, matched steps in the field, face
    /// steps never through the simplex's own matched partner.
    pub fn is_valid_for(&self, complex: &SimplicialComplex, field: &DiscreteVectorField) -> bool {
        let s = &self.simplices;
        if s.is_empty() || !s.iter().all(|x| complex.contains(x)) {
            return false;
        }
        match self.kind {
            TrajectoryKind::QtoQ | TrajectoryKind::QtoQminus1 => {
                let q = s[0].dim();
                if q == 0 {
                    return s.len() == 1 && self.kind == TrajectoryKind::QtoQ;
                }
                for (i, x) in s.iter().enumerate() {
                    let want = if i % 2 == 0 { q } else { q - 1 };
                    if x.dim() != want {
                        return false;
                    }
                }
                match self.kind {
                    TrajectoryKind::QtoQ if s.len() % 2 == 0 => return false,
                    TrajectoryKind::QtoQminus1 if s.len() % 2 == 1 => return false,
                    _ => {}
                }
                for i in (1..s.len()).step_by(2) {
                    // face step: s[i-1] (upper) -> s[i] (lower)
                    let upper = &s[i - 1];
                    let lower = &s[i];
                    if incidence(upper, lower) == 0 {
                        return false;
                    }
                    if field.partner_down(upper) == Some(lower) {
                        return false;
                    }
                    // matched step: s[i] -> s[i+1], when present
                    if i + 1 < s.len() && field.partner_up(lower) != Some(&s[i + 1]) {
                        return false;
                    }
                }
                true
            }
            TrajectoryKind::CoQtoQ | TrajectoryKind::CoQtoQplus1 => {
                let q = s[0].dim();
                for (i, x) in s.iter().enumerate() {
                    let want = if i % 2 == 0 { q } else { q + 1 };
                    if x.dim() != want {
                        return false;
                    }
                }
                match self.kind {
                    TrajectoryKind::CoQtoQ if s.len() % 2 == 0 => return false,
                    TrajectoryKind::CoQtoQplus1 if s.len() % 2 == 1 => return false,
                    _ => {}
                }
                for i in (1..s.len()).step_by(2) {
                    // coface step: s[i-1] (lower) -> s[i] (upper)
                    let lower = &s[i - 1];
                    let upper = &s[i];
                    if incidence(upper, lower) == 0 {
                        return false;
                    }
                    if field.partner_up(lower) == Some(upper) {
                        return false;
                    }
                    // matched step down: s[i] -> s[i+1], when present
                    if i + 1 < s.len() && field.partner_down(upper) != Some(&s[i + 1]) {
                        return false;
                    }
                }
                true
            }
        }
    }
}

impl fmt::Display for Trajectory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrows: Vec<String> = self.simplices.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", arrows.join(" -> "))
    }
}

/// Exact weighted sum and count of all trajectories between two cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrajectoryAggregate {
    pub weight_sum: BigInt,
    pub path_count: BigUint,
}

impl TrajectoryAggregate {
    pub fn zero() -> Self {
        Self {
            weight_sum: BigInt::zero(),
            path_count: BigUint::zero(),
        }
    }

    pub fn is_unique(&self) -> bool {
        self.path_count.is_one()
    }
}

/// True when the field admits no nontrivial closed trajectory in any
/// dimension, i.e. the matching is acyclic.
pub fn is_gradient(complex: &SimplicialComplex, field: &DiscreteVectorField) -> bool {
    closed_trajectory(complex, field).is_none()
}

/// Searches every dimension level for a nontrivial closed trajectory and
/// returns one as a witness. `None` means the field is a gradient vector
/// field. A cycle has to alternate face and matched steps, so any witness
/// runs entirely through matched cells.
pub fn closed_trajectory(
    complex: &SimplicialComplex,
    field: &DiscreteVectorField,
) -> Option<Trajectory> {
    for q in 1..=complex.dim() {
        let digraph = LevelDigraph::forward(complex, field, q);
        if let Some(nodes) = digraph.find_cycle() {
            let simplices = digraph.nodes_to_simplices(complex, &nodes);
            // Rotate so the witness starts (and ends) on an upper simplex.
            let start = simplices
                .iter()
                .position(|s| s.dim() == q)
                .expect("cycle alternates dimensions");
            let n = simplices.len();
            let mut rotated: Vec<Simplex> = (0..n)
                .map(|i| simplices[(start + i) % n].clone())
                .collect();
            rotated.push(rotated[0].clone());
            return Some(Trajectory {
                simplices: rotated,
                kind: TrajectoryKind::QtoQ,
            });
        }
    }
    None
}

/// All `q`-simplices that appear in no pair of the field, canonical order.
pub fn critical_simplices(
    complex: &SimplicialComplex,
    field: &DiscreteVectorField,
    q: isize,
) -> Vec<Simplex> {
    complex
        .simplices(q)
        .iter()
        .filter(|s| !field.is_matched(s))
        .cloned()
        .collect()
}

fn level_and_target(
    complex: &SimplicialComplex,
    from: &Simplex,
    to: &Simplex,
) -> Result<(usize, bool), GvfError> {
    for s in [from, to] {
        if !complex.contains(s) {
            return Err(GvfError::SimplexNotInComplex { simplex: s.clone() });
        }
    }
    let q = from.dim();
    if to.dim() == q {
        Ok((q, false))
    } else if q >= 1 && to.dim() == q - 1 {
        Ok((q, true))
    } else {
        Err(GvfError::DimensionMismatch {
            from_dim: q,
            to_dim: to.dim(),
        })
    }
}

/// Weighted sum and count of all trajectories from `from` (a q-simplex) to
/// `to` (a q- or (q-1)-simplex), by dynamic programming over the level
/// digraph. Requires a gradient field.
pub fn trajectory_aggregate(
    complex: &SimplicialComplex,
    field: &DiscreteVectorField,
    from: &Simplex,
    to: &Simplex,
) -> Result<TrajectoryAggregate, GvfError> {
    let (q, to_lower) = level_and_target(complex, from, to)?;
    if q == 0 {
        // No matched steps are possible among 0-simplices.
        return Ok(if from == to {
            TrajectoryAggregate {
                weight_sum: BigInt::one(),
                path_count: BigUint::one(),
            }
        } else {
            TrajectoryAggregate::zero()
        });
    }
    let digraph = LevelDigraph::forward(complex, field, q);
    let source = digraph.upper_node(complex.position(from).expect("checked membership"));
    let target = if to_lower {
        digraph.lower_node(complex.position(to).expect("checked membership"))
    } else {
        digraph.upper_node(complex.position(to).expect("checked membership"))
    };
    let sums = digraph.path_sums(source).ok_or(GvfError::NotGradient)?;
    let (weight_sum, path_count) = sums[target].clone();
    Ok(TrajectoryAggregate {
        weight_sum,
        path_count,
    })
}

/// Weighted sum and count of all co-trajectories from `from` (a p-simplex)
/// to `to` (a p- or (p+1)-simplex). Implemented as an independent pass over
/// the dual digraph rather than by delegating to
/// [`trajectory_aggregate`], so the reversal duality between the two is a
/// checkable fact rather than a definition.
pub fn cotrajectory_aggregate(
    complex: &SimplicialComplex,
    field: &DiscreteVectorField,
    from: &Simplex,
    to: &Simplex,
) -> Result<TrajectoryAggregate, GvfError> {
    for s in [from, to] {
        if !complex.contains(s) {
            return Err(GvfError::SimplexNotInComplex { simplex: s.clone() });
        }
    }
    let p = from.dim();
    let to_upper = if to.dim() == p {
        false
    } else if to.dim() == p + 1 {
        true
    } else {
        return Err(GvfError::DimensionMismatch {
            from_dim: p,
            to_dim: to.dim(),
        });
    };
    let level = p + 1;
    if level > complex.dim() {
        // No cofacets exist: only the trivial co-trajectory remains.
        return Ok(if !to_upper && from == to {
            TrajectoryAggregate {
                weight_sum: BigInt::one(),
                path_count: BigUint::one(),
            }
        } else {
            TrajectoryAggregate::zero()
        });
    }
    let digraph = LevelDigraph::co(complex, field, level);
    let source = digraph.lower_node(complex.position(from).expect("checked membership"));
    let target = if to_upper {
        digraph.upper_node(complex.position(to).expect("checked membership"))
    } else {
        digraph.lower_node(complex.position(to).expect("checked membership"))
    };
    let sums = digraph.path_sums(source).ok_or(GvfError::NotGradient)?;
    let (weight_sum, path_count) = sums[target].clone();
    Ok(TrajectoryAggregate {
        weight_sum,
        path_count,
    })
}

/// Lists every trajectory from `from` to `to` explicitly, in canonical
/// order, aborting once more than `limit` exist. Oracle-grade: each returned
/// trajectory passes [`Trajectory::is_valid_for`] and has weight `+/-1`.
pub fn enumerate_trajectories(
    complex: &SimplicialComplex,
    field: &DiscreteVectorField,
    from: &Simplex,
    to: &Simplex,
    limit: usize,
) -> Result<Vec<Trajectory>, GvfError> {
    let (q, to_lower) = level_and_target(complex, from, to)?;
    let kind = if to_lower {
        TrajectoryKind::QtoQminus1
    } else {
        TrajectoryKind::QtoQ
    };
    if q == 0 {
        if from == to && limit == 0 {
            return Err(GvfError::TooManyTrajectories { limit });
        }
        return Ok(if from == to {
            vec![Trajectory {
                simplices: vec![from.clone()],
                kind,
            }]
        } else {
            Vec::new()
        });
    }
    let digraph = LevelDigraph::forward(complex, field, q);
    if digraph.topo().is_none() {
        return Err(GvfError::NotGradient);
    }
    let source = digraph.upper_node(complex.position(from).expect("checked membership"));
    let target = if to_lower {
        digraph.lower_node(complex.position(to).expect("checked membership"))
    } else {
        digraph.upper_node(complex.position(to).expect("checked membership"))
    };
    let node_paths = digraph
        .enumerate_paths(source, target, limit)
        .map_err(|_| GvfError::TooManyTrajectories { limit })?;
    let mut out: Vec<Trajectory> = node_paths
        .into_iter()
        .map(|p| Trajectory {
            simplices: digraph.nodes_to_simplices(complex, &p),
            kind,
        })
        .collect();
    out.sort_by(|a, b| a.simplices.cmp(&b.simplices));
    Ok(out)
}
