//! Cancellation of critical pairs and the closed-form matrix updates.
//!
//! Cancelling a critical pair `(sigma0, tau0)` connected by a unique
//! trajectory reverses every arrow along that trajectory and removes both
//! cells from the critical set. The new boundary matrix at the pair's
//! dimension needs no re-enumeration: with `a00` the `(tau0, sigma0)` entry,
//! every other entry updates as `a_ij - a00 * a_0j * a_i0`, which is one row
//! operation per row followed by deleting the pivot row and column. The
//! adjacent dimensions only lose the `sigma0` / `tau0` slice, and all
//! farther matrices are untouched. Coboundary matrices update by the
//! transpose-dual rule.

use std::collections::HashSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::complex::{Simplex, SimplicialComplex};
use crate::gvf::engine::LevelDigraph;
use crate::gvf::{
    critical_simplices, is_gradient, trajectory_aggregate, DiscreteVectorField, GvfError,
    Trajectory, TrajectoryKind,
};
use crate::matrix::{IntegerMatrix, MatrixError};
use crate::morse::{map_columns, MorseComplexData};

/// Hard cap on the number of pairs a simultaneous-cancellation check will
/// consider.
pub const SIMULTANEOUS_PAIR_CAP: usize = 16;

#[derive(Debug, Error)]
pub enum CancelError {
    #[error("pair ({sigma0}, {tau0}) is not cancellable: {path_count} connecting trajectories")]
    NotUnique {
        sigma0: Simplex,
        tau0: Simplex,
        path_count: BigUint,
    },
    #[error("stale pair ({sigma0}, {tau0}): stored trajectory is not a trajectory of this field")]
    StaleTrajectory { sigma0: Simplex, tau0: Simplex },
    #[error("{simplex} is not critical for this field")]
    NotCritical { simplex: Simplex },
    #[error("pivot entry at ({row}, {col}) is {entry}, not +/-1")]
    PivotNotUnit {
        row: String,
        col: String,
        entry: BigInt,
    },
    #[error("label `{label}` appears in no axis of the matrix")]
    LabelNotFound { label: String },
    #[error("label `{label}` appears in both axes of the matrix")]
    AmbiguousLabel { label: String },
    #[error("pair {index} failed mid-sequence: {source}")]
    Sequencing {
        index: usize,
        #[source]
        source: Box<CancelError>,
    },
    #[error("{count} pairs exceed the simultaneous-cancellation cap of {cap}")]
    TooManyPairs { count: usize, cap: usize },
    #[error("pairs are not simultaneously cancellable; witness permutation {permutation:?}")]
    NotSimultaneous { permutation: Vec<usize> },
    #[error("cancellation produced a non-gradient field; this is a bug")]
    ResultNotGradient,
    #[error(transparent)]
    Gvf(#[from] GvfError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A critical pair with the unique trajectory connecting it, ready to cancel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CancellablePair {
    pub sigma0: Simplex,
    pub tau0: Simplex,
    /// The only trajectory from `sigma0` to `tau0`.
    pub trajectory: Trajectory,
    /// Its weight; this is the pivot entry of the boundary matrix.
    pub weight: i32,
}

impl fmt::Display for CancellablePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.sigma0, self.tau0)
    }
}

/// All critical pairs in dimensions `(k, k-1)` joined by exactly one
/// trajectory, in canonical (lexicographic) order. Uniqueness is decided by
/// the exact path count, never by the weighted sum.
pub fn find_cancellable_pairs(
    complex: &SimplicialComplex,
    field: &DiscreteVectorField,
    k: isize,
) -> Result<Vec<CancellablePair>, GvfError> {
    let sigmas = critical_simplices(complex, field, k);
    let taus = critical_simplices(complex, field, k - 1);
    if k < 1 || k as usize > complex.dim() {
        return Ok(Vec::new());
    }
    let digraph = LevelDigraph::forward(complex, field, k as usize);
    if digraph.topo().is_none() {
        return Err(GvfError::NotGradient);
    }
    if sigmas.is_empty() || taus.is_empty() {
        return Ok(Vec::new());
    }
    let tau_nodes: Vec<usize> = taus
        .iter()
        .map(|t| digraph.lower_node(complex.position(t).expect("critical cell")))
        .collect();
    let per_source: Vec<Vec<CancellablePair>> = map_columns(sigmas, |sigma| {
        let source = digraph.upper_node(complex.position(&sigma).expect("critical cell"));
        let sums = digraph.path_sums(source).expect("acyclicity checked");
        let mut found = Vec::new();
        for (ti, &node) in tau_nodes.iter().enumerate() {
            if !sums[node].1.is_one() {
                continue;
            }
            let paths = digraph
                .enumerate_paths(source, node, 1)
                .expect("path count is exactly one");
            let trajectory = Trajectory {
                simplices: digraph.nodes_to_simplices(complex, &paths[0]),
                kind: TrajectoryKind::QtoQminus1,
            };
            let weight = trajectory.weight();
            found.push(CancellablePair {
                sigma0: sigma.clone(),
                tau0: taus[ti].clone(),
                trajectory,
                weight,
            });
        }
        found.sort_by(|a, b| a.tau0.cmp(&b.tau0));
        found
    });
    Ok(per_source.into_iter().flatten().collect())
}

fn revalidate(
    complex: &SimplicialComplex,
    field: &DiscreteVectorField,
    pair: &CancellablePair,
) -> Result<(), CancelError> {
    for s in [&pair.sigma0, &pair.tau0] {
        if field.is_matched(s) {
            return Err(CancelError::NotCritical { simplex: s.clone() });
        }
    }
    let aggregate = trajectory_aggregate(complex, field, &pair.sigma0, &pair.tau0)?;
    if !aggregate.is_unique() {
        return Err(CancelError::NotUnique {
            sigma0: pair.sigma0.clone(),
            tau0: pair.tau0.clone(),
            path_count: aggregate.path_count,
        });
    }
    if pair.trajectory.start() != &pair.sigma0
        || pair.trajectory.end() != &pair.tau0
        || !pair.trajectory.is_valid_for(complex, field)
    {
        return Err(CancelError::StaleTrajectory {
            sigma0: pair.sigma0.clone(),
            tau0: pair.tau0.clone(),
        });
    }
    Ok(())
}

/// Reverses the unique trajectory of the pair: matched arrows along it are
/// dropped and each trajectory simplex is re-matched with its successor. The
/// result has the same critical cells except that `sigma0` and `tau0` are no
/// longer critical, and it is again a gradient field. The pair is
/// revalidated against the current field first.
pub fn cancel_pair(
    complex: &SimplicialComplex,
    field: &DiscreteVectorField,
    pair: &CancellablePair,
) -> Result<DiscreteVectorField, CancelError> {
    revalidate(complex, field, pair)?;
    let flipped = flip_along(field, &pair.trajectory);
    let next = DiscreteVectorField::new(complex, flipped)?;
    if !is_gradient(complex, &next) {
        return Err(CancelError::ResultNotGradient);
    }
    Ok(next)
}

/// The pair list of `field` with the trajectory's arrows reversed:
/// `(alpha_i, beta_i)` removed for the matched steps, `(alpha_{i+1}, beta_i)`
/// added for every step including the endpoints.
fn flip_along(field: &DiscreteVectorField, trajectory: &Trajectory) -> Vec<(Simplex, Simplex)> {
    let s = &trajectory.simplices;
    let removed: HashSet<(&Simplex, &Simplex)> = (1..s.len() - 1)
        .step_by(2)
        .map(|i| (&s[i], &s[i + 1]))
        .collect();
    let mut pairs: Vec<(Simplex, Simplex)> = field
        .pairs()
        .iter()
        .filter(|(a, b)| !removed.contains(&(a, b)))
        .cloned()
        .collect();
    for i in (0..s.len() - 1).step_by(2) {
        pairs.push((s[i + 1].clone(), s[i].clone()));
    }
    pairs
}

/// One elementary step of a replayable matrix-update trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowOp {
    Scale { row: String, factor: BigInt },
    AddMultiple {
        target: String,
        source: String,
        factor: BigInt,
    },
    DeleteRow { row: String },
    DeleteCol { col: String },
}

impl fmt::Display for RowOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowOp::Scale { row, factor } => write!(f, "R[{row}] *= {factor}"),
            RowOp::AddMultiple {
                target,
                source,
                factor,
            } => write!(f, "R[{target}] += ({factor}) * R[{source}]"),
            RowOp::DeleteRow { row } => write!(f, "delete row {row}"),
            RowOp::DeleteCol { col } => write!(f, "delete column {col}"),
        }
    }
}

/// The elementary row operations realizing one pivot update: scale the pivot
/// row to make the pivot `+1`, clear the pivot column, drop the pivot slice.
/// Replaying the trace on the input matrix reproduces the update bit-exactly.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RowOpTrace {
    pub ops: Vec<RowOp>,
}

impl RowOpTrace {
    pub fn replay(&self, m: &IntegerMatrix) -> Result<IntegerMatrix, CancelError> {
        let mut cur = m.clone();
        for op in &self.ops {
            match op {
                RowOp::Scale { row, factor } => {
                    let r = cur
                        .row_index(row)
                        .ok_or_else(|| CancelError::LabelNotFound { label: row.clone() })?;
                    cur.scale_row(r, factor);
                }
                RowOp::AddMultiple {
                    target,
                    source,
                    factor,
                } => {
                    let t = cur
                        .row_index(target)
                        .ok_or_else(|| CancelError::LabelNotFound { label: target.clone() })?;
                    let s = cur
                        .row_index(source)
                        .ok_or_else(|| CancelError::LabelNotFound { label: source.clone() })?;
                    cur.add_row_multiple(t, s, factor);
                }
                RowOp::DeleteRow { row } => cur = cur.delete_row(row)?,
                RowOp::DeleteCol { col } => cur = cur.delete_col(col)?,
            }
        }
        Ok(cur)
    }
}

impl fmt::Display for RowOpTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.ops {
            writeln!(f, "{op}")?;
        }
        Ok(())
    }
}

fn pivot_update(
    m: &IntegerMatrix,
    pivot_row: &str,
    pivot_col: &str,
) -> Result<(IntegerMatrix, RowOpTrace), CancelError> {
    let r0 = m
        .row_index(pivot_row)
        .ok_or_else(|| CancelError::LabelNotFound { label: pivot_row.to_string() })?;
    let c0 = m
        .col_index(pivot_col)
        .ok_or_else(|| CancelError::LabelNotFound { label: pivot_col.to_string() })?;
    let a00 = m.get(r0, c0).clone();
    if !a00.abs().is_one() {
        return Err(CancelError::PivotNotUnit {
            row: pivot_row.to_string(),
            col: pivot_col.to_string(),
            entry: a00,
        });
    }
    let rows: Vec<String> = m
        .row_labels()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != r0)
        .map(|(_, l)| l.clone())
        .collect();
    let cols: Vec<String> = m
        .col_labels()
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != c0)
        .map(|(_, l)| l.clone())
        .collect();
    let mut out = IntegerMatrix::zeros(rows, cols)?;
    let mut oi = 0;
    for i in 0..m.nrows() {
        if i == r0 {
            continue;
        }
        let mut oj = 0;
        for j in 0..m.ncols() {
            if j == c0 {
                continue;
            }
            let v = m.get(i, j) - &a00 * m.get(r0, j) * m.get(i, c0);
            out.set(oi, oj, v);
            oj += 1;
        }
        oi += 1;
    }
    let mut ops = vec![RowOp::Scale {
        row: pivot_row.to_string(),
        factor: a00.clone(),
    }];
    for (i, label) in m.row_labels().iter().enumerate() {
        if i == r0 {
            continue;
        }
        let factor = -m.get(i, c0);
        ops.push(RowOp::AddMultiple {
            target: label.clone(),
            source: pivot_row.to_string(),
            factor,
        });
    }
    ops.push(RowOp::DeleteRow {
        row: pivot_row.to_string(),
    });
    ops.push(RowOp::DeleteCol {
        col: pivot_col.to_string(),
    });
    Ok((out, RowOpTrace { ops }))
}

/// Updates the dimension-k boundary matrix for the cancellation whose pivot
/// sits at row `tau0`, column `sigma0`: entries become
/// `a_ij - a00 * a_0j * a_i0`, then the pivot row and column are deleted.
/// The pivot entry must be `+/-1` (it is the weight of the unique
/// trajectory).
pub fn update_boundary_k(
    boundary: &IntegerMatrix,
    tau0_row: &str,
    sigma0_col: &str,
) -> Result<(IntegerMatrix, RowOpTrace), CancelError> {
    pivot_update(boundary, tau0_row, sigma0_col)
}

/// Updates the dimension-k coboundary matrix: the transpose-dual rule, with
/// the pivot at row `sigma0`, column `tau0`.
pub fn update_coboundary_k(
    coboundary: &IntegerMatrix,
    sigma0_row: &str,
    tau0_col: &str,
) -> Result<(IntegerMatrix, RowOpTrace), CancelError> {
    pivot_update(coboundary, sigma0_row, tau0_col)
}

/// Pivot update with orientation detection, for fixture matrices that may be
/// stored transposed: the two labels are located in whichever axes hold
/// them. The update formula is its own transpose-dual, so both orientations
/// give consistent results.
pub fn fixture_pivot_update(
    m: &IntegerMatrix,
    label_a: &str,
    label_b: &str,
) -> Result<(IntegerMatrix, RowOpTrace), CancelError> {
    let a_is_row = m.row_index(label_a).is_some();
    let a_is_col = m.col_index(label_a).is_some();
    let b_is_row = m.row_index(label_b).is_some();
    let b_is_col = m.col_index(label_b).is_some();
    match (a_is_row, a_is_col, b_is_row, b_is_col) {
        (true, false, false, true) => pivot_update(m, label_a, label_b),
        (false, true, true, false) => pivot_update(m, label_b, label_a),
        (false, false, _, _) => Err(CancelError::LabelNotFound {
            label: label_a.to_string(),
        }),
        (_, _, false, false) => Err(CancelError::LabelNotFound {
            label: label_b.to_string(),
        }),
        _ => Err(CancelError::AmbiguousLabel {
            label: label_a.to_string(),
        }),
    }
}

fn restrict_by_label(m: &IntegerMatrix, label: &str) -> Result<IntegerMatrix, CancelError> {
    match (m.row_index(label), m.col_index(label)) {
        (Some(_), None) => Ok(m.delete_row(label)?),
        (None, Some(_)) => Ok(m.delete_col(label)?),
        (Some(_), Some(_)) => Err(CancelError::AmbiguousLabel {
            label: label.to_string(),
        }),
        (None, None) => Err(CancelError::LabelNotFound {
            label: label.to_string(),
        }),
    }
}

/// Updates the dimension-(k+1) boundary matrix: the `sigma0` slice (a row in
/// chain orientation, a column in transposed fixtures) is dropped; every
/// other coefficient is unchanged.
pub fn update_boundary_kplus1(
    boundary: &IntegerMatrix,
    sigma0: &str,
) -> Result<IntegerMatrix, CancelError> {
    restrict_by_label(boundary, sigma0)
}

/// Updates the dimension-(k-1) boundary matrix: restriction of the domain,
/// i.e. the `tau0` slice is dropped.
pub fn update_boundary_kminus1(
    boundary: &IntegerMatrix,
    tau0: &str,
) -> Result<IntegerMatrix, CancelError> {
    restrict_by_label(boundary, tau0)
}

/// Coboundary analog at k+1: restriction to the surviving critical k-cells.
pub fn update_coboundary_kplus1(
    coboundary: &IntegerMatrix,
    sigma0: &str,
) -> Result<IntegerMatrix, CancelError> {
    restrict_by_label(coboundary, sigma0)
}

/// Coboundary analog at k-1: the `tau0` component disappears.
pub fn update_coboundary_kminus1(
    coboundary: &IntegerMatrix,
    tau0: &str,
) -> Result<IntegerMatrix, CancelError> {
    restrict_by_label(coboundary, tau0)
}

/// Applies one cancellation to a full family of Morse matrices without
/// touching the complex: the fast path. Matrices farther than one dimension
/// from the pair are reused as-is.
pub fn apply_cancellation(
    data: &MorseComplexData,
    pair: &CancellablePair,
) -> Result<MorseComplexData, CancelError> {
    let k = pair.sigma0.dim();
    let sigma_label = pair.sigma0.label();
    let tau_label = pair.tau0.label();
    apply_cancellation_by_labels(data, k, &sigma_label, &tau_label)
}

/// Label-level variant of [`apply_cancellation`], usable in fixture mode.
pub fn apply_cancellation_by_labels(
    data: &MorseComplexData,
    k: usize,
    sigma0: &str,
    tau0: &str,
) -> Result<MorseComplexData, CancelError> {
    let mut boundary = data.boundary.clone();
    let mut coboundary = data.coboundary.clone();
    let mut critical = data.critical.clone();
    boundary[k] = update_boundary_k(&boundary[k], tau0, sigma0)?.0;
    coboundary[k] = update_coboundary_k(&coboundary[k], sigma0, tau0)?.0;
    if k + 1 < boundary.len() {
        boundary[k + 1] = update_boundary_kplus1(&boundary[k + 1], sigma0)?;
        coboundary[k + 1] = update_coboundary_kplus1(&coboundary[k + 1], sigma0)?;
    }
    if k >= 1 {
        boundary[k - 1] = update_boundary_kminus1(&boundary[k - 1], tau0)?;
        coboundary[k - 1] = update_coboundary_kminus1(&coboundary[k - 1], tau0)?;
    }
    critical[k].retain(|l| l != sigma0);
    critical[k - 1].retain(|l| l != tau0);
    Ok(MorseComplexData {
        critical,
        boundary,
        coboundary,
    })
}

/// Outcome of the simultaneous-cancellability test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimultaneousCheck {
    /// No nonidentity permutation routes every pair's source to another
    /// pair's target; reversing all trajectories at once stays a gradient
    /// field.
    Cancellable,
    /// A witness permutation (as the image list `pi[i]`) with a trajectory
    /// from `sigma_i` to `tau_{pi[i]}` for every `i`. The condition is
    /// sufficient only, so this reports "condition not met", never
    /// "cancellation impossible".
    Blocked { permutation: Vec<usize> },
}

impl SimultaneousCheck {
    pub fn is_cancellable(&self) -> bool {
        matches!(self, SimultaneousCheck::Cancellable)
    }
}

/// Builds the pairwise reachability matrix `R[i][j]` = "some trajectory runs
/// from `sigma_i` to `tau_j`" and searches for a nonidentity permutation
/// inside it. Every diagonal entry is true (each pair is individually
/// cancellable, which is checked first), so such a permutation exists
/// exactly when the off-diagonal digraph of `R` has a directed cycle; the
/// cycle, extended by fixed points, is returned as the witness.
pub fn simultaneous_cancellable(
    complex: &SimplicialComplex,
    field: &DiscreteVectorField,
    pairs: &[CancellablePair],
) -> Result<SimultaneousCheck, CancelError> {
    let t = pairs.len();
    if t > SIMULTANEOUS_PAIR_CAP {
        return Err(CancelError::TooManyPairs {
            count: t,
            cap: SIMULTANEOUS_PAIR_CAP,
        });
    }
    let mut reach = vec![vec![false; t]; t];
    for (i, pair) in pairs.iter().enumerate() {
        revalidate(complex, field, pair)?;
        for (j, other) in pairs.iter().enumerate() {
            if other.tau0.dim() + 1 != pair.sigma0.dim() {
                continue;
            }
            let agg = trajectory_aggregate(complex, field, &pair.sigma0, &other.tau0)?;
            reach[i][j] = !agg.path_count.is_zero();
        }
    }
    // Cycle hunt on the off-diagonal digraph, DFS with a color array.
    let mut color = vec![0u8; t];
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for start in 0..t {
        if color[start] != 0 {
            continue;
        }
        stack.push((start, 0));
        color[start] = 1;
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            let mut advanced = false;
            while *next < t {
                let v = *next;
                *next += 1;
                if v == u || !reach[u][v] {
                    continue;
                }
                match color[v] {
                    0 => {
                        color[v] = 1;
                        stack.push((v, 0));
                        advanced = true;
                        break;
                    }
                    1 => {
                        let from = stack
                            .iter()
                            .position(|&(n, _)| n == v)
                            .expect("gray node is on the stack");
                        let cycle: Vec<usize> = stack[from..].iter().map(|&(n, _)| n).collect();
                        let mut permutation: Vec<usize> = (0..t).collect();
                        for w in 0..cycle.len() {
                            permutation[cycle[w]] = cycle[(w + 1) % cycle.len()];
                        }
                        return Ok(SimultaneousCheck::Blocked { permutation });
                    }
                    _ => {}
                }
            }
            if !advanced {
                color[u] = 2;
                stack.pop();
            }
        }
    }
    Ok(SimultaneousCheck::Cancellable)
}

/// How [`cancel_many`] applies a batch of cancellations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CancelMode {
    /// Cancel one pair after another, revalidating each against the current
    /// field. Matches the narrative of cancelling twice in a row.
    #[default]
    Sequential,
    /// Reverse all trajectories in a single step.
    OneShot,
}

/// Cancels a batch of pairs. The simultaneous-cancellability condition is
/// checked up front in both modes.
pub fn cancel_many(
    complex: &SimplicialComplex,
    field: &DiscreteVectorField,
    pairs: &[CancellablePair],
    mode: CancelMode,
) -> Result<DiscreteVectorField, CancelError> {
    match simultaneous_cancellable(complex, field, pairs)? {
        SimultaneousCheck::Cancellable => {}
        SimultaneousCheck::Blocked { permutation } => {
            return Err(CancelError::NotSimultaneous { permutation });
        }
    }
    match mode {
        CancelMode::Sequential => cancel_sequentially(complex, field, pairs),
        CancelMode::OneShot => {
            let mut current: Vec<(Simplex, Simplex)> = field.pairs().to_vec();
            for pair in pairs {
                revalidate(complex, field, pair)?;
            }
            for pair in pairs {
                let scratch = DiscreteVectorField::new(complex, current)?;
                current = flip_along(&scratch, &pair.trajectory);
            }
            let next = DiscreteVectorField::new(complex, current)?;
            if !is_gradient(complex, &next) {
                return Err(CancelError::ResultNotGradient);
            }
            Ok(next)
        }
    }
}

/// Sequential cancellation without the up-front simultaneity check: each
/// pair is revalidated against the field as it stands, and a pair that has
/// stopped being cancellable aborts with a sequencing error naming it.
pub fn cancel_sequentially(
    complex: &SimplicialComplex,
    field: &DiscreteVectorField,
    pairs: &[CancellablePair],
) -> Result<DiscreteVectorField, CancelError> {
    let mut current = field.clone();
    for (index, pair) in pairs.iter().enumerate() {
        // The unique trajectory may differ from the recorded one once
        // earlier cancellations have rerouted the field; recompute it.
        let refreshed = refresh_pair(complex, &current, pair)
            .map_err(|source| CancelError::Sequencing {
                index,
                source: Box::new(source),
            })?;
        current = cancel_pair(complex, &current, &refreshed).map_err(|source| {
            CancelError::Sequencing {
                index,
                source: Box::new(source),
            }
        })?;
    }
    Ok(current)
}

/// Recomputes the unique trajectory of `(sigma0, tau0)` under `field`.
pub fn refresh_pair(
    complex: &SimplicialComplex,
    field: &DiscreteVectorField,
    pair: &CancellablePair,
) -> Result<CancellablePair, CancelError> {
    make_cancellable_pair(complex, field, &pair.sigma0, &pair.tau0)
}

/// Builds a [`CancellablePair`] from two critical cells, provided exactly
/// one trajectory connects them.
pub fn make_cancellable_pair(
    complex: &SimplicialComplex,
    field: &DiscreteVectorField,
    sigma0: &Simplex,
    tau0: &Simplex,
) -> Result<CancellablePair, CancelError> {
    for s in [sigma0, tau0] {
        if field.is_matched(s) {
            return Err(CancelError::NotCritical { simplex: s.clone() });
        }
    }
    let aggregate = trajectory_aggregate(complex, field, sigma0, tau0)?;
    if !aggregate.is_unique() {
        return Err(CancelError::NotUnique {
            sigma0: sigma0.clone(),
            tau0: tau0.clone(),
            path_count: aggregate.path_count,
        });
    }
    let trajectories = crate::gvf::enumerate_trajectories(complex, field, sigma0, tau0, 1)?;
    let trajectory = trajectories.into_iter().next().expect("count is one");
    let weight = trajectory.weight();
    Ok(CancellablePair {
        sigma0: sigma0.clone(),
        tau0: tau0.clone(),
        trajectory,
        weight,
    })
}
