//! Discrete Morse theory on finite abstract simplicial complexes.
//!
//! The crate builds Morse and co-Morse boundary matrices by weighted
//! gradient-trajectory enumeration over the modified Hasse diagram, cancels
//! critical pairs by reversing unique trajectories, and applies a closed-form
//! update to the boundary matrices so the trajectories never have to be
//! re-enumerated after a cancellation. Everything is exact: matrix entries,
//! trajectory weights and path counts are arbitrary-precision integers, and
//! homology groups come out of an integer Smith normal form.
//!
//! Modules:
//! - [`complex`]: simplices, complexes, incidence numbers, simplicial (co)boundary matrices
//! - [`matrix`]: dense labeled integer matrices and their JSON form
//! - [`gvf`]: discrete vector fields, acyclicity, weighted trajectory sums
//! - [`morse`]: Morse complex matrices and chain-law verification
//! - [`cancel`]: critical-pair cancellation and fast matrix updates
//! - [`homology`]: Smith normal form and integer homology groups
//! - [`corpus`]: seeded random instances for verification and benchmarking
//!
//! With the default `parallel` feature, matrix assembly and corpus-wide
//! verification fan out over rayon; without it every code path is sequential.

pub mod cancel;
pub mod complex;
pub mod corpus;
pub mod gvf;
pub mod homology;
pub mod matrix;
pub mod morse;

pub use complex::{incidence, Simplex, SimplicialComplex};
pub use gvf::{DiscreteVectorField, Trajectory, TrajectoryAggregate};
pub use matrix::IntegerMatrix;
