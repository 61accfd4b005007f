//! Exact enumeration and classification of Bell correlation inequalities.
//!
//! For a scenario of two-valued observables (for example two sites with
//! three observables each, written `(3,3)`), the correlation vectors of all
//! deterministic local strategies span a polytope whose facets are exactly
//! the tight Bell inequalities of that scenario. This crate computes those
//! facets with arbitrary-precision integer arithmetic, splits them into
//! orbits of the scenario symmetry group, and evaluates quantum violations
//! on the two-qubit singlet state.
//!
//! The pipeline is:
//!
//! 1. [`scenario`] — deterministic strategies and their correlation
//!    vectors in homogeneous ("tilde") coordinates,
//! 2. [`hull`] — exact convex-hull facet enumeration with certificates,
//! 3. [`symmetry`] — group generation, orbit decomposition and canonical
//!    representatives (plus the boolean-function analysis in [`boolean`]),
//! 4. [`quantum`] — singlet-state violation and `|E/ΔE|` ratio
//!    optimization over Bloch-vector measurement configurations.
//!
//! All combinatorial results are exact; no floating point enters the hull
//! or orbit computations.

pub mod boolean;
pub mod hull;
pub mod inequality;
pub mod io;
pub mod known;
mod linalg;
pub mod quantum;
pub mod scenario;
pub mod symmetry;

pub use inequality::Inequality;
pub use scenario::{CorrelationVector, MultiIndex, Scenario, Strategy};
