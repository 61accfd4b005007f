//! Facet enumeration of correlation polytopes with exact certificates.
//!
//! The polytope lives in the hyperplane `x_0 = 1` of the homogeneous
//! coordinate space, so its facets are exactly the extreme rays of the dual
//! of the cone spanned by the vertex vectors. Two enumeration methods are
//! provided: plain double description over that cone, and adjacency
//! decomposition, which walks the facet-ridge graph one symmetry-class
//! representative at a time and expands orbits at the end. Both return the
//! same canonical, lexicographically sorted facet list.

mod adjacency;
mod dd;

use std::collections::BTreeSet;
use std::str::FromStr;

use num::{BigInt, Zero};
use rayon::prelude::*;

use crate::linalg;
use crate::scenario::{CorrelationVector, Scenario};

// canonicalization of raw coefficient vectors lives on the inequality type
pub use crate::inequality::{Inequality, InequalityError};

/// Errors from facet enumeration.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HullError {
    #[error("empty vertex list")]
    EmptyInput,
    #[error("degenerate input: vertex rank {rank} below coordinate count {expected}")]
    Degenerate { rank: usize, expected: usize },
    #[error("vertex length does not match scenario dimension {expected}")]
    ShapeMismatch { expected: usize },
    #[error("unknown hull method {0:?} (expected \"dd\" or \"adj\")")]
    UnknownMethod(String),
}

/// Facet enumeration algorithm selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HullMethod {
    /// Incremental double description over the homogeneous vertex cone.
    DoubleDescription,
    /// Facet-ridge graph search on symmetry-class representatives.
    AdjacencyDecomposition,
}

impl FromStr for HullMethod {
    type Err = HullError;

    fn from_str(s: &str) -> Result<Self, HullError> {
        match s {
            "dd" | "double-description" => Ok(Self::DoubleDescription),
            "adj" | "adjacency" | "adjacency-decomposition" => Ok(Self::AdjacencyDecomposition),
            other => Err(HullError::UnknownMethod(other.to_string())),
        }
    }
}

/// Proof object for a facet claim: the tight vertices and their rank.
#[derive(Debug, Clone)]
pub struct FacetCertificate {
    pub inequality: Inequality,
    /// Exact minimum of `α·v` over the vertices.
    pub min_value: BigInt,
    /// Indices of vertices with `α·v = 0`.
    pub tight_vertices: Vec<usize>,
    /// Affine dimension of the tight vertex set (0 when the set is empty).
    pub tight_rank: usize,
    /// Affine dimension of the full vertex set.
    pub polytope_dim: usize,
    /// True iff `min_value = 0` and `tight_rank = polytope_dim - 1`.
    pub is_facet: bool,
}

/// The complete facet list of `conv(vertices)`, canonical and sorted.
///
/// Output is identical for both methods and independent of thread count.
pub fn facets(
    vertices: &[CorrelationVector],
    method: HullMethod,
    scenario: &Scenario,
) -> Result<Vec<Inequality>, HullError> {
    if vertices.is_empty() {
        return Err(HullError::EmptyInput);
    }
    let dim = scenario.dim();
    if vertices.iter().any(|v| v.len() != dim) {
        return Err(HullError::ShapeMismatch { expected: dim });
    }
    match method {
        HullMethod::DoubleDescription => {
            let cons: Vec<Vec<i64>> = vertices.iter().map(|v| v.entries().to_vec()).collect();
            let rays = dd::dual_rays(&cons)?;
            let set: BTreeSet<Inequality> = rays
                .into_iter()
                .map(|r| Inequality::from_coeffs(r).expect("extreme ray is nonzero"))
                .collect();
            Ok(set.into_iter().collect())
        }
        HullMethod::AdjacencyDecomposition => adjacency::facets_adjacency(vertices, scenario),
    }
}

/// Evaluates an inequality on every vertex and certifies its facet status.
pub fn verify_facet(vertices: &[CorrelationVector], inequality: &Inequality) -> FacetCertificate {
    assert!(!vertices.is_empty(), "empty vertex list");
    let values: Vec<BigInt> = vertices
        .iter()
        .map(|v| inequality.evaluate_vertex(v))
        .collect();
    let min_value = values.iter().min().cloned().expect("nonempty");
    let tight_vertices: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_zero())
        .map(|(i, _)| i)
        .collect();
    let all_rows: Vec<&[i64]> = vertices.iter().map(|v| v.entries()).collect();
    let polytope_dim = linalg::rank_i64(&all_rows) - 1;
    let tight_rank = if tight_vertices.is_empty() {
        0
    } else {
        let rows: Vec<&[i64]> = tight_vertices
            .iter()
            .map(|&i| vertices[i].entries())
            .collect();
        linalg::rank_i64(&rows) - 1
    };
    let is_facet = min_value.is_zero() && tight_rank == polytope_dim - 1;
    FacetCertificate {
        inequality: inequality.clone(),
        min_value,
        tight_vertices,
        tight_rank,
        polytope_dim,
        is_facet,
    }
}

/// Certifies a whole facet list in parallel; returns the failing indices.
pub fn verify_all(vertices: &[CorrelationVector], facets: &[Inequality]) -> Vec<usize> {
    facets
        .par_iter()
        .enumerate()
        .filter(|(_, f)| !verify_facet(vertices, f).is_facet)
        .map(|(i, _)| i)
        .collect()
}
