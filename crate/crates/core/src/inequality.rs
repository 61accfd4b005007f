//! Integer inequality tensors in the fixed coordinate order.

use std::fmt;

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::scenario::CorrelationVector;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InequalityError {
    #[error("cannot canonicalize the zero vector")]
    ZeroVector,
    #[error("coefficient count {got} does not match coordinate count {expected}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("cannot parse coefficient {0:?}")]
    BadCoefficient(String),
}

/// A linear form `α` over the homogeneous coordinates, `α·v ≥ 0` when valid.
///
/// Stored in canonical form: integer coefficients with collective gcd 1, and
/// the sign fixed so that the constant term (the coefficient at the all-zero
/// index) is positive — the origin of correlation coordinates is an interior
/// point, so every valid inequality takes a positive value there. When the
/// constant term is zero the first nonzero coefficient is made positive
/// instead.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Inequality {
    coeffs: Vec<BigInt>,
}

impl Inequality {
    /// Canonicalizes a raw integer coefficient vector.
    pub fn from_coeffs(raw: Vec<BigInt>) -> Result<Self, InequalityError> {
        let mut g = BigInt::zero();
        for c in &raw {
            g = g.gcd(c);
        }
        if g.is_zero() {
            return Err(InequalityError::ZeroVector);
        }
        let first_nonzero = raw.iter().find(|c| !c.is_zero()).expect("nonzero vector");
        let flip = if raw[0].is_zero() {
            first_nonzero.sign() == Sign::Minus
        } else {
            raw[0].sign() == Sign::Minus
        };
        if flip {
            g = -g;
        }
        let coeffs = raw.iter().map(|c| c / &g).collect();
        Ok(Self { coeffs })
    }

    pub fn from_i64(raw: &[i64]) -> Result<Self, InequalityError> {
        Self::from_coeffs(raw.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Canonicalizes a rational vector by clearing denominators first.
    pub fn from_rationals(raw: &[BigRational]) -> Result<Self, InequalityError> {
        let mut lcm = BigInt::one();
        for r in raw {
            lcm = lcm.lcm(r.denom());
        }
        Self::from_coeffs(raw.iter().map(|r| (r * &lcm).to_integer()).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The coefficient at the all-zero multi-index.
    pub fn constant_term(&self) -> &BigInt {
        &self.coeffs[0]
    }

    /// Exact value of `α·v` on a vertex.
    pub fn evaluate_vertex(&self, vertex: &CorrelationVector) -> BigInt {
        debug_assert_eq!(self.coeffs.len(), vertex.len());
        let mut acc = BigInt::zero();
        for (c, &e) in self.coeffs.iter().zip(vertex.entries()) {
            match e {
                1 => acc += c,
                -1 => acc -= c,
                _ => unreachable!("vertex entries are ±1"),
            }
        }
        acc
    }

    /// One facet-file line: space-separated coefficients in coordinate order.
    pub fn to_line(&self) -> String {
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses a facet-file line; the result is canonicalized.
    pub fn parse_line(line: &str) -> Result<Self, InequalityError> {
        let raw: Result<Vec<BigInt>, _> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<BigInt>()
                    .map_err(|_| InequalityError::BadCoefficient(tok.to_string()))
            })
            .collect();
        let raw = raw?;
        if raw.is_empty() {
            return Err(InequalityError::ZeroVector);
        }
        Self::from_coeffs(raw)
    }

    /// Coefficients as `i64`, when they fit.
    pub fn coeffs_i64(&self) -> Option<Vec<i64>> {
        use num::ToPrimitive;
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }

    /// True when only the constant coefficient is nonzero.
    pub fn is_constant_only(&self) -> bool {
        self.coeffs.iter().skip(1).all(|c| c.is_zero())
    }

    /// Largest absolute coefficient; useful for display heuristics.
    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_line())
    }
}
