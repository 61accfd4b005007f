//! Scenarios, deterministic strategies and their correlation vectors.
//!
//! A scenario lists the number of two-valued observables at each site.
//! Coordinates are homogeneous: every site gets the constant observable at
//! index 0, so a multi-index `(i_A, i_B, …)` with all entries allowed to be
//! zero addresses one expectation value. The all-zero index is the constant
//! coordinate and is always `+1` on a vertex; inequalities over these
//! coordinates are plain linear forms with the constant term folded in.

use std::collections::HashSet;
use std::fmt;

use crate::inequality::Inequality;
use crate::linalg;

/// Errors from scenario construction and strategy/vertex plumbing.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("a scenario needs at least 2 sites, got {0}")]
    TooFewSites(usize),
    #[error("site {0} has no observables")]
    EmptySite(usize),
    #[error("cannot parse scenario spec {0:?}")]
    BadSpec(String),
    #[error("strategy shape does not match scenario {0}")]
    ShapeMismatch(String),
    #[error("strategy entries must be +1 or -1")]
    BadValue,
}

/// A measurement scenario: the ordered list of observable counts per site.
///
/// Outcomes are fixed to `{+1, -1}`. The coordinate index set is the product
/// of `{0, …, n_X}` over sites, in row-major order with the all-zero
/// (constant) index first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scenario {
    site_counts: Vec<usize>,
    strides: Vec<usize>,
    dim: usize,
}

impl Scenario {
    pub fn new(site_counts: &[usize]) -> Result<Self, ScenarioError> {
        if site_counts.len() < 2 {
            return Err(ScenarioError::TooFewSites(site_counts.len()));
        }
        if let Some(site) = site_counts.iter().position(|&n| n == 0) {
            return Err(ScenarioError::EmptySite(site));
        }
        let mut strides = vec![1usize; site_counts.len()];
        for x in (0..site_counts.len() - 1).rev() {
            strides[x] = strides[x + 1] * (site_counts[x + 1] + 1);
        }
        let dim = strides[0] * (site_counts[0] + 1);
        Ok(Self {
            site_counts: site_counts.to_vec(),
            strides,
            dim,
        })
    }

    /// Parses a comma-separated spec such as `"2,2"` or `"2,2,2"`.
    pub fn parse(spec: &str) -> Result<Self, ScenarioError> {
        let counts: Result<Vec<usize>, _> = spec
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect();
        match counts {
            Ok(c) => Self::new(&c).map_err(|e| match e {
                ScenarioError::TooFewSites(_) | ScenarioError::EmptySite(_) => e,
                _ => ScenarioError::BadSpec(spec.to_string()),
            }),
            Err(_) => Err(ScenarioError::BadSpec(spec.to_string())),
        }
    }

    pub fn site_counts(&self) -> &[usize] {
        &self.site_counts
    }

    pub fn num_sites(&self) -> usize {
        self.site_counts.len()
    }

    /// Total number of observables across all sites.
    pub fn num_observables(&self) -> usize {
        self.site_counts.iter().sum()
    }

    /// Number of homogeneous coordinates, `prod(n_X + 1)`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of deterministic strategies, `2^(sum n_X)`.
    pub fn num_strategies(&self) -> usize {
        1usize << self.num_observables()
    }

    /// Flat coordinate index of a multi-index (row-major, first site slowest).
    pub fn flat_index(&self, mi: &MultiIndex) -> Result<usize, ScenarioError> {
        if mi.0.len() != self.num_sites() {
            return Err(ScenarioError::ShapeMismatch(self.spec_string()));
        }
        let mut flat = 0;
        for (x, &i) in mi.0.iter().enumerate() {
            if i > self.site_counts[x] {
                return Err(ScenarioError::ShapeMismatch(self.spec_string()));
            }
            flat += i * self.strides[x];
        }
        Ok(flat)
    }

    /// Multi-index corresponding to a flat coordinate index.
    pub fn multi_index(&self, flat: usize) -> MultiIndex {
        assert!(flat < self.dim, "coordinate index out of range");
        let mut digits = Vec::with_capacity(self.num_sites());
        for x in 0..self.num_sites() {
            digits.push(flat / self.strides[x] % (self.site_counts[x] + 1));
        }
        MultiIndex(digits)
    }

    /// Per-site digit of a flat index without materializing a [`MultiIndex`].
    #[inline]
    pub(crate) fn digit(&self, flat: usize, site: usize) -> usize {
        flat / self.strides[site] % (self.site_counts[site] + 1)
    }

    /// All multi-indices in the fixed coordinate order.
    pub fn multi_indices(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        (0..self.dim).map(|f| self.multi_index(f))
    }

    pub fn spec_string(&self) -> String {
        self.site_counts
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.spec_string())
    }
}

/// Per-site coordinate index; index 0 is the constant observable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    /// True when every entry is zero (the constant coordinate).
    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&i| i == 0)
    }
}

/// A deterministic local strategy: one outcome in `{+1, -1}` per observable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Strategy {
    per_site: Vec<Vec<i64>>,
}

impl Strategy {
    pub fn new(per_site: Vec<Vec<i64>>) -> Result<Self, ScenarioError> {
        if per_site
            .iter()
            .any(|vals| vals.iter().any(|&v| v != 1 && v != -1))
        {
            return Err(ScenarioError::BadValue);
        }
        Ok(Self { per_site })
    }

    pub fn per_site(&self) -> &[Vec<i64>] {
        &self.per_site
    }

    /// Outcome of observable `obs` (1-based) at `site`.
    pub fn value(&self, site: usize, obs: usize) -> i64 {
        self.per_site[site][obs - 1]
    }

    fn matches(&self, scenario: &Scenario) -> bool {
        self.per_site.len() == scenario.num_sites()
            && self
                .per_site
                .iter()
                .zip(scenario.site_counts())
                .all(|(vals, &n)| vals.len() == n)
    }
}

/// Correlation vector of a strategy in homogeneous coordinates.
///
/// Entry at multi-index `(i_A, i_B, …)` is the product over sites of the
/// strategy outcome at `i_X` (1 when `i_X = 0`), so the vector is rank-1 and
/// its constant entry is always `+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CorrelationVector {
    entries: Vec<i64>,
}

impl CorrelationVector {
    pub(crate) fn from_entries(entries: Vec<i64>) -> Self {
        debug_assert!(entries.iter().all(|&e| e == 1 || e == -1));
        debug_assert_eq!(entries[0], 1);
        Self { entries }
    }

    /// Builds a vector from raw `±1` entries, validating the invariants.
    pub fn new(entries: Vec<i64>) -> Result<Self, ScenarioError> {
        if entries.is_empty() || entries[0] != 1 {
            return Err(ScenarioError::BadValue);
        }
        if entries.iter().any(|&e| e != 1 && e != -1) {
            return Err(ScenarioError::BadValue);
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Enumerates all `2^(sum n_X)` deterministic strategies.
///
/// The order is a binary counter over the observables in site-major order:
/// the first observable of the first site is the most significant bit, bit
/// value 0 encodes outcome `+1`. The all-`+1` strategy comes first.
pub fn enumerate_strategies(scenario: &Scenario) -> Vec<Strategy> {
    let nobs = scenario.num_observables();
    let total = scenario.num_strategies();
    let mut out = Vec::with_capacity(total);
    for k in 0..total {
        let mut per_site = Vec::with_capacity(scenario.num_sites());
        let mut t = 0;
        for &n in scenario.site_counts() {
            let mut vals = Vec::with_capacity(n);
            for _ in 0..n {
                let bit = (k >> (nobs - 1 - t)) & 1;
                vals.push(if bit == 0 { 1 } else { -1 });
                t += 1;
            }
            per_site.push(vals);
        }
        out.push(Strategy { per_site });
    }
    out
}

/// Maps a strategy to its correlation-vector vertex.
pub fn vertex_coordinates(
    strategy: &Strategy,
    scenario: &Scenario,
) -> Result<CorrelationVector, ScenarioError> {
    if !strategy.matches(scenario) {
        return Err(ScenarioError::ShapeMismatch(scenario.spec_string()));
    }
    let mut entries = Vec::with_capacity(scenario.dim());
    for flat in 0..scenario.dim() {
        let mut p = 1i64;
        for site in 0..scenario.num_sites() {
            let i = scenario.digit(flat, site);
            if i > 0 {
                p *= strategy.per_site[site][i - 1];
            }
        }
        entries.push(p);
    }
    Ok(CorrelationVector::from_entries(entries))
}

/// All vertices of the correlation polytope, in strategy order.
pub fn vertices(scenario: &Scenario) -> Vec<CorrelationVector> {
    enumerate_strategies(scenario)
        .iter()
        .map(|s| vertex_coordinates(s, scenario).expect("enumerated strategy matches scenario"))
        .collect()
}

/// Affine dimension of a vertex set, by exact integer rank.
///
/// All vertices share the constant entry `+1`, so the affine dimension is
/// the linear rank of the homogeneous vectors minus one.
pub fn polytope_dimension(vertices: &[CorrelationVector]) -> usize {
    assert!(!vertices.is_empty(), "empty vertex list");
    let rows: Vec<&[i64]> = vertices.iter().map(|v| v.entries()).collect();
    linalg::rank_i64(&rows) - 1
}

/// The positivity facets: nonnegativity of every joint-outcome probability.
///
/// For each choice of one observable per site and each outcome sign pattern,
/// `2^sites · p(outcome)` expands in the homogeneous coordinates as a sum of
/// `±1` coefficients over the subsets of sites, with constant term `+1`.
pub fn positivity_inequalities(scenario: &Scenario) -> Vec<Inequality> {
    let nsites = scenario.num_sites();
    let mut out = Vec::new();
    let mut setting = vec![1usize; nsites];
    loop {
        for pattern in 0..(1usize << nsites) {
            // bit 0 of `pattern` encodes outcome +1 at the site, matching the
            // strategy-enumeration convention (first site = most significant).
            let mut coeffs = vec![0i64; scenario.dim()];
            for subset in 0..(1usize << nsites) {
                let mut flat = 0;
                let mut sign = 1i64;
                for site in 0..nsites {
                    let member = (subset >> (nsites - 1 - site)) & 1 == 1;
                    if member {
                        flat += setting[site] * scenario.strides[site];
                        if (pattern >> (nsites - 1 - site)) & 1 == 1 {
                            sign = -sign;
                        }
                    }
                }
                coeffs[flat] = sign;
            }
            out.push(Inequality::from_i64(&coeffs).expect("positivity form is nonzero"));
        }
        // advance the setting counter (row-major over observables)
        let mut x = nsites;
        loop {
            if x == 0 {
                return out;
            }
            x -= 1;
            if setting[x] < scenario.site_counts[x] {
                setting[x] += 1;
                break;
            }
            setting[x] = 1;
        }
    }
}

/// Checks that distinct strategies map to distinct vertices.
pub fn vertices_are_distinct(vertices: &[CorrelationVector]) -> bool {
    let mut seen = HashSet::with_capacity(vertices.len());
    vertices.iter().all(|v| seen.insert(v.entries().to_vec()))
}
