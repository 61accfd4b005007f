//! File formats: vertex/facet text files, class summaries and violation
//! reports as JSON.
//!
//! Vertex and facet files share the layout: a header line
//! `scenario: n_A,n_B[,n_C]`, then one vector per line as space-separated
//! integers in the fixed row-major coordinate order. Facet files are sorted
//! lexicographically.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::inequality::{Inequality, InequalityError};
use crate::quantum::ViolationResult;
use crate::scenario::{CorrelationVector, Scenario, ScenarioError};
use crate::symmetry::Orbit;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("missing or malformed header (expected `scenario: …`)")]
    BadHeader,
    #[error("line {line}: {source}")]
    BadScenario {
        line: usize,
        source: ScenarioError,
    },
    #[error("line {line}: {source}")]
    BadInequality {
        line: usize,
        source: InequalityError,
    },
    #[error("line {line}: bad vertex entry")]
    BadVertex { line: usize },
    #[error("line {line}: expected {expected} entries, got {got}")]
    WrongWidth {
        line: usize,
        expected: usize,
        got: usize,
    },
    #[error("coefficient overflows the JSON integer range")]
    CoefficientOverflow,
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn write_header<W: Write>(w: &mut W, scenario: &Scenario) -> Result<(), IoError> {
    writeln!(w, "scenario: {}", scenario.spec_string())?;
    Ok(())
}

fn read_header(line: &str) -> Result<Scenario, IoError> {
    let spec = line.strip_prefix("scenario:").ok_or(IoError::BadHeader)?;
    Scenario::parse(spec.trim()).map_err(|source| IoError::BadScenario { line: 1, source })
}

/// Writes the vertex file: header plus one `±1` row per vertex.
pub fn write_vertices<W: Write>(
    w: &mut W,
    scenario: &Scenario,
    vertices: &[CorrelationVector],
) -> Result<(), IoError> {
    write_header(w, scenario)?;
    for v in vertices {
        let line = v
            .entries()
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn read_vertices<R: BufRead>(r: R) -> Result<(Scenario, Vec<CorrelationVector>), IoError> {
    let mut lines = r.lines();
    let header = lines.next().ok_or(IoError::BadHeader)??;
    let scenario = read_header(&header)?;
    let mut vertices = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = k + 2;
        let entries: Result<Vec<i64>, _> = line
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|_| IoError::BadVertex { line: lineno }))
            .collect();
        let entries = entries?;
        if entries.len() != scenario.dim() {
            return Err(IoError::WrongWidth {
                line: lineno,
                expected: scenario.dim(),
                got: entries.len(),
            });
        }
        let v = CorrelationVector::new(entries)
            .map_err(|_| IoError::BadVertex { line: lineno })?;
        vertices.push(v);
    }
    Ok((scenario, vertices))
}

/// Writes the facet file: header plus one coefficient row per facet.
///
/// `flush_every` bounds buffered output; large lists are flushed in batches
/// instead of being accumulated.
pub fn write_facets<W: Write>(
    w: &mut W,
    scenario: &Scenario,
    facets: &[Inequality],
    flush_every: Option<usize>,
) -> Result<(), IoError> {
    write_header(w, scenario)?;
    for (k, f) in facets.iter().enumerate() {
        writeln!(w, "{}", f.to_line())?;
        if let Some(batch) = flush_every {
            if batch > 0 && (k + 1) % batch == 0 {
                w.flush()?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_facets<R: BufRead>(r: R) -> Result<(Scenario, Vec<Inequality>), IoError> {
    let mut lines = r.lines();
    let header = lines.next().ok_or(IoError::BadHeader)??;
    let scenario = read_header(&header)?;
    let mut facets = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = k + 2;
        let ineq = Inequality::parse_line(&line)
            .map_err(|source| IoError::BadInequality { line: lineno, source })?;
        if ineq.len() != scenario.dim() {
            return Err(IoError::WrongWidth {
                line: lineno,
                expected: scenario.dim(),
                got: ineq.len(),
            });
        }
        facets.push(ineq);
    }
    Ok((scenario, facets))
}

/// One orbit row of the machine-readable class table.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClassSummary {
    pub representative: Vec<i64>,
    pub orbit_size: usize,
    pub stabilizer_order: usize,
    pub is_positivity: bool,
}

/// Serializable class table sorted by (size, representative).
pub fn class_summaries(
    orbits: &[Orbit],
    is_positivity: impl Fn(&Orbit) -> bool,
) -> Result<Vec<ClassSummary>, IoError> {
    let mut rows = orbits
        .iter()
        .map(|o| {
            let representative = o
                .representative
                .coeffs_i64()
                .ok_or(IoError::CoefficientOverflow)?;
            Ok(ClassSummary {
                representative,
                orbit_size: o.size,
                stabilizer_order: o.stabilizer_order,
                is_positivity: is_positivity(o),
            })
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    rows.sort_by(|a, b| {
        a.orbit_size
            .cmp(&b.orbit_size)
            .then_with(|| a.representative.cmp(&b.representative))
    });
    Ok(rows)
}

/// JSON violation report: objective values plus the spherical angles.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ViolationReport {
    pub value: f64,
    pub ratio: f64,
    pub converged: bool,
    /// `[theta, phi]` per observable of the first site.
    pub a_angles: Vec<[f64; 2]>,
    pub b_angles: Vec<[f64; 2]>,
}

impl From<&ViolationResult> for ViolationReport {
    fn from(res: &ViolationResult) -> Self {
        let angles = |vs: &[crate::quantum::BlochVector]| {
            vs.iter()
                .map(|v| {
                    let (t, p) = v.to_angles();
                    [t, p]
                })
                .collect()
        };
        Self {
            value: res.value,
            ratio: res.ratio,
            converged: res.converged,
            a_angles: angles(&res.config.a_vectors),
            b_angles: angles(&res.config.b_vectors),
        }
    }
}

/// Parses an inline JSON rank-2 tensor (array of integer rows) into an
/// inequality in row-major order.
pub fn parse_tensor_json(text: &str) -> Result<(usize, usize, Inequality), IoError> {
    let rows: Vec<Vec<i64>> = serde_json::from_str(text)?;
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    if nrows == 0 || ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(IoError::Json(serde_json::Error::io(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            "tensor rows must be nonempty and rectangular",
        ))));
    }
    let flat: Vec<i64> = rows.into_iter().flatten().collect();
    let ineq = Inequality::from_i64(&flat).map_err(|source| IoError::BadInequality {
        line: 1,
        source,
    })?;
    Ok((nrows - 1, ncols - 1, ineq))
}
