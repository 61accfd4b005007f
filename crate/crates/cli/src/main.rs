//! `bellpoly` — vertex/facet/class/violation pipeline for Bell correlation
//! polytopes.
//!
//! Subcommands: `vertices`, `facets`, `classify`, `violate`, `check`.
//! Exit codes: 0 success, 1 computation or check failure, 2 usage error.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use bellpoly::hull::{self, HullMethod};
use bellpoly::io as bio;
use bellpoly::quantum::{self, Objective, OptimizeOptions};
use bellpoly::scenario::{self, Scenario};
use bellpoly::symmetry::{self, SymmetryGroup};
use bellpoly::{boolean, known, Inequality};

#[derive(Parser)]
#[command(name = "bellpoly", version, about = "Bell correlation polytope toolkit")]
struct Cli {
    /// Worker threads for hull and orbit computations (default: all cores).
    /// Output is identical for every worker count.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the deterministic-strategy vertex file of a scenario
    Vertices {
        /// Scenario spec such as 2,2 or 3,3 or 2,2,2
        #[arg(long)]
        scenario: String,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the complete facet list
    Facets {
        #[arg(long)]
        scenario: Option<String>,
        /// Vertex file to read instead of --scenario
        #[arg(long = "in", value_name = "FILE")]
        input: Option<PathBuf>,
        /// Hull algorithm: dd (double description) or adj (adjacency
        /// decomposition through the symmetry group)
        #[arg(long, default_value = "dd")]
        method: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Above this many facets the output file is flushed in batches
        #[arg(long, default_value_t = 10_000)]
        stream_threshold: usize,
    },
    /// Decompose a facet list into symmetry classes
    Classify {
        #[arg(long)]
        scenario: Option<String>,
        /// Facet file from `facets` (recomputed from --scenario when omitted)
        #[arg(long = "in", value_name = "FILE")]
        input: Option<PathBuf>,
        #[arg(long, default_value = "dd")]
        method: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit the class table as JSON (default: aligned text)
        #[arg(long)]
        json: bool,
    },
    /// Optimize the quantum violation of a two-site inequality on the singlet
    Violate {
        /// Facet file holding the inequality (single line, or pick --row)
        #[arg(long = "in", value_name = "FILE")]
        input: Option<PathBuf>,
        /// Inline JSON coefficient tensor, e.g. [[2,0,0],[0,-1,-1],[0,-1,1]]
        #[arg(long)]
        tensor: Option<String>,
        /// Scenario spec (taken from the facet file header when present)
        #[arg(long)]
        scenario: Option<String>,
        /// Row index into a multi-line facet file (0-based)
        #[arg(long)]
        row: Option<usize>,
        /// Objective: value, ratio, or both
        #[arg(long, default_value = "both")]
        objective: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit JSON (default: human-readable summary)
        #[arg(long)]
        json: bool,
    },
    /// Run the reproduction checks and print expected vs computed values
    Check {
        /// One of: s22, s33, 2n, s222, f2, quantum (all when omitted)
        #[arg(long)]
        case: Option<String>,
        /// Number of B-observables for the 2n case (3 or 4)
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum AppError {
    Usage(String),
    Runtime(String),
    CheckFailed,
}

impl From<bio::IoError> for AppError {
    fn from(e: bio::IoError) -> Self {
        AppError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || match &cli.command {
        Command::Vertices { scenario, out } => cmd_vertices(scenario, out.as_deref()),
        Command::Facets {
            scenario,
            input,
            method,
            out,
            stream_threshold,
        } => cmd_facets(
            scenario.as_deref(),
            input.as_deref(),
            method,
            out.as_deref(),
            *stream_threshold,
        ),
        Command::Classify {
            scenario,
            input,
            method,
            out,
            json,
        } => cmd_classify(scenario.as_deref(), input.as_deref(), method, out.as_deref(), *json),
        Command::Violate {
            input,
            tensor,
            scenario,
            row,
            objective,
            seed,
            out,
            json,
        } => cmd_violate(
            input.as_deref(),
            tensor.as_deref(),
            scenario.as_deref(),
            *row,
            objective,
            *seed,
            out.as_deref(),
            *json,
        ),
        Command::Check { case, n, seed } => cmd_check(case.as_deref(), *n, *seed),
    };
    let result = match cli.workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .expect("thread pool");
            pool.install(run)
        }
        None => run(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::CheckFailed) => ExitCode::from(1),
    }
}

fn parse_scenario(spec: &str) -> Result<Scenario, AppError> {
    Scenario::parse(spec).map_err(|e| AppError::Usage(e.to_string()))
}

fn parse_method(s: &str) -> Result<HullMethod, AppError> {
    s.parse().map_err(|e: hull::HullError| AppError::Usage(e.to_string()))
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, AppError> {
    match path {
        Some(p) => {
            let f = File::create(p)
                .map_err(|e| AppError::Runtime(format!("cannot write {}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(BufWriter::new(std::io::stdout()))),
    }
}

fn cmd_vertices(spec: &str, out: Option<&Path>) -> Result<(), AppError> {
    let sc = parse_scenario(spec)?;
    let verts = scenario::vertices(&sc);
    let mut w = open_out(out)?;
    bio::write_vertices(&mut w, &sc, &verts)?;
    w.flush()?;
    eprintln!("{} vertices", verts.len());
    Ok(())
}

/// Vertex list from either a scenario spec or a vertex file.
fn load_vertices(
    spec: Option<&str>,
    input: Option<&Path>,
) -> Result<(Scenario, Vec<scenario::CorrelationVector>), AppError> {
    match (spec, input) {
        (Some(s), None) => {
            let sc = parse_scenario(s)?;
            let verts = scenario::vertices(&sc);
            Ok((sc, verts))
        }
        (None, Some(path)) => {
            let f = File::open(path)
                .map_err(|e| AppError::Runtime(format!("cannot read {}: {e}", path.display())))?;
            Ok(bio::read_vertices(BufReader::new(f))?)
        }
        (Some(_), Some(_)) => Err(AppError::Usage(
            "pass either --scenario or --in, not both".into(),
        )),
        (None, None) => Err(AppError::Usage("pass --scenario or --in".into())),
    }
}

fn cmd_facets(
    spec: Option<&str>,
    input: Option<&Path>,
    method: &str,
    out: Option<&Path>,
    stream_threshold: usize,
) -> Result<(), AppError> {
    let method = parse_method(method)?;
    let (sc, verts) = load_vertices(spec, input)?;
    let start = Instant::now();
    let facets = hull::facets(&verts, method, &sc).map_err(|e| AppError::Runtime(e.to_string()))?;
    let elapsed = start.elapsed();
    let flush_every = (facets.len() > stream_threshold).then_some(stream_threshold.max(1));
    let mut w = open_out(out)?;
    bio::write_facets(&mut w, &sc, &facets, flush_every)?;
    w.flush()?;
    eprintln!("{} facets in {:.2?}", facets.len(), elapsed);
    println!("{}", facets.len());
    Ok(())
}

/// Facet list from a file, or recomputed from a scenario.
fn load_facets(
    spec: Option<&str>,
    input: Option<&Path>,
    method: HullMethod,
) -> Result<(Scenario, Vec<Inequality>), AppError> {
    match (spec, input) {
        (None, Some(path)) => {
            let f = File::open(path)
                .map_err(|e| AppError::Runtime(format!("cannot read {}: {e}", path.display())))?;
            Ok(bio::read_facets(BufReader::new(f))?)
        }
        (Some(s), None) => {
            let sc = parse_scenario(s)?;
            let verts = scenario::vertices(&sc);
            let facets =
                hull::facets(&verts, method, &sc).map_err(|e| AppError::Runtime(e.to_string()))?;
            Ok((sc, facets))
        }
        (Some(_), Some(_)) => Err(AppError::Usage(
            "pass either --scenario or --in, not both".into(),
        )),
        (None, None) => Err(AppError::Usage("pass --scenario or --in".into())),
    }
}

fn cmd_classify(
    spec: Option<&str>,
    input: Option<&Path>,
    method: &str,
    out: Option<&Path>,
    json: bool,
) -> Result<(), AppError> {
    let method = parse_method(method)?;
    let (sc, facets) = load_facets(spec, input, method)?;
    let group = SymmetryGroup::new(&sc);
    let orbits = symmetry::orbit_decompose(&facets, &group, false)
        .map_err(|e| AppError::Runtime(e.to_string()))?;
    let rows = bio::class_summaries(&orbits, |o| symmetry::is_positivity_class(o, &group))?;
    let mut w = open_out(out)?;
    if json {
        serde_json::to_writer_pretty(&mut w, &rows).map_err(bio::IoError::from)?;
        writeln!(w)?;
    } else {
        writeln!(w, "scenario: {}", sc.spec_string())?;
        writeln!(w, "classes: {}", rows.len())?;
        for (k, row) in rows.iter().enumerate() {
            let coeffs = row
                .representative
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(
                w,
                "class {:>3}  size {:>5}  stabilizer {:>5}  {}  [{}]",
                k,
                row.orbit_size,
                row.stabilizer_order,
                if row.is_positivity { "positivity" } else { "bell      " },
                coeffs
            )?;
        }
    }
    w.flush()?;
    eprintln!("{} classes over {} facets", rows.len(), facets.len());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_violate(
    input: Option<&Path>,
    tensor: Option<&str>,
    spec: Option<&str>,
    row: Option<usize>,
    objective: &str,
    seed: u64,
    out: Option<&Path>,
    json: bool,
) -> Result<(), AppError> {
    let (sc, ineq) = match (input, tensor) {
        (Some(path), None) => {
            let f = File::open(path)
                .map_err(|e| AppError::Runtime(format!("cannot read {}: {e}", path.display())))?;
            let (sc, facets) = bio::read_facets(BufReader::new(f))?;
            let idx = match (row, facets.len()) {
                (Some(r), n) if r < n => r,
                (Some(r), n) => {
                    return Err(AppError::Usage(format!(
                        "--row {r} out of range, file has {n} rows"
                    )))
                }
                (None, 1) => 0,
                (None, n) => {
                    return Err(AppError::Usage(format!(
                        "file has {n} facet rows; pick one with --row"
                    )))
                }
            };
            (sc, facets[idx].clone())
        }
        (None, Some(text)) => {
            let (na, nb, ineq) = bio::parse_tensor_json(text)?;
            let sc = match spec {
                Some(s) => parse_scenario(s)?,
                None => Scenario::new(&[na, nb]).map_err(|e| AppError::Usage(e.to_string()))?,
            };
            if ineq.len() != sc.dim() {
                return Err(AppError::Usage(format!(
                    "tensor has {} coefficients, scenario {} needs {}",
                    ineq.len(),
                    sc.spec_string(),
                    sc.dim()
                )));
            }
            (sc, ineq)
        }
        (Some(_), Some(_)) => {
            return Err(AppError::Usage("pass either --in or --tensor, not both".into()))
        }
        (None, None) => return Err(AppError::Usage("pass --in or --tensor".into())),
    };
    if sc.num_sites() != 2 {
        return Err(AppError::Usage(format!(
            "violation optimization needs a two-site scenario, got {}",
            sc.spec_string()
        )));
    }

    let options = OptimizeOptions {
        seed,
        ..OptimizeOptions::default()
    };
    let optimize = |obj: Objective| {
        quantum::optimize_violation(&ineq, &sc, obj, &options)
            .map_err(|e| AppError::Runtime(e.to_string()))
    };
    let (value_run, ratio_run) = match objective {
        "value" => (Some(optimize(Objective::Value)?), None),
        "ratio" => (None, Some(optimize(Objective::Ratio)?)),
        "both" => (
            Some(optimize(Objective::Value)?),
            Some(optimize(Objective::Ratio)?),
        ),
        other => {
            return Err(AppError::Usage(format!(
                "unknown objective {other:?} (expected value, ratio or both)"
            )))
        }
    };

    let mut doc = serde_json::Map::new();
    if let Some(res) = &value_run {
        doc.insert("value".into(), res.value.into());
        let report = bio::ViolationReport::from(res);
        doc.insert("value_objective".into(), serde_json::to_value(report).map_err(bio::IoError::from)?);
    }
    if let Some(res) = &ratio_run {
        doc.insert("ratio".into(), res.ratio.into());
        let report = bio::ViolationReport::from(res);
        doc.insert("ratio_objective".into(), serde_json::to_value(report).map_err(bio::IoError::from)?);
    }
    let converged = value_run.iter().chain(&ratio_run).all(|r| r.converged);
    doc.insert("converged".into(), converged.into());

    let mut w = open_out(out)?;
    if json {
        serde_json::to_writer_pretty(&mut w, &doc).map_err(bio::IoError::from)?;
        writeln!(w)?;
    } else {
        writeln!(w, "inequality: {ineq}")?;
        if let Some(res) = &value_run {
            writeln!(w, "minimal value : {:+.9}  (negative = violation)", res.value)?;
        }
        if let Some(res) = &ratio_run {
            writeln!(w, "maximal |E/dE|: {:+.9}", res.ratio)?;
        }
        writeln!(w, "converged     : {converged}")?;
    }
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

struct CheckTable {
    rows: Vec<(String, String, String, bool)>,
}

impl CheckTable {
    fn new() -> Self {
        Self { rows: Vec::new() }
    }

    fn push(&mut self, name: &str, expected: impl ToString, computed: impl ToString, pass: bool) {
        self.rows
            .push((name.to_string(), expected.to_string(), computed.to_string(), pass));
    }

    fn check_eq<T: PartialEq + std::fmt::Debug>(&mut self, name: &str, expected: T, computed: T) {
        let pass = expected == computed;
        self.push(name, format!("{expected:?}"), format!("{computed:?}"), pass);
    }

    fn check_close(&mut self, name: &str, expected: f64, computed: f64, tol: f64) {
        let pass = (expected - computed).abs() <= tol;
        self.push(name, format!("{expected:.6}"), format!("{computed:.6}"), pass);
    }

    fn finish(self) -> Result<(), AppError> {
        let width = self.rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        let mut failed = 0;
        for (name, expected, computed, pass) in &self.rows {
            println!(
                "{} {name:<width$}  expected {expected:>12}  computed {computed:>12}",
                if *pass { "PASS" } else { "FAIL" },
            );
            if !pass {
                failed += 1;
            }
        }
        if failed > 0 {
            println!("{failed} check(s) failed");
            Err(AppError::CheckFailed)
        } else {
            println!("all checks passed");
            Ok(())
        }
    }
}

fn orbit_sizes(orbits: &[symmetry::Orbit]) -> Vec<usize> {
    let mut sizes: Vec<usize> = orbits.iter().map(|o| o.size).collect();
    sizes.sort_unstable();
    sizes
}

fn check_s22(t: &mut CheckTable) -> Result<(), AppError> {
    let sc = parse_scenario("2,2")?;
    let verts = scenario::vertices(&sc);
    t.check_eq("s22 vertices", 16, verts.len());
    let dd = hull::facets(&verts, HullMethod::DoubleDescription, &sc)
        .map_err(|e| AppError::Runtime(e.to_string()))?;
    let adj = hull::facets(&verts, HullMethod::AdjacencyDecomposition, &sc)
        .map_err(|e| AppError::Runtime(e.to_string()))?;
    t.check_eq("s22 facets (dd)", 24, dd.len());
    t.check_eq("s22 methods agree", true, dd == adj);
    let group = SymmetryGroup::new(&sc);
    let orbits = symmetry::orbit_decompose(&dd, &group, false)
        .map_err(|e| AppError::Runtime(e.to_string()))?;
    t.check_eq("s22 classes", 2, orbits.len());
    t.check_eq("s22 orbit sizes", vec![8, 16], orbit_sizes(&orbits));
    let chsh_rep = group.canonical_representative(&known::chsh());
    let has_chsh = orbits
        .iter()
        .any(|o| o.size == 8 && o.representative == chsh_rep);
    t.check_eq("s22 nontrivial class is CHSH", true, has_chsh);
    Ok(())
}

fn check_s33(t: &mut CheckTable) -> Result<(), AppError> {
    let sc = parse_scenario("3,3")?;
    let verts = scenario::vertices(&sc);
    let facets = hull::facets(&verts, HullMethod::DoubleDescription, &sc)
        .map_err(|e| AppError::Runtime(e.to_string()))?;
    t.check_eq("s33 facets", 684, facets.len());
    let group = SymmetryGroup::new(&sc);
    let orbits = symmetry::orbit_decompose(&facets, &group, false)
        .map_err(|e| AppError::Runtime(e.to_string()))?;
    t.check_eq("s33 classes", 3, orbits.len());
    t.check_eq("s33 orbit sizes", vec![36, 72, 576], orbit_sizes(&orbits));
    let b33_rep = group.canonical_representative(&known::bell_33());
    let in_576 = orbits
        .iter()
        .any(|o| o.size == 576 && o.representative == b33_rep);
    t.check_eq("s33 576-class holds the 3+3 tensor", true, in_576);
    let pos_is_36 = orbits
        .iter()
        .filter(|o| symmetry::is_positivity_class(o, &group))
        .map(|o| o.size)
        .collect::<Vec<_>>();
    t.check_eq("s33 positivity class size", vec![36], pos_is_36);
    Ok(())
}

fn check_2n(t: &mut CheckTable, n: usize) -> Result<(), AppError> {
    if !(3..=4).contains(&n) {
        return Err(AppError::Usage("the 2n case supports --n 3 or 4".into()));
    }
    let sc = Scenario::new(&[2, n]).map_err(|e| AppError::Usage(e.to_string()))?;
    let verts = scenario::vertices(&sc);
    let facets = hull::facets(&verts, HullMethod::DoubleDescription, &sc)
        .map_err(|e| AppError::Runtime(e.to_string()))?;
    let group = SymmetryGroup::new(&sc);
    let pos_reps: std::collections::BTreeSet<Inequality> = scenario::positivity_inequalities(&sc)
        .iter()
        .map(|p| group.canonical_representative(p))
        .collect();
    let mut non_positivity = 0usize;
    let mut chsh_like = 0usize;
    for f in &facets {
        if pos_reps.contains(&group.canonical_representative(f)) {
            continue;
        }
        non_positivity += 1;
        if known::chsh_embedding(f, &sc).is_some() {
            chsh_like += 1;
        }
    }
    t.check_eq(
        &format!("2,{n} non-positivity facets are CHSH on one B-pair"),
        non_positivity,
        chsh_like,
    );
    t.push(
        &format!("2,{n} facet total"),
        "recorded",
        facets.len(),
        true,
    );
    Ok(())
}

fn check_s222(t: &mut CheckTable) -> Result<(), AppError> {
    let sc = parse_scenario("2,2,2")?;
    let verts = scenario::vertices(&sc);
    let start = Instant::now();
    let adj = hull::facets(&verts, HullMethod::AdjacencyDecomposition, &sc)
        .map_err(|e| AppError::Runtime(e.to_string()))?;
    eprintln!("s222 adjacency method: {} facets in {:.2?}", adj.len(), start.elapsed());
    let start = Instant::now();
    let dd = hull::facets(&verts, HullMethod::DoubleDescription, &sc)
        .map_err(|e| AppError::Runtime(e.to_string()))?;
    eprintln!("s222 double description: {} facets in {:.2?}", dd.len(), start.elapsed());
    t.check_eq("s222 methods agree", true, dd == adj);
    let group = SymmetryGroup::new(&sc);
    let orbits = symmetry::orbit_decompose(&dd, &group, false)
        .map_err(|e| AppError::Runtime(e.to_string()))?;
    t.check_eq("s222 classes", 46, orbits.len());
    t.push("s222 facet total", "recorded", dd.len(), true);
    Ok(())
}

fn check_f2(t: &mut CheckTable) -> Result<(), AppError> {
    let classes = boolean::f2_uniqueness_scan();
    t.check_eq("f2 surviving classes", 1, classes.len());
    let f2_found = classes
        .first()
        .is_some_and(|c| c.iter().any(|f| f.table == boolean::f2_table()));
    t.check_eq("f2 is in the class", true, f2_found);
    Ok(())
}

fn check_quantum(t: &mut CheckTable, seed: u64) -> Result<(), AppError> {
    let options = OptimizeOptions {
        seed,
        ..OptimizeOptions::default()
    };
    let run = |ineq: &Inequality, sc: &Scenario, obj| {
        quantum::optimize_violation(ineq, sc, obj, &options)
            .map_err(|e: quantum::QuantumError| AppError::Runtime(e.to_string()))
    };
    let sc22 = known::chsh_scenario();
    let chsh_value = run(&known::chsh(), &sc22, Objective::Value)?;
    t.check_close(
        "CHSH minimal value",
        2.0 - 2.0 * std::f64::consts::SQRT_2,
        chsh_value.value,
        1e-6,
    );
    let chsh_ratio = run(&known::chsh(), &sc22, Objective::Ratio)?;
    t.check_close("CHSH ratio", 0.585786, chsh_ratio.ratio, 1e-4);

    let sc33 = known::bell_33_scenario();
    let b33_value = run(&known::bell_33(), &sc33, Objective::Value)?;
    t.check_close("3+3 minimal value", -1.0, b33_value.value, 1e-6);
    let b33_ratio = run(&known::bell_33(), &sc33, Objective::Ratio)?;
    t.check_close("3+3 ratio", 0.342997, b33_ratio.ratio, 1e-4);

    let pos = scenario::positivity_inequalities(&sc22).remove(0);
    let pos_value = run(&pos, &sc22, Objective::Value)?;
    t.check_eq("positivity facet unviolated", true, pos_value.value >= -1e-9);
    Ok(())
}

fn cmd_check(case: Option<&str>, n: usize, seed: u64) -> Result<(), AppError> {
    let mut t = CheckTable::new();
    match case {
        Some("s22") => check_s22(&mut t)?,
        Some("s33") => check_s33(&mut t)?,
        Some("2n") => check_2n(&mut t, n)?,
        Some("s222") => check_s222(&mut t)?,
        Some("f2") => check_f2(&mut t)?,
        Some("quantum") => check_quantum(&mut t, seed)?,
        None => {
            check_s22(&mut t)?;
            check_s33(&mut t)?;
            check_2n(&mut t, 3)?;
            check_2n(&mut t, 4)?;
            check_f2(&mut t)?;
            check_quantum(&mut t, seed)?;
            check_s222(&mut t)?;
        }
        Some(other) => {
            return Err(AppError::Usage(format!(
                "unknown case {other:?} (expected s22, s33, 2n, s222, f2 or quantum)"
            )))
        }
    }
    t.finish()
}
