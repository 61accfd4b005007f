//! Acceptance suite: reproduces every published count and number end to end.
//!
//! One test per criterion; each prints a `PASS criterion-N …` line with the
//! computed values. Runtime budgets are asserted with the stated limits.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num::{BigInt, Zero};

use bellpoly::hull::{self, HullMethod};
use bellpoly::quantum::{self, BlochVector, Objective, OptimizeOptions};
use bellpoly::scenario::{self, Scenario};
use bellpoly::symmetry::{self, SymmetryGroup};
use bellpoly::{boolean, known, Inequality};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sizes(orbits: &[symmetry::Orbit]) -> Vec<usize> {
    let mut v: Vec<usize> = orbits.iter().map(|o| o.size).collect();
    v.sort_unstable();
    v
}

#[test]
fn criterion_1_s22_pipeline() {
    let start = Instant::now();
    let sc = Scenario::parse("2,2").unwrap();
    let verts = scenario::vertices(&sc);
    assert_eq!(verts.len(), 16, "vertex count");
    let facets = hull::facets(&verts, HullMethod::DoubleDescription, &sc).unwrap();
    assert_eq!(facets.len(), 24, "facet count");
    let group = SymmetryGroup::new(&sc);
    let orbits = symmetry::orbit_decompose(&facets, &group, false).unwrap();
    assert_eq!(orbits.len(), 2, "orbit classes");
    assert_eq!(sizes(&orbits), vec![8, 16]);
    let chsh_rep = group.canonical_representative(&known::chsh());
    let bell_class = orbits.iter().find(|o| o.size == 8).unwrap();
    assert_eq!(
        bell_class.representative, chsh_rep,
        "the sole nontrivial class is CHSH"
    );
    assert!(symmetry::is_positivity_class(
        orbits.iter().find(|o| o.size == 16).unwrap(),
        &group
    ));
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "runtime {elapsed:.2?}");
    println!("PASS criterion-1 (2,2): 16 vertices, 24 facets, 2 classes (CHSH + positivity) in {elapsed:.2?}");
}

#[test]
fn criterion_2_s33_pipeline() {
    let start = Instant::now();
    let sc = Scenario::parse("3,3").unwrap();
    let verts = scenario::vertices(&sc);
    let facets = hull::facets(&verts, HullMethod::DoubleDescription, &sc).unwrap();
    assert_eq!(facets.len(), 684, "facet count");
    let group = SymmetryGroup::new(&sc);
    let orbits = symmetry::orbit_decompose(&facets, &group, false).unwrap();
    assert_eq!(sizes(&orbits), vec![36, 72, 576], "orbit sizes");
    let b33_rep = group.canonical_representative(&known::bell_33());
    let big = orbits.iter().find(|o| o.size == 576).unwrap();
    assert_eq!(big.representative, b33_rep, "576-class holds the 3+3 tensor");
    let pos = orbits.iter().find(|o| o.size == 36).unwrap();
    assert!(
        symmetry::is_positivity_class(pos, &group),
        "36-class is positivity"
    );
    // orbit sizes times stabilizer orders recover the group order
    for o in &orbits {
        assert_eq!(o.size * o.stabilizer_order, 4608);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "runtime {elapsed:.2?}");
    println!("PASS criterion-2 (3,3): 684 facets in classes 576/72/36 in {elapsed:.2?}");
}

#[test]
fn criterion_3_2n_pipelines_are_chsh_only() {
    for n in [3usize, 4] {
        let start = Instant::now();
        let sc = Scenario::new(&[2, n]).unwrap();
        let verts = scenario::vertices(&sc);
        let facets = hull::facets(&verts, HullMethod::DoubleDescription, &sc).unwrap();
        let group = SymmetryGroup::new(&sc);
        let pos_reps: BTreeSet<Inequality> = scenario::positivity_inequalities(&sc)
            .iter()
            .map(|p| group.canonical_representative(p))
            .collect();
        let mut bell = 0usize;
        for f in &facets {
            if pos_reps.contains(&group.canonical_representative(f)) {
                continue;
            }
            bell += 1;
            let support = known::chsh_embedding(f, &sc);
            assert!(
                support.is_some(),
                "(2,{n}) facet is neither positivity nor CHSH: {f}"
            );
            let (j1, j2) = support.unwrap();
            assert!(j1 >= 1 && j2 <= n && j1 < j2, "B-support within range");
        }
        let elapsed = start.elapsed();
        assert!(elapsed < Duration::from_secs(60), "runtime {elapsed:.2?}");
        println!(
            "PASS criterion-3 (2,{n}): all {bell} non-positivity facets of {} are CHSH on one B-pair in {elapsed:.2?}",
            facets.len()
        );
    }
}

#[test]
fn criterion_4_s222_pipeline() {
    let sc = Scenario::parse("2,2,2").unwrap();
    let verts = scenario::vertices(&sc);

    let start_adj = Instant::now();
    let adj = hull::facets(&verts, HullMethod::AdjacencyDecomposition, &sc).unwrap();
    let adj_time = start_adj.elapsed();
    assert!(
        adj_time < Duration::from_secs(600),
        "adjacency runtime {adj_time:.2?}"
    );

    let start_dd = Instant::now();
    let dd = hull::facets(&verts, HullMethod::DoubleDescription, &sc).unwrap();
    let dd_time = start_dd.elapsed();
    assert!(
        dd_time < Duration::from_secs(7200),
        "baseline runtime {dd_time:.2?}"
    );

    assert_eq!(dd, adj, "methods agree on the complete facet list");
    // the paper states only the class count; the total is computed here and
    // recorded (it reproduces across both methods and across runs)
    assert_eq!(dd.len(), 53856, "recorded total facet count");

    let group = SymmetryGroup::new(&sc);
    let orbits = symmetry::orbit_decompose(&dd, &group, false).unwrap();
    assert_eq!(orbits.len(), 46, "orbit class count");
    assert_eq!(orbits.iter().map(|o| o.size).sum::<usize>(), dd.len());
    for o in &orbits {
        assert_eq!(o.size * o.stabilizer_order, group.order());
    }
    println!(
        "PASS criterion-4 (2,2,2): 46 classes over {} facets (adj {adj_time:.2?}, dd {dd_time:.2?})",
        dd.len()
    );
}

#[test]
fn criterion_5_f2_scan() {
    let start = Instant::now();
    let classes = boolean::f2_uniqueness_scan();
    assert_eq!(classes.len(), 1, "exactly one surviving class");
    assert!(
        classes[0].iter().any(|f| f.table == boolean::f2_table()),
        "f2 belongs to the class"
    );
    for form in &classes[0] {
        assert!(form.has_no_cross_terms());
        assert!(form.depends_on_all_arguments());
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "runtime {elapsed:.2?}");
    println!(
        "PASS criterion-5 f2 scan: 1 class of {} functions over 65536 in {elapsed:.2?}",
        classes[0].len()
    );
}

#[test]
fn criterion_6_quantum_numbers() {
    let start = Instant::now();
    let options = OptimizeOptions::default();

    // 3+3 inequality: extremal violation -1 at the published geometry
    let sc33 = known::bell_33_scenario();
    let res = quantum::optimize_violation(&known::bell_33(), &sc33, Objective::Value, &options)
        .unwrap();
    assert!((res.value - (-1.0)).abs() < 1e-6, "3+3 value {}", res.value);
    let b = &res.config.b_vectors;
    let diff = [b[0].x - b[1].x, b[0].y - b[1].y, b[0].z - b[1].z];
    let sum = [b[0].x + b[1].x, b[0].y + b[1].y, b[0].z + b[1].z];
    let diff_norm = (diff[0] * diff[0] + diff[1] * diff[1] + diff[2] * diff[2]).sqrt();
    let sum_norm = (sum[0] * sum[0] + sum[1] * sum[1] + sum[2] * sum[2]).sqrt();
    // |b1-b2| = 2cos(pi/3) = 1 and b3 orthogonal to b1+b2 (the paper's
    // alpha = pi/3, beta = pi/2), rotation-invariant statements
    assert!((diff_norm - 1.0).abs() < 1e-4, "|b1-b2| = {diff_norm}");
    let cos_beta = (sum[0] * b[2].x + sum[1] * b[2].y + sum[2] * b[2].z) / sum_norm;
    assert!(cos_beta.abs() < 1e-4, "cos(beta) = {cos_beta}");
    // the a-side attains the closed-form inner minimum for these b's
    let closed = quantum::bell_33_inner_minimum(&b[0], &b[1], &b[2]).unwrap();
    assert!(
        (res.value - closed).abs() < 1e-9,
        "inner optimum attained: value {} vs closed form {closed}",
        res.value
    );

    // ratio objectives
    let res =
        quantum::optimize_violation(&known::bell_33(), &sc33, Objective::Ratio, &options).unwrap();
    assert!(
        (res.ratio - 0.342997).abs() < 1e-4,
        "3+3 ratio {}",
        res.ratio
    );
    let sc22 = known::chsh_scenario();
    let res =
        quantum::optimize_violation(&known::chsh(), &sc22, Objective::Ratio, &options).unwrap();
    assert!(
        (res.ratio - 0.585786).abs() < 1e-4,
        "CHSH ratio {}",
        res.ratio
    );

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "runtime {elapsed:.2?}");
    println!(
        "PASS criterion-6 quantum: 3+3 value -1 at the published geometry, ratios 0.585786 / 0.342997 in {elapsed:.2?}"
    );
}

// ---------------------------------------------------------------------------
// criterion 7: property suites
// ---------------------------------------------------------------------------

#[test]
fn criterion_7a_facet_certificates_everywhere() {
    let start = Instant::now();
    let mut checked = 0usize;
    for spec in ["2,2", "2,3", "3,3"] {
        let sc = Scenario::parse(spec).unwrap();
        let verts = scenario::vertices(&sc);
        let facets = hull::facets(&verts, HullMethod::DoubleDescription, &sc).unwrap();
        let dim = scenario::polytope_dimension(&verts);
        for f in &facets {
            let cert = hull::verify_facet(&verts, f);
            assert!(cert.min_value.is_zero(), "{spec}: min must be exactly 0");
            assert_eq!(cert.tight_rank, dim - 1, "{spec}: tight rank");
            assert!(cert.is_facet);
        }
        checked += facets.len();
        // positivity inequalities all appear in the facet list
        let facet_set: BTreeSet<&Inequality> = facets.iter().collect();
        for p in scenario::positivity_inequalities(&sc) {
            assert!(facet_set.contains(&p), "{spec}: positivity facet emitted");
        }
    }
    println!(
        "PASS criterion-7a certificates: {checked} facets certified (min 0, rank dim-1) in {:.2?}",
        start.elapsed()
    );
}

#[test]
fn criterion_7b_s222_certificates() {
    let start = Instant::now();
    let sc = Scenario::parse("2,2,2").unwrap();
    let verts = scenario::vertices(&sc);
    let facets = hull::facets(&verts, HullMethod::AdjacencyDecomposition, &sc).unwrap();
    let failures = hull::verify_all(&verts, &facets);
    assert!(failures.is_empty(), "uncertified facets: {failures:?}");
    let facet_set: BTreeSet<&Inequality> = facets.iter().collect();
    for p in scenario::positivity_inequalities(&sc) {
        assert!(facet_set.contains(&p), "positivity facet emitted");
    }
    println!(
        "PASS criterion-7b certificates: all {} (2,2,2) facets certified in {:.2?}",
        facets.len(),
        start.elapsed()
    );
}

#[test]
fn criterion_7c_group_action_laws_and_vertex_invariance() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for spec in ["2,2", "3,3", "2,2,2"] {
        let sc = Scenario::parse(spec).unwrap();
        let group = SymmetryGroup::new(&sc);
        let verts = scenario::vertices(&sc);
        let vert_set: BTreeSet<_> = verts.iter().cloned().collect();
        let some_facets = scenario::positivity_inequalities(&sc);
        for _ in 0..25 {
            let g = &group.elements()[rng.gen_range(0..group.order())];
            let h = &group.elements()[rng.gen_range(0..group.order())];
            let x = &some_facets[rng.gen_range(0..some_facets.len())];
            // associativity of the action
            let lhs = symmetry::apply(&g.compose(h), x, &sc).unwrap();
            let rhs =
                symmetry::apply(g, &symmetry::apply(h, x, &sc).unwrap(), &sc).unwrap();
            assert_eq!(lhs, rhs, "{spec}: action law");
            // identity law
            let id = bellpoly::symmetry::SymmetryElement::identity(&sc);
            assert_eq!(symmetry::apply(&id, x, &sc).unwrap(), *x);
            // vertex set invariance
            let mapped: BTreeSet<_> = verts
                .iter()
                .map(|v| symmetry::apply_to_vertex(g, v, &sc).unwrap())
                .collect();
            assert_eq!(mapped, vert_set, "{spec}: vertex invariance");
            // canonical representative is constant on orbits
            let moved = symmetry::apply(g, x, &sc).unwrap();
            assert_eq!(
                group.canonical_representative(&moved),
                group.canonical_representative(x),
                "{spec}: canonical form"
            );
        }
    }
    println!(
        "PASS criterion-7c group action laws and vertex invariance on random elements in {:.2?}",
        start.elapsed()
    );
}

#[test]
fn criterion_7d_gradient_matches_finite_differences() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cases = [
        (known::chsh(), known::chsh_scenario()),
        (known::bell_33(), known::bell_33_scenario()),
    ];
    for (ineq, sc) in &cases {
        let nangles = 2 * sc.site_counts().iter().sum::<usize>();
        for objective in [Objective::Value, Objective::Ratio] {
            for _ in 0..25 {
                let x: Vec<f64> = (0..nangles)
                    .map(|k| {
                        if k % 2 == 0 {
                            rng.gen_range(0.3..std::f64::consts::PI - 0.3)
                        } else {
                            rng.gen_range(0.0..std::f64::consts::TAU)
                        }
                    })
                    .collect();
                let (_, grad) =
                    quantum::objective_and_gradient(ineq, sc, objective, &x).unwrap();
                for k in 0..nangles {
                    let h = 1e-6;
                    let mut xp = x.clone();
                    xp[k] += h;
                    let mut xm = x.clone();
                    xm[k] -= h;
                    let (fp, _) =
                        quantum::objective_and_gradient(ineq, sc, objective, &xp).unwrap();
                    let (fm, _) =
                        quantum::objective_and_gradient(ineq, sc, objective, &xm).unwrap();
                    let fd = (fp - fm) / (2.0 * h);
                    let scale = grad[k].abs().max(fd.abs()).max(1.0);
                    assert!(
                        (grad[k] - fd).abs() / scale < 1e-5,
                        "{objective:?} d{k}: {} vs {fd}",
                        grad[k]
                    );
                }
            }
        }
    }
    println!(
        "PASS criterion-7d analytic gradients match central differences in {:.2?}",
        start.elapsed()
    );
}

/// Monte-Carlo inner-minimum oracle: shrinking random search over the `a`
/// angles with the `b` side held fixed, using only the generic tensor
/// evaluation path (never the closed form).
///
/// The objective is separately linear in each `a_i`, so refining one
/// vector's two angles at a time (with full-tensor evaluation throughout)
/// converges to the joint minimum.
fn mc_inner_minimum(b: [BlochVector; 3], rng: &mut ChaCha8Rng) -> f64 {
    let sc = known::bell_33_scenario();
    let ineq = known::bell_33();
    let eval = |angles: &[f64; 6]| -> f64 {
        let a_vectors = (0..3)
            .map(|i| BlochVector::from_angles(angles[2 * i], angles[2 * i + 1]))
            .collect();
        let config = quantum::MeasurementConfig {
            a_vectors,
            b_vectors: b.to_vec(),
        };
        let tensor = quantum::singlet_correlation_tensor(&config, &sc).unwrap();
        quantum::evaluate(&ineq, &tensor).unwrap()
    };
    let mut x = [0.0f64; 6];
    for i in 0..3 {
        x[2 * i] = rng.gen_range(-1.0f64..1.0).acos();
        x[2 * i + 1] = rng.gen_range(0.0..std::f64::consts::TAU);
    }
    let mut best = eval(&x);
    for _pass in 0..2 {
        for i in 0..3 {
            // coarse global sampling of this vector's two angles
            for _ in 0..400 {
                let mut trial = x;
                trial[2 * i] = rng.gen_range(-1.0f64..1.0).acos();
                trial[2 * i + 1] = rng.gen_range(0.0..std::f64::consts::TAU);
                let v = eval(&trial);
                if v < best {
                    best = v;
                    x = trial;
                }
            }
            // shrinking local refinement
            let mut radius = 0.5f64;
            for _ in 0..70 {
                for _ in 0..25 {
                    let mut trial = x;
                    trial[2 * i] += radius * rng.gen_range(-1.0..1.0);
                    trial[2 * i + 1] += radius * rng.gen_range(-1.0..1.0);
                    let v = eval(&trial);
                    if v < best {
                        best = v;
                        x = trial;
                    }
                }
                radius *= 0.8;
            }
        }
    }
    best
}

#[test]
fn criterion_7e_closed_form_matches_monte_carlo_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..100 {
        let mut random_unit = || {
            let z: f64 = rng.gen_range(-1.0..1.0);
            let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = (1.0 - z * z).sqrt();
            BlochVector::new(r * phi.cos(), r * phi.sin(), z).unwrap()
        };
        let b = [random_unit(), random_unit(), random_unit()];
        let closed = quantum::bell_33_inner_minimum(&b[0], &b[1], &b[2]).unwrap();
        let sampled = mc_inner_minimum(b, &mut rng);
        assert!(
            (closed - sampled).abs() < 1e-6,
            "trial {trial}: closed {closed} vs sampled {sampled}"
        );
        // the sampled minimum can never undercut the true closed form
        assert!(sampled >= closed - 1e-9);
    }
    println!(
        "PASS criterion-7e closed-form inner minimum matches the Monte-Carlo oracle on 100 instances in {:.2?}",
        start.elapsed()
    );
}

#[test]
fn criterion_7f_classical_tensors_satisfy_all_facets() {
    // deterministic-strategy tensors evaluate nonnegatively on every facet
    let sc = Scenario::parse("2,2").unwrap();
    let verts = scenario::vertices(&sc);
    let facets = hull::facets(&verts, HullMethod::DoubleDescription, &sc).unwrap();
    for v in &verts {
        let tensor: Vec<f64> = v.entries().iter().map(|&e| e as f64).collect();
        for f in &facets {
            let val = quantum::evaluate(f, &tensor).unwrap();
            assert!(val >= 0.0, "facet {f} negative on classical tensor");
        }
    }
    // and global rotation invariance of evaluate and ratio
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (ineq, sc) = (known::chsh(), known::chsh_scenario());
    for _ in 0..20 {
        let config = quantum::MeasurementConfig {
            a_vectors: (0..2)
                .map(|_| {
                    BlochVector::from_angles(
                        rng.gen_range(0.0..std::f64::consts::PI),
                        rng.gen_range(0.0..std::f64::consts::TAU),
                    )
                })
                .collect(),
            b_vectors: (0..2)
                .map(|_| {
                    BlochVector::from_angles(
                        rng.gen_range(0.0..std::f64::consts::PI),
                        rng.gen_range(0.0..std::f64::consts::TAU),
                    )
                })
                .collect(),
        };
        let axis_phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let axis_z: f64 = rng.gen_range(-1.0f64..1.0);
        let axis = [
            (1.0 - axis_z * axis_z).sqrt() * axis_phi.cos(),
            (1.0 - axis_z * axis_z).sqrt() * axis_phi.sin(),
            axis_z,
        ];
        let angle: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let rotate = |v: &BlochVector| -> BlochVector {
            // Rodrigues rotation
            let (s, c) = angle.sin_cos();
            let kv = [
                axis[1] * v.z - axis[2] * v.y,
                axis[2] * v.x - axis[0] * v.z,
                axis[0] * v.y - axis[1] * v.x,
            ];
            let kdotv = axis[0] * v.x + axis[1] * v.y + axis[2] * v.z;
            let out = [
                v.x * c + kv[0] * s + axis[0] * kdotv * (1.0 - c),
                v.y * c + kv[1] * s + axis[1] * kdotv * (1.0 - c),
                v.z * c + kv[2] * s + axis[2] * kdotv * (1.0 - c),
            ];
            let n = (out[0] * out[0] + out[1] * out[1] + out[2] * out[2]).sqrt();
            BlochVector::new(out[0] / n, out[1] / n, out[2] / n).unwrap()
        };
        let rotated = quantum::MeasurementConfig {
            a_vectors: config.a_vectors.iter().map(&rotate).collect(),
            b_vectors: config.b_vectors.iter().map(&rotate).collect(),
        };
        let t1 = quantum::singlet_correlation_tensor(&config, &sc).unwrap();
        let t2 = quantum::singlet_correlation_tensor(&rotated, &sc).unwrap();
        let e1 = quantum::evaluate(&ineq, &t1).unwrap();
        let e2 = quantum::evaluate(&ineq, &t2).unwrap();
        assert!((e1 - e2).abs() < 1e-10, "rotation changes evaluate");
        let r1 = quantum::ratio(&ineq, &t1).unwrap();
        let r2 = quantum::ratio(&ineq, &t2).unwrap();
        assert!((r1 - r2).abs() < 1e-10, "rotation changes ratio");
    }
    println!("PASS criterion-7f classical validity and rotation invariance");
}

#[test]
fn determinism_across_worker_counts() {
    // hull output must not depend on the rayon pool size
    let sc = Scenario::parse("3,3").unwrap();
    let verts = scenario::vertices(&sc);
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| hull::facets(&verts, HullMethod::DoubleDescription, &sc).unwrap());
    let multi = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| hull::facets(&verts, HullMethod::DoubleDescription, &sc).unwrap());
    assert_eq!(single, multi);
    println!("PASS determinism: identical facet lists for 1 and 4 workers");
}

#[test]
fn s33_orbit_divisibility_products() {
    // 576*8 = 72*64 = 36*128 = 4608
    let sc = Scenario::parse("3,3").unwrap();
    let verts = scenario::vertices(&sc);
    let facets = hull::facets(&verts, HullMethod::DoubleDescription, &sc).unwrap();
    let group = SymmetryGroup::new(&sc);
    let orbits = symmetry::orbit_decompose(&facets, &group, false).unwrap();
    let mut pairs: Vec<(usize, usize)> =
        orbits.iter().map(|o| (o.size, o.stabilizer_order)).collect();
    pairs.sort();
    assert_eq!(pairs, vec![(36, 128), (72, 64), (576, 8)]);
    println!("PASS orbit divisibility: 36*128 = 72*64 = 576*8 = 4608");
}

#[test]
fn dd_soundness_exact_zero_minimum() {
    // every returned inequality is tight with integer minimum exactly 0
    for spec in ["2,2", "2,3"] {
        let sc = Scenario::parse(spec).unwrap();
        let verts = scenario::vertices(&sc);
        for f in hull::facets(&verts, HullMethod::DoubleDescription, &sc).unwrap() {
            let min = verts
                .iter()
                .map(|v| f.evaluate_vertex(v))
                .min()
                .unwrap();
            assert_eq!(min, BigInt::zero(), "{spec}: {f}");
        }
    }
    println!("PASS soundness: exact zero minima on (2,2) and (2,3)");
}
