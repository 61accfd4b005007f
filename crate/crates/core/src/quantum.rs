//! Singlet-state evaluation and violation optimization for two-site
//! inequalities.
//!
//! Every two-valued qubit observable is `a·σ` for a unit Bloch vector `a`.
//! On the two-qubit singlet the single-site expectations vanish and the
//! pair correlations are `E(A_i B_j) = -a_i·b_j`, so an inequality value is
//! a smooth function of the measurement directions alone. The optimizer
//! works in spherical angles: for the raw inequality value it alternates
//! exact closed-form updates of one side against the other (each side's
//! optimum is a normalized coefficient-weighted sum of the opposite side),
//! and for the variance-normalized ratio it runs BFGS with the analytic
//! gradient. Both use seeded multi-start.

use num::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::inequality::Inequality;
use crate::scenario::Scenario;

const UNIT_TOLERANCE: f64 = 1e-12;
/// Inner-step defining vectors below this norm count as degenerate.
const DEGENERATE_NORM: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuantumError {
    #[error("Bloch vector is not unit length: |v|^2 = {0}")]
    NonUnitVector(f64),
    #[error("scenario must have exactly 2 sites, got {0}")]
    NotTwoSite(usize),
    #[error("configuration has {got_a}+{got_b} vectors, scenario needs {want_a}+{want_b}")]
    ConfigMismatch {
        want_a: usize,
        want_b: usize,
        got_a: usize,
        got_b: usize,
    },
    #[error("inequality length {got} does not match tensor length {expected}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("all weight sits on deterministic coordinates; the ratio denominator is zero")]
    ZeroVariance,
}

/// Unit vector on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, QuantumError> {
        let n2 = x * x + y * y + z * z;
        if (n2 - 1.0).abs() > UNIT_TOLERANCE {
            return Err(QuantumError::NonUnitVector(n2));
        }
        Ok(Self { x, y, z })
    }

    /// `(sinθ cosφ, sinθ sinφ, cosθ)`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self {
            x: theta.sin() * phi.cos(),
            y: theta.sin() * phi.sin(),
            z: theta.cos(),
        }
    }

    pub fn to_angles(self) -> (f64, f64) {
        (self.z.clamp(-1.0, 1.0).acos(), self.y.atan2(self.x))
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    fn add(self, other: Self) -> [f64; 3] {
        [self.x + other.x, self.y + other.y, self.z + other.z]
    }

    fn sub(self, other: Self) -> [f64; 3] {
        [self.x - other.x, self.y - other.y, self.z - other.z]
    }
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// A unit vector orthogonal to `v`, used for degenerate inner steps.
fn orthogonal_unit(v: BlochVector) -> BlochVector {
    let candidate = if v.x.abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let d = candidate[0] * v.x + candidate[1] * v.y + candidate[2] * v.z;
    let w = [candidate[0] - d * v.x, candidate[1] - d * v.y, candidate[2] - d * v.z];
    let n = norm3(w);
    BlochVector {
        x: w[0] / n,
        y: w[1] / n,
        z: w[2] / n,
    }
}

/// Measurement directions for the two sites.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementConfig {
    pub a_vectors: Vec<BlochVector>,
    pub b_vectors: Vec<BlochVector>,
}

impl MeasurementConfig {
    fn check(&self, scenario: &Scenario) -> Result<(usize, usize), QuantumError> {
        let counts = scenario.site_counts();
        if counts.len() != 2 {
            return Err(QuantumError::NotTwoSite(counts.len()));
        }
        if self.a_vectors.len() != counts[0] || self.b_vectors.len() != counts[1] {
            return Err(QuantumError::ConfigMismatch {
                want_a: counts[0],
                want_b: counts[1],
                got_a: self.a_vectors.len(),
                got_b: self.b_vectors.len(),
            });
        }
        Ok((counts[0], counts[1]))
    }
}

/// Outcome of a violation optimization.
#[derive(Debug, Clone)]
pub struct ViolationResult {
    pub config: MeasurementConfig,
    /// Inequality value `E` at the configuration; negative means violation.
    pub value: f64,
    /// `|E| / ΔE` at the configuration.
    pub ratio: f64,
    /// Gradient norm of the objective reached the tolerance.
    pub converged: bool,
}

/// What `optimize_violation` should extremize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Minimize the raw inequality value `E`.
    Value,
    /// Maximize the violation strength `-E / ΔE`.
    Ratio,
}

/// Multi-start optimizer knobs; the defaults reproduce the published runs.
#[derive(Debug, Clone)]
pub struct OptimizeOptions {
    pub seed: u64,
    pub restarts: usize,
    pub max_iterations: usize,
    pub gradient_tolerance: f64,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 100,
            max_iterations: 10_000,
            gradient_tolerance: 1e-9,
        }
    }
}

/// Full singlet correlation tensor for a configuration: constant entry 1,
/// single-observable entries 0, pair entries `-a_i·b_j`.
pub fn singlet_correlation_tensor(
    config: &MeasurementConfig,
    scenario: &Scenario,
) -> Result<Vec<f64>, QuantumError> {
    let (na, nb) = config.check(scenario)?;
    let mut tensor = vec![0.0; scenario.dim()];
    tensor[0] = 1.0;
    for i in 1..=na {
        for j in 1..=nb {
            tensor[i * (nb + 1) + j] = -config.a_vectors[i - 1].dot(config.b_vectors[j - 1]);
        }
    }
    Ok(tensor)
}

/// `Σ α_J · tensor_J`; negative on a valid inequality certifies violation.
pub fn evaluate(ineq: &Inequality, tensor: &[f64]) -> Result<f64, QuantumError> {
    if ineq.len() != tensor.len() {
        return Err(QuantumError::ShapeMismatch {
            expected: tensor.len(),
            got: ineq.len(),
        });
    }
    Ok(ineq
        .coeffs()
        .iter()
        .zip(tensor)
        .map(|(c, &t)| c.to_f64().expect("small coefficient") * t)
        .sum())
}

/// `|E| / ΔE` with per-coordinate variances `1 - tensor²` (0 for the
/// constant coordinate) weighted by the squared coefficients.
///
/// Squaring the coefficients is what standard error propagation for
/// independently estimated coordinates requires, and it is the weighting
/// that reproduces the published CHSH ratio `2 - √2`.
pub fn ratio(ineq: &Inequality, tensor: &[f64]) -> Result<f64, QuantumError> {
    let value = evaluate(ineq, tensor)?;
    let mut var = 0.0;
    for (j, (c, &t)) in ineq.coeffs().iter().zip(tensor).enumerate() {
        if j == 0 {
            continue;
        }
        let cf = c.to_f64().expect("small coefficient");
        var += cf * cf * (1.0 - t * t);
    }
    if var <= 0.0 {
        return Err(QuantumError::ZeroVariance);
    }
    Ok(value.abs() / var.sqrt())
}

/// Closed-form inner minimum of the 3+3 inequality over the `a` side:
/// `4 - |b1-b2| - |b1+b2+b3| - |b1+b2-b3|`, attained at
/// `a1 ∝ b1+b2+b3`, `a2 ∝ b1+b2-b3`, `a3 ∝ b1-b2`.
pub fn bell_33_inner_minimum(
    b1: &BlochVector,
    b2: &BlochVector,
    b3: &BlochVector,
) -> Result<f64, QuantumError> {
    for b in [b1, b2, b3] {
        let n2 = b.x * b.x + b.y * b.y + b.z * b.z;
        if (n2 - 1.0).abs() > UNIT_TOLERANCE {
            return Err(QuantumError::NonUnitVector(n2));
        }
    }
    let sum = b1.add(*b2);
    let diff = b1.sub(*b2);
    // (b1+b2) ⟂ (b1-b2) for unit vectors; the angle split below relies on it
    let cross_check = sum[0] * diff[0] + sum[1] * diff[1] + sum[2] * diff[2];
    assert!(
        cross_check.abs() <= 1e-10,
        "unit-vector orthogonality violated: {cross_check}"
    );
    let plus = [sum[0] + b3.x, sum[1] + b3.y, sum[2] + b3.z];
    let minus = [sum[0] - b3.x, sum[1] - b3.y, sum[2] - b3.z];
    Ok(4.0 - norm3(diff) - norm3(plus) - norm3(minus))
}

// ---------------------------------------------------------------------------
// objective machinery over spherical angles
// ---------------------------------------------------------------------------

/// Pair-coefficient view of a two-site inequality, as f64.
struct PairTensor {
    na: usize,
    nb: usize,
    /// `(na+1) x (nb+1)` row-major; `alpha[0]` is the constant term.
    alpha: Vec<f64>,
    /// fixed variance contribution of the single-observable coordinates
    singles_var: f64,
}

impl PairTensor {
    fn new(ineq: &Inequality, scenario: &Scenario) -> Result<Self, QuantumError> {
        let counts = scenario.site_counts();
        if counts.len() != 2 {
            return Err(QuantumError::NotTwoSite(counts.len()));
        }
        if ineq.len() != scenario.dim() {
            return Err(QuantumError::ShapeMismatch {
                expected: scenario.dim(),
                got: ineq.len(),
            });
        }
        let (na, nb) = (counts[0], counts[1]);
        let alpha: Vec<f64> = ineq
            .coeffs()
            .iter()
            .map(|c| c.to_f64().expect("small coefficient"))
            .collect();
        let mut singles_var = 0.0;
        for i in 1..=na {
            singles_var += alpha[i * (nb + 1)] * alpha[i * (nb + 1)];
        }
        for j in 1..=nb {
            singles_var += alpha[j] * alpha[j];
        }
        Ok(Self {
            na,
            nb,
            alpha,
            singles_var,
        })
    }

    #[inline]
    fn pair(&self, i: usize, j: usize) -> f64 {
        self.alpha[i * (self.nb + 1) + j]
    }

    fn constant(&self) -> f64 {
        self.alpha[0]
    }

    /// `E = α00 - Σ αij a_i·b_j` on the singlet.
    fn value(&self, a: &[BlochVector], b: &[BlochVector]) -> f64 {
        let mut v = self.constant();
        for i in 1..=self.na {
            for j in 1..=self.nb {
                v -= self.pair(i, j) * a[i - 1].dot(b[j - 1]);
            }
        }
        v
    }

    /// `ΔE² = Σ singles α² + Σ αij²(1 - (a_i·b_j)²)`.
    fn variance(&self, a: &[BlochVector], b: &[BlochVector]) -> f64 {
        let mut s = self.singles_var;
        for i in 1..=self.na {
            for j in 1..=self.nb {
                let c = a[i - 1].dot(b[j - 1]);
                let alpha = self.pair(i, j);
                s += alpha * alpha * (1.0 - c * c);
            }
        }
        s
    }

    /// True when some pair or single coefficient is nonzero.
    fn has_statistical_weight(&self) -> bool {
        self.singles_var > 0.0
            || (1..=self.na).any(|i| (1..=self.nb).any(|j| self.pair(i, j) != 0.0))
    }
}

fn config_from_angles(x: &[f64], na: usize, nb: usize) -> (Vec<BlochVector>, Vec<BlochVector>) {
    let a = (0..na)
        .map(|i| BlochVector::from_angles(x[2 * i], x[2 * i + 1]))
        .collect();
    let b = (0..nb)
        .map(|j| BlochVector::from_angles(x[2 * na + 2 * j], x[2 * na + 2 * j + 1]))
        .collect();
    (a, b)
}

fn angles_from_config(a: &[BlochVector], b: &[BlochVector]) -> Vec<f64> {
    let mut x = Vec::with_capacity(2 * (a.len() + b.len()));
    for v in a.iter().chain(b) {
        let (t, p) = v.to_angles();
        x.push(t);
        x.push(p);
    }
    x
}

/// Derivatives of a Bloch vector with respect to its spherical angles.
#[inline]
fn sphere_jacobian(theta: f64, phi: f64) -> ([f64; 3], [f64; 3]) {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    ([ct * cp, ct * sp, -st], [-st * sp, st * cp, 0.0])
}

/// The minimized objective and its analytic gradient in angle coordinates.
///
/// Angles are laid out `[θ_a1, φ_a1, …, θ_b1, φ_b1, …]`. For
/// [`Objective::Value`] the function is the inequality value `E`; for
/// [`Objective::Ratio`] it is `E/ΔE` (whose minimum is the maximal
/// violation ratio, negated). Exposed so external test suites can check the
/// gradient against finite differences.
pub fn objective_and_gradient(
    ineq: &Inequality,
    scenario: &Scenario,
    objective: Objective,
    x: &[f64],
) -> Result<(f64, Vec<f64>), QuantumError> {
    let tensor = PairTensor::new(ineq, scenario)?;
    if objective == Objective::Ratio && !tensor.has_statistical_weight() {
        return Err(QuantumError::ZeroVariance);
    }
    Ok(eval_objective(&tensor, objective, x))
}

fn eval_objective(tensor: &PairTensor, objective: Objective, x: &[f64]) -> (f64, Vec<f64>) {
    let (na, nb) = (tensor.na, tensor.nb);
    let (a, b) = config_from_angles(x, na, nb);
    // dE/da_i = -w_i,  dS/da_i = -2 u_i  (and symmetrically for b_j)
    let mut w_a = vec![[0.0; 3]; na];
    let mut w_b = vec![[0.0; 3]; nb];
    let mut u_a = vec![[0.0; 3]; na];
    let mut u_b = vec![[0.0; 3]; nb];
    for i in 0..na {
        for j in 0..nb {
            let alpha = tensor.pair(i + 1, j + 1);
            if alpha == 0.0 {
                continue;
            }
            let c = a[i].dot(b[j]);
            let (av, bv) = (a[i], b[j]);
            for (k, (&acomp, &bcomp)) in [av.x, av.y, av.z]
                .iter()
                .zip(&[bv.x, bv.y, bv.z])
                .enumerate()
            {
                w_a[i][k] += alpha * bcomp;
                w_b[j][k] += alpha * acomp;
                u_a[i][k] += alpha * alpha * c * bcomp;
                u_b[j][k] += alpha * alpha * c * acomp;
            }
        }
    }
    let e = tensor.value(&a, &b);
    let mut grad = vec![0.0; x.len()];
    let mut write_grad = |offset: usize, vectors: &[BlochVector], w: &[[f64; 3]], u: &[[f64; 3]], de_scale: f64, ds_scale: f64| {
        for (k, _v) in vectors.iter().enumerate() {
            let (jt, jp) = sphere_jacobian(x[offset + 2 * k], x[offset + 2 * k + 1]);
            let dot3 = |m: &[f64; 3], n: &[f64; 3]| m[0] * n[0] + m[1] * n[1] + m[2] * n[2];
            grad[offset + 2 * k] = de_scale * -dot3(&w[k], &jt) + ds_scale * -2.0 * dot3(&u[k], &jt);
            grad[offset + 2 * k + 1] =
                de_scale * -dot3(&w[k], &jp) + ds_scale * -2.0 * dot3(&u[k], &jp);
        }
    };
    match objective {
        Objective::Value => {
            write_grad(0, &a, &w_a, &u_a, 1.0, 0.0);
            write_grad(2 * na, &b, &w_b, &u_b, 1.0, 0.0);
            (e, grad)
        }
        Objective::Ratio => {
            // minimize g = E / sqrt(S); dg = dE/sqrt(S) - E dS / (2 S^{3/2})
            let s = tensor.variance(&a, &b).max(1e-300);
            let sqrt_s = s.sqrt();
            let de_scale = 1.0 / sqrt_s;
            let ds_scale = -e / (2.0 * s * sqrt_s);
            write_grad(0, &a, &w_a, &u_a, de_scale, ds_scale);
            write_grad(2 * na, &b, &w_b, &u_b, de_scale, ds_scale);
            (e / sqrt_s, grad)
        }
    }
}

// ---------------------------------------------------------------------------
// local solvers
// ---------------------------------------------------------------------------

/// Alternating exact minimization of the value objective.
///
/// With the other side fixed, each `a_i` enters `E` linearly through
/// `-a_i·w_i`, so its optimum is `w_i/|w_i|`; same for the `b_j`. Each
/// defining vector below the degeneracy threshold is replaced by a unit
/// vector orthogonal to `b_1`, which attains the limiting value.
fn alternating_minimize(
    tensor: &PairTensor,
    mut a: Vec<BlochVector>,
    mut b: Vec<BlochVector>,
    max_rounds: usize,
) -> (Vec<BlochVector>, Vec<BlochVector>, f64) {
    let (na, nb) = (tensor.na, tensor.nb);
    let mut last = f64::INFINITY;
    for _ in 0..max_rounds {
        for i in 0..na {
            let mut w = [0.0; 3];
            for j in 0..nb {
                let alpha = tensor.pair(i + 1, j + 1);
                w[0] += alpha * b[j].x;
                w[1] += alpha * b[j].y;
                w[2] += alpha * b[j].z;
            }
            let n = norm3(w);
            a[i] = if n < DEGENERATE_NORM {
                orthogonal_unit(b[0])
            } else {
                BlochVector {
                    x: w[0] / n,
                    y: w[1] / n,
                    z: w[2] / n,
                }
            };
        }
        for j in 0..nb {
            let mut u = [0.0; 3];
            for i in 0..na {
                let alpha = tensor.pair(i + 1, j + 1);
                u[0] += alpha * a[i].x;
                u[1] += alpha * a[i].y;
                u[2] += alpha * a[i].z;
            }
            let n = norm3(u);
            b[j] = if n < DEGENERATE_NORM {
                orthogonal_unit(b[0])
            } else {
                BlochVector {
                    x: u[0] / n,
                    y: u[1] / n,
                    z: u[2] / n,
                }
            };
        }
        let v = tensor.value(&a, &b);
        if (last - v).abs() < 1e-15 {
            last = v;
            break;
        }
        last = v;
    }
    (a, b, last)
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Final refinement when objective differences fall below f64 resolution:
/// step along `-g` accepting whatever shrinks the gradient norm itself.
fn gradient_polish<F>(f: &F, x: &mut Vec<f64>, fx: &mut f64, g: &mut Vec<f64>, gtol: f64)
where
    F: Fn(&[f64]) -> (f64, Vec<f64>),
{
    let mut t = 1e-3;
    let mut gnorm = l2(g);
    for _ in 0..400 {
        if gnorm <= gtol || t < 1e-18 {
            break;
        }
        let mut improved = false;
        for scale in [4.0, 1.0, 0.25] {
            let tt = t * scale;
            let xt: Vec<f64> = x.iter().zip(g.iter()).map(|(xi, gi)| xi - tt * gi).collect();
            let (ft, gt) = f(&xt);
            let gn = l2(&gt);
            if gn < gnorm {
                *x = xt;
                *fx = ft;
                *g = gt;
                gnorm = gn;
                t = tt;
                improved = true;
                break;
            }
        }
        if !improved {
            t *= 0.125;
        }
    }
}

/// Dense BFGS with backtracking line search and a gradient-norm polish.
fn bfgs<F>(f: F, x0: Vec<f64>, max_iter: usize, gtol: f64) -> (Vec<f64>, f64, f64)
where
    F: Fn(&[f64]) -> (f64, Vec<f64>),
{
    let n = x0.len();
    let mut x = x0;
    let mut h = identity(n);
    let (mut fx, mut g) = f(&x);
    for _ in 0..max_iter {
        let gnorm = l2(&g);
        if gnorm <= gtol {
            break;
        }
        let mut d: Vec<f64> = (0..n)
            .map(|i| -(0..n).map(|j| h[i][j] * g[j]).sum::<f64>())
            .collect();
        let mut slope: f64 = d.iter().zip(&g).map(|(di, gi)| di * gi).sum();
        if slope >= 0.0 {
            h = identity(n);
            d = g.iter().map(|v| -v).collect();
            slope = -g.iter().map(|v| v * v).sum::<f64>();
        }
        let mut t = 1.0;
        let mut xt;
        let mut ft;
        let mut gt;
        loop {
            xt = x.iter().zip(&d).map(|(xi, di)| xi + t * di).collect::<Vec<_>>();
            let r = f(&xt);
            ft = r.0;
            gt = r.1;
            if ft <= fx + 1e-4 * t * slope || t < 1e-18 {
                break;
            }
            t *= 0.5;
        }
        if t < 1e-18 {
            break;
        }
        let s: Vec<f64> = d.iter().map(|di| t * di).collect();
        let y: Vec<f64> = gt.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        let snorm = s.iter().map(|v| v * v).sum::<f64>().sqrt();
        let ynorm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if sy > 1e-12 * snorm * ynorm {
            bfgs_update(&mut h, &s, &y, sy);
        } else {
            h = identity(n);
        }
        x = xt;
        fx = ft;
        g = gt;
    }
    if l2(&g) > gtol {
        gradient_polish(&f, &mut x, &mut fx, &mut g, gtol);
    }
    (x, fx, l2(&g))
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn bfgs_update(h: &mut [Vec<f64>], s: &[f64], y: &[f64], sy: f64) {
    let n = s.len();
    let rho = 1.0 / sy;
    // H' = (I - ρ s yᵀ) H (I - ρ y sᵀ) + ρ s sᵀ
    let hy: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| h[i][j] * y[j]).sum::<f64>())
        .collect();
    let yhy: f64 = y.iter().zip(&hy).map(|(a, b)| a * b).sum();
    for i in 0..n {
        for j in 0..n {
            h[i][j] += -rho * (hy[i] * s[j] + s[i] * hy[j])
                + rho * rho * yhy * s[i] * s[j]
                + rho * s[i] * s[j];
        }
    }
}

/// Multi-start optimization of a violation objective over all Bloch vectors.
///
/// Deterministic for a fixed seed: the restart starting points are drawn up
/// front, restarts run independently, and the best result wins with ties
/// broken by restart index.
pub fn optimize_violation(
    ineq: &Inequality,
    scenario: &Scenario,
    objective: Objective,
    options: &OptimizeOptions,
) -> Result<ViolationResult, QuantumError> {
    let tensor = PairTensor::new(ineq, scenario)?;
    if objective == Objective::Ratio && !tensor.has_statistical_weight() {
        return Err(QuantumError::ZeroVariance);
    }
    let (na, nb) = (tensor.na, tensor.nb);
    let nangles = 2 * (na + nb);
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let starts: Vec<Vec<f64>> = (0..options.restarts.max(1))
        .map(|_| {
            (0..nangles)
                .map(|k| {
                    if k % 2 == 0 {
                        // uniform on the sphere: θ = acos(u), u ~ U[-1,1]
                        (rng.gen_range(-1.0f64..1.0)).acos()
                    } else {
                        rng.gen_range(0.0..std::f64::consts::TAU)
                    }
                })
                .collect()
        })
        .collect();

    let run_one = |x0: &Vec<f64>| -> (f64, Vec<f64>, f64) {
        match objective {
            Objective::Value => {
                let (a0, b0) = config_from_angles(x0, na, nb);
                let (a, b, value) = alternating_minimize(&tensor, a0, b0, 10_000);
                let x = angles_from_config(&a, &b);
                let (_, grad) = eval_objective(&tensor, Objective::Value, &x);
                let gnorm = grad.iter().map(|v| v * v).sum::<f64>().sqrt();
                (value, x, gnorm)
            }
            Objective::Ratio => {
                let (x, fx, gnorm) = bfgs(
                    |x| eval_objective(&tensor, Objective::Ratio, x),
                    x0.clone(),
                    options.max_iterations,
                    options.gradient_tolerance,
                );
                (fx, x, gnorm)
            }
        }
    };
    let results: Vec<(f64, Vec<f64>, f64)> = starts.par_iter().map(run_one).collect();
    let best_index = results
        .iter()
        .enumerate()
        .min_by(|(ia, ra), (ib, rb)| {
            ra.0.partial_cmp(&rb.0)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(ia.cmp(ib))
        })
        .map(|(i, _)| i)
        .expect("at least one restart");
    let (_, ref x, gnorm) = results[best_index];
    let (a, b) = config_from_angles(x, na, nb);
    let config = MeasurementConfig {
        a_vectors: a.clone(),
        b_vectors: b.clone(),
    };
    let value = tensor.value(&a, &b);
    let ratio = if tensor.has_statistical_weight() {
        value.abs() / tensor.variance(&a, &b).sqrt()
    } else {
        f64::NAN
    };
    Ok(ViolationResult {
        config,
        value,
        ratio,
        converged: gnorm <= options.gradient_tolerance,
    })
}
