//! Boolean-function analysis of the CHSH expression.
//!
//! The CHSH form `f2(a1,a2;b1,b2) = (a1*b1 + a1*b2 + a2*b1 - a2*b2)/2` maps
//! `{±1}^4` onto `{±1}`, so it can be read as a boolean function. Its two
//! defining properties are: the multilinear expansion has no monomial
//! containing both `a1` and `a2`, or both `b1` and `b2` (each term is
//! quantum-measurable), and it depends non-trivially on all four arguments.
//! [`f2_uniqueness_scan`] checks exhaustively that, up to argument swaps,
//! sign flips and the `a↔b` exchange, `f2` is the only such function.

use num::rational::Ratio;

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BooleanError {
    #[error("argument must be +1 or -1, got {0}")]
    OutOfRange(i64),
}

/// A boolean function of `(a1, a2, b1, b2)` together with its exact
/// multilinear expansion.
///
/// Truth tables index the 16 inputs by a 4-bit number with `a1` the most
/// significant bit and bit value 0 meaning `+1`; table bit `k` is set when
/// the function value on input `k` is `-1`. Expansion coefficients are
/// indexed by monomials under the same bit convention (bit set = variable
/// present), so `coeffs[0]` is the constant term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanForm {
    pub table: u16,
    pub coeffs: [Rational; 16],
}

const NVARS: usize = 4;
const NPOINTS: usize = 16;

#[inline]
fn input_value(point: usize, var: usize) -> i64 {
    // var 0 = a1 (most significant), value +1 when the bit is clear
    if point >> (NVARS - 1 - var) & 1 == 0 {
        1
    } else {
        -1
    }
}

impl BooleanForm {
    /// Expands a truth table into multilinear coefficients.
    pub fn from_table(table: u16) -> Self {
        let mut coeffs = [Rational::from_integer(0); NPOINTS];
        for (monomial, c) in coeffs.iter_mut().enumerate() {
            let mut acc = 0i64;
            for point in 0..NPOINTS {
                let f = if table >> point & 1 == 0 { 1i64 } else { -1 };
                let mut chi = 1i64;
                for var in 0..NVARS {
                    if monomial >> (NVARS - 1 - var) & 1 == 1 {
                        chi *= input_value(point, var);
                    }
                }
                acc += f * chi;
            }
            *c = Rational::new(acc, NPOINTS as i64);
        }
        Self { table, coeffs }
    }

    pub fn eval(&self, point: usize) -> i64 {
        if self.table >> point & 1 == 0 {
            1
        } else {
            -1
        }
    }

    /// True when no monomial mixes `a1` with `a2` or `b1` with `b2`.
    pub fn has_no_cross_terms(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(monomial, c)| {
            let a_pair = monomial & 0b1100 == 0b1100;
            let b_pair = monomial & 0b0011 == 0b0011;
            !(a_pair || b_pair) || *c == Rational::from_integer(0)
        })
    }

    /// True when flipping each argument changes the value somewhere.
    pub fn depends_on_all_arguments(&self) -> bool {
        (0..NVARS).all(|var| {
            let bit = 1usize << (NVARS - 1 - var);
            (0..NPOINTS).any(|p| self.eval(p) != self.eval(p ^ bit))
        })
    }
}

/// Evaluates `f2` on `±1` arguments; the result is always `±1`.
pub fn f2_eval(a1: i64, a2: i64, b1: i64, b2: i64) -> Result<i64, BooleanError> {
    for v in [a1, a2, b1, b2] {
        if v != 1 && v != -1 {
            return Err(BooleanError::OutOfRange(v));
        }
    }
    let twice = a1 * b1 + a1 * b2 + a2 * b1 - a2 * b2;
    debug_assert_eq!(twice.abs(), 2);
    Ok(twice / 2)
}

/// Truth table of `f2` under the scan's input convention.
pub fn f2_table() -> u16 {
    let mut table = 0u16;
    for point in 0..NPOINTS {
        let v = f2_eval(
            input_value(point, 0),
            input_value(point, 1),
            input_value(point, 2),
            input_value(point, 3),
        )
        .expect("inputs are ±1");
        if v == -1 {
            table |= 1 << point;
        }
    }
    table
}

/// Input-space symmetries: `a1↔a2`, `b1↔b2`, per-argument sign flips, and
/// the exchange of the `a` pair with the `b` pair. Each is a permutation of
/// the 16 input points acting on truth tables.
fn table_symmetries() -> Vec<[usize; NPOINTS]> {
    let swap_bits = |p: usize, i: usize, j: usize| -> usize {
        let bi = p >> i & 1;
        let bj = p >> j & 1;
        (p & !(1 << i) & !(1 << j)) | (bj << i) | (bi << j)
    };
    let mut perms: Vec<[usize; NPOINTS]> = Vec::new();
    let mut push = |f: &dyn Fn(usize) -> usize| {
        let mut p = [0usize; NPOINTS];
        for (k, slot) in p.iter_mut().enumerate() {
            *slot = f(k);
        }
        perms.push(p);
    };
    // bit layout: a1 = bit 3, a2 = bit 2, b1 = bit 1, b2 = bit 0
    push(&|p| swap_bits(p, 3, 2)); // a1 <-> a2
    push(&|p| swap_bits(p, 1, 0)); // b1 <-> b2
    for bit in 0..NVARS {
        push(&move |p: usize| p ^ (1 << bit)); // negate one argument
    }
    push(&|p| swap_bits(swap_bits(p, 3, 1), 2, 0)); // (a1,a2) <-> (b1,b2)
    perms
}

fn permute_table(table: u16, perm: &[usize; NPOINTS]) -> u16 {
    let mut out = 0u16;
    for (k, &src) in perm.iter().enumerate() {
        if table >> src & 1 == 1 {
            out |= 1 << k;
        }
    }
    out
}

/// Exhaustive scan of all `2^16` boolean functions on `{±1}^4`.
///
/// Keeps the functions with no cross terms that depend on all four
/// arguments, grouped into equivalence classes under the symmetries above.
/// Classes are sorted by their minimal truth table, members likewise.
pub fn f2_uniqueness_scan() -> Vec<Vec<BooleanForm>> {
    let perms = table_symmetries();
    let mut surviving = vec![false; 1 << NPOINTS];
    for table in 0..=u16::MAX {
        let form = BooleanForm::from_table(table);
        if form.has_no_cross_terms() && form.depends_on_all_arguments() {
            surviving[table as usize] = true;
        }
    }
    let mut assigned = vec![false; 1 << NPOINTS];
    let mut classes = Vec::new();
    for table in 0..=u16::MAX {
        if !surviving[table as usize] || assigned[table as usize] {
            continue;
        }
        let mut members = vec![table];
        assigned[table as usize] = true;
        let mut frontier = vec![table];
        while let Some(t) = frontier.pop() {
            for perm in &perms {
                let u = permute_table(t, perm);
                if !assigned[u as usize] {
                    // the filters are invariant under input symmetries
                    debug_assert!(surviving[u as usize]);
                    assigned[u as usize] = true;
                    members.push(u);
                    frontier.push(u);
                }
            }
        }
        members.sort_unstable();
        classes.push(members.into_iter().map(BooleanForm::from_table).collect());
    }
    classes
}
