//! Exact integer linear algebra: incremental rank and simplicial-cone rays.
//!
//! Everything here works over arbitrary-precision integers (rationals for
//! the one matrix inversion). Rows are gcd-reduced after each elimination
//! step to keep intermediate entries small.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

/// Incremental row-echelon builder over the integers.
///
/// Rows are stored in echelon form (each with a recorded pivot column);
/// adding a row reports whether it enlarged the span.
pub(crate) struct Echelon {
    width: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Columns where pivots landed, in insertion order.
    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `row` against the current basis; returns `true` (and keeps
    /// the reduced row) when it is independent of the rows seen so far.
    pub fn add_row(&mut self, row: &[BigInt]) -> bool {
        debug_assert_eq!(row.len(), self.width);
        let mut r = row.to_vec();
        for (basis, &p) in self.rows.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            // fraction-free elimination: r <- (b_p * r - r_p * basis) / gcd
            let bp = basis[p].clone();
            let rp = std::mem::replace(&mut r[p], BigInt::zero());
            for c in 0..self.width {
                if c == p {
                    continue;
                }
                r[c] = &r[c] * &bp - &rp * &basis[c];
            }
            reduce_primitive(&mut r);
        }
        match r.iter().position(|c| !c.is_zero()) {
            Some(p) => {
                self.rows.push(r);
                self.pivots.push(p);
                true
            }
            None => false,
        }
    }

    pub fn add_row_i64(&mut self, row: &[i64]) -> bool {
        let big: Vec<BigInt> = row.iter().map(|&x| BigInt::from(x)).collect();
        self.add_row(&big)
    }
}

/// Divides a row by the gcd of its entries (no-op on the zero row).
fn reduce_primitive(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for c in row.iter() {
        g = g.gcd(c);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for c in row.iter_mut() {
        *c = &*c / &g;
    }
}

/// Exact rank of a set of integer rows.
pub(crate) fn rank_i64(rows: &[&[i64]]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut ech = Echelon::new(rows[0].len());
    for row in rows {
        ech.add_row_i64(row);
    }
    ech.rank()
}

/// Pivot columns of a row set: a column subset on which the rows keep full
/// rank, so projecting to these columns is injective on the row span.
pub(crate) fn pivot_columns_i64(rows: &[&[i64]]) -> Vec<usize> {
    if rows.is_empty() {
        return Vec::new();
    }
    let mut ech = Echelon::new(rows[0].len());
    for row in rows {
        ech.add_row_i64(row);
    }
    let mut cols = ech.pivot_columns().to_vec();
    cols.sort_unstable();
    cols
}

/// Extreme rays of the simplicial cone `{x : B x >= 0}` for a nonsingular
/// square matrix `B` (rows are the constraints).
///
/// Ray `i` is the primitive integer vector proportional to column `i` of
/// `B^{-1}`, scaled positively, so `B r_i` is a nonnegative multiple of the
/// `i`-th unit vector.
pub(crate) fn simplicial_cone_rays(basis: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    let m = basis.len();
    debug_assert!(basis.iter().all(|r| r.len() == m));
    // Gauss-Jordan on [B | I] over the rationals.
    let mut aug: Vec<Vec<BigRational>> = basis
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut v: Vec<BigRational> = row
                .iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect();
            v.extend((0..m).map(|c| {
                BigRational::from_integer(BigInt::from(if c == r { 1 } else { 0 }))
            }));
            v
        })
        .collect();
    for col in 0..m {
        let piv = (col..m)
            .find(|&r| !aug[r][col].is_zero())
            .expect("nonsingular basis");
        aug.swap(col, piv);
        let pv = aug[col][col].clone();
        for x in aug[col].iter_mut() {
            *x = &*x / &pv;
        }
        for r in 0..m {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in 0..2 * m {
                    let sub = &f * &aug[col][c];
                    aug[r][c] = &aug[r][c] - &sub;
                }
            }
        }
    }
    // column i of the inverse, cleared to a primitive integer vector
    (0..m)
        .map(|i| {
            let col: Vec<BigRational> = (0..m).map(|r| aug[r][m + i].clone()).collect();
            let mut lcm = BigInt::one();
            for x in &col {
                lcm = lcm.lcm(x.denom());
            }
            let mut ints: Vec<BigInt> = col.iter().map(|x| (x * &lcm).to_integer()).collect();
            let mut g = BigInt::zero();
            for c in &ints {
                g = g.gcd(c);
            }
            debug_assert!(!g.is_zero());
            if lcm.is_negative() {
                g = -g;
            }
            for c in ints.iter_mut() {
                *c = &*c / &g;
            }
            ints
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_identity_and_dependents() {
        assert_eq!(rank_i64(&[&[1, 0], &[0, 1]]), 2);
        assert_eq!(rank_i64(&[&[1, 2], &[2, 4]]), 1);
        assert_eq!(rank_i64(&[&[0, 0]]), 0);
        assert_eq!(
            rank_i64(&[&[1, 1, 1], &[1, -1, 1], &[2, 0, 2], &[0, 0, 1]]),
            3
        );
    }

    #[test]
    fn pivot_columns_keep_rank() {
        let rows: Vec<&[i64]> = vec![&[1, 2, 3, 0], &[2, 4, 6, 1]];
        let cols = pivot_columns_i64(&rows);
        assert_eq!(cols.len(), 2);
        let projected: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| cols.iter().map(|&c| r[c]).collect())
            .collect();
        let prows: Vec<&[i64]> = projected.iter().map(|r| r.as_slice()).collect();
        assert_eq!(rank_i64(&prows), 2);
    }

    #[test]
    fn simplicial_rays_satisfy_unit_products() {
        let basis = vec![vec![1, 1, 1], vec![1, -1, 1], vec![0, 0, 1]];
        let rays = simplicial_cone_rays(&basis);
        for (i, ray) in rays.iter().enumerate() {
            for (j, row) in basis.iter().enumerate() {
                let dot: BigInt = row
                    .iter()
                    .zip(ray)
                    .map(|(&a, b)| BigInt::from(a) * b)
                    .sum();
                if i == j {
                    assert!(dot > BigInt::zero(), "ray {i} not strictly feasible");
                } else {
                    assert!(dot.is_zero(), "ray {i} not tight on constraint {j}");
                }
            }
        }
    }
}
