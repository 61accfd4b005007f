//! Double description: extreme rays of `{x : C x >= 0}` for integer rows `C`.
//!
//! Constraints are inserted one at a time in lexicographic order, starting
//! from a simplicial cone built from a greedily chosen independent subset.
//! Adjacency of rays is decided by the combinatorial zero-set criterion:
//! two extreme rays are adjacent iff no third extreme ray is tight on every
//! constraint the pair is jointly tight on. All ray arithmetic is
//! arbitrary-precision; zero sets are bitsets over the constraint indices,
//! a single machine word when there are at most 64 constraints.

use num::bigint::Sign;
use num::{BigInt, Integer, Zero};
use rayon::prelude::*;

use super::HullError;
use crate::linalg;

/// Zero-set bitset over constraint indices.
trait ZeroSet: Clone + Send + Sync {
    fn empty(words: usize) -> Self;
    fn set(&mut self, i: usize);
    fn inter_count(&self, other: &Self) -> u32;
    fn inter(&self, other: &Self) -> Self;
    /// True when `self ⊆ other`.
    fn subset_of(&self, other: &Self) -> bool;
}

impl ZeroSet for u64 {
    fn empty(_words: usize) -> Self {
        0
    }

    #[inline]
    fn set(&mut self, i: usize) {
        *self |= 1u64 << i;
    }

    #[inline]
    fn inter_count(&self, other: &Self) -> u32 {
        (self & other).count_ones()
    }

    #[inline]
    fn inter(&self, other: &Self) -> Self {
        self & other
    }

    #[inline]
    fn subset_of(&self, other: &Self) -> bool {
        self & !other == 0
    }
}

/// Bitset for more than 64 constraints.
#[derive(Clone, PartialEq, Eq)]
struct WideBits(Vec<u64>);

impl ZeroSet for WideBits {
    fn empty(words: usize) -> Self {
        WideBits(vec![0u64; words])
    }

    #[inline]
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1u64 << (i % 64);
    }

    #[inline]
    fn inter_count(&self, other: &Self) -> u32 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    #[inline]
    fn inter(&self, other: &Self) -> Self {
        WideBits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    #[inline]
    fn subset_of(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

#[inline]
fn dot(ray: &[BigInt], constraint: &[i64]) -> BigInt {
    let mut acc = BigInt::zero();
    for (r, &c) in ray.iter().zip(constraint) {
        match c {
            0 => {}
            1 => acc += r,
            -1 => acc -= r,
            _ => acc += r * c,
        }
    }
    acc
}

fn reduce_primitive(v: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for c in v.iter() {
        g = g.gcd(c);
        if g == BigInt::from(1) {
            return;
        }
    }
    if g.is_zero() || g == BigInt::from(1) {
        return;
    }
    for c in v.iter_mut() {
        *c = &*c / &g;
    }
}

/// Extreme rays of the pointed cone `{x : c·x >= 0 for all c in constraints}`.
///
/// Requires the constraint rows to span the full space (otherwise the dual
/// cone has a lineality component and the ray representation is incomplete);
/// reports [`HullError::Degenerate`] in that case. The returned rays are
/// primitive integer vectors in a deterministic order.
pub(crate) fn dual_rays(constraints: &[Vec<i64>]) -> Result<Vec<Vec<BigInt>>, HullError> {
    if constraints.is_empty() {
        return Err(HullError::EmptyInput);
    }
    if constraints.len() <= 64 {
        dual_rays_impl::<u64>(constraints)
    } else {
        dual_rays_impl::<WideBits>(constraints)
    }
}

fn dual_rays_impl<Z: ZeroSet>(constraints: &[Vec<i64>]) -> Result<Vec<Vec<BigInt>>, HullError> {
    let width = constraints[0].len();
    debug_assert!(constraints.iter().all(|c| c.len() == width));

    // deterministic insertion order
    let mut order: Vec<usize> = (0..constraints.len()).collect();
    order.sort_by(|&a, &b| constraints[a].cmp(&constraints[b]));
    let cons: Vec<&Vec<i64>> = order.iter().map(|&i| &constraints[i]).collect();

    // greedy independent subset for the initial simplicial cone
    let mut ech = linalg::Echelon::new(width);
    let mut basis_pos = Vec::with_capacity(width);
    let mut rest_pos = Vec::new();
    for (k, c) in cons.iter().enumerate() {
        if ech.rank() < width && ech.add_row_i64(c) {
            basis_pos.push(k);
        } else {
            rest_pos.push(k);
        }
    }
    if basis_pos.len() < width {
        return Err(HullError::Degenerate {
            rank: basis_pos.len(),
            expected: width,
        });
    }

    let basis_rows: Vec<Vec<i64>> = basis_pos.iter().map(|&k| cons[k].clone()).collect();
    let mut rays = linalg::simplicial_cone_rays(&basis_rows);

    let words = cons.len().div_ceil(64);
    let mut zs: Vec<Z> = rays
        .iter()
        .map(|r| {
            let mut z = Z::empty(words);
            for &k in &basis_pos {
                if dot(r, cons[k]).is_zero() {
                    z.set(k);
                }
            }
            z
        })
        .collect();

    let trace = std::env::var_os("BELLPOLY_DD_TRACE").is_some();
    for &k in &rest_pos {
        let t0 = std::time::Instant::now();
        let c = cons[k];
        let vals: Vec<BigInt> = if rays.len() >= 512 {
            rays.par_iter().map(|r| dot(r, c)).collect()
        } else {
            rays.iter().map(|r| dot(r, c)).collect()
        };

        let mut plus = Vec::new();
        let mut zero = Vec::new();
        let mut minus = Vec::new();
        for (i, v) in vals.iter().enumerate() {
            match v.sign() {
                Sign::Plus => plus.push(i),
                Sign::NoSign => zero.push(i),
                Sign::Minus => minus.push(i),
            }
        }
        if minus.is_empty() {
            for &i in &zero {
                zs[i].set(k);
            }
            continue;
        }

        // adjacent (positive, negative) pairs by the combinatorial criterion
        let min_common = (width - 2) as u32;
        let find_pairs = |ip: usize| -> Vec<(usize, usize)> {
            let zp = &zs[ip];
            let mut local = Vec::new();
            // successive pairs usually share a blocking ray; test it first
            let mut last_blocker: Option<usize> = None;
            for &im in &minus {
                if zp.inter_count(&zs[im]) < min_common {
                    continue;
                }
                let common = zp.inter(&zs[im]);
                if let Some(t) = last_blocker {
                    if t != ip && t != im && common.subset_of(&zs[t]) {
                        continue;
                    }
                }
                let blocked = zs
                    .iter()
                    .enumerate()
                    .find(|&(t, zt)| t != ip && t != im && common.subset_of(zt));
                match blocked {
                    Some((t, _)) => last_blocker = Some(t),
                    None => local.push((ip, im)),
                }
            }
            local
        };
        let pair_lists: Vec<Vec<(usize, usize)>> =
            if plus.len().saturating_mul(minus.len()) >= 1 << 13 {
                plus.par_iter().map(|&ip| find_pairs(ip)).collect()
            } else {
                plus.iter().map(|&ip| find_pairs(ip)).collect()
            };

        let combine = |&(ip, im): &(usize, usize)| -> (Vec<BigInt>, Z) {
            // positive combination that lands on the new hyperplane
            let lam = &vals[ip];
            let mu = -&vals[im];
            let mut w: Vec<BigInt> = rays[ip]
                .iter()
                .zip(&rays[im])
                .map(|(rp, rm)| lam * rm + &mu * rp)
                .collect();
            reduce_primitive(&mut w);
            let mut z = zs[ip].inter(&zs[im]);
            z.set(k);
            (w, z)
        };
        let pairs: Vec<(usize, usize)> = pair_lists.into_iter().flatten().collect();
        let fresh: Vec<(Vec<BigInt>, Z)> = if pairs.len() >= 256 {
            pairs.par_iter().map(combine).collect()
        } else {
            pairs.iter().map(combine).collect()
        };

        let mut next_rays = Vec::with_capacity(plus.len() + zero.len() + fresh.len());
        let mut next_zs = Vec::with_capacity(next_rays.capacity());
        for &i in &plus {
            next_rays.push(std::mem::take(&mut rays[i]));
            next_zs.push(zs[i].clone());
        }
        for &i in &zero {
            next_rays.push(std::mem::take(&mut rays[i]));
            let mut z = zs[i].clone();
            z.set(k);
            next_zs.push(z);
        }
        for (w, z) in fresh {
            next_rays.push(w);
            next_zs.push(z);
        }
        rays = next_rays;
        zs = next_zs;
        if trace {
            eprintln!(
                "dd insert {k}: rays {} (+{} 0{} -{}) pairs {} in {:.0?}",
                rays.len(),
                plus.len(),
                zero.len(),
                minus.len(),
                pairs.len(),
                t0.elapsed()
            );
        }
    }

    Ok(rays)
}
