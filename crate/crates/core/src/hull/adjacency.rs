//! Adjacency decomposition: facet enumeration through the symmetry group.
//!
//! Starting from one known facet (a positivity facet), the search walks the
//! facet-ridge graph: the ridges of a facet are the facets of its tight
//! vertex set (a hull problem one dimension down), and rotating the facet
//! normal around a ridge yields the unique neighboring facet. Since the
//! neighbor relation commutes with the symmetry action, it suffices to
//! process one representative per orbit; the full facet list is recovered
//! by expanding every orbit at the end.

use std::collections::{HashMap, VecDeque};

use num::{BigInt, Zero};
use rayon::prelude::*;

use super::{dd, HullError};
use crate::inequality::Inequality;
use crate::linalg;
use crate::scenario::{positivity_inequalities, CorrelationVector, Scenario};
use crate::symmetry::SymmetryGroup;

pub(crate) fn facets_adjacency(
    vertices: &[CorrelationVector],
    scenario: &Scenario,
) -> Result<Vec<Inequality>, HullError> {
    let width = scenario.dim();
    let rows: Vec<&[i64]> = vertices.iter().map(|v| v.entries()).collect();
    let rank = linalg::rank_i64(&rows);
    if rank < width {
        return Err(HullError::Degenerate {
            rank,
            expected: width,
        });
    }

    let group = SymmetryGroup::new(scenario);

    // class id per known orbit member; orbits are expanded on first contact
    let mut member_class: HashMap<Inequality, usize> = HashMap::new();
    let mut reps: Vec<Inequality> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();

    let discover = |ineq: Inequality,
                        member_class: &mut HashMap<Inequality, usize>,
                        reps: &mut Vec<Inequality>,
                        queue: &mut VecDeque<usize>| {
        if member_class.contains_key(&ineq) {
            return;
        }
        let members = group.expand_orbit(&ineq);
        let rep = members.first().cloned().expect("orbit is nonempty");
        let id = reps.len();
        for m in members {
            member_class.insert(m, id);
        }
        reps.push(rep);
        queue.push_back(id);
    };

    let seed = positivity_inequalities(scenario)
        .into_iter()
        .next()
        .expect("scenario has positivity inequalities");
    debug_assert!(super::verify_facet(vertices, &seed).is_facet);
    discover(seed, &mut member_class, &mut reps, &mut queue);

    while !queue.is_empty() {
        let batch: Vec<usize> = queue.drain(..).collect();
        let neighbor_lists: Vec<Vec<Inequality>> = batch
            .par_iter()
            .map(|&id| facet_neighbors(&reps[id], vertices, width))
            .collect::<Result<_, _>>()?;
        for neighbors in neighbor_lists {
            for n in neighbors {
                discover(n, &mut member_class, &mut reps, &mut queue);
            }
        }
    }

    let mut all: Vec<Inequality> = member_class.into_keys().collect();
    all.sort();
    Ok(all)
}

/// All facets adjacent to `facet` across one of its ridges.
fn facet_neighbors(
    facet: &Inequality,
    vertices: &[CorrelationVector],
    width: usize,
) -> Result<Vec<Inequality>, HullError> {
    let values: Vec<BigInt> = vertices
        .iter()
        .map(|v| facet.evaluate_vertex(v))
        .collect();
    let tight: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_zero())
        .map(|(i, _)| i)
        .collect();

    // facets of the tight-set cone, computed on an injective coordinate
    // projection of its span
    let tight_rows: Vec<&[i64]> = tight.iter().map(|&i| vertices[i].entries()).collect();
    let cols = linalg::pivot_columns_i64(&tight_rows);
    debug_assert_eq!(cols.len(), width - 1, "input is not a facet");
    let projected: Vec<Vec<i64>> = tight_rows
        .iter()
        .map(|r| cols.iter().map(|&c| r[c]).collect())
        .collect();
    let ridges = dd::dual_rays(&projected)?;

    let neighbors = ridges
        .into_iter()
        .map(|ridge| {
            let mut beta = vec![BigInt::zero(); width];
            for (j, &c) in cols.iter().enumerate() {
                beta[c] = ridge[j].clone();
            }
            rotate_over_ridge(facet, &beta, vertices, &values)
        })
        .collect();
    Ok(neighbors)
}

/// Rotates `facet` around the ridge with lifted normal `beta`, producing the
/// unique other facet containing that ridge.
///
/// Every inequality tight on the ridge is a combination `q·β + p·α`; the
/// neighbor is the extreme choice that stays valid, `t = p/q` maximal over
/// the vertices outside the facet.
fn rotate_over_ridge(
    facet: &Inequality,
    beta: &[BigInt],
    vertices: &[CorrelationVector],
    facet_values: &[BigInt],
) -> Inequality {
    let mut best: Option<(BigInt, BigInt)> = None; // (numerator, denominator > 0)
    for (vertex, aval) in vertices.iter().zip(facet_values) {
        if aval.is_zero() {
            continue;
        }
        let mut bval = BigInt::zero();
        for (b, &e) in beta.iter().zip(vertex.entries()) {
            match e {
                1 => bval += b,
                -1 => bval -= b,
                _ => unreachable!("vertex entries are ±1"),
            }
        }
        let num = -bval;
        let den = aval.clone();
        let better = match &best {
            None => true,
            Some((bn, bd)) => &num * bd > bn * &den,
        };
        if better {
            best = Some((num, den));
        }
    }
    let (p, q) = best.expect("a facet is tight on a proper vertex subset");
    let coeffs: Vec<BigInt> = beta
        .iter()
        .zip(facet.coeffs())
        .map(|(b, a)| &q * b + &p * a)
        .collect();
    Inequality::from_coeffs(coeffs).expect("ridge rotation yields a nonzero normal")
}
