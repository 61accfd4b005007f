//! Reference inequalities used across tests, checks and the CLI.

use num::Zero;

use crate::inequality::Inequality;
use crate::scenario::Scenario;
use crate::symmetry::SymmetryGroup;

/// The CHSH facet of the `(2,2)` polytope:
/// `2 - E(A1B1) - E(A1B2) - E(A2B1) + E(A2B2) >= 0`.
///
/// This is the standard form `(E11 + E12 + E21 - E22)/2 <= 1` cleared to
/// primitive integers in the fixed coordinate order.
pub fn chsh() -> Inequality {
    Inequality::from_i64(&[2, 0, 0, 0, -1, -1, 0, -1, 1]).expect("nonzero")
}

/// Scenario of [`chsh`].
pub fn chsh_scenario() -> Scenario {
    Scenario::parse("2,2").expect("valid spec")
}

/// The genuinely new facet class of the `(3,3)` polytope, as the 4×4
/// coefficient tensor
///
/// ```text
/// 4  1  1  0
/// 1  1  1  1
/// 1  1  1 -1
/// 0  1 -1  0
/// ```
///
/// flattened row-major (A index slow, B index fast).
pub fn bell_33() -> Inequality {
    Inequality::from_i64(&[4, 1, 1, 0, 1, 1, 1, 1, 1, 1, 1, -1, 0, 1, -1, 0]).expect("nonzero")
}

/// Scenario of [`bell_33`].
pub fn bell_33_scenario() -> Scenario {
    Scenario::parse("3,3").expect("valid spec")
}

/// Recognizes a CHSH variant inside a `(2,n)` inequality.
///
/// Returns the supporting B-observable pair when the coefficients touch
/// both A-observables and exactly two B-observables, and the restriction to
/// that `(2,2)` subscenario lies in the CHSH symmetry class.
pub fn chsh_embedding(ineq: &Inequality, scenario: &Scenario) -> Option<(usize, usize)> {
    let counts = scenario.site_counts();
    if counts.len() != 2 || counts[0] != 2 || ineq.len() != scenario.dim() {
        return None;
    }
    let nb = counts[1];
    let width = nb + 1;
    let coeff = |i: usize, j: usize| &ineq.coeffs()[i * width + j];
    let a_used: Vec<usize> = (1..=2)
        .filter(|&i| (0..=nb).any(|j| !coeff(i, j).is_zero()))
        .collect();
    let b_used: Vec<usize> = (1..=nb)
        .filter(|&j| (0..=2).any(|i| !coeff(i, j).is_zero()))
        .collect();
    if a_used != [1, 2] || b_used.len() != 2 {
        return None;
    }
    let (j1, j2) = (b_used[0], b_used[1]);
    let mut coeffs = Vec::with_capacity(9);
    for i in 0..=2 {
        for j in [0, j1, j2] {
            coeffs.push(coeff(i, j).clone());
        }
    }
    let restricted = Inequality::from_coeffs(coeffs).ok()?;
    let group = SymmetryGroup::new(&chsh_scenario());
    (group.canonical_representative(&restricted) == group.canonical_representative(&chsh()))
        .then_some((j1, j2))
}
