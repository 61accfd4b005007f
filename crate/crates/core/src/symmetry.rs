//! The scenario symmetry group and its action on inequalities.
//!
//! Elements combine a permutation of sites with equal observable counts, a
//! per-site permutation of the observables, and a per-site sign flip of each
//! observable. The induced action on a coefficient tensor permutes the
//! coordinate indices and flips signs; it never touches the constant
//! coefficient, so canonical form is preserved.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::inequality::Inequality;
use crate::scenario::{positivity_inequalities, CorrelationVector, Scenario};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymmetryError {
    #[error("element shape does not match scenario {0}")]
    ShapeMismatch(String),
    #[error("facet list is not closed under the group action (orbit of member {index} leaves the list)")]
    NotClosed { index: usize },
}

/// One symmetry: site permutation, observable permutations, sign flips.
///
/// The element maps observable `i` of site `X` to observable
/// `obs_perms[X][i]` of site `site_perm[X]`, multiplied by `signs[X][i]`
/// (observable indices 0-based here; coordinate index 0 is the constant and
/// never moves across sites with different counts).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymmetryElement {
    site_perm: Vec<usize>,
    obs_perms: Vec<Vec<usize>>,
    signs: Vec<Vec<i8>>,
}

impl SymmetryElement {
    pub fn identity(scenario: &Scenario) -> Self {
        Self {
            site_perm: (0..scenario.num_sites()).collect(),
            obs_perms: scenario.site_counts().iter().map(|&n| (0..n).collect()).collect(),
            signs: scenario.site_counts().iter().map(|&n| vec![1; n]).collect(),
        }
    }

    pub fn site_perm(&self) -> &[usize] {
        &self.site_perm
    }

    pub fn obs_perms(&self) -> &[Vec<usize>] {
        &self.obs_perms
    }

    pub fn signs(&self) -> &[Vec<i8>] {
        &self.signs
    }

    pub fn is_identity(&self) -> bool {
        self.site_perm.iter().enumerate().all(|(i, &s)| i == s)
            && self
                .obs_perms
                .iter()
                .all(|p| p.iter().enumerate().all(|(i, &j)| i == j))
            && self.signs.iter().all(|s| s.iter().all(|&v| v == 1))
    }

    fn matches(&self, scenario: &Scenario) -> bool {
        self.site_perm.len() == scenario.num_sites()
            && self
                .obs_perms
                .iter()
                .zip(scenario.site_counts())
                .all(|(p, &n)| p.len() == n)
            && self
                .signs
                .iter()
                .zip(scenario.site_counts())
                .all(|(s, &n)| s.len() == n)
    }

    /// Composition `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        let nsites = self.site_perm.len();
        let site_perm: Vec<usize> = (0..nsites).map(|x| self.site_perm[other.site_perm[x]]).collect();
        let obs_perms: Vec<Vec<usize>> = (0..nsites)
            .map(|x| {
                let mid = other.site_perm[x];
                other.obs_perms[x]
                    .iter()
                    .map(|&i| self.obs_perms[mid][i])
                    .collect()
            })
            .collect();
        let signs: Vec<Vec<i8>> = (0..nsites)
            .map(|x| {
                let mid = other.site_perm[x];
                other
                    .obs_perms[x]
                    .iter()
                    .zip(&other.signs[x])
                    .map(|(&i, &s)| s * self.signs[mid][i])
                    .collect()
            })
            .collect();
        Self {
            site_perm,
            obs_perms,
            signs,
        }
    }

    pub fn inverse(&self) -> Self {
        let nsites = self.site_perm.len();
        let mut site_perm = vec![0; nsites];
        for (x, &y) in self.site_perm.iter().enumerate() {
            site_perm[y] = x;
        }
        let mut obs_perms = vec![Vec::new(); nsites];
        let mut signs = vec![Vec::new(); nsites];
        for y in 0..nsites {
            let x = site_perm[y]; // preimage site
            let n = self.obs_perms[x].len();
            let mut inv = vec![0; n];
            for (i, &j) in self.obs_perms[x].iter().enumerate() {
                inv[j] = i;
            }
            signs[y] = inv.iter().map(|&i| self.signs[x][i]).collect();
            obs_perms[y] = inv;
        }
        Self {
            site_perm,
            obs_perms,
            signs,
        }
    }

    /// The induced signed permutation of the flat coordinate indices.
    ///
    /// `perm[flat]` is the destination index and `sign[flat]` the factor, so
    /// an inequality transforms as `out[perm[j]] = sign[j] * in[j]`.
    fn coordinate_action(&self, scenario: &Scenario) -> (Vec<usize>, Vec<i8>) {
        let dim = scenario.dim();
        let nsites = scenario.num_sites();
        let mut strides = vec![1usize; nsites];
        for x in (0..nsites - 1).rev() {
            strides[x] = strides[x + 1] * (scenario.site_counts()[x + 1] + 1);
        }
        let mut perm = vec![0usize; dim];
        let mut sign = vec![1i8; dim];
        for flat in 0..dim {
            let mut dest = 0usize;
            let mut s = 1i8;
            for x in 0..nsites {
                let i = scenario.digit(flat, x);
                let y = self.site_perm[x];
                if i > 0 {
                    dest += (self.obs_perms[x][i - 1] + 1) * strides[y];
                    s *= self.signs[x][i - 1];
                }
            }
            perm[flat] = dest;
            sign[flat] = s;
        }
        (perm, sign)
    }
}

/// Applies a symmetry to an inequality tensor.
pub fn apply(
    g: &SymmetryElement,
    ineq: &Inequality,
    scenario: &Scenario,
) -> Result<Inequality, SymmetryError> {
    if !g.matches(scenario) || ineq.len() != scenario.dim() {
        return Err(SymmetryError::ShapeMismatch(scenario.spec_string()));
    }
    let (perm, sign) = g.coordinate_action(scenario);
    Ok(apply_tables(&perm, &sign, ineq))
}

fn apply_tables(perm: &[usize], sign: &[i8], ineq: &Inequality) -> Inequality {
    let mut out = vec![num::BigInt::from(0); perm.len()];
    for (j, c) in ineq.coeffs().iter().enumerate() {
        out[perm[j]] = if sign[j] == 1 { c.clone() } else { -c };
    }
    Inequality::from_coeffs(out).expect("action of a bijection is nonzero")
}

/// Applies a symmetry to a correlation vector (same index action).
pub fn apply_to_vertex(
    g: &SymmetryElement,
    vertex: &CorrelationVector,
    scenario: &Scenario,
) -> Result<CorrelationVector, SymmetryError> {
    if !g.matches(scenario) || vertex.len() != scenario.dim() {
        return Err(SymmetryError::ShapeMismatch(scenario.spec_string()));
    }
    let (perm, sign) = g.coordinate_action(scenario);
    let mut out = vec![0i64; perm.len()];
    for (j, &e) in vertex.entries().iter().enumerate() {
        out[perm[j]] = e * sign[j] as i64;
    }
    CorrelationVector::new(out).map_err(|_| SymmetryError::ShapeMismatch(scenario.spec_string()))
}

/// Generating set: adjacent observable transpositions and single sign flips
/// per site, plus adjacent transpositions of sites with equal counts.
pub fn generators(scenario: &Scenario) -> Vec<SymmetryElement> {
    let mut gens = Vec::new();
    let id = SymmetryElement::identity(scenario);
    for (x, &n) in scenario.site_counts().iter().enumerate() {
        for i in 0..n.saturating_sub(1) {
            let mut g = id.clone();
            g.obs_perms[x].swap(i, i + 1);
            gens.push(g);
        }
        for i in 0..n {
            let mut g = id.clone();
            g.signs[x][i] = -1;
            gens.push(g);
        }
    }
    for x in 0..scenario.num_sites() - 1 {
        if scenario.site_counts()[x] == scenario.site_counts()[x + 1] {
            let mut g = id.clone();
            g.site_perm.swap(x, x + 1);
            gens.push(g);
        }
    }
    gens
}

/// The full symmetry group, materialized by closure of the generators,
/// together with precomputed coordinate-action tables for the generators.
pub struct SymmetryGroup {
    scenario: Scenario,
    generators: Vec<SymmetryElement>,
    generator_tables: Vec<(Vec<usize>, Vec<i8>)>,
    elements: Vec<SymmetryElement>,
}

impl SymmetryGroup {
    pub fn new(scenario: &Scenario) -> Self {
        let gens = generators(scenario);
        let mut seen: HashSet<SymmetryElement> = HashSet::new();
        let id = SymmetryElement::identity(scenario);
        seen.insert(id.clone());
        let mut frontier = vec![id];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for e in &frontier {
                for g in &gens {
                    let c = g.compose(e);
                    if seen.insert(c.clone()) {
                        next.push(c);
                    }
                }
            }
            frontier = next;
        }
        let mut elements: Vec<SymmetryElement> = seen.into_iter().collect();
        elements.sort();
        let generator_tables = gens.iter().map(|g| g.coordinate_action(scenario)).collect();
        Self {
            scenario: scenario.clone(),
            generators: gens,
            generator_tables,
            elements,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn generators(&self) -> &[SymmetryElement] {
        &self.generators
    }

    pub fn elements(&self) -> &[SymmetryElement] {
        &self.elements
    }

    /// The full orbit of an inequality, sorted; the first entry is the
    /// canonical (lexicographically minimal) representative.
    pub fn expand_orbit(&self, ineq: &Inequality) -> Vec<Inequality> {
        let mut orbit: BTreeSet<Inequality> = BTreeSet::new();
        orbit.insert(ineq.clone());
        let mut frontier = vec![ineq.clone()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for f in &frontier {
                for (perm, sign) in &self.generator_tables {
                    let image = apply_tables(perm, sign, f);
                    if !orbit.contains(&image) {
                        orbit.insert(image.clone());
                        next.push(image);
                    }
                }
            }
            frontier = next;
        }
        orbit.into_iter().collect()
    }

    /// Lexicographic minimum of the orbit; constant on orbits, idempotent.
    pub fn canonical_representative(&self, ineq: &Inequality) -> Inequality {
        self.expand_orbit(ineq)
            .into_iter()
            .next()
            .expect("orbit contains the element itself")
    }
}

/// One symmetry class of a facet list.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub representative: Inequality,
    pub size: usize,
    pub stabilizer_order: usize,
    /// Full sorted member list, when requested.
    pub members: Option<Vec<Inequality>>,
}

/// Partitions a duplicate-free facet list into symmetry orbits.
///
/// Orbits are returned sorted by representative. Errors when the input is
/// not closed under the group action, which indicates an incomplete list.
pub fn orbit_decompose(
    facets: &[Inequality],
    group: &SymmetryGroup,
    keep_members: bool,
) -> Result<Vec<Orbit>, SymmetryError> {
    let index_of: HashMap<&Inequality, usize> =
        facets.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut assigned = vec![false; facets.len()];
    let mut orbits = Vec::new();
    for (start, facet) in facets.iter().enumerate() {
        if assigned[start] {
            continue;
        }
        let members = group.expand_orbit(facet);
        for m in &members {
            match index_of.get(m) {
                Some(&i) => assigned[i] = true,
                None => return Err(SymmetryError::NotClosed { index: start }),
            }
        }
        let size = members.len();
        let representative = members[0].clone();
        debug_assert_eq!(group.order() % size, 0, "orbit size divides group order");
        orbits.push(Orbit {
            representative,
            size,
            stabilizer_order: group.order() / size,
            members: keep_members.then_some(members),
        });
    }
    orbits.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(orbits)
}

/// Canonical representative without a prebuilt group (convenience wrapper).
pub fn canonical_representative(ineq: &Inequality, scenario: &Scenario) -> Inequality {
    SymmetryGroup::new(scenario).canonical_representative(ineq)
}

/// True when the orbit is one of the positivity classes of the scenario.
pub fn is_positivity_class(orbit: &Orbit, group: &SymmetryGroup) -> bool {
    positivity_inequalities(group.scenario())
        .iter()
        .any(|p| group.canonical_representative(p) == orbit.representative)
}
