//! `F_q`-subspaces of `F_{q^t}^2` and the action of `ΓL(2, q^t)` on them.

mod census;
mod equivalence;
mod normalize;
mod semilinear;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::linpoly::{slope, LinearSet, LinearizedPoly};

pub use census::{orbit_census, OrbitCensus, PairTest};
pub use equivalence::{
    equivalence_fast, equivalence_oracle, stabilizer_order, subspace_stabilizer_size,
    ORACLE_LIMIT, SEARCH_LIMIT,
};
pub use normalize::normalize_poly;
pub use semilinear::{SemilinearJson, SemilinearMap};

/// Which group a search ranges over.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Group {
    GL,
    GammaL,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::GL => "GL",
            Group::GammaL => "GammaL",
        })
    }
}

impl std::str::FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "GL" => Ok(Group::GL),
            "GammaL" | "ΓL" => Ok(Group::GammaL),
            other => Err(Error::InvalidParameter(format!("unknown group {other:?}"))),
        }
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Run searches beyond the size guards.
    pub force: bool,
}

/// Packs a vector of `F_{q^t}^2` into one integer, `x·q^t + y`.
#[inline]
pub fn pack(order: u32, x: Elem, y: Elem) -> u64 {
    x.0 as u64 * order as u64 + y.0 as u64
}

#[inline]
pub fn unpack(order: u32, v: u64) -> (Elem, Elem) {
    (
        Elem((v / order as u64) as u32),
        Elem((v % order as u64) as u32),
    )
}

/// An `F_q`-subspace of `F_{q^t}^2`: a basis plus the full sorted element
/// list, which doubles as the canonical fingerprint for set equality.
#[derive(Clone, Debug)]
pub struct Subspace2 {
    order: u32,
    basis: Vec<(Elem, Elem)>,
    elements: Vec<u64>,
}

impl PartialEq for Subspace2 {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.elements == other.elements
    }
}

impl Eq for Subspace2 {}

impl Subspace2 {
    /// The `F_q`-span of `basis`; fails if the vectors are dependent.
    pub fn from_basis(tower: &FieldTower, basis: Vec<(Elem, Elem)>) -> Result<Self> {
        let order = tower.order();
        let mut elements = vec![0u64];
        for &(x, y) in &basis {
            let mut next = Vec::with_capacity(elements.len() * tower.q() as usize);
            for &alpha in tower.subfield() {
                let (ax, ay) = (tower.mul(alpha, x), tower.mul(alpha, y));
                for &v in &elements {
                    let (u, w) = unpack(order, v);
                    next.push(pack(order, tower.add(u, ax), tower.add(w, ay)));
                }
            }
            next.sort_unstable();
            next.dedup();
            if next.len() != elements.len() * tower.q() as usize {
                return Err(Error::DependentInputs);
            }
            elements = next;
        }
        Ok(Subspace2 {
            order,
            basis,
            elements,
        })
    }

    /// `{(x, φ(x))}` for an `F_q`-linear `φ` given by its value table.
    pub(crate) fn from_graph_table(tower: &FieldTower, table: &[Elem]) -> Self {
        let order = tower.order();
        let mut elements: Vec<u64> = tower
            .elements()
            .map(|x| pack(order, x, table[x.index()]))
            .collect();
        elements.sort_unstable();
        let basis = tower
            .basis()
            .iter()
            .map(|&x| (x, table[x.index()]))
            .collect();
        Subspace2 {
            order,
            basis,
            elements,
        }
    }

    /// `U_f = {(x, f(x))}`.
    pub fn from_poly(tower: &FieldTower, f: &LinearizedPoly) -> Self {
        Self::from_graph_table(tower, &f.table(tower))
    }

    /// The Desarguesian line `⟨(1, m)⟩_{F_{q^t}}`.
    pub fn line(tower: &FieldTower, m: Elem) -> Self {
        let table: Vec<Elem> = tower.elements().map(|x| tower.mul(m, x)).collect();
        Self::from_graph_table(tower, &table)
    }

    /// `V_∞ = {0} × F_{q^t}`.
    pub fn vertical(tower: &FieldTower) -> Self {
        let order = tower.order();
        Subspace2 {
            order,
            basis: tower.basis().iter().map(|&y| (Elem::ZERO, y)).collect(),
            elements: tower.elements().map(|y| pack(order, Elem::ZERO, y)).collect(),
        }
    }

    pub fn basis(&self) -> &[(Elem, Elem)] {
        &self.basis
    }

    /// Dimension over `F_q`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Sorted packed elements.
    pub fn packed(&self) -> &[u64] {
        &self.elements
    }

    pub fn contains(&self, x: Elem, y: Elem) -> bool {
        self.elements.binary_search(&pack(self.order, x, y)).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Elem, Elem)> + '_ {
        self.elements.iter().map(|&v| unpack(self.order, v))
    }

    /// `hU = {(hx, hy)}`.
    pub fn scale(&self, tower: &FieldTower, h: Elem) -> Self {
        let order = self.order;
        let mut elements: Vec<u64> = self
            .iter()
            .map(|(x, y)| pack(order, tower.mul(h, x), tower.mul(h, y)))
            .collect();
        elements.sort_unstable();
        Subspace2 {
            order,
            basis: self
                .basis
                .iter()
                .map(|&(x, y)| (tower.mul(h, x), tower.mul(h, y)))
                .collect(),
            elements,
        }
    }

    /// Count of nonzero elements per projective point; index `q^t` is `∞`.
    fn point_counts(&self, tower: &FieldTower) -> Vec<u32> {
        let n = tower.order() as usize;
        let mut counts = vec![0u32; n + 1];
        for (x, y) in self.iter() {
            if x.is_zero() && y.is_zero() {
                continue;
            }
            let key = if x.is_zero() {
                n
            } else {
                slope(tower, y, x).index()
            };
            counts[key] += 1;
        }
        counts
    }

    /// Every `F_{q^t}`-line meets the subspace in dimension at most one.
    pub fn is_scattered(&self, tower: &FieldTower) -> bool {
        let limit = tower.q() - 1;
        self.point_counts(tower).iter().all(|&c| c <= limit)
    }

    /// The projective points spanned by nonzero vectors.
    pub fn linear_set(&self, tower: &FieldTower) -> LinearSet {
        let counts = self.point_counts(tower);
        let n = tower.order() as usize;
        LinearSet {
            slopes: (0..n)
                .filter(|&i| counts[i] > 0)
                .map(|i| Elem(i as u32))
                .collect(),
            contains_infinity: counts[n] > 0,
        }
    }

    /// True when the first-coordinate projection is a bijection, that is
    /// the subspace is the graph of some linearized polynomial.
    pub fn is_graph(&self, tower: &FieldTower) -> bool {
        self.len() == tower.order() as usize && self.iter().filter(|(x, _)| x.is_zero()).count() == 1
    }

    pub(crate) fn from_sorted_parts(order: u32, basis: Vec<(Elem, Elem)>, elements: Vec<u64>) -> Self {
        Subspace2 {
            order,
            basis,
            elements,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf64() -> FieldTower {
        FieldTower::with_default(2, 2, 3).unwrap()
    }

    #[test]
    fn graphs_of_trivial_polynomials() {
        let f = gf64();
        let diag = Subspace2::from_poly(&f, &LinearizedPoly::identity(&f));
        assert_eq!(diag.len(), 64);
        assert!(diag.iter().all(|(x, y)| x == y));
        assert!(!diag.is_scattered(&f));
        let flat = Subspace2::from_poly(&f, &LinearizedPoly::zero(&f));
        assert!(flat.iter().all(|(_, y)| y.is_zero()));
        assert_eq!(flat, Subspace2::line(&f, Elem::ZERO));
    }

    #[test]
    fn from_basis_matches_from_poly() {
        let f = gf64();
        let p = LinearizedPoly::monomial(&f, f.generator(), 1);
        let u = Subspace2::from_poly(&f, &p);
        let v = Subspace2::from_basis(&f, u.basis().to_vec()).unwrap();
        assert_eq!(u, v);
        assert!(u.is_scattered(&f));
        assert!(u.is_graph(&f));
        let dup = vec![(Elem::ONE, Elem::ONE), (f.subfield()[2], f.subfield()[2])];
        assert_eq!(Subspace2::from_basis(&f, dup), Err(Error::DependentInputs));
    }

    #[test]
    fn linear_set_of_vertical() {
        let f = gf64();
        let ls = Subspace2::vertical(&f).linear_set(&f);
        assert!(ls.slopes.is_empty());
        assert!(ls.contains_infinity);
    }
}
