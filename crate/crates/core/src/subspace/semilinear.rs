use serde::{Deserialize, Serialize};

use super::{pack, Subspace2};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};

/// An element of `ΓL(2, q^t)` acting as
/// `(x, y) ↦ (a·x^σ + b·y^σ, c·x^σ + d·y^σ)` with `σ: x ↦ x^{p^sigma}`.
/// The automorphism is applied first, then the matrix.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemilinearMap {
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
    pub d: Elem,
    pub sigma: u32,
}

/// `{"matrix": [["a","b"],["c","d"]], "sigma": j}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemilinearJson {
    pub matrix: [[String; 2]; 2],
    pub sigma: u32,
}

impl SemilinearMap {
    pub fn identity() -> Self {
        Self::matrix(Elem::ONE, Elem::ZERO, Elem::ZERO, Elem::ONE)
    }

    pub fn matrix(a: Elem, b: Elem, c: Elem, d: Elem) -> Self {
        SemilinearMap { a, b, c, d, sigma: 0 }
    }

    pub fn scalar(h: Elem) -> Self {
        Self::matrix(h, Elem::ZERO, Elem::ZERO, h)
    }

    pub fn with_sigma(mut self, sigma: u32) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn det(&self, tower: &FieldTower) -> Elem {
        tower.sub(tower.mul(self.a, self.d), tower.mul(self.b, self.c))
    }

    pub fn is_invertible(&self, tower: &FieldTower) -> bool {
        !self.det(tower).is_zero()
    }

    #[inline]
    pub fn apply_vec(&self, tower: &FieldTower, x: Elem, y: Elem) -> (Elem, Elem) {
        let xs = tower.automorphism(x, self.sigma);
        let ys = tower.automorphism(y, self.sigma);
        (
            tower.add(tower.mul(self.a, xs), tower.mul(self.b, ys)),
            tower.add(tower.mul(self.c, xs), tower.mul(self.d, ys)),
        )
    }

    /// The image subspace `λ(U)`.
    pub fn apply(&self, tower: &FieldTower, u: &Subspace2) -> Result<Subspace2> {
        if !self.is_invertible(tower) {
            return Err(Error::SingularMatrix);
        }
        let order = tower.order();
        let mut elements: Vec<u64> = u
            .iter()
            .map(|(x, y)| {
                let (x2, y2) = self.apply_vec(tower, x, y);
                pack(order, x2, y2)
            })
            .collect();
        elements.sort_unstable();
        let basis = u
            .basis()
            .iter()
            .map(|&(x, y)| self.apply_vec(tower, x, y))
            .collect();
        Ok(Subspace2::from_sorted_parts(order, basis, elements))
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, tower: &FieldTower, first: &SemilinearMap) -> SemilinearMap {
        // M2 (M1 v^{σ1})^{σ2} = M2 M1^{σ2} v^{σ1 σ2}
        let s = |e: Elem| tower.automorphism(e, self.sigma);
        let (a1, b1, c1, d1) = (s(first.a), s(first.b), s(first.c), s(first.d));
        let dot = |x: Elem, y: Elem, z: Elem, w: Elem| tower.add(tower.mul(x, y), tower.mul(z, w));
        SemilinearMap {
            a: dot(self.a, a1, self.b, c1),
            b: dot(self.a, b1, self.b, d1),
            c: dot(self.c, a1, self.d, c1),
            d: dot(self.c, b1, self.d, d1),
            sigma: (self.sigma + first.sigma) % tower.degree(),
        }
    }

    pub fn inverse(&self, tower: &FieldTower) -> Result<SemilinearMap> {
        let inv_det = tower.inv(self.det(tower)).map_err(|_| Error::SingularMatrix)?;
        let back = (tower.degree() - self.sigma % tower.degree()) % tower.degree();
        let s = |e: Elem| tower.automorphism(tower.mul(e, inv_det), back);
        Ok(SemilinearMap {
            a: s(self.d),
            b: s(tower.neg(self.b)),
            c: s(tower.neg(self.c)),
            d: s(self.a),
            sigma: back,
        })
    }

    pub fn to_json(&self, tower: &FieldTower) -> SemilinearJson {
        let fmt = |e: Elem| tower.format_elem(e);
        SemilinearJson {
            matrix: [[fmt(self.a), fmt(self.b)], [fmt(self.c), fmt(self.d)]],
            sigma: self.sigma,
        }
    }

    pub fn from_json(tower: &FieldTower, json: &SemilinearJson) -> Result<Self> {
        let [[a, b], [c, d]] = &json.matrix;
        let map = SemilinearMap {
            a: tower.parse_elem(a)?,
            b: tower.parse_elem(b)?,
            c: tower.parse_elem(c)?,
            d: tower.parse_elem(d)?,
            sigma: json.sigma,
        };
        if map.sigma >= tower.degree() {
            return Err(Error::InvalidParameter(format!(
                "sigma must lie in [0, {})",
                tower.degree()
            )));
        }
        if !map.is_invertible(tower) {
            return Err(Error::SingularMatrix);
        }
        Ok(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linpoly::LinearizedPoly;

    fn gf64() -> FieldTower {
        FieldTower::with_default(2, 2, 3).unwrap()
    }

    #[test]
    fn identity_and_scalar_action() {
        let f = gf64();
        let g = f.generator();
        let p = LinearizedPoly::monomial(&f, g, 1);
        let u = Subspace2::from_poly(&f, &p);
        assert_eq!(SemilinearMap::identity().apply(&f, &u).unwrap(), u);
        let h = f.pow(g, 5);
        assert_eq!(SemilinearMap::scalar(h).apply(&f, &u).unwrap(), u.scale(&f, h));
        let singular = SemilinearMap::matrix(Elem::ONE, Elem::ONE, Elem::ONE, Elem::ONE);
        assert_eq!(singular.apply(&f, &u), Err(Error::SingularMatrix));
    }

    #[test]
    fn diagonal_map_untwists_pseudoregulus_graph() {
        let f = gf64();
        let w = f.pow(f.generator(), 2);
        let u = Subspace2::from_poly(&f, &LinearizedPoly::monomial(&f, w, 1));
        let m = SemilinearMap::matrix(Elem::ONE, Elem::ZERO, Elem::ZERO, f.inv(w).unwrap());
        let target = Subspace2::from_poly(&f, &LinearizedPoly::monomial(&f, Elem::ONE, 1));
        assert_eq!(m.apply(&f, &u).unwrap(), target);
    }

    #[test]
    fn composition_and_inverse_laws() {
        let f = gf64();
        let g = f.generator();
        let u = Subspace2::from_poly(&f, &LinearizedPoly::monomial(&f, g, 2));
        let l1 = SemilinearMap::matrix(g, Elem::ONE, f.pow(g, 9), Elem::ZERO).with_sigma(1);
        let l2 = SemilinearMap::matrix(Elem::ONE, f.pow(g, 3), Elem::ZERO, f.pow(g, 40)).with_sigma(4);
        let both = l2.compose(&f, &l1);
        assert_eq!(
            both.apply(&f, &u).unwrap(),
            l2.apply(&f, &l1.apply(&f, &u).unwrap()).unwrap()
        );
        let inv = both.inverse(&f).unwrap();
        assert_eq!(inv.compose(&f, &both), SemilinearMap::identity());
        assert_eq!(both.compose(&f, &inv), SemilinearMap::identity());
    }

    #[test]
    fn json_round_trip() {
        let f = gf64();
        let m = SemilinearMap::matrix(Elem::ONE, f.generator(), Elem::ZERO, Elem::ONE).with_sigma(3);
        let js = m.to_json(&f);
        assert_eq!(js.matrix[0][1], "g^1");
        assert_eq!(SemilinearMap::from_json(&f, &js).unwrap(), m);
    }
}
