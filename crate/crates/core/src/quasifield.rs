//! The quasifield `Q_f` of a scattered polynomial with `0, 1 ∉ L_f`, and
//! exhaustive checks of the quasifield axioms on any multiplication table.
//!
//! The product is `x∘m = x·m` for `m ∉ L_f` and `x∘m = h^{-1}·f(h·x)` for
//! `m ∈ L_f`, where `h ≠ 0` is any solution of `f(h) = m·h`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::linpoly::{slope, LinearSet, LinearizedPoly};

/// Tables are materialized up to this field order.
pub const TABLE_LIMIT: u32 = 1 << 10;

/// A binary operation `(x, m) ↦ x∘m` on the elements of a tower.
pub trait Product: Sync {
    fn circ(&self, x: Elem, m: Elem) -> Elem;
}

pub struct Quasifield<'a> {
    tower: &'a FieldTower,
    f: LinearizedPoly,
    linear_set: LinearSet,
    in_lf: Vec<bool>,
    // least-index h with f(h) = m·h, for m ∈ L_f
    fiber_rep: Vec<Elem>,
    table: Option<Vec<u32>>,
}

impl<'a> Quasifield<'a> {
    pub fn new(tower: &'a FieldTower, f: &LinearizedPoly) -> Result<Self> {
        if tower.q() <= 2 {
            return Err(Error::Hypothesis(format!(
                "the quasifield needs q > 2, got q = {}",
                tower.q()
            )));
        }
        let linear_set = f.linear_set(tower)?;
        if linear_set.slopes.len() != tower.coset_count() {
            return Err(Error::NotScattered);
        }
        if linear_set.contains(Elem::ZERO) {
            return Err(Error::NotNormalized("0"));
        }
        if linear_set.contains(Elem::ONE) {
            return Err(Error::NotNormalized("1"));
        }
        let n = tower.order() as usize;
        let in_lf = linear_set.indicator(tower.order());
        let mut fiber_rep = vec![Elem::ZERO; n];
        for h in tower.nonzero() {
            let m = slope(tower, f.eval(tower, h), h);
            if fiber_rep[m.index()].is_zero() {
                fiber_rep[m.index()] = h;
            }
        }
        let mut qf = Quasifield {
            tower,
            f: f.clone(),
            linear_set,
            in_lf,
            fiber_rep,
            table: None,
        };
        if tower.order() <= TABLE_LIMIT {
            let table = (0..n * n)
                .into_par_iter()
                .map(|k| qf.compute(Elem((k / n) as u32), Elem((k % n) as u32)).0)
                .collect();
            qf.table = Some(table);
        }
        Ok(qf)
    }

    pub fn tower(&self) -> &FieldTower {
        self.tower
    }

    pub fn poly(&self) -> &LinearizedPoly {
        &self.f
    }

    pub fn linear_set(&self) -> &LinearSet {
        &self.linear_set
    }

    /// The chosen `h` for `m ∈ L_f`.
    pub fn fiber_rep(&self, m: Elem) -> Option<Elem> {
        self.in_lf[m.index()].then(|| self.fiber_rep[m.index()])
    }

    fn compute(&self, x: Elem, m: Elem) -> Elem {
        let tw = self.tower;
        if !self.in_lf[m.index()] {
            return tw.mul(x, m);
        }
        let h = self.fiber_rep[m.index()];
        tw.mul(tw.inv(h).unwrap(), self.f.eval(tw, tw.mul(h, x)))
    }

    /// The product does not depend on which `h` of the fiber is used.
    pub fn is_well_defined(&self) -> bool {
        let tw = self.tower;
        tw.nonzero().all(|h| {
            let m = slope(tw, self.f.eval(tw, h), h);
            let h_inv = tw.inv(h).unwrap();
            tw.elements()
                .all(|x| tw.mul(h_inv, self.f.eval(tw, tw.mul(h, x))) == self.circ(x, m))
        })
    }
}

impl Product for Quasifield<'_> {
    #[inline]
    fn circ(&self, x: Elem, m: Elem) -> Elem {
        match &self.table {
            Some(t) => Elem(t[x.index() * self.tower.order() as usize + m.index()]),
            None => self.compute(x, m),
        }
    }
}

/// An explicit multiplication table, for controls and mutation tests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableProduct {
    order: u32,
    table: Vec<u32>,
}

impl TableProduct {
    pub fn from_product<P: Product>(tower: &FieldTower, product: &P) -> Self {
        let n = tower.order() as usize;
        TableProduct {
            order: tower.order(),
            table: (0..n * n)
                .map(|k| product.circ(Elem((k / n) as u32), Elem((k % n) as u32)).0)
                .collect(),
        }
    }

    /// The field multiplication itself.
    pub fn field(tower: &FieldTower) -> Self {
        struct FieldMul<'a>(&'a FieldTower);
        impl Product for FieldMul<'_> {
            fn circ(&self, x: Elem, m: Elem) -> Elem {
                self.0.mul(x, m)
            }
        }
        Self::from_product(tower, &FieldMul(tower))
    }

    pub fn set(&mut self, x: Elem, m: Elem, value: Elem) {
        self.table[x.index() * self.order as usize + m.index()] = value.0;
    }

    /// Exchanges the entries at `(x1, m1)` and `(x2, m2)`.
    pub fn swap(&mut self, (x1, m1): (Elem, Elem), (x2, m2): (Elem, Elem)) {
        let n = self.order as usize;
        self.table.swap(x1.index() * n + m1.index(), x2.index() * n + m2.index());
    }
}

impl Product for TableProduct {
    #[inline]
    fn circ(&self, x: Elem, m: Elem) -> Elem {
        Elem(self.table[x.index() * self.order as usize + m.index()])
    }
}

/// The first violated axiom found, with its witnesses in canonical text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub axiom: String,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    #[serde(rename = "loop")]
    pub loop_ok: bool,
    pub left_distributive: bool,
    pub solvability: bool,
    pub counterexample: Option<Counterexample>,
}

impl AxiomCheck {
    pub fn passed(&self) -> bool {
        self.loop_ok && self.left_distributive && self.solvability
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StructureFlags {
    pub right_distributive: bool,
    pub associative: bool,
}

/// Everything the `quasifield` command reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    #[serde(rename = "loop")]
    pub loop_ok: bool,
    pub left_distributive: bool,
    pub solvability: bool,
    pub kernel_order: usize,
    pub right_distributive: bool,
    pub associative: bool,
    pub counterexample: Option<Counterexample>,
}

fn witness(tower: &FieldTower, axiom: &str, elems: &[Elem]) -> Counterexample {
    Counterexample {
        axiom: axiom.to_string(),
        witness: elems.iter().map(|&e| tower.format_elem(e)).collect(),
    }
}

fn is_permutation(n: usize, values: impl Iterator<Item = Elem>) -> bool {
    let mut seen = vec![false; n];
    for v in values {
        if std::mem::replace(&mut seen[v.index()], true) {
            return false;
        }
    }
    true
}

fn check_loop<P: Product>(tower: &FieldTower, prod: &P) -> Option<Counterexample> {
    let n = tower.order() as usize;
    for m in tower.elements() {
        if prod.circ(Elem::ONE, m) != m {
            return Some(witness(tower, "left identity", &[m]));
        }
        if prod.circ(m, Elem::ONE) != m {
            return Some(witness(tower, "right identity", &[m]));
        }
        if !prod.circ(m, Elem::ZERO).is_zero() || !prod.circ(Elem::ZERO, m).is_zero() {
            return Some(witness(tower, "zero", &[m]));
        }
    }
    // rows x ↦ x∘m and columns m ↦ x∘m are permutations for nonzero m, x
    let bad_row = (1..n as u32).into_par_iter().find_first(|&m| {
        !is_permutation(n, tower.elements().map(|x| prod.circ(x, Elem(m))))
    });
    if let Some(m) = bad_row {
        return Some(witness(tower, "row permutation", &[Elem(m)]));
    }
    let bad_col = (1..n as u32).into_par_iter().find_first(|&x| {
        !is_permutation(n, tower.elements().map(|m| prod.circ(Elem(x), m)))
    });
    bad_col.map(|x| witness(tower, "column permutation", &[Elem(x)]))
}

fn check_left_distributive<P: Product>(tower: &FieldTower, prod: &P) -> Option<Counterexample> {
    let n = tower.order();
    (0..n as u64 * n as u64)
        .into_par_iter()
        .find_map_first(|k| {
            let x = Elem((k / n as u64) as u32);
            let y = Elem((k % n as u64) as u32);
            let xy = tower.add(x, y);
            tower
                .elements()
                .find(|&m| prod.circ(xy, m) != tower.add(prod.circ(x, m), prod.circ(y, m)))
                .map(|m| witness(tower, "left distributivity", &[x, y, m]))
        })
}

fn check_solvability<P: Product>(tower: &FieldTower, prod: &P) -> Option<Counterexample> {
    let n = tower.order();
    (0..n as u64 * n as u64)
        .into_par_iter()
        .find_map_first(|k| {
            let a = Elem((k / n as u64) as u32);
            let b = Elem((k % n as u64) as u32);
            if a == b {
                return None;
            }
            // x ↦ x∘a - x∘b must hit every c exactly once
            let mut hits = vec![0u8; n as usize];
            for x in tower.elements() {
                let c = tower.sub(prod.circ(x, a), prod.circ(x, b));
                hits[c.index()] = hits[c.index()].saturating_add(1);
            }
            hits.iter()
                .position(|&h| h != 1)
                .map(|c| witness(tower, "unique solvability", &[a, b, Elem(c as u32)]))
        })
}

/// Exhaustive check of the loop axiom on `Q^*`, left distributivity, and
/// unique solvability of `x∘a = x∘b + c` for `a ≠ b`.
pub fn verify_axioms<P: Product>(tower: &FieldTower, prod: &P) -> AxiomCheck {
    let loop_fail = check_loop(tower, prod);
    let dist_fail = check_left_distributive(tower, prod);
    let solv_fail = check_solvability(tower, prod);
    AxiomCheck {
        loop_ok: loop_fail.is_none(),
        left_distributive: dist_fail.is_none(),
        solvability: solv_fail.is_none(),
        counterexample: loop_fail.or(dist_fail).or(solv_fail),
    }
}

/// Number of `x` solving `x∘a = x∘b + c`. The axiom only quantifies over
/// `a ≠ b`, so `a = b` is rejected.
pub fn solutions_count<P: Product>(tower: &FieldTower, prod: &P, a: Elem, b: Elem, c: Elem) -> Result<usize> {
    if a == b {
        return Err(Error::InvalidParameter("solvability needs a ≠ b".into()));
    }
    Ok(tower
        .elements()
        .filter(|&x| prod.circ(x, a) == tower.add(prod.circ(x, b), c))
        .count())
}

/// `K(Q) = {k : k∘(x+y) = k∘x + k∘y and k∘(x∘y) = (k∘x)∘y for all x, y}`.
pub fn kernel<P: Product>(tower: &FieldTower, prod: &P) -> Vec<Elem> {
    let n = tower.order();
    (0..n)
        .into_par_iter()
        .map(Elem)
        .filter(|&k| {
            tower.elements().all(|x| {
                let kx = prod.circ(k, x);
                tower.elements().all(|y| {
                    prod.circ(k, tower.add(x, y)) == tower.add(kx, prod.circ(k, y))
                        && prod.circ(k, prod.circ(x, y)) == prod.circ(kx, y)
                })
            })
        })
        .collect()
}

pub fn structure_flags<P: Product>(tower: &FieldTower, prod: &P) -> StructureFlags {
    let n = tower.order();
    let right_distributive = !(0..n).into_par_iter().map(Elem).any(|x| {
        tower.elements().any(|m| {
            let xm = prod.circ(x, m);
            tower
                .elements()
                .any(|k| prod.circ(x, tower.add(m, k)) != tower.add(xm, prod.circ(x, k)))
        })
    });
    let associative = !(0..n).into_par_iter().map(Elem).any(|x| {
        tower.elements().any(|y| {
            let xy = prod.circ(x, y);
            tower
                .elements()
                .any(|z| prod.circ(xy, z) != prod.circ(x, prod.circ(y, z)))
        })
    });
    StructureFlags {
        right_distributive,
        associative,
    }
}

pub fn full_report<P: Product>(tower: &FieldTower, prod: &P) -> AxiomReport {
    let check = verify_axioms(tower, prod);
    let flags = structure_flags(tower, prod);
    AxiomReport {
        loop_ok: check.loop_ok,
        left_distributive: check.left_distributive,
        solvability: check.solvability,
        kernel_order: kernel(tower, prod).len(),
        right_distributive: flags.right_distributive,
        associative: flags.associative,
        counterexample: check.counterexample,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf64() -> FieldTower {
        FieldTower::with_default(2, 2, 3).unwrap()
    }

    /// `ω·x^q` with `N(ω) ∉ {0, 1}` has `0, 1 ∉ L_f`.
    fn pseudoregulus(tower: &FieldTower) -> LinearizedPoly {
        let w = tower
            .nonzero()
            .find(|&w| tower.rel_norm(w) != Elem::ONE)
            .unwrap();
        LinearizedPoly::monomial(tower, w, 1)
    }

    #[test]
    fn product_cases() {
        let f = gf64();
        let p = pseudoregulus(&f);
        let q = Quasifield::new(&f, &p).unwrap();
        for m in f.elements() {
            assert_eq!(q.circ(Elem::ONE, m), m);
            for &alpha in f.subfield() {
                assert_eq!(q.circ(alpha, m), f.mul(alpha, m));
            }
            if !q.linear_set().contains(m) {
                for x in f.elements() {
                    assert_eq!(q.circ(x, m), f.mul(x, m));
                }
            }
        }
        assert!(q.is_well_defined());
    }

    #[test]
    fn axioms_and_kernel() {
        let f = gf64();
        let q = Quasifield::new(&f, &pseudoregulus(&f)).unwrap();
        let report = full_report(&f, &q);
        assert!(report.loop_ok && report.left_distributive && report.solvability);
        assert_eq!(report.kernel_order, 4);
        assert_eq!(kernel(&f, &q), f.subfield().to_vec());
        assert!(!report.right_distributive);
        assert!(!report.associative);
        assert_eq!(report.counterexample, None);
    }

    #[test]
    fn field_control() {
        let f = gf64();
        let t = TableProduct::field(&f);
        assert!(verify_axioms(&f, &t).passed());
        let flags = structure_flags(&f, &t);
        assert!(flags.right_distributive && flags.associative);
        assert_eq!(kernel(&f, &t).len(), 64);
    }

    #[test]
    fn tampered_table_fails() {
        let f = gf64();
        let q = Quasifield::new(&f, &pseudoregulus(&f)).unwrap();
        let mut t = TableProduct::from_product(&f, &q);
        let g = f.generator();
        t.swap((g, g), (g, f.pow(g, 2)));
        let check = verify_axioms(&f, &t);
        assert!(!check.passed());
        assert!(check.counterexample.is_some());
    }

    #[test]
    fn equal_coefficients_rejected_in_solvability() {
        let f = gf64();
        let t = TableProduct::field(&f);
        assert!(solutions_count(&f, &t, Elem::ONE, Elem::ONE, Elem::ZERO).is_err());
        assert_eq!(solutions_count(&f, &t, Elem::ONE, Elem::ZERO, f.generator()).unwrap(), 1);
    }

    #[test]
    fn preconditions() {
        let f = gf64();
        let frob = LinearizedPoly::monomial(&f, Elem::ONE, 1);
        assert!(matches!(Quasifield::new(&f, &frob), Err(Error::NotNormalized("1"))));
        assert!(matches!(
            Quasifield::new(&f, &LinearizedPoly::identity(&f)),
            Err(Error::NotScattered)
        ));
        let f2 = FieldTower::with_default(2, 1, 5).unwrap();
        let p = LinearizedPoly::monomial(&f2, f2.generator(), 1);
        assert!(matches!(Quasifield::new(&f2, &p), Err(Error::Hypothesis(_))));
    }
}
