//! Deciding whether `λ(U_f) = U_{f'}` for some `λ ∈ ΓL(2, q^t)`.
//!
//! The production search fixes the automorphism σ and the first matrix row
//! `(a, b)`. Then `u(x) = a·x^σ + b·f(x)^σ` and the second row `(c, d)` must
//! satisfy `c·x^σ + d·f(x)^σ = f'(u(x))`. Both sides are additive and
//! σ-semilinear over `F_q`, so it suffices to check the equation on an
//! `F_q`-basis, and the two unknowns are pinned down by two independent basis
//! equations. Since `αλ` works whenever `λ` does (`α ∈ F_q^*`), only rows
//! `(a, b)` whose first nonzero entry is a coset representative of `F_q^*`
//! are visited.

use rayon::prelude::*;

use super::{Group, SearchOptions, SemilinearMap};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::linpoly::LinearizedPoly;

/// Guard on `q^{2t}`, the number of first rows per automorphism.
pub const SEARCH_LIMIT: u64 = 1 << 22;
/// Largest `q^t` for which the oracle enumerates all of `ΓL(2, q^t)`.
pub const ORACLE_LIMIT: u32 = 32;

enum Row2 {
    /// Rows `i0`, `i1` of the `t×2` system are independent.
    Independent { i0: usize, i1: usize, inv_det: Elem },
    /// `f(x)^σ = κ·x^σ` on the basis: `f` is `F_{q^t}`-linear.
    Proportional { kappa: Elem },
}

/// Per-automorphism precomputation on the fixed `F_q`-basis.
struct Frame {
    sigma: u32,
    xs: Vec<Elem>,
    ys: Vec<Elem>,
    system: Row2,
}

/// Solutions `(c, d)` for one first row, with `ad - bc ≠ 0`.
enum Rows {
    None,
    /// Unique solution.
    One(Elem, Elem),
    /// A line of solutions; `count` of them are invertible, the least-index
    /// invertible one is given.
    Many { c: Elem, d: Elem, count: u64 },
}

struct Search<'a> {
    tower: &'a FieldTower,
    target: Vec<Elem>,
    frames: Vec<Frame>,
    row_rep: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(tower: &'a FieldTower, f: &LinearizedPoly, target: &LinearizedPoly, sigmas: &[u32]) -> Self {
        let basis = tower.basis();
        let frames = sigmas
            .iter()
            .map(|&sigma| {
                let xs: Vec<Elem> = basis.iter().map(|&x| tower.automorphism(x, sigma)).collect();
                let ys: Vec<Elem> = basis
                    .iter()
                    .map(|&x| tower.automorphism(f.eval(tower, x), sigma))
                    .collect();
                let t = xs.len();
                let independent = (0..t)
                    .flat_map(|i| (i + 1..t).map(move |j| (i, j)))
                    .find_map(|(i, j)| {
                        let det = tower.sub(tower.mul(xs[i], ys[j]), tower.mul(xs[j], ys[i]));
                        tower.inv(det).ok().map(|inv_det| (i, j, inv_det))
                    });
                let system = match independent {
                    Some((i0, i1, inv_det)) => Row2::Independent { i0, i1, inv_det },
                    None => Row2::Proportional {
                        kappa: tower.div(ys[0], xs[0]).expect("basis vectors are nonzero"),
                    },
                };
                Frame { sigma, xs, ys, system }
            })
            .collect();
        let mut row_rep = vec![false; tower.order() as usize];
        for &r in tower.coset_reps() {
            row_rep[r.index()] = true;
        }
        Search {
            tower,
            target: target.table(tower),
            frames,
            row_rep,
        }
    }

    #[inline]
    fn visits(&self, a: Elem, b: Elem) -> bool {
        if a.is_zero() {
            self.row_rep[b.index()]
        } else {
            self.row_rep[a.index()]
        }
    }

    #[inline]
    fn solve(&self, frame: &Frame, a: Elem, b: Elem, z: &mut [Elem]) -> Rows {
        let tw = self.tower;
        for (i, zi) in z.iter_mut().enumerate() {
            let u = tw.add(tw.mul(a, frame.xs[i]), tw.mul(b, frame.ys[i]));
            *zi = self.target[u.index()];
        }
        match frame.system {
            Row2::Independent { i0, i1, inv_det } => {
                let (x0, y0, x1, y1) = (frame.xs[i0], frame.ys[i0], frame.xs[i1], frame.ys[i1]);
                let c = tw.mul(tw.sub(tw.mul(z[i0], y1), tw.mul(z[i1], y0)), inv_det);
                let d = tw.mul(tw.sub(tw.mul(x0, z[i1]), tw.mul(x1, z[i0])), inv_det);
                let consistent = (0..z.len()).all(|i| {
                    i == i0
                        || i == i1
                        || tw.add(tw.mul(c, frame.xs[i]), tw.mul(d, frame.ys[i])) == z[i]
                });
                if !consistent {
                    return Rows::None;
                }
                let det = tw.sub(tw.mul(a, d), tw.mul(b, c));
                if det.is_zero() {
                    Rows::None
                } else {
                    Rows::One(c, d)
                }
            }
            Row2::Proportional { kappa } => {
                // (c + dκ)·x_i = z_i for all i
                let zeta = tw.div(z[0], frame.xs[0]).unwrap();
                if (1..z.len()).any(|i| tw.mul(zeta, frame.xs[i]) != z[i]) {
                    return Rows::None;
                }
                // c = ζ - dκ, det(d) = d(a + bκ) - bζ
                let slope = tw.add(a, tw.mul(b, kappa));
                let offset = tw.neg(tw.mul(b, zeta));
                let row_for = |d: Elem| (tw.sub(zeta, tw.mul(d, kappa)), d);
                if !slope.is_zero() {
                    let d = if offset.is_zero() { Elem::ONE } else { Elem::ZERO };
                    let (c, d) = row_for(d);
                    Rows::Many {
                        c,
                        d,
                        count: tw.order() as u64 - 1,
                    }
                } else if !offset.is_zero() {
                    let (c, d) = row_for(Elem::ZERO);
                    Rows::Many {
                        c,
                        d,
                        count: tw.order() as u64,
                    }
                } else {
                    Rows::None
                }
            }
        }
    }

    fn first_witness(&self) -> Option<SemilinearMap> {
        let n = self.tower.order();
        let t = self.tower.t() as usize;
        let outer = self.frames.len() as u64 * n as u64;
        (0..outer).into_par_iter().find_map_first(|k| {
            let frame = &self.frames[(k / n as u64) as usize];
            let a = Elem((k % n as u64) as u32);
            let mut z = vec![Elem::ZERO; t];
            (0..n).map(Elem).find_map(|b| {
                if !self.visits(a, b) {
                    return None;
                }
                match self.solve(frame, a, b, &mut z) {
                    Rows::None => None,
                    Rows::One(c, d) | Rows::Many { c, d, .. } => Some(SemilinearMap {
                        a,
                        b,
                        c,
                        d,
                        sigma: frame.sigma,
                    }),
                }
            })
        })
    }

    /// Number of maps in the searched coset of the group, all of `F_q^*`
    /// scalings included.
    fn count(&self) -> u64 {
        let n = self.tower.order();
        let t = self.tower.t() as usize;
        let outer = self.frames.len() as u64 * n as u64;
        let reps: u64 = (0..outer)
            .into_par_iter()
            .map(|k| {
                let frame = &self.frames[(k / n as u64) as usize];
                let a = Elem((k % n as u64) as u32);
                let mut z = vec![Elem::ZERO; t];
                (0..n)
                    .map(Elem)
                    .filter(|&b| self.visits(a, b))
                    .map(|b| match self.solve(frame, a, b, &mut z) {
                        Rows::None => 0,
                        Rows::One(..) => 1,
                        Rows::Many { count, .. } => count,
                    })
                    .sum::<u64>()
            })
            .sum();
        reps * (self.tower.q() as u64 - 1)
    }
}

fn check_search_guard(tower: &FieldTower, opts: SearchOptions) -> Result<()> {
    let size = tower.order() as u64 * tower.order() as u64;
    if size > SEARCH_LIMIT && !opts.force {
        return Err(Error::GuardExceeded {
            what: "equivalence search",
            size,
            limit: SEARCH_LIMIT,
        });
    }
    Ok(())
}

fn sigmas(tower: &FieldTower, group: Group) -> Vec<u32> {
    match group {
        Group::GL => vec![0],
        Group::GammaL => (0..tower.degree()).collect(),
    }
}

/// A witness `λ ∈ ΓL(2, q^t)` with `λ(U_f) = U_{f'}`, or `None`.
///
/// The witness is the least one in the order (σ, a, b) among the visited
/// first rows; for `f = f'` the identity is returned directly.
pub fn equivalence_fast(
    tower: &FieldTower,
    f: &LinearizedPoly,
    target: &LinearizedPoly,
    opts: SearchOptions,
) -> Result<Option<SemilinearMap>> {
    if f.is_zero() || target.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    check_search_guard(tower, opts)?;
    if f == target {
        return Ok(Some(SemilinearMap::identity()));
    }
    Ok(Search::new(tower, f, target, &sigmas(tower, Group::GammaL)).first_witness())
}

/// Brute force over every invertible matrix and automorphism, comparing
/// `λ(U_f)` with `U_{f'}` point by point. Only for `q^t ≤ 32`.
pub fn equivalence_oracle(
    tower: &FieldTower,
    f: &LinearizedPoly,
    target: &LinearizedPoly,
) -> Result<Option<SemilinearMap>> {
    let n = tower.order();
    if n > ORACLE_LIMIT {
        return Err(Error::GuardExceeded {
            what: "oracle enumeration",
            size: n as u64,
            limit: ORACLE_LIMIT as u64,
        });
    }
    if f.is_zero() || target.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let src = f.table(tower);
    let dst = target.table(tower);
    let outer = tower.degree() as u64 * n as u64;
    let found = (0..outer).into_par_iter().find_map_first(|k| {
        let sigma = (k / n as u64) as u32;
        let a = Elem((k % n as u64) as u32);
        for b in tower.elements() {
            for c in tower.elements() {
                for d in tower.elements() {
                    let lambda = SemilinearMap { a, b, c, d, sigma };
                    if !lambda.is_invertible(tower) {
                        continue;
                    }
                    let maps_into = tower.nonzero().all(|x| {
                        let (x2, y2) = lambda.apply_vec(tower, x, src[x.index()]);
                        dst[x2.index()] == y2
                    });
                    if maps_into {
                        return Some(lambda);
                    }
                }
            }
        }
        None
    });
    Ok(found)
}

/// `S = |{λ ∈ G : λ(U_f) = U_f}|` for `G = GL(2, q^t)` or `ΓL(2, q^t)`.
pub fn subspace_stabilizer_size(
    tower: &FieldTower,
    f: &LinearizedPoly,
    group: Group,
    opts: SearchOptions,
) -> Result<u64> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    check_search_guard(tower, opts)?;
    Ok(Search::new(tower, f, f, &sigmas(tower, group)).count())
}

/// Order of the stabilizer of the spread `B_f` in `G`, computed as
/// `(q^t - 1)·S/(q - 1)`: every such map sends `U_f` to some `hU_f`, and the
/// scalars fixing `U_f` are exactly `F_q^*`.
pub fn stabilizer_order(
    tower: &FieldTower,
    f: &LinearizedPoly,
    group: Group,
    opts: SearchOptions,
) -> Result<u64> {
    if tower.q() <= 3 {
        return Err(Error::Hypothesis(format!(
            "stabilizer orders need q > 3, got q = {}",
            tower.q()
        )));
    }
    if !f.is_scattered(tower)? {
        return Err(Error::NotScattered);
    }
    let s = subspace_stabilizer_size(tower, f, group, opts)?;
    Ok((tower.order() as u64 - 1) * s / (tower.q() as u64 - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::Subspace2;

    fn frob(tower: &FieldTower, s: u32) -> LinearizedPoly {
        LinearizedPoly::monomial(tower, Elem::ONE, s)
    }

    fn check_witness(tower: &FieldTower, f: &LinearizedPoly, g: &LinearizedPoly, w: &SemilinearMap) {
        let image = w.apply(tower, &Subspace2::from_poly(tower, f)).unwrap();
        assert_eq!(image, Subspace2::from_poly(tower, g));
    }

    #[test]
    fn reflexive_gives_identity() {
        let f = FieldTower::with_default(2, 2, 3).unwrap();
        let p = frob(&f, 1);
        let w = equivalence_fast(&f, &p, &p, SearchOptions::default()).unwrap();
        assert_eq!(w, Some(SemilinearMap::identity()));
    }

    #[test]
    fn frobenius_powers_at_q4_t5() {
        let f = FieldTower::with_default(2, 2, 5).unwrap();
        let opts = SearchOptions::default();
        let w = equivalence_fast(&f, &frob(&f, 1), &frob(&f, 4), opts).unwrap().unwrap();
        check_witness(&f, &frob(&f, 1), &frob(&f, 4), &w);
        assert_eq!(equivalence_fast(&f, &frob(&f, 1), &frob(&f, 2), opts).unwrap(), None);
    }

    #[test]
    fn proportional_system_is_handled() {
        // f = g·x is F_{q^t}-linear, so every basis row is proportional
        let f = FieldTower::with_default(3, 1, 3).unwrap();
        let lin = LinearizedPoly::monomial(&f, f.generator(), 0);
        let other = LinearizedPoly::monomial(&f, f.pow(f.generator(), 5), 0);
        let w = equivalence_fast(&f, &lin, &other, SearchOptions::default()).unwrap().unwrap();
        check_witness(&f, &lin, &other, &w);
        assert_eq!(equivalence_fast(&f, &frob(&f, 1), &lin, SearchOptions::default()).unwrap(), None);
        assert_eq!(equivalence_fast(&f, &lin, &frob(&f, 1), SearchOptions::default()).unwrap(), None);
    }

    #[test]
    fn oracle_agrees_on_small_case() {
        let f = FieldTower::with_default(3, 1, 3).unwrap();
        let lin = LinearizedPoly::monomial(&f, f.generator(), 0);
        assert_eq!(equivalence_oracle(&f, &frob(&f, 1), &lin).unwrap(), None);
        let w = equivalence_oracle(&f, &frob(&f, 1), &frob(&f, 2)).unwrap().unwrap();
        check_witness(&f, &frob(&f, 1), &frob(&f, 2), &w);
    }

    #[test]
    fn guards() {
        let f = FieldTower::with_default(2, 2, 3).unwrap();
        assert!(matches!(
            equivalence_oracle(&f, &frob(&f, 1), &frob(&f, 1)),
            Err(Error::GuardExceeded { .. })
        ));
        let big = FieldTower::with_default(2, 1, 12).unwrap();
        assert!(matches!(
            equivalence_fast(&big, &frob(&big, 1), &frob(&big, 5), SearchOptions::default()),
            Err(Error::GuardExceeded { .. })
        ));
        let small = FieldTower::with_default(3, 1, 3).unwrap();
        assert!(matches!(
            stabilizer_order(&small, &frob(&small, 1), Group::GL, SearchOptions::default()),
            Err(Error::Hypothesis(_))
        ));
    }
}
