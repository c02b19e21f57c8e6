use super::{SemilinearMap, Subspace2};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};
use crate::linpoly::{interpolate_graph, slope, LinearizedPoly};

/// Moves `L_f` off the points `0`, `1` and `∞` by a projectivity.
///
/// Returns `(f', μ)` with `μ(U_f) = U_{f'}`. The identity is tried first,
/// then matrices in lexicographic order of entry indices `(a, b, c, d)`.
pub fn normalize_poly(tower: &FieldTower, f: &LinearizedPoly) -> Result<(LinearizedPoly, SemilinearMap)> {
    let ls = f.linear_set(tower)?;
    if ls.slopes.len() != tower.coset_count() {
        return Err(Error::NotScattered);
    }
    let in_lf = ls.indicator(tower.order());
    // a projective point (x, y) lies in L_f iff x ≠ 0 and y/x ∈ L_f
    let on_set = |x: Elem, y: Elem| !x.is_zero() && in_lf[slope(tower, y, x).index()];
    let admissible = |m: &SemilinearMap| {
        if !m.is_invertible(tower) {
            return false;
        }
        // preimages under the adjugate of ∞ = (0,1), 0 = (1,0), 1 = (1,1)
        let inf = (tower.neg(m.b), m.a);
        let zero = (m.d, tower.neg(m.c));
        let one = (tower.sub(m.d, m.b), tower.sub(m.a, m.c));
        !on_set(inf.0, inf.1) && !on_set(zero.0, zero.1) && !on_set(one.0, one.1)
    };

    let identity = SemilinearMap::identity();
    let mu = if admissible(&identity) {
        identity
    } else {
        let n = tower.order();
        let mut found = None;
        'search: for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let m = SemilinearMap::matrix(Elem(a), Elem(b), Elem(c), Elem(d));
                        if admissible(&m) {
                            found = Some(m);
                            break 'search;
                        }
                    }
                }
            }
        }
        found.expect("a scattered linear set misses some point")
    };

    let pairs: Vec<(Elem, Elem)> = tower
        .basis()
        .iter()
        .map(|&x| mu.apply_vec(tower, x, f.eval(tower, x)))
        .collect();
    let image = interpolate_graph(tower, &pairs)?;
    debug_assert_eq!(
        mu.apply(tower, &Subspace2::from_poly(tower, f))?,
        Subspace2::from_poly(tower, &image)
    );
    Ok((image, mu))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(tower: &FieldTower, f: &LinearizedPoly) -> (LinearizedPoly, SemilinearMap) {
        let (g, mu) = normalize_poly(tower, f).unwrap();
        let ls = g.linear_set(tower).unwrap();
        assert!(!ls.contains(Elem::ZERO) && !ls.contains(Elem::ONE));
        assert_eq!(mu.sigma, 0);
        let image = mu.apply(tower, &Subspace2::from_poly(tower, f)).unwrap();
        assert_eq!(image, Subspace2::from_poly(tower, &g));
        assert!(image.is_graph(tower));
        (g, mu)
    }

    #[test]
    fn already_normalized_is_fixed() {
        let f = FieldTower::with_default(2, 2, 3).unwrap();
        let w = f.generator(); // N(g) ≠ 1
        let p = LinearizedPoly::monomial(&f, w, 1);
        let (g, mu) = check(&f, &p);
        assert_eq!(g, p);
        assert_eq!(mu, SemilinearMap::identity());
    }

    #[test]
    fn frobenius_contains_one_and_gets_moved() {
        let f = FieldTower::with_default(2, 2, 3).unwrap();
        let p = LinearizedPoly::monomial(&f, Elem::ONE, 1);
        assert!(p.linear_set(&f).unwrap().contains(Elem::ONE));
        let (_, mu) = check(&f, &p);
        assert_ne!(mu, SemilinearMap::identity());
    }

    #[test]
    fn nontrivial_kernel_gets_moved_off_zero() {
        // x^q + b·x is scattered for every b and has a kernel when -b is a (q-1)-th power
        let f = FieldTower::with_default(2, 2, 3).unwrap();
        let scattered_with_zero = f
            .nonzero()
            .map(|b| {
                let mut c = vec![Elem::ZERO; 3];
                c[0] = b;
                c[1] = Elem::ONE;
                LinearizedPoly::new(&f, c).unwrap()
            })
            .find(|p| p.is_scattered(&f).unwrap() && p.kernel_dimension(&f) > 0)
            .unwrap();
        check(&f, &scattered_with_zero);
    }

    #[test]
    fn rejects_non_scattered() {
        let f = FieldTower::with_default(2, 2, 3).unwrap();
        assert_eq!(
            normalize_poly(&f, &LinearizedPoly::identity(&f)),
            Err(Error::NotScattered)
        );
    }
}
