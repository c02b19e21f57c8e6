//! `F_q`-linearized polynomials `f(x) = Σ a_i x^{q^i}` over `F_{q^t}`,
//! stored reduced modulo `x^{q^t} - x` with exactly `t` coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldTower};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearizedPoly {
    coeffs: Vec<Elem>,
}

/// On-disk form: `{"coeffs": ["0", "g^5", "1"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub coeffs: Vec<String>,
}

/// The slopes `{f(x)/x : x ≠ 0}`, ascending by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSet {
    pub slopes: Vec<Elem>,
    /// Only subspace-derived sets can contain the point `⟨(0,1)⟩`.
    pub contains_infinity: bool,
}

impl LinearSet {
    pub fn contains(&self, m: Elem) -> bool {
        self.slopes.binary_search(&m).is_ok()
    }

    /// Number of projective points.
    pub fn len(&self) -> usize {
        self.slopes.len() + usize::from(self.contains_infinity)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Membership bitmap indexed by element.
    pub fn indicator(&self, order: u32) -> Vec<bool> {
        let mut out = vec![false; order as usize];
        for m in &self.slopes {
            out[m.index()] = true;
        }
        out
    }
}

impl LinearizedPoly {
    pub fn new(tower: &FieldTower, coeffs: Vec<Elem>) -> Result<Self> {
        let t = tower.t() as usize;
        if coeffs.len() != t {
            return Err(Error::CoeffCount {
                expected: t,
                found: coeffs.len(),
            });
        }
        if let Some(bad) = coeffs.iter().find(|c| c.0 >= tower.order()) {
            return Err(Error::ElementOutOfRange {
                index: bad.0 as u64,
                order: tower.order(),
            });
        }
        Ok(LinearizedPoly { coeffs })
    }

    pub fn zero(tower: &FieldTower) -> Self {
        LinearizedPoly {
            coeffs: vec![Elem::ZERO; tower.t() as usize],
        }
    }

    pub fn identity(tower: &FieldTower) -> Self {
        Self::monomial(tower, Elem::ONE, 0)
    }

    /// `c · x^{q^i}`, `i` taken mod `t`.
    pub fn monomial(tower: &FieldTower, c: Elem, i: u32) -> Self {
        let mut p = Self::zero(tower);
        p.coeffs[(i % tower.t()) as usize] = c;
        p
    }

    pub fn from_json(tower: &FieldTower, json: &PolyJson) -> Result<Self> {
        let coeffs = json
            .coeffs
            .iter()
            .map(|s| tower.parse_elem(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(tower, coeffs)
    }

    pub fn to_json(&self, tower: &FieldTower) -> PolyJson {
        PolyJson {
            coeffs: self.coeffs.iter().map(|&c| tower.format_elem(c)).collect(),
        }
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Largest `i` with `a_i ≠ 0`.
    pub fn q_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn eval(&self, tower: &FieldTower, x: Elem) -> Elem {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .fold(Elem::ZERO, |acc, (i, &a)| {
                tower.add(acc, tower.mul(a, tower.frob(x, i as u32)))
            })
    }

    /// `f(x)` for every `x`, indexed by element.
    pub fn table(&self, tower: &FieldTower) -> Vec<Elem> {
        tower.elements().map(|x| self.eval(tower, x)).collect()
    }

    pub fn add(&self, tower: &FieldTower, other: &Self) -> Self {
        LinearizedPoly {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| tower.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, tower: &FieldTower, other: &Self) -> Self {
        LinearizedPoly {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| tower.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, tower: &FieldTower, c: Elem) -> Self {
        LinearizedPoly {
            coeffs: self.coeffs.iter().map(|&a| tower.mul(c, a)).collect(),
        }
    }

    /// `(self ∘ other)(x) = self(other(x))`, reduced mod `x^{q^t} - x`.
    pub fn compose(&self, tower: &FieldTower, other: &Self) -> Self {
        let t = tower.t() as usize;
        let mut coeffs = vec![Elem::ZERO; t];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let term = tower.mul(a, tower.frob(b, i as u32));
                let k = (i + j) % t;
                coeffs[k] = tower.add(coeffs[k], term);
            }
        }
        LinearizedPoly { coeffs }
    }

    /// `d` with `|ker f| = q^d`.
    pub fn kernel_dimension(&self, tower: &FieldTower) -> u32 {
        let zeros = tower
            .elements()
            .filter(|&x| self.eval(tower, x).is_zero())
            .count() as u64;
        let q = tower.q() as u64;
        let mut d = 0;
        let mut size = 1;
        while size < zeros {
            size *= q;
            d += 1;
        }
        d
    }

    /// Slope counting: scattered iff `|{f(x)/x}| = (q^t - 1)/(q - 1)`.
    pub fn is_scattered(&self, tower: &FieldTower) -> Result<bool> {
        Ok(self.linear_set(tower)?.slopes.len() == tower.coset_count())
    }

    pub fn linear_set(&self, tower: &FieldTower) -> Result<LinearSet> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut seen = vec![false; tower.order() as usize];
        for x in tower.nonzero() {
            let slope = slope(tower, self.eval(tower, x), x);
            seen[slope.index()] = true;
        }
        let slopes = seen
            .iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| Elem(i as u32))
            .collect();
        Ok(LinearSet {
            slopes,
            contains_infinity: false,
        })
    }
}

/// `y / x` for nonzero `x`.
#[inline]
pub(crate) fn slope(tower: &FieldTower, y: Elem, x: Elem) -> Elem {
    if y.is_zero() {
        return Elem::ZERO;
    }
    let group = tower.order() - 1;
    let ly = tower.log(y).unwrap();
    let lx = tower.log(x).expect("slope of the zero vector");
    tower.exp(((ly + group - lx) % group) as u64)
}

/// Solves `A·v = rhs` over `F_{q^t}` by Gaussian elimination.
pub(crate) fn solve_linear(
    tower: &FieldTower,
    mut matrix: Vec<Vec<Elem>>,
    mut rhs: Vec<Elem>,
) -> Result<Vec<Elem>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !matrix[r][col].is_zero())
            .ok_or(Error::SingularMatrix)?;
        matrix.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = tower.inv(matrix[col][col])?;
        for v in &mut matrix[col][col..] {
            *v = tower.mul(*v, inv);
        }
        rhs[col] = tower.mul(rhs[col], inv);
        for r in 0..n {
            if r == col || matrix[r][col].is_zero() {
                continue;
            }
            let factor = matrix[r][col];
            let pivot_row = matrix[col].clone();
            for (dst, &src) in matrix[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *dst = tower.sub(*dst, tower.mul(factor, src));
            }
            let v = tower.mul(factor, rhs[col]);
            rhs[r] = tower.sub(rhs[r], v);
        }
    }
    Ok(rhs)
}

/// The unique polynomial of q-degree `< t` with `f(x_i) = y_i` for `t`
/// points `x_i` independent over `F_q`.
pub fn interpolate_graph(tower: &FieldTower, pairs: &[(Elem, Elem)]) -> Result<LinearizedPoly> {
    let t = tower.t() as usize;
    if pairs.len() != t {
        return Err(Error::CoeffCount {
            expected: t,
            found: pairs.len(),
        });
    }
    // Moore matrix: row i is (x_i, x_i^q, …, x_i^{q^{t-1}}); singular iff dependent
    let matrix = pairs
        .iter()
        .map(|&(x, _)| (0..t as u32).map(|j| tower.frob(x, j)).collect())
        .collect();
    let rhs = pairs.iter().map(|&(_, y)| y).collect();
    let coeffs = solve_linear(tower, matrix, rhs).map_err(|e| match e {
        Error::SingularMatrix => Error::DependentInputs,
        other => other,
    })?;
    LinearizedPoly::new(tower, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower(p: u32, e: u32, t: u32) -> FieldTower {
        FieldTower::with_default(p, e, t).unwrap()
    }

    #[test]
    fn evaluation_basics() {
        let f = tower(2, 2, 3);
        let id = LinearizedPoly::identity(&f);
        for x in f.elements() {
            assert_eq!(id.eval(&f, x), x);
        }
        let g = f.generator();
        let p = LinearizedPoly::new(&f, vec![Elem::ZERO, g, Elem::ONE]).unwrap();
        assert_eq!(p.eval(&f, Elem::ZERO), Elem::ZERO);
        assert_eq!(p.q_degree(), Some(2));
        assert_eq!(LinearizedPoly::zero(&f).q_degree(), None);
    }

    #[test]
    fn wrong_length_rejected() {
        let f = tower(2, 2, 3);
        assert_eq!(
            LinearizedPoly::new(&f, vec![Elem::ONE]),
            Err(Error::CoeffCount { expected: 3, found: 1 })
        );
    }

    #[test]
    fn composition_matches_evaluation() {
        let f = tower(2, 2, 3);
        let g = f.generator();
        let a = LinearizedPoly::new(&f, vec![g, Elem::ONE, f.pow(g, 7)]).unwrap();
        let b = LinearizedPoly::new(&f, vec![Elem::ZERO, f.pow(g, 11), Elem::ONE]).unwrap();
        let ab = a.compose(&f, &b);
        for x in f.elements() {
            assert_eq!(ab.eval(&f, x), a.eval(&f, b.eval(&f, x)));
        }
        assert_eq!(a.compose(&f, &LinearizedPoly::identity(&f)), a);
    }

    #[test]
    fn kernel_dimensions() {
        let f = tower(2, 2, 4);
        assert_eq!(LinearizedPoly::identity(&f).kernel_dimension(&f), 0);
        // x^{q^2} - x vanishes exactly on F_{q^2}
        let p = LinearizedPoly::monomial(&f, Elem::ONE, 2).sub(&f, &LinearizedPoly::identity(&f));
        assert_eq!(p.kernel_dimension(&f), 2);
        let zeros = f.elements().filter(|&x| p.eval(&f, x).is_zero()).count();
        assert_eq!(zeros, 16);
    }

    #[test]
    fn scatteredness_examples() {
        let f = tower(2, 2, 3);
        assert!(!LinearizedPoly::identity(&f).is_scattered(&f).unwrap());
        assert!(LinearizedPoly::monomial(&f, Elem::ONE, 1).is_scattered(&f).unwrap());
        assert_eq!(
            LinearizedPoly::zero(&f).is_scattered(&f),
            Err(Error::ZeroPolynomial)
        );
        let f4 = tower(2, 2, 4);
        let sq = LinearizedPoly::monomial(&f4, Elem::ONE, 2);
        let ls = sq.linear_set(&f4).unwrap();
        assert_eq!(ls.slopes.len(), 17);
        assert!(!sq.is_scattered(&f4).unwrap());
    }

    #[test]
    fn linear_set_of_identity_is_one_point() {
        let f = tower(2, 2, 3);
        let ls = LinearizedPoly::identity(&f).linear_set(&f).unwrap();
        assert_eq!(ls.slopes, vec![Elem::ONE]);
    }

    #[test]
    fn interpolation() {
        let f = tower(2, 2, 3);
        let basis = f.basis().to_vec();
        let zero = interpolate_graph(&f, &basis.iter().map(|&x| (x, Elem::ZERO)).collect::<Vec<_>>()).unwrap();
        assert!(zero.is_zero());
        let frob = interpolate_graph(&f, &basis.iter().map(|&x| (x, f.frob(x, 1))).collect::<Vec<_>>()).unwrap();
        assert_eq!(frob.coeffs(), &[Elem::ZERO, Elem::ONE, Elem::ZERO]);
        for x in f.elements() {
            assert_eq!(frob.eval(&f, x), f.frob(x, 1));
        }
        // 1 and an F_q multiple of 1 are dependent
        let a = f.subfield()[2];
        let dep = [(Elem::ONE, Elem::ONE), (a, a), (f.generator(), Elem::ONE)];
        assert_eq!(interpolate_graph(&f, &dep), Err(Error::DependentInputs));
    }
}
