//! Table-driven arithmetic in the tower `F_p ⊂ F_q = F_{p^e} ⊂ F_{q^t}`.
//!
//! Elements are encoded by a single index: the element `Σ d_i x^i` of
//! `F_p[x]/(modulus)` has index `Σ d_i p^i`. Multiplication goes through
//! exp/log tables with respect to the least-index primitive element `g`.
//! Addition is XOR in characteristic 2, a full addition table for small odd
//! fields, and Zech logarithms otherwise.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::conway;
use crate::error::{Error, Result};
use crate::fpoly;

/// Largest field order for which tables are built.
pub const MAX_ORDER: u64 = 1 << 22;

const NO_LOG: u32 = u32::MAX;
const ADD_TABLE_LIMIT: u32 = 1 << 10;

/// Parameters of a tower: `q = p^e`, extension degree `t`, and an optional
/// modulus of degree `e·t` over `F_p` (coefficients ascending).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    pub t: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn new(p: u32, e: u32, t: u32) -> Self {
        FieldSpec {
            p,
            e,
            t,
            modulus: None,
        }
    }

    pub fn with_modulus(mut self, modulus: Vec<u32>) -> Self {
        self.modulus = Some(modulus);
        self
    }
}

/// An element of `F_{q^t}` by index.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

enum Adder {
    Xor,
    Table(Vec<u16>),
    Zech(Vec<u32>),
}

/// Arithmetic context for `F_{q^t}`. Immutable after construction.
pub struct FieldTower {
    p: u32,
    e: u32,
    t: u32,
    q: u32,
    order: u32,
    modulus: Vec<u32>,
    // exp has length 2(order - 1) so that log a + log b never needs a reduction
    exp: Vec<u32>,
    log: Vec<u32>,
    adder: Adder,
    // p^j mod (order - 1) for j in 0..e·t
    ppow: Vec<u64>,
    subfield: Vec<Elem>,
    in_subfield: Vec<bool>,
    coset_rep_by_class: Vec<Elem>,
    coset_reps: Vec<Elem>,
    basis: Vec<Elem>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTower")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("t", &self.t)
            .field("modulus", &self.modulus)
            .finish()
    }
}

/// Builds the tower described by `spec`.
pub fn build_field(spec: &FieldSpec) -> Result<FieldTower> {
    FieldTower::new(spec)
}

fn digits_to_index(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn index_to_digits(mut index: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = index % p;
        index /= p;
    }
    out
}

fn digit_add(mut a: u32, mut b: u32, p: u32) -> u32 {
    let mut out = 0;
    let mut place = 1;
    while a > 0 || b > 0 {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The shipped Conway polynomial, or failing that the least primitive
/// polynomial in little-endian coefficient order.
pub fn default_modulus(p: u32, degree: u32) -> Result<Vec<u32>> {
    if let Some(m) = conway::lookup(p, degree) {
        return Ok(m);
    }
    let count = (p as u64)
        .checked_pow(degree)
        .filter(|&c| c <= MAX_ORDER)
        .ok_or(Error::NoDefaultModulus { p, degree })?;
    for low in 0..count {
        let mut m = index_to_digits(low as u32, p, degree as usize);
        m.push(1);
        if m[0] != 0 && fpoly::is_primitive(&m, p) {
            return Ok(m);
        }
    }
    Err(Error::NoDefaultModulus { p, degree })
}

impl FieldTower {
    pub fn new(spec: &FieldSpec) -> Result<Self> {
        let FieldSpec { p, e, t, .. } = *spec;
        if !fpoly::is_prime(p as u64) {
            return Err(Error::InvalidSpec(format!("p = {p} is not prime")));
        }
        if e == 0 {
            return Err(Error::InvalidSpec("e must be positive".into()));
        }
        if t < 2 {
            return Err(Error::InvalidSpec("t must be greater than 1".into()));
        }
        let degree = e
            .checked_mul(t)
            .ok_or_else(|| Error::InvalidSpec("degree overflow".into()))?;
        let order = (p as u64)
            .checked_pow(degree)
            .filter(|&o| o <= MAX_ORDER)
            .ok_or(Error::FieldTooLarge {
                order: (p as u64).saturating_pow(degree),
                limit: MAX_ORDER,
            })? as u32;
        let modulus = match &spec.modulus {
            Some(m) => m.clone(),
            None => default_modulus(p, degree)?,
        };
        if modulus.len() != degree as usize + 1 {
            return Err(Error::ModulusDegree {
                expected: degree,
                found: modulus.len().saturating_sub(1) as u32,
            });
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidSpec(format!(
                "modulus coefficients must lie in [0, {p})"
            )));
        }
        if modulus[degree as usize] != 1 {
            return Err(Error::InvalidSpec("modulus must be monic".into()));
        }
        if !fpoly::is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus { p });
        }

        let group = order - 1;
        let gamma_exp = primitive_powers(&modulus, p, degree, order);
        let mut gamma_log = vec![NO_LOG; order as usize];
        for (k, &x) in gamma_exp.iter().enumerate() {
            gamma_log[x as usize] = k as u32;
        }
        // least index whose order is q^t - 1
        let generator = (1..order)
            .find(|&c| gcd(gamma_log[c as usize] as u64, group as u64) == 1)
            .expect("a cyclic group has a generator");
        let shift = gamma_log[generator as usize] as u64;
        let mut exp = vec![0u32; 2 * group as usize];
        let mut log = vec![NO_LOG; order as usize];
        for k in 0..group as u64 {
            let x = gamma_exp[(k * shift % group as u64) as usize];
            exp[k as usize] = x;
            exp[(k + group as u64) as usize] = x;
            log[x as usize] = k as u32;
        }

        let adder = if p == 2 {
            Adder::Xor
        } else if order <= ADD_TABLE_LIMIT {
            let n = order as usize;
            let mut table = vec![0u16; n * n];
            for a in 0..order {
                for b in 0..order {
                    table[a as usize * n + b as usize] = digit_add(a, b, p) as u16;
                }
            }
            Adder::Table(table)
        } else {
            let zech = (0..group)
                .map(|d| {
                    let x = exp[d as usize];
                    let low = x % p;
                    let y = x - low + (low + 1) % p;
                    log[y as usize]
                })
                .collect();
            Adder::Zech(zech)
        };

        let ppow = (0..degree)
            .scan(1u64, |acc, _| {
                let cur = *acc;
                *acc = *acc * p as u64 % group as u64;
                Some(cur)
            })
            .collect();

        let q = p.pow(e);
        let mut tower = FieldTower {
            p,
            e,
            t,
            q,
            order,
            modulus,
            exp,
            log,
            adder,
            ppow,
            subfield: Vec::new(),
            in_subfield: Vec::new(),
            coset_rep_by_class: Vec::new(),
            coset_reps: Vec::new(),
            basis: Vec::new(),
        };

        let in_subfield: Vec<bool> = (0..order)
            .map(|i| tower.frob(Elem(i), 1) == Elem(i))
            .collect();
        tower.subfield = (0..order)
            .filter(|&i| in_subfield[i as usize])
            .map(Elem)
            .collect();
        tower.in_subfield = in_subfield;

        let classes = tower.coset_count();
        let mut by_class = vec![Elem::ZERO; classes];
        let mut seen = vec![false; classes];
        let mut reps = Vec::with_capacity(classes);
        for i in 1..order {
            let class = tower.log[i as usize] as usize % classes;
            if !seen[class] {
                seen[class] = true;
                by_class[class] = Elem(i);
                reps.push(Elem(i));
            }
        }
        tower.coset_rep_by_class = by_class;
        tower.coset_reps = reps;
        tower.basis = (0..t).map(|i| tower.exp(i as u64)).collect();
        Ok(tower)
    }

    /// Convenience constructor with the default modulus.
    pub fn with_default(p: u32, e: u32, t: u32) -> Result<Self> {
        Self::new(&FieldSpec::new(p, e, t))
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec::new(self.p, self.e, self.t).with_modulus(self.modulus.clone())
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    /// `q = p^e`.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// `q^t`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Degree of `F_{q^t}` over the prime field.
    pub fn degree(&self) -> u32 {
        self.e * self.t
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> Elem {
        Elem(self.exp[1])
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.order).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + '_ {
        (1..self.order).map(Elem)
    }

    /// `(q^t - 1)/(q - 1)`: the number of points of `PG(t-1, q)`, and the
    /// size of a maximum scattered linear set.
    pub fn coset_count(&self) -> usize {
        ((self.order - 1) / (self.q - 1)) as usize
    }

    /// Discrete log base `g`; `None` for zero.
    #[inline]
    pub fn log(&self, a: Elem) -> Option<u32> {
        match self.log[a.index()] {
            NO_LOG => None,
            l => Some(l),
        }
    }

    /// `g^k`.
    #[inline]
    pub fn exp(&self, k: u64) -> Elem {
        Elem(self.exp[(k % (self.order - 1) as u64) as usize])
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.adder {
            Adder::Xor => Elem(a.0 ^ b.0),
            Adder::Table(t) => Elem(t[a.index() * self.order as usize + b.index()] as u32),
            Adder::Zech(zech) => {
                if a.0 == 0 {
                    return b;
                }
                if b.0 == 0 {
                    return a;
                }
                let group = self.order - 1;
                let la = self.log[a.index()];
                let lb = self.log[b.index()];
                let d = if lb >= la { lb - la } else { lb + group - la };
                match zech[d as usize] {
                    NO_LOG => Elem::ZERO,
                    z => Elem(self.exp[(la + z) as usize]),
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        // -1 = g^{(q^t - 1)/2} in odd characteristic
        let half = (self.order - 1) / 2;
        Elem(self.exp[(self.log[a.index()] + half) as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        Elem(self.exp[(self.log[a.index()] + self.log[b.index()]) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let group = self.order - 1;
        Ok(Elem(self.exp[((group - self.log[a.index()]) % group) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^k`, with `0^0 = 1`.
    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if a.0 == 0 {
            return if k == 0 { Elem::ONE } else { Elem::ZERO };
        }
        let group = (self.order - 1) as u64;
        let l = self.log[a.index()] as u64 * (k % group) % group;
        Elem(self.exp[l as usize])
    }

    /// `a^k` for possibly negative `k`; `a` must be nonzero when `k < 0`.
    pub fn pow_signed(&self, a: Elem, k: i64) -> Result<Elem> {
        if k >= 0 {
            return Ok(self.pow(a, k as u64));
        }
        let group = (self.order - 1) as i64;
        Ok(self.pow(self.inv(a)?, (-k % group) as u64))
    }

    /// The field automorphism `x ↦ x^{p^j}`, `j` taken mod `e·t`.
    #[inline]
    pub fn automorphism(&self, a: Elem, j: u32) -> Elem {
        if a.0 == 0 {
            return a;
        }
        let group = (self.order - 1) as u64;
        let k = self.ppow[(j % self.degree()) as usize];
        Elem(self.exp[(self.log[a.index()] as u64 * k % group) as usize])
    }

    /// `x ↦ x^{q^i}`, `i` taken mod `t`.
    #[inline]
    pub fn frob(&self, a: Elem, i: u32) -> Elem {
        self.automorphism(a, (i % self.t) * self.e)
    }

    /// `q^i mod (q^t - 1)`: the exponent of the `i`-th `q`-Frobenius on logs.
    pub fn q_power_mod_group(&self, i: u32) -> u64 {
        self.ppow[((i % self.t) * self.e) as usize]
    }

    /// `N_{q^t/q}(a) = a^{(q^t - 1)/(q - 1)}`.
    pub fn rel_norm(&self, a: Elem) -> Elem {
        self.pow(a, self.coset_count() as u64)
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Elem) -> Option<u64> {
        let group = (self.order - 1) as u64;
        self.log(a).map(|l| group / gcd(l as u64, group))
    }

    /// The embedded `F_q`, as the fixed field of `x ↦ x^q`, ascending.
    pub fn subfield(&self) -> &[Elem] {
        &self.subfield
    }

    #[inline]
    pub fn in_subfield(&self, a: Elem) -> bool {
        self.in_subfield[a.index()]
    }

    /// Least-index representatives of the cosets of `F_q^*` in
    /// `F_{q^t}^*`, ascending.
    pub fn coset_reps(&self) -> &[Elem] {
        &self.coset_reps
    }

    /// The least-index element of `a·F_q^*`.
    pub fn coset_rep(&self, a: Elem) -> Option<Elem> {
        self.log(a)
            .map(|l| self.coset_rep_by_class[l as usize % self.coset_reps.len()])
    }

    /// The `F_q`-basis `1, g, …, g^{t-1}` of `F_{q^t}`.
    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    /// Parses `"0"`, `"1"`, `"g^k"` (k ≥ 0) or a decimal index.
    pub fn parse_elem(&self, text: &str) -> Result<Elem> {
        let s = text.trim();
        let malformed = || Error::MalformedElement(text.to_string());
        if let Some(k) = s.strip_prefix("g^") {
            if k.is_empty() || !k.bytes().all(|c| c.is_ascii_digit()) {
                return Err(malformed());
            }
            let group = (self.order - 1) as u64;
            // reduce digit by digit so huge exponents are accepted
            let k = k
                .bytes()
                .fold(0u64, |acc, c| (acc * 10 + (c - b'0') as u64) % group);
            return Ok(self.exp(k));
        }
        if s.is_empty() || !s.bytes().all(|c| c.is_ascii_digit()) {
            return Err(malformed());
        }
        let index: u64 = s.parse().map_err(|_| malformed())?;
        if index >= self.order as u64 {
            return Err(Error::ElementOutOfRange {
                index,
                order: self.order,
            });
        }
        Ok(Elem(index as u32))
    }

    /// Canonical text: `"0"`, `"1"`, otherwise `"g^k"` with `k = log a`.
    pub fn format_elem(&self, a: Elem) -> String {
        match a.0 {
            0 => "0".to_string(),
            1 => "1".to_string(),
            _ => format!("g^{}", self.log[a.index()]),
        }
    }
}

/// Powers of some primitive element as indices: `x` itself when the modulus
/// is primitive, otherwise the least-index primitive element found by
/// polynomial arithmetic.
fn primitive_powers(modulus: &[u32], p: u32, degree: u32, order: u32) -> Vec<u32> {
    let d = degree as usize;
    let group = order - 1;
    let mut powers = Vec::with_capacity(group as usize);
    let mut digits = vec![0u32; d];
    digits[0] = 1;
    loop {
        powers.push(digits_to_index(&digits, p));
        // multiply by x: shift up, then fold x^d = -Σ m_i x^i
        let top = digits[d - 1];
        for i in (1..d).rev() {
            digits[i] = digits[i - 1];
        }
        digits[0] = 0;
        if top != 0 {
            for i in 0..d {
                digits[i] = (digits[i] + (p - modulus[i]) * top) % p;
            }
        }
        if digits_to_index(&digits, p) == 1 {
            break;
        }
    }
    if powers.len() == group as usize {
        return powers;
    }

    let factors = fpoly::prime_factors(group as u64);
    let to_poly = |index: u32| index_to_digits(index, p, d);
    let is_one = |poly: &[u32]| poly == [1];
    let gamma = (2..order)
        .map(to_poly)
        .find(|c| {
            factors
                .iter()
                .all(|&r| !is_one(&fpoly::pow_mod(c, group as u64 / r, modulus, p)))
        })
        .expect("the multiplicative group of a finite field is cyclic");
    let mut acc = vec![1u32];
    powers.clear();
    for _ in 0..group {
        let mut full = acc.clone();
        full.resize(d, 0);
        powers.push(digits_to_index(&full, p));
        acc = fpoly::mul_mod(&acc, &gamma, modulus, p);
    }
    powers
}
