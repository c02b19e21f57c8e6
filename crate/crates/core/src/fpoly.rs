//! Dense polynomials over a prime field `F_p`, coefficients ascending.
//! Only what the irreducibility test for a field modulus needs.

type Poly = Vec<u32>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat; p is small
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    result as u32
}

fn rem(a: &[u32], m: &[u32], p: u32) -> Poly {
    let mut r = trim(a.to_vec());
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p) as u64;
    while r.len() > dm {
        let top = r.len() - 1;
        let factor = r[top] as u64 * lead_inv % p as u64;
        if factor != 0 {
            let shift = top - dm;
            for (i, &c) in m.iter().enumerate() {
                let sub = factor * c as u64 % p as u64;
                r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
            }
        }
        r = trim(r);
    }
    r
}

pub(crate) fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Poly = prod.into_iter().map(|c| c as u32).collect();
    rem(&prod, m, p)
}

pub(crate) fn pow_mod(base: &[u32], mut exp: u64, m: &[u32], p: u32) -> Poly {
    let mut result = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(&result, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        exp >>= 1;
    }
    result
}

fn sub(a: &[u32], b: &[u32], p: u32) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn gcd(a: &[u32], b: &[u32], p: u32) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Distinct prime divisors in ascending order.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [n]
}

/// Rabin's test: `m` of degree `n` is irreducible iff `x^{p^n} ≡ x` and
/// `gcd(x^{p^{n/r}} - x, m) = 1` for every prime `r | n`.
pub(crate) fn is_irreducible(m: &[u32], p: u32) -> bool {
    let m = trim(m.to_vec());
    if m.len() < 2 {
        return false;
    }
    let n = (m.len() - 1) as u64;
    if n == 1 {
        return true;
    }
    let x: Poly = vec![0, 1];
    // x^{p^k} mod m by repeated p-th powering
    let frob = |k: u64| {
        let mut acc = rem(&x, &m, p);
        for _ in 0..k {
            acc = pow_mod(&acc, p as u64, &m, p);
        }
        acc
    };
    if !sub(&frob(n), &x, p).is_empty() {
        return false;
    }
    prime_factors(n).into_iter().all(|r| {
        let g = gcd(&m, &sub(&frob(n / r), &x, p), p);
        g.len() == 1
    })
}

/// Irreducible with `x` generating the multiplicative group of `F_p[x]/(m)`.
pub(crate) fn is_primitive(m: &[u32], p: u32) -> bool {
    if !is_irreducible(m, p) {
        return false;
    }
    let degree = (trim(m.to_vec()).len() - 1) as u32;
    let group = (p as u64).pow(degree) - 1;
    let x: Poly = vec![0, 1];
    prime_factors(group)
        .into_iter()
        .all(|r| pow_mod(&x, group / r, m, p) != [1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_irreducibility_cases() {
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        // x^6 + 1 = (x^3 + 1)^2 over F_2
        assert!(!is_irreducible(&[1, 0, 0, 0, 0, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 0, 1, 1, 0, 1], 2));
        // x^2 + 1 over F_3 is irreducible, over F_5 it is not
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[1, 0, 1], 5));
        // product of two irreducible quadratics over F_2 has no roots but is reducible
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
    }

    #[test]
    fn factors() {
        assert_eq!(prime_factors(1023), vec![3, 11, 31]);
        assert_eq!(prime_factors(624), vec![2, 3, 13]);
        assert!(is_prime(5) && !is_prime(1) && !is_prime(9));
    }
}
