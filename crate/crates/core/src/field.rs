//! Finite fields GF(p^k) with log/exp tables.
//!
//! Elements are encoded as integers `0..q`: the polynomial `Σ c_i x^i` over
//! `Z_p` is stored as `Σ c_i p^i`. For `k = 1` this is the usual residue.

use std::fmt;

use crate::error::{Error, Result};

/// Default limit on the field order.
pub const MAX_FIELD_ORDER: u64 = 100_000;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `(q, p, k)` for every prime power `q = p^k <= limit`, sorted by `q`.
pub fn prime_powers_up_to(limit: u64) -> Vec<(u64, u64, u32)> {
    let mut out = Vec::new();
    for p in 2..=limit {
        if !is_prime(p) {
            continue;
        }
        let (mut q, mut k) = (p, 1);
        while q <= limit {
            out.push((q, p, k));
            match q.checked_mul(p) {
                Some(next) => q = next,
                None => break,
            }
            k += 1;
        }
    }
    out.sort_unstable();
    out
}

fn prime_factors(mut n: u64) -> Vec<u64> {
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

/// Coefficient vectors, lowest degree first, over `Z_p`.
mod poly {
    pub fn decode(mut v: u64, p: u64, len: usize) -> Vec<u64> {
        let mut out = vec![0; len];
        for c in out.iter_mut() {
            *c = v % p;
            v /= p;
        }
        out
    }

    pub fn encode(c: &[u64], p: u64) -> u64 {
        c.iter().rev().fold(0, |acc, &d| acc * p + d)
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        // p is prime, so a^(p-2) is the inverse.
        let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    }

    fn degree(a: &[u64]) -> Option<usize> {
        a.iter().rposition(|&c| c != 0)
    }

    /// Remainder of `a` divided by `m` (`m` nonzero).
    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let dm = degree(m).expect("nonzero divisor");
        let lead_inv = inv_mod(m[dm], p);
        while let Some(da) = degree(&a) {
            if da < dm {
                break;
            }
            let f = a[da] * lead_inv % p;
            let shift = da - dm;
            for (i, &c) in m.iter().enumerate().take(dm + 1) {
                a[i + shift] = (a[i + shift] + p - f * c % p) % p;
            }
        }
        a.truncate(dm.max(1));
        a
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut prod = vec![0u64; a.len() + b.len()];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, m, p)
    }

    pub fn is_zero(a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }
}

/// Lexicographically least irreducible monic polynomial of degree `k` over
/// `Z_p`, comparing coefficients from `x^(k-1)` down to the constant term.
/// Returned lowest degree first, including the leading 1.
fn least_irreducible(p: u64, k: u32) -> Vec<u64> {
    let k = k as usize;
    let pk = p.pow(k as u32);
    'candidates: for tail in 0..pk {
        let mut m = poly::decode(tail, p, k);
        m.push(1);
        if m[0] == 0 {
            continue;
        }
        for d in 1..=k / 2 {
            for dt in 0..p.pow(d as u32) {
                let mut div = poly::decode(dt, p, d);
                div.push(1);
                if poly::is_zero(&poly::rem(&m, &div, p)) {
                    continue 'candidates;
                }
            }
        }
        return m;
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

#[derive(Clone)]
pub struct FiniteField {
    p: u64,
    k: u32,
    q: u64,
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator())
            .finish()
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "Z{}", self.p)
        } else {
            write!(f, "GF({}^{}) mod {}", self.p, self.k, self.modulus_string())
        }
    }
}

pub fn make_field(p: u64, k: u32) -> Result<FiniteField> {
    make_field_bounded(p, k, MAX_FIELD_ORDER)
}

pub fn make_field_bounded(p: u64, k: u32, max_order: u64) -> Result<FiniteField> {
    if !is_prime(p) {
        return Err(Error::InvalidSpec(format!(
            "characteristic {p} is not prime"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidSpec("field degree must be at least 1".into()));
    }
    let q = match p.checked_pow(k) {
        Some(q) if q <= max_order => q,
        other => {
            return Err(Error::capacity(
                "field order",
                other.map_or(u128::MAX, u128::from),
                max_order as u128,
            ))
        }
    };
    let modulus = if k == 1 {
        vec![0, 1]
    } else {
        least_irreducible(p, k)
    };
    let n = (q - 1) as usize;
    let factors = prime_factors(q - 1);
    let width = k as usize;
    let mul = |a: u64, b: u64| {
        poly::encode(
            &poly::mul_mod(
                &poly::decode(a, p, width),
                &poly::decode(b, p, width),
                &modulus,
                p,
            ),
            p,
        )
    };
    let pow = |g: u64, mut e: u64| {
        let (mut base, mut acc) = (g, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    let g = (1..q)
        .find(|&g| factors.iter().all(|&l| pow(g, (q - 1) / l) != 1))
        .expect("the multiplicative group is cyclic");
    let mut exp = Vec::with_capacity(n);
    let mut log = vec![u32::MAX; q as usize];
    let mut x = 1u64;
    for i in 0..n {
        exp.push(x as u32);
        log[x as usize] = i as u32;
        x = mul(x, g);
    }
    Ok(FiniteField {
        p,
        k,
        q,
        modulus,
        exp,
        log,
    })
}

impl FiniteField {
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients, lowest degree first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn modulus_string(&self) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coeff = if c == 1 && i > 0 {
                String::new()
            } else {
                c.to_string()
            };
            terms.push(match i {
                0 => coeff,
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{i}"),
            });
        }
        terms.join("+")
    }

    /// The primitive element used for the log tables (least by encoding).
    pub fn generator(&self) -> u64 {
        self.exp.get(1).copied().unwrap_or(1) as u64
    }

    pub fn elements(&self) -> std::ops::Range<u64> {
        0..self.q
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        while a > 0 || b > 0 {
            out += (a % self.p + b % self.p) % self.p * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.k == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        while a > 0 {
            out += (self.p - a % self.p) % self.p * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    /// Discrete logarithm base [`FiniteField::generator`]; `None` for zero.
    pub fn log(&self, a: u64) -> Option<u64> {
        match self.log[a as usize] {
            u32::MAX => None,
            l => Some(l as u64),
        }
    }

    /// `g^i` for the primitive element `g`.
    pub fn exp(&self, i: u64) -> u64 {
        self.exp[(i % (self.q - 1)) as usize] as u64
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match (self.log(a), self.log(b)) {
            (Some(x), Some(y)) => self.exp(x + y),
            _ => 0,
        }
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        self.log(a).map(|l| self.exp(self.q - 1 - l))
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        match self.log(a) {
            Some(l) => self.exp(l * (e % (self.q - 1))),
            None if e == 0 => 1,
            None => 0,
        }
    }

    pub fn minus_one(&self) -> u64 {
        self.neg(1)
    }

    /// Multiplicative order of a nonzero element.
    pub fn elem_order(&self, a: u64) -> Option<u64> {
        let l = self.log(a)?;
        let n = self.q - 1;
        Some(n / crate::group::gcd(l as usize, n as usize) as u64)
    }

    pub fn element_name(&self, a: u64) -> String {
        if self.k == 1 {
            return a.to_string();
        }
        let c = poly::decode(a, self.p, self.k as usize);
        if poly::is_zero(&c) {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, &d) in c.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            let coeff = if d == 1 && i > 0 {
                String::new()
            } else {
                d.to_string()
            };
            terms.push(match i {
                0 => coeff,
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{i}"),
            });
        }
        terms.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: &FiniteField) {
        let q = f.order();
        for a in 0..q {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..q {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn prime_fields() {
        let f = make_field(7, 1).unwrap();
        assert_eq!(f.order(), 7);
        assert_eq!(f.to_string(), "Z7");
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.minus_one(), 6);
        check_axioms(&f);
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(f2.minus_one(), 1);
        check_axioms(&f2);
    }

    #[test]
    fn extension_fields() {
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert_eq!(f4.modulus_string(), "x^2+x+1");
        check_axioms(&f4);
        let f8 = make_field(2, 3).unwrap();
        // x^3+x+1 precedes x^3+x^2+1 in coefficient order.
        assert_eq!(f8.modulus(), &[1, 1, 0, 1]);
        check_axioms(&f8);
        let f9 = make_field(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        check_axioms(&f9);
    }

    #[test]
    fn logs_cover_units() {
        for (p, k) in [(2, 4), (3, 3), (5, 2), (13, 1)] {
            let f = make_field(p, k).unwrap();
            let mut seen: Vec<u64> = (0..f.order() - 1).map(|i| f.exp(i)).collect();
            seen.sort_unstable();
            assert_eq!(seen, (1..f.order()).collect::<Vec<_>>());
            assert_eq!(f.elem_order(f.generator()), Some(f.order() - 1));
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(make_field(6, 1), Err(Error::InvalidSpec(_))));
        assert!(make_field(2, 17).unwrap_err().is_capacity());
        assert!(make_field(2, 16).is_ok());
    }

    #[test]
    fn prime_power_list() {
        let qs: Vec<u64> = prime_powers_up_to(20).iter().map(|t| t.0).collect();
        assert_eq!(qs, vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19]);
    }
}
