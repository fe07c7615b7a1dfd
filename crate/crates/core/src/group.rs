//! Finite abelian groups in invariant-factor form.
//!
//! A group `Z_{d_1} x ... x Z_{d_s}` with `d_1 | d_2 | ... | d_s` has its
//! elements indexed by the mixed-radix encoding of their residue vectors,
//! last factor varying fastest. Index 0 is the identity. For a cyclic group
//! `Z_n` the index `i` is the element `a^i`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group order for which multiplication tables are materialised.
pub const MAX_GROUP_ORDER: usize = 1 << 12;

/// Default order limit for automorphism enumeration.
pub const DEFAULT_AUTOMORPHISM_ORDER_LIMIT: usize = 64;

/// Default cap on the number of automorphisms returned.
pub const DEFAULT_AUTOMORPHISM_COUNT_LIMIT: usize = 100_000;

/// An element of an [`AbelianGroup`], identified by its index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub usize);

impl Elem {
    pub const IDENTITY: Elem = Elem(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

/// A finite abelian group stored in invariant-factor form with precomputed
/// multiplication and inversion tables.
#[derive(Clone)]
pub struct AbelianGroup {
    factors: Vec<usize>,
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl PartialEq for AbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}

impl Eq for AbelianGroup {}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbelianGroup({})", self)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z1");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z{d}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// JSON form of a group: `{"factors":[2,4]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub factors: Vec<usize>,
}

impl AbelianGroup {
    /// Builds the group `Z_{f_1} x ... x Z_{f_s}` and normalises it to
    /// invariant-factor form. An empty list gives the trivial group.
    pub fn new(factors: &[usize]) -> Result<Self> {
        if let Some(bad) = factors.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidSpec(format!(
                "cyclic factor {bad} is smaller than 2"
            )));
        }
        let mut order: usize = 1;
        for &d in factors {
            order = order
                .checked_mul(d)
                .filter(|&o| o <= MAX_GROUP_ORDER)
                .ok_or(Error::capacity(
                    "group order",
                    factors.iter().map(|&d| d as u128).product(),
                    MAX_GROUP_ORDER as u128,
                ))?;
        }
        let factors = invariant_factors(factors);
        Ok(Self::from_invariant_factors(factors, order))
    }

    pub fn trivial() -> Self {
        Self::from_invariant_factors(Vec::new(), 1)
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 1 {
            Ok(Self::trivial())
        } else {
            Self::new(&[n])
        }
    }

    fn from_invariant_factors(factors: Vec<usize>, order: usize) -> Self {
        let mut g = AbelianGroup {
            factors,
            order,
            mul: Vec::new(),
            inv: Vec::new(),
        };
        let vectors: Vec<Vec<usize>> = (0..order).map(|i| g.decode(Elem(i))).collect();
        let mut mul = vec![0u32; order * order];
        let mut inv = vec![0u32; order];
        let mut scratch = vec![0usize; g.factors.len()];
        for a in 0..order {
            for b in 0..order {
                for (i, d) in g.factors.iter().enumerate() {
                    scratch[i] = (vectors[a][i] + vectors[b][i]) % d;
                }
                mul[a * order + b] = g.encode(&scratch).0 as u32;
            }
            for (i, d) in g.factors.iter().enumerate() {
                scratch[i] = (d - vectors[a][i]) % d;
            }
            inv[a] = g.encode(&scratch).0 as u32;
        }
        g.mul = mul;
        g.inv = inv;
        g
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn spec(&self) -> GroupSpec {
        GroupSpec {
            factors: self.factors.clone(),
        }
    }

    /// The number of elements `r`.
    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    #[inline]
    pub fn identity(&self) -> Elem {
        Elem::IDENTITY
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(Elem)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.mul[a.0 * self.order + b.0] as usize)
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        Elem(self.inv[a.0] as usize)
    }

    pub fn pow(&self, a: Elem, mut e: usize) -> Elem {
        let mut base = a;
        let mut acc = Elem::IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The least `k >= 1` with `a^k = 1`.
    pub fn elem_order(&self, a: Elem) -> usize {
        self.decode(a)
            .iter()
            .zip(&self.factors)
            .fold(1, |acc, (&v, &d)| lcm(acc, d / gcd(v, d)))
    }

    /// Residue vector of an element.
    pub fn decode(&self, a: Elem) -> Vec<usize> {
        let mut rest = a.0;
        let mut v = vec![0; self.factors.len()];
        for (i, &d) in self.factors.iter().enumerate().rev() {
            v[i] = rest % d;
            rest /= d;
        }
        v
    }

    /// Element with the given residue vector (components are reduced).
    pub fn encode(&self, v: &[usize]) -> Elem {
        debug_assert_eq!(v.len(), self.factors.len());
        Elem(
            v.iter()
                .zip(&self.factors)
                .fold(0, |acc, (&x, &d)| acc * d + x % d),
        )
    }

    /// The standard generators, one per invariant factor.
    pub fn generators(&self) -> Vec<Elem> {
        (0..self.factors.len())
            .map(|i| {
                let mut v = vec![0; self.factors.len()];
                v[i] = 1;
                self.encode(&v)
            })
            .collect()
    }

    /// All elements of order 1 or 2, identity first. These are the legal
    /// values of `-1` in a hyperfield over this group.
    pub fn involution_candidates(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&a| self.elem_order(a) <= 2)
            .collect()
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.order
    }

    /// Human-readable element name: exponent notation for cyclic groups,
    /// residue vectors otherwise.
    pub fn element_name(&self, a: Elem) -> String {
        if self.is_cyclic() {
            match a.0 {
                0 => "1".to_string(),
                1 => "a".to_string(),
                k => format!("a^{k}"),
            }
        } else {
            let v: Vec<String> = self.decode(a).iter().map(|x| x.to_string()).collect();
            format!("({})", v.join(","))
        }
    }

    /// All automorphisms, with the default limits.
    pub fn automorphisms(&self) -> Result<Vec<Automorphism>> {
        self.automorphisms_bounded(
            DEFAULT_AUTOMORPHISM_ORDER_LIMIT,
            DEFAULT_AUTOMORPHISM_COUNT_LIMIT,
        )
    }

    /// Enumerates automorphisms by backtracking over generator images of
    /// matching order, rejecting partial assignments that stop being
    /// injective on the span of the generators placed so far.
    pub fn automorphisms_bounded(
        &self,
        max_order: usize,
        max_count: usize,
    ) -> Result<Vec<Automorphism>> {
        if self.order > max_order {
            return Err(Error::capacity(
                "group order for automorphism search",
                self.order as u128,
                max_order as u128,
            ));
        }
        let candidates: Vec<Vec<Elem>> = self
            .factors
            .iter()
            .map(|&d| {
                self.elements()
                    .filter(|&a| self.elem_order(a) == d)
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut images = Vec::with_capacity(self.factors.len());
        let span = vec![Elem::IDENTITY];
        self.extend_automorphisms(&candidates, &mut images, span, &mut out, max_count)?;
        Ok(out)
    }

    fn extend_automorphisms(
        &self,
        candidates: &[Vec<Elem>],
        images: &mut Vec<Elem>,
        span: Vec<Elem>,
        out: &mut Vec<Automorphism>,
        max_count: usize,
    ) -> Result<()> {
        let depth = images.len();
        if depth == self.factors.len() {
            if out.len() >= max_count {
                return Err(Error::capacity(
                    "automorphism count",
                    out.len() as u128 + 1,
                    max_count as u128,
                ));
            }
            out.push(self.automorphism_from_images(images));
            return Ok(());
        }
        let d = self.factors[depth];
        for &img in &candidates[depth] {
            let mut seen = vec![false; self.order];
            let mut next = Vec::with_capacity(span.len() * d);
            let mut power = Elem::IDENTITY;
            let mut injective = true;
            'outer: for _ in 0..d {
                for &s in &span {
                    let e = self.mul(s, power);
                    if seen[e.0] {
                        injective = false;
                        break 'outer;
                    }
                    seen[e.0] = true;
                    next.push(e);
                }
                power = self.mul(power, img);
            }
            if !injective {
                continue;
            }
            images.push(img);
            self.extend_automorphisms(candidates, images, next, out, max_count)?;
            images.pop();
        }
        Ok(())
    }

    fn automorphism_from_images(&self, images: &[Elem]) -> Automorphism {
        let map = self
            .elements()
            .map(|a| {
                self.decode(a)
                    .iter()
                    .zip(images)
                    .fold(Elem::IDENTITY, |acc, (&k, &g)| {
                        self.mul(acc, self.pow(g, k))
                    })
            })
            .collect();
        Automorphism { map }
    }

    /// Every abelian group of the given order, one per isomorphism class.
    pub fn all_of_order(n: usize) -> Result<Vec<AbelianGroup>> {
        if n == 0 {
            return Err(Error::InvalidSpec("group order must be positive".into()));
        }
        let mut lists: Vec<Vec<usize>> = vec![Vec::new()];
        for (p, e) in factorize(n) {
            let mut next = Vec::new();
            for part in partitions(e, e) {
                for base in &lists {
                    let mut l = base.clone();
                    l.extend(part.iter().map(|&k| p.pow(k as u32)));
                    next.push(l);
                }
            }
            lists = next;
        }
        let mut groups = lists
            .iter()
            .map(|l| AbelianGroup::new(l))
            .collect::<Result<Vec<_>>>()?;
        groups.sort_by(|a, b| {
            a.factors
                .len()
                .cmp(&b.factors.len())
                .then_with(|| a.factors.cmp(&b.factors))
        });
        Ok(groups)
    }
}

impl FromStr for AbelianGroup {
    type Err = Error;

    /// Parses `Z3`, `Z2xZ4`, `Z2*Z2`, `Z1` or `trivial`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("trivial") || s == "1" {
            return Ok(Self::trivial());
        }
        let mut factors = Vec::new();
        for part in s.split(['x', 'X', '*']) {
            let part = part.trim();
            let digits = part
                .strip_prefix('Z')
                .or_else(|| part.strip_prefix('C'))
                .unwrap_or(part);
            let d: usize = digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad group factor {part:?} in {s:?}")))?;
            if d != 1 {
                factors.push(d);
            }
        }
        if factors.is_empty() && !s.is_empty() {
            return Ok(Self::trivial());
        }
        Self::new(&factors)
    }
}

impl TryFrom<&GroupSpec> for AbelianGroup {
    type Error = Error;

    fn try_from(spec: &GroupSpec) -> Result<Self> {
        AbelianGroup::new(&spec.factors)
    }
}

/// A group automorphism given as the image of every element index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    map: Vec<Elem>,
}

impl Automorphism {
    pub fn identity(order: usize) -> Self {
        Automorphism {
            map: (0..order).map(Elem).collect(),
        }
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.map[a.0]
    }

    pub fn images(&self) -> &[Elem] {
        &self.map
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            map: other.map.iter().map(|&a| self.apply(a)).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut map = vec![Elem::IDENTITY; self.map.len()];
        for (i, &a) in self.map.iter().enumerate() {
            map[a.0] = Elem(i);
        }
        Automorphism { map }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, a)| a.0 == i)
    }
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

pub(crate) fn factorize(mut n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Partitions of `n` into parts of size at most `max`, largest part first.
fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Invariant factors of `Z_{f_1} x ... x Z_{f_s}` via primary decomposition.
fn invariant_factors(factors: &[usize]) -> Vec<usize> {
    let mut by_prime: Vec<(usize, Vec<usize>)> = Vec::new();
    for &f in factors {
        for (p, e) in factorize(f) {
            match by_prime.iter_mut().find(|(q, _)| *q == p) {
                Some((_, es)) => es.push(e),
                None => by_prime.push((p, vec![e])),
            }
        }
    }
    let len = by_prime.iter().map(|(_, es)| es.len()).max().unwrap_or(0);
    let mut out = vec![1usize; len];
    for (p, mut es) in by_prime {
        es.sort_unstable_by(|a, b| b.cmp(a));
        for (slot, e) in es.into_iter().enumerate() {
            out[len - 1 - slot] *= p.pow(e as u32);
        }
    }
    out
}
