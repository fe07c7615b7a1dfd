//! Hyperfields presented by their plus-one relation.
//!
//! Given a group `H^×`, an element `-1` of order at most two and a relation
//! `π` on `H^×`, the structure `H_π` has universe `H^× ∪ {0}` and addition
//!
//! ```text
//! 0 + x = x + 0 = {x}
//! x + y = y · P(y⁻¹x)       for x, y ≠ 0
//! P(z)  = {w : z π w} ∪ ({0} if z = -1)
//! ```
//!
//! Element sets are `u128` bitsets: bit `i < r` is the group element of index
//! `i` and bit `r` is zero, so hyperfields have at most 127 nonzero elements.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::blocks::{BlockPartition, Pair};
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, Elem, GroupSpec};

/// Largest `|H^×|` representable with `u128` element sets.
pub const MAX_UNITS: usize = 127;

/// An element of a hyperfield: zero or a group element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Zero,
    Unit(Elem),
}

impl Element {
    pub const ONE: Element = Element::Unit(Elem::IDENTITY);

    /// Bit index in an [`ElementSet`] over a group of order `r`.
    #[inline]
    pub fn index(self, r: usize) -> usize {
        match self {
            Element::Zero => r,
            Element::Unit(e) => e.0,
        }
    }

    #[inline]
    pub fn from_index(i: usize, r: usize) -> Element {
        if i == r {
            Element::Zero
        } else {
            Element::Unit(Elem(i))
        }
    }

    pub fn is_zero(self) -> bool {
        self == Element::Zero
    }
}

/// A subset of `{0} ∪ H^×`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ElementSet(pub u128);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    #[inline]
    pub fn singleton(i: usize) -> Self {
        ElementSet(1u128 << i)
    }

    /// Every element of a hyperfield with `r` units.
    #[inline]
    pub fn full(r: usize) -> Self {
        ElementSet(u128::MAX >> (127 - r))
    }

    #[inline]
    pub fn units(r: usize) -> Self {
        ElementSet((1u128 << r) - 1)
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u128 << i;
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        ElementSet(self.0 | other.0)
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

/// The relation `π` as an `r x r` bit matrix: bit `y` of row `x` is set iff
/// `y ∈ x + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairRelation {
    r: usize,
    rows: Vec<u128>,
}

impl PairRelation {
    pub fn empty(r: usize) -> Self {
        PairRelation {
            r,
            rows: vec![0; r],
        }
    }

    pub fn full(r: usize) -> Self {
        PairRelation {
            r,
            rows: vec![ElementSet::units(r).0; r],
        }
    }

    pub fn order(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn contains(&self, p: Pair) -> bool {
        self.rows[p.x.0] >> p.y.0 & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, p: Pair) {
        self.rows[p.x.0] |= 1u128 << p.y.0;
    }

    #[inline]
    pub fn remove(&mut self, p: Pair) {
        self.rows[p.x.0] &= !(1u128 << p.y.0);
    }

    #[inline]
    pub fn toggle(&mut self, p: Pair) {
        self.rows[p.x.0] ^= 1u128 << p.y.0;
    }

    /// Row `x` as a set of units.
    #[inline]
    pub fn row(&self, x: Elem) -> ElementSet {
        ElementSet(self.rows[x.0])
    }

    pub fn row_count(&self, x: Elem) -> usize {
        self.rows[x.0].count_ones() as usize
    }

    pub fn column_count(&self, y: Elem) -> usize {
        self.rows.iter().filter(|&&row| row >> y.0 & 1 == 1).count()
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn pairs(&self) -> impl Iterator<Item = Pair> + '_ {
        self.rows.iter().enumerate().flat_map(|(x, &row)| {
            ElementSet(row)
                .iter()
                .map(move |y| Pair::new(Elem(x), Elem(y)))
        })
    }

    /// Row-major bit string of length `r²`.
    pub fn to_bit_string(&self) -> String {
        let mut s = String::with_capacity(self.r * self.r);
        for &row in &self.rows {
            for y in 0..self.r {
                s.push(if row >> y & 1 == 1 { '1' } else { '0' });
            }
        }
        s
    }

    pub fn from_bit_string(r: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() != r * r {
            return Err(Error::DimensionMismatch {
                expected: r * r,
                found: s.len(),
            });
        }
        let mut rel = PairRelation::empty(r);
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => rel.insert(Pair::decode(i, r)),
                '0' => {}
                other => {
                    return Err(Error::Parse(format!(
                        "bad character {other:?} in π bit string"
                    )))
                }
            }
        }
        Ok(rel)
    }
}

/// Lifecycle of a candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Unverified,
    VerifiedHyperfield,
    CertifiedAmple,
    Failed(String),
}

impl Status {
    pub fn is_hyperfield(&self) -> bool {
        matches!(self, Status::VerifiedHyperfield | Status::CertifiedAmple)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Unverified => write!(f, "unverified"),
            Status::VerifiedHyperfield => write!(f, "verified-hyperfield"),
            Status::CertifiedAmple => write!(f, "certified-ample"),
            Status::Failed(reason) => write!(f, "failed: {reason}"),
        }
    }
}

impl FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unverified" => Ok(Status::Unverified),
            "verified-hyperfield" => Ok(Status::VerifiedHyperfield),
            "certified-ample" => Ok(Status::CertifiedAmple),
            _ => match s.strip_prefix("failed") {
                Some(rest) => Ok(Status::Failed(
                    rest.trim_start_matches(':').trim().to_string(),
                )),
                None => Err(Error::Parse(format!("unknown status {s:?}"))),
            },
        }
    }
}

/// Minimum row and column popcounts of `π`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmpleParams {
    pub m: usize,
    pub k: usize,
}

impl AmpleParams {
    pub fn is_ample(&self, r: usize) -> bool {
        self.m + self.k > r
    }
}

/// The axioms checked by [`HyperfieldCandidate::verify_axioms`], in the
/// order they are reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Zero,
    NonemptySums,
    Commutativity,
    UniqueNegatives,
    Distributivity,
    Associativity,
    Reversibility,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Zero => "zero",
            Axiom::NonemptySums => "nonempty-sums",
            Axiom::Commutativity => "commutativity",
            Axiom::UniqueNegatives => "unique-negatives",
            Axiom::Distributivity => "distributivity",
            Axiom::Associativity => "associativity",
            Axiom::Reversibility => "reversibility",
        };
        f.write_str(s)
    }
}

/// A failed axiom with the elements that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<String>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at ({}): {}",
            self.axiom,
            self.witness.join(", "),
            self.detail
        )
    }
}

/// Outcome of a full axiom check: at most one violation per axiom.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn is_hyperfield(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }

    pub fn violates(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    /// True when every axiom other than `axiom` holds.
    pub fn passes_all_but(&self, axiom: Axiom) -> bool {
        self.violations.iter().all(|v| v.axiom == axiom)
    }
}

/// All pairwise sums of a candidate, indexed by element-set bit indices.
#[derive(Clone, Debug)]
pub struct AdditionTable {
    r: usize,
    sums: Vec<ElementSet>,
}

impl AdditionTable {
    pub fn order(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn sum(&self, x: usize, y: usize) -> ElementSet {
        self.sums[x * (self.r + 1) + y]
    }

    /// `A + z = ⋃_{a ∈ A} (a + z)`.
    #[inline]
    pub fn set_plus(&self, a: ElementSet, z: usize) -> ElementSet {
        let mut out = 0u128;
        for i in a.iter() {
            out |= self.sums[i * (self.r + 1) + z].0;
        }
        ElementSet(out)
    }

    /// `x + A = ⋃_{a ∈ A} (x + a)`.
    #[inline]
    pub fn plus_set(&self, x: usize, a: ElementSet) -> ElementSet {
        let row = &self.sums[x * (self.r + 1)..(x + 1) * (self.r + 1)];
        let mut out = 0u128;
        for i in a.iter() {
            out |= row[i].0;
        }
        ElementSet(out)
    }

    /// `A + B = ⋃_{b ∈ B} (A + b)`.
    pub fn set_plus_set(&self, a: ElementSet, b: ElementSet) -> ElementSet {
        b.iter()
            .fold(ElementSet::EMPTY, |acc, j| acc.union(self.set_plus(a, j)))
    }
}

/// A group, a choice of `-1` and a relation `π`.
#[derive(Clone, Debug)]
pub struct HyperfieldCandidate {
    group: Arc<AbelianGroup>,
    minus_one: Elem,
    pi: PairRelation,
    status: Status,
}

impl PartialEq for HyperfieldCandidate {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.minus_one == other.minus_one && self.pi == other.pi
    }
}

impl HyperfieldCandidate {
    pub fn new(group: Arc<AbelianGroup>, minus_one: Elem, pi: PairRelation) -> Result<Self> {
        let r = group.order();
        if r > MAX_UNITS {
            return Err(Error::capacity(
                "hyperfield unit count",
                r as u128,
                MAX_UNITS as u128,
            ));
        }
        if pi.order() != r {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: pi.order(),
            });
        }
        if !group.contains(minus_one) || group.elem_order(minus_one) > 2 {
            return Err(Error::InvalidSpec(format!(
                "-1 must have order 1 or 2, got index {}",
                minus_one.0
            )));
        }
        Ok(HyperfieldCandidate {
            group,
            minus_one,
            pi,
            status: Status::Unverified,
        })
    }

    /// `π` = union of the blocks whose flag is set.
    pub fn build(bp: &BlockPartition, chosen: &[bool]) -> Result<Self> {
        if chosen.len() != bp.num_blocks() {
            return Err(Error::DimensionMismatch {
                expected: bp.num_blocks(),
                found: chosen.len(),
            });
        }
        let mut pi = PairRelation::empty(bp.group().order());
        for (i, _) in chosen.iter().enumerate().filter(|(_, &c)| c) {
            for &p in bp.block(i) {
                pi.insert(p);
            }
        }
        Self::new(bp.group().clone(), bp.minus_one(), pi)
    }

    /// `π` = union of the listed blocks.
    pub fn from_blocks(bp: &BlockPartition, blocks: &[usize]) -> Result<Self> {
        let mut chosen = vec![false; bp.num_blocks()];
        for &b in blocks {
            *chosen.get_mut(b).ok_or_else(|| {
                Error::InvalidSpec(format!("block {b} out of range 0..{}", bp.num_blocks()))
            })? = true;
        }
        Self::build(bp, &chosen)
    }

    pub fn group(&self) -> &Arc<AbelianGroup> {
        &self.group
    }

    pub fn minus_one(&self) -> Elem {
        self.minus_one
    }

    pub fn pi(&self) -> &PairRelation {
        &self.pi
    }

    pub fn status(&self) -> &Status {
        &self.status
    }

    pub fn set_status(&mut self, status: Status) {
        self.status = status;
    }

    /// `|H^×|`.
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn zero_index(&self) -> usize {
        self.group.order()
    }

    /// `-x`.
    pub fn neg(&self, x: Element) -> Element {
        match x {
            Element::Zero => Element::Zero,
            Element::Unit(e) => Element::Unit(self.group.mul(self.minus_one, e)),
        }
    }

    pub fn mul(&self, x: Element, y: Element) -> Element {
        match (x, y) {
            (Element::Unit(a), Element::Unit(b)) => Element::Unit(self.group.mul(a, b)),
            _ => Element::Zero,
        }
    }

    /// `y · S`; zero stays zero.
    pub fn scale_set(&self, y: Element, s: ElementSet) -> ElementSet {
        let r = self.order();
        match y {
            Element::Zero => {
                if s.is_empty() {
                    ElementSet::EMPTY
                } else {
                    ElementSet::singleton(r)
                }
            }
            Element::Unit(g) => {
                let mut out = ElementSet::EMPTY;
                for i in s.iter() {
                    if i == r {
                        out.insert(r);
                    } else {
                        out.insert(self.group.mul(g, Elem(i)).0);
                    }
                }
                out
            }
        }
    }

    /// The hypersum `x + y`.
    pub fn add(&self, x: Element, y: Element) -> ElementSet {
        let r = self.order();
        match (x, y) {
            (Element::Zero, other) | (other, Element::Zero) => {
                ElementSet::singleton(other.index(r))
            }
            (Element::Unit(a), Element::Unit(b)) => {
                let z = self.group.mul(self.group.inv(b), a);
                let mut p = self.pi.row(z);
                if z == self.minus_one {
                    p.insert(r);
                }
                self.scale_set(Element::Unit(b), p)
            }
        }
    }

    pub fn addition_table(&self) -> AdditionTable {
        let r = self.order();
        let mut sums = Vec::with_capacity((r + 1) * (r + 1));
        for x in 0..=r {
            for y in 0..=r {
                sums.push(self.add(Element::from_index(x, r), Element::from_index(y, r)));
            }
        }
        AdditionTable { r, sums }
    }

    pub fn element_name(&self, x: Element) -> String {
        match x {
            Element::Zero => "0".to_string(),
            Element::Unit(e) => self.group.element_name(e),
        }
    }

    fn index_name(&self, i: usize) -> String {
        self.element_name(Element::from_index(i, self.order()))
    }

    pub fn set_name(&self, s: ElementSet) -> String {
        let names: Vec<String> = s.iter().map(|i| self.index_name(i)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Checks every axiom without touching the status.
    pub fn check_axioms(&self) -> VerificationReport {
        self.run_checks(false)
    }

    /// True iff every axiom holds; stops at the first violation.
    pub fn is_hyperfield(&self) -> bool {
        self.run_checks(true).is_hyperfield()
    }

    fn run_checks(&self, stop_at_first: bool) -> VerificationReport {
        type Check = fn(&HyperfieldCandidate, &AdditionTable) -> Option<Violation>;
        const CHECKS: [Check; 7] = [
            HyperfieldCandidate::check_zero,
            HyperfieldCandidate::check_nonempty,
            HyperfieldCandidate::check_commutativity,
            HyperfieldCandidate::check_negatives,
            HyperfieldCandidate::check_distributivity,
            HyperfieldCandidate::check_associativity,
            HyperfieldCandidate::check_reversibility,
        ];
        let t = self.addition_table();
        let mut report = VerificationReport::default();
        for check in CHECKS {
            if let Some(v) = check(self, &t) {
                report.violations.push(v);
                if stop_at_first {
                    break;
                }
            }
        }
        report
    }

    fn violation(&self, axiom: Axiom, witness: &[usize], detail: String) -> Option<Violation> {
        Some(Violation {
            axiom,
            witness: witness.iter().map(|&i| self.index_name(i)).collect(),
            detail,
        })
    }

    fn check_zero(&self, t: &AdditionTable) -> Option<Violation> {
        let zero = self.order();
        let x = (0..=zero).find(|&x| {
            t.sum(zero, x) != ElementSet::singleton(x) || t.sum(x, zero) != ElementSet::singleton(x)
        })?;
        self.violation(Axiom::Zero, &[x], "0 is not an additive identity".into())
    }

    fn check_nonempty(&self, t: &AdditionTable) -> Option<Violation> {
        let r = self.order();
        for x in 0..r {
            for y in 0..r {
                if t.sum(x, y).is_empty() {
                    return self.violation(
                        Axiom::NonemptySums,
                        &[x, y],
                        format!("{} + {} is empty", self.index_name(x), self.index_name(y)),
                    );
                }
            }
        }
        None
    }

    fn check_commutativity(&self, t: &AdditionTable) -> Option<Violation> {
        let r = self.order();
        for x in 0..=r {
            for y in x + 1..=r {
                if t.sum(x, y) != t.sum(y, x) {
                    return self.violation(
                        Axiom::Commutativity,
                        &[x, y],
                        format!(
                            "x + y = {} but y + x = {}",
                            self.set_name(t.sum(x, y)),
                            self.set_name(t.sum(y, x))
                        ),
                    );
                }
            }
        }
        None
    }

    fn check_negatives(&self, t: &AdditionTable) -> Option<Violation> {
        let r = self.order();
        for x in 0..=r {
            let negatives: Vec<usize> = (0..=r).filter(|&y| t.sum(x, y).contains(r)).collect();
            if negatives.len() != 1 {
                let mut w = vec![x];
                w.extend(&negatives);
                return self.violation(
                    Axiom::UniqueNegatives,
                    &w,
                    format!("{} has {} negatives", self.index_name(x), negatives.len()),
                );
            }
        }
        None
    }

    fn check_distributivity(&self, t: &AdditionTable) -> Option<Violation> {
        let r = self.order();
        for a in 0..=r {
            let ea = Element::from_index(a, r);
            for b in 0..=r {
                let ab = self.mul(ea, Element::from_index(b, r)).index(r);
                for c in 0..=r {
                    let lhs = self.scale_set(ea, t.sum(b, c));
                    let ac = self.mul(ea, Element::from_index(c, r)).index(r);
                    let rhs = t.sum(ab, ac);
                    if lhs != rhs {
                        return self.violation(
                            Axiom::Distributivity,
                            &[a, b, c],
                            format!(
                                "a(b+c) = {} but ab+ac = {}",
                                self.set_name(lhs),
                                self.set_name(rhs)
                            ),
                        );
                    }
                }
            }
        }
        None
    }

    // Triples involving 0 reduce to a single sum on both sides.
    fn check_associativity(&self, t: &AdditionTable) -> Option<Violation> {
        let r = self.order();
        for x in 0..r {
            for y in 0..r {
                let xy = t.sum(x, y);
                for z in 0..r {
                    let lhs = t.set_plus(xy, z);
                    let rhs = t.plus_set(x, t.sum(y, z));
                    if lhs != rhs {
                        return self.violation(
                            Axiom::Associativity,
                            &[x, y, z],
                            format!(
                                "(x+y)+z = {} but x+(y+z) = {}",
                                self.set_name(lhs),
                                self.set_name(rhs)
                            ),
                        );
                    }
                }
            }
        }
        None
    }

    fn check_reversibility(&self, t: &AdditionTable) -> Option<Violation> {
        let r = self.order();
        for x in 0..=r {
            for y in 0..=r {
                let neg_y = self.neg(Element::from_index(y, r)).index(r);
                let x_minus_y = t.sum(x, neg_y);
                for z in 0..=r {
                    if t.sum(y, z).contains(x) && !x_minus_y.contains(z) {
                        return self.violation(
                            Axiom::Reversibility,
                            &[x, y, z],
                            format!("x ∈ y+z but x-y = {} misses z", self.set_name(x_minus_y)),
                        );
                    }
                }
            }
        }
        None
    }

    /// Runs every axiom check and records the outcome in the status.
    pub fn verify_axioms(&mut self) -> VerificationReport {
        let report = self.check_axioms();
        self.status = match report.first_violation() {
            None => Status::VerifiedHyperfield,
            Some(v) => Status::Failed(v.to_string()),
        };
        report
    }

    pub fn ample_params(&self) -> AmpleParams {
        let g = &self.group;
        AmpleParams {
            m: g.elements()
                .map(|x| self.pi.row_count(x))
                .min()
                .unwrap_or(0),
            k: g.elements()
                .map(|y| self.pi.column_count(y))
                .min()
                .unwrap_or(0),
        }
    }

    pub fn is_ample(&self) -> bool {
        self.ample_params().is_ample(self.order())
    }

    fn check_partition(&self, bp: &BlockPartition) -> Result<()> {
        if **bp.group() != *self.group || bp.minus_one() != self.minus_one {
            return Err(Error::Precondition(
                "block partition belongs to a different group or -1".into(),
            ));
        }
        Ok(())
    }

    pub fn is_union_of_blocks(&self, bp: &BlockPartition) -> Result<bool> {
        self.check_partition(bp)?;
        Ok(self.blocks_used(bp)?.is_some())
    }

    /// The blocks making up `π`, or `None` if `π` is not a union of blocks.
    pub fn blocks_used(&self, bp: &BlockPartition) -> Result<Option<Vec<usize>>> {
        self.check_partition(bp)?;
        let mut used = Vec::new();
        for (i, block) in bp.blocks().iter().enumerate() {
            let present = block.iter().filter(|&&p| self.pi.contains(p)).count();
            if present == block.len() {
                used.push(i);
            } else if present != 0 {
                return Ok(None);
            }
        }
        Ok(Some(used))
    }

    /// Certifies a union of blocks with `m + k > r` as a hyperfield without
    /// running the axiom checks.
    pub fn certify_ample(&mut self, bp: &BlockPartition) -> Result<bool> {
        if !self.is_union_of_blocks(bp)? {
            return Err(Error::Precondition("π is not a union of blocks".into()));
        }
        let ample = self.is_ample();
        if ample {
            self.status = Status::CertifiedAmple;
        }
        Ok(ample)
    }

    pub fn to_record(&self) -> HyperfieldRecord {
        HyperfieldRecord {
            group: self.group.spec(),
            minus_one: self.minus_one.0,
            pi: self.pi.to_bit_string(),
            status: self.status.to_string(),
        }
    }

    pub fn from_record(rec: &HyperfieldRecord) -> Result<Self> {
        let group = Arc::new(AbelianGroup::try_from(&rec.group)?);
        if group.factors() != rec.group.factors.as_slice() {
            return Err(Error::InvalidSpec(format!(
                "group factors {:?} are not in invariant-factor form",
                rec.group.factors
            )));
        }
        let pi = PairRelation::from_bit_string(group.order(), &rec.pi)?;
        let mut h = Self::new(group, Elem(rec.minus_one), pi)?;
        h.status = rec.status.parse()?;
        Ok(h)
    }

    /// Human-readable `x + 1` for every unit `x`.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        for x in self.group.elements() {
            let s = self.add(Element::Unit(x), Element::ONE);
            out.push_str(&format!(
                "{} + 1 = {}\n",
                self.group.element_name(x),
                self.set_name(s)
            ));
        }
        out
    }
}

/// JSON form of a hyperfield candidate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperfieldRecord {
    pub group: GroupSpec,
    pub minus_one: usize,
    pub pi: String,
    pub status: String,
}
