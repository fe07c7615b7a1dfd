//! Quotient hyperfields `F/G` of finite fields and quotient-status tests.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::blocks::Pair;
use crate::census::{automorphisms_fixing, canonical_key};
use crate::error::{Error, Result};
use crate::field::{make_field, prime_powers_up_to, FiniteField, MAX_FIELD_ORDER};
use crate::group::{AbelianGroup, Elem};
use crate::hyperfield::{Element, ElementSet, HyperfieldCandidate, PairRelation, Status};

/// `F/G` where `G` is the subgroup of index `r` in `F^×`, i.e. the `r`-th
/// powers.
#[derive(Clone, Debug)]
pub struct QuotientSpec {
    field: Arc<FiniteField>,
    index: usize,
}

impl QuotientSpec {
    pub fn new(field: Arc<FiniteField>, index: usize) -> Result<Self> {
        let n = field.order() - 1;
        if index == 0 || !n.is_multiple_of(index as u64) {
            return Err(Error::Precondition(format!(
                "index {index} does not divide {n} = |F^×|"
            )));
        }
        Ok(QuotientSpec { field, index })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn subgroup_order(&self) -> u64 {
        (self.field.order() - 1) / self.index as u64
    }

    /// Elements of `G`, ascending.
    pub fn subgroup_elements(&self) -> Vec<u64> {
        let mut g: Vec<u64> = (0..self.subgroup_order())
            .map(|j| self.field.exp(j * self.index as u64))
            .collect();
        g.sort_unstable();
        g
    }

    /// Least element (by encoding) generating `G`.
    pub fn least_generator(&self) -> u64 {
        let n = self.subgroup_order();
        self.subgroup_elements()
            .into_iter()
            .find(|&x| {
                let l = self.field.log(x).expect("nonzero") / self.index as u64;
                crate::group::gcd(l as usize, n as usize) == 1
            })
            .expect("a cyclic group has a generator")
    }

    /// Coset of a nonzero field element, as an element of `Z_r`.
    pub fn coset(&self, x: u64) -> Option<Elem> {
        self.field
            .log(x)
            .map(|l| Elem((l % self.index as u64) as usize))
    }

    fn minus_one(&self) -> Elem {
        self.coset(self.field.minus_one()).expect("-1 is a unit")
    }

    /// `π` of the quotient: `(c, [1 + g^(c + r j)])` for every `j`.
    fn relation(&self) -> PairRelation {
        let r = self.index;
        let mut pi = PairRelation::empty(r);
        for c in 0..r as u64 {
            for j in 0..self.subgroup_order() {
                let x = self.field.exp(c + r as u64 * j);
                if let Some(d) = self.coset(self.field.add(1, x)) {
                    pi.insert(Pair::new(Elem(c as usize), d));
                }
            }
        }
        pi
    }

    pub fn witness(&self) -> QuotientWitness {
        let f = self.field();
        QuotientWitness {
            q: f.order(),
            p: f.characteristic(),
            k: f.degree(),
            r: self.index,
            modulus: (f.degree() > 1).then(|| f.modulus_string()),
            subgroup_order: self.subgroup_order(),
            least_generator: self.least_generator(),
            generator_name: f.element_name(self.least_generator()),
            elements: self.subgroup_elements(),
        }
    }
}

/// Builds `F/G` over the cyclic group `Z_r` (coset of `g^i` is `i mod r`)
/// and verifies it.
pub fn quotient_hyperfield(spec: &QuotientSpec) -> Result<HyperfieldCandidate> {
    let group = Arc::new(AbelianGroup::cyclic(spec.index)?);
    let mut h = HyperfieldCandidate::new(group, spec.minus_one(), spec.relation())?;
    let report = h.verify_axioms();
    if let Some(v) = report.first_violation() {
        return Err(Error::InvariantViolation(format!(
            "quotient of {} by index {} fails {v}",
            spec.field(),
            spec.index
        )));
    }
    Ok(h)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientWitness {
    pub q: u64,
    pub p: u64,
    pub k: u32,
    pub r: usize,
    /// Defining polynomial, for extension fields.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<String>,
    pub subgroup_order: u64,
    pub least_generator: u64,
    pub generator_name: String,
    pub elements: Vec<u64>,
}

impl fmt::Display for QuotientWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "Z{}/<{}>", self.q, self.generator_name)
        } else {
            write!(
                f,
                "GF({}^{})/<{}> mod {}",
                self.p,
                self.k,
                self.generator_name,
                self.modulus.as_deref().unwrap_or("")
            )
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FiniteQuotientSearch {
    pub found: Option<QuotientWitness>,
    pub q_bound: u64,
    pub fields_checked: usize,
    /// A miss is conclusive: no finite field of any size works.
    pub definitive: bool,
}

/// `min(r^4, 10^5)`.
pub fn default_q_bound(r: usize) -> u64 {
    (r as u64).saturating_pow(4).clamp(2, MAX_FIELD_ORDER)
}

/// Searches fields of order at most `q_bound` for a quotient isomorphic to `h`.
pub fn is_finite_quotient(h: &HyperfieldCandidate, q_bound: u64) -> Result<FiniteQuotientSearch> {
    if q_bound > MAX_FIELD_ORDER {
        return Err(Error::capacity(
            "quotient search bound",
            q_bound as u128,
            MAX_FIELD_ORDER as u128,
        ));
    }
    let r = h.order();
    if !h.group().is_cyclic() {
        // F^×/G is always cyclic.
        return Ok(FiniteQuotientSearch {
            found: None,
            q_bound,
            fields_checked: 0,
            definitive: true,
        });
    }
    let autos = automorphisms_fixing(h.group(), h.minus_one())?;
    let target = canonical_key(h.pi(), &autos);
    let candidates: Vec<(u64, u64, u32)> = prime_powers_up_to(q_bound)
        .into_iter()
        .filter(|&(q, _, _)| (q - 1) % r as u64 == 0)
        .collect();
    let hit = candidates
        .par_iter()
        .map(|&(_, p, k)| -> Result<Option<QuotientSpec>> {
            let spec = QuotientSpec::new(Arc::new(make_field(p, k)?), r)?;
            if spec.minus_one() != h.minus_one() {
                return Ok(None);
            }
            Ok((canonical_key(&spec.relation(), &autos) == target).then_some(spec))
        })
        .find_first(|res| !matches!(res, Ok(None)));
    let found = match hit {
        Some(res) => Some(res?.expect("filtered").witness()),
        None => None,
    };
    Ok(FiniteQuotientSearch {
        found,
        q_bound,
        fields_checked: candidates.len(),
        definitive: r % 2 == 1 && q_bound >= (r as u64).pow(4),
    })
}

/// True iff `1 + (-1) ≠ H`, which rules out every quotient of an infinite
/// field.
pub fn excludes_infinite_quotient(h: &HyperfieldCandidate) -> bool {
    let one_minus_one = h.add(Element::ONE, h.neg(Element::ONE));
    one_minus_one != ElementSet::full(h.order())
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum QuotientStatus {
    Quotient { witness: QuotientWitness },
    Nonquotient { q_bound: u64 },
    Unknown { q_bound: u64, reason: String },
}

impl QuotientStatus {
    pub fn label(&self) -> &'static str {
        match self {
            QuotientStatus::Quotient { .. } => "quotient",
            QuotientStatus::Nonquotient { .. } => "nonquotient",
            QuotientStatus::Unknown { .. } => "unknown",
        }
    }

    pub fn witness(&self) -> Option<&QuotientWitness> {
        match self {
            QuotientStatus::Quotient { witness } => Some(witness),
            _ => None,
        }
    }
}

impl fmt::Display for QuotientStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientStatus::Quotient { witness } => write!(f, "quotient({witness})"),
            QuotientStatus::Nonquotient { .. } => f.write_str("nonquotient"),
            QuotientStatus::Unknown { q_bound, .. } => write!(f, "unknown(q <= {q_bound})"),
        }
    }
}

/// Combines the finite search with the infinite-field criterion.
/// `q_bound` defaults to [`default_q_bound`].
pub fn quotient_status(h: &HyperfieldCandidate, q_bound: Option<u64>) -> Result<QuotientStatus> {
    if matches!(h.status(), Status::Failed(_)) {
        return Err(Error::Precondition("candidate failed verification".into()));
    }
    let q_bound = q_bound.unwrap_or_else(|| default_q_bound(h.order()));
    let search = is_finite_quotient(h, q_bound)?;
    if let Some(witness) = search.found {
        return Ok(QuotientStatus::Quotient { witness });
    }
    let excludes = excludes_infinite_quotient(h);
    Ok(match (search.definitive, excludes) {
        (true, true) => QuotientStatus::Nonquotient { q_bound },
        (false, _) => QuotientStatus::Unknown {
            q_bound,
            reason: "finite search below the conclusive bound".into(),
        },
        (true, false) => QuotientStatus::Unknown {
            q_bound,
            reason: "1 - 1 = H, so a quotient of an infinite field is not excluded".into(),
        },
    })
}
