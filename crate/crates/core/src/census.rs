//! Exhaustive enumeration of block selections and isomorphism classification.
//!
//! Subsets of blocks are visited in Gray-code order so consecutive subsets
//! differ by a single block, which lets row and column popcounts of `π` be
//! maintained incrementally. Ranges of the Gray sequence are independent and
//! can be processed by separate workers or separate runs (`Shard`); partial
//! censuses merge associatively.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blocks::BlockPartition;
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, Automorphism, Elem};
use crate::hyperfield::{HyperfieldCandidate, PairRelation, Status};

/// Default limit on the number of blocks (the census visits `2^b` subsets).
pub const DEFAULT_MAX_BLOCKS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Verify every subset with the full axiom check.
    Full,
    /// Keep only ample selections and certify them without verification.
    AmpleOnly,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Full => "full",
            Mode::AmpleOnly => "ample-only",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Mode::Full),
            "ample-only" | "ample" => Ok(Mode::AmpleOnly),
            _ => Err(Error::Parse(format!("unknown census mode {s:?}"))),
        }
    }
}

/// The `index`-th of `count` contiguous ranges of the Gray sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shard {
    pub index: u64,
    pub count: u64,
}

impl Shard {
    pub fn range(&self, total: u64) -> std::ops::Range<u64> {
        let t = total as u128;
        let lo = t * self.index as u128 / self.count as u128;
        let hi = t * (self.index as u128 + 1) / self.count as u128;
        lo as u64..hi as u64
    }
}

impl FromStr for Shard {
    type Err = Error;

    /// `"i/n"` with `0 <= i < n`.
    fn from_str(s: &str) -> Result<Self> {
        let (i, n) = s
            .split_once('/')
            .ok_or_else(|| Error::Parse(format!("shard must look like i/n, got {s:?}")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad shard {s:?}")))
        };
        let shard = Shard {
            index: parse(i)?,
            count: parse(n)?,
        };
        if shard.count == 0 || shard.index >= shard.count {
            return Err(Error::Parse(format!("shard index out of range in {s:?}")));
        }
        Ok(shard)
    }
}

impl fmt::Display for Shard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.index, self.count)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusConfig {
    pub max_blocks: usize,
    pub shard: Option<Shard>,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig {
            max_blocks: DEFAULT_MAX_BLOCKS,
            shard: None,
        }
    }
}

/// Sort key equivalent to the row-major bit string of `π` under
/// lexicographic order: each row is stored bit-reversed so integer order on
/// rows matches string order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u128>);

impl CanonicalKey {
    fn of_image(pi: &PairRelation, sigma: &Automorphism) -> Self {
        let r = pi.order();
        let mut rows = vec![0u128; r];
        for p in pi.pairs() {
            rows[sigma.apply(p.x).0] |= 1u128 << (127 - sigma.apply(p.y).0);
        }
        CanonicalKey(rows)
    }

    pub fn to_relation(&self) -> PairRelation {
        let r = self.0.len();
        let mut pi = PairRelation::empty(r);
        for (x, &row) in self.0.iter().enumerate() {
            for y in 0..r {
                if row >> (127 - y) & 1 == 1 {
                    pi.insert(crate::blocks::Pair::new(Elem(x), Elem(y)));
                }
            }
        }
        pi
    }

    pub fn to_bit_string(&self) -> String {
        let r = self.0.len();
        let mut s = String::with_capacity(r * r);
        for &row in &self.0 {
            for y in 0..r {
                s.push(if row >> (127 - y) & 1 == 1 { '1' } else { '0' });
            }
        }
        s
    }
}

/// Lexicographically least image of `π` under the given automorphisms.
pub fn canonical_key(pi: &PairRelation, autos: &[Automorphism]) -> CanonicalKey {
    autos
        .iter()
        .map(|s| CanonicalKey::of_image(pi, s))
        .min()
        .unwrap_or_else(|| CanonicalKey::of_image(pi, &Automorphism::identity(pi.order())))
}

/// Row-major bit string of the lexicographically least image of `π`.
/// `autos` should be the automorphisms fixing `-1`.
pub fn canonical_form(h: &HyperfieldCandidate, autos: &[Automorphism]) -> String {
    canonical_key(h.pi(), autos).to_bit_string()
}

/// Automorphisms of the group that fix `minus_one`.
pub fn automorphisms_fixing(group: &AbelianGroup, minus_one: Elem) -> Result<Vec<Automorphism>> {
    Ok(group
        .automorphisms()?
        .into_iter()
        .filter(|s| s.apply(minus_one) == minus_one)
        .collect())
}

/// One isomorphism class of hyperfields found by a census.
#[derive(Clone, Debug)]
pub struct IsoClass {
    pub canonical: String,
    /// The hyperfield whose `π` is the canonical form.
    pub representative: HyperfieldCandidate,
    /// Blocks making up the representative.
    pub blocks: Vec<usize>,
    pub members: u64,
    pub ample: bool,
}

#[derive(Clone, Debug)]
pub struct Census {
    pub group: Arc<AbelianGroup>,
    pub minus_one: Elem,
    pub mode: Mode,
    pub num_blocks: usize,
    pub shard: Option<Shard>,
    pub subsets_examined: u64,
    pub hyperfields: u64,
    pub ample: u64,
    /// Sorted by canonical form.
    pub classes: Vec<IsoClass>,
}

impl Census {
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// `subsets=.. hyperfields=.. classes=.. ample=..`
    pub fn summary_line(&self) -> String {
        format!(
            "subsets={} hyperfields={} classes={} ample={}",
            self.subsets_examined,
            self.hyperfields,
            self.classes.len(),
            self.ample
        )
    }

    /// Combines two partial censuses of the same group, `-1` and mode.
    pub fn merge(mut self, other: Census) -> Result<Census> {
        if self.group != other.group || self.minus_one != other.minus_one || self.mode != other.mode
        {
            return Err(Error::Precondition(
                "cannot merge censuses of different groups, -1 values or modes".into(),
            ));
        }
        self.subsets_examined += other.subsets_examined;
        self.hyperfields += other.hyperfields;
        self.ample += other.ample;
        self.shard = None;
        let mut by_key: BTreeMap<String, IsoClass> = self
            .classes
            .drain(..)
            .map(|c| (c.canonical.clone(), c))
            .collect();
        for c in other.classes {
            match by_key.get_mut(&c.canonical) {
                Some(existing) => existing.members += c.members,
                None => {
                    by_key.insert(c.canonical.clone(), c);
                }
            }
        }
        self.classes = by_key.into_values().collect();
        Ok(self)
    }
}

#[derive(Default)]
struct Partial {
    examined: u64,
    hyperfields: u64,
    ample: u64,
    classes: BTreeMap<CanonicalKey, (u64, bool)>,
}

impl Partial {
    fn absorb(mut self, other: Partial) -> Partial {
        self.examined += other.examined;
        self.hyperfields += other.hyperfields;
        self.ample += other.ample;
        for (k, (n, a)) in other.classes {
            self.classes.entry(k).or_insert((0, a)).0 += n;
        }
        self
    }
}

/// Popcounts of rows and columns of `π`, with the number of lines whose
/// count is at most `r/2`.
struct LineCounts {
    r: usize,
    rows: Vec<usize>,
    cols: Vec<usize>,
    low: usize,
}

impl LineCounts {
    fn new(pi: &PairRelation) -> Self {
        let r = pi.order();
        let rows: Vec<usize> = (0..r).map(|x| pi.row_count(Elem(x))).collect();
        let cols: Vec<usize> = (0..r).map(|y| pi.column_count(Elem(y))).collect();
        let low = rows.iter().chain(&cols).filter(|&&c| 2 * c <= r).count();
        LineCounts { r, rows, cols, low }
    }

    #[inline]
    fn bump(r: usize, c: &mut usize, up: bool, low: &mut usize) {
        let was_low = 2 * *c <= r;
        if up {
            *c += 1;
        } else {
            *c -= 1;
        }
        let is_low = 2 * *c <= r;
        match (was_low, is_low) {
            (true, false) => *low -= 1,
            (false, true) => *low += 1,
            _ => {}
        }
    }

    fn flip(&mut self, x: usize, y: usize, now_present: bool) {
        Self::bump(self.r, &mut self.rows[x], now_present, &mut self.low);
        Self::bump(self.r, &mut self.cols[y], now_present, &mut self.low);
    }

    /// Every row and column holds more than `r/2` pairs.
    fn all_high(&self) -> bool {
        self.low == 0
    }
}

#[inline]
fn gray(t: u64) -> u64 {
    t ^ (t >> 1)
}

fn relation_for_mask(bp: &BlockPartition, mask: u64) -> PairRelation {
    let mut pi = PairRelation::empty(bp.group().order());
    for b in 0..bp.num_blocks() {
        if mask >> b & 1 == 1 {
            for &p in bp.block(b) {
                pi.insert(p);
            }
        }
    }
    pi
}

fn scan_range(
    bp: &BlockPartition,
    mode: Mode,
    autos: &[Automorphism],
    range: std::ops::Range<u64>,
) -> Partial {
    let mut out = Partial::default();
    if range.is_empty() {
        return out;
    }
    let group = bp.group().clone();
    let m1 = bp.minus_one();
    let mut pi = relation_for_mask(bp, gray(range.start));
    let mut counts = LineCounts::new(&pi);
    let mut t = range.start;
    loop {
        out.examined += 1;
        let keep = match mode {
            Mode::AmpleOnly => counts.all_high(),
            Mode::Full => true,
        };
        if keep {
            let mut h = HyperfieldCandidate::new(group.clone(), m1, pi.clone())
                .expect("block partition yields valid candidates");
            let (is_hf, ample) = match mode {
                Mode::Full => (h.is_hyperfield(), h.is_ample()),
                Mode::AmpleOnly => {
                    let ok = h.certify_ample(bp).expect("π is a union of blocks");
                    (ok, ok)
                }
            };
            if is_hf {
                out.hyperfields += 1;
                out.ample += ample as u64;
                let key = canonical_key(&pi, autos);
                out.classes.entry(key).or_insert((0, ample)).0 += 1;
            }
        }
        t += 1;
        if t >= range.end {
            break;
        }
        let flip = t.trailing_zeros() as usize;
        let now_present = gray(t) >> flip & 1 == 1;
        for &p in bp.block(flip) {
            pi.toggle(p);
            counts.flip(p.x.0, p.y.0, now_present);
        }
    }
    out
}

/// Enumerates every block subset with the default configuration.
pub fn enumerate(bp: &BlockPartition, mode: Mode) -> Result<Census> {
    enumerate_with(bp, mode, &CensusConfig::default())
}

pub fn enumerate_with(bp: &BlockPartition, mode: Mode, config: &CensusConfig) -> Result<Census> {
    let b = bp.num_blocks();
    if b > config.max_blocks || b > 62 {
        return Err(Error::Capacity {
            what: "block count",
            requested: b as u128,
            limit: config.max_blocks.min(62) as u128,
            hint: "; raise --budget or split the run with --shard",
        });
    }
    let autos = automorphisms_fixing(bp.group(), bp.minus_one())?;
    let total = 1u64 << b;
    let range = config.shard.map_or(0..total, |s| s.range(total));
    let len = range.end - range.start;
    let chunks = len.clamp(1, 256);
    let partial = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = range.start + len * c / chunks;
            let hi = range.start + len * (c + 1) / chunks;
            scan_range(bp, mode, &autos, lo..hi)
        })
        .reduce(Partial::default, Partial::absorb);

    let status = match mode {
        Mode::Full => Status::VerifiedHyperfield,
        Mode::AmpleOnly => Status::CertifiedAmple,
    };
    let mut classes = Vec::with_capacity(partial.classes.len());
    for (key, (members, ample)) in partial.classes {
        let mut rep =
            HyperfieldCandidate::new(bp.group().clone(), bp.minus_one(), key.to_relation())?;
        rep.set_status(status.clone());
        let blocks = rep.blocks_used(bp)?.ok_or_else(|| {
            Error::InvariantViolation("canonical form is not a union of blocks".into())
        })?;
        classes.push(IsoClass {
            canonical: key.to_bit_string(),
            representative: rep,
            blocks,
            members,
            ample,
        });
    }
    Ok(Census {
        group: bp.group().clone(),
        minus_one: bp.minus_one(),
        mode,
        num_blocks: b,
        shard: config.shard,
        subsets_examined: partial.examined,
        hyperfields: partial.hyperfields,
        ample: partial.ample,
        classes,
    })
}

/// One census per legal value of `-1`.
pub fn census_all_minus_ones(group: Arc<AbelianGroup>, mode: Mode) -> Result<Vec<Census>> {
    group
        .involution_candidates()
        .into_iter()
        .map(|m1| enumerate(&BlockPartition::compute(group.clone(), m1)?, mode))
        .collect()
}
