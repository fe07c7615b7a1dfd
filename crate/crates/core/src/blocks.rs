//! Block partitions of `H^× x H^×`.
//!
//! A pair `(x, y)` stands for "y ∈ x + 1". Blocks are the orbits of all
//! pairs under the two involutions
//!
//! * consistency: `(x, y) ↦ (x⁻¹, x⁻¹y)` for `x ≠ 1`,
//! * reversal/negation: `(x, y) ↦ (-y, -x)`,
//!
//! so the plus-one relation of any hyperfield is a union of blocks. Blocks
//! are numbered in the order their first pair appears when scanning pairs
//! row by row from `(1, 1)`.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{AbelianGroup, Elem};

/// "y ∈ x + 1".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair {
    pub x: Elem,
    pub y: Elem,
}

impl Pair {
    pub fn new(x: Elem, y: Elem) -> Self {
        Pair { x, y }
    }

    #[inline]
    pub fn encode(self, r: usize) -> usize {
        self.x.0 * r + self.y.0
    }

    #[inline]
    pub fn decode(code: usize, r: usize) -> Self {
        Pair::new(Elem(code / r), Elem(code % r))
    }
}

/// `(x, y) ↦ (x⁻¹, x⁻¹y)`; the identity map on pairs with `x = 1`.
pub fn consistency_step(group: &AbelianGroup, p: Pair) -> Pair {
    if p.x == Elem::IDENTITY {
        return p;
    }
    let xi = group.inv(p.x);
    Pair::new(xi, group.mul(xi, p.y))
}

/// `(x, y) ↦ (-y, -x)` where `-u = minus_one · u`.
pub fn reversal_negation_step(group: &AbelianGroup, p: Pair, minus_one: Elem) -> Pair {
    Pair::new(group.mul(minus_one, p.y), group.mul(minus_one, p.x))
}

/// Spreadsheet-style block label: A..Z, AA, AB, ...
pub fn block_label(mut index: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'A' + (index % 26) as u8);
        if index < 26 {
            break;
        }
        index = index / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).unwrap()
}

/// Parses a block selection such as `"BD"`, `"B,D"`, `"1,3"` or `""` into
/// block indices.
pub fn parse_block_selection(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() || s == "-" {
        return Ok(Vec::new());
    }
    if s.contains(',') || s.chars().all(|c| c.is_ascii_digit()) {
        return s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                let t = t.trim();
                t.parse::<usize>().or_else(|_| label_index(t))
            })
            .collect();
    }
    // Concatenated single letters.
    s.chars().map(|c| label_index(&c.to_string())).collect()
}

fn label_index(label: &str) -> Result<usize> {
    if label.is_empty() || !label.chars().all(|c| c.is_ascii_uppercase()) {
        return Err(Error::Parse(format!("bad block label {label:?}")));
    }
    let mut n = 0usize;
    for c in label.bytes() {
        n = n * 26 + (c - b'A') as usize + 1;
    }
    Ok(n - 1)
}

/// The blocks of a group with a chosen `-1`.
#[derive(Clone, Debug)]
pub struct BlockPartition {
    group: Arc<AbelianGroup>,
    minus_one: Elem,
    blocks: Vec<Vec<Pair>>,
    pair_to_block: Vec<u32>,
}

/// Distinct row-count vectors `c_g`, in order of first occurrence over `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffMatrix {
    pub rows: Vec<Vec<u32>>,
    pub row_labels: Vec<Elem>,
    pub num_blocks: usize,
}

impl BlockPartition {
    /// Computes the orbits of the two closure steps on all `r²` pairs.
    pub fn compute(group: Arc<AbelianGroup>, minus_one: Elem) -> Result<Self> {
        if !group.contains(minus_one) || group.elem_order(minus_one) > 2 {
            return Err(Error::InvalidSpec(format!(
                "-1 must be an element of order 1 or 2, got index {}",
                minus_one.0
            )));
        }
        let r = group.order();
        let unassigned = u32::MAX;
        let mut pair_to_block = vec![unassigned; r * r];
        let mut blocks = Vec::new();
        for code in 0..r * r {
            if pair_to_block[code] != unassigned {
                continue;
            }
            let id = blocks.len() as u32;
            let mut orbit = vec![code];
            pair_to_block[code] = id;
            let mut i = 0;
            while i < orbit.len() {
                let p = Pair::decode(orbit[i], r);
                for q in [
                    consistency_step(&group, p),
                    reversal_negation_step(&group, p, minus_one),
                ] {
                    let c = q.encode(r);
                    if pair_to_block[c] == unassigned {
                        pair_to_block[c] = id;
                        orbit.push(c);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            blocks.push(orbit.into_iter().map(|c| Pair::decode(c, r)).collect());
        }
        Ok(BlockPartition {
            group,
            minus_one,
            blocks,
            pair_to_block,
        })
    }

    pub fn group(&self) -> &Arc<AbelianGroup> {
        &self.group
    }

    pub fn minus_one(&self) -> Elem {
        self.minus_one
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<Pair>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[Pair] {
        &self.blocks[i]
    }

    #[inline]
    pub fn block_of(&self, p: Pair) -> usize {
        self.pair_to_block[p.encode(self.group.order())] as usize
    }

    pub fn label(&self, i: usize) -> String {
        block_label(i)
    }

    /// `c_g`: how many pairs of each block lie in row `g`.
    pub fn row_counts(&self, g: Elem) -> Vec<u32> {
        let mut c = vec![0; self.blocks.len()];
        for y in self.group.elements() {
            c[self.block_of(Pair::new(g, y))] += 1;
        }
        c
    }

    /// `d_g`: how many pairs of each block lie in column `g`.
    pub fn column_counts(&self, g: Elem) -> Vec<u32> {
        let mut d = vec![0; self.blocks.len()];
        for x in self.group.elements() {
            d[self.block_of(Pair::new(x, g))] += 1;
        }
        d
    }

    /// The deduplicated row vectors. Column constraints are not listed since
    /// the column vector of `g` equals the row vector of `-g`.
    pub fn coefficient_matrix(&self) -> CoeffMatrix {
        let mut rows: Vec<Vec<u32>> = Vec::new();
        let mut row_labels = Vec::new();
        for g in self.group.elements() {
            let c = self.row_counts(g);
            if !rows.contains(&c) {
                rows.push(c);
                row_labels.push(g);
            }
        }
        CoeffMatrix {
            rows,
            row_labels,
            num_blocks: self.blocks.len(),
        }
    }

    /// Indices of the blocks containing a pair `(1, y)`, in `y` order.
    pub fn identity_row_blocks(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for y in self.group.elements() {
            let b = self.block_of(Pair::new(Elem::IDENTITY, y));
            if !out.contains(&b) {
                out.push(b);
            }
        }
        out
    }

    /// Grid of block labels, rows `x` and columns `y`.
    pub fn table(&self) -> String {
        let g = &self.group;
        let names: Vec<String> = g.elements().map(|e| g.element_name(e)).collect();
        let labels: Vec<String> = (0..self.blocks.len()).map(block_label).collect();
        let width = names
            .iter()
            .chain(labels.iter())
            .map(|s| s.len())
            .max()
            .unwrap_or(1)
            .max(2);
        let mut out = String::new();
        let _ = write!(out, "{:>width$} |", "π");
        for n in &names {
            let _ = write!(out, " {n:>width$}");
        }
        out.push('\n');
        out.push_str(&"-".repeat((width + 1) * (names.len() + 1) + 1));
        out.push('\n');
        for x in g.elements() {
            let _ = write!(out, "{:>width$} |", names[x.0]);
            for y in g.elements() {
                let _ = write!(out, " {:>width$}", labels[self.block_of(Pair::new(x, y))]);
            }
            out.push('\n');
        }
        out
    }
}

/// Convenience wrapper over [`BlockPartition::compute`].
pub fn compute_blocks(group: &AbelianGroup, minus_one: Elem) -> Result<BlockPartition> {
    BlockPartition::compute(Arc::new(group.clone()), minus_one)
}

impl CoeffMatrix {
    pub fn to_csv(&self, group: &AbelianGroup) -> String {
        let mut out = String::from("g");
        for i in 0..self.num_blocks {
            out.push(',');
            out.push_str(&block_label(i));
        }
        out.push('\n');
        for (label, row) in self.row_labels.iter().zip(&self.rows) {
            out.push_str(&group.element_name(*label));
            for v in row {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }
}
