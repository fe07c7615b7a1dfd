//! Counting 0-1 solutions of `C·x > d`, valid u-v swaps and the block-count
//! lower bound for odd `r`.

use std::collections::HashMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::blocks::{BlockPartition, CoeffMatrix};
use crate::error::{Error, Result};

/// Default column limit for [`count_solutions`].
pub const DEFAULT_MAX_COLUMNS: usize = 30;

/// Above this many columns counting switches to meet-in-the-middle.
pub const DIRECT_COLUMNS: usize = 20;

/// `C·x > d` over `x ∈ {0,1}^columns`. Coefficients are non-negative
/// integers; thresholds are exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalitySystem {
    coeffs: Vec<Vec<i64>>,
    thresholds: Vec<Ratio<i64>>,
    columns: usize,
}

impl InequalitySystem {
    pub fn new(coeffs: Vec<Vec<i64>>, thresholds: Vec<Ratio<i64>>) -> Result<Self> {
        let columns = coeffs.first().map_or(0, Vec::len);
        Self::with_columns(coeffs, thresholds, columns)
    }

    /// Like [`InequalitySystem::new`] but with an explicit column count, which
    /// matters only when there are no rows.
    pub fn with_columns(
        coeffs: Vec<Vec<i64>>,
        thresholds: Vec<Ratio<i64>>,
        columns: usize,
    ) -> Result<Self> {
        if thresholds.len() != coeffs.len() {
            return Err(Error::DimensionMismatch {
                expected: coeffs.len(),
                found: thresholds.len(),
            });
        }
        for row in &coeffs {
            if row.len() != columns {
                return Err(Error::DimensionMismatch {
                    expected: columns,
                    found: row.len(),
                });
            }
            if row.iter().any(|&c| c < 0) {
                return Err(Error::InvalidSpec(
                    "coefficients must be non-negative".into(),
                ));
            }
        }
        Ok(InequalitySystem {
            coeffs,
            thresholds,
            columns,
        })
    }

    /// Every row of `cm` with threshold `r/2`.
    pub fn from_coeff_matrix(cm: &CoeffMatrix, r: usize) -> Self {
        let coeffs: Vec<Vec<i64>> = cm
            .rows
            .iter()
            .map(|row| row.iter().map(|&c| c as i64).collect())
            .collect();
        let thresholds = vec![Ratio::new(r as i64, 2); coeffs.len()];
        InequalitySystem {
            coeffs,
            thresholds,
            columns: cm.num_blocks,
        }
    }

    pub fn rows(&self) -> usize {
        self.coeffs.len()
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn coeffs(&self) -> &[Vec<i64>] {
        &self.coeffs
    }

    pub fn thresholds(&self) -> &[Ratio<i64>] {
        &self.thresholds
    }

    pub fn entry(&self, row: usize, col: usize) -> i64 {
        self.coeffs[row][col]
    }

    pub fn row_sum(&self, row: usize) -> i64 {
        self.coeffs[row].iter().sum()
    }

    /// Whether `x` (bit `j` = column `j`) satisfies every row.
    pub fn is_solution(&self, x: u64) -> bool {
        self.coeffs.iter().zip(&self.thresholds).all(|(row, d)| {
            let s: i64 = (0..self.columns)
                .filter(|&j| x >> j & 1 == 1)
                .map(|j| row[j])
                .sum();
            Ratio::from_integer(s) > *d
        })
    }

    /// Appends `k` all-zero columns.
    pub fn pad_zero_columns(&self, k: usize) -> Self {
        let mut out = self.clone();
        for row in &mut out.coeffs {
            row.extend(std::iter::repeat_n(0, k));
        }
        out.columns += k;
        out
    }

    fn column(&self, j: usize) -> Vec<i64> {
        self.coeffs.iter().map(|row| row[j]).collect()
    }

    /// Least integer row value that beats each threshold.
    fn needs(&self) -> Vec<i64> {
        self.thresholds
            .iter()
            .map(|d| d.floor().to_integer() + 1)
            .collect()
    }

    /// Number of nonzero entries in column `j`.
    fn column_support(&self, j: usize) -> usize {
        self.coeffs.iter().filter(|row| row[j] != 0).count()
    }
}

/// Exact number of solutions, with the default column limit.
pub fn count_solutions(s: &InequalitySystem) -> Result<u128> {
    count_solutions_bounded(s, DEFAULT_MAX_COLUMNS)
}

pub fn count_solutions_bounded(s: &InequalitySystem, max_columns: usize) -> Result<u128> {
    let n = s.columns();
    if n > max_columns || n > 60 {
        return Err(Error::Capacity {
            what: "column count",
            requested: n as u128,
            limit: max_columns.min(60) as u128,
            hint: "; raise --budget to allow larger systems",
        });
    }
    if s.rows() == 0 {
        return Ok(1u128 << n);
    }
    if n <= DIRECT_COLUMNS {
        Ok(count_direct(s))
    } else {
        Ok(count_mitm(s))
    }
}

/// Calls `f` with the row sums of every subset of `cols`, in Gray order.
fn walk_sums(cols: &[Vec<i64>], rows: usize, start: &[i64], mut f: impl FnMut(&[i64])) {
    let mut sums = start.to_vec();
    debug_assert_eq!(sums.len(), rows);
    let total = 1u64 << cols.len();
    let mut t = 0u64;
    loop {
        f(&sums);
        t += 1;
        if t == total {
            break;
        }
        let j = t.trailing_zeros() as usize;
        let on = (t ^ (t >> 1)) >> j & 1 == 1;
        for (s, &c) in sums.iter_mut().zip(&cols[j]) {
            if on {
                *s += c;
            } else {
                *s -= c;
            }
        }
    }
}

fn count_direct(s: &InequalitySystem) -> u128 {
    let n = s.columns();
    let need = s.needs();
    let cols: Vec<Vec<i64>> = (0..n).map(|j| s.column(j)).collect();
    // The top columns are fixed per task, the rest are walked.
    let fixed = n.min(6);
    let (low, high) = cols.split_at(n - fixed);
    (0..1u64 << fixed)
        .into_par_iter()
        .map(|prefix| {
            let mut start = vec![0i64; s.rows()];
            for (j, col) in high.iter().enumerate() {
                if prefix >> j & 1 == 1 {
                    for (a, &c) in start.iter_mut().zip(col) {
                        *a += c;
                    }
                }
            }
            let mut n_ok = 0u128;
            walk_sums(low, s.rows(), &start, |sums| {
                if sums.iter().zip(&need).all(|(a, b)| a >= b) {
                    n_ok += 1;
                }
            });
            n_ok
        })
        .sum()
}

fn half_sums(cols: &[Vec<i64>], rows: usize) -> Vec<(Vec<i64>, u128)> {
    let mut map: HashMap<Vec<i64>, u128> = HashMap::new();
    walk_sums(cols, rows, &vec![0; rows], |sums| {
        *map.entry(sums.to_vec()).or_insert(0) += 1;
    });
    map.into_iter().collect()
}

fn count_mitm(s: &InequalitySystem) -> u128 {
    let n = s.columns();
    let need = s.needs();
    let cols: Vec<Vec<i64>> = (0..n).map(|j| s.column(j)).collect();
    let (left, right) = cols.split_at(n / 2);
    let lefts = half_sums(left, s.rows());
    let mut rights = half_sums(right, s.rows());
    rights.sort_unstable_by(|a, b| b.0[0].cmp(&a.0[0]));
    lefts
        .par_iter()
        .map(|(l, lc)| {
            let mut acc = 0u128;
            for (r, rc) in &rights {
                if l[0] + r[0] < need[0] {
                    break;
                }
                if l.iter().zip(r).zip(&need).all(|((a, b), d)| a + b >= *d) {
                    acc += rc;
                }
            }
            acc * lc
        })
        .sum()
}

/// Moves the entry at `(g, u)` to the all-zero column `v`.
///
/// The clause numbers in errors follow the four conditions of a valid swap:
/// non-negative entries, change confined to `(g,u)` and `(g,v)`, a positive
/// entry moving onto a zero, and `v` being an all-zero column.
pub fn valid_swap(s: &InequalitySystem, g: usize, u: usize, v: usize) -> Result<InequalitySystem> {
    if s.coeffs.iter().flatten().any(|&c| c < 0) {
        return Err(Error::InvalidSwap {
            clause: 1,
            message: "matrix has a negative entry".into(),
        });
    }
    if g >= s.rows() || u >= s.columns() || v >= s.columns() || u == v {
        return Err(Error::InvalidSwap {
            clause: 2,
            message: format!(
                "need a row below {} and two distinct columns below {}; got g={g} u={u} v={v}",
                s.rows(),
                s.columns()
            ),
        });
    }
    let p = s.coeffs[g][u];
    if p <= 0 || s.coeffs[g][v] != 0 {
        return Err(Error::InvalidSwap {
            clause: 3,
            message: format!(
                "entry ({g},{u}) must be positive and ({g},{v}) zero; found {p} and {}",
                s.coeffs[g][v]
            ),
        });
    }
    if let Some(h) = (0..s.rows()).find(|&h| s.coeffs[h][v] != 0) {
        return Err(Error::InvalidSwap {
            clause: 4,
            message: format!(
                "column {v} is not all zeroes (row {h} holds {})",
                s.coeffs[h][v]
            ),
        });
    }
    let mut out = s.clone();
    out.coeffs[g][u] = 0;
    out.coeffs[g][v] = p;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SwapStep {
    pub row: usize,
    pub u: usize,
    pub v: usize,
    pub p: i64,
}

/// Result of padding and swapping `C` into block-diagonal form.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub r: usize,
    pub b: usize,
    pub b_prime: usize,
    pub rows: usize,
    /// Solutions of the original system, i.e. ample block selections.
    pub exact: u128,
    /// `2^(b - (r+1)/2)`.
    pub lower_bound: u128,
    pub bound_holds: bool,
    /// Solutions of the final system, counted row by row.
    pub final_count: u128,
    /// `2^(b' - rows)`.
    pub product_formula: u128,
    pub swaps: Vec<SwapStep>,
    /// Counts of the padded system and after every swap, when the padded
    /// system fits the column limit.
    pub chain_counts: Option<Vec<u128>>,
    pub infinite_quotient_bound: u128,
}

/// Applies the swap sequence (lowest over-full column, lowest row holding a
/// nonzero there, lowest zero column) until every column has at most one
/// nonzero entry.
pub fn decompose(padded: &InequalitySystem) -> Result<(InequalitySystem, Vec<SwapStep>)> {
    let mut cur = padded.clone();
    let mut steps = Vec::new();
    while let Some(u) = (0..cur.columns()).find(|&j| cur.column_support(j) >= 2) {
        let v = (0..cur.columns())
            .find(|&j| cur.column_support(j) == 0)
            .ok_or_else(|| Error::Precondition("no zero column left to swap into".into()))?;
        let g = (0..cur.rows())
            .find(|&h| cur.entry(h, u) != 0)
            .expect("column is over-full");
        let p = cur.entry(g, u);
        cur = valid_swap(&cur, g, u, v)?;
        steps.push(SwapStep { row: g, u, v, p });
    }
    Ok((cur, steps))
}

/// Count of a system whose columns each hold at most one nonzero entry: the
/// rows are independent, so the count is a product of per-row counts.
fn count_separable(s: &InequalitySystem) -> Result<u128> {
    let zero_cols = (0..s.columns())
        .filter(|&j| s.column_support(j) == 0)
        .count();
    let mut total = 1u128 << zero_cols;
    for (i, row) in s.coeffs.iter().enumerate() {
        let support: Vec<i64> = row.iter().copied().filter(|&c| c != 0).collect();
        let sub = InequalitySystem::new(vec![support], vec![s.thresholds[i]])?;
        total *= count_solutions(&sub)?;
    }
    Ok(total)
}

fn require_odd(r: usize) -> Result<()> {
    if r.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "the bound needs an odd number of units, got {r}"
        )));
    }
    Ok(())
}

pub fn decompose_and_bound(bp: &BlockPartition) -> Result<BoundReport> {
    let r = bp.group().order();
    require_odd(r)?;
    let b = bp.num_blocks();
    let c = InequalitySystem::from_coeff_matrix(&bp.coefficient_matrix(), r);
    let exact = count_solutions(&c)?;
    let b_prime: usize = c.coeffs.iter().flatten().filter(|&&x| x != 0).count();
    let padded = c.pad_zero_columns(b_prime - b);
    let (fin, swaps) = decompose(&padded)?;

    let chain_counts = if b_prime <= DEFAULT_MAX_COLUMNS {
        let mut counts = vec![count_solutions(&padded)?];
        let mut cur = padded.clone();
        for st in &swaps {
            cur = valid_swap(&cur, st.row, st.u, st.v)?;
            counts.push(count_solutions(&cur)?);
        }
        Some(counts)
    } else {
        None
    };

    let final_count = count_separable(&fin)?;
    let product_formula = 1u128 << (b_prime - c.rows());
    if final_count != product_formula {
        return Err(Error::InvariantViolation(format!(
            "final system has {final_count} solutions, product formula gives {product_formula}"
        )));
    }
    let lower_bound = 1u128 << (b - r.div_ceil(2));
    Ok(BoundReport {
        r,
        b,
        b_prime,
        rows: c.rows(),
        exact,
        lower_bound,
        bound_holds: exact >= lower_bound,
        final_count,
        product_formula,
        swaps,
        chain_counts,
        infinite_quotient_bound: infinite_quotient_upper_bound(bp)?.bound,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfiniteQuotientBound {
    /// `2^(b - r)`.
    pub bound: u128,
    /// Blocks holding a pair `(1, y)`; all must be present for `1 + 1 = H`.
    pub forced_blocks: Vec<usize>,
}

pub fn infinite_quotient_upper_bound(bp: &BlockPartition) -> Result<InfiniteQuotientBound> {
    let r = bp.group().order();
    require_odd(r)?;
    let forced_blocks = bp.identity_row_blocks();
    if forced_blocks.len() != r {
        return Err(Error::InvariantViolation(format!(
            "expected {r} blocks meeting the identity row, found {}",
            forced_blocks.len()
        )));
    }
    Ok(InfiniteQuotientBound {
        bound: 1u128 << (bp.num_blocks() - r),
        forced_blocks,
    })
}
