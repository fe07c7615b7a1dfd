//! Homogeneous linear systems over a hyperfield.
//!
//! Elements are handled by index: units `0..r` in group order, zero is `r`.
//! An equation `Σ a_j x_j ∋ 0` is true when the set-extended sum of its
//! terms contains zero.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::Elem;
use crate::hyperfield::{AdditionTable, ElementSet, HyperfieldCandidate};

/// Default limit on `|H|^n` for [`brute_force_solve`].
pub const DEFAULT_SOLVE_BUDGET: u128 = 10_000_000;

/// Default limit on `systems × |H|^n` for [`check_fetvins`].
pub const DEFAULT_CHECK_BUDGET: u128 = 1_000_000_000;

/// A hyperfield that has been verified or certified, with its addition and
/// multiplication tables.
#[derive(Clone, Debug)]
pub struct Hyperfield {
    candidate: HyperfieldCandidate,
    table: AdditionTable,
    mul: Vec<usize>,
    ample: bool,
}

impl Hyperfield {
    pub fn new(candidate: HyperfieldCandidate) -> Result<Self> {
        if !candidate.status().is_hyperfield() {
            return Err(Error::Precondition(format!(
                "candidate must be verified or certified, status is {}",
                candidate.status()
            )));
        }
        let r = candidate.order();
        let g = candidate.group();
        let mut mul = vec![r; (r + 1) * (r + 1)];
        for x in 0..r {
            for y in 0..r {
                mul[x * (r + 1) + y] = g.mul(Elem(x), Elem(y)).0;
            }
        }
        Ok(Hyperfield {
            table: candidate.addition_table(),
            ample: candidate.is_ample(),
            candidate,
            mul,
        })
    }

    /// Verifies the candidate first.
    pub fn verified(mut candidate: HyperfieldCandidate) -> Result<Self> {
        let report = candidate.verify_axioms();
        if let Some(v) = report.first_violation() {
            return Err(Error::Precondition(format!("not a hyperfield: {v}")));
        }
        Self::new(candidate)
    }

    pub fn candidate(&self) -> &HyperfieldCandidate {
        &self.candidate
    }

    pub fn table(&self) -> &AdditionTable {
        &self.table
    }

    /// Number of units.
    pub fn order(&self) -> usize {
        self.candidate.order()
    }

    pub fn zero(&self) -> usize {
        self.order()
    }

    pub fn one(&self) -> usize {
        0
    }

    pub fn is_ample(&self) -> bool {
        self.ample
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * (self.order() + 1) + y]
    }

    pub fn neg(&self, x: usize) -> usize {
        if x == self.zero() {
            x
        } else {
            self.mul(self.candidate.minus_one().0, x)
        }
    }

    pub fn inv(&self, x: usize) -> Option<usize> {
        (x != self.zero()).then(|| self.candidate.group().inv(Elem(x)).0)
    }

    pub fn name(&self, x: usize) -> String {
        self.candidate
            .element_name(crate::hyperfield::Element::from_index(x, self.order()))
    }
}

/// Left fold of set-extended addition; the empty sum is `{0}`.
pub fn set_sum(h: &Hyperfield, terms: &[ElementSet]) -> ElementSet {
    terms
        .iter()
        .fold(ElementSet::singleton(h.zero()), |acc, &t| {
            h.table.set_plus_set(acc, t)
        })
}

/// `k` equations in `n` variables; `rows[i][j]` is the index of `a_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearSystem {
    r: usize,
    n: usize,
    rows: Vec<Vec<usize>>,
}

impl LinearSystem {
    pub fn new(h: &Hyperfield, rows: Vec<Vec<usize>>) -> Result<Self> {
        let r = h.order();
        let n = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || n == 0 {
            return Err(Error::InvalidSpec(
                "a system needs at least one equation and one variable".into(),
            ));
        }
        for row in &rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            if let Some(&bad) = row.iter().find(|&&a| a > r) {
                return Err(Error::InvalidSpec(format!(
                    "coefficient index {bad} out of range"
                )));
            }
        }
        Ok(LinearSystem { r, n, rows })
    }

    /// Matrix of element indices where `-1` stands for zero.
    pub fn from_matrix(h: &Hyperfield, m: &[Vec<i64>]) -> Result<Self> {
        let r = h.order();
        let rows = m
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&a| match a {
                        -1 => Ok(r),
                        a if a >= 0 && (a as usize) < r => Ok(a as usize),
                        a => Err(Error::InvalidSpec(format!("coefficient {a} out of range"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(h, rows)
    }

    pub fn to_matrix(&self) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&a| if a == self.r { -1 } else { a as i64 })
                    .collect()
            })
            .collect()
    }

    pub fn equations(&self) -> usize {
        self.rows.len()
    }

    pub fn variables(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    fn check_field(&self, h: &Hyperfield) -> Result<()> {
        if h.order() != self.r {
            return Err(Error::DimensionMismatch {
                expected: h.order(),
                found: self.r,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment(pub Vec<usize>);

impl Assignment {
    pub fn is_nontrivial(&self, h: &Hyperfield) -> bool {
        self.0.iter().any(|&x| x != h.zero())
    }

    /// Indices with `-1` for zero.
    pub fn to_indices(&self, h: &Hyperfield) -> Vec<i64> {
        self.0
            .iter()
            .map(|&x| if x == h.zero() { -1 } else { x as i64 })
            .collect()
    }

    pub fn display(&self, h: &Hyperfield) -> String {
        let names: Vec<String> = self.0.iter().map(|&x| h.name(x)).collect();
        format!("({})", names.join(", "))
    }
}

fn row_holds(h: &Hyperfield, row: &[usize], x: &[usize]) -> bool {
    let zero = h.zero();
    let mut acc = ElementSet::singleton(zero);
    for (&a, &v) in row.iter().zip(x) {
        if a == zero {
            continue;
        }
        acc = h.table.set_plus(acc, h.mul(a, v));
        if acc.is_empty() {
            return false;
        }
    }
    acc.contains(zero)
}

/// Whether `asg` satisfies every equation.
pub fn check(h: &Hyperfield, sys: &LinearSystem, asg: &Assignment) -> Result<bool> {
    sys.check_field(h)?;
    if asg.0.len() != sys.n {
        return Err(Error::DimensionMismatch {
            expected: sys.n,
            found: asg.0.len(),
        });
    }
    if let Some(&bad) = asg.0.iter().find(|&&v| v > h.zero()) {
        return Err(Error::InvalidSpec(format!(
            "value index {bad} out of range"
        )));
    }
    Ok(sys.rows.iter().all(|row| row_holds(h, row, &asg.0)))
}

fn budget_error(requested: u128, limit: u128) -> Error {
    Error::Capacity {
        what: "enumeration size",
        requested,
        limit,
        hint: "; raise --budget or shrink the system",
    }
}

/// First nontrivial solution in lexicographic order, with zero ordered
/// before the units.
pub fn brute_force_solve(h: &Hyperfield, sys: &LinearSystem) -> Result<Option<Assignment>> {
    brute_force_solve_bounded(h, sys, DEFAULT_SOLVE_BUDGET)
}

pub fn brute_force_solve_bounded(
    h: &Hyperfield,
    sys: &LinearSystem,
    budget: u128,
) -> Result<Option<Assignment>> {
    sys.check_field(h)?;
    let base = h.order() as u128 + 1;
    let size = base.checked_pow(sys.n as u32).unwrap_or(u128::MAX);
    if size > budget {
        return Err(budget_error(size, budget));
    }
    Ok(first_solution(h, sys))
}

/// Digit `d` of the odometer maps to zero for `d = 0` and unit `d - 1`.
fn first_solution(h: &Hyperfield, sys: &LinearSystem) -> Option<Assignment> {
    let zero = h.zero();
    let to_elem = |d: usize| if d == 0 { zero } else { d - 1 };
    let mut digits = vec![0usize; sys.n];
    let mut x = vec![zero; sys.n];
    loop {
        // Advance the odometer, last variable fastest.
        let mut i = sys.n;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] <= h.order() {
                x[i] = to_elem(digits[i]);
                break;
            }
            digits[i] = 0;
            x[i] = zero;
        }
        if sys.rows.iter().all(|row| row_holds(h, row, &x)) {
            return Some(Assignment(x));
        }
    }
}

/// Least unit `e` (by index) with `0 ∈ a + b + e` and `0 ∈ c + d + e`.
pub fn solve_two_at_once(h: &Hyperfield, a: usize, b: usize, c: usize, d: usize) -> Option<usize> {
    let ab = h.table.sum(a, b);
    let cd = h.table.sum(c, d);
    (0..h.order()).find(|&e| {
        h.table.set_plus(ab, e).contains(h.zero()) && h.table.set_plus(cd, e).contains(h.zero())
    })
}

type Equation = BTreeMap<usize, usize>;

enum Step {
    Zero(usize),
    /// `x_var = factor · x_by`.
    Substitute {
        var: usize,
        factor: usize,
        by: usize,
    },
}

/// Kuhn's augmenting path search from left node `u`.
fn augment(
    u: usize,
    adj: &[Vec<usize>],
    seen: &mut BTreeSet<usize>,
    owner: &mut BTreeMap<usize, usize>,
) -> bool {
    for &v in &adj[u] {
        if seen.insert(v) {
            let free = match owner.get(&v) {
                None => true,
                Some(&w) => augment(w, adj, seen, owner),
            };
            if free {
                owner.insert(v, u);
                return true;
            }
        }
    }
    false
}

/// Finds a set of equations using no more variables than its size.
///
/// No pile exists iff every nonempty set `S` of equations has more than `|S|`
/// variables, iff for each equation a matching saturates the equations with
/// that one equation taken twice. A failed matching yields a pile from the
/// alternating-path closure of an unmatched node.
fn find_pile(eqs: &[Equation]) -> Option<(Vec<usize>, Vec<usize>)> {
    for dup in 0..eqs.len() {
        // Left node `eqs.len()` is the second copy of `dup`.
        let orig = |u: usize| if u == eqs.len() { dup } else { u };
        let adj: Vec<Vec<usize>> = (0..=eqs.len())
            .map(|u| eqs[orig(u)].keys().copied().collect())
            .collect();
        let mut owner = BTreeMap::new();
        let unmatched =
            (0..adj.len()).find(|&u| !augment(u, &adj, &mut BTreeSet::new(), &mut owner));
        let Some(start) = unmatched else { continue };
        let mut left = BTreeSet::from([start]);
        let mut right = BTreeSet::new();
        let mut queue = vec![start];
        while let Some(u) = queue.pop() {
            for &v in &adj[u] {
                if right.insert(v) {
                    if let Some(&w) = owner.get(&v) {
                        if left.insert(w) {
                            queue.push(w);
                        }
                    }
                }
            }
        }
        let eq_set: BTreeSet<usize> = left.into_iter().map(orig).collect();
        return Some((eq_set.into_iter().collect(), right.into_iter().collect()));
    }
    None
}

/// The constructive solver for ample hyperfields.
///
/// Piles are zeroed out, two-term equations are eliminated by substitution,
/// equations with four or more terms are dropped since any four nonzero
/// terms sum to all of `H`, and the remaining three-term equations are peeled
/// one variable at a time and solved backwards two equations at a time.
pub fn ample_solve(h: &Hyperfield, sys: &LinearSystem) -> Result<Assignment> {
    sys.check_field(h)?;
    if !h.is_ample() {
        return Err(Error::Precondition("hyperfield is not ample".into()));
    }
    if sys.equations() >= sys.variables() {
        return Err(Error::Precondition(format!(
            "need fewer equations than variables, got {} and {}",
            sys.equations(),
            sys.variables()
        )));
    }
    let zero = h.zero();
    let mut eqs: Vec<Equation> = sys
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, &a)| a != zero)
                .map(|(j, &a)| (j, a))
                .collect()
        })
        .collect();
    let mut active: BTreeSet<usize> = (0..sys.n).collect();
    let mut steps = Vec::new();

    loop {
        eqs.retain(|e| !e.is_empty());
        if let Some((pile, vars)) = find_pile(&eqs) {
            for &v in &vars {
                active.remove(&v);
                steps.push(Step::Zero(v));
                for e in eqs.iter_mut() {
                    e.remove(&v);
                }
            }
            for &i in pile.iter().rev() {
                eqs.remove(i);
            }
            continue;
        }
        if let Some(i) = eqs.iter().position(|e| e.len() == 2) {
            let eq = eqs.remove(i);
            let mut it = eq.into_iter();
            let ((j, a), (k, b)) = (it.next().unwrap(), it.next().unwrap());
            let factor = h.neg(h.mul(h.inv(a).unwrap(), b));
            for e in eqs.iter_mut() {
                let Some(c) = e.remove(&j) else { continue };
                let moved = h.mul(c, factor);
                match e.get(&k).copied() {
                    None => {
                        e.insert(k, moved);
                    }
                    Some(d) => {
                        // Any nonzero member of `c·f + d` works; if the sum
                        // is `{0}` the term vanishes.
                        match h.table.sum(moved, d).iter().find(|&s| s != zero) {
                            Some(s) => {
                                e.insert(k, s);
                            }
                            None => {
                                e.remove(&k);
                            }
                        }
                    }
                }
            }
            active.remove(&j);
            steps.push(Step::Substitute {
                var: j,
                factor,
                by: k,
            });
            continue;
        }
        break;
    }

    if active.len() <= eqs.len() {
        return Err(Error::InvariantViolation(format!(
            "reduced system has {} equations and {} variables",
            eqs.len(),
            active.len()
        )));
    }
    eqs.retain(|e| e.len() <= 3);
    if let Some(e) = eqs.iter().find(|e| e.len() != 3) {
        return Err(Error::InvariantViolation(format!(
            "reduced equation has {} terms",
            e.len()
        )));
    }

    // Peel: each variable takes the (at most two) remaining equations it
    // occurs in.
    let mut peeled: Vec<(usize, Vec<Equation>)> = Vec::new();
    let mut rest: BTreeSet<usize> = active.clone();
    while !eqs.is_empty() {
        let count = |v: usize| eqs.iter().filter(|e| e.contains_key(&v)).count();
        let v = rest
            .iter()
            .copied()
            .find(|&v| (1..=2).contains(&count(v)))
            .ok_or_else(|| {
                Error::InvariantViolation("peeling stalled: the reduced system has a pile".into())
            })?;
        let (mine, others): (Vec<Equation>, Vec<Equation>) =
            eqs.drain(..).partition(|e| e.contains_key(&v));
        eqs = others;
        rest.remove(&v);
        peeled.push((v, mine));
    }

    let mut x = vec![zero; sys.n];
    for &v in &rest {
        x[v] = h.one();
    }
    for (v, mine) in peeled.iter().rev() {
        // Each equation is `a·x_v + (known terms)`.
        let known: Vec<(usize, ElementSet)> = mine
            .iter()
            .map(|e| {
                let others = e
                    .iter()
                    .filter(|(&j, _)| j != *v)
                    .map(|(&j, &a)| ElementSet::singleton(h.mul(a, x[j])))
                    .collect::<Vec<_>>();
                (e[v], set_sum(h, &others))
            })
            .collect();
        let value = (0..h.order())
            .find(|&t| {
                known
                    .iter()
                    .all(|&(a, s)| h.table.set_plus(s, h.mul(a, t)).contains(zero))
            })
            .ok_or_else(|| {
                Error::InvariantViolation(format!("no nonzero value solves the equations of x{v}"))
            })?;
        x[*v] = value;
    }
    for step in steps.iter().rev() {
        match *step {
            Step::Zero(v) => x[v] = zero,
            Step::Substitute { var, factor, by } => x[var] = h.mul(factor, x[by]),
        }
    }

    let asg = Assignment(x);
    if !asg.is_nontrivial(h) || !check(h, sys, &asg)? {
        return Err(Error::InvariantViolation(format!(
            "constructed assignment {} does not solve the system",
            asg.display(h)
        )));
    }
    Ok(asg)
}

/// Coefficient rows of length `n` whose first nonzero entry is `1`.
pub fn normalized_rows(r: usize, n: usize) -> Vec<Vec<usize>> {
    let zero = r;
    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        let total = (r + 1).pow(free as u32);
        for code in 0..total {
            let mut row = vec![zero; n];
            row[lead] = 0;
            let mut c = code;
            for slot in row.iter_mut().skip(lead + 1).rev() {
                let d = c % (r + 1);
                c /= r + 1;
                *slot = if d == 0 { zero } else { d - 1 };
            }
            out.push(row);
        }
    }
    out
}

/// Multisets of `k` normalized rows, as index tuples `i_1 <= ... <= i_k`.
fn multisets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in from..m {
            cur.push(i);
            rec(m, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, k, 0, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of systems [`normalized_systems`] yields.
pub fn count_normalized_systems(r: usize, n_max: usize) -> u128 {
    let mut total = 0u128;
    for n in 2..=n_max {
        let m = normalized_rows(r, n).len() as u128;
        for k in 1..n as u128 {
            total += binomial(m + k - 1, k);
        }
    }
    total
}

/// Every system with `1 <= k < n <= n_max`, up to reordering equations and
/// scaling each by a unit.
pub fn normalized_systems(h: &Hyperfield, n_max: usize) -> Vec<LinearSystem> {
    let r = h.order();
    let mut out = Vec::new();
    for n in 2..=n_max {
        let rows = normalized_rows(r, n);
        for k in 1..n {
            for pick in multisets(rows.len(), k) {
                out.push(LinearSystem {
                    r,
                    n,
                    rows: pick.iter().map(|&i| rows[i].clone()).collect(),
                });
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct FetvinsReport {
    pub n_max: usize,
    pub systems_checked: u64,
    /// A system without nontrivial solutions, if one was found.
    pub counterexample: Option<LinearSystem>,
}

impl FetvinsReport {
    pub fn confirmed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for FetvinsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(
                f,
                "confirmed up to n={} ({} systems)",
                self.n_max, self.systems_checked
            ),
            Some(s) => write!(f, "counterexample {:?}", s.to_matrix()),
        }
    }
}

/// Exhaustively checks every normalized system with at most `n_max`
/// variables for a nontrivial solution.
pub fn check_fetvins(h: &Hyperfield, n_max: usize) -> Result<FetvinsReport> {
    check_fetvins_bounded(h, n_max, DEFAULT_CHECK_BUDGET)
}

pub fn check_fetvins_bounded(h: &Hyperfield, n_max: usize, budget: u128) -> Result<FetvinsReport> {
    let r = h.order();
    let work = count_normalized_systems(r, n_max)
        .saturating_mul((r as u128 + 1).saturating_pow(n_max as u32));
    if work > budget {
        return Err(budget_error(work, budget));
    }
    let systems = normalized_systems(h, n_max);
    let counterexample = systems
        .par_iter()
        .find_first(|s| first_solution(h, s).is_none())
        .cloned();
    Ok(FetvinsReport {
        n_max,
        systems_checked: systems.len() as u64,
        counterexample,
    })
}
