use std::sync::Arc;

use hyperblocks::census::{enumerate, Mode};
use hyperblocks::fetvins::{
    ample_solve, brute_force_solve, check, normalized_systems, set_sum, solve_two_at_once,
    Hyperfield,
};
use hyperblocks::{AbelianGroup, BlockPartition, ElementSet, HyperfieldCandidate};

/// Every ample hyperfield with at most `max_units` units, all `-1` choices,
/// one per block selection.
fn ample_hyperfields(max_units: usize) -> Vec<Hyperfield> {
    let mut out = Vec::new();
    for r in 1..=max_units {
        for g in AbelianGroup::all_of_order(r).unwrap() {
            let g = Arc::new(g);
            for m1 in g.involution_candidates() {
                let bp = BlockPartition::compute(g.clone(), m1).unwrap();
                for mask in 0u64..(1 << bp.num_blocks()) {
                    let chosen: Vec<bool> =
                        (0..bp.num_blocks()).map(|i| mask >> i & 1 == 1).collect();
                    let mut h = HyperfieldCandidate::build(&bp, &chosen).unwrap();
                    if h.certify_ample(&bp).unwrap() {
                        out.push(Hyperfield::new(h).unwrap());
                    }
                }
            }
        }
    }
    out
}

/// One ample hyperfield per isomorphism class.
fn ample_representatives(max_units: usize) -> Vec<Hyperfield> {
    let mut out = Vec::new();
    for r in 1..=max_units {
        for g in AbelianGroup::all_of_order(r).unwrap() {
            let g = Arc::new(g);
            for m1 in g.involution_candidates() {
                let bp = BlockPartition::compute(g.clone(), m1).unwrap();
                for class in enumerate(&bp, Mode::AmpleOnly).unwrap().classes {
                    out.push(Hyperfield::new(class.representative).unwrap());
                }
            }
        }
    }
    out
}

#[test]
fn sums_of_four_units_are_everything() {
    let hs = ample_hyperfields(4);
    assert!(!hs.is_empty());
    for h in &hs {
        let r = h.order();
        let full = ElementSet::full(r);
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    for d in 0..r {
                        let terms = [a, b, c, d].map(ElementSet::singleton);
                        assert_eq!(set_sum(h, &terms), full, "{}", h.candidate().describe());
                    }
                }
            }
        }
    }
}

#[test]
fn two_equations_share_a_solution() {
    for h in ample_hyperfields(4) {
        let r = h.order();
        let t = h.table();
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    for d in 0..r {
                        let e = solve_two_at_once(&h, a, b, c, d).expect("lemma");
                        assert!(e < r);
                        assert!(t.set_plus(t.sum(a, b), e).contains(r));
                        assert!(t.set_plus(t.sum(c, d), e).contains(r));
                    }
                }
            }
        }
    }
}

/// Left-to-right sum of `c_i x_i` for each row, through the addition table.
fn independent_check(h: &Hyperfield, rows: &[Vec<usize>], x: &[usize]) -> bool {
    let t = h.table();
    let zero = h.zero();
    rows.iter().all(|row| {
        let mut acc = ElementSet::singleton(zero);
        for (&c, &v) in row.iter().zip(x) {
            acc = t.set_plus(acc, h.mul(c, v));
        }
        acc.contains(zero)
    })
}

fn solve_everything(h: &Hyperfield, n_max: usize, cross_check: bool) -> usize {
    let systems = normalized_systems(h, n_max);
    for sys in &systems {
        let asg = ample_solve(h, sys)
            .unwrap_or_else(|e| panic!("{}: {:?}: {e}", h.candidate().describe(), sys.to_matrix()));
        assert!(asg.is_nontrivial(h));
        assert!(check(h, sys, &asg).unwrap());
        if cross_check {
            assert!(independent_check(h, sys.rows(), &asg.0));
            assert!(brute_force_solve(h, sys).unwrap().is_some());
        }
    }
    systems.len()
}

#[test]
fn ample_solver_up_to_three_variables() {
    let mut total = 0;
    for h in ample_hyperfields(4) {
        total += solve_everything(&h, 3, true);
    }
    assert!(total > 0);
}

#[test]
fn ample_solver_with_four_variables() {
    let mut total = 0;
    for h in ample_representatives(4) {
        total += solve_everything(&h, 4, false);
    }
    assert!(total > 0);
}

#[test]
fn brute_force_agrees_with_check() {
    for h in ample_representatives(3) {
        for sys in normalized_systems(&h, 3) {
            let asg = brute_force_solve(&h, &sys).unwrap().unwrap();
            assert!(asg.is_nontrivial(&h));
            assert!(check(&h, &sys, &asg).unwrap());
        }
    }
}
