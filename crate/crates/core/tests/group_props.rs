use std::collections::HashSet;

use hyperblocks::{AbelianGroup, Elem};
use proptest::prelude::*;

fn small_factors() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=6, 1..=3)
        .prop_filter("order at most 24", |v| v.iter().product::<usize>() <= 24)
}

fn euler_phi(n: usize) -> usize {
    (1..=n).filter(|k| gcd(*k, n) == 1).count()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #[test]
    fn automorphisms_are_homomorphisms(factors in small_factors()) {
        let g = AbelianGroup::new(&factors).unwrap();
        for s in g.automorphisms().unwrap() {
            prop_assert_eq!(s.apply(g.identity()), g.identity());
            for a in g.elements() {
                for b in g.elements() {
                    prop_assert_eq!(s.apply(g.mul(a, b)), g.mul(s.apply(a), s.apply(b)));
                }
            }
            let image: HashSet<Elem> = g.elements().map(|a| s.apply(a)).collect();
            prop_assert_eq!(image.len(), g.order());
        }
    }

    #[test]
    fn automorphisms_form_a_group(factors in small_factors()) {
        let g = AbelianGroup::new(&factors).unwrap();
        let autos = g.automorphisms().unwrap();
        let set: HashSet<Vec<Elem>> = autos.iter().map(|a| a.images().to_vec()).collect();
        prop_assert_eq!(set.len(), autos.len());
        prop_assert!(autos.iter().any(|a| a.is_identity()));
        for a in &autos {
            prop_assert!(set.contains(a.inverse().images()));
            prop_assert!(a.compose(&a.inverse()).is_identity());
            for b in &autos {
                prop_assert!(set.contains(a.compose(b).images()));
            }
        }
    }

    #[test]
    fn element_orders_divide_group_order(factors in small_factors()) {
        let g = AbelianGroup::new(&factors).unwrap();
        for a in g.elements() {
            let n = g.elem_order(a);
            prop_assert_eq!(g.pow(a, n), g.identity());
            prop_assert_eq!(g.order() % n, 0);
            for k in 1..n {
                prop_assert_ne!(g.pow(a, k), g.identity());
            }
        }
    }

    #[test]
    fn normalization_is_isomorphism_invariant(mut factors in small_factors()) {
        let a = AbelianGroup::new(&factors).unwrap();
        factors.reverse();
        let b = AbelianGroup::new(&factors).unwrap();
        prop_assert_eq!(a.factors(), b.factors());
        prop_assert_eq!(a.order(), factors.iter().product::<usize>());
    }
}

#[test]
fn cyclic_automorphism_count_is_phi() {
    for n in 1..=30 {
        let g = AbelianGroup::cyclic(n).unwrap();
        assert_eq!(g.automorphisms().unwrap().len(), euler_phi(n), "Z{n}");
    }
}

#[test]
fn automorphisms_match_all_bijections_on_small_groups() {
    for factors in [vec![2, 2], vec![2, 4], vec![3, 3], vec![6], vec![2, 2, 2]] {
        let g = AbelianGroup::new(&factors).unwrap();
        let r = g.order();
        let mut count = 0usize;
        let mut perm: Vec<usize> = (0..r).collect();
        permutations(&mut perm, 0, &mut |p| {
            let ok = g.elements().all(|a| {
                g.elements()
                    .all(|b| p[g.mul(a, b).0] == g.mul(Elem(p[a.0]), Elem(p[b.0])).0)
            });
            if ok {
                count += 1;
            }
        });
        assert_eq!(g.automorphisms().unwrap().len(), count, "{factors:?}");
    }
}

fn permutations(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

#[test]
fn involution_candidates() {
    let z3 = AbelianGroup::cyclic(3).unwrap();
    assert_eq!(z3.involution_candidates(), vec![Elem(0)]);
    let z2 = AbelianGroup::cyclic(2).unwrap();
    assert_eq!(z2.involution_candidates().len(), 2);
    let v4 = AbelianGroup::new(&[2, 2]).unwrap();
    assert_eq!(v4.involution_candidates().len(), 4);
    let z10 = AbelianGroup::cyclic(10).unwrap();
    assert_eq!(z10.involution_candidates().len(), 2);
}

#[test]
fn all_of_order_counts() {
    // number of abelian groups: product of partition numbers of the exponents
    let expected = [
        (1, 1),
        (4, 2),
        (8, 3),
        (12, 2),
        (16, 5),
        (24, 3),
        (32, 7),
        (36, 4),
    ];
    for (n, k) in expected {
        assert_eq!(AbelianGroup::all_of_order(n).unwrap().len(), k, "order {n}");
    }
}
