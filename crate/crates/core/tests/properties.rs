use std::cmp::Ordering;

use proptest::prelude::*;

use cantor_retract::cantor::{BasicSet, CantorPoint, Digit, Tail};
use cantor_retract::group::{classify, in_subgroup, Cover, GroupElement, Parity};
use cantor_retract::retraction::{brute_force_retract, maximal_even_prefixes, retract};
use cantor_retract::verifier::gen::real_order;
use cantor_retract::witness::{build_witness, verify_witness};

fn digit() -> impl Strategy<Value = Digit> {
    prop_oneof![Just(Digit::Zero), Just(Digit::Two)]
}

fn word(max_len: usize) -> impl Strategy<Value = Vec<Digit>> {
    prop::collection::vec(digit(), 0..=max_len)
}

fn point(max_len: usize) -> impl Strategy<Value = CantorPoint> {
    (word(max_len), prop_oneof![Just(Tail::Zeros), Just(Tail::Twos)])
        .prop_map(|(w, t)| CantorPoint::new(w, t))
}

fn grid_point(max_len: usize) -> impl Strategy<Value = CantorPoint> {
    word(max_len).prop_map(|w| CantorPoint::new(w, Tail::Zeros))
}

fn element(max_size: usize, max_len: usize) -> impl Strategy<Value = GroupElement> {
    prop::collection::vec(point(max_len), 0..=max_size).prop_map(GroupElement::from_points)
}

fn odd_element(max_size: usize, max_len: usize) -> impl Strategy<Value = GroupElement> {
    element(max_size, max_len).prop_filter("odd cardinality", |f| f.is_odd())
}

fn basic_set(max_len: usize) -> impl Strategy<Value = BasicSet> {
    word(max_len).prop_map(BasicSet::new)
}

/// Covers built by repeatedly splitting a random part.
fn cover(max_splits: usize, max_len: usize) -> impl Strategy<Value = Cover> {
    prop::collection::vec(any::<prop::sample::Index>(), 0..=max_splits).prop_map(move |picks| {
        let mut parts = vec![BasicSet::whole()];
        for pick in picks {
            let splittable: Vec<usize> =
                (0..parts.len()).filter(|&i| parts[i].len() < max_len).collect();
            if splittable.is_empty() {
                break;
            }
            let i = splittable[pick.index(splittable.len())];
            let p = parts.swap_remove(i);
            parts.push(p.child(Digit::Zero));
            parts.push(p.child(Digit::Two));
        }
        Cover::new(parts).expect("splitting keeps a complete antichain")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn canonicalization_is_idempotent(p in point(8)) {
        let again = CantorPoint::new(p.word().to_vec(), p.tail());
        prop_assert_eq!(&again, &p);
        prop_assert_eq!(p.to_string().parse::<CantorPoint>().unwrap(), p);
    }

    #[test]
    fn order_matches_real_values(a in point(6), b in point(6)) {
        prop_assert_eq!(a.cmp(&b), real_order(&a, &b));
        prop_assert_eq!(a.cmp(&b) == Ordering::Equal, a == b);
    }

    #[test]
    fn prefixes_form_a_tree(a in basic_set(6), b in basic_set(6), p in point(8)) {
        if a.includes(&b) && b.includes(&a) {
            prop_assert_eq!(&a, &b);
        }
        prop_assert!(a.includes(&b) || b.includes(&a) || a.is_disjoint(&b));
        if a.contains(&p) && b.contains(&p) {
            prop_assert!(a.includes(&b) || b.includes(&a));
        }
    }

    #[test]
    fn group_laws(a in element(6, 4), b in element(6, 4), c in element(6, 4)) {
        let e = GroupElement::empty();
        prop_assert_eq!(a.symmetric_difference(&e), a.clone());
        prop_assert_eq!(a.symmetric_difference(&a), e);
        prop_assert_eq!(a.symmetric_difference(&b), b.symmetric_difference(&a));
        prop_assert_eq!(
            a.symmetric_difference(&b).symmetric_difference(&c),
            a.symmetric_difference(&b.symmetric_difference(&c))
        );
    }

    #[test]
    fn element_round_trips(f in element(8, 6)) {
        prop_assert_eq!(f.to_string().parse::<GroupElement>().unwrap(), f);
    }

    #[test]
    fn cover_round_trips(gamma in cover(6, 4)) {
        prop_assert_eq!(gamma.to_string().parse::<Cover>().unwrap(), gamma);
    }

    #[test]
    fn retraction_fixes_singletons(x in point(10)) {
        prop_assert_eq!(retract(&GroupElement::singleton(x.clone())).unwrap(), x);
    }

    #[test]
    fn retraction_lands_in_odd_residue(f in odd_element(9, 6)) {
        let x = retract(&f).unwrap();
        prop_assert!(f.contains(&x));
        let d = maximal_even_prefixes(&f).unwrap();
        prop_assert!(d.residue.is_odd());
        prop_assert!(d.residue.contains(&x));
        for m in &d.maximal_even {
            prop_assert_eq!(classify(m, &f), Parity::Even);
            prop_assert!(!m.contains(&x));
        }
    }

    #[test]
    fn retraction_matches_brute_force(f in odd_element(7, 5)) {
        prop_assert_eq!(retract(&f).unwrap(), brute_force_retract(&f, 8).unwrap());
    }

    #[test]
    fn subgroup_preserves_part_parities(
        gamma in cover(5, 3),
        f in element(6, 5),
        pairs in prop::collection::vec((grid_point(5), grid_point(5)), 0..4),
    ) {
        let mut h = GroupElement::empty();
        for (a, b) in pairs {
            if a != b && gamma.part_containing(&a) == gamma.part_containing(&b) {
                h = h.symmetric_difference(&GroupElement::from_points(vec![a, b]));
            }
        }
        prop_assert!(in_subgroup(&gamma, &h));
        let g = f.symmetric_difference(&h);
        for v in gamma.parts() {
            prop_assert_eq!(classify(v, &f) == Parity::Odd, classify(v, &g) == Parity::Odd);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn witness_holds_on_small_cases(
        pts in prop::collection::btree_set(grid_point(3), 1..=5),
        len in 0usize..=3,
    ) {
        let f = GroupElement::from_points(pts);
        prop_assume!(f.is_odd());
        let u = retract(&f).unwrap().prefix(len);
        let w = build_witness(&f, &u).unwrap();
        prop_assert!(u.includes(&w.v_x));
        let v = verify_witness(&w, &f, w.gamma.max_prefix_len().max(4), 20_000).unwrap();
        prop_assert!(v.passed(), "{}", v);
    }
}
