use std::sync::Arc;

use proptest::prelude::*;
use qtorus_core::cyclotomic::Conductor;
use qtorus_core::suites::enumerate_radical;
use qtorus_core::{CycNumber, DerElement, GElement, LatticePoint, TorusElement, TorusSpec};

fn cyc(m: u32) -> impl Strategy<Value = CycNumber> {
    proptest::collection::vec((-4i64..=4, 0i64..(m as i64)), 1..4).prop_map(move |terms| {
        let c = Conductor::new(m).unwrap();
        terms
            .into_iter()
            .map(|(a, k)| CycNumber::root_of_unity(c, k) * CycNumber::from_integer(a))
            .sum()
    })
}

fn conductor() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![1u32, 2, 3, 4, 5, 6, 8, 12])
}

fn spec() -> impl Strategy<Value = Arc<TorusSpec>> {
    (2usize..=3, 2u32..=6, proptest::collection::vec(0i64..6, 3)).prop_map(|(d, n, a)| {
        let mut entries = vec![(0, 1, a[0])];
        if d == 3 {
            entries.push((0, 2, a[1]));
            entries.push((1, 2, a[2]));
        }
        Arc::new(TorusSpec::from_upper(d, n, &entries).unwrap())
    })
}

fn point(d: usize, k: i64) -> impl Strategy<Value = LatticePoint> {
    proptest::collection::vec(-k..=k, d).prop_map(LatticePoint::new)
}

fn torus(spec: Arc<TorusSpec>) -> impl Strategy<Value = TorusElement> {
    let d = spec.rank();
    let n = spec.order().get();
    proptest::collection::vec((point(d, 3), cyc(n)), 0..4)
        .prop_map(move |terms| TorusElement::from_terms(&spec, terms))
}

fn with_triple() -> impl Strategy<Value = (TorusElement, TorusElement, TorusElement)> {
    spec().prop_flat_map(|s| (torus(s.clone()), torus(s.clone()), torus(s)))
}

fn der(spec: Arc<TorusSpec>) -> impl Strategy<Value = DerElement> {
    let d = spec.rank();
    let n = spec.order().get() as i64;
    (point(d, 3), -3i64..=3, point(d, 1), proptest::collection::vec(-3i64..=3, d)).prop_map(move |(s, c, r, u)| {
        let r = r.scale(n);
        let u: Vec<CycNumber> = u.into_iter().map(CycNumber::from_integer).collect();
        DerElement::ad_term(&spec, s, CycNumber::from_integer(c))
            .add(&DerElement::witt(&spec, u, r).unwrap())
            .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((a, b, c) in conductor().prop_flat_map(|m| (cyc(m), cyc(m), cyc(m)))) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn lift_preserves_value(a in cyc(6), b in cyc(4)) {
        let c = Conductor::new(12).unwrap();
        let la = a.lift(c).unwrap();
        prop_assert_eq!(&la, &a);
        prop_assert_eq!(la.conductor(), c);
        // mixed conductors combine in the common field
        prop_assert_eq!(&(&a * &b) - &(&la * &b.lift(c).unwrap()), CycNumber::zero());
    }

    #[test]
    fn sqrt_of_roots(m in 1u32..=24, k in 0i64..48) {
        let z = CycNumber::root_of_unity(Conductor::new(m).unwrap(), k);
        let r = z.sqrt_root().unwrap();
        prop_assert_eq!(&(&r * &r), &z);
    }

    #[test]
    fn bicharacter((s, a, b, c) in spec().prop_flat_map(|s| {
        let d = s.rank();
        (Just(s), point(d, 6), point(d, 6), point(d, 6))
    })) {
        prop_assert_eq!(s.sigma(&(&a + &b), &c), s.sigma(&a, &c) * s.sigma(&b, &c));
        prop_assert_eq!(s.sigma(&a, &(&b + &c)), s.sigma(&a, &b) * s.sigma(&a, &c));
        prop_assert!((s.f_val(&a, &a) - CycNumber::one()).is_zero());
        prop_assert_eq!(s.f_val(&a, &b) * s.sigma(&b, &a), s.sigma(&a, &b));
    }

    #[test]
    fn radical_matches_enumeration(s in spec()) {
        let e = enumerate_radical(&s);
        prop_assert_eq!(&s.radical().axis_orders, &e.axis_orders);
        prop_assert_eq!(s.radical().index, e.index);
        prop_assert_eq!(s.radical().is_diagonal(), e.diagonal);
        for m in &e.members {
            prop_assert!(s.in_radical(m));
        }
    }

    #[test]
    fn associativity((a, b, c) in with_triple()) {
        let lhs = a.tmul(&b).unwrap().tmul(&c).unwrap();
        let rhs = a.tmul(&b.tmul(&c).unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().is_zero());
    }

    #[test]
    fn commutator_jacobi((a, b, c) in with_triple()) {
        let j = a.tcomm(&b.tcomm(&c).unwrap()).unwrap()
            .add(&b.tcomm(&c.tcomm(&a).unwrap()).unwrap()).unwrap()
            .add(&c.tcomm(&a.tcomm(&b).unwrap()).unwrap()).unwrap();
        prop_assert!(j.is_zero());
    }

    #[test]
    fn leibniz((x, a, b) in spec().prop_flat_map(|s| (der(s.clone()), torus(s.clone()), torus(s)))) {
        let lhs = x.dact(&a.tmul(&b).unwrap()).unwrap();
        let rhs = x.dact(&a).unwrap().tmul(&b).unwrap().add(&a.tmul(&x.dact(&b).unwrap()).unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().is_zero());
    }

    #[test]
    fn semidirect_jacobi((x, y, z) in spec().prop_flat_map(|s| {
        let g = |s: &Arc<TorusSpec>| (der(s.clone()), torus(s.clone())).prop_map(|(der, torus)| GElement { der, torus });
        (g(&s), g(&s), g(&s))
    })) {
        let j = x.gbracket(&y.gbracket(&z).unwrap()).unwrap()
            .add(&y.gbracket(&z.gbracket(&x).unwrap()).unwrap()).unwrap()
            .add(&z.gbracket(&x.gbracket(&y).unwrap()).unwrap()).unwrap();
        prop_assert!(j.is_zero());
    }
}
