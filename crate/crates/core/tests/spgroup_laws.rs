//! Ring laws for sp-group elements and the closed-form index against truncations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;
use scoh::classify::PrimeSet;
use scoh::oracle::cross_check_truncation;
use scoh::spgroup::{stab_index_mul, SpElement, SpGroupSpec, StabCase, Valuation};

const CHECKED: usize = 6;

fn spec() -> impl Strategy<Value = SpGroupSpec> {
    prop_oneof![
        Just(SpGroupSpec::linear(PrimeSet::All)),
        Just(SpGroupSpec::constant(PrimeSet::All, 2).unwrap()),
        Just(SpGroupSpec::constant(PrimeSet::OddPositions, 1).unwrap()),
        Just(SpGroupSpec::linear(PrimeSet::EvenPositions)),
    ]
}

fn element(spec: SpGroupSpec) -> impl Strategy<Value = SpElement> {
    (
        -30i64..30,
        prop::sample::select(vec![1i64, 2, 3, 4, 5, 6, 9, 10]),
        prop::collection::btree_map(1usize..=5, 0u64..2000, 0..3),
        0u64..2000,
    )
        .prop_filter_map("invalid element", move |(a, b, corr, fill)| {
            let q = BigRational::new(a.into(), b.into());
            let mut corr: BTreeMap<usize, BigInt> = corr
                .into_iter()
                .map(|(i, r)| (i, BigInt::from(r)))
                .collect();
            for p in [2u64, 3, 5] {
                if b % p as i64 == 0 {
                    if let Some(i) = spec.index_of(p) {
                        corr.entry(i).or_insert_with(|| BigInt::from(fill));
                    }
                }
            }
            SpElement::new(q, corr, &spec).ok()
        })
}

fn spec_and(n: usize) -> impl Strategy<Value = (SpGroupSpec, Vec<SpElement>)> {
    spec().prop_flat_map(move |s| (Just(s), prop::collection::vec(element(s), n)))
}

fn components(x: &SpElement, s: &SpGroupSpec) -> Vec<BigInt> {
    (1..=CHECKED).map(|i| x.component(s, i)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn components_are_ring_homomorphisms((s, xs) in spec_and(2)) {
        let (x, y) = (&xs[0], &xs[1]);
        let sum = x.add(y, &s).unwrap();
        let prod = x.mul(y, &s).unwrap();
        for i in 1..=CHECKED {
            let m = s.modulus(i);
            prop_assert_eq!(sum.component(&s, i), (x.component(&s, i) + y.component(&s, i)).mod_floor(&m));
            prop_assert_eq!(prod.component(&s, i), (x.component(&s, i) * y.component(&s, i)).mod_floor(&m));
        }
    }

    #[test]
    fn commutative_ring_laws((s, xs) in spec_and(3)) {
        let (x, y, z) = (&xs[0], &xs[1], &xs[2]);
        prop_assert_eq!(x.add(y, &s).unwrap(), y.add(x, &s).unwrap());
        prop_assert_eq!(x.mul(y, &s).unwrap(), y.mul(x, &s).unwrap());
        prop_assert_eq!(x.add(y, &s).unwrap().add(z, &s).unwrap(), x.add(&y.add(z, &s).unwrap(), &s).unwrap());
        prop_assert_eq!(x.mul(y, &s).unwrap().mul(z, &s).unwrap(), x.mul(&y.mul(z, &s).unwrap(), &s).unwrap());
        let left = x.mul(&y.add(z, &s).unwrap(), &s).unwrap();
        let right = x.mul(y, &s).unwrap().add(&x.mul(z, &s).unwrap(), &s).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(x.mul(&SpElement::one(), &s).unwrap(), x.clone());
        prop_assert!(x.add(&x.neg(&s), &s).unwrap().is_zero());
        prop_assert_eq!(x.add(&SpElement::zero(), &s).unwrap(), x.clone());
    }

    #[test]
    fn equal_components_mean_equal_elements((s, xs) in spec_and(2)) {
        let (x, y) = (&xs[0], &xs[1]);
        if x.q() == y.q() && components(x, &s) == components(y, &s) {
            // beyond the explicit indices both follow the same rational part
            prop_assert_eq!(x, y);
        }
    }

    #[test]
    fn closed_form_matches_truncation((s, xs) in spec_and(1)) {
        prop_assert!(cross_check_truncation(&s, &xs[0], CHECKED).unwrap(), "{}", xs[0]);
    }

    #[test]
    fn case_split((s, xs) in spec_and(1)) {
        let x = &xs[0];
        let r = stab_index_mul(x, &s);
        prop_assert_eq!(r.case == StabCase::TorsionImage, x.is_torsion());
        // the index is the largest per-component step
        let steps = r.per_prime.values().map(|&(_, st)| st).max().unwrap_or(0);
        prop_assert_eq!(r.index, steps.max(r.step_at(usize::MAX)));
        for (&i, &(v, _)) in &r.per_prime {
            prop_assert_eq!(v, x.valuation(&s, i));
            prop_assert_eq!(v == Valuation::Infinite, x.component(&s, i) == BigInt::from(0));
        }
    }
}
