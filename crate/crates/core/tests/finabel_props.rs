//! Finite-group invariants against an element-level oracle.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use scoh::finabel::{
    image, image_chain, kernel, stab_index, stab_index_by_table, sum_decomposition_check,
    FinAbGroup, Homomorphism, MAX_TABLE_CARD,
};

type Coords = Vec<BigInt>;

/// Groups with at most 72 elements over the primes 2, 3 and 5.
fn small_group() -> impl Strategy<Value = FinAbGroup> {
    let factor = prop_oneof![
        (Just(2u64), 1u32..=3),
        (Just(3u64), 1u32..=2),
        (Just(5u64), Just(1u32)),
    ];
    prop::collection::vec(factor, 1..=4).prop_filter_map("too large", |f| {
        let g = FinAbGroup::new(&f).ok()?;
        (g.small_cardinality()? <= 72).then_some(g)
    })
}

/// Valid endomorphism: entry `(i, j)` is a multiple of `order_i / gcd(order_i, order_j)`.
fn group_and_endo() -> impl Strategy<Value = (FinAbGroup, Homomorphism)> {
    small_group().prop_flat_map(|g| {
        let k = g.len();
        prop::collection::vec(0u64..1000, k * k).prop_map(move |raw| {
            let m: Vec<Vec<BigInt>> = (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| {
                            let oi = g.order(i);
                            let step = oi / oi.gcd(g.order(j));
                            BigInt::from(raw[i * k + j]) * step
                        })
                        .collect()
                })
                .collect();
            let f = Homomorphism::from_big(m, &g, &g).expect("congruence holds by construction");
            (g.clone(), f)
        })
    })
}

fn all_coords(g: &FinAbGroup) -> Vec<Coords> {
    g.elements().map(|x| x.coords().to_vec()).collect()
}

fn apply(f: &Homomorphism, x: &Coords) -> Coords {
    let g = f.source();
    f.apply(&g.element(x).unwrap()).unwrap().coords().to_vec()
}

fn add(g: &FinAbGroup, x: &Coords, y: &Coords) -> Coords {
    (0..g.len())
        .map(|i| (&x[i] + &y[i]).mod_floor(g.order(i)))
        .collect()
}

/// Stabilization index by iterating image sets of elements.
fn naive_stab(f: &Homomorphism) -> u32 {
    let mut cur: BTreeSet<Coords> = all_coords(f.source()).into_iter().collect();
    let mut n = 0;
    loop {
        let next: BTreeSet<Coords> = cur.iter().map(|x| apply(f, x)).collect();
        if next == cur {
            return n;
        }
        cur = next;
        n += 1;
    }
}

/// Whether `im f^n + ker f^n` covers the group, by forming both element sets.
fn naive_sum_is_whole(f: &Homomorphism, n: u32) -> bool {
    let g = f.source();
    let elems = all_coords(g);
    let power = |x: &Coords| (0..n).fold(x.clone(), |acc, _| apply(f, &acc));
    let zero: Coords = vec![BigInt::from(0); g.len()];
    let im: BTreeSet<Coords> = elems.iter().map(power).collect();
    let ker: Vec<&Coords> = elems.iter().filter(|x| power(x) == zero).collect();
    let sum: BTreeSet<Coords> = im
        .iter()
        .flat_map(|a| ker.iter().map(move |b| add(g, a, b)))
        .collect();
    sum.len() == elems.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stab_index_matches_element_iteration((g, f) in group_and_endo()) {
        let s = stab_index(&f).unwrap();
        prop_assert_eq!(s, naive_stab(&f));
        let tabled = g.small_cardinality().unwrap() <= MAX_TABLE_CARD;
        prop_assert_eq!(stab_index_by_table(&f), tabled.then_some(s));
    }

    #[test]
    fn chain_descends_and_stops((_g, f) in group_and_endo()) {
        let chain = image_chain(&f).unwrap();
        let s = stab_index(&f).unwrap() as usize;
        prop_assert_eq!(chain.len(), s + 2);
        for w in chain.windows(2) {
            prop_assert!(w[1].is_subgroup_of(&w[0]));
        }
        for w in chain[..=s].windows(2) {
            prop_assert!(w[1].cardinality() < w[0].cardinality());
        }
        prop_assert_eq!(&chain[s], &chain[s + 1]);
    }

    #[test]
    fn sum_decomposition_agrees_with_elements((_g, f) in group_and_endo()) {
        let s = stab_index(&f).unwrap();
        for n in 0..=s + 2 {
            let lattice = sum_decomposition_check(&f, n).unwrap();
            prop_assert_eq!(lattice, naive_sum_is_whole(&f, n), "n={}", n);
            prop_assert_eq!(lattice, n == 0 || n >= s, "n={}", n);
        }
    }

    #[test]
    fn image_times_kernel_is_card((g, f) in group_and_endo()) {
        prop_assert_eq!(image(&f).cardinality() * kernel(&f).cardinality(), g.cardinality());
    }

    #[test]
    fn stab_within_exponent_bound((g, f) in group_and_endo()) {
        // every p-component of exponent sum e stabilizes within e steps
        let worst = [2u64, 3, 5]
            .iter()
            .map(|&p| g.factors().iter().filter(|x| x.prime == p).map(|x| u64::from(x.exp)).sum::<u64>())
            .max()
            .unwrap();
        prop_assert!(u64::from(stab_index(&f).unwrap()) <= worst);
    }

    #[test]
    fn composition_is_associative((_g, f) in group_and_endo(), raw in 0u64..64) {
        let h = f.power(2).unwrap();
        let g2 = Homomorphism::scalar(f.source(), raw as i64);
        let left = f.compose(&h).unwrap().compose(&g2).unwrap();
        let right = f.compose(&h.compose(&g2).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}
