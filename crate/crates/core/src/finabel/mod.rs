//! Finite abelian groups, their homomorphisms, and image-chain stabilization.
//!
//! Groups are ordered direct sums of prime-power cyclic factors. Subgroups are
//! kept in a unique lattice normal form so that "the chain is stationary" is
//! a structural comparison. All arithmetic is exact.

mod enumerate;
mod group;
mod hom;
mod subgroup;
pub(crate) mod table;

use num_bigint::BigInt;
use thiserror::Error;

pub(crate) use enumerate::scan_tables;
pub use enumerate::{enumerate_endos, max_stab_index_with, EndoSpace, Endos};
pub use group::{Factor, FinAbGroup, GroupElement};
pub use hom::Homomorphism;
pub use subgroup::Subgroup;
pub use table::MAX_TABLE_CARD;

use crate::par::Parallelism;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinAbError {
    #[error("factor {index}: {prime} is not prime")]
    NotPrime { index: usize, prime: u64 },
    #[error("factor {index}: exponent of {prime} must be at least 1")]
    ZeroExponent { index: usize, prime: u64 },
    #[error("matrix shape {got:?} does not match expected {expected:?}")]
    Shape {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("entry ({row},{col}) must be divisible by {divisor}")]
    Congruence {
        row: usize,
        col: usize,
        divisor: BigInt,
    },
    #[error("homomorphism is not an endomorphism")]
    NotEndomorphism,
    #[error("{0}")]
    Mismatch(&'static str),
    #[error("group has {count} endomorphisms, more than the cap {cap}")]
    TooManyEndomorphisms { count: BigInt, cap: u64 },
}

pub fn make_group(factors: &[(u64, u32)]) -> Result<FinAbGroup, FinAbError> {
    FinAbGroup::new(factors)
}

pub fn validate_hom<T: Into<BigInt> + Clone>(
    m: &[Vec<T>],
    src: &FinAbGroup,
    tgt: &FinAbGroup,
) -> Result<Homomorphism, FinAbError> {
    Homomorphism::new(m, src, tgt)
}

/// `f ∘ g`.
pub fn compose(f: &Homomorphism, g: &Homomorphism) -> Result<Homomorphism, FinAbError> {
    f.compose(g)
}

pub fn image(f: &Homomorphism) -> Subgroup {
    Subgroup::whole(f.source())
        .map(f)
        .expect("source matches by construction")
}

pub fn kernel(f: &Homomorphism) -> Subgroup {
    subgroup::kernel_of(f)
}

pub fn subgroup_equal(s1: &Subgroup, s2: &Subgroup) -> Result<bool, FinAbError> {
    s1.equals(s2)
}

/// `im f^0 ⊇ im f^1 ⊇ ...`, ending with the first repeated term.
///
/// The returned vector has length `stab_index(f) + 2`.
pub fn image_chain(f: &Homomorphism) -> Result<Vec<Subgroup>, FinAbError> {
    if !f.is_endomorphism() {
        return Err(FinAbError::NotEndomorphism);
    }
    let mut chain = vec![Subgroup::whole(f.source())];
    loop {
        let next = chain.last().unwrap().map(f)?;
        let done = &next == chain.last().unwrap();
        chain.push(next);
        if done {
            return Ok(chain);
        }
    }
}

/// Least `n ≥ 0` with `im f^n = im f^{n+1}`, where `f^0` is the identity.
pub fn stab_index(f: &Homomorphism) -> Result<u32, FinAbError> {
    Ok(image_chain(f)?.len() as u32 - 2)
}

/// Whether `im f^n + ker f^n` is the whole group.
pub fn sum_decomposition_check(f: &Homomorphism, n: u32) -> Result<bool, FinAbError> {
    let fnth = f.power(n)?;
    let sum = image(&fnth).join(&kernel(&fnth))?;
    Ok(sum.is_whole())
}

/// Maximum stabilization index over all endomorphisms, with the first
/// maximizing map in enumeration order.
pub fn max_stab_index(g: &FinAbGroup, cap: u64) -> Result<(u32, Homomorphism), FinAbError> {
    max_stab_index_with(g, cap, Parallelism::default())
}

/// Stabilization index through the element-table path (groups of at most 64 elements).
pub fn stab_index_by_table(f: &Homomorphism) -> Option<u32> {
    if !f.is_endomorphism() {
        return None;
    }
    let small = table::SmallGroup::new(f.source())?;
    Some(small.stab_index(&small.table_of(f)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z8() -> FinAbGroup {
        make_group(&[(2, 3)]).unwrap()
    }

    #[test]
    fn image_examples() {
        let g = z8();
        assert!(image(&Homomorphism::identity(&g)).is_whole());
        let im2 = image(&Homomorphism::scalar(&g, 2));
        assert_eq!(im2.cardinality(), BigInt::from(4));
        let six = Subgroup::generated_by(&g, &[vec![BigInt::from(6)]]).unwrap();
        assert!(subgroup_equal(&im2, &six).unwrap());

        // [[2,1],[0,0]] would send the order-2 generator to an order-4 element
        let h = make_group(&[(2, 2), (2, 1)]).unwrap();
        assert_eq!(
            validate_hom(&[vec![2, 1], vec![0, 0]], &h, &h).unwrap_err(),
            FinAbError::Congruence {
                row: 0,
                col: 1,
                divisor: BigInt::from(2)
            }
        );
        // [[1,2],[0,0]]; oracle: collect all 8 images
        let f = validate_hom(&[vec![1, 2], vec![0, 0]], &h, &h).unwrap();
        let mut imgs: Vec<_> = h.elements().map(|x| f.apply(&x).unwrap()).collect();
        imgs.sort();
        imgs.dedup();
        assert_eq!(imgs.len(), 4);
        let im = image(&f);
        assert_eq!(im.cardinality(), BigInt::from(4));
        let gen10 =
            Subgroup::from_elements(&h, &[h.element(&[1.into(), 0.into()]).unwrap()]).unwrap();
        assert_eq!(im, gen10);
        for x in &imgs {
            assert!(im.contains(x));
        }
    }

    #[test]
    fn kernel_examples() {
        let g = z8();
        assert!(kernel(&Homomorphism::identity(&g)).is_trivial());
        assert!(kernel(&Homomorphism::zero(&g, &g)).is_whole());
        let k = kernel(&Homomorphism::scalar(&g, 2));
        assert_eq!(k.cardinality(), BigInt::from(2));
        assert!(k.contains(&g.element(&[4.into()]).unwrap()));
    }

    #[test]
    fn kernel_between_different_groups() {
        // Z(2) -> Z(4), generator to 2: injective
        let z2 = make_group(&[(2, 1)]).unwrap();
        let z4 = make_group(&[(2, 2)]).unwrap();
        let f = validate_hom(&[vec![2]], &z2, &z4).unwrap();
        assert!(kernel(&f).is_trivial());
        // Z(4) -> Z(2), reduction: kernel {0,2}
        let r = validate_hom(&[vec![1]], &z4, &z2).unwrap();
        assert_eq!(kernel(&r).cardinality(), BigInt::from(2));
        assert_eq!(image(&r).cardinality(), BigInt::from(2));
    }

    #[test]
    fn subgroup_equal_examples() {
        let z2 = make_group(&[(2, 1)]).unwrap();
        assert!(!subgroup_equal(&Subgroup::whole(&z2), &Subgroup::trivial(&z2)).unwrap());
        let id = Homomorphism::identity(&z8());
        assert!(subgroup_equal(&image(&id), &image(&compose(&id, &id).unwrap())).unwrap());
        assert!(subgroup_equal(&Subgroup::whole(&z2), &Subgroup::whole(&z8())).is_err());
    }

    #[test]
    fn stab_index_examples() {
        let g = z8();
        assert_eq!(stab_index(&Homomorphism::identity(&g)).unwrap(), 0);
        assert_eq!(stab_index(&Homomorphism::zero(&g, &g)).unwrap(), 1);
        assert_eq!(stab_index(&Homomorphism::scalar(&g, 2)).unwrap(), 3);
        let sizes: Vec<BigInt> = image_chain(&Homomorphism::scalar(&g, 2))
            .unwrap()
            .iter()
            .map(Subgroup::cardinality)
            .collect();
        assert_eq!(sizes, [8, 4, 2, 1, 1].map(BigInt::from));
        let z2 = make_group(&[(2, 1)]).unwrap();
        let z4 = make_group(&[(2, 2)]).unwrap();
        let emb = validate_hom(&[vec![2]], &z2, &z4).unwrap();
        assert_eq!(stab_index(&emb), Err(FinAbError::NotEndomorphism));
    }

    #[test]
    fn sum_decomposition_examples() {
        let g = z8();
        assert!(sum_decomposition_check(&Homomorphism::identity(&g), 1).unwrap());
        let two = Homomorphism::scalar(&g, 2);
        assert!(!sum_decomposition_check(&two, 1).unwrap());
        assert!(sum_decomposition_check(&two, 3).unwrap());
    }

    #[test]
    fn max_stab_examples() {
        let z2 = make_group(&[(2, 1)]).unwrap();
        let (n, w) = max_stab_index(&z2, 100).unwrap();
        assert_eq!((n, w), (1, Homomorphism::zero(&z2, &z2)));
        let (n, w) = max_stab_index(&z8(), 100).unwrap();
        assert_eq!((n, w), (3, Homomorphism::scalar(&z8(), 2)));
        let zero = FinAbGroup::zero();
        let (n, w) = max_stab_index(&zero, 100).unwrap();
        assert_eq!(n, 0);
        assert!(w.matrix().is_empty());
    }

    #[test]
    fn max_stab_falls_back_beyond_table_size() {
        // 81 elements: lattice path; Z(3^4), endos = multiplication by 0..81
        let g = make_group(&[(3, 4)]).unwrap();
        let (n, w) = max_stab_index_with(&g, 1000, Parallelism::Sequential).unwrap();
        assert_eq!(n, 4);
        assert_eq!(w, Homomorphism::scalar(&g, 3));
    }
}
