use std::collections::BTreeMap;

use super::{SpElement, SpGroupSpec, Valuation};
use crate::arith::ceil_div;
use crate::classify::{is_uniformly_scoh_desc, Answer, Evidence, GroupDescriptor, Verdict};

/// Witnesses `p_n z` listed when a spec is not uniformly Sco-H.
const WITNESS_COUNT: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StabCase {
    /// Rational part 0: the image is torsion.
    TorsionImage,
    /// Rational part nonzero: a unit at all but finitely many components.
    EventualAutomorphism,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabReport {
    pub index: u64,
    pub case: StabCase,
    /// Exceptional indices with `(valuation, step)`.
    pub per_prime: BTreeMap<usize, (Valuation, u64)>,
}

impl StabReport {
    /// Per-component step at any index.
    pub fn step_at(&self, i: usize) -> u64 {
        match self.per_prime.get(&i) {
            Some(&(_, s)) => s,
            None => match self.case {
                StabCase::EventualAutomorphism => 0,
                StabCase::TorsionImage => 1,
            },
        }
    }
}

/// Stabilization index of multiplication by `u * p^v` on `Z(p^e)`:
/// the images are `p^{min(jv, e)} Z(p^e)`.
fn component_step(v: Valuation, e: u32) -> u64 {
    match v {
        Valuation::Finite(0) => 0,
        Valuation::Finite(v) => ceil_div(u64::from(e), u64::from(v)),
        Valuation::Infinite => 1,
    }
}

/// Closed-form stabilization index of `x ↦ alpha * x` on the whole sp-group.
pub fn stab_index_mul(alpha: &SpElement, spec: &SpGroupSpec) -> StabReport {
    let per_prime: BTreeMap<usize, (Valuation, u64)> = alpha
        .exceptional_indices(spec)
        .into_iter()
        .map(|i| {
            let v = alpha.valuation(spec, i);
            (i, (v, component_step(v, spec.exponent(i))))
        })
        .collect();
    let worst = per_prime.values().map(|&(_, s)| s).max().unwrap_or(0);
    let (case, index) = if alpha.is_torsion() {
        // zero at every other component, and there are infinitely many
        (StabCase::TorsionImage, worst.max(1))
    } else {
        (StabCase::EventualAutomorphism, worst)
    };
    StabReport {
        index,
        case,
        per_prime,
    }
}

/// Uniform Sco-H for the sp-group of `spec`; a `No` carries the indices of `p_n z`.
pub fn is_uniformly_scoh_sp(spec: &SpGroupSpec) -> Verdict {
    let mut v = is_uniformly_scoh_desc(&GroupDescriptor::ering_sp(*spec));
    if v.answer == Answer::No {
        let witnesses = (1..=WITNESS_COUNT)
            .map(|n| {
                (
                    n,
                    stab_index_mul(&SpElement::integer(spec.prime(n)), spec).index,
                )
            })
            .collect();
        v.certificate.last_mut().expect("definite").evidence = Evidence::StabWitnesses(witnesses);
    }
    v
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;

    use super::*;
    use crate::classify::PrimeSet;
    use crate::finabel::stab_index;
    use crate::spgroup::truncate;

    fn truncated_index(alpha: &SpElement, spec: &SpGroupSpec, n: usize) -> u64 {
        let t = truncate(spec, n).unwrap();
        u64::from(stab_index(&t.mul_endo(alpha)).unwrap())
    }

    #[test]
    fn identity_and_prime_multiples() {
        let s = SpGroupSpec::linear(PrimeSet::All);
        assert_eq!(stab_index_mul(&SpElement::one(), &s).index, 0);
        for n in 1..=5 {
            let a = SpElement::integer(s.prime(n));
            let r = stab_index_mul(&a, &s);
            assert_eq!(r.index, n as u64);
            assert_eq!(r.case, StabCase::EventualAutomorphism);
            assert_eq!(truncated_index(&a, &s, n + 2), n as u64);
        }
    }

    #[test]
    fn constant_exponent_one_is_at_most_one() {
        let s = SpGroupSpec::constant(PrimeSet::All, 1).unwrap();
        for a in [1i64, 2, 6, 30, -7, 210] {
            let x = SpElement::integer(a);
            let r = stab_index_mul(&x, &s);
            assert!(r.index <= 1);
            assert_eq!(r.index, truncated_index(&x, &s, 6));
        }
    }

    #[test]
    fn torsion_multipliers() {
        let s = SpGroupSpec::linear(PrimeSet::All);
        // component 3 (mod 5) at index 2 (Z(9)): valuation 1, step 2
        let t = SpElement::torsion([(2, BigInt::from(3))].into_iter().collect(), &s).unwrap();
        let r = stab_index_mul(&t, &s);
        assert_eq!(r.case, StabCase::TorsionImage);
        assert_eq!(r.index, 2);
        assert_eq!(r.step_at(7), 1);
        assert_eq!(truncated_index(&t, &s, 4), 2);
        assert_eq!(stab_index_mul(&SpElement::zero(), &s).index, 1);
    }

    #[test]
    fn uniform_verdicts() {
        let v = is_uniformly_scoh_sp(&SpGroupSpec::constant(PrimeSet::All, 4).unwrap());
        assert_eq!(v.answer, Answer::Yes);
        assert_eq!(
            is_uniformly_scoh_sp(&SpGroupSpec::constant(PrimeSet::All, 1).unwrap()).answer,
            Answer::Yes
        );
        let v = is_uniformly_scoh_sp(&SpGroupSpec::linear(PrimeSet::All));
        assert_eq!(v.answer, Answer::No);
        assert_eq!(v.replay(), Ok(Answer::No));
        assert_eq!(
            v.certificate.last().unwrap().evidence,
            Evidence::StabWitnesses((1..=5).map(|n| (n, n as u64)).collect())
        );
    }
}
