use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{SpError, SpGroupSpec};
use crate::arith::{mod_inverse, prime_divisors, valuation as int_valuation};

/// Element of the sp-group: rational part `a/b` plus explicit components.
///
/// Component `i` is `corrections[i]` when present and `a * b^{-1} mod p_i^{e_i}`
/// otherwise. Indices whose prime divides `b` always carry an explicit
/// component; explicit entries equal to the default are dropped, so equal
/// elements have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpElement {
    q: BigRational,
    corrections: BTreeMap<usize, BigInt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

fn check_width(n: &BigInt) -> Result<(), SpError> {
    if n.abs().to_u64().is_none() {
        return Err(SpError::TooLarge(n.clone()));
    }
    Ok(())
}

fn default_component(q: &BigRational, spec: &SpGroupSpec, i: usize) -> Option<BigInt> {
    let m = spec.modulus(i);
    let inv = mod_inverse(&q.denom().mod_floor(&m), &m)?;
    Some((q.numer() * inv).mod_floor(&m))
}

impl SpElement {
    /// Validates and canonicalizes. Numerator and denominator must fit in 64 bits.
    pub fn new(
        q: BigRational,
        corrections: BTreeMap<usize, BigInt>,
        spec: &SpGroupSpec,
    ) -> Result<Self, SpError> {
        check_width(q.numer())?;
        check_width(q.denom())?;
        if corrections.contains_key(&0) {
            return Err(SpError::ZeroIndex);
        }
        let denom_primes = prime_divisors(q.denom()).expect("width checked");
        for p in denom_primes {
            if let Some(index) = spec.index_of(p) {
                if !corrections.contains_key(&index) {
                    return Err(SpError::MissingCorrection { index, prime: p });
                }
            }
        }
        Ok(Self::canonical(q, corrections, spec))
    }

    /// Assumes every index whose prime divides the denominator is present.
    fn canonical(q: BigRational, raw: BTreeMap<usize, BigInt>, spec: &SpGroupSpec) -> Self {
        let corrections = raw
            .into_iter()
            .filter_map(|(i, r)| {
                let r = r.mod_floor(&spec.modulus(i));
                (default_component(&q, spec, i).as_ref() != Some(&r)).then_some((i, r))
            })
            .collect();
        Self { q, corrections }
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    /// The ring identity `z = (1, 1, ...)`.
    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self {
            q: BigRational::from_integer(n.into()),
            corrections: BTreeMap::new(),
        }
    }

    /// Torsion element with the given components and rational part 0.
    pub fn torsion(
        corrections: BTreeMap<usize, BigInt>,
        spec: &SpGroupSpec,
    ) -> Result<Self, SpError> {
        Self::new(BigRational::zero(), corrections, spec)
    }

    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn corrections(&self) -> &BTreeMap<usize, BigInt> {
        &self.corrections
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero() && self.corrections.is_empty()
    }

    pub fn is_torsion(&self) -> bool {
        self.q.is_zero()
    }

    /// Residue mod `p_i^{e_i}`, `i ≥ 1`.
    pub fn component(&self, spec: &SpGroupSpec, i: usize) -> BigInt {
        assert!(i >= 1, "component indices start at 1");
        match self.corrections.get(&i) {
            Some(r) => r.clone(),
            None => default_component(&self.q, spec, i)
                .expect("invariant: non-invertible indices are explicit"),
        }
    }

    fn combine(
        &self,
        other: &Self,
        q: BigRational,
        spec: &SpGroupSpec,
        op: impl Fn(BigInt, BigInt) -> BigInt,
    ) -> Result<Self, SpError> {
        check_width(q.numer())?;
        check_width(q.denom())?;
        // the new denominator divides the product of the old ones, whose
        // primes are all explicit in one of the operands
        let raw = self
            .corrections
            .keys()
            .chain(other.corrections.keys())
            .map(|&i| (i, op(self.component(spec, i), other.component(spec, i))))
            .collect();
        Ok(Self::canonical(q, raw, spec))
    }

    pub fn neg(&self, spec: &SpGroupSpec) -> Self {
        let raw = self
            .corrections
            .iter()
            .map(|(&i, r)| (i, -r.clone()))
            .collect();
        Self::canonical(-self.q.clone(), raw, spec)
    }

    /// Fails only if the rational part outgrows 64 bits.
    pub fn add(&self, other: &Self, spec: &SpGroupSpec) -> Result<Self, SpError> {
        self.combine(other, &self.q + &other.q, spec, |a, b| a + b)
    }

    /// Fails only if the rational part outgrows 64 bits.
    pub fn mul(&self, other: &Self, spec: &SpGroupSpec) -> Result<Self, SpError> {
        self.combine(other, &self.q * &other.q, spec, |a, b| a * b)
    }

    /// `p_i`-adic valuation of component `i`; `Infinite` iff the component is 0.
    pub fn valuation(&self, spec: &SpGroupSpec, i: usize) -> Valuation {
        let c = self.component(spec, i);
        if c.is_zero() {
            Valuation::Infinite
        } else {
            Valuation::Finite(int_valuation(&c, spec.prime(i)))
        }
    }

    /// Indices where the component can differ from a unit: the explicit
    /// ones, plus those whose prime divides the numerator.
    pub(crate) fn exceptional_indices(&self, spec: &SpGroupSpec) -> Vec<usize> {
        let mut out: Vec<usize> = self.corrections.keys().copied().collect();
        if !self.q.is_zero() {
            let num_primes = prime_divisors(self.q.numer()).expect("width checked at construction");
            out.extend(num_primes.into_iter().filter_map(|p| spec.index_of(p)));
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl fmt::Display for SpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.denom().is_one() {
            write!(f, "q={}", self.q.numer())?;
        } else {
            write!(f, "q={}/{}", self.q.numer(), self.q.denom())?;
        }
        for (i, r) in &self.corrections {
            write!(f, " c{i}={r}")?;
        }
        Ok(())
    }
}

pub fn elem_add(x: &SpElement, y: &SpElement, spec: &SpGroupSpec) -> Result<SpElement, SpError> {
    x.add(y, spec)
}

pub fn elem_mul(x: &SpElement, y: &SpElement, spec: &SpGroupSpec) -> Result<SpElement, SpError> {
    x.mul(y, spec)
}

/// `(i, p_i^{e_i})` such that `x` is not divisible by `p_i^{e_i}`, or `None` for `x = 0`.
pub fn ulm_witness(x: &SpElement, spec: &SpGroupSpec) -> Option<(usize, BigInt)> {
    if x.is_zero() {
        return None;
    }
    // a nonzero component at i rules out divisibility by p_i^{e_i}, which kills that component
    if let Some((&i, _)) = x.corrections.iter().find(|(_, r)| !r.is_zero()) {
        return Some((i, spec.modulus(i)));
    }
    // q ≠ 0: only finitely many components vanish
    (1..)
        .find(|&i| !x.component(spec, i).is_zero())
        .map(|i| (i, spec.modulus(i)))
}

/// Whether `x` lies in `nG` for every `n`, i.e. in the first Ulm subgroup.
pub fn ulm_is_zero(x: &SpElement, spec: &SpGroupSpec) -> bool {
    ulm_witness(x, spec).is_none()
}
