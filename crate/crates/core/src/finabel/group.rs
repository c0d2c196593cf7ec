use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::FinAbError;
use crate::arith::{is_prime, pow_big};

/// A cyclic factor `Z(p^e)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub prime: u64,
    pub exp: u32,
}

impl Factor {
    pub fn order(&self) -> BigInt {
        pow_big(self.prime, self.exp)
    }
}

/// Finite abelian group presented as an ordered direct sum of prime-power cyclic groups.
///
/// The factor order is part of the identity of the value: `Z(2) ⊕ Z(4)` and
/// `Z(4) ⊕ Z(2)` are different presentations. Use [`FinAbGroup::normalized`]
/// to compare up to isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    factors: Vec<Factor>,
    orders: Vec<BigInt>,
}

impl FinAbGroup {
    pub fn new(factors: &[(u64, u32)]) -> Result<Self, FinAbError> {
        let mut out = Vec::with_capacity(factors.len());
        for (idx, &(p, e)) in factors.iter().enumerate() {
            if !is_prime(p) {
                return Err(FinAbError::NotPrime {
                    index: idx,
                    prime: p,
                });
            }
            if e < 1 {
                return Err(FinAbError::ZeroExponent {
                    index: idx,
                    prime: p,
                });
            }
            out.push(Factor { prime: p, exp: e });
        }
        Ok(Self::from_factors(out))
    }

    pub(crate) fn from_factors(factors: Vec<Factor>) -> Self {
        let orders = factors.iter().map(Factor::order).collect();
        Self { factors, orders }
    }

    pub fn zero() -> Self {
        Self::from_factors(Vec::new())
    }

    /// `Z(p^e)^r`.
    pub fn homocyclic(p: u64, e: u32, r: usize) -> Result<Self, FinAbError> {
        Self::new(&vec![(p, e); r])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    pub fn order(&self, i: usize) -> &BigInt {
        &self.orders[i]
    }

    /// Number of cyclic factors.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn cardinality(&self) -> BigInt {
        self.orders.iter().fold(BigInt::one(), |acc, o| acc * o)
    }

    /// Cardinality as a machine word, when it fits.
    pub fn small_cardinality(&self) -> Option<u64> {
        u64::try_from(self.cardinality()).ok()
    }

    /// Same group with factors sorted by `(p, e)`.
    pub fn normalized(&self) -> Self {
        let mut f = self.factors.clone();
        f.sort();
        Self::from_factors(f)
    }

    /// The prime when every factor shares it; `None` for the zero group or mixed primes.
    pub fn p_group_prime(&self) -> Option<u64> {
        let p = self.factors.first()?.prime;
        self.factors.iter().all(|f| f.prime == p).then_some(p)
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        self.factors.iter().all(|f| f.prime == p)
    }

    /// Sum of exponents: `card = p^e` for a p-group.
    pub fn total_exponent(&self) -> u64 {
        self.factors.iter().map(|f| f.exp as u64).sum()
    }

    pub fn max_exponent(&self) -> u32 {
        self.factors.iter().map(|f| f.exp).max().unwrap_or(0)
    }

    pub fn is_homocyclic(&self) -> bool {
        match self.factors.first() {
            None => true,
            Some(f0) => self.factors.iter().all(|f| f == f0),
        }
    }

    /// `A ⊕ B`, factors of `self` first.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut f = self.factors.clone();
        f.extend_from_slice(&other.factors);
        Self::from_factors(f)
    }

    pub fn element(&self, coords: &[BigInt]) -> Result<GroupElement, FinAbError> {
        if coords.len() != self.len() {
            return Err(FinAbError::Shape {
                expected: (self.len(), 1),
                got: (coords.len(), 1),
            });
        }
        Ok(GroupElement {
            coords: coords
                .iter()
                .zip(&self.orders)
                .map(|(c, o)| c.mod_floor(o))
                .collect(),
        })
    }

    pub fn identity_element(&self) -> GroupElement {
        GroupElement {
            coords: vec![BigInt::from(0); self.len()],
        }
    }

    /// The `j`-th standard generator.
    pub fn generator(&self, j: usize) -> GroupElement {
        let mut coords = vec![BigInt::from(0); self.len()];
        coords[j] = BigInt::one();
        GroupElement { coords }
    }

    /// Every element, in mixed-radix order with the last coordinate varying fastest.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let card = self.small_cardinality().expect("group too large to list");
        (0..card).map(move |mut idx| {
            let mut coords = vec![BigInt::from(0); self.len()];
            for j in (0..self.len()).rev() {
                let o = u64::try_from(&self.orders[j]).unwrap();
                coords[j] = BigInt::from(idx % o);
                idx /= o;
            }
            GroupElement { coords }
        })
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        for (i, fac) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if fac.exp == 1 {
                write!(f, "Z({})", fac.prime)?;
            } else {
                write!(f, "Z({}^{})", fac.prime, fac.exp)?;
            }
        }
        Ok(())
    }
}

/// Element of a [`FinAbGroup`]: one reduced residue per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub(crate) coords: Vec<BigInt>,
}

impl GroupElement {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c == &BigInt::from(0))
    }
}
