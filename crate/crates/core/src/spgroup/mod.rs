//! The rank-one E-ring sp-groups `⊕ Z(p_i^{e_i}) ≤ G ≤ ∏ Z(p_i^{e_i})` with
//! `G/T ≅ Q`.
//!
//! Elements are coded as a rational `a/b` plus finitely many explicit
//! components; every endomorphism is multiplication by an element, so the
//! stabilization index has a closed form.

mod element;
mod examples;
mod stab;

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::arith::pow_big;
use crate::classify::{PrimeSet, TailRule, TorsionDescriptor};
use crate::finabel::{FinAbError, FinAbGroup, GroupElement, Homomorphism};

pub use element::{elem_add, elem_mul, ulm_is_zero, ulm_witness, SpElement, Valuation};
pub use examples::{build_example, Example};
pub use stab::{is_uniformly_scoh_sp, stab_index_mul, StabCase, StabReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpError {
    #[error("invalid spec: {0}")]
    Spec(String),
    #[error("component index must be at least 1")]
    ZeroIndex,
    #[error(
        "index {index} (prime {prime}) divides the denominator and needs an explicit component"
    )]
    MissingCorrection { index: usize, prime: u64 },
    #[error("{0} does not fit in 64 bits")]
    TooLarge(BigInt),
    #[error("unknown example {0:?}")]
    UnknownExample(String),
    #[error("truncation length must be at least 1")]
    EmptyTruncation,
    #[error(transparent)]
    Group(#[from] FinAbError),
}

/// Prime sequence `p_1 < p_2 < ...` with exponents `e_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpGroupSpec {
    primes: PrimeSet,
    exps: TailRule,
}

impl SpGroupSpec {
    /// `exps` is `ConstExp { c, r: 1 }` (`e_i = c`) or `LinearExp` (`e_i = i`).
    pub fn new(primes: PrimeSet, exps: TailRule) -> Result<Self, SpError> {
        match exps {
            TailRule::ConstExp { c, r: 1 } if c >= 1 => {}
            TailRule::LinearExp => {}
            other => {
                return Err(SpError::Spec(format!(
                    "exponent rule must be const:C or linear, got {other:?}"
                )))
            }
        }
        Ok(Self { primes, exps })
    }

    pub fn constant(primes: PrimeSet, c: u32) -> Result<Self, SpError> {
        Self::new(primes, TailRule::ConstExp { c, r: 1 })
    }

    pub fn linear(primes: PrimeSet) -> Self {
        Self {
            primes,
            exps: TailRule::LinearExp,
        }
    }

    pub fn primes(&self) -> PrimeSet {
        self.primes
    }

    pub fn exps(&self) -> TailRule {
        self.exps
    }

    /// `c` when every `e_i = c`.
    pub fn const_exponent(&self) -> Option<u32> {
        match self.exps {
            TailRule::ConstExp { c, .. } => Some(c),
            _ => None,
        }
    }

    pub fn prime(&self, i: usize) -> u64 {
        self.primes.nth(i)
    }

    pub fn index_of(&self, p: u64) -> Option<usize> {
        self.primes.index_of(p)
    }

    pub fn exponent(&self, i: usize) -> u32 {
        match self.exps {
            TailRule::ConstExp { c, .. } => c,
            _ => u32::try_from(i).expect("index fits u32"),
        }
    }

    /// `p_i^{e_i}`.
    pub fn modulus(&self, i: usize) -> BigInt {
        pow_big(self.prime(i), self.exponent(i))
    }

    /// The torsion subgroup `⊕ Z(p_i^{e_i})`.
    pub fn torsion(&self) -> TorsionDescriptor {
        TorsionDescriptor::new(Default::default(), self.primes, self.exps)
            .expect("spec exponents are valid")
    }
}

impl fmt::Display for SpGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "primes={} exps=", self.primes.keyword())?;
        match self.exps {
            TailRule::ConstExp { c, .. } => write!(f, "const:{c}"),
            _ => write!(f, "linear"),
        }
    }
}

/// The first `n` components of an sp-group as a finite group.
#[derive(Clone, Debug)]
pub struct Truncation {
    spec: SpGroupSpec,
    group: FinAbGroup,
}

pub fn truncate(spec: &SpGroupSpec, n: usize) -> Result<Truncation, SpError> {
    if n == 0 {
        return Err(SpError::EmptyTruncation);
    }
    let factors: Vec<(u64, u32)> = (1..=n).map(|i| (spec.prime(i), spec.exponent(i))).collect();
    Ok(Truncation {
        spec: *spec,
        group: FinAbGroup::new(&factors)?,
    })
}

impl Truncation {
    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.group.len()
    }

    pub fn is_empty(&self) -> bool {
        self.group.is_empty()
    }

    pub fn element(&self, x: &SpElement) -> GroupElement {
        let coords: Vec<BigInt> = (1..=self.len())
            .map(|i| x.component(&self.spec, i))
            .collect();
        self.group.element(&coords).expect("components are reduced")
    }

    /// Multiplication by `alpha` restricted to the first components.
    pub fn mul_endo(&self, alpha: &SpElement) -> Homomorphism {
        let diag: Vec<BigInt> = (1..=self.len())
            .map(|i| alpha.component(&self.spec, i))
            .collect();
        Homomorphism::diagonal(&self.group, &diag).expect("diagonal maps are endomorphisms")
    }
}
