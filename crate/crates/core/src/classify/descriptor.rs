use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::arith::{is_prime, nth_prime, prime_position};
use crate::finabel::FinAbGroup;
use crate::spgroup::SpGroupSpec;

use super::ClassifyError;

/// An infinite set of primes, listed in increasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimeSet {
    All,
    /// 2, 5, 11, 17, ...: primes at positions 1, 3, 5, ... of the full list.
    OddPositions,
    /// 3, 7, 13, 19, ...: primes at positions 2, 4, 6, ...
    EvenPositions,
}

impl PrimeSet {
    /// The `i`-th member, 1-indexed.
    pub fn nth(self, i: usize) -> u64 {
        assert!(i >= 1);
        match self {
            PrimeSet::All => nth_prime(i),
            PrimeSet::OddPositions => nth_prime(2 * i - 1),
            PrimeSet::EvenPositions => nth_prime(2 * i),
        }
    }

    /// 1-based position of `p` within this set.
    pub fn index_of(self, p: u64) -> Option<usize> {
        let pos = prime_position(p)?;
        match self {
            PrimeSet::All => Some(pos),
            PrimeSet::OddPositions => (pos % 2 == 1).then_some(pos.div_ceil(2)),
            PrimeSet::EvenPositions => (pos % 2 == 0).then_some(pos / 2),
        }
    }

    pub fn contains(self, p: u64) -> bool {
        self.index_of(p).is_some()
    }

    pub fn is_disjoint(self, other: PrimeSet) -> bool {
        matches!(
            (self, other),
            (PrimeSet::OddPositions, PrimeSet::EvenPositions)
                | (PrimeSet::EvenPositions, PrimeSet::OddPositions)
        )
    }

    pub fn keyword(self) -> &'static str {
        match self {
            PrimeSet::All => "all",
            PrimeSet::OddPositions => "odd-positions",
            PrimeSet::EvenPositions => "even-positions",
        }
    }
}

/// How the p-components look for the primes not listed explicitly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TailRule {
    Zero,
    /// `Z(p^c)^r` at every tail prime.
    ConstExp {
        c: u32,
        r: u32,
    },
    /// `Z(p_n^n)` at the `n`-th prime of the support.
    LinearExp,
}

impl TailRule {
    pub fn const_exp(c: u32, r: u32) -> Result<Self, ClassifyError> {
        if c == 0 || r == 0 {
            return Err(ClassifyError::Invalid(format!(
                "const tail needs exponent and multiplicity >= 1, got {c}x{r}"
            )));
        }
        Ok(TailRule::ConstExp { c, r })
    }
}

/// `T = ⊕_p T_p` with finitely many explicit components and a rule for the rest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorsionDescriptor {
    explicit: BTreeMap<u64, FinAbGroup>,
    support: PrimeSet,
    tail: TailRule,
}

impl TorsionDescriptor {
    pub fn new(
        explicit: BTreeMap<u64, FinAbGroup>,
        support: PrimeSet,
        tail: TailRule,
    ) -> Result<Self, ClassifyError> {
        for (&p, g) in &explicit {
            if !is_prime(p) {
                return Err(ClassifyError::Invalid(format!("{p} is not prime")));
            }
            if !g.is_p_group(p) {
                return Err(ClassifyError::Invalid(format!(
                    "component at {p} is not a {p}-group: {g}"
                )));
            }
        }
        if let TailRule::ConstExp { c, r } = tail {
            TailRule::const_exp(c, r)?;
        }
        Ok(Self {
            explicit,
            support,
            tail,
        })
    }

    /// Tail over all primes, nothing explicit.
    pub fn tail_only(tail: TailRule) -> Self {
        Self {
            explicit: BTreeMap::new(),
            support: PrimeSet::All,
            tail,
        }
    }

    /// Finite torsion group: only the listed components.
    pub fn finite(explicit: BTreeMap<u64, FinAbGroup>) -> Result<Self, ClassifyError> {
        Self::new(explicit, PrimeSet::All, TailRule::Zero)
    }

    /// Finite group split into its primary components.
    pub fn from_group(g: &FinAbGroup) -> Self {
        let mut by_prime: BTreeMap<u64, Vec<(u64, u32)>> = BTreeMap::new();
        for f in g.factors() {
            by_prime.entry(f.prime).or_default().push((f.prime, f.exp));
        }
        let explicit = by_prime
            .into_iter()
            .map(|(p, fs)| (p, FinAbGroup::new(&fs).expect("factors already validated")))
            .collect();
        Self {
            explicit,
            support: PrimeSet::All,
            tail: TailRule::Zero,
        }
    }

    pub fn explicit(&self) -> &BTreeMap<u64, FinAbGroup> {
        &self.explicit
    }

    pub fn support(&self) -> PrimeSet {
        self.support
    }

    pub fn tail(&self) -> TailRule {
        self.tail
    }

    pub fn is_finite(&self) -> bool {
        self.tail == TailRule::Zero
    }

    /// The finite group `T_p`.
    pub fn component(&self, p: u64) -> FinAbGroup {
        if let Some(g) = self.explicit.get(&p) {
            return g.clone();
        }
        let Some(n) = self.support.index_of(p) else {
            return FinAbGroup::zero();
        };
        match self.tail {
            TailRule::Zero => FinAbGroup::zero(),
            TailRule::ConstExp { c, r } => FinAbGroup::homocyclic(p, c, r as usize).unwrap(),
            TailRule::LinearExp => FinAbGroup::new(&[(p, n as u32)]).unwrap(),
        }
    }

    /// `log_p card(T_p)` at the `n`-th prime of the support, ignoring explicit entries.
    pub fn tail_exponent(&self, n: usize) -> u64 {
        match self.tail {
            TailRule::Zero => 0,
            TailRule::ConstExp { c, r } => c as u64 * r as u64,
            TailRule::LinearExp => n as u64,
        }
    }

    /// The finite group `⊕_{p in explicit}` when the tail is zero.
    pub fn as_finite_group(&self) -> Option<FinAbGroup> {
        if !self.is_finite() {
            return None;
        }
        Some(
            self.explicit
                .values()
                .fold(FinAbGroup::zero(), |acc, g| acc.direct_sum(g)),
        )
    }

    pub(crate) fn prime_support(&self) -> PrimeSupport {
        let mut s = PrimeSupport::default();
        for (&p, g) in &self.explicit {
            if !g.is_empty() {
                s.finite.insert(p);
            }
        }
        if self.tail != TailRule::Zero {
            s.classes
                .push((self.support, self.explicit.keys().copied().collect()));
        }
        s
    }
}

/// Primes at which a torsion part is nonzero.
#[derive(Clone, Debug, Default)]
pub(crate) struct PrimeSupport {
    pub finite: BTreeSet<u64>,
    /// Infinite classes, each minus the listed primes.
    pub classes: Vec<(PrimeSet, BTreeSet<u64>)>,
}

impl PrimeSupport {
    pub fn all() -> Self {
        Self {
            finite: BTreeSet::new(),
            classes: vec![(PrimeSet::All, BTreeSet::new())],
        }
    }

    pub fn contains(&self, p: u64) -> bool {
        self.finite.contains(&p)
            || self
                .classes
                .iter()
                .any(|(c, ex)| c.contains(p) && !ex.contains(&p))
    }

    pub fn union(mut self, other: PrimeSupport) -> Self {
        self.finite.extend(other.finite);
        self.classes.extend(other.classes);
        self
    }

    pub fn is_disjoint(&self, other: &PrimeSupport) -> bool {
        // finitely many primes are excluded from each class, so two
        // overlapping infinite classes always share a prime
        let classes_apart = self
            .classes
            .iter()
            .all(|(a, _)| other.classes.iter().all(|(b, _)| a.is_disjoint(*b)));
        classes_apart
            && self.finite.iter().all(|&p| !other.contains(p))
            && other.finite.iter().all(|&p| !self.contains(p))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rank {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(n) => write!(f, "{n}"),
            Rank::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PRank {
    /// Every `r_p(D)` equals `k`.
    Const(u64),
    Unbounded,
}

/// Divisible group `Q^{r0} ⊕ ⊕_p Z(p^∞)^{r_p}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DivisibleDescriptor {
    pub r0: Rank,
    pub rp: PRank,
}

impl DivisibleDescriptor {
    pub fn is_zero(&self) -> bool {
        self.r0 == Rank::Finite(0) && self.rp == PRank::Const(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flag {
    Reduced,
    Cotorsion,
    AdjustedCotorsion,
    AlgebraicallyCompact,
}

impl Flag {
    pub fn keyword(self) -> &'static str {
        match self {
            Flag::Reduced => "reduced",
            Flag::Cotorsion => "cotorsion",
            Flag::AdjustedCotorsion => "adjusted-cotorsion",
            Flag::AlgebraicallyCompact => "alg-compact",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        [
            Flag::Reduced,
            Flag::Cotorsion,
            Flag::AdjustedCotorsion,
            Flag::AlgebraicallyCompact,
        ]
        .into_iter()
        .find(|f| f.keyword() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Torsion(TorsionDescriptor),
    TorsionFree {
        divisible: bool,
        rank: Rank,
    },
    Divisible(DivisibleDescriptor),
    /// `G = ∏_p T_p`.
    ReducedProductSp(TorsionDescriptor),
    /// The E-ring sp-group with `G/T ≅ Q`.
    ERingSp(SpGroupSpec),
    Sum(Box<GroupDescriptor>, Box<GroupDescriptor>),
}

/// Symbolic description of a possibly infinite abelian group plus user-asserted flags.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupDescriptor {
    shape: Shape,
    flags: BTreeSet<Flag>,
}

impl GroupDescriptor {
    pub fn new(shape: Shape, flags: BTreeSet<Flag>) -> Result<Self, ClassifyError> {
        let d = Self { shape, flags };
        if (d.flags.contains(&Flag::Reduced) || d.flags.contains(&Flag::AdjustedCotorsion))
            && d.shape_has_divisible_part()
        {
            return Err(ClassifyError::Contradiction(
                "a group with a nonzero divisible part cannot be reduced".into(),
            ));
        }
        Ok(d)
    }

    pub fn plain(shape: Shape) -> Self {
        Self {
            shape,
            flags: BTreeSet::new(),
        }
    }

    pub fn torsion(t: TorsionDescriptor) -> Self {
        Self::plain(Shape::Torsion(t))
    }

    pub fn finite(g: &FinAbGroup) -> Self {
        Self::torsion(TorsionDescriptor::from_group(g))
    }

    pub fn divisible(r0: Rank, rp: PRank) -> Self {
        Self::plain(Shape::Divisible(DivisibleDescriptor { r0, rp }))
    }

    pub fn torsion_free(divisible: bool, rank: Rank) -> Self {
        Self::plain(Shape::TorsionFree { divisible, rank })
    }

    pub fn product_sp(t: TorsionDescriptor) -> Self {
        Self::plain(Shape::ReducedProductSp(t))
    }

    pub fn ering_sp(spec: SpGroupSpec) -> Self {
        Self::plain(Shape::ERingSp(spec))
    }

    pub fn sum(a: GroupDescriptor, b: GroupDescriptor) -> Self {
        Self::plain(Shape::Sum(Box::new(a), Box::new(b)))
    }

    pub fn with_flags(self, flags: &[Flag]) -> Result<Self, ClassifyError> {
        let mut all = self.flags;
        all.extend(flags.iter().copied());
        Self::new(self.shape, all)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn flags(&self) -> &BTreeSet<Flag> {
        &self.flags
    }

    pub fn has_flag(&self, f: Flag) -> bool {
        self.flags.contains(&f)
    }

    fn shape_has_divisible_part(&self) -> bool {
        match &self.shape {
            Shape::Divisible(d) => !d.is_zero(),
            Shape::TorsionFree { divisible, rank } => *divisible && *rank != Rank::Finite(0),
            Shape::Sum(a, b) => a.shape_has_divisible_part() || b.shape_has_divisible_part(),
            _ => false,
        }
    }

    /// Reduced by shape or by assertion.
    pub fn is_reduced(&self) -> bool {
        if self.has_flag(Flag::Reduced) || self.has_flag(Flag::AdjustedCotorsion) {
            return true;
        }
        match &self.shape {
            Shape::Torsion(_) | Shape::ReducedProductSp(_) | Shape::ERingSp(_) => true,
            Shape::Divisible(d) => d.is_zero(),
            Shape::TorsionFree { rank, .. } => *rank == Rank::Finite(0),
            Shape::Sum(a, b) => a.is_reduced() && b.is_reduced(),
        }
    }

    pub fn is_divisible(&self) -> bool {
        match &self.shape {
            Shape::Divisible(_) => true,
            Shape::TorsionFree { divisible, rank } => *divisible || *rank == Rank::Finite(0),
            Shape::Sum(a, b) => a.is_divisible() && b.is_divisible(),
            Shape::Torsion(t) => t.is_finite() && t.explicit().values().all(FinAbGroup::is_empty),
            _ => false,
        }
    }

    pub fn is_torsion(&self) -> bool {
        match &self.shape {
            Shape::Torsion(_) => true,
            Shape::Divisible(d) => d.r0 == Rank::Finite(0),
            Shape::TorsionFree { rank, .. } => *rank == Rank::Finite(0),
            Shape::ReducedProductSp(t) => t.is_finite(),
            Shape::ERingSp(_) => false,
            Shape::Sum(a, b) => a.is_torsion() && b.is_torsion(),
        }
    }

    pub fn is_torsion_free(&self) -> bool {
        match &self.shape {
            Shape::TorsionFree { .. } => true,
            Shape::Divisible(d) => d.rp == PRank::Const(0),
            Shape::Torsion(t) => t.prime_support().finite.is_empty() && t.is_finite(),
            Shape::ReducedProductSp(t) => t.prime_support().finite.is_empty() && t.is_finite(),
            Shape::ERingSp(_) => false,
            Shape::Sum(a, b) => a.is_torsion_free() && b.is_torsion_free(),
        }
    }

    /// Primes `p` with `T_p ≠ 0`.
    pub(crate) fn torsion_support(&self) -> PrimeSupport {
        match &self.shape {
            Shape::Torsion(t) | Shape::ReducedProductSp(t) => t.prime_support(),
            Shape::TorsionFree { .. } => PrimeSupport::default(),
            Shape::Divisible(d) => match d.rp {
                PRank::Const(0) => PrimeSupport::default(),
                _ => PrimeSupport::all(),
            },
            Shape::ERingSp(spec) => PrimeSupport {
                finite: BTreeSet::new(),
                classes: vec![(spec.primes(), BTreeSet::new())],
            },
            Shape::Sum(a, b) => a.torsion_support().union(b.torsion_support()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_sets() {
        assert_eq!(
            (1..=4)
                .map(|i| PrimeSet::OddPositions.nth(i))
                .collect::<Vec<_>>(),
            vec![2, 5, 11, 17]
        );
        assert_eq!(
            (1..=4)
                .map(|i| PrimeSet::EvenPositions.nth(i))
                .collect::<Vec<_>>(),
            vec![3, 7, 13, 19]
        );
        assert_eq!(PrimeSet::EvenPositions.index_of(13), Some(3));
        assert_eq!(PrimeSet::OddPositions.index_of(13), None);
        assert!(PrimeSet::OddPositions.is_disjoint(PrimeSet::EvenPositions));
        assert!(!PrimeSet::All.is_disjoint(PrimeSet::EvenPositions));
    }

    #[test]
    fn components_follow_tail() {
        let t = TorsionDescriptor::tail_only(TailRule::LinearExp);
        assert_eq!(t.component(5), FinAbGroup::new(&[(5, 3)]).unwrap());
        let mut ex = BTreeMap::new();
        ex.insert(5, FinAbGroup::zero());
        let t =
            TorsionDescriptor::new(ex, PrimeSet::All, TailRule::const_exp(1, 2).unwrap()).unwrap();
        assert!(t.component(5).is_empty());
        assert_eq!(t.component(7), FinAbGroup::new(&[(7, 1), (7, 1)]).unwrap());
        assert!(!t.prime_support().contains(5));
        assert!(t.prime_support().contains(3));
    }

    #[test]
    fn explicit_components_must_be_primary() {
        let mut ex = BTreeMap::new();
        ex.insert(2, FinAbGroup::new(&[(3, 1)]).unwrap());
        assert!(TorsionDescriptor::finite(ex).is_err());
        assert!(TailRule::const_exp(0, 1).is_err());
    }

    #[test]
    fn contradictory_flags_rejected() {
        let d = GroupDescriptor::divisible(Rank::Finite(1), PRank::Const(0));
        assert!(d.clone().with_flags(&[Flag::Reduced]).is_err());
        assert!(d.with_flags(&[Flag::Cotorsion]).is_ok());
        let zero = GroupDescriptor::divisible(Rank::Finite(0), PRank::Const(0));
        assert!(zero.with_flags(&[Flag::Reduced]).is_ok());
        let s = GroupDescriptor::sum(
            GroupDescriptor::torsion_free(true, Rank::Finite(2)),
            GroupDescriptor::finite(&FinAbGroup::new(&[(2, 1)]).unwrap()),
        );
        assert!(s.with_flags(&[Flag::AdjustedCotorsion]).is_err());
    }

    #[test]
    fn support_disjointness() {
        let odd = PrimeSupport {
            finite: BTreeSet::new(),
            classes: vec![(PrimeSet::OddPositions, BTreeSet::new())],
        };
        let even = PrimeSupport {
            finite: BTreeSet::new(),
            classes: vec![(PrimeSet::EvenPositions, BTreeSet::new())],
        };
        assert!(odd.is_disjoint(&even));
        let mut with3 = odd.clone();
        with3.finite.insert(3);
        assert!(!with3.is_disjoint(&even));
        let mut with4 = odd.clone();
        with4.finite.insert(11);
        assert!(with4.is_disjoint(&even));
    }
}
