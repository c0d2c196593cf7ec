//! Brute-force checks of the quantitative statements on small finite groups.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::prime_divisors;
use crate::finabel::table::SmallGroup;
use crate::finabel::{
    max_stab_index_with, scan_tables, stab_index, sum_decomposition_check, EndoSpace, FinAbError,
    FinAbGroup, Homomorphism,
};
use crate::par::{map_chunks, ranges, Parallelism};
use crate::spgroup::{stab_index_mul, truncate, SpElement, SpError, SpGroupSpec};

/// Large enough for every group of at most 32 elements (`Z(2)^5` has `2^25` endomorphisms).
pub const DEFAULT_CAP: u64 = 1 << 26;

const CHUNK: u64 = 1 << 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0} is not a nonzero p-group")]
    NotPGroup(FinAbGroup),
    #[error("rank shift needs a homocyclic group, got {0}")]
    NotHomocyclic(FinAbGroup),
    #[error(transparent)]
    Group(#[from] FinAbError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WitnessKind {
    /// Nilpotent shift `e_j ↦ e_{j+1}` on a homocyclic group: index = rank.
    RankShift,
    /// Multiplication by `p`: index = largest exponent.
    MultByP,
}

impl WitnessKind {
    pub fn keyword(self) -> &'static str {
        match self {
            WitnessKind::RankShift => "rank-shift",
            WitnessKind::MultByP => "mult-by-p",
        }
    }
}

pub fn construct_witness(g: &FinAbGroup, kind: WitnessKind) -> Result<Homomorphism, OracleError> {
    let p = g
        .p_group_prime()
        .ok_or_else(|| OracleError::NotPGroup(g.clone()))?;
    match kind {
        WitnessKind::MultByP => Ok(Homomorphism::scalar(g, p as i64)),
        WitnessKind::RankShift => {
            if !g.is_homocyclic() {
                return Err(OracleError::NotHomocyclic(g.clone()));
            }
            let k = g.len();
            let mut m = vec![vec![BigInt::zero(); k]; k];
            for j in 0..k.saturating_sub(1) {
                m[j + 1][j] = 1.into();
            }
            Ok(Homomorphism::from_big(m, g, g)?)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheckResult {
    pub group: FinAbGroup,
    pub exhaustive_max: u32,
    /// `e` with `card = p^e`.
    pub theoretical_bound: u64,
    /// First endomorphism attaining `exhaustive_max`.
    pub witness: Homomorphism,
    /// Stabilization index reached by each applicable constructed witness.
    pub lower_witnesses: BTreeMap<WitnessKind, u32>,
}

impl BoundCheckResult {
    pub fn holds(&self) -> bool {
        u64::from(self.exhaustive_max) <= self.theoretical_bound
    }
}

pub fn verify_exponent_bound(g: &FinAbGroup, cap: u64) -> Result<BoundCheckResult, OracleError> {
    verify_exponent_bound_with(g, cap, Parallelism::default())
}

pub fn verify_exponent_bound_with(
    g: &FinAbGroup,
    cap: u64,
    par: Parallelism,
) -> Result<BoundCheckResult, OracleError> {
    if g.p_group_prime().is_none() {
        return Err(OracleError::NotPGroup(g.clone()));
    }
    let (exhaustive_max, witness) = max_stab_index_with(g, cap, par)?;
    let mut lower_witnesses = BTreeMap::new();
    for kind in [WitnessKind::RankShift, WitnessKind::MultByP] {
        if let Ok(w) = construct_witness(g, kind) {
            lower_witnesses.insert(kind, stab_index(&w)?);
        }
    }
    Ok(BoundCheckResult {
        group: g.clone(),
        exhaustive_max,
        theoretical_bound: g.total_exponent(),
        witness,
        lower_witnesses,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub results: Vec<BoundCheckResult>,
    pub failures: Vec<(FinAbGroup, OracleError)>,
}

impl SweepReport {
    pub fn violations(&self) -> impl Iterator<Item = &BoundCheckResult> {
        self.results.iter().filter(|r| !r.holds())
    }

    pub fn violation_count(&self) -> usize {
        self.violations().count()
    }

    /// Largest `exhaustive_max / e` over the checked groups.
    pub fn max_ratio(&self) -> Option<Ratio<u64>> {
        self.results
            .iter()
            .filter(|r| r.theoretical_bound > 0)
            .map(|r| Ratio::new(u64::from(r.exhaustive_max), r.theoretical_bound))
            .max()
    }

    pub fn is_clean(&self) -> bool {
        self.failures.is_empty() && self.violation_count() == 0
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<28} {:>4} {:>4} {:>10} {:>9}  witness",
            "group", "max", "e", "rank-shift", "mult-by-p"
        )?;
        for r in &self.results {
            let lw = |k| {
                r.lower_witnesses
                    .get(&k)
                    .map_or("-".to_string(), u32::to_string)
            };
            writeln!(
                f,
                "{:<28} {:>4} {:>4} {:>10} {:>9}  {}{}",
                r.group.to_string(),
                r.exhaustive_max,
                r.theoretical_bound,
                lw(WitnessKind::RankShift),
                lw(WitnessKind::MultByP),
                r.witness,
                if r.holds() { "" } else { "  VIOLATION" }
            )?;
        }
        for (g, e) in &self.failures {
            writeln!(f, "{g}: failed: {e}")?;
        }
        let ratio = self.max_ratio().map_or("-".to_string(), |r| r.to_string());
        writeln!(
            f,
            "groups={} violations={} failures={} max_ratio={}",
            self.results.len(),
            self.violation_count(),
            self.failures.len(),
            ratio
        )
    }
}

/// Runs [`verify_exponent_bound_with`] on every group; per-group errors are collected, not fatal.
pub fn sweep(groups: &[FinAbGroup], cap: u64, par: Parallelism) -> SweepReport {
    let mut report = SweepReport::default();
    for g in groups {
        match verify_exponent_bound_with(g, cap, par) {
            Ok(r) => report.results.push(r),
            Err(e) => report.failures.push((g.clone(), e)),
        }
    }
    report
}

/// Closed-form index against the lattice computation on the first `n` components.
pub fn cross_check_truncation(
    spec: &SpGroupSpec,
    alpha: &SpElement,
    n: usize,
) -> Result<bool, SpError> {
    let t = truncate(spec, n)?;
    let iterative = stab_index(&t.mul_endo(alpha))?;
    let report = stab_index_mul(alpha, spec);
    let closed = (1..=n).map(|i| report.step_at(i)).max().unwrap_or(0);
    Ok(u64::from(iterative) == closed)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub endomorphisms: u64,
    pub checks: u64,
    /// `(endomorphism index, n)` where the sum test disagreed with `n ≥ stab index`.
    pub counterexamples: Vec<(u64, u32)>,
}

fn expected_sum(n: u32, stab: u32) -> bool {
    n == 0 || n >= stab
}

/// For every endomorphism `f` and `1 ≤ n ≤ stab(f) + 2`: `im f^n + ker f^n = G` iff `n ≥ stab(f)`.
///
/// `n = 0` is checked too, where `f^0` is the identity and the sum is always `G`.
pub fn equivalence_check(
    g: &FinAbGroup,
    cap: u64,
    par: Parallelism,
) -> Result<EquivalenceReport, OracleError> {
    let space = EndoSpace::new(g);
    let total = match space.count().to_u64() {
        Some(c) if c <= cap => c,
        _ => {
            return Err(FinAbError::TooManyEndomorphisms {
                count: space.count().clone(),
                cap,
            }
            .into())
        }
    };
    let chunks = ranges(total, CHUNK);
    let parts: Vec<EquivalenceReport> = match SmallGroup::new(g) {
        Some(small) => map_chunks(par, chunks.len(), |c| {
            let (s, e) = chunks[c];
            let mut flags = Vec::new();
            scan_tables(
                &small,
                g,
                s,
                e,
                EquivalenceReport::default(),
                |rep, idx, t| {
                    let stab = small.stab_index(t);
                    small.sum_decomposition(t, stab + 2, &mut flags);
                    rep.endomorphisms += 1;
                    rep.checks += flags.len() as u64;
                    for (n, &ok) in flags.iter().enumerate() {
                        if ok != expected_sum(n as u32, stab) {
                            rep.counterexamples.push((idx, n as u32));
                        }
                    }
                },
            )
        }),
        None => map_chunks(par, chunks.len(), |c| {
            let (s, e) = chunks[c];
            let mut rep = EquivalenceReport::default();
            for idx in s..e {
                let f = space.endo_at(&BigInt::from(idx));
                let stab = stab_index(&f).expect("endomorphism");
                rep.endomorphisms += 1;
                for n in 0..=stab + 2 {
                    rep.checks += 1;
                    if sum_decomposition_check(&f, n).expect("endomorphism")
                        != expected_sum(n, stab)
                    {
                        rep.counterexamples.push((idx, n));
                    }
                }
            }
            rep
        }),
    };
    Ok(parts
        .into_iter()
        .fold(EquivalenceReport::default(), |mut acc, p| {
            acc.endomorphisms += p.endomorphisms;
            acc.checks += p.checks;
            acc.counterexamples.extend(p.counterexamples);
            acc
        }))
}

/// `A ⊕ B` against the sum of the exponent bounds of the summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionResult {
    pub left: FinAbGroup,
    pub right: FinAbGroup,
    pub left_bound: u64,
    pub right_bound: u64,
    pub exhaustive_max: u32,
    pub witness: Homomorphism,
}

impl CompositionResult {
    pub fn holds(&self) -> bool {
        u64::from(self.exhaustive_max) <= self.left_bound + self.right_bound
    }
}

impl fmt::Display for CompositionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}: max={} bound={}+{} witness={}{}",
            self.left,
            self.right,
            self.exhaustive_max,
            self.left_bound,
            self.right_bound,
            self.witness,
            if self.holds() { "" } else { " VIOLATION" }
        )
    }
}

/// Both summands must be p-groups; their bounds are their exponents `e`.
pub fn composition_check(
    a: &FinAbGroup,
    b: &FinAbGroup,
    cap: u64,
    par: Parallelism,
) -> Result<CompositionResult, OracleError> {
    for g in [a, b] {
        if g.p_group_prime().is_none() {
            return Err(OracleError::NotPGroup(g.clone()));
        }
    }
    let (exhaustive_max, witness) = max_stab_index_with(&a.direct_sum(b), cap, par)?;
    Ok(CompositionResult {
        left: a.clone(),
        right: b.clone(),
        left_bound: a.total_exponent(),
        right_bound: b.total_exponent(),
        exhaustive_max,
        witness,
    })
}

/// Partitions of `n` into nonincreasing parts, in lexicographically decreasing order.
fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max.min(n)).rev() {
            cur.push(part);
            go(n - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Every nonzero p-group of cardinality at most `max_card`, one per isomorphism type.
pub fn p_groups(p: u64, max_card: u64) -> Vec<FinAbGroup> {
    let mut out = Vec::new();
    let mut e = 1u32;
    while p.checked_pow(e).is_some_and(|c| c <= max_card) {
        for parts in partitions(e) {
            let f: Vec<(u64, u32)> = parts.iter().map(|&x| (p, x)).collect();
            out.push(FinAbGroup::new(&f).expect("p is prime"));
        }
        e += 1;
    }
    out
}

/// Every finite abelian group of cardinality at most `max_card` (including the zero group),
/// one per isomorphism type, ordered by cardinality.
pub fn all_groups(max_card: u64) -> Vec<FinAbGroup> {
    let mut out = Vec::new();
    for n in 1..=max_card {
        let mut acc = vec![FinAbGroup::zero()];
        for p in prime_divisors(&BigInt::from(n)).expect("fits u64") {
            let mut e = 0u32;
            let mut m = n;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            let comps: Vec<FinAbGroup> = partitions(e)
                .into_iter()
                .map(|parts| {
                    FinAbGroup::new(&parts.iter().map(|&x| (p, x)).collect::<Vec<_>>())
                        .expect("prime")
                })
                .collect();
            acc = acc
                .iter()
                .flat_map(|a| comps.iter().map(move |c| a.direct_sum(c)))
                .collect();
        }
        out.extend(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[(u64, u32)]) -> FinAbGroup {
        FinAbGroup::new(f).unwrap()
    }

    #[test]
    fn exponent_bound_examples() {
        let r = verify_exponent_bound(&g(&[(2, 3)]), 100).unwrap();
        assert_eq!((r.exhaustive_max, r.theoretical_bound), (3, 3));
        let r = verify_exponent_bound(&g(&[(2, 1), (2, 1)]), 100).unwrap();
        assert!(r.exhaustive_max <= 2);
        assert_eq!(r.theoretical_bound, 2);
        let r = verify_exponent_bound(&g(&[(2, 1)]), 100).unwrap();
        assert_eq!((r.exhaustive_max, r.theoretical_bound), (1, 1));
        assert!(matches!(
            verify_exponent_bound(&g(&[(2, 1), (3, 1)]), 100),
            Err(OracleError::NotPGroup(_))
        ));
    }

    #[test]
    fn witnesses() {
        let w = construct_witness(&g(&[(2, 1); 3]), WitnessKind::RankShift).unwrap();
        assert_eq!(stab_index(&w).unwrap(), 3);
        let w = construct_witness(&g(&[(3, 4)]), WitnessKind::MultByP).unwrap();
        assert_eq!(stab_index(&w).unwrap(), 4);
        assert!(matches!(
            construct_witness(&g(&[(2, 2), (2, 1)]), WitnessKind::RankShift),
            Err(OracleError::NotHomocyclic(_))
        ));
    }

    #[test]
    fn sweep_reports() {
        assert_eq!(
            sweep(&[], 10, Parallelism::Sequential),
            SweepReport::default()
        );
        let rep = sweep(
            &[g(&[(2, 2)]), g(&[(2, 1), (3, 1)])],
            100,
            Parallelism::Sequential,
        );
        assert_eq!(rep.results.len(), 1);
        assert_eq!(rep.failures.len(), 1);
        assert_eq!(rep.max_ratio(), Some(Ratio::new(1, 1)));
    }

    #[test]
    fn group_lists() {
        // partition numbers 1, 2, 3, 5, 7
        assert_eq!(p_groups(2, 32).len(), 18);
        assert_eq!(p_groups(3, 27).len(), 6);
        // number of abelian groups of order 1..=8: 1,1,1,2,1,1,1,3
        assert_eq!(all_groups(8).len(), 11);
        for (i, grp) in all_groups(12).iter().enumerate() {
            assert!(grp.cardinality() <= BigInt::from(12), "{i}");
        }
    }

    #[test]
    fn truncation_examples() {
        let s = SpGroupSpec::linear(crate::classify::PrimeSet::All);
        assert!(cross_check_truncation(&s, &SpElement::one(), 5).unwrap());
        assert!(cross_check_truncation(&s, &SpElement::integer(5), 5).unwrap());
        let t = SpElement::torsion([(2, BigInt::from(3))].into_iter().collect(), &s).unwrap();
        assert!(cross_check_truncation(&s, &t, 4).unwrap());
    }

    #[test]
    fn equivalence_small() {
        for grp in all_groups(16) {
            let rep = equivalence_check(&grp, DEFAULT_CAP, Parallelism::Sequential).unwrap();
            assert!(rep.counterexamples.is_empty(), "{grp}");
        }
    }
}
