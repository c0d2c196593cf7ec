use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::descriptor::{
    DivisibleDescriptor, Flag, GroupDescriptor, PRank, Rank, Shape, TailRule, TorsionDescriptor,
};
use super::verdict::{Answer, CertBuilder, Evidence, Rule, Verdict};
use super::ClassifyError;
use crate::arith::pow_big;
use crate::finabel::{FinAbGroup, Homomorphism};

/// Tail primes listed in an unbounded-exponent witness.
const WITNESS_SAMPLES: usize = 3;
/// Tail primes tried when looking for a nonzero homomorphism.
const HOM_SEARCH_PRIMES: usize = 16;

const MIXED: &str = "genuinely mixed, no rule applies";

fn single(rule: Rule, subject: &str, answer: Answer, evidence: Evidence) -> Verdict {
    let mut b = CertBuilder::default();
    b.push(rule, subject, vec![], answer, evidence);
    b.conclude()
}

/// Least `e` with `card(T_p) ≤ p^e` for all `p`, if it exists.
fn exponent_bound(t: &TorsionDescriptor) -> Option<u64> {
    let explicit = t
        .explicit()
        .values()
        .map(FinAbGroup::total_exponent)
        .max()
        .unwrap_or(0);
    let tail = match t.tail() {
        TailRule::Zero => 0,
        TailRule::ConstExp { c, r } => c as u64 * r as u64,
        TailRule::LinearExp => return None,
    };
    Some(explicit.max(tail))
}

/// First few tail primes with their exponents.
fn tail_sample(t: &TorsionDescriptor, k: usize) -> Vec<(u64, u64)> {
    let mut out = Vec::with_capacity(k);
    let mut n = 1;
    while out.len() < k {
        let p = t.support().nth(n);
        if !t.explicit().contains_key(&p) {
            out.push((p, t.tail_exponent(n)));
        }
        n += 1;
    }
    out
}

fn torsion_verdict(t: &TorsionDescriptor, subject: &str) -> Verdict {
    match exponent_bound(t) {
        Some(e) => single(
            Rule::TorsionExponentBound,
            subject,
            Answer::Yes,
            Evidence::ExponentBound(e),
        ),
        None => single(
            Rule::TorsionExponentBound,
            subject,
            Answer::No,
            Evidence::UnboundedExponent(tail_sample(t, WITNESS_SAMPLES)),
        ),
    }
}

/// Reduced torsion group: bounded `log_p card(T_p)`.
pub fn torsion_is_scoh(t: &TorsionDescriptor) -> Verdict {
    torsion_verdict(t, "T")
}

fn divisible_verdict(d: &DivisibleDescriptor, subject: &str) -> Verdict {
    let (answer, evidence) = match (d.r0, d.rp) {
        (Rank::Infinite, _) => (Answer::No, Evidence::InfiniteRank),
        (_, PRank::Unbounded) => (Answer::No, Evidence::UnboundedPRank),
        (Rank::Finite(r0), PRank::Const(k)) => (Answer::Yes, Evidence::RankBound(r0.max(k))),
    };
    single(Rule::DivisibleRankBound, subject, answer, evidence)
}

pub fn divisible_is_scoh(d: &DivisibleDescriptor) -> Verdict {
    divisible_verdict(d, "D")
}

fn torsionfree_verdict(divisible: bool, rank: Rank, subject: &str) -> Verdict {
    let (answer, evidence) = match rank {
        Rank::Finite(0) => (Answer::Yes, Evidence::FiniteRank(0)),
        _ if !divisible => (Answer::No, Evidence::NotDivisible),
        Rank::Infinite => (Answer::No, Evidence::InfiniteRank),
        Rank::Finite(n) => (Answer::Yes, Evidence::FiniteRank(n)),
    };
    single(
        Rule::TorsionFreeDivisibleFiniteRank,
        subject,
        answer,
        evidence,
    )
}

pub fn torsionfree_is_scoh(divisible: bool, rank: Rank) -> Verdict {
    torsionfree_verdict(divisible, rank, "A")
}

/// A nonzero map `b_p -> a_p` at the first prime where both torsion parts are nonzero.
fn torsion_witness(b: &TorsionDescriptor, a: &TorsionDescriptor) -> Option<Homomorphism> {
    let mut primes: BTreeSet<u64> = b
        .explicit()
        .keys()
        .chain(a.explicit().keys())
        .copied()
        .collect();
    if !b.is_finite() {
        primes.extend((1..=HOM_SEARCH_PRIMES).map(|n| b.support().nth(n)));
    }
    primes.into_iter().find_map(|p| {
        let (bp, ap) = (b.component(p), a.component(p));
        if bp.is_empty() || ap.is_empty() {
            return None;
        }
        let mut m = vec![vec![BigInt::zero(); bp.len()]; ap.len()];
        let (oa, ob) = (ap.order(0), bp.order(0));
        m[0][0] = oa / oa.gcd(ob);
        Homomorphism::from_big(m, &bp, &ap).ok()
    })
}

/// Whether `Hom(b, a) = 0`. `No` only comes with an explicit nonzero map.
pub fn hom_trivial(b: &GroupDescriptor, a: &GroupDescriptor) -> Verdict {
    hom_verdict(b, a, "Hom(B,A)")
}

fn hom_verdict(b: &GroupDescriptor, a: &GroupDescriptor, subject: &str) -> Verdict {
    let yes = |ev| single(Rule::HomVanishing, subject, Answer::Yes, ev);
    if b.is_divisible() && a.is_reduced() {
        return yes(Evidence::DivisibleIntoReduced);
    }
    if b.is_torsion() && a.is_torsion_free() {
        return yes(Evidence::TorsionIntoTorsionFree);
    }
    // torsion maps into the torsion part, one prime at a time
    if b.is_torsion() && b.torsion_support().is_disjoint(&a.torsion_support()) {
        return yes(Evidence::DisjointSupport);
    }
    if let (Shape::Torsion(tb), Shape::Torsion(ta)) = (b.shape(), a.shape()) {
        if let Some(h) = torsion_witness(tb, ta) {
            return single(
                Rule::HomVanishing,
                subject,
                Answer::No,
                Evidence::NonzeroHom(h),
            );
        }
    }
    Verdict::unknown(
        vec![],
        "no vanishing rule applies and no nonzero map was found",
    )
}

fn combine(rule: Rule, subject: &str, left: Verdict, right: Verdict) -> Verdict {
    let answer = left.answer.and(right.answer);
    let mut b = CertBuilder::default();
    let l = b.absorb(&left);
    let r = b.absorb(&right);
    match (l, r, answer.is_definite()) {
        (Some(l), Some(r), true) => {
            b.push(rule, subject, vec![l, r], answer, Evidence::None);
            b.conclude()
        }
        _ => b.unknown("a part has no verdict"),
    }
}

/// Verdict on the torsion subgroup `T(g)`.
pub fn torsion_part_verdict(g: &GroupDescriptor) -> Verdict {
    torsion_part(g, "T(G)")
}

fn torsion_part(g: &GroupDescriptor, subject: &str) -> Verdict {
    match g.shape() {
        Shape::Torsion(t) | Shape::ReducedProductSp(t) => torsion_verdict(t, subject),
        Shape::TorsionFree { .. } => single(
            Rule::TorsionExponentBound,
            subject,
            Answer::Yes,
            Evidence::ExponentBound(0),
        ),
        Shape::Divisible(d) => divisible_verdict(
            &DivisibleDescriptor {
                r0: Rank::Finite(0),
                rp: d.rp,
            },
            subject,
        ),
        Shape::ERingSp(spec) => torsion_verdict(&spec.torsion(), subject),
        Shape::Sum(a, b) => combine(
            Rule::SumOfParts,
            subject,
            torsion_part(a, &format!("{subject}.left")),
            torsion_part(b, &format!("{subject}.right")),
        ),
    }
}

/// Verdict on the torsion-free quotient `g / T(g)`.
pub fn quotient_verdict(g: &GroupDescriptor) -> Verdict {
    quotient(g, "G/T")
}

fn quotient(g: &GroupDescriptor, subject: &str) -> Verdict {
    let rank = |r| torsionfree_verdict(true, r, subject);
    match g.shape() {
        Shape::Torsion(_) => rank(Rank::Finite(0)),
        Shape::TorsionFree { divisible, rank } => torsionfree_verdict(*divisible, *rank, subject),
        Shape::Divisible(d) => rank(d.r0),
        // the product of infinitely many nonzero components modulo their sum
        // is divisible of infinite rank
        Shape::ReducedProductSp(t) if t.is_finite() => rank(Rank::Finite(0)),
        Shape::ReducedProductSp(_) => rank(Rank::Infinite),
        Shape::ERingSp(_) => rank(Rank::Finite(1)),
        Shape::Sum(a, b) => combine(
            Rule::SumOfParts,
            subject,
            quotient(a, &format!("{subject}.left")),
            quotient(b, &format!("{subject}.right")),
        ),
    }
}

pub fn group_is_scoh(g: &GroupDescriptor) -> Verdict {
    scoh(g, "G")
}

fn scoh(g: &GroupDescriptor, subject: &str) -> Verdict {
    let direct = match g.shape() {
        Shape::Torsion(t) => return torsion_verdict(t, subject),
        Shape::TorsionFree { divisible, rank } => {
            return torsionfree_verdict(*divisible, *rank, subject)
        }
        Shape::Divisible(d) => return divisible_verdict(d, subject),
        Shape::ERingSp(_) => {
            return single(
                Rule::FieldQuotientERing,
                subject,
                Answer::Yes,
                Evidence::None,
            )
        }
        Shape::ReducedProductSp(t) => {
            let tv = torsion_verdict(t, &format!("T({subject})"));
            let mut b = CertBuilder::default();
            let i = b.absorb(&tv).expect("torsion verdicts are definite");
            b.push(
                Rule::ProductOfComponents,
                subject,
                vec![i],
                tv.answer,
                Evidence::None,
            );
            return b.conclude();
        }
        Shape::Sum(left, right) => sum_scoh(g, left, right, subject),
    };
    if let Some(v) = direct {
        return v;
    }
    if g.has_flag(Flag::AdjustedCotorsion) && g.is_reduced() {
        let tv = torsion_part(g, &format!("T({subject})"));
        let mut b = CertBuilder::default();
        if let Some(i) = b.absorb(&tv) {
            b.push(
                Rule::AdjustedCotorsion,
                subject,
                vec![i],
                tv.answer,
                Evidence::None,
            );
            return b.conclude();
        }
    }
    Verdict::unknown(vec![], MIXED)
}

fn sum_scoh(
    g: &GroupDescriptor,
    left: &GroupDescriptor,
    right: &GroupDescriptor,
    subject: &str,
) -> Option<Verdict> {
    let (ls, rs) = (format!("{subject}.left"), format!("{subject}.right"));
    let lv = scoh(left, &ls);
    let rv = scoh(right, &rs);
    let both = lv.answer.and(rv.answer);
    if lv.answer.is_definite() && rv.answer.is_definite() {
        for (from, to, fs, ts) in [(right, left, &rs, &ls), (left, right, &ls, &rs)] {
            let h = hom_verdict(from, to, &format!("Hom({fs},{ts})"));
            if h.answer != Answer::Yes {
                continue;
            }
            let mut b = CertBuilder::default();
            let hi = b.absorb(&h).expect("definite");
            let li = b.absorb(&lv).expect("definite");
            let ri = b.absorb(&rv).expect("definite");
            b.push(
                Rule::SplitInvariance,
                subject,
                vec![hi, li, ri],
                both,
                Evidence::None,
            );
            return Some(b.conclude());
        }
    }
    for part in [&lv, &rv] {
        if part.answer == Answer::No {
            let mut b = CertBuilder::default();
            let i = b.absorb(part).expect("definite");
            b.push(
                Rule::SummandClosure,
                subject,
                vec![i],
                Answer::No,
                Evidence::None,
            );
            return Some(b.conclude());
        }
    }
    let tv = torsion_part(g, &format!("T({subject})"));
    let qv = quotient(g, &format!("{subject}/T"));
    if tv.answer == Answer::Yes && qv.answer == Answer::Yes {
        let mut b = CertBuilder::default();
        let ti = b.absorb(&tv).expect("definite");
        let qi = b.absorb(&qv).expect("definite");
        b.push(
            Rule::TorsionAndQuotient,
            subject,
            vec![ti, qi],
            Answer::Yes,
            Evidence::None,
        );
        return Some(b.conclude());
    }
    None
}

/// Uniform strong co-Hopficity: for a Sco-H group, exactly when `T` is Sco-H.
pub fn is_uniformly_scoh_desc(g: &GroupDescriptor) -> Verdict {
    let gv = group_is_scoh(g);
    let mut b = CertBuilder::default();
    match gv.answer {
        Answer::Unknown => Verdict::unknown(
            gv.certificate,
            format!("Sco-H undecided: {}", gv.reason.unwrap_or_default()),
        ),
        Answer::No => {
            let i = b.absorb(&gv).expect("definite");
            b.push(
                Rule::UniformIffTorsion,
                "G",
                vec![i],
                Answer::No,
                Evidence::None,
            );
            b.conclude()
        }
        Answer::Yes => {
            let tv = torsion_part_verdict(g);
            let gi = b.absorb(&gv).expect("definite");
            match b.absorb(&tv) {
                Some(ti) => {
                    b.push(
                        Rule::UniformIffTorsion,
                        "G",
                        vec![gi, ti],
                        tv.answer,
                        Evidence::None,
                    );
                    b.conclude()
                }
                None => b.unknown("torsion part undecided"),
            }
        }
    }
}

/// A valid, not necessarily minimal, Sco-H bound.
///
/// `Ok(None)` when `g` is uniformly Sco-H but no bound rule covers its shape.
pub fn scoh_bound(g: &GroupDescriptor) -> Result<Option<u64>, ClassifyError> {
    let u = is_uniformly_scoh_desc(g);
    if u.answer != Answer::Yes {
        return Err(ClassifyError::NotUniform(format!(
            "uniform verdict is {}",
            u.answer
        )));
    }
    Ok(bound_of(g))
}

fn bound_of(g: &GroupDescriptor) -> Option<u64> {
    match g.shape() {
        Shape::Torsion(t) | Shape::ReducedProductSp(t) => exponent_bound(t),
        Shape::TorsionFree {
            rank: Rank::Finite(0),
            ..
        } => Some(0),
        Shape::TorsionFree {
            divisible: true,
            rank: Rank::Finite(m),
        } => Some(*m),
        Shape::TorsionFree { .. } => None,
        Shape::Divisible(DivisibleDescriptor {
            r0: Rank::Finite(r0),
            rp: PRank::Const(k),
        }) => Some(2 * r0.max(k)),
        Shape::Divisible(_) => None,
        Shape::ERingSp(spec) => spec.const_exponent().map(u64::from),
        Shape::Sum(a, b) => {
            let split =
                hom_trivial(b, a).answer == Answer::Yes || hom_trivial(a, b).answer == Answer::Yes;
            if split {
                Some(bound_of(a)? + bound_of(b)?)
            } else {
                None
            }
        }
    }
}

/// `p^{(m+1)^2}`: the largest `card(T_p)` compatible with Sco-H bound `m`.
pub fn necessity_card_bound(m: u64, p: u64) -> BigInt {
    let e = (m + 1) * (m + 1);
    pow_big(p, u32::try_from(e).expect("exponent fits u32"))
}

/// Algebraic compactness of a cotorsion Sco-H group.
pub fn cotorsion_infer(g: &GroupDescriptor) -> Result<Verdict, ClassifyError> {
    if !g.has_flag(Flag::Cotorsion) {
        return Err(ClassifyError::MissingPremise(
            "cotorsion flag is not set".into(),
        ));
    }
    let gv = group_is_scoh(g);
    if gv.answer != Answer::Yes {
        return Err(ClassifyError::MissingPremise(format!(
            "group is not known to be Sco-H (verdict {})",
            gv.answer
        )));
    }
    let subject = match g.shape() {
        Shape::ReducedProductSp(_) => "G = prod T_p",
        _ => "G",
    };
    let mut b = CertBuilder::default();
    let i = b.absorb(&gv).expect("definite");
    b.push(
        Rule::CotorsionCompact,
        subject,
        vec![i],
        Answer::Yes,
        Evidence::None,
    );
    Ok(b.conclude())
}

/// Every verdict the toolkit can derive for one descriptor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub group: Verdict,
    pub torsion: Verdict,
    pub quotient: Verdict,
    pub uniform: Verdict,
    pub bound: Option<u64>,
}

pub fn classify(g: &GroupDescriptor) -> Classification {
    let uniform = is_uniformly_scoh_desc(g);
    let bound = if uniform.answer == Answer::Yes {
        bound_of(g)
    } else {
        None
    };
    Classification {
        group: group_is_scoh(g),
        torsion: torsion_part_verdict(g),
        quotient: quotient_verdict(g),
        uniform,
        bound,
    }
}
