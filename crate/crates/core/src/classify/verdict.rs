use std::fmt;

use crate::finabel::Homomorphism;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    /// Three-valued conjunction.
    pub fn and(self, other: Answer) -> Answer {
        match (self, other) {
            (Answer::No, _) | (_, Answer::No) => Answer::No,
            (Answer::Yes, Answer::Yes) => Answer::Yes,
            _ => Answer::Unknown,
        }
    }

    pub fn is_definite(self) -> bool {
        self != Answer::Unknown
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "Yes",
            Answer::No => "No",
            Answer::Unknown => "Unknown",
        })
    }
}

/// Inference rules the classifier can fire.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Reduced torsion: Sco-H iff `card(T_p) ≤ p^e` for one `e` and all `p`.
    TorsionExponentBound,
    /// Divisible: Sco-H iff all ranks are bounded by one `n_0`.
    DivisibleRankBound,
    /// Torsion-free: Sco-H iff divisible of finite rank.
    TorsionFreeDivisibleFiniteRank,
    /// A sufficient condition for, or a witness against, `Hom(B, A) = 0`.
    HomVanishing,
    /// Reduced algebraically compact `∏ T_p`: Sco-H iff `T` is.
    ProductOfComponents,
    /// Subring of `∏ Z(p_i^{e_i})` over `T` with field quotient: Sco-H.
    FieldQuotientERing,
    /// `A ⊕ B` with `Hom(B, A) = 0`: Sco-H iff both summands are.
    SplitInvariance,
    /// A summand that is not Sco-H makes the sum not Sco-H.
    SummandClosure,
    /// `T` and `G/T` both Sco-H imply `G` Sco-H.
    TorsionAndQuotient,
    /// Reduced adjusted cotorsion: Sco-H iff `T` is.
    AdjustedCotorsion,
    /// Sco-H group: uniformly Sco-H iff `T` is Sco-H.
    UniformIffTorsion,
    /// Sco-H and cotorsion imply algebraically compact.
    CotorsionCompact,
    /// Torsion part or torsion-free quotient of a sum is the sum of the parts.
    SumOfParts,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::TorsionExponentBound => "torsion-exponent-bound",
            Rule::DivisibleRankBound => "divisible-rank-bound",
            Rule::TorsionFreeDivisibleFiniteRank => "torsion-free-divisible-finite-rank",
            Rule::HomVanishing => "hom-vanishing",
            Rule::ProductOfComponents => "product-of-components",
            Rule::FieldQuotientERing => "field-quotient-e-ring",
            Rule::SplitInvariance => "split-invariance",
            Rule::SummandClosure => "summand-closure",
            Rule::TorsionAndQuotient => "torsion-and-quotient",
            Rule::AdjustedCotorsion => "adjusted-cotorsion",
            Rule::UniformIffTorsion => "uniform-iff-torsion",
            Rule::CotorsionCompact => "cotorsion-compact",
            Rule::SumOfParts => "sum-of-parts",
        }
    }
}

/// Data a rule consumed besides earlier steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    None,
    /// Least `e` with `card(T_p) ≤ p^e` for every `p`.
    ExponentBound(u64),
    /// Tail primes with their `log_p card(T_p)`, growing without bound.
    UnboundedExponent(Vec<(u64, u64)>),
    /// `n_0` bounding every rank.
    RankBound(u64),
    FiniteRank(u64),
    InfiniteRank,
    UnboundedPRank,
    NotDivisible,
    DivisibleIntoReduced,
    TorsionIntoTorsionFree,
    DisjointSupport,
    NonzeroHom(Homomorphism),
    /// `(n, stab index of multiplication by p_n z)` for the first few `n`.
    StabWitnesses(Vec<(usize, u64)>),
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::None => Ok(()),
            Evidence::ExponentBound(e) => write!(f, "e={e}"),
            Evidence::UnboundedExponent(v) => {
                let parts: Vec<String> = v.iter().map(|(p, e)| format!("{p}^{e}")).collect();
                write!(f, "unbounded card(T_p): {} ...", parts.join(", "))
            }
            Evidence::RankBound(n) => write!(f, "n0={n}"),
            Evidence::FiniteRank(n) => write!(f, "rank={n}"),
            Evidence::InfiniteRank => write!(f, "infinite rank"),
            Evidence::UnboundedPRank => write!(f, "unbounded p-ranks"),
            Evidence::NotDivisible => write!(f, "not divisible"),
            Evidence::DivisibleIntoReduced => write!(f, "divisible into reduced"),
            Evidence::TorsionIntoTorsionFree => write!(f, "torsion into torsion-free"),
            Evidence::DisjointSupport => write!(f, "disjoint prime supports"),
            Evidence::NonzeroHom(h) => {
                write!(f, "nonzero hom {} from {} to {}", h, h.source(), h.target())
            }
            Evidence::StabWitnesses(v) => {
                let parts: Vec<String> = v.iter().map(|(n, s)| format!("p_{n}z:{s}")).collect();
                write!(f, "stab indices {}", parts.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleStep {
    pub rule: Rule,
    /// What the step is about, e.g. `G`, `G.left`, `T(G)`, `G/T`.
    pub subject: String,
    /// Indices of earlier steps this one consumes.
    pub premises: Vec<usize>,
    pub conclusion: Answer,
    pub evidence: Evidence,
}

/// Three-valued answer with the ordered list of rule applications behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub answer: Answer,
    pub certificate: Vec<RuleStep>,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("step {step}: {msg}")]
pub struct ReplayError {
    pub step: usize,
    pub msg: String,
}

impl Verdict {
    pub fn unknown(certificate: Vec<RuleStep>, reason: impl Into<String>) -> Self {
        Self {
            answer: Answer::Unknown,
            certificate,
            reason: Some(reason.into()),
        }
    }

    /// Verdict whose answer is the conclusion of the last step.
    pub(crate) fn concluded(certificate: Vec<RuleStep>) -> Self {
        let answer = certificate.last().expect("nonempty certificate").conclusion;
        Self {
            answer,
            certificate,
            reason: None,
        }
    }

    /// Re-checks every step against its rule and returns the answer the
    /// certificate supports.
    pub fn replay(&self) -> Result<Answer, ReplayError> {
        for (i, step) in self.certificate.iter().enumerate() {
            check_step(&self.certificate, i, step).map_err(|msg| ReplayError { step: i, msg })?;
        }
        match self.answer {
            Answer::Unknown => {
                if self.reason.is_none() {
                    return Err(ReplayError {
                        step: self.certificate.len(),
                        msg: "unknown verdict without a reason".into(),
                    });
                }
                Ok(Answer::Unknown)
            }
            a => {
                let last = self.certificate.last().ok_or(ReplayError {
                    step: 0,
                    msg: "definite verdict with empty certificate".into(),
                })?;
                if last.conclusion != a {
                    return Err(ReplayError {
                        step: self.certificate.len() - 1,
                        msg: format!(
                            "certificate concludes {} but verdict says {}",
                            last.conclusion, a
                        ),
                    });
                }
                Ok(a)
            }
        }
    }
}

fn check_step(cert: &[RuleStep], i: usize, step: &RuleStep) -> Result<(), String> {
    let mut prem = Vec::with_capacity(step.premises.len());
    for &p in &step.premises {
        if p >= i {
            return Err(format!("premise {p} does not precede the step"));
        }
        prem.push(cert[p].conclusion);
    }
    let c = step.conclusion;
    let ev = &step.evidence;
    let expect = |want: Answer| {
        if c == want {
            Ok(())
        } else {
            Err(format!(
                "{} should conclude {want}, found {c}",
                step.rule.tag()
            ))
        }
    };
    let arity = |n: usize| {
        if prem.len() == n {
            Ok(())
        } else {
            Err(format!(
                "{} takes {n} premises, found {}",
                step.rule.tag(),
                prem.len()
            ))
        }
    };
    match step.rule {
        Rule::TorsionExponentBound => {
            arity(0)?;
            match ev {
                Evidence::ExponentBound(_) => expect(Answer::Yes),
                Evidence::UnboundedExponent(v) if !v.is_empty() => expect(Answer::No),
                _ => Err("needs an exponent bound or an unbounded witness".into()),
            }
        }
        Rule::DivisibleRankBound => {
            arity(0)?;
            match ev {
                Evidence::RankBound(_) => expect(Answer::Yes),
                Evidence::InfiniteRank | Evidence::UnboundedPRank => expect(Answer::No),
                _ => Err("needs a rank bound or an unbounded rank".into()),
            }
        }
        Rule::TorsionFreeDivisibleFiniteRank => {
            arity(0)?;
            match ev {
                Evidence::FiniteRank(_) => expect(Answer::Yes),
                Evidence::InfiniteRank | Evidence::NotDivisible => expect(Answer::No),
                _ => Err("needs a rank or a failure witness".into()),
            }
        }
        Rule::HomVanishing => {
            arity(0)?;
            match ev {
                Evidence::DivisibleIntoReduced
                | Evidence::TorsionIntoTorsionFree
                | Evidence::DisjointSupport => expect(Answer::Yes),
                Evidence::NonzeroHom(h) if !h.is_zero() => expect(Answer::No),
                _ => Err("needs a vanishing reason or a nonzero homomorphism".into()),
            }
        }
        Rule::ProductOfComponents | Rule::AdjustedCotorsion => {
            arity(1)?;
            if !prem[0].is_definite() {
                return Err("premise must be definite".into());
            }
            expect(prem[0])
        }
        Rule::FieldQuotientERing => {
            arity(0)?;
            expect(Answer::Yes)
        }
        Rule::SplitInvariance => {
            arity(3)?;
            if prem[0] != Answer::Yes {
                return Err("needs Hom(B, A) = 0".into());
            }
            let c2 = prem[1].and(prem[2]);
            if !c2.is_definite() {
                return Err("summand verdicts do not decide the sum".into());
            }
            expect(c2)
        }
        Rule::SummandClosure => {
            arity(1)?;
            if prem[0] != Answer::No {
                return Err("needs a summand that is not Sco-H".into());
            }
            expect(Answer::No)
        }
        Rule::TorsionAndQuotient => {
            arity(2)?;
            if prem != [Answer::Yes, Answer::Yes] {
                return Err("needs T and G/T both Sco-H".into());
            }
            expect(Answer::Yes)
        }
        Rule::UniformIffTorsion => match prem.as_slice() {
            [Answer::Yes, t] if t.is_definite() => expect(*t),
            [Answer::No] => expect(Answer::No),
            _ => Err("needs G Sco-H with a definite T verdict, or G not Sco-H".into()),
        },
        Rule::CotorsionCompact => {
            arity(1)?;
            if prem[0] != Answer::Yes {
                return Err("needs G Sco-H".into());
            }
            expect(Answer::Yes)
        }
        Rule::SumOfParts => {
            arity(2)?;
            let c2 = prem[0].and(prem[1]);
            if !c2.is_definite() {
                return Err("parts do not decide the sum".into());
            }
            expect(c2)
        }
    }
}

/// Accumulates steps from sub-verdicts, renumbering their premises.
#[derive(Default)]
pub(crate) struct CertBuilder {
    steps: Vec<RuleStep>,
}

impl CertBuilder {
    /// Appends `v`'s steps; returns the index of its concluding step when definite.
    pub fn absorb(&mut self, v: &Verdict) -> Option<usize> {
        let off = self.steps.len();
        for s in &v.certificate {
            let mut s = s.clone();
            s.premises.iter_mut().for_each(|p| *p += off);
            self.steps.push(s);
        }
        (v.answer.is_definite() && !v.certificate.is_empty()).then(|| self.steps.len() - 1)
    }

    pub fn push(
        &mut self,
        rule: Rule,
        subject: &str,
        premises: Vec<usize>,
        conclusion: Answer,
        evidence: Evidence,
    ) -> usize {
        self.steps.push(RuleStep {
            rule,
            subject: subject.to_string(),
            premises,
            conclusion,
            evidence,
        });
        self.steps.len() - 1
    }

    pub fn conclude(self) -> Verdict {
        Verdict::concluded(self.steps)
    }

    pub fn unknown(self, reason: impl Into<String>) -> Verdict {
        Verdict::unknown(self.steps, reason)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_valued_and() {
        assert_eq!(Answer::Yes.and(Answer::Yes), Answer::Yes);
        assert_eq!(Answer::Unknown.and(Answer::No), Answer::No);
        assert_eq!(Answer::Unknown.and(Answer::Yes), Answer::Unknown);
    }

    #[test]
    fn replay_rejects_tampered_certificates() {
        let mut b = CertBuilder::default();
        let t = b.push(
            Rule::TorsionExponentBound,
            "T",
            vec![],
            Answer::Yes,
            Evidence::ExponentBound(1),
        );
        b.push(
            Rule::ProductOfComponents,
            "G",
            vec![t],
            Answer::Yes,
            Evidence::None,
        );
        let v = b.conclude();
        assert_eq!(v.replay(), Ok(Answer::Yes));

        let mut bad = v.clone();
        bad.certificate[1].conclusion = Answer::No;
        bad.answer = Answer::No;
        assert!(bad.replay().is_err());

        let mut bad = v.clone();
        bad.certificate[0].evidence = Evidence::UnboundedExponent(vec![(2, 1)]);
        assert!(bad.replay().is_err());

        let mut bad = v;
        bad.answer = Answer::No;
        assert!(bad.replay().is_err());
    }

    #[test]
    fn unknown_needs_reason() {
        let v = Verdict {
            answer: Answer::Unknown,
            certificate: vec![],
            reason: None,
        };
        assert!(v.replay().is_err());
        assert_eq!(
            Verdict::unknown(vec![], "open").replay(),
            Ok(Answer::Unknown)
        );
    }
}
