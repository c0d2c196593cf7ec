use std::collections::BTreeMap;
use std::str::FromStr;

use super::{SpError, SpGroupSpec};
use crate::classify::{Answer, GroupDescriptor, PrimeSet, TailRule, TorsionDescriptor};

/// The three worked mixed-group examples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Example {
    /// `∏_p Z(p)`: Sco-H with Sco-H torsion, but `G/T` is not Sco-H.
    Ex0,
    /// The E-ring over all primes with `e_n = n`: Sco-H, `T` is not.
    Ex1,
    /// `H ⊕ T_Q` over a partition of the primes: `G/T` Sco-H, neither `T` nor `G`.
    Ex3,
}

impl Example {
    pub const ALL: [Example; 3] = [Example::Ex0, Example::Ex1, Example::Ex3];

    pub fn id(self) -> &'static str {
        match self {
            Example::Ex0 => "ex0",
            Example::Ex1 => "ex1",
            Example::Ex3 => "ex3",
        }
    }

    pub fn descriptor(self) -> GroupDescriptor {
        match self {
            Example::Ex0 => {
                GroupDescriptor::product_sp(TorsionDescriptor::tail_only(TailRule::ConstExp {
                    c: 1,
                    r: 1,
                }))
            }
            Example::Ex1 => GroupDescriptor::ering_sp(SpGroupSpec::linear(PrimeSet::All)),
            Example::Ex3 => {
                let h = SpGroupSpec::constant(PrimeSet::OddPositions, 1).expect("valid");
                let tq = TorsionDescriptor::new(
                    BTreeMap::new(),
                    PrimeSet::EvenPositions,
                    TailRule::LinearExp,
                )
                .expect("valid");
                GroupDescriptor::sum(GroupDescriptor::ering_sp(h), GroupDescriptor::torsion(tq))
            }
        }
    }

    /// Known verdicts as `(key, answer)`, keys among `group`, `torsion`, `quotient`, `uniform`.
    pub fn expected(self) -> &'static [(&'static str, Answer)] {
        match self {
            Example::Ex0 => &[
                ("group", Answer::Yes),
                ("torsion", Answer::Yes),
                ("quotient", Answer::No),
            ],
            Example::Ex1 => &[
                ("group", Answer::Yes),
                ("torsion", Answer::No),
                ("uniform", Answer::No),
            ],
            Example::Ex3 => &[
                ("torsion", Answer::No),
                ("group", Answer::No),
                ("quotient", Answer::Yes),
            ],
        }
    }
}

impl FromStr for Example {
    type Err = SpError;

    fn from_str(s: &str) -> Result<Self, SpError> {
        Example::ALL
            .into_iter()
            .find(|e| e.id() == s)
            .ok_or_else(|| SpError::UnknownExample(s.to_string()))
    }
}

pub fn build_example(id: &str) -> Result<GroupDescriptor, SpError> {
    Ok(id.parse::<Example>()?.descriptor())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;

    #[test]
    fn examples_match_known_verdicts() {
        for ex in Example::ALL {
            let c = classify(&ex.descriptor());
            for &(key, want) in ex.expected() {
                let got = match key {
                    "group" => c.group.answer,
                    "torsion" => c.torsion.answer,
                    "quotient" => c.quotient.answer,
                    "uniform" => c.uniform.answer,
                    _ => unreachable!(),
                };
                assert_eq!(got, want, "{} {key}", ex.id());
            }
        }
    }

    #[test]
    fn unknown_id() {
        assert_eq!(
            build_example("ex2"),
            Err(SpError::UnknownExample("ex2".into()))
        );
    }
}
