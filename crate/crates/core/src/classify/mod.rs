//! Symbolic descriptors of possibly infinite abelian groups and decision
//! procedures for (uniform) strong co-Hopficity.
//!
//! Every decision is a [`Verdict`]: `Yes`, `No` or `Unknown`, together with
//! the ordered list of rule applications that produced it. Certificates can be
//! re-checked step by step with [`Verdict::replay`].

mod descriptor;
mod rules;
mod verdict;

use thiserror::Error;

pub use descriptor::{
    DivisibleDescriptor, Flag, GroupDescriptor, PRank, PrimeSet, Rank, Shape, TailRule,
    TorsionDescriptor,
};
pub use rules::{
    classify, cotorsion_infer, divisible_is_scoh, group_is_scoh, hom_trivial,
    is_uniformly_scoh_desc, necessity_card_bound, quotient_verdict, scoh_bound, torsion_is_scoh,
    torsion_part_verdict, torsionfree_is_scoh, Classification,
};
pub use verdict::{Answer, Evidence, ReplayError, Rule, RuleStep, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("invalid descriptor: {0}")]
    Invalid(String),
    #[error("contradictory descriptor: {0}")]
    Contradiction(String),
    #[error("group is not known to be uniformly Sco-H: {0}")]
    NotUniform(String),
    #[error("missing premise: {0}")]
    MissingPremise(String),
}
