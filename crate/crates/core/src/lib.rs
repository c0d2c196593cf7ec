//! Exact computation of endomorphism image-chain stabilization for abelian
//! groups, together with decision procedures for strong and uniform strong
//! co-Hopficity.
//!
//! * [`finabel`]: finite abelian groups, homomorphisms, canonical subgroups,
//!   stabilization indices, exhaustive endomorphism scans.
//! * [`classify`]: symbolic descriptors of possibly infinite groups and
//!   three-valued verdicts with replayable certificates.
//! * [`spgroup`]: the E-ring sp-group model where every endomorphism is a
//!   multiplication, with a closed-form stabilization index.
//! * [`oracle`]: brute-force checks of the quantitative bounds.
//! * [`cli`]: descriptor grammar, reports and the command driver.

pub mod arith;
pub mod classify;
pub mod cli;
pub mod finabel;
pub mod oracle;
pub mod par;
pub mod spgroup;

pub use par::Parallelism;
