//! Evidential fusion kernel.
//!
//! Frames of discernment with power-set subsets encoded as bitmasks, basic
//! belief assignments, PCR5/PCR6 combination over any number of sources,
//! reliability and importance discounting, DSmP/BetP probabilistic
//! transformations, interval-valued and qualitative-label masses, and
//! decision-support evaluation of named hypotheses.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bba;
pub mod decision;
pub mod discounting;
mod error;
pub mod frames;
pub mod fusion;
pub mod intervals;
pub mod qualitative;
mod scalar;
pub mod transforms;

pub use bba::{BeliefInterval, MassFunction, NORMALIZATION_TOLERANCE};
pub use decision::{
    compare_subsystems, evaluate, evaluate_interval, Decision, DecisionHypothesis,
    HypothesisEvaluation, IntervalHypothesisEvaluation, SubsystemComparison, SubsystemMetrics,
};
pub use discounting::{
    importance_discount, importance_fuse, reliability_discount, DiscountProfile,
    ImportanceFusion,
};
pub use error::{Error, Result};
pub use frames::{Frame, FrameId, Subset, MAX_ATOMS};
pub use fusion::{
    conjunctive, fuse, pcr5, pcr6, ConflictLedgerEntry, FusionOptions, FusionResult, FusionRule,
};
pub use intervals::{
    interval_bel_pl, interval_dsmp, interval_fuse, interval_pcr5, interval_pcr6, IntervalFusion,
    IntervalMass, IntervalMassFunction,
};
pub use qualitative::{
    crude_round, qualitative_dsmp, qualitative_fuse, LabelMass, LabelMode, LabelSet,
    QualitativeBelief, QualitativeFusion, QualitativeSource, RefinedLabel,
};
pub use scalar::MassScalar;
pub use transforms::{betp, dsmp, entropy, pic, ProbabilityDistribution, DEFAULT_EPSILON};

#[cfg(test)]
pub(crate) mod testutil;
