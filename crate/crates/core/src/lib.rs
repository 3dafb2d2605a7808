//! Quantum social choice: ranking spaces, quantum ballots, Quantum Condorcet
//! Voting, the natural extension to alternatives, and an axiom engine that
//! hunts for counterexamples.
//!
//! Everything numeric is generic over [`Scalar`], implemented for `f32`,
//! `f64` and `BigRational`. The aliases below fix the common choices.

pub mod axioms;
pub mod choice;
pub mod document;
pub mod error;
pub mod hilbert;
pub mod ranking;
pub mod registry;
pub mod scalar;
pub mod welfare;

pub use num_rational::BigRational;

pub use choice::{
    compose, natural_extension, qcvne, qcvne_rule, ChoiceExtension, ChoiceRule, NaturalExtension,
};
pub use document::{parse_profile, ProfileDocument};
pub use error::{Error, Result};
pub use hilbert::{AlternativeState, DensityOperator, ProfileState, Projector, RankingSpace};
pub use ranking::{Alternative, AlternativeSet, ClassicalProfile, Pair, Ranking, WeakOrder};
pub use registry::{BuiltRule, RuleSpec};
pub use scalar::Scalar;
pub use welfare::{qcv, Qcv, QcvParams, WelfareRule};

pub type Density = DensityOperator<f64>;
pub type Profile = ProfileState<f64>;
pub type Outcome = AlternativeState<f64>;
pub type Params = QcvParams<f64>;

pub type Density32 = DensityOperator<f32>;
pub type Profile32 = ProfileState<f32>;

pub type ExactDensity = DensityOperator<BigRational>;
pub type ExactProfile = ProfileState<BigRational>;
pub type ExactOutcome = AlternativeState<BigRational>;
pub type ExactParams = QcvParams<BigRational>;
