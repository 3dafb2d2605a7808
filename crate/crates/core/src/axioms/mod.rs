//! Sample-based axiom checks for welfare and choice rules.

pub mod checks;
pub mod family;
pub mod manipulation;
pub mod preference;
pub mod report;
pub mod sampler;
pub mod suites;

pub use checks::{
    check_dictatorship, check_iia, check_non_dictatorship, check_onto, check_qic,
    check_qic_preservation, check_sharp_dictatorship_preservation, check_unanimity,
    unanimous_topped_by, CheckConfig,
};
pub use family::{CandidateFamily, FamilySpec};
pub use manipulation::{
    choice_manipulation_witness, find_manipulations, welfare_manipulation_witness, Clause,
    ManipulationWitness, Observer, RuleRef, Target,
};
pub use preference::{classify_preference, Preference, PreferenceKind};
pub use report::{AxiomReport, Direction, SuiteReport, SuiteVerdict, Verdict, Witness};
pub use sampler::ProfileSampler;
pub use suites::{run_arrow_suite, run_gs_suite};
