//! Regret-theoretic choice between risky prospects when some outcomes
//! are unknown.
//!
//! See the guide in `book/` for a narrative walkthrough; every code
//! snippet there runs as a doc-test of this crate.

pub mod analysis;
pub mod audit;
pub mod choice;
pub mod functions;
pub mod medical;
pub mod prospect;
pub mod sum;

pub use choice::{AgentProfile, ChoiceError, Mode, PreferenceVerdict, Relation};
pub use functions::{FearFn, FunctionError, RegretQ, RegretR, UtilityFn};
pub use prospect::{
    DecisionMatrix, Interpretation, MatrixRow, Outcome, Prospect, ProspectError, UnknownMass,
};

use thiserror::Error;

/// Any error this crate can produce.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Prospect(#[from] ProspectError),
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Choice(#[from] ChoiceError),
    #[error(transparent)]
    Analysis(#[from] analysis::AnalysisError),
    #[error(transparent)]
    Audit(#[from] audit::AuditError),
}
