//! Constructive structure results for liouvillian extensions: membership in the
//! ring of solutions, presentations of finitely generated differential algebras,
//! resolution into first-order steps and the simplicity test for Riccati rings.

mod membership;
mod mpoly;
mod resolve;
mod simdifalg;
mod simplicity;

pub use membership::{field_membership, t_membership, RationalExpr};
pub use mpoly::MPoly;
pub use resolve::{tower_resolve, ModeNote, Resolution, ResolutionStep, ResolveConfig, ResolveMode};
pub use simdifalg::{simdifalg_present, simdifalg_present_with, Presentation};
pub use simplicity::{is_darboux, riccati_derivative, simplicity_check, SimplicityOutcome, SimplicityVerdict};
