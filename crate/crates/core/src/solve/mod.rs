//! Local analysis of operators and their solutions in ℚ(x): polynomial and rational
//! solutions, and first-order right factors `∂ - u` with `u ∈ ℚ(x)`.

mod hyperexp;
mod places;
mod polysol;

pub use hyperexp::{hyperexp_classes, hyperexp_right_factors, FirstOrderFactor, HyperexpClass};
pub use places::{indicial_roots, infinity_indicial_x, singular_points, Place, SingularPlace};
pub use polysol::{polynomial_solutions, polynomial_solutions_bounded, rational_solutions};


use crate::field::FactorConfig;

#[derive(Debug, Clone, Copy)]
pub struct SolveConfig {
    pub factor: FactorConfig,
    /// Largest number of local-candidate combinations tried by the
    /// hyperexponential search.
    pub candidate_cap: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            factor: FactorConfig::default(),
            candidate_cap: 512,
        }
    }
}
