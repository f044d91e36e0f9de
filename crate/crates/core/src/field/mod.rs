//! Exact arithmetic: ℚ, ℚ[x], ℚ(x) with d/dx, factorization and partial fractions.

mod algebraic;
mod factor;
mod linalg;
mod modp;
mod partial;
mod poly;
mod ratfn;
mod residue;
mod rfpoly;

pub use algebraic::{AlgebraicNumber, RootSelector};
pub use factor::{poly_factor, rational_roots, squarefree_decomposition, FactorConfig, Factorization};
pub use linalg::{nullspace, FieldElem};
pub use partial::{partial_fractions, PartialFractions};
pub use poly::Poly;
pub use ratfn::{rf_arith, rf_derive, ArithOp, RatFn};
pub use residue::ResidueField;
pub use rfpoly::RfPoly;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Arbitrary-precision rational number in lowest terms.
pub type Rat = BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Exact square root of a rational, when it exists.
pub fn rat_sqrt(q: &Rat) -> Option<Rat> {
    use num_traits::Signed;
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}
