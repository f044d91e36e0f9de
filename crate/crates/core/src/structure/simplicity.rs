//! Differential simplicity of `F[w]` with `w' = -q - p w - w²`, the Riccati
//! equation of `∂² + p∂ + q`.
//!
//! A monic `v ∈ F[w]` divides `v'` exactly when its roots are algebraic solutions
//! of the Riccati equation, so the ring is simple iff there are none.

use super::super::kovacic::{kovacic, KovacicConfig, KovacicOutcome};
use crate::error::{Error, Result};
use crate::field::{RatFn, RfPoly};
use crate::ore::DiffOp;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplicityOutcome {
    Simple,
    /// A Darboux polynomial: monic in `w`, dividing its own derivative.
    Darboux(RfPoly),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicityVerdict {
    pub outcome: SimplicityOutcome,
    /// Right-hand side of the Riccati equation, as a polynomial in `w`.
    pub riccati: RfPoly,
    /// Case of the algebraic decision that produced the verdict, 0 when simple.
    pub case: u8,
}

impl SimplicityVerdict {
    pub fn is_simple(&self) -> bool {
        self.outcome == SimplicityOutcome::Simple
    }

    pub fn witness_string(&self) -> Option<String> {
        match &self.outcome {
            SimplicityOutcome::Simple => None,
            SimplicityOutcome::Darboux(v) => Some(v.fmt_var("w")),
        }
    }
}

/// Derivative of `v(w)` under `w' = rhs`.
pub fn riccati_derivative(v: &RfPoly, rhs: &RfPoly) -> RfPoly {
    &v.coeff_derivative() + &(&v.derivative() * rhs)
}

/// `v` is monic, nonconstant and divides its derivative.
pub fn is_darboux(v: &RfPoly, rhs: &RfPoly) -> bool {
    v.degree().is_some_and(|d| d > 0) && v.lc().is_one() && riccati_derivative(v, rhs).rem(v).is_zero()
}

pub fn simplicity_check(l: &DiffOp, cfg: &KovacicConfig) -> Result<SimplicityVerdict> {
    if l.order() != Some(2) {
        return Err(Error::NotOrderTwo(l.order().unwrap_or(0)));
    }
    let l = l.monic();
    let (p, q) = (l.coeff(1), l.coeff(0));
    let riccati = RfPoly::from_coeffs(vec![-&q, -&p, -RatFn::one()]);
    let verdict = kovacic(&l, cfg)?;
    // w = y'/y = ω - gauge for ω a Riccati solution of the reduced equation
    let shift = RfPoly::from_coeffs(vec![verdict.gauge.clone(), RatFn::one()]);
    let (outcome, case) = match &verdict.outcome {
        KovacicOutcome::NonLiouvillian => (SimplicityOutcome::Simple, 0),
        KovacicOutcome::Case1 { omega } => {
            let root = omega - &verdict.gauge;
            (SimplicityOutcome::Darboux(RfPoly::from_coeffs(vec![-root, RatFn::one()])), 1)
        }
        KovacicOutcome::Case2 { minpoly } => (SimplicityOutcome::Darboux(minpoly.monic().compose(&shift)), 2),
        KovacicOutcome::Case3 { minpoly, .. } => (SimplicityOutcome::Darboux(minpoly.monic().compose(&shift)), 3),
    };
    if let SimplicityOutcome::Darboux(v) = &outcome {
        if !is_darboux(v, &riccati) {
            return Err(Error::Inconclusive(format!("witness {} does not divide its derivative", v.fmt_var("w"))));
        }
    }
    Ok(SimplicityVerdict { outcome, riccati, case })
}
