//! Univariate polynomials with coefficients in ℚ(x), such as minimal polynomials
//! of algebraic Riccati solutions and Darboux polynomials.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::RatFn;
use crate::fmt_util::{join_terms, paren_factor};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RfPoly {
    coeffs: Vec<RatFn>,
}

impl RfPoly {
    pub fn zero() -> Self {
        RfPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RfPoly::constant(RatFn::one())
    }

    /// The variable itself.
    pub fn var() -> Self {
        RfPoly::from_coeffs(vec![RatFn::zero(), RatFn::one()])
    }

    pub fn constant(c: RatFn) -> Self {
        RfPoly::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<RatFn>) -> Self {
        while coeffs.last().is_some_and(RatFn::is_zero) {
            coeffs.pop();
        }
        RfPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[RatFn] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> RatFn {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> RatFn {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &RatFn) -> RfPoly {
        RfPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> RfPoly {
        if self.is_zero() {
            return RfPoly::zero();
        }
        self.scale(&self.lc().inv().expect("nonzero leading coefficient"))
    }

    /// Formal derivative in the variable.
    pub fn derivative(&self) -> RfPoly {
        RfPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&super::int(k as i64)))
                .collect(),
        )
    }

    /// Applies d/dx to every coefficient.
    pub fn coeff_derivative(&self) -> RfPoly {
        RfPoly::from_coeffs(self.coeffs.iter().map(RatFn::derive).collect())
    }

    pub fn div_rem(&self, d: &RfPoly) -> (RfPoly, RfPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.lc().inv().expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        let mut q = vec![RatFn::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = &r[r.len() - 1] * &inv;
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = &r[k + j] - &(&c * dc);
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(RatFn::is_zero) {
                r.pop();
            }
        }
        (RfPoly::from_coeffs(q), RfPoly::from_coeffs(r))
    }

    pub fn rem(&self, d: &RfPoly) -> RfPoly {
        self.div_rem(d).1
    }

    /// Substitute a polynomial for the variable.
    pub fn compose(&self, inner: &RfPoly) -> RfPoly {
        let mut acc = RfPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &RfPoly::constant(c.clone());
        }
        acc
    }

    pub fn fmt_var(&self, var: &str) -> String {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            let power = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let s = if k == 0 {
                crate::fmt_util::paren_sum(mag.to_string())
            } else if mag.is_one() {
                power
            } else {
                format!("{}*{power}", paren_factor(mag.to_string()))
            };
            terms.push((neg, s));
        }
        join_terms(&terms)
    }
}

impl fmt::Debug for RfPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RfPoly({})", self.fmt_var("T"))
    }
}

impl Add for &RfPoly {
    type Output = RfPoly;
    fn add(self, o: &RfPoly) -> RfPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RfPoly::from_coeffs((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }
}

impl Sub for &RfPoly {
    type Output = RfPoly;
    fn sub(self, o: &RfPoly) -> RfPoly {
        self + &(-o)
    }
}

impl Neg for &RfPoly {
    type Output = RfPoly;
    fn neg(self) -> RfPoly {
        RfPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &RfPoly {
    type Output = RfPoly;
    fn mul(self, o: &RfPoly) -> RfPoly {
        if self.is_zero() || o.is_zero() {
            return RfPoly::zero();
        }
        let mut out = vec![RatFn::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        RfPoly::from_coeffs(out)
    }
}
