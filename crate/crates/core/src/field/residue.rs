//! Arithmetic in ℚ[x]/(q) for an irreducible `q`: values of rational functions
//! at a root of `q`, used for local data at non-rational places.

use super::{Poly, Rat, RatFn};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueField {
    modulus: Poly,
}

impl ResidueField {
    /// `q` must be irreducible and nonconstant.
    pub fn new(q: &Poly) -> Self {
        ResidueField { modulus: q.monic() }
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        p.rem(&self.modulus)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        (a * b).rem(&self.modulus)
    }

    pub fn inv(&self, a: &Poly) -> Option<Poly> {
        a.inv_mod(&self.modulus)
    }

    /// Value of `f` at the root, or `None` if the root is a pole of `f`.
    pub fn eval(&self, f: &RatFn) -> Option<Poly> {
        let d = self.inv(f.den())?;
        Some(self.mul(&self.reduce(f.num()), &d))
    }

    /// The element as a rational number, if it lies in ℚ.
    pub fn as_rational(&self, a: &Poly) -> Option<Rat> {
        let r = self.reduce(a);
        if r.is_constant() {
            Some(r.coeff(0))
        } else {
            None
        }
    }

    /// Coordinates in the power basis `1, x, ..., x^(d-1)`.
    pub fn coordinates(&self, a: &Poly) -> Vec<Rat> {
        let r = self.reduce(a);
        (0..self.degree()).map(|k| r.coeff(k)).collect()
    }

    pub fn is_zero(&self, a: &Poly) -> bool {
        self.reduce(a).is_zero()
    }
}
