//! Singular places and indicial polynomials.
//!
//! Exponents at infinity are reported in the local parameter `z = 1/x`, so the
//! solution `x^2` has exponent `-2` there. Internally the degree bounds use the
//! `x`-convention (`x^s` has exponent `s`), exposed as [`infinity_indicial_x`].

use std::fmt;

use num_traits::One;

use super::SolveConfig;
use crate::error::{Error, Result};
use crate::field::{
    int, poly_factor, rational_roots, AlgebraicNumber, Poly, Rat, ResidueField,
};
use crate::ore::DiffOp;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Place {
    /// The roots of a monic irreducible polynomial.
    Finite(Poly),
    Infinity,
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(q) => q.degree().unwrap_or(0),
            Place::Infinity => 1,
        }
    }

    /// The point, for places of degree one.
    pub fn rational_point(&self) -> Option<Rat> {
        match self {
            Place::Finite(q) if q.degree() == Some(1) => Some(-q.coeff(0)),
            _ => None,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(q) => match self.rational_point() {
                Some(c) => write!(f, "x = {c}"),
                None => write!(f, "roots of {q}"),
            },
            Place::Infinity => f.write_str("infinity"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularPlace {
    pub place: Place,
    pub regular: bool,
}

/// `rho (rho - 1) ... (rho - i + 1)`.
pub(crate) fn falling_factorial(i: usize) -> Poly {
    (0..i).fold(Poly::one(), |acc, k| &acc * &Poly::linear_root(int(k as i64)))
}

/// Finite singular places (irreducible factors of the cleared leading coefficient)
/// followed by infinity.
pub fn singular_points(l: &DiffOp, cfg: &SolveConfig) -> Result<Vec<SingularPlace>> {
    if l.is_zero() {
        return Err(Error::InvalidInput("zero operator has no singular analysis".into()));
    }
    let cleared = l.cleared();
    let lead = cleared.last().unwrap();
    let mut out = Vec::new();
    if !lead.is_constant() {
        for (q, _) in poly_factor(lead, &cfg.factor)?.factors {
            let regular = is_regular_finite(&cleared, &q);
            out.push(SingularPlace {
                place: Place::Finite(q),
                regular,
            });
        }
    }
    out.push(SingularPlace {
        place: Place::Infinity,
        regular: is_regular_infinity(&cleared),
    });
    Ok(out)
}

fn valuations(cleared: &[Poly], q: &Poly) -> Vec<Option<i64>> {
    cleared
        .iter()
        .map(|a| (!a.is_zero()).then(|| a.multiplicity(q) as i64))
        .collect()
}

fn is_regular_finite(cleared: &[Poly], q: &Poly) -> bool {
    let v = valuations(cleared, q);
    let n = cleared.len() - 1;
    let vn = v[n].unwrap() - n as i64;
    v.iter()
        .enumerate()
        .all(|(i, vi)| vi.is_none_or(|vi| vi - i as i64 >= vn))
}

fn is_regular_infinity(cleared: &[Poly]) -> bool {
    let n = cleared.len() - 1;
    let top = cleared[n].deg() - n as i64;
    cleared
        .iter()
        .enumerate()
        .all(|(i, a)| a.is_zero() || a.deg() - i as i64 <= top)
}

/// Indicial polynomial at a finite place: coefficients of `rho^j`, each an element
/// of ℚ[x]/(q). This is the lowest-order part of `L(t^rho)` in `t = x - alpha`
/// and it is defined (possibly of degree below the order) at every place.
pub(crate) fn finite_indicial(cleared: &[Poly], q: &Poly) -> Vec<Poly> {
    let field = ResidueField::new(q);
    let dq = q.derivative();
    let v = valuations(cleared, q);
    let m = v
        .iter()
        .enumerate()
        .filter_map(|(i, vi)| vi.map(|vi| vi - i as i64))
        .min()
        .unwrap();
    let mut coeffs: Vec<Poly> = Vec::new();
    for (i, a) in cleared.iter().enumerate() {
        let Some(vi) = v[i] else { continue };
        if vi - i as i64 != m {
            continue;
        }
        // (a / (x - alpha)^vi)(alpha) = (a / q^vi)(alpha) * q'(alpha)^vi
        let reduced = a.div_exact(&q.pow(vi as u32));
        let mut lc = field.reduce(&reduced);
        for _ in 0..vi {
            lc = field.mul(&lc, &dq);
        }
        let ff = falling_factorial(i);
        for (j, c) in ff.coeffs().iter().enumerate() {
            if coeffs.len() <= j {
                coeffs.resize(j + 1, Poly::zero());
            }
            coeffs[j] = field.reduce(&(&coeffs[j] + &lc.scale(c)));
        }
    }
    while coeffs.last().is_some_and(Poly::is_zero) {
        coeffs.pop();
    }
    coeffs
}

/// Indicial polynomial at infinity in the `x`-convention: the top-degree part of
/// `L(x^s)` as a polynomial in `s`.
pub fn infinity_indicial_x(cleared: &[Poly]) -> Poly {
    let top = cleared
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(i, a)| a.deg() - i as i64)
        .max()
        .unwrap();
    cleared
        .iter()
        .enumerate()
        .filter(|(i, a)| !a.is_zero() && a.deg() - *i as i64 == top)
        .fold(Poly::zero(), |acc, (i, a)| &acc + &falling_factorial(i).scale(&a.lc()))
}

/// Rational roots of a polynomial with coefficients in ℚ[x]/(q): common rational
/// roots of its coordinate polynomials.
pub(crate) fn residue_rational_roots(coeffs: &[Poly], q: &Poly) -> Vec<Rat> {
    let field = ResidueField::new(q);
    let d = field.degree();
    let coords: Vec<Vec<Rat>> = coeffs.iter().map(|c| field.coordinates(c)).collect();
    let mut g = Poly::zero();
    for k in 0..d {
        let pk = Poly::from_coeffs(coords.iter().map(|c| c[k].clone()).collect());
        g = g.gcd(&pk);
    }
    if g.is_zero() {
        return Vec::new();
    }
    rational_roots(&g)
}

/// Norm from ℚ(alpha)[rho] down to ℚ[rho]: `prod over conjugates of I(alpha_k, rho)`,
/// by resultants at integer points and Newton interpolation.
pub(crate) fn norm_polynomial(coeffs: &[Poly], q: &Poly) -> Poly {
    let q = q.monic();
    let d = q.degree().unwrap_or(0);
    let n_points = d * coeffs.len().saturating_sub(1) + 1;
    let mut points = Vec::with_capacity(n_points);
    for k in 0..n_points {
        let at = int(k as i64);
        let mut e = Poly::zero();
        let mut pw = Rat::one();
        for c in coeffs {
            e = &e + &c.scale(&pw);
            pw *= &at;
        }
        points.push((at, q.resultant(&e.rem(&q))));
    }
    interpolate(&points)
}

/// Newton interpolation through points with distinct abscissae.
fn interpolate(points: &[(Rat, Rat)]) -> Poly {
    let n = points.len();
    let mut dd: Vec<Rat> = points.iter().map(|(_, y)| y.clone()).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&points[i].0 - &points[i - j].0);
        }
    }
    let mut acc = Poly::zero();
    for i in (0..n).rev() {
        acc = &(&acc * &Poly::linear_root(points[i].0.clone())) + &Poly::constant(dd[i].clone());
    }
    acc
}

/// Roots of the indicial polynomial at `place` (exponents at infinity in `z = 1/x`).
/// For a place of degree above one, the roots at all conjugate points are returned.
pub fn indicial_roots(l: &DiffOp, place: &Place, cfg: &SolveConfig) -> Result<Vec<AlgebraicNumber>> {
    let Some(n) = l.order() else {
        return Err(Error::InvalidInput("zero operator".into()));
    };
    let cleared = l.cleared();
    let poly = match place {
        Place::Finite(q) => {
            let coeffs = finite_indicial(&cleared, q);
            if coeffs.len() != n + 1 {
                return Err(Error::IrregularPlace(place.to_string()));
            }
            norm_polynomial(&coeffs, q)
        }
        Place::Infinity => {
            let ind = infinity_indicial_x(&cleared);
            if ind.degree() != Some(n) {
                return Err(Error::IrregularPlace(place.to_string()));
            }
            ind.compose(&Poly::from_ints(&[0, -1]))
        }
    };
    AlgebraicNumber::roots_of(&poly, &cfg.factor)
}
