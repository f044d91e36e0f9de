use super::{poly_factor, FactorConfig, Poly, RatFn};
use crate::error::Result;

/// `f = polynomial + sum numerator / factor^exponent`, with `deg numerator < deg factor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFractions {
    pub polynomial: Poly,
    pub terms: Vec<(Poly, u32, Poly)>,
}

impl PartialFractions {
    pub fn recombine(&self) -> RatFn {
        self.terms.iter().fold(
            RatFn::from_poly(self.polynomial.clone()),
            |acc, (q, e, n)| &acc + &RatFn::new(n.clone(), q.pow(*e)).expect("nonzero factor"),
        )
    }
}

pub fn partial_fractions(f: &RatFn, cfg: &FactorConfig) -> Result<PartialFractions> {
    let (polynomial, rem) = f.num().div_rem(f.den());
    let mut terms = Vec::new();
    if f.den().is_one() {
        return Ok(PartialFractions { polynomial, terms });
    }
    let fac = poly_factor(f.den(), cfg)?;
    for (q, m) in &fac.factors {
        let qm = q.pow(*m);
        let cofactor = f.den().div_exact(&qm);
        // rem / den = a / q^m + (...) / cofactor, with a = rem * cofactor^{-1} mod q^m
        let inv = cofactor.inv_mod(&qm).expect("coprime factors");
        let mut a = (&rem * &inv).rem(&qm);
        // q-adic expansion a = sum c_j q^j
        let mut j = 0u32;
        while !a.is_zero() {
            let (quot, c) = a.div_rem(q);
            if !c.is_zero() {
                terms.push((q.clone(), m - j, c));
            }
            a = quot;
            j += 1;
        }
    }
    terms.sort_by(|a, b| super::factor::cmp_poly(&a.0, &b.0).then(a.1.cmp(&b.1)));
    Ok(PartialFractions { polynomial, terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(n: &[i64], d: &[i64]) -> RatFn {
        RatFn::new(Poly::from_ints(n), Poly::from_ints(d)).unwrap()
    }

    #[test]
    fn simple_poles() {
        let f = rf(&[1, 0, 1], &[0, -1, 1]);
        let pf = partial_fractions(&f, &FactorConfig::default()).unwrap();
        assert_eq!(pf.polynomial, Poly::one());
        assert_eq!(
            pf.terms,
            vec![
                (Poly::from_ints(&[-1, 1]), 1, Poly::from_ints(&[2])),
                (Poly::x(), 1, Poly::from_ints(&[-1])),
            ]
        );
        assert_eq!(pf.recombine(), f);
    }

    #[test]
    fn already_partial() {
        let f = rf(&[1], &[0, 0, 1]);
        let pf = partial_fractions(&f, &FactorConfig::default()).unwrap();
        assert!(pf.polynomial.is_zero());
        assert_eq!(pf.terms, vec![(Poly::x(), 2, Poly::one())]);
    }

    #[test]
    fn polynomial_input() {
        let pf = partial_fractions(&RatFn::x(), &FactorConfig::default()).unwrap();
        assert_eq!(pf.polynomial, Poly::x());
        assert!(pf.terms.is_empty());
    }

    #[test]
    fn repeated_irreducible_quadratic() {
        // (x^3 + 2) / (x^2 + 1)^2 / (x - 1)
        let den = &Poly::from_ints(&[1, 0, 1]).pow(2) * &Poly::from_ints(&[-1, 1]);
        let f = RatFn::new(Poly::from_ints(&[2, 0, 0, 1]), den).unwrap();
        let pf = partial_fractions(&f, &FactorConfig::default()).unwrap();
        assert_eq!(pf.recombine(), f);
        assert!(pf.terms.iter().all(|(q, _, n)| n.deg() < q.deg()));
    }
}
