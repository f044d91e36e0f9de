use num_traits::{Signed, Zero};

use super::places::{finite_indicial, infinity_indicial_x, residue_rational_roots};
use super::SolveConfig;
use crate::error::Result;
use crate::field::{int, nullspace, poly_factor, rational_roots, Poly, Rat, RatFn};
use crate::ore::DiffOp;

/// `L(x^j)` for the cleared coefficients, as a polynomial.
fn apply_to_monomial(cleared: &[Poly], j: usize) -> Poly {
    let mut acc = Poly::zero();
    for (i, a) in cleared.iter().enumerate() {
        if i > j || a.is_zero() {
            continue;
        }
        let ff: i64 = (0..i).map(|k| (j - k) as i64).product();
        acc = &acc + &(a * &Poly::monomial(int(ff), j - i));
    }
    acc
}

/// Rewrites a basis so that leading degrees are distinct, each element is monic,
/// and no element has a nonzero coefficient at another element's leading degree.
fn reduce_basis(mut basis: Vec<Poly>) -> Vec<Poly> {
    let mut out: Vec<Poly> = Vec::new();
    basis.retain(|p| !p.is_zero());
    while let Some(mut p) = basis.pop() {
        for q in &out {
            let d = q.degree().unwrap();
            let c = p.coeff(d);
            if !c.is_zero() {
                p = &p - &q.scale(&c);
            }
        }
        if p.is_zero() {
            continue;
        }
        let p = p.monic();
        let d = p.degree().unwrap();
        for q in out.iter_mut() {
            let c = q.coeff(d);
            if !c.is_zero() {
                *q = &*q - &p.scale(&c);
            }
        }
        out.push(p);
    }
    out.sort_by_key(|p| p.degree());
    out
}

/// Basis of the polynomial solutions of degree at most `max_degree`.
pub fn polynomial_solutions_bounded(l: &DiffOp, max_degree: usize) -> Vec<Poly> {
    if l.is_zero() {
        return (0..=max_degree).map(|k| Poly::monomial(int(1), k)).collect();
    }
    let cleared = l.cleared();
    let images: Vec<Poly> = (0..=max_degree).map(|j| apply_to_monomial(&cleared, j)).collect();
    let rows_len = images.iter().map(|p| p.coeffs().len()).max().unwrap_or(0);
    let rows: Vec<Vec<Rat>> = (0..rows_len)
        .map(|r| images.iter().map(|p| p.coeff(r)).collect())
        .collect();
    let ns = nullspace(&rows, max_degree + 1);
    reduce_basis(ns.into_iter().map(Poly::from_coeffs).collect())
}

/// Largest degree a polynomial solution can have, if any.
pub(crate) fn polynomial_degree_bound(l: &DiffOp) -> Option<usize> {
    if l.is_zero() {
        return None;
    }
    let ind = infinity_indicial_x(&l.cleared());
    rational_roots(&ind)
        .into_iter()
        .filter(|r| r.is_integer() && !r.is_negative())
        .map(|r| r.to_integer().try_into().unwrap_or(usize::MAX))
        .max()
}

/// Basis of all polynomial solutions, complete by the degree bound from the
/// indicial polynomial at infinity.
pub fn polynomial_solutions(l: &DiffOp) -> Vec<Poly> {
    match polynomial_degree_bound(l) {
        Some(d) => polynomial_solutions_bounded(l, d),
        None => Vec::new(),
    }
}

/// Basis of the solutions in ℚ(x).
pub fn rational_solutions(l: &DiffOp, cfg: &SolveConfig) -> Result<Vec<RatFn>> {
    if l.is_zero() {
        return Ok(Vec::new());
    }
    let cleared = l.cleared();
    let lead = cleared.last().unwrap();
    let mut den = Poly::one();
    if !lead.is_constant() {
        for (q, _) in poly_factor(lead, &cfg.factor)?.factors {
            let coeffs = finite_indicial(&cleared, &q);
            let lowest = residue_rational_roots(&coeffs, &q)
                .into_iter()
                .filter(|r| r.is_integer())
                .min();
            if let Some(m) = lowest.filter(|m| m.is_negative()) {
                let e: u32 = (-m).to_integer().try_into().expect("pole order fits");
                den = &den * &q.pow(e);
            }
        }
    }
    let inv_den = RatFn::new(Poly::one(), den.clone())?;
    let shifted = l * &DiffOp::from_ratfn(inv_den);
    let basis = polynomial_solutions(&shifted);
    Ok(basis
        .into_iter()
        .map(|p| RatFn::new(p, den.clone()).expect("nonzero denominator"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(n: &[i64], d: &[i64]) -> RatFn {
        RatFn::new(Poly::from_ints(n), Poly::from_ints(d)).unwrap()
    }

    fn euler() -> DiffOp {
        DiffOp::from_coeffs(vec![rf(&[-2], &[0, 0, 1]), RatFn::zero(), RatFn::one()])
    }

    #[test]
    fn polynomial_examples() {
        assert_eq!(polynomial_solutions(&DiffOp::d_pow(2)), vec![Poly::one(), Poly::x()]);
        assert_eq!(polynomial_solutions(&euler()), vec![Poly::from_ints(&[0, 0, 1])]);
        let d_minus_one = DiffOp::first_order(&RatFn::one());
        assert!(polynomial_solutions(&d_minus_one).is_empty());
    }

    #[test]
    fn rational_examples() {
        let cfg = SolveConfig::default();
        let sols = rational_solutions(&euler(), &cfg).unwrap();
        assert_eq!(sols.len(), 2);
        assert!(sols.contains(&rf(&[1], &[0, 1])));
        assert!(sols.contains(&RatFn::from_poly(Poly::from_ints(&[0, 0, 1]))));
        let airy = DiffOp::from_coeffs(vec![-RatFn::x(), RatFn::zero(), RatFn::one()]);
        assert!(rational_solutions(&airy, &cfg).unwrap().is_empty());
        assert_eq!(
            rational_solutions(&DiffOp::d_pow(2), &cfg).unwrap(),
            vec![RatFn::one(), RatFn::x()]
        );
    }

    #[test]
    fn basis_is_reduced() {
        let b = reduce_basis(vec![Poly::from_ints(&[1, 1]), Poly::from_ints(&[2, 1])]);
        assert_eq!(b, vec![Poly::one(), Poly::x()]);
    }
}
