//! Multivariate polynomials over ℚ(x) in named tower elements, used to record
//! relations and membership expressions.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::field::RatFn;
use crate::fmt_util::{join_terms, paren_factor, paren_sum};
use crate::tower::TowerElem;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<usize>, RatFn>,
}

/// Exponent vectors of total degree exactly `d` in `n` variables, in
/// lexicographic order.
pub(crate) fn exponents_of_degree(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, d: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// Graded order with the last variable most significant.
fn term_order(a: &[usize], b: &[usize]) -> std::cmp::Ordering {
    let (da, db): (usize, usize) = (a.iter().sum(), b.iter().sum());
    da.cmp(&db).then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: RatFn) -> Self {
        MPoly::monomial(nvars, vec![0; nvars], c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MPoly::monomial(nvars, e, RatFn::one())
    }

    pub fn monomial(nvars: usize, exps: Vec<usize>, c: RatFn) -> Self {
        let mut p = MPoly::zero(nvars);
        p.add_term(exps, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &RatFn)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exps: Vec<usize>, c: RatFn) {
        debug_assert_eq!(exps.len(), self.nvars);
        let entry = self.terms.entry(exps.clone()).or_default();
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> usize {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// Coefficient of `v_i^k`, as a polynomial in the same variables.
    pub fn coeff_in(&self, i: usize, k: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == k {
                let mut e = e.clone();
                e[i] = 0;
                out.add_term(e, c.clone());
            }
        }
        out
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &RatFn) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a * c);
        }
        out
    }

    pub fn pow(&self, k: usize) -> MPoly {
        let mut out = MPoly::constant(self.nvars, RatFn::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative in `v_i`.
    pub fn partial(&self, i: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, c.scale(&crate::field::int(e[i] as i64)));
            }
        }
        out
    }

    /// Applies d/dx to the coefficients only.
    pub fn coeff_derivative(&self) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.derive());
        }
        out
    }

    /// The derivation extending d/dx with `v_i ↦ images[i]`.
    pub fn derive_with(&self, images: &[MPoly]) -> MPoly {
        let mut out = self.coeff_derivative();
        for (i, img) in images.iter().enumerate() {
            let p = self.partial(i);
            if !p.is_zero() {
                out = out.add(&p.mul(img));
            }
        }
        out
    }

    /// Substitutes polynomials (over a possibly different set of variables) for
    /// the variables.
    pub fn substitute(&self, images: &[MPoly]) -> MPoly {
        let n = images.first().map_or(0, MPoly::nvars);
        let mut out = MPoly::zero(n);
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(n, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&images[i].pow(k));
                }
            }
            out = out.add(&t);
        }
        out
    }

    pub fn eval(&self, values: &[TowerElem], like: &TowerElem) -> Result<TowerElem> {
        let mut acc = TowerElem::from_ratfn(like.tower(), &RatFn::zero());
        for (e, c) in &self.terms {
            let mut t = TowerElem::from_ratfn(like.tower(), c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&values[i].pow(k as i64)?)?;
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// The term printed first, if any.
    pub fn leading_term(&self) -> Option<(&Vec<usize>, &RatFn)> {
        self.terms.iter().max_by(|(a, _), (b, _)| term_order(a, b))
    }

    /// Prints with the given variable names, highest total degree first and, among
    /// equal degrees, later variables first.
    pub fn fmt_with(&self, names: &[&str]) -> String {
        let mut order: Vec<(&Vec<usize>, &RatFn)> = self.terms.iter().collect();
        order.sort_by(|(a, _), (b, _)| term_order(b, a));
        let mut terms = Vec::new();
        for (e, c) in order {
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].to_string() } else { format!("{}^{k}", names[i]) })
                .collect();
            let s = if mono.is_empty() {
                paren_sum(mag.to_string())
            } else if mag.is_one() {
                mono.join("*")
            } else {
                format!("{}*{}", paren_factor(mag.to_string()), mono.join("*"))
            };
            terms.push((neg, s));
        }
        join_terms(&terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_enumeration() {
        assert_eq!(exponents_of_degree(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(exponents_of_degree(3, 0), vec![vec![0, 0, 0]]);
        assert_eq!(exponents_of_degree(0, 1).len(), 0);
        assert_eq!(exponents_of_degree(3, 4).len(), 15);
    }

    #[test]
    fn derivation_and_printing() {
        // y' = y, so (y^2 + x y)' = 2 y^2 + y + x y
        let y = MPoly::var(1, 0);
        let p = y.pow(2).add(&y.scale(&RatFn::x()));
        let d = p.derive_with(std::slice::from_ref(&y));
        assert_eq!(d.fmt_with(&["y"]), "2*y^2 + (x + 1)*y");
        let q = MPoly::var(2, 0).mul(&MPoly::var(2, 1)).sub(&MPoly::constant(2, RatFn::x()));
        assert_eq!(q.fmt_with(&["a", "b"]), "a*b - x");
        assert_eq!(q.partial(1).fmt_with(&["a", "b"]), "a");
    }
}
