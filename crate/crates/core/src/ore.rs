//! The Ore ring ℚ(x)[∂] of linear differential operators, with ∂·a = a·∂ + a′.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{nullspace, Poly, Rat, RatFn};
use crate::fmt_util::{join_terms, paren_factor, paren_sum};

/// Anything an operator can act on: a differential ℚ(x)-vector space element.
pub trait Differential: Clone {
    fn derive(&self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn scaled(&self, f: &RatFn) -> Self;
    fn zero_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
}

impl Differential for RatFn {
    fn derive(&self) -> Self {
        RatFn::derive(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn scaled(&self, f: &RatFn) -> Self {
        self * f
    }
    fn zero_like(&self) -> Self {
        RatFn::zero()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

/// `sum coeffs[k] * ∂^k`; trailing zero coefficients are trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DiffOp {
    coeffs: Vec<RatFn>,
}

impl DiffOp {
    pub fn zero() -> Self {
        DiffOp { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        DiffOp::from_ratfn(RatFn::one())
    }

    /// The operator ∂.
    pub fn d() -> Self {
        DiffOp::from_coeffs(vec![RatFn::zero(), RatFn::one()])
    }

    /// `∂ - u`.
    pub fn first_order(u: &RatFn) -> Self {
        DiffOp::from_coeffs(vec![-u, RatFn::one()])
    }

    pub fn from_ratfn(f: RatFn) -> Self {
        DiffOp::from_coeffs(vec![f])
    }

    pub fn from_coeffs(mut coeffs: Vec<RatFn>) -> Self {
        while coeffs.last().is_some_and(RatFn::is_zero) {
            coeffs.pop();
        }
        DiffOp { coeffs }
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

    /// Order, or `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> RatFn {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }

    /// `f * self`.
    pub fn scale_left(&self, f: &RatFn) -> DiffOp {
        DiffOp::from_coeffs(self.coeffs.iter().map(|c| f * c).collect())
    }

    pub fn monic(&self) -> DiffOp {
        if self.is_zero() {
            return DiffOp::zero();
        }
        let inv = self.lc().inv().expect("nonzero leading coefficient");
        self.scale_left(&inv)
    }

    /// `∂ * self`.
    fn d_times(&self) -> DiffOp {
        let n = self.coeffs.len();
        let mut out = vec![RatFn::zero(); n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k] = &out[k] + &c.derive();
            out[k + 1] = &out[k + 1] + c;
        }
        DiffOp::from_coeffs(out)
    }

    /// `∂^k`.
    pub fn d_pow(k: usize) -> DiffOp {
        let mut coeffs = vec![RatFn::zero(); k + 1];
        coeffs[k] = RatFn::one();
        DiffOp { coeffs }
    }

    /// `self(y) = sum coeffs[k] * y^(k)`.
    pub fn apply<T: Differential>(&self, y: &T) -> T {
        let mut acc = y.zero_like();
        let mut dk = y.clone();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                dk = dk.derive();
            }
            if !c.is_zero() {
                acc = acc.plus(&dk.scaled(c));
            }
        }
        acc
    }

    /// Right Euclidean division: `self = q * b + r`, `order(r) < order(b)`.
    pub fn right_divide(&self, b: &DiffOp) -> Result<(DiffOp, DiffOp)> {
        let Some(m) = b.order() else {
            return Err(Error::DivisionByZeroOperator);
        };
        let inv = b.lc().inv()?;
        let mut q = vec![RatFn::zero(); self.coeffs.len().saturating_sub(m)];
        let mut r = self.clone();
        while let Some(n) = r.order() {
            if n < m {
                break;
            }
            let c = &r.lc() * &inv;
            let step = &DiffOp::d_pow(n - m).scale_left(&c) * b;
            r = &r - &step;
            q[n - m] = &q[n - m] + &c;
        }
        Ok((DiffOp::from_coeffs(q), r))
    }

    pub fn right_rem(&self, b: &DiffOp) -> Result<DiffOp> {
        Ok(self.right_divide(b)?.1)
    }

    /// Whether `b` is an exact right factor of `self`.
    pub fn right_divisible_by(&self, b: &DiffOp) -> bool {
        matches!(self.right_rem(b), Ok(r) if r.is_zero())
    }

    /// Monic greatest common right divisor.
    pub fn gcrd(&self, other: &DiffOp) -> Result<DiffOp> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::InvalidInput("gcrd of two zero operators".into()));
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.right_rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Monic least common left multiple, computed from the first linear dependency
    /// among `(∂^j mod self, ∂^j mod other)`.
    pub fn lclm(&self, other: &DiffOp) -> Result<DiffOp> {
        let (Some(m), Some(n)) = (self.order(), other.order()) else {
            return Err(Error::InvalidInput("lclm of a zero operator".into()));
        };
        let width = m + n;
        let mut r1 = DiffOp::one().right_rem(self)?;
        let mut r2 = DiffOp::one().right_rem(other)?;
        let mut cols: Vec<Vec<RatFn>> = Vec::new();
        for j in 0..=width {
            if j > 0 {
                r1 = r1.d_times().right_rem(self)?;
                r2 = r2.d_times().right_rem(other)?;
            }
            let mut col: Vec<RatFn> = (0..m).map(|k| r1.coeff(k)).collect();
            col.extend((0..n).map(|k| r2.coeff(k)));
            cols.push(col);
            if j < m.max(n) {
                continue;
            }
            let rows: Vec<Vec<RatFn>> = (0..width)
                .map(|i| cols.iter().map(|c| c[i].clone()).collect())
                .collect();
            let ns = nullspace(&rows, cols.len());
            if let Some(v) = ns.into_iter().find(|v| !v[j].is_zero()) {
                return Ok(DiffOp::from_coeffs(v).monic());
            }
        }
        unreachable!("lclm order is bounded by the sum of the orders")
    }

    /// Substitute `∂ -> ∂ + w`, i.e. the operator `exp(-∫w) ∘ self ∘ exp(∫w)`.
    pub fn shift(&self, w: &RatFn) -> DiffOp {
        let step = &DiffOp::d() + &DiffOp::from_ratfn(w.clone());
        let mut power = DiffOp::one();
        let mut acc = DiffOp::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                power = &step * &power;
            }
            if !c.is_zero() {
                acc = &acc + &power.scale_left(c);
            }
        }
        acc
    }

    /// Multiply through by the common denominator and divide out the common
    /// content: the polynomial-coefficient form of the same equation, with integer
    /// coefficients of gcd 1 and a positive leading coefficient.
    pub fn cleared(&self) -> Vec<Poly> {
        if self.is_zero() {
            return Vec::new();
        }
        let den = self
            .coeffs
            .iter()
            .fold(Poly::one(), |acc, c| acc.lcm(c.den()));
        let polys: Vec<Poly> = self
            .coeffs
            .iter()
            .map(|c| (c.num() * &den).div_exact(c.den()))
            .collect();
        let g = polys.iter().fold(Poly::zero(), |acc, p| acc.gcd(p));
        let polys: Vec<Poly> = polys.iter().map(|p| p.div_exact(&g)).collect();
        let mut l = BigInt::one();
        let mut gg = BigInt::zero();
        for c in polys.iter().flat_map(|p| p.coeffs()) {
            l = l.lcm(c.denom());
        }
        for c in polys.iter().flat_map(|p| p.coeffs()) {
            gg = gg.gcd(&(c * Rat::from_integer(l.clone())).to_integer());
        }
        let mut s = Rat::new(l, gg);
        if polys.last().unwrap().lc().is_negative() {
            s = -s;
        }
        polys.iter().map(|p| p.scale(&s)).collect()
    }

    /// Canonical printed form, e.g. `D^2 + (1/(2*x))*D - 1/(4*x)`.
    pub fn to_canonical_string(&self) -> String {
        let mut terms = Vec::new();
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            let dpow = match k {
                0 => String::new(),
                1 => "D".to_string(),
                _ => format!("D^{k}"),
            };
            let s = if k == 0 {
                paren_sum(mag.to_string())
            } else if mag.is_one() {
                dpow
            } else {
                format!("{}*{dpow}", paren_factor(mag.to_string()))
            };
            terms.push((neg, s));
        }
        join_terms(&terms)
    }
}

/// Returns `(r, gauge)` for a second-order operator `∂² + p∂ + q` (normalized to monic
/// first): `y = z·exp(-∫gauge)` turns `L y = 0` into `z'' = r z`.
pub fn op_normal_form2(l: &DiffOp) -> Result<(RatFn, RatFn)> {
    if l.order() != Some(2) {
        return Err(Error::NotOrderTwo(l.order().unwrap_or(0)));
    }
    let l = l.monic();
    let p = l.coeff(1);
    let q = l.coeff(0);
    let half = RatFn::constant(Rat::new(1.into(), 2.into()));
    let r = &(&(&(&p * &p) * &RatFn::constant(Rat::new(1.into(), 4.into()))) + &(&p.derive() * &half)) - &q;
    Ok((r, &p * &half))
}

pub fn op_mul(a: &DiffOp, b: &DiffOp) -> DiffOp {
    a * b
}

pub fn op_right_divide(l: &DiffOp, b: &DiffOp) -> Result<(DiffOp, DiffOp)> {
    l.right_divide(b)
}

pub fn op_gcrd(a: &DiffOp, b: &DiffOp) -> Result<DiffOp> {
    a.gcrd(b)
}

pub fn op_lclm(a: &DiffOp, b: &DiffOp) -> Result<DiffOp> {
    a.lclm(b)
}

pub fn op_apply<T: Differential>(l: &DiffOp, y: &T) -> T {
    l.apply(y)
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOp({self})")
    }
}

impl Add for &DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: &DiffOp) -> DiffOp {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DiffOp::from_coeffs((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub for &DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &DiffOp) -> DiffOp {
        self + &(-rhs)
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        DiffOp {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &DiffOp {
    type Output = DiffOp;
    /// Composition: `(a * b)(y) = a(b(y))`.
    fn mul(self, rhs: &DiffOp) -> DiffOp {
        let mut acc = DiffOp::zero();
        let mut power = rhs.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = power.d_times();
            }
            if !a.is_zero() {
                acc = &acc + &power.scale_left(a);
            }
        }
        acc
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for DiffOp {
            type Output = DiffOp;
            fn $m(self, rhs: DiffOp) -> DiffOp {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{int, rat};

    fn rf(n: &[i64], d: &[i64]) -> RatFn {
        RatFn::new(Poly::from_ints(n), Poly::from_ints(d)).unwrap()
    }

    fn inv_x() -> RatFn {
        rf(&[1], &[0, 1])
    }

    fn airy() -> DiffOp {
        DiffOp::from_coeffs(vec![-RatFn::x(), RatFn::zero(), RatFn::one()])
    }

    fn remark_op() -> DiffOp {
        DiffOp::from_coeffs(vec![rf(&[-1], &[0, 4]), rf(&[1], &[0, 2]), RatFn::one()])
    }

    #[test]
    fn commutation_rule() {
        let x = DiffOp::from_ratfn(RatFn::x());
        let prod = &DiffOp::d() * &x;
        assert_eq!(prod, DiffOp::from_coeffs(vec![RatFn::one(), RatFn::x()]));
    }

    #[test]
    fn product_of_first_order_factors() {
        let a = DiffOp::first_order(&-inv_x());
        let b = DiffOp::first_order(&inv_x());
        assert_eq!(&a * &b, DiffOp::d_pow(2));
        assert_eq!(&airy() * &DiffOp::one(), airy());
    }

    #[test]
    fn right_division_examples() {
        let (q, r) = DiffOp::d_pow(2).right_divide(&DiffOp::first_order(&inv_x())).unwrap();
        assert_eq!(q, DiffOp::first_order(&-inv_x()));
        assert!(r.is_zero());

        let (q, r) = airy().right_divide(&DiffOp::d()).unwrap();
        assert_eq!(q, DiffOp::d());
        assert_eq!(r, DiffOp::from_ratfn(-RatFn::x()));

        let (q, r) = airy().right_divide(&airy()).unwrap();
        assert_eq!(q, DiffOp::one());
        assert!(r.is_zero());

        assert_eq!(airy().right_divide(&DiffOp::zero()), Err(Error::DivisionByZeroOperator));
    }

    #[test]
    fn gcrd_examples() {
        let b = DiffOp::first_order(&inv_x());
        assert_eq!(DiffOp::d_pow(2).gcrd(&b).unwrap(), b);
        let l = remark_op().scale_left(&RatFn::from_int(3));
        assert_eq!(l.gcrd(&l).unwrap(), remark_op());
        let g = DiffOp::first_order(&RatFn::one())
            .gcrd(&DiffOp::first_order(&RatFn::from_int(2)))
            .unwrap();
        assert_eq!(g, DiffOp::one());
    }

    #[test]
    fn lclm_examples() {
        let a = DiffOp::first_order(&inv_x());
        let l = a.lclm(&DiffOp::d()).unwrap();
        assert_eq!(l.order(), Some(2));
        assert!(l.right_divisible_by(&a) && l.right_divisible_by(&DiffOp::d()));
        // 1 and x are annihilated: x^2 D^2 - x D + 1 normalized
        assert_eq!(l.apply(&RatFn::x()), RatFn::zero());
        assert_eq!(l.apply(&RatFn::one()), RatFn::zero());

        assert_eq!(airy().lclm(&airy()).unwrap(), airy());

        let l = DiffOp::d().lclm(&DiffOp::first_order(&RatFn::one())).unwrap();
        assert_eq!(l, DiffOp::from_coeffs(vec![RatFn::zero(), -RatFn::one(), RatFn::one()]));
    }

    #[test]
    fn apply_examples() {
        assert_eq!(airy().apply(&RatFn::x()), rf(&[0, 0, -1], &[1]));
        assert_eq!(remark_op().apply(&RatFn::zero()), RatFn::zero());
    }

    #[test]
    fn normal_form_examples() {
        assert_eq!(op_normal_form2(&airy()).unwrap(), (RatFn::x(), RatFn::zero()));
        let l = DiffOp::from_coeffs(vec![RatFn::one(), RatFn::from_int(2), RatFn::one()]);
        assert_eq!(op_normal_form2(&l).unwrap().0, RatFn::zero());
        let (r, gauge) = op_normal_form2(&remark_op()).unwrap();
        assert_eq!(r, rf(&[-3, 4], &[0, 0, 16]));
        assert_eq!(gauge, rf(&[1], &[0, 4]));
        assert_eq!(op_normal_form2(&DiffOp::d()), Err(Error::NotOrderTwo(1)));
    }

    #[test]
    fn canonical_printing() {
        assert_eq!(airy().to_string(), "D^2 - x");
        assert_eq!(remark_op().to_string(), "D^2 + (1/(2*x))*D - 1/(4*x)");
        assert_eq!(DiffOp::first_order(&inv_x()).to_string(), "D - 1/x");
        let l = DiffOp::from_coeffs(vec![
            RatFn::from_poly(Poly::from_ints(&[-1, -1])),
            RatFn::constant(rat(1, 2)),
            RatFn::from_poly(Poly::from_ints(&[1, 0, 1])),
        ]);
        assert_eq!(l.to_string(), "(x^2 + 1)*D^2 + (1/2)*D - (x + 1)");
        assert_eq!(DiffOp::zero().to_string(), "0");
    }

    #[test]
    fn cleared_form() {
        let c = remark_op().cleared();
        assert_eq!(c, vec![Poly::from_ints(&[-1]), Poly::from_ints(&[2]), Poly::from_ints(&[0, 4])]);
        let c = DiffOp::first_order(&rf(&[1], &[0, 2])).scale_left(&RatFn::constant(int(-3))).cleared();
        assert_eq!(c, vec![Poly::from_ints(&[-1]), Poly::from_ints(&[0, 2])]);
    }
}
