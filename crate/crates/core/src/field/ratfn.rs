//! Reduced rational functions in ℚ(x) with the derivation d/dx.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Poly, Rat};
use crate::error::{Error, Result};

/// Element of ℚ(x): `num / den` with `den` monic and `gcd(num, den) = 1`.
///
/// The zero function is `0 / 1`. Equal values have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn rf_arith(op: ArithOp, f: &RatFn, g: &RatFn) -> Result<RatFn> {
    Ok(match op {
        ArithOp::Add => f + g,
        ArithOp::Sub => f - g,
        ArithOp::Mul => f * g,
        ArithOp::Div => f.checked_div(g)?,
    })
}

pub fn rf_derive(f: &RatFn) -> RatFn {
    f.derive()
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFn::from_poly(Poly::one())
    }

    pub fn x() -> Self {
        RatFn::from_poly(Poly::x())
    }

    pub fn constant(c: Rat) -> Self {
        RatFn::from_poly(Poly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        RatFn::constant(super::int(n))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFn {
            num: p,
            den: Poly::one(),
        }
    }

    /// Builds `num / den` in canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    /// Builds `num/den` for coprime `num` and `den`, normalizing the denominator.
    fn coprime(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFn::zero();
        }
        let lc = den.lc();
        if lc.is_one() {
            return RatFn { num, den };
        }
        let inv = lc.recip();
        RatFn {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFn::zero();
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        let lc = d.lc();
        if !lc.is_one() {
            let inv = lc.recip();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        RatFn { num: n, den: d }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    /// The constant value, if this is a constant.
    pub fn as_constant(&self) -> Option<Rat> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_poly().then_some(&self.num)
    }

    pub fn checked_div(&self, g: &RatFn) -> Result<RatFn> {
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(&self.num * &g.den, &self.den * &g.num))
    }

    pub fn inv(&self) -> Result<RatFn> {
        RatFn::one().checked_div(self)
    }

    pub fn scale(&self, c: &Rat) -> RatFn {
        if c.is_zero() {
            return RatFn::zero();
        }
        RatFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: i32) -> Result<RatFn> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = RatFn::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Quotient rule.
    pub fn derive(&self) -> RatFn {
        if self.den.is_one() {
            return RatFn::from_poly(self.num.derivative());
        }
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::reduce(n, &self.den * &self.den)
    }

    /// Order at the irreducible factor `q`: positive for zeros, negative for poles.
    /// `None` for the zero function.
    pub fn ord_at(&self, q: &Poly) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.num.multiplicity(q) as i64 - self.den.multiplicity(q) as i64)
    }

    /// Order at infinity, `deg den - deg num`.
    pub fn ord_inf(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.den.deg() - self.num.deg())
    }

    /// Evaluate at a rational point; `None` at a pole.
    pub fn eval(&self, at: &Rat) -> Option<Rat> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(at) / d)
    }

    /// `f(x + c)`.
    pub fn taylor_shift(&self, c: &Rat) -> RatFn {
        Self::reduce(self.num.taylor_shift(c), self.den.taylor_shift(c))
    }

    /// Substitute `x -> 1/x`.
    pub fn invert_variable(&self) -> RatFn {
        // f(1/x) = x^(dd-dn) rev(num) / rev(den)
        let dn = self.num.deg();
        let dd = self.den.deg();
        let mut n = self.num.reversed();
        let mut d = self.den.reversed();
        if dd > dn {
            n = n.shift_up((dd - dn) as usize);
        } else {
            d = d.shift_up((dn - dd) as usize);
        }
        Self::reduce(n, d)
    }

    /// Sign of the leading numerator coefficient, used for printing.
    pub fn is_negative(&self) -> bool {
        self.num.lc().is_negative()
    }

    /// Canonical printed form in the expression grammar: content is pulled out so
    /// numerator and denominator print with integer coefficients, e.g. `1/(2*x)`.
    pub fn fmt_var(&self, var: &str) -> String {
        if self.den.is_one() {
            return self.num.fmt_var(var);
        }
        let (cn, pn) = self.num.primitive_part();
        let (cd, pd) = self.den.primitive_part();
        let c = cn / cd;
        let neg = c.is_negative();
        let c = c.abs();
        let num = Poly::from_bigints(&pn).scale(&Rat::from_integer(c.numer().clone()));
        let den = Poly::from_bigints(&pd).scale(&Rat::from_integer(c.denom().clone()));
        let mut ns = num.fmt_var(var);
        if num.term_count() > 1 {
            ns = format!("({ns})");
        }
        let mut ds = den.fmt_var(var);
        if den.term_count() > 1 || ds.contains('*') {
            ds = format!("({ds})");
        }
        format!("{}{ns}/{ds}", if neg { "-" } else { "" })
    }

    /// Integer content-free numerator and denominator with `self = c * n / d`.
    pub fn integer_parts(&self) -> (Rat, Vec<BigInt>, Vec<BigInt>) {
        let (cn, pn) = self.num.primitive_part();
        let (cd, pd) = self.den.primitive_part();
        (cn / cd, pn, pd)
    }
}

impl Default for RatFn {
    fn default() -> Self {
        RatFn::zero()
    }
}

impl From<Poly> for RatFn {
    fn from(p: Poly) -> Self {
        RatFn::from_poly(p)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("x"))
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({self})")
    }
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, g: &RatFn) -> RatFn {
        if self.is_zero() {
            return g.clone();
        }
        if g.is_zero() {
            return self.clone();
        }
        if self.den == g.den {
            return RatFn::reduce(&self.num + &g.num, self.den.clone());
        }
        // only factors of gcd(den1, den2) can cancel
        let h = self.den.gcd(&g.den);
        if h.is_one() {
            return RatFn::coprime(
                &(&self.num * &g.den) + &(&g.num * &self.den),
                &self.den * &g.den,
            );
        }
        let d1 = self.den.div_exact(&h);
        let d2 = g.den.div_exact(&h);
        let n = &(&self.num * &d2) + &(&g.num * &d1);
        let k = n.gcd(&h);
        RatFn::coprime(
            n.div_exact(&k),
            &(&d1 * &d2) * &h.div_exact(&k),
        )
    }
}

impl Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, g: &RatFn) -> RatFn {
        self + &(-g)
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, g: &RatFn) -> RatFn {
        if self.is_zero() || g.is_zero() {
            return RatFn::zero();
        }
        if self.den.is_one() && g.den.is_one() {
            return RatFn::from_poly(&self.num * &g.num);
        }
        let g1 = self.num.gcd(&g.den);
        let g2 = g.num.gcd(&self.den);
        RatFn::coprime(
            &self.num.div_exact(&g1) * &g.num.div_exact(&g2),
            &self.den.div_exact(&g2) * &g.den.div_exact(&g1),
        )
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFn {
            type Output = RatFn;
            fn $m(self, rhs: RatFn) -> RatFn {
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

    #[test]
    fn arith_examples() {
        let inv_x = rf(&[1], &[0, 1]);
        assert_eq!(rf_arith(ArithOp::Add, &inv_x, &inv_x).unwrap(), rf(&[2], &[0, 1]));
        let a = rf(&[1, 1], &[0, 1]);
        let b = rf(&[0, 1], &[1, 1]);
        assert_eq!(rf_arith(ArithOp::Mul, &a, &b).unwrap(), RatFn::one());
        let q = rf_arith(ArithOp::Div, &rf(&[-1, 0, 1], &[1]), &rf(&[-1, 1], &[1])).unwrap();
        assert_eq!(q, rf(&[1, 1], &[1]));
        assert_eq!(&q * &rf(&[-1, 1], &[1]), rf(&[-1, 0, 1], &[1]));
    }

    #[test]
    fn divide_by_zero_is_an_error() {
        assert_eq!(
            rf_arith(ArithOp::Div, &RatFn::one(), &RatFn::zero()),
            Err(Error::DivisionByZero)
        );
        assert!(RatFn::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn derive_examples() {
        assert_eq!(rf_derive(&rf(&[0, 0, 1], &[1])), rf(&[0, 2], &[1]));
        assert_eq!(rf_derive(&rf(&[1, 0, 1], &[0, 1])), rf(&[-1, 0, 1], &[0, 0, 1]));
        assert_eq!(rf_derive(&RatFn::from_int(7)), RatFn::zero());
    }

    #[test]
    fn canonical_denominator_is_monic() {
        let f = rf(&[2], &[0, 4]);
        assert_eq!(f.den(), &Poly::x());
        assert_eq!(f.num(), &Poly::constant(rat(1, 2)));
    }

    #[test]
    fn printing_pulls_out_content() {
        assert_eq!(rf(&[1], &[0, 2]).to_string(), "1/(2*x)");
        assert_eq!(rf(&[-1], &[0, 4]).to_string(), "-1/(4*x)");
        assert_eq!(rf(&[-3, 4], &[0, 0, 16]).to_string(), "(4*x - 3)/(16*x^2)");
        assert_eq!(rf(&[-1, 0, 1], &[0, 0, 1]).to_string(), "(x^2 - 1)/x^2");
        assert_eq!(rf(&[0, 1], &[1, 1]).to_string(), "x/(x + 1)");
        assert_eq!(RatFn::constant(rat(-1, 2)).to_string(), "-1/2");
    }

    #[test]
    fn orders() {
        let f = rf(&[0, 0, 1], &[-1, 0, 1]);
        assert_eq!(f.ord_at(&Poly::x()), Some(2));
        assert_eq!(f.ord_at(&Poly::from_ints(&[1, 1])), Some(-1));
        assert_eq!(f.ord_inf(), Some(0));
        assert_eq!(RatFn::x().invert_variable(), rf(&[1], &[0, 1]));
        assert_eq!(rf(&[1], &[1, 1]).invert_variable(), rf(&[0, 1], &[1, 1]));
        assert_eq!(f.eval(&int(2)), Some(rat(4, 3)));
    }
}
