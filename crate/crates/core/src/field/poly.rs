//! Dense univariate polynomials over ℚ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{int, Rat};

/// Dense polynomial in `x` with rational coefficients, `coeffs[k]` multiplying `x^k`.
///
/// Trailing zeros are always trimmed, so the zero polynomial has an empty coefficient
/// vector and structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly::monomial(Rat::one(), 1)
    }

    pub fn constant(c: Rat) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn monomial(c: Rat, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Coefficients in increasing degree, from small integers.
    pub fn from_ints(cs: &[i64]) -> Self {
        Poly::from_coeffs(cs.iter().map(|&c| int(c)).collect())
    }

    /// `x - c`.
    pub fn linear_root(c: Rat) -> Self {
        Poly::from_coeffs(vec![-c, Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to `-1`.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lc(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn eval(&self, at: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiply by `x^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = self.lc().recip();
        self.scale(&inv)
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() < d.coeffs.len() {
            return (Poly::zero(), self.clone());
        }
        let inv = d.lc().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Quotient when `d` is known to divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        if d.is_one() {
            return self.clone();
        }
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Poly::one();
        }
        // primitive remainder sequence over the integers
        let (_, mut a) = self.primitive_part();
        let (_, mut b) = other.primitive_part();
        if super::modp::certainly_coprime(&a, &b) {
            return Poly::one();
        }
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while b.len() > 1 {
            let r = int_pseudo_rem(&a, &b);
            if r.is_empty() {
                return Poly::from_bigints(&b).monic();
            }
            a = b;
            b = int_primitive(r);
        }
        Poly::one()
    }

    /// Resultant of `self` and `other`, by the Euclidean remainder sequence.
    pub fn resultant(&self, other: &Poly) -> Rat {
        if self.is_zero() || other.is_zero() {
            return Rat::zero();
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut acc = Rat::one();
        loop {
            let (m, n) = (a.degree().unwrap(), b.degree().unwrap());
            if n == 0 {
                return acc * num_traits::pow(b.lc(), m);
            }
            let r = a.rem(&b);
            if r.is_zero() {
                return Rat::zero();
            }
            // res(a, b) = (-1)^(mn) lc(b)^(m - deg r) res(b, r)
            if m * n % 2 == 1 {
                acc = -acc;
            }
            acc *= num_traits::pow(b.lc(), m - r.degree().unwrap());
            a = b;
            b = r;
        }
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        (self * other).div_exact(&self.gcd(other)).monic()
    }

    /// Inverse of `self` modulo `m`, when the two are coprime.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.rem(m).ext_gcd(m);
        if g.is_one() {
            Some(s.rem(m))
        } else {
            None
        }
    }

    /// `p(x + c)`.
    pub fn taylor_shift(&self, c: &Rat) -> Poly {
        let mut acc = Poly::zero();
        let lin = Poly::from_coeffs(vec![c.clone(), Rat::one()]);
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Poly::constant(a.clone());
        }
        acc
    }

    /// `x^deg * p(1/x)`, i.e. the coefficient sequence reversed.
    pub fn reversed(&self) -> Poly {
        let mut c = self.coeffs.clone();
        c.reverse();
        Poly::from_coeffs(c)
    }

    /// Composition `self(inner)`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(a.clone());
        }
        acc
    }

    /// Multiplicity of the nonconstant factor `q` in `self` (nonzero).
    pub fn multiplicity(&self, q: &Poly) -> u32 {
        debug_assert!(!q.is_constant());
        let mut p = self.clone();
        let mut m = 0;
        loop {
            let (quot, r) = p.div_rem(q);
            if !r.is_zero() {
                return m;
            }
            p = quot;
            m += 1;
        }
    }

    /// Order of vanishing at `x = 0` (`None` for zero).
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Scale to a primitive integer polynomial with positive leading coefficient.
    /// Returns `(c, p)` where `self = c * p`.
    pub fn primitive_part(&self) -> (Rat, Vec<BigInt>) {
        if self.is_zero() {
            return (Rat::zero(), Vec::new());
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rat::from_integer(den.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        let prim: Vec<BigInt> = ints.iter().map(|c| c / &g).collect();
        (Rat::new(g, den), prim)
    }

    pub fn from_bigints(cs: &[BigInt]) -> Poly {
        Poly::from_coeffs(cs.iter().map(|c| Rat::from_integer(c.clone())).collect())
    }

    /// Formats with the given variable name, e.g. `x^2 - 1/2*x + 3`.
    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let power = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if k == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&power);
            } else {
                out.push_str(&format!("{mag}*{power}"));
            }
        }
        out
    }
}

/// Divides out the content, leaving a positive leading coefficient.
fn int_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if v.last().is_some_and(Signed::is_negative) {
        g = -g;
    }
    if !g.is_one() {
        for c in v.iter_mut() {
            *c /= &g;
        }
    }
    v
}

/// Pseudo-remainder of integer coefficient vectors, trailing zeros trimmed.
fn int_pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let lb = b.last().expect("nonzero divisor");
    let db = b.len() - 1;
    let mut r = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let top = r.last().unwrap().clone();
        let k = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bc) in b.iter().enumerate() {
            r[k + j] -= &top * bc;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("x"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k);
            let b = rhs.coeffs.get(k);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::from_coeffs(out)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
