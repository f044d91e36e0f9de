//! Field arithmetic in a tower, level by level.
//!
//! A value of level `i` lives in `F_i = F_{i-1}(t_i)`. Algebraic levels store the
//! coefficient vector of the reduced representative modulo the minimal
//! polynomial; transcendental levels store a reduced fraction of polynomials in
//! `t_i` with a monic denominator. Every value is kept at the full depth of the
//! field it belongs to, so structural equality is value equality.

use super::{Kind, Tower};
use crate::error::{Error, Result};
use crate::field::{int, Rat, RatFn};
use crate::fmt_util::{has_top_level_sum, paren_factor, paren_sum};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) enum Value {
    Base(RatFn),
    /// Coefficients of `1, t, t^2, ...`, degree below that of the minimal polynomial.
    Alg(Vec<Value>),
    /// Numerator and monic denominator, coprime, as coefficient vectors in `t`.
    Frac(Vec<Value>, Vec<Value>),
}

/// Polynomials in `t_lvl` with coefficients in `F_{lvl-1}`; `lvl` below is always
/// the level of the coefficients.
pub(crate) type PolyV = Vec<Value>;

impl Tower {
    pub(crate) fn is_algebraic_level(&self, lvl: usize) -> bool {
        matches!(self.generators[lvl - 1].kind, Kind::Algebraic { .. })
    }

    pub(crate) fn v_zero(&self, lvl: usize) -> Value {
        if lvl == 0 {
            Value::Base(RatFn::zero())
        } else if self.is_algebraic_level(lvl) {
            Value::Alg(Vec::new())
        } else {
            Value::Frac(Vec::new(), vec![self.v_one(lvl - 1)])
        }
    }

    pub(crate) fn v_one(&self, lvl: usize) -> Value {
        self.v_lift(Value::Base(RatFn::one()), 0, lvl)
    }

    pub(crate) fn v_from_rat(&self, q: Rat, lvl: usize) -> Value {
        self.v_lift(Value::Base(RatFn::constant(q)), 0, lvl)
    }

    /// Embeds a value of level `from` into level `to >= from`.
    pub(crate) fn v_lift(&self, mut v: Value, from: usize, to: usize) -> Value {
        for lvl in from + 1..=to {
            let zero = self.v_is_zero(lvl - 1, &v);
            v = if self.is_algebraic_level(lvl) {
                Value::Alg(if zero { Vec::new() } else { vec![v] })
            } else {
                Value::Frac(if zero { Vec::new() } else { vec![v] }, vec![self.v_one(lvl - 1)])
            };
        }
        v
    }

    /// The generator `t_lvl` as a value of level `lvl`.
    pub(crate) fn v_gen(&self, lvl: usize) -> Value {
        let coeffs = vec![self.v_zero(lvl - 1), self.v_one(lvl - 1)];
        if self.is_algebraic_level(lvl) {
            let deg = self.minpoly(lvl).len() - 1;
            if deg == 1 {
                // t = -m_0 for a linear minimal polynomial
                let m0 = self.v_neg(lvl - 1, &self.minpoly(lvl)[0]);
                return self.v_lift(m0, lvl - 1, lvl);
            }
            Value::Alg(coeffs)
        } else {
            Value::Frac(coeffs, vec![self.v_one(lvl - 1)])
        }
    }

    pub(crate) fn minpoly(&self, lvl: usize) -> &PolyV {
        match &self.generators[lvl - 1].kind {
            Kind::Algebraic { minpoly } => minpoly,
            _ => unreachable!("not an algebraic level"),
        }
    }

    pub(crate) fn v_is_zero(&self, _lvl: usize, v: &Value) -> bool {
        match v {
            Value::Base(r) => r.is_zero(),
            Value::Alg(c) => c.is_empty(),
            Value::Frac(n, _) => n.is_empty(),
        }
    }

    pub(crate) fn v_is_one(&self, lvl: usize, v: &Value) -> bool {
        *v == self.v_one(lvl)
    }

    pub(crate) fn v_add(&self, lvl: usize, a: &Value, b: &Value) -> Value {
        match (a, b) {
            (Value::Base(x), Value::Base(y)) => Value::Base(x + y),
            (Value::Alg(x), Value::Alg(y)) => Value::Alg(self.p_add(lvl - 1, x, y)),
            (Value::Frac(n1, d1), Value::Frac(n2, d2)) => {
                if d1 == d2 {
                    return self.normalize_frac_by(lvl, self.p_add(lvl - 1, n1, n2), d1.clone(), &[d1]);
                }
                let k = lvl - 1;
                // only factors of gcd(d1, d2) can cancel
                let h = if d1.len() == 1 || d2.len() == 1 {
                    vec![self.v_one(k)]
                } else {
                    self.p_gcd(k, d1, d2)
                };
                let e1 = self.p_div_exact(k, d1, &h);
                let e2 = self.p_div_exact(k, d2, &h);
                let n = self.p_add(k, &self.p_mul(k, n1, &e2), &self.p_mul(k, n2, &e1));
                if n.is_empty() {
                    return self.v_zero(lvl);
                }
                let d = self.p_mul(k, &self.p_mul(k, &e1, &e2), &h);
                self.normalize_frac_by(lvl, n, d, &[&h])
            }
            _ => unreachable!("mismatched value shapes"),
        }
    }

    pub(crate) fn v_neg(&self, lvl: usize, a: &Value) -> Value {
        match a {
            Value::Base(x) => Value::Base(-x),
            Value::Alg(x) => Value::Alg(self.p_neg(lvl - 1, x)),
            Value::Frac(n, d) => Value::Frac(self.p_neg(lvl - 1, n), d.clone()),
        }
    }

    pub(crate) fn v_sub(&self, lvl: usize, a: &Value, b: &Value) -> Value {
        self.v_add(lvl, a, &self.v_neg(lvl, b))
    }

    pub(crate) fn v_mul(&self, lvl: usize, a: &Value, b: &Value) -> Value {
        match (a, b) {
            (Value::Base(x), Value::Base(y)) => Value::Base(x * y),
            (Value::Alg(x), Value::Alg(y)) => {
                let p = self.p_mul(lvl - 1, x, y);
                Value::Alg(self.p_rem(lvl - 1, &p, self.minpoly(lvl)))
            }
            (Value::Frac(n1, d1), Value::Frac(n2, d2)) => {
                if self.v_is_zero(lvl, a) || self.v_is_zero(lvl, b) {
                    return self.v_zero(lvl);
                }
                // cross-cancel before multiplying
                let (n1, d2) = self.p_cancel(lvl - 1, n1.clone(), d2.clone(), d2);
                let (n2, d1) = self.p_cancel(lvl - 1, n2.clone(), d1.clone(), d1);
                let n = self.p_mul(lvl - 1, &n1, &n2);
                let d = self.p_mul(lvl - 1, &d1, &d2);
                self.make_monic_frac(lvl, n, d)
            }
            _ => unreachable!("mismatched value shapes"),
        }
    }

    pub(crate) fn v_scale_rat(&self, lvl: usize, a: &Value, q: &Rat) -> Value {
        self.v_mul(lvl, a, &self.v_from_rat(q.clone(), lvl))
    }

    pub(crate) fn v_inv(&self, lvl: usize, a: &Value) -> Result<Value> {
        if self.v_is_zero(lvl, a) {
            return Err(Error::DivisionByZero);
        }
        match a {
            Value::Base(x) => Ok(Value::Base(x.inv()?)),
            Value::Alg(x) => {
                let (g, s) = self.p_ext_gcd(lvl - 1, x, self.minpoly(lvl))?;
                if g.len() != 1 {
                    return Err(Error::IllFormedTower(format!(
                        "minimal polynomial of {} is reducible: a zero divisor was inverted",
                        self.generators[lvl - 1].name
                    )));
                }
                Ok(Value::Alg(self.p_rem(lvl - 1, &s, self.minpoly(lvl))))
            }
            Value::Frac(n, d) => Ok(self.make_monic_frac(lvl, d.clone(), n.clone())),
        }
    }

    pub(crate) fn v_div(&self, lvl: usize, a: &Value, b: &Value) -> Result<Value> {
        Ok(self.v_mul(lvl, a, &self.v_inv(lvl, b)?))
    }

    pub(crate) fn v_pow(&self, lvl: usize, a: &Value, e: i64) -> Result<Value> {
        let base = if e < 0 { self.v_inv(lvl, a)? } else { a.clone() };
        let mut acc = self.v_one(lvl);
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.v_mul(lvl, &acc, &sq);
            }
            k >>= 1;
            if k > 0 {
                sq = self.v_mul(lvl, &sq, &sq);
            }
        }
        Ok(acc)
    }

    /// The derivation on `F_lvl`.
    pub(crate) fn v_derive(&self, lvl: usize, a: &Value) -> Value {
        match a {
            Value::Base(x) => Value::Base(x.derive()),
            Value::Alg(c) => {
                let coeff_part = Value::Alg(self.p_coeff_derive(lvl - 1, c));
                let dt = Value::Alg(self.p_t_derivative(lvl - 1, c));
                let tp = &self.generators[lvl - 1].derivative;
                self.v_add(lvl, &coeff_part, &self.v_mul(lvl, &dt, tp))
            }
            Value::Frac(n, d) => {
                let dn = self.poly_derive(lvl, n);
                if d.len() == 1 {
                    // constant denominators are 1
                    return dn;
                }
                let dd = self.poly_derive(lvl, d);
                match (&dn, &dd) {
                    (Value::Frac(pn, qn), Value::Frac(pd, qd)) if qn.len() == 1 && qd.len() == 1 => {
                        // (n'd - nd') / d^2 with both derivatives polynomial in t
                        let num = self.p_sub(lvl - 1, &self.p_mul(lvl - 1, pn, d), &self.p_mul(lvl - 1, n, pd));
                        let den = self.p_mul(lvl - 1, d, d);
                        // n and d are coprime, so a common factor of num and d divides d'
                        let h = self.p_gcd(lvl - 1, d, pd);
                        self.normalize_frac_by(lvl, num, den, &[&h])
                    }
                    _ => {
                        let nv = Value::Frac(n.clone(), vec![self.v_one(lvl - 1)]);
                        let dv = Value::Frac(d.clone(), vec![self.v_one(lvl - 1)]);
                        let num = self.v_sub(lvl, &self.v_mul(lvl, &dn, &dv), &self.v_mul(lvl, &nv, &dd));
                        let den = self.v_mul(lvl, &dv, &dv);
                        self.v_div(lvl, &num, &den).expect("nonzero denominator")
                    }
                }
            }
        }
    }

    /// Derivative of the polynomial `p(t_lvl)` as a value of level `lvl`.
    fn poly_derive(&self, lvl: usize, p: &PolyV) -> Value {
        let one = vec![self.v_one(lvl - 1)];
        let coeff_part = self.normalize_frac(lvl, self.p_coeff_derive(lvl - 1, p), one.clone());
        let dt = self.p_t_derivative(lvl - 1, p);
        if dt.is_empty() {
            return coeff_part;
        }
        let dt = self.normalize_frac(lvl, dt, one);
        let tp = &self.generators[lvl - 1].derivative;
        self.v_add(lvl, &coeff_part, &self.v_mul(lvl, &dt, tp))
    }

    fn make_monic_frac(&self, lvl: usize, n: PolyV, d: PolyV) -> Value {
        let lc = d.last().expect("nonzero denominator").clone();
        if self.v_is_one(lvl - 1, &lc) {
            return Value::Frac(n, d);
        }
        let inv = self.v_inv(lvl - 1, &lc).expect("nonzero leading coefficient");
        Value::Frac(self.p_scale(lvl - 1, &n, &inv), self.p_scale(lvl - 1, &d, &inv))
    }

    /// Like `normalize_frac`, for a denominator whose irreducible factors all
    /// divide one of `factors`; coprimality with each factor settles the common case
    /// without a gcd against the full denominator.
    /// Normalizes `n/d` when every common factor of `n` and `d` is known to divide
    /// one of `factors`.
    fn normalize_frac_by(&self, lvl: usize, n: PolyV, d: PolyV, factors: &[&PolyV]) -> Value {
        let mut n = self.p_trim(lvl - 1, n);
        if n.is_empty() {
            return self.v_zero(lvl);
        }
        let mut d = d;
        for f in factors {
            (n, d) = self.p_cancel(lvl - 1, n, d, f);
        }
        self.make_monic_frac(lvl, n, d)
    }

    /// Removes from `n` and `d` their common factors built from irreducible factors
    /// of `f`. Only remainders modulo the squarefree part of `f` involve `n`, which
    /// keeps this cheap when `f` is small and `n` is not.
    fn p_cancel(&self, lvl: usize, mut n: PolyV, mut d: PolyV, f: &PolyV) -> (PolyV, PolyV) {
        if f.len() <= 1 || d.len() <= 1 {
            return (n, d);
        }
        let sf = if f.len() == 2 {
            f.clone()
        } else {
            let g = self.p_gcd(lvl, f, &self.p_t_derivative(lvl, f));
            self.p_div_exact(lvl, f, &g)
        };
        loop {
            let g = self.p_gcd(lvl, &n, &sf);
            let g = if g.len() == 1 { g } else { self.p_gcd(lvl, &g, &d) };
            if g.len() == 1 {
                return (n, d);
            }
            n = self.p_div_exact(lvl, &n, &g);
            d = self.p_div_exact(lvl, &d, &g);
        }
    }

    pub(crate) fn normalize_frac(&self, lvl: usize, n: PolyV, d: PolyV) -> Value {
        let n = self.p_trim(lvl - 1, n);
        if n.is_empty() {
            return self.v_zero(lvl);
        }
        if d.len() == 1 {
            return self.make_monic_frac(lvl, n, d);
        }
        let g = self.p_gcd(lvl - 1, &n, &d);
        if g.len() == 1 {
            return self.make_monic_frac(lvl, n, d);
        }
        let n = self.p_div_exact(lvl - 1, &n, &g);
        let d = self.p_div_exact(lvl - 1, &d, &g);
        self.make_monic_frac(lvl, n, d)
    }

    // Polynomials over F_lvl.

    pub(crate) fn p_trim(&self, lvl: usize, mut p: PolyV) -> PolyV {
        while p.last().is_some_and(|c| self.v_is_zero(lvl, c)) {
            p.pop();
        }
        p
    }

    pub(crate) fn p_add(&self, lvl: usize, a: &PolyV, b: &PolyV) -> PolyV {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|k| match (a.get(k), b.get(k)) {
                (Some(x), Some(y)) => self.v_add(lvl, x, y),
                (Some(x), None) | (None, Some(x)) => x.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        self.p_trim(lvl, out)
    }

    pub(crate) fn p_neg(&self, lvl: usize, a: &PolyV) -> PolyV {
        a.iter().map(|c| self.v_neg(lvl, c)).collect()
    }

    pub(crate) fn p_sub(&self, lvl: usize, a: &PolyV, b: &PolyV) -> PolyV {
        self.p_add(lvl, a, &self.p_neg(lvl, b))
    }

    pub(crate) fn p_scale(&self, lvl: usize, a: &PolyV, c: &Value) -> PolyV {
        let out = a.iter().map(|x| self.v_mul(lvl, x, c)).collect();
        self.p_trim(lvl, out)
    }

    pub(crate) fn p_mul(&self, lvl: usize, a: &PolyV, b: &PolyV) -> PolyV {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.v_zero(lvl); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.v_is_zero(lvl, x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if self.v_is_zero(lvl, y) {
                    continue;
                }
                out[i + j] = self.v_add(lvl, &out[i + j], &self.v_mul(lvl, x, y));
            }
        }
        self.p_trim(lvl, out)
    }

    pub(crate) fn p_divrem(&self, lvl: usize, a: &PolyV, d: &PolyV) -> (PolyV, PolyV) {
        let dd = d.len() - 1;
        let lc = d.last().expect("nonzero divisor");
        let inv = if self.v_is_one(lvl, lc) {
            None
        } else {
            Some(self.v_inv(lvl, lc).expect("nonzero leading coefficient"))
        };
        let mut r = a.clone();
        let mut q = vec![self.v_zero(lvl); r.len().saturating_sub(dd)];
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let top = r.last().unwrap();
            let c = match &inv {
                Some(inv) => self.v_mul(lvl, top, inv),
                None => top.clone(),
            };
            for (j, dc) in d.iter().enumerate() {
                r[k + j] = self.v_sub(lvl, &r[k + j], &self.v_mul(lvl, &c, dc));
            }
            q[k] = c;
            r.pop();
            r = self.p_trim(lvl, r);
        }
        (self.p_trim(lvl, q), r)
    }

    pub(crate) fn p_rem(&self, lvl: usize, a: &PolyV, d: &PolyV) -> PolyV {
        if a.len() < d.len() {
            return a.clone();
        }
        self.p_divrem(lvl, a, d).1
    }

    pub(crate) fn p_div_exact(&self, lvl: usize, a: &PolyV, d: &PolyV) -> PolyV {
        if d.len() == 1 && self.v_is_one(lvl, &d[0]) {
            return a.clone();
        }
        self.p_divrem(lvl, a, d).0
    }

    pub(crate) fn p_monic(&self, lvl: usize, a: &PolyV) -> PolyV {
        match a.last() {
            None => Vec::new(),
            Some(lc) if self.v_is_one(lvl, lc) => a.clone(),
            Some(lc) => {
                let inv = self.v_inv(lvl, lc).expect("nonzero");
                self.p_scale(lvl, a, &inv)
            }
        }
    }

    /// Monic gcd.
    pub(crate) fn p_gcd(&self, lvl: usize, a: &PolyV, b: &PolyV) -> PolyV {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            if b.len() == 1 {
                return vec![self.v_one(lvl)];
            }
            let r = self.p_rem(lvl, &a, &b);
            a = b;
            b = self.p_monic(lvl, &r);
        }
        if a.is_empty() {
            return a;
        }
        self.p_monic(lvl, &a)
    }

    /// Returns `(g, s)` with `s·a ≡ g (mod m)`, `g` the monic gcd.
    pub(crate) fn p_ext_gcd(&self, lvl: usize, a: &PolyV, m: &PolyV) -> Result<(PolyV, PolyV)> {
        let (mut r0, mut r1) = (m.clone(), a.clone());
        let (mut s0, mut s1): (PolyV, PolyV) = (Vec::new(), vec![self.v_one(lvl)]);
        while !r1.is_empty() {
            let (q, r) = self.p_divrem(lvl, &r0, &r1);
            let s = self.p_sub(lvl, &s0, &self.p_mul(lvl, &q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        let lc = r0.last().ok_or(Error::DivisionByZero)?.clone();
        let inv = self.v_inv(lvl, &lc)?;
        Ok((self.p_scale(lvl, &r0, &inv), self.p_scale(lvl, &s0, &inv)))
    }

    pub(crate) fn p_coeff_derive(&self, lvl: usize, p: &PolyV) -> PolyV {
        let out = p.iter().map(|c| self.v_derive(lvl, c)).collect();
        self.p_trim(lvl, out)
    }

    /// Formal derivative in `t`.
    pub(crate) fn p_t_derivative(&self, lvl: usize, p: &PolyV) -> PolyV {
        let out = p
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| self.v_scale_rat(lvl, c, &int(k as i64)))
            .collect();
        self.p_trim(lvl, out)
    }

    /// Evaluates the polynomial `p` (coefficients at `lvl - 1`) at the value `at`
    /// of level `lvl`.
    pub(crate) fn p_eval(&self, lvl: usize, p: &PolyV, at: &Value) -> Value {
        let mut acc = self.v_zero(lvl);
        for c in p.iter().rev() {
            acc = self.v_add(lvl, &self.v_mul(lvl, &acc, at), &self.v_lift(c.clone(), lvl - 1, lvl));
        }
        acc
    }

    // Printing.

    pub(crate) fn v_fmt(&self, lvl: usize, v: &Value) -> String {
        match v {
            Value::Base(r) => r.to_string(),
            Value::Alg(c) => self.p_fmt(lvl - 1, c, &self.generators[lvl - 1].name),
            Value::Frac(n, d) => {
                let name = &self.generators[lvl - 1].name;
                let ns = self.p_fmt(lvl - 1, n, name);
                if d.len() == 1 {
                    return ns;
                }
                let ds = self.p_fmt(lvl - 1, d, name);
                let ns = if has_top_level_sum(&ns) { format!("({ns})") } else { ns };
                let simple_den = ds.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                let ds = if simple_den { ds } else { format!("({ds})") };
                format!("{ns}/{ds}")
            }
        }
    }

    pub(crate) fn p_fmt(&self, lvl: usize, p: &PolyV, name: &str) -> String {
        let mut terms: Vec<(bool, String)> = Vec::new();
        for (k, c) in p.iter().enumerate().rev() {
            if self.v_is_zero(lvl, c) {
                continue;
            }
            let s = self.v_fmt(lvl, c);
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) if !has_top_level_sum(&s) => (true, rest.to_string()),
                _ => (false, s),
            };
            let power = match k {
                0 => String::new(),
                1 => name.to_string(),
                _ => format!("{name}^{k}"),
            };
            let term = if k == 0 {
                paren_sum(mag)
            } else if mag == "1" {
                power
            } else {
                format!("{}*{power}", paren_factor(mag))
            };
            terms.push((neg, term));
        }
        crate::fmt_util::join_terms(&terms)
    }
}
