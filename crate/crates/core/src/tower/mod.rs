//! Differential field extensions of ℚ(x) given by towers of generators, and
//! exact arithmetic with their elements.
//!
//! Non-algebraic generators are treated as independent indeterminates over the
//! field generated by the earlier ones; the tower description asserts this with
//! its `independent` flag.

mod annihilator;
mod value;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub(crate) use annihilator::linear_relations;
pub use annihilator::{minimal_annihilator, AnnihilatorConfig, AnnihilatorResult};
pub(crate) use value::{PolyV, Value};

use crate::error::{Error, Result};
use crate::expr::{evaluate, parse_expr, EvalContext, Pos};
use crate::field::{ArithOp, Rat, RatFn};
use crate::ore::Differential;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Kind {
    /// Monic minimal polynomial, coefficients in the previous level.
    Algebraic { minpoly: PolyV },
    /// `t' = b` with `b` in the previous level.
    Primitive { b: Value },
    /// `t' = a t` with `a` in the previous level.
    Exponential { a: Value },
    /// `t' = rhs` with `rhs` in this level.
    RationalOde { rhs: Value },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Generator {
    pub(crate) name: String,
    pub(crate) kind: Kind,
    /// `t'` as a value of this generator's level.
    pub(crate) derivative: Value,
}

/// Generator kinds as they appear in tower descriptions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Algebraic,
    Primitive,
    Exponential,
    RationalOde,
}

impl GeneratorKind {
    pub fn is_transcendental(self) -> bool {
        !matches!(self, GeneratorKind::Algebraic)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub kind: GeneratorKind,
    pub data: String,
    #[serde(default = "default_true")]
    pub independent: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub generators: Vec<GeneratorSpec>,
}

impl TowerSpec {
    pub fn from_json(text: &str) -> Result<TowerSpec> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }
}

/// A differential field `F(t_1, ..., t_n)` over `F = ℚ(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tower {
    pub(crate) generators: Vec<Generator>,
}

fn check_name(name: &str, seen: &[Generator]) -> Result<()> {
    let valid = name
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_lowercase())
        && name.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_');
    if !valid || name == "x" {
        return Err(Error::IllFormedTower(format!("invalid generator name '{name}'")));
    }
    if seen.iter().any(|g| g.name == name) {
        return Err(Error::IllFormedTower(format!("duplicate generator name '{name}'")));
    }
    Ok(())
}

fn ill_formed(name: &str, e: Error) -> Error {
    match e {
        Error::Parse { line, column, message } => {
            Error::IllFormedTower(format!("{name}: {message} at line {line}, column {column}"))
        }
        Error::DivisionByZero => Error::IllFormedTower(format!("{name}: zero denominator")),
        Error::IllFormedTower(m) => Error::IllFormedTower(m),
        other => Error::IllFormedTower(format!("{name}: {other}")),
    }
}

impl Tower {
    /// The base field ℚ(x) with no generators.
    pub fn base() -> Tower {
        Tower { generators: Vec::new() }
    }

    pub fn build(spec: &TowerSpec) -> Result<Tower> {
        let mut tower = Tower::base();
        for g in &spec.generators {
            tower = tower.push(g)?;
        }
        Ok(tower)
    }

    pub fn from_json(text: &str) -> Result<Tower> {
        Tower::build(&TowerSpec::from_json(text)?)
    }

    pub fn depth(&self) -> usize {
        self.generators.len()
    }

    /// Number of non-algebraic generators.
    pub fn transcendence_degree(&self) -> usize {
        self.generators
            .iter()
            .filter(|g| !matches!(g.kind, Kind::Algebraic { .. }))
            .count()
    }

    pub fn names(&self) -> Vec<&str> {
        self.generators.iter().map(|g| g.name.as_str()).collect()
    }

    pub fn kind_of(&self, name: &str) -> Option<GeneratorKind> {
        self.generators.iter().find(|g| g.name == name).map(|g| match g.kind {
            Kind::Algebraic { .. } => GeneratorKind::Algebraic,
            Kind::Primitive { .. } => GeneratorKind::Primitive,
            Kind::Exponential { .. } => GeneratorKind::Exponential,
            Kind::RationalOde { .. } => GeneratorKind::RationalOde,
        })
    }

    /// Adds one generator on top.
    fn push(&self, spec: &GeneratorSpec) -> Result<Tower> {
        check_name(&spec.name, &self.generators)?;
        if spec.kind.is_transcendental() && !spec.independent {
            return Err(Error::IllFormedTower(format!(
                "{}: generators must be asserted independent",
                spec.name
            )));
        }
        let lvl = self.depth() + 1;
        let name = spec.name.as_str();
        let expr = parse_expr(&spec.data).map_err(|e| ill_formed(name, e))?;
        let placeholder = |gen_name: &str, kind: Kind| {
            let mut t = self.clone();
            t.generators.push(Generator {
                name: gen_name.to_string(),
                kind,
                derivative: Value::Base(RatFn::zero()),
            });
            // a zero derivative at the right shape
            let zero = t.v_zero(lvl);
            t.generators[lvl - 1].derivative = zero;
            t
        };
        let mut out = self.clone();
        match spec.kind {
            GeneratorKind::Algebraic => {
                let temp = placeholder(
                    "T",
                    Kind::Primitive {
                        b: self.v_zero(lvl - 1),
                    },
                );
                let v = evaluate(&expr, &temp.ctx(lvl)).map_err(|e| ill_formed(name, e))?;
                let Value::Frac(n, d) = v else { unreachable!() };
                if d.len() != 1 || n.len() < 2 {
                    return Err(Error::IllFormedTower(format!(
                        "{name}: minimal polynomial must be a polynomial of positive degree in T"
                    )));
                }
                let m = self.p_monic(lvl - 1, &n);
                let dm = self.p_t_derivative(lvl - 1, &m);
                if self.p_gcd(lvl - 1, &m, &dm).len() != 1 {
                    return Err(Error::IllFormedTower(format!("{name}: minimal polynomial is not squarefree")));
                }
                out.generators.push(Generator {
                    name: name.to_string(),
                    kind: Kind::Algebraic { minpoly: m.clone() },
                    derivative: Value::Alg(Vec::new()),
                });
                // implicit differentiation: t' = -m^D(t) / m_T(t)
                let t = out.v_gen(lvl);
                let md = out.p_eval(lvl, &out.p_coeff_derive(lvl - 1, &m), &t);
                let mt = out.p_eval(lvl, &dm, &t);
                let deriv = out.v_div(lvl, &out.v_neg(lvl, &md), &mt).map_err(|e| ill_formed(name, e))?;
                out.generators[lvl - 1].derivative = deriv;
            }
            GeneratorKind::Primitive | GeneratorKind::Exponential => {
                let a = evaluate(&expr, &self.ctx(lvl - 1)).map_err(|e| ill_formed(name, e))?;
                let kind = if spec.kind == GeneratorKind::Primitive {
                    Kind::Primitive { b: a.clone() }
                } else {
                    Kind::Exponential { a: a.clone() }
                };
                out.generators.push(Generator {
                    name: name.to_string(),
                    kind,
                    derivative: Value::Base(RatFn::zero()),
                });
                let lifted = out.v_lift(a, lvl - 1, lvl);
                let deriv = if spec.kind == GeneratorKind::Primitive {
                    lifted
                } else {
                    out.v_mul(lvl, &lifted, &out.v_gen(lvl))
                };
                out.generators[lvl - 1].derivative = deriv;
            }
            GeneratorKind::RationalOde => {
                let temp = placeholder(
                    name,
                    Kind::RationalOde {
                        rhs: Value::Base(RatFn::zero()),
                    },
                );
                let rhs = evaluate(&expr, &temp.ctx(lvl)).map_err(|e| ill_formed(name, e))?;
                out.generators.push(Generator {
                    name: name.to_string(),
                    kind: Kind::RationalOde { rhs: rhs.clone() },
                    derivative: rhs,
                });
            }
        }
        Ok(out)
    }

    /// The description this tower was built from, in canonical printed form.
    pub fn to_spec(&self) -> TowerSpec {
        let generators = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let lvl = i + 1;
                let (kind, data) = match &g.kind {
                    Kind::Algebraic { minpoly } => (GeneratorKind::Algebraic, self.p_fmt(lvl - 1, minpoly, "T")),
                    Kind::Primitive { b } => (GeneratorKind::Primitive, self.v_fmt(lvl - 1, b)),
                    Kind::Exponential { a } => (GeneratorKind::Exponential, self.v_fmt(lvl - 1, a)),
                    Kind::RationalOde { rhs } => (GeneratorKind::RationalOde, self.v_fmt(lvl, rhs)),
                };
                GeneratorSpec {
                    name: g.name.clone(),
                    kind,
                    data,
                    independent: true,
                }
            })
            .collect();
        TowerSpec { generators }
    }

    /// Printed derivative of each generator, in tower order.
    pub fn generator_derivatives(&self) -> Vec<(String, String)> {
        self.generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g.name.clone(), self.v_fmt(i + 1, &g.derivative)))
            .collect()
    }

    fn ctx(&self, lvl: usize) -> TowerCtx<'_> {
        TowerCtx { tower: self, lvl }
    }
}

/// Evaluates expressions at a given level of a tower.
struct TowerCtx<'a> {
    tower: &'a Tower,
    lvl: usize,
}

impl EvalContext for TowerCtx<'_> {
    type V = Value;
    fn int(&self, n: &BigInt) -> Value {
        self.tower.v_from_rat(Rat::from_integer(n.clone()), self.lvl)
    }
    fn var(&self, name: &str, pos: Pos) -> Result<Value> {
        if name == "x" {
            return Ok(self.tower.v_lift(Value::Base(RatFn::x()), 0, self.lvl));
        }
        if name == "D" {
            return Err(Error::DInCoefficient {
                line: pos.line,
                column: pos.column,
            });
        }
        let found = self.tower.generators[..self.lvl]
            .iter()
            .position(|g| g.name == name);
        match found {
            Some(i) => Ok(self.tower.v_lift(self.tower.v_gen(i + 1), i + 1, self.lvl)),
            None => Err(Error::Parse {
                line: pos.line,
                column: pos.column,
                message: format!("unknown name '{name}'"),
            }),
        }
    }
    fn add(&self, a: &Value, b: &Value) -> Result<Value> {
        Ok(self.tower.v_add(self.lvl, a, b))
    }
    fn sub(&self, a: &Value, b: &Value) -> Result<Value> {
        Ok(self.tower.v_sub(self.lvl, a, b))
    }
    fn mul(&self, a: &Value, b: &Value) -> Result<Value> {
        Ok(self.tower.v_mul(self.lvl, a, b))
    }
    fn neg(&self, a: &Value) -> Result<Value> {
        Ok(self.tower.v_neg(self.lvl, a))
    }
    fn div(&self, a: &Value, b: &Value, _pos: Pos) -> Result<Value> {
        self.tower.v_div(self.lvl, a, b)
    }
    fn pow(&self, a: &Value, e: i64, _pos: Pos) -> Result<Value> {
        self.tower.v_pow(self.lvl, a, e)
    }
}

/// An element of the top field of a tower.
#[derive(Clone)]
pub struct TowerElem {
    tower: Arc<Tower>,
    value: Value,
}

impl Tower {
    pub fn into_shared(self) -> Arc<Tower> {
        Arc::new(self)
    }
}

impl TowerElem {
    pub fn parse(tower: &Arc<Tower>, text: &str) -> Result<TowerElem> {
        let lvl = tower.depth();
        let value = evaluate(&parse_expr(text)?, &tower.ctx(lvl))?;
        Ok(TowerElem {
            tower: tower.clone(),
            value,
        })
    }

    pub fn from_ratfn(tower: &Arc<Tower>, f: &RatFn) -> TowerElem {
        TowerElem {
            tower: tower.clone(),
            value: tower.v_lift(Value::Base(f.clone()), 0, tower.depth()),
        }
    }

    pub fn from_rat(tower: &Arc<Tower>, q: Rat) -> TowerElem {
        TowerElem::from_ratfn(tower, &RatFn::constant(q))
    }

    pub fn generator(tower: &Arc<Tower>, name: &str) -> Result<TowerElem> {
        let i = tower
            .generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::InvalidInput(format!("no generator named {name}")))?;
        Ok(TowerElem {
            tower: tower.clone(),
            value: tower.v_lift(tower.v_gen(i + 1), i + 1, tower.depth()),
        })
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub(crate) fn value(&self) -> &Value {
        &self.value
    }

    pub(crate) fn with_value(&self, value: Value) -> TowerElem {
        TowerElem {
            tower: self.tower.clone(),
            value,
        }
    }

    fn lvl(&self) -> usize {
        self.tower.depth()
    }

    fn same_tower(&self, other: &TowerElem) -> Result<()> {
        if Arc::ptr_eq(&self.tower, &other.tower) || self.tower == other.tower {
            Ok(())
        } else {
            Err(Error::TowerMismatch)
        }
    }

    pub fn add(&self, o: &TowerElem) -> Result<TowerElem> {
        self.same_tower(o)?;
        Ok(self.with_value(self.tower.v_add(self.lvl(), &self.value, &o.value)))
    }

    pub fn sub(&self, o: &TowerElem) -> Result<TowerElem> {
        self.same_tower(o)?;
        Ok(self.with_value(self.tower.v_sub(self.lvl(), &self.value, &o.value)))
    }

    pub fn mul(&self, o: &TowerElem) -> Result<TowerElem> {
        self.same_tower(o)?;
        Ok(self.with_value(self.tower.v_mul(self.lvl(), &self.value, &o.value)))
    }

    pub fn div(&self, o: &TowerElem) -> Result<TowerElem> {
        self.same_tower(o)?;
        Ok(self.with_value(self.tower.v_div(self.lvl(), &self.value, &o.value)?))
    }

    pub fn neg(&self) -> TowerElem {
        self.with_value(self.tower.v_neg(self.lvl(), &self.value))
    }

    pub fn inv(&self) -> Result<TowerElem> {
        Ok(self.with_value(self.tower.v_inv(self.lvl(), &self.value)?))
    }

    pub fn pow(&self, e: i64) -> Result<TowerElem> {
        Ok(self.with_value(self.tower.v_pow(self.lvl(), &self.value, e)?))
    }

    pub fn scale(&self, f: &RatFn) -> TowerElem {
        let lifted = self.tower.v_lift(Value::Base(f.clone()), 0, self.lvl());
        self.with_value(self.tower.v_mul(self.lvl(), &self.value, &lifted))
    }

    pub fn derive(&self) -> TowerElem {
        self.with_value(self.tower.v_derive(self.lvl(), &self.value))
    }

    pub fn is_zero(&self) -> bool {
        self.tower.v_is_zero(self.lvl(), &self.value)
    }

    /// The element as a rational function, when it lies in ℚ(x).
    pub fn as_ratfn(&self) -> Option<RatFn> {
        let mut v = &self.value;
        loop {
            match v {
                Value::Base(r) => return Some(r.clone()),
                Value::Alg(c) => match c.len() {
                    0 => return Some(RatFn::zero()),
                    1 => v = &c[0],
                    _ => return None,
                },
                Value::Frac(n, d) => {
                    if d.len() != 1 {
                        return None;
                    }
                    match n.len() {
                        0 => return Some(RatFn::zero()),
                        1 => v = &n[0],
                        _ => return None,
                    }
                }
            }
        }
    }
}

pub fn elem_arith(op: ArithOp, u: &TowerElem, v: &TowerElem) -> Result<TowerElem> {
    match op {
        ArithOp::Add => u.add(v),
        ArithOp::Sub => u.sub(v),
        ArithOp::Mul => u.mul(v),
        ArithOp::Div => u.div(v),
    }
}

pub fn elem_derive(u: &TowerElem) -> TowerElem {
    u.derive()
}

pub fn elem_is_zero(u: &TowerElem) -> bool {
    u.is_zero()
}

pub fn tower_build(spec: &TowerSpec) -> Result<Tower> {
    Tower::build(spec)
}

impl PartialEq for TowerElem {
    fn eq(&self, other: &Self) -> bool {
        self.same_tower(other).is_ok() && self.value == other.value
    }
}

impl Eq for TowerElem {}

impl fmt::Display for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tower.v_fmt(self.lvl(), &self.value))
    }
}

impl fmt::Debug for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TowerElem({self})")
    }
}

impl Differential for TowerElem {
    fn derive(&self) -> Self {
        TowerElem::derive(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other).expect("same tower")
    }
    fn scaled(&self, f: &RatFn) -> Self {
        self.scale(f)
    }
    fn zero_like(&self) -> Self {
        self.with_value(self.tower.v_zero(self.lvl()))
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ore::DiffOp;

    fn tower(json: &str) -> Arc<Tower> {
        Tower::from_json(json).unwrap().into_shared()
    }

    pub(crate) fn sqrt_exp() -> Arc<Tower> {
        tower(
            r#"{"generators": [
                {"name": "s", "kind": "algebraic", "data": "T^2 - x"},
                {"name": "t", "kind": "exponential", "data": "1/(2*s)"}
            ]}"#,
        )
    }

    fn el(t: &Arc<Tower>, s: &str) -> TowerElem {
        TowerElem::parse(t, s).unwrap()
    }

    #[test]
    fn sqrt_tower() {
        let t = tower(r#"{"generators": [{"name": "s", "kind": "algebraic", "data": "T^2 - x"}]}"#);
        assert_eq!(t.generator_derivatives(), vec![("s".into(), "(1/(2*x))*s".into())]);
        let s = el(&t, "s");
        assert_eq!(s.mul(&s).unwrap().to_string(), "x");
        assert_eq!(el(&t, "s^2").derive().to_string(), "1");
        assert!(el(&t, "s^2 - x").is_zero());
        assert_eq!(el(&t, "1/s").to_string(), "(1/x)*s");
    }

    #[test]
    fn log_and_exp_towers() {
        let t = tower(r#"{"generators": [{"name": "l", "kind": "primitive", "data": "1/x"}]}"#);
        assert_eq!(el(&t, "l").derive().to_string(), "1/x");
        let t = tower(r#"{"generators": [{"name": "e", "kind": "exponential", "data": "1"}]}"#);
        assert_eq!(el(&t, "(e*e)/e"), el(&t, "e"));
        assert!(!el(&t, "e - 1").is_zero());
        assert!(el(&t, "0/(x + 1)").is_zero());
    }

    #[test]
    fn riccati_tower() {
        let t = tower(r#"{"generators": [{"name": "w", "kind": "rational_ode", "data": "x - w^2"}]}"#);
        assert_eq!(el(&t, "w^2").derive(), el(&t, "2*w*(x - w^2)"));
    }

    #[test]
    fn remark_operator_kills_exponential() {
        let t = sqrt_exp();
        let l = crate::expr::parse_operator("D^2 + (1/(2*x))*D - 1/(4*x)").unwrap();
        assert!(l.apply(&el(&t, "t")).is_zero());
        assert!(l.apply(&el(&t, "t + 1/t")).is_zero());
        let first = DiffOp::first_order(&RatFn::new(crate::field::Poly::one(), crate::field::Poly::from_ints(&[0, 2])).unwrap());
        let sqrt = el(&t, "s");
        assert!(first.apply(&sqrt).is_zero());
    }

    #[test]
    fn printing_round_trips() {
        let t = sqrt_exp();
        for s in ["t + 1/t", "s*t - x", "(x + s)/(t^2 + s)", "-1/(2*x)*t", "t/(x*s)"] {
            let e = el(&t, s);
            let printed = e.to_string();
            assert_eq!(el(&t, &printed), e, "{s} printed as {printed}");
        }
        let spec = t.to_spec();
        let again = Tower::build(&spec).unwrap();
        assert_eq!(&again, t.as_ref());
    }

    #[test]
    fn ill_formed_towers() {
        let bad = [
            r#"{"generators": [{"name": "s", "kind": "algebraic", "data": "(T - x)^2"}]}"#,
            r#"{"generators": [{"name": "s", "kind": "primitive", "data": "u"}]}"#,
            r#"{"generators": [{"name": "s", "kind": "primitive", "data": "1/(x - x)"}]}"#,
            r#"{"generators": [{"name": "x", "kind": "primitive", "data": "1"}]}"#,
            r#"{"generators": [{"name": "e", "kind": "exponential", "data": "1", "independent": false}]}"#,
        ];
        for b in bad {
            assert!(matches!(Tower::from_json(b), Err(Error::IllFormedTower(_))), "{b}");
        }
        assert!(matches!(Tower::from_json("{"), Err(Error::Parse { .. })));
    }

    #[test]
    fn mismatched_towers() {
        let a = sqrt_exp();
        let b = tower(r#"{"generators": [{"name": "l", "kind": "primitive", "data": "1/x"}]}"#);
        assert_eq!(el(&a, "s").add(&el(&b, "l")), Err(Error::TowerMismatch));
    }
}
