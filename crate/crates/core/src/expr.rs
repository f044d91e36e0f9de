//! The expression grammar shared by rational functions, operators and tower
//! elements.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? integer)?
//! atom  := integer | identifier | '(' expr ')'
//! ```
//!
//! `D` is the derivation, `x` the base variable, `T` the bound variable of
//! algebraic minimal polynomials; other identifiers are generator names.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::field::{Poly, RatFn};
use crate::ore::DiffOp;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(String, Pos),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, Pos),
    Pow(Box<Expr>, i64, Pos),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, Pos)>,
}

fn parse_error(pos: Pos, message: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

impl Lexer {
    fn new(src: &str) -> Result<Self> {
        let mut toks = Vec::new();
        let chars: Vec<char> = src.chars().collect();
        let (mut line, mut col) = (1, 1);
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let pos = Pos { line, column: col };
            if c == '\n' {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            if c.is_whitespace() {
                i += 1;
                col += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                toks.push((Tok::Int(s.parse().expect("digits")), pos));
                continue;
            }
            if c.is_ascii_alphabetic() {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                toks.push((Tok::Ident(s), pos));
                continue;
            }
            if "+-*/^()".contains(c) {
                toks.push((Tok::Sym(c), pos));
                i += 1;
                col += 1;
                continue;
            }
            return Err(parse_error(pos, format!("unexpected character '{c}'")));
        }
        toks.push((Tok::End, Pos { line, column: col }));
        Ok(Lexer { toks })
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == &Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == &Tok::Sym('/') {
                let pos = self.pos();
                self.bump();
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), pos);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() != &Tok::Sym('^') {
            return Ok(base);
        }
        let pos = self.pos();
        self.bump();
        let neg = self.eat('-');
        let (tok, p) = self.bump();
        let Tok::Int(n) = tok else {
            return Err(parse_error(p, "expected an integer exponent"));
        };
        let n = n
            .to_i64()
            .filter(|n| *n <= 10_000)
            .ok_or_else(|| parse_error(p, "exponent too large"))?;
        Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }, pos))
    }

    fn atom(&mut self) -> Result<Expr> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Int(n) => Ok(Expr::Int(n)),
            Tok::Ident(s) => Ok(Expr::Var(s, pos)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(parse_error(self.pos(), "expected ')'"));
                }
                Ok(e)
            }
            Tok::End => Err(parse_error(pos, "unexpected end of input")),
            Tok::Sym(c) => Err(parse_error(pos, format!("unexpected '{c}'"))),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let lexer = Lexer::new(src)?;
    let mut p = Parser { toks: lexer.toks, at: 0 };
    let e = p.expr()?;
    if p.peek() != &Tok::End {
        return Err(parse_error(p.pos(), "unexpected trailing input"));
    }
    Ok(e)
}

/// A target algebra for expression evaluation.
pub trait EvalContext {
    type V: Clone;
    fn int(&self, n: &BigInt) -> Self::V;
    fn var(&self, name: &str, pos: Pos) -> Result<Self::V>;
    fn add(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    fn sub(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    fn neg(&self, a: &Self::V) -> Result<Self::V>;
    fn div(&self, a: &Self::V, b: &Self::V, pos: Pos) -> Result<Self::V>;
    fn pow(&self, a: &Self::V, e: i64, pos: Pos) -> Result<Self::V>;
}

pub fn evaluate<C: EvalContext>(e: &Expr, ctx: &C) -> Result<C::V> {
    match e {
        Expr::Int(n) => Ok(ctx.int(n)),
        Expr::Var(name, pos) => ctx.var(name, *pos),
        Expr::Neg(a) => ctx.neg(&evaluate(a, ctx)?),
        Expr::Add(a, b) => ctx.add(&evaluate(a, ctx)?, &evaluate(b, ctx)?),
        Expr::Sub(a, b) => ctx.sub(&evaluate(a, ctx)?, &evaluate(b, ctx)?),
        Expr::Mul(a, b) => ctx.mul(&evaluate(a, ctx)?, &evaluate(b, ctx)?),
        Expr::Div(a, b, pos) => ctx.div(&evaluate(a, ctx)?, &evaluate(b, ctx)?, *pos),
        Expr::Pow(a, k, pos) => ctx.pow(&evaluate(a, ctx)?, *k, *pos),
    }
}

fn unknown_name(name: &str, pos: Pos) -> Error {
    parse_error(pos, format!("unknown name '{name}'"))
}

struct RatFnCtx;

impl EvalContext for RatFnCtx {
    type V = RatFn;
    fn int(&self, n: &BigInt) -> RatFn {
        RatFn::constant(n.clone().into())
    }
    fn var(&self, name: &str, pos: Pos) -> Result<RatFn> {
        match name {
            "x" => Ok(RatFn::x()),
            "D" => Err(Error::DInCoefficient {
                line: pos.line,
                column: pos.column,
            }),
            _ => Err(unknown_name(name, pos)),
        }
    }
    fn add(&self, a: &RatFn, b: &RatFn) -> Result<RatFn> {
        Ok(a + b)
    }
    fn sub(&self, a: &RatFn, b: &RatFn) -> Result<RatFn> {
        Ok(a - b)
    }
    fn mul(&self, a: &RatFn, b: &RatFn) -> Result<RatFn> {
        Ok(a * b)
    }
    fn neg(&self, a: &RatFn) -> Result<RatFn> {
        Ok(-a)
    }
    fn div(&self, a: &RatFn, b: &RatFn, _pos: Pos) -> Result<RatFn> {
        a.checked_div(b)
    }
    fn pow(&self, a: &RatFn, e: i64, _pos: Pos) -> Result<RatFn> {
        a.pow(e as i32)
    }
}

/// Evaluates operators noncommutatively: `a*b` is composition, `a/b` is `a·b⁻¹`
/// and requires `b` free of `D`.
struct OperatorCtx;

fn ratfn_of(op: &DiffOp, pos: Pos) -> Result<RatFn> {
    match op.order() {
        None => Ok(RatFn::zero()),
        Some(0) => Ok(op.coeff(0)),
        Some(_) => Err(Error::DInCoefficient {
            line: pos.line,
            column: pos.column,
        }),
    }
}

impl EvalContext for OperatorCtx {
    type V = DiffOp;
    fn int(&self, n: &BigInt) -> DiffOp {
        DiffOp::from_ratfn(RatFn::constant(n.clone().into()))
    }
    fn var(&self, name: &str, pos: Pos) -> Result<DiffOp> {
        match name {
            "x" => Ok(DiffOp::from_ratfn(RatFn::x())),
            "D" => Ok(DiffOp::d()),
            _ => Err(unknown_name(name, pos)),
        }
    }
    fn add(&self, a: &DiffOp, b: &DiffOp) -> Result<DiffOp> {
        Ok(a + b)
    }
    fn sub(&self, a: &DiffOp, b: &DiffOp) -> Result<DiffOp> {
        Ok(a - b)
    }
    fn mul(&self, a: &DiffOp, b: &DiffOp) -> Result<DiffOp> {
        Ok(a * b)
    }
    fn neg(&self, a: &DiffOp) -> Result<DiffOp> {
        Ok(-a)
    }
    fn div(&self, a: &DiffOp, b: &DiffOp, pos: Pos) -> Result<DiffOp> {
        let b = ratfn_of(b, pos)?;
        Ok(a * &DiffOp::from_ratfn(b.inv()?))
    }
    fn pow(&self, a: &DiffOp, e: i64, pos: Pos) -> Result<DiffOp> {
        if e < 0 {
            let f = ratfn_of(a, pos)?;
            return Ok(DiffOp::from_ratfn(f.pow(e as i32)?));
        }
        let mut acc = DiffOp::one();
        for _ in 0..e {
            acc = &acc * a;
        }
        Ok(acc)
    }
}

pub fn parse_ratfn(src: &str) -> Result<RatFn> {
    evaluate(&parse_expr(src)?, &RatFnCtx)
}

pub fn parse_operator(src: &str) -> Result<DiffOp> {
    evaluate(&parse_expr(src)?, &OperatorCtx)
}

pub fn parse_poly(src: &str) -> Result<Poly> {
    let f = parse_ratfn(src)?;
    f.as_poly()
        .cloned()
        .ok_or_else(|| Error::InvalidInput(format!("{src} is not a polynomial")))
}
