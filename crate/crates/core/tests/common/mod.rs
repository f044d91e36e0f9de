//! Seeded generators for small random objects over ℚ(x).

#![allow(dead_code)]

use pvt_core::field::{int, nullspace, Poly, Rat, RatFn};
use pvt_core::ore::DiffOp;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn poly(rng: &mut impl Rng, max_deg: usize, bound: i64) -> Poly {
    let deg = rng.gen_range(0..=max_deg);
    let cs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-bound..=bound)).collect();
    Poly::from_ints(&cs)
}

pub fn nonzero_poly(rng: &mut impl Rng, max_deg: usize, bound: i64) -> Poly {
    loop {
        let p = poly(rng, max_deg, bound);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Product of up to `k` linear factors `x - a` with small integer `a`.
pub fn denominator(rng: &mut impl Rng, k: usize) -> Poly {
    let mut d = Poly::one();
    for _ in 0..rng.gen_range(0..=k) {
        let a = rng.gen_range(-3..=3);
        d = &d * &Poly::from_ints(&[-a, 1]);
    }
    d
}

pub fn ratfn(rng: &mut impl Rng) -> RatFn {
    let n = poly(rng, 2, 4);
    let d = denominator(rng, 2);
    RatFn::new(n, d).expect("nonzero denominator")
}

pub fn nonzero_ratfn(rng: &mut impl Rng) -> RatFn {
    loop {
        let f = ratfn(rng);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Operator of order `0..=max_order` with a nonzero leading coefficient.
pub fn op(rng: &mut impl Rng, max_order: usize) -> DiffOp {
    let n = rng.gen_range(0..=max_order);
    let mut cs: Vec<RatFn> = (0..n).map(|_| ratfn(rng)).collect();
    cs.push(nonzero_ratfn(rng));
    DiffOp::from_coeffs(cs)
}

pub fn monic_op(rng: &mut impl Rng, order: usize) -> DiffOp {
    let mut cs: Vec<RatFn> = (0..order).map(|_| ratfn(rng)).collect();
    cs.push(RatFn::one());
    DiffOp::from_coeffs(cs)
}

pub fn small_rat(rng: &mut impl Rng) -> RatFn {
    RatFn::constant(int(rng.gen_range(-5..=5)))
}

/// A rational function with numerator degree up to `max_deg` and poles among the
/// integers `-3..=3`, each of multiplicity at most two.
pub fn planted_ratfn(rng: &mut impl Rng, max_deg: usize) -> RatFn {
    let n = nonzero_poly(rng, max_deg, 3);
    let d = denominator(rng, 2);
    RatFn::new(n, d).expect("nonzero denominator")
}

/// Rank over ℚ of a family of rational functions.
pub fn rank(fs: &[RatFn]) -> usize {
    let fs: Vec<&RatFn> = fs.iter().filter(|f| !f.is_zero()).collect();
    if fs.is_empty() {
        return 0;
    }
    let den = fs.iter().fold(Poly::one(), |acc, f| acc.lcm(f.den()));
    let nums: Vec<Poly> = fs.iter().map(|f| &f.num().clone() * &den.div_exact(f.den())).collect();
    let height = nums.iter().map(|p| p.coeffs().len()).max().unwrap_or(0);
    let rows: Vec<Vec<Rat>> = (0..height).map(|k| nums.iter().map(|p| p.coeff(k)).collect()).collect();
    fs.len() - nullspace(&rows, fs.len()).len()
}

pub fn in_span(basis: &[RatFn], f: &RatFn) -> bool {
    let mut all = basis.to_vec();
    all.push(f.clone());
    rank(&all) == rank(basis)
}

/// Brute-force solutions of `L y = 0` of the form `P / Q`, with `Q` the product of
/// `(x - a)^poles` over `a` in `-3..=3` and `deg P <= max_deg + deg Q`, found by
/// solving the linear system for the coefficients of `P`.
pub fn brute_force_rational(l: &DiffOp, max_deg: usize, poles: usize) -> Vec<RatFn> {
    let mut q = Poly::one();
    for a in -3..=3 {
        q = &q * &Poly::from_ints(&[-a, 1]).pow(poles as u32);
    }
    let a = l.cleared();
    let n = a.len() - 1;
    let dq = q.derivative();
    let unknowns = max_deg + q.degree().unwrap() + 1;
    // (x^j / Q)^(i) = N_i / Q^(i+1) with N_(i+1) = N_i' Q - (i+1) N_i Q'; the image
    // is cleared by Q^(n+1).
    let images: Vec<Poly> = (0..unknowns)
        .map(|j| {
            let mut num = Poly::monomial(int(1), j);
            let mut acc = Poly::zero();
            for (i, ai) in a.iter().enumerate() {
                acc = &acc + &(&(ai * &num) * &q.pow((n - i) as u32));
                num = &(&num.derivative() * &q) - &(&num * &dq).scale(&int(i as i64 + 1));
            }
            acc
        })
        .collect();
    let height = images.iter().map(|p| p.coeffs().len()).max().unwrap_or(0);
    let rows: Vec<Vec<Rat>> = (0..height).map(|k| images.iter().map(|p| p.coeff(k)).collect()).collect();
    nullspace(&rows, unknowns)
        .into_iter()
        .map(|v| RatFn::new(Poly::from_coeffs(v), q.clone()).unwrap())
        .collect()
}

/// An operator of order at most four with the planted rational solutions it
/// returns: an lclm of `∂ - f'/f`, sometimes multiplied on the left by a random
/// first-order operator.
pub fn planted_rational_case(rng: &mut impl Rng, max_deg: usize) -> (DiffOp, Vec<RatFn>) {
    let k = rng.gen_range(1..=3);
    let planted: Vec<RatFn> = (0..k).map(|_| planted_ratfn(rng, max_deg)).collect();
    let mut l = DiffOp::first_order(&log_derivative(&planted[0]));
    for f in &planted[1..] {
        l = l.lclm(&DiffOp::first_order(&log_derivative(f))).unwrap();
    }
    if l.order().unwrap() < 4 && rng.gen_bool(0.3) {
        l = &monic_op(rng, 1) * &l;
    }
    (l, planted)
}

/// Like [`planted_rational_case`], with planted hyperexponential solutions
/// `f·exp(c x)` for distinct integers `c`; returns the planted `u = f'/f + c`.
pub fn planted_hyperexp_case(rng: &mut impl Rng, max_deg: usize) -> (DiffOp, Vec<RatFn>) {
    let k = rng.gen_range(1..=3);
    let mut shifts: Vec<i64> = (-2..=2).collect();
    let mut us = Vec::new();
    for _ in 0..k {
        let c = shifts.remove(rng.gen_range(0..shifts.len()));
        let f = planted_ratfn(rng, max_deg);
        us.push(&log_derivative(&f) + &RatFn::constant(int(c)));
    }
    let mut l = DiffOp::first_order(&us[0]);
    for u in &us[1..] {
        l = l.lclm(&DiffOp::first_order(u)).unwrap();
    }
    if l.order().unwrap() < 4 && rng.gen_bool(0.3) {
        l = &monic_op(rng, 1) * &l;
    }
    (l, us)
}

pub fn log_derivative(f: &RatFn) -> RatFn {
    &f.derive() * &f.inv().expect("nonzero")
}
