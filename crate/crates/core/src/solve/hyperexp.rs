//! Hyperexponential solutions: every `u ∈ ℚ(x)` such that `∂ - u` right-divides `L`.
//!
//! Candidates are assembled from local data. At each finite singular place we
//! collect the possible polar parts of `u` (irregular terms from Newton polygon
//! slopes, then a residue from the indicial polynomial); at infinity the possible
//! polynomial parts and the exponent. Each combination leaves a polynomial factor
//! of known degree to be found by linear algebra.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::places::{finite_indicial, infinity_indicial_x, norm_polynomial, residue_rational_roots};
use super::polysol::polynomial_solutions_bounded;
use super::SolveConfig;
use crate::error::{Error, Result};
use crate::field::{int, poly_factor, rational_roots, Poly, Rat, RatFn};
use crate::ore::DiffOp;

/// A first-order right factor `∂ - u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FirstOrderFactor {
    pub u: RatFn,
}

impl FirstOrderFactor {
    pub fn operator(&self) -> DiffOp {
        DiffOp::first_order(&self.u)
    }
}

/// Hyperexponential solutions sharing the exponential part `u0`: they are
/// `P·exp(∫u0)` for `P` in the span of `basis`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperexpClass {
    pub u0: RatFn,
    pub basis: Vec<Poly>,
}

impl HyperexpClass {
    /// Whether `exp(∫u)` is, up to a constant factor, one of the solutions
    /// `P·exp(∫u0)` of this class.
    pub fn contains(&self, u: &RatFn) -> bool {
        match rational_exp(&(u - &self.u0)) {
            Some(ratio) => ratio.is_poly() && in_span(&self.basis, ratio.num()),
            None => false,
        }
    }
}

/// A local candidate at a finite place: polar part `sum b_k (x-c)^(-k)`, `k >= 2`,
/// plus `residue / (x - c)`.
#[derive(Debug, Clone)]
struct LocalFinite {
    polar: RatFn,
    residue: Rat,
}

/// A local candidate at infinity: polynomial part and exponent `sigma` (the
/// solution behaves like `x^sigma` after removing `exp(∫poly)`).
#[derive(Debug, Clone)]
struct LocalInfinity {
    poly: Poly,
    sigma: Rat,
}

fn valuation_data(cleared: &[Poly], c: &Rat) -> Vec<Option<(i64, Rat)>> {
    let t = Poly::linear_root(c.clone());
    cleared
        .iter()
        .map(|a| {
            if a.is_zero() {
                return None;
            }
            let v = a.multiplicity(&t);
            let lc = a.div_exact(&t.pow(v)).eval(c);
            Some((v as i64, lc))
        })
        .collect()
}

/// Integer slopes `k` in `[lo, upper)` at which the minimum of `v_i - i*k` is
/// attained by at least two indices, with the indices attaining it.
fn newton_slopes(vals: &[Option<(i64, Rat)>], lo: i64, upper: Option<i64>) -> Vec<(i64, Vec<usize>)> {
    let present: Vec<(usize, i64)> = vals
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.as_ref().map(|(vi, _)| (i, *vi)))
        .collect();
    let mut ks: Vec<i64> = Vec::new();
    for (a, &(i, vi)) in present.iter().enumerate() {
        for &(j, vj) in &present[..a] {
            let (num, den) = (vi - vj, (i - j) as i64);
            if num % den == 0 {
                let k = num / den;
                if k >= lo && upper.is_none_or(|u| k < u) {
                    ks.push(k);
                }
            }
        }
    }
    ks.sort_unstable();
    ks.dedup();
    ks.into_iter()
        .filter_map(|k| {
            let min = present.iter().map(|&(i, v)| v - i as i64 * k).min()?;
            let attained: Vec<usize> = present
                .iter()
                .filter(|&&(i, v)| v - i as i64 * k == min)
                .map(|&(i, _)| i)
                .collect();
            (attained.len() >= 2).then_some((k, attained))
        })
        .collect()
}

fn char_roots(vals: &[Option<(i64, Rat)>], attained: &[usize]) -> Vec<Rat> {
    let mut coeffs = vec![Rat::zero(); attained.iter().max().map_or(0, |m| m + 1)];
    for &i in attained {
        coeffs[i] = vals[i].as_ref().unwrap().1.clone();
    }
    rational_roots(&Poly::from_coeffs(coeffs))
        .into_iter()
        .filter(|r| !r.is_zero())
        .collect()
}

fn explore_finite(
    l: &DiffOp,
    cleared: &[Poly],
    c: &Rat,
    polar: RatFn,
    upper: Option<i64>,
    out: &mut Vec<LocalFinite>,
) {
    let t = Poly::linear_root(c.clone());
    for e in residue_rational_roots(&finite_indicial(cleared, &t), &t) {
        out.push(LocalFinite {
            polar: polar.clone(),
            residue: e,
        });
    }
    let vals = valuation_data(cleared, c);
    for (k, attained) in newton_slopes(&vals, 2, upper) {
        for b in char_roots(&vals, &attained) {
            // a solution term exp(∫ b t^-k) balances v_i - i k at the attained indices
            let term = RatFn::new(Poly::constant(b), t.pow(k as u32)).expect("nonzero");
            let shifted = l.shift(&term);
            explore_finite(&shifted, &shifted.cleared(), c, &polar + &term, Some(k), out);
        }
    }
}

fn explore_infinity(l: &DiffOp, cleared: &[Poly], poly: Poly, upper: Option<i64>, out: &mut Vec<LocalInfinity>) {
    for sigma in rational_roots(&infinity_indicial_x(cleared)) {
        out.push(LocalInfinity {
            poly: poly.clone(),
            sigma,
        });
    }
    // With v_i = -deg a_i the same Newton polygon machinery applies to the
    // expansion in 1/x: a term b x^k of u scales y^(i) by x^(ik).
    let vals: Vec<Option<(i64, Rat)>> = cleared
        .iter()
        .map(|a| (!a.is_zero()).then(|| (-a.deg(), a.lc())))
        .collect();
    for (k, attained) in newton_slopes(&vals, 0, upper) {
        for b in char_roots(&vals, &attained) {
            let term = Poly::monomial(b, k as usize);
            let shifted = l.shift(&RatFn::from_poly(term.clone()));
            explore_infinity(&shifted, &shifted.cleared(), &poly + &term, Some(k), out);
        }
    }
}

/// Residues `e` at a place of degree above one contribute `e·q'/q`; only
/// rational `e` is supported, and the place must be regular enough that no
/// higher-order polar terms can occur.
fn explore_nonrational(cleared: &[Poly], q: &Poly, cfg: &SolveConfig) -> Result<Vec<Rat>> {
    let vals: Vec<Option<(i64, Rat)>> = cleared
        .iter()
        .map(|a| (!a.is_zero()).then(|| (a.multiplicity(q) as i64, Rat::zero())))
        .collect();
    let place = format!("roots of {q}");
    if !newton_slopes(&vals, 2, None).is_empty() {
        return Err(Error::UnsupportedPlace(place));
    }
    let ind = finite_indicial(cleared, q);
    let dq = q.degree().unwrap();
    // When the monic indicial polynomial has rational coefficients the norm is
    // a power of it, with the same irreducible factors.
    let norm = rational_monic(&ind, q).unwrap_or_else(|| norm_polynomial(&ind, q));
    if !norm.is_constant() {
        for (f, _) in poly_factor(&norm, &cfg.factor)?.factors {
            let df = f.degree().unwrap();
            if df > 1 && dq.is_multiple_of(df) {
                return Err(Error::UnsupportedPlace(place));
            }
        }
    }
    Ok(residue_rational_roots(&ind, q))
}

// Exponents at one place that differ by an integer describe the same solutions
// once the polynomial factor absorbs the difference, so each class modulo the
// integers keeps only the extreme representative: the lowest residue at a finite
// place and the highest exponent at infinity, which also gives the widest
// degree bound.

fn same_class(a: &Rat, b: &Rat) -> bool {
    (a - b).is_integer()
}

fn lowest_residues(mut es: Vec<Rat>) -> Vec<Rat> {
    es.sort();
    let mut out: Vec<Rat> = Vec::new();
    for e in es {
        if !out.iter().any(|k| same_class(k, &e)) {
            out.push(e);
        }
    }
    out
}

fn lowest_per_class(mut local: Vec<LocalFinite>) -> Vec<LocalFinite> {
    local.sort_by(|a, b| a.residue.cmp(&b.residue));
    let mut out: Vec<LocalFinite> = Vec::new();
    for lf in local {
        if !out.iter().any(|k| k.polar == lf.polar && same_class(&k.residue, &lf.residue)) {
            out.push(lf);
        }
    }
    out
}

fn highest_per_class(mut at_inf: Vec<LocalInfinity>) -> Vec<LocalInfinity> {
    at_inf.sort_by(|a, b| b.sigma.cmp(&a.sigma));
    let mut out: Vec<LocalInfinity> = Vec::new();
    for li in at_inf {
        if !out.iter().any(|k| k.poly == li.poly && same_class(&k.sigma, &li.sigma)) {
            out.push(li);
        }
    }
    out
}

/// `coeffs / lc` when every ratio is rational modulo `q`. Reduced modulo `q`, a
/// coefficient is a rational multiple `r` of the leading one exactly when the two
/// remainders are proportional, so no inverse modulo `q` is needed.
fn rational_monic(coeffs: &[Poly], q: &Poly) -> Option<Poly> {
    let lead = coeffs.last()?.rem(q);
    if lead.is_zero() {
        return None;
    }
    let cs: Option<Vec<Rat>> = coeffs
        .iter()
        .map(|c| {
            let c = c.rem(q);
            if c.is_zero() {
                return Some(Rat::zero());
            }
            let r = c.lc() / lead.lc();
            (c.degree() == lead.degree() && c == lead.scale(&r)).then_some(r)
        })
        .collect();
    Some(Poly::from_coeffs(cs?))
}

enum PlaceCandidates {
    Rational(Rat, Vec<LocalFinite>),
    Irrational(Poly, Vec<Rat>),
}

impl PlaceCandidates {
    fn len(&self) -> usize {
        match self {
            PlaceCandidates::Rational(_, v) => v.len(),
            PlaceCandidates::Irrational(_, v) => v.len(),
        }
    }
}

/// All hyperexponential solutions of `L`, grouped by exponential part.
pub fn hyperexp_classes(l: &DiffOp, cfg: &SolveConfig) -> Result<Vec<HyperexpClass>> {
    if l.order().unwrap_or(0) == 0 {
        return Err(Error::InvalidInput("hyperexponential search needs order at least 1".into()));
    }
    let cleared = l.cleared();
    let lead = cleared.last().unwrap();
    let mut places: Vec<PlaceCandidates> = Vec::new();
    if !lead.is_constant() {
        for (q, _) in poly_factor(lead, &cfg.factor)?.factors {
            if q.degree() == Some(1) {
                let c = -q.coeff(0);
                let mut local = Vec::new();
                explore_finite(l, &cleared, &c, RatFn::zero(), None, &mut local);
                places.push(PlaceCandidates::Rational(c, lowest_per_class(local)));
            } else {
                let es = explore_nonrational(&cleared, &q, cfg)?;
                places.push(PlaceCandidates::Irrational(q, lowest_residues(es)));
            }
        }
    }
    let mut at_inf = Vec::new();
    explore_infinity(l, &cleared, Poly::zero(), None, &mut at_inf);
    let at_inf = highest_per_class(at_inf);

    let count = places
        .iter()
        .map(|p| p.len())
        .chain(std::iter::once(at_inf.len()))
        .try_fold(1usize, |acc, n| acc.checked_mul(n))
        .unwrap_or(usize::MAX);
    if count > cfg.candidate_cap {
        return Err(Error::CandidateExplosion {
            count,
            cap: cfg.candidate_cap,
        });
    }
    if count == 0 {
        return Ok(Vec::new());
    }

    // Enumerate combinations as mixed-radix indices.
    let radices: Vec<usize> = places.iter().map(|p| p.len()).chain([at_inf.len()]).collect();
    let combos: Vec<Vec<usize>> = (0..count)
        .map(|mut n| {
            radices
                .iter()
                .map(|&r| {
                    let d = n % r;
                    n /= r;
                    d
                })
                .collect()
        })
        .collect();

    let results: Vec<Option<HyperexpClass>> = combos
        .par_iter()
        .map(|combo| {
            let mut u0 = RatFn::zero();
            let mut exponent_sum = Rat::zero();
            for (p, &idx) in places.iter().zip(combo) {
                match p {
                    PlaceCandidates::Rational(c, local) => {
                        let lf = &local[idx];
                        let simple = RatFn::new(Poly::constant(lf.residue.clone()), Poly::linear_root(c.clone()))
                            .expect("nonzero");
                        u0 = &(&u0 + &lf.polar) + &simple;
                        exponent_sum += &lf.residue;
                    }
                    PlaceCandidates::Irrational(q, es) => {
                        let e = &es[idx];
                        let logd = RatFn::new(q.derivative().scale(e), q.clone()).expect("nonzero");
                        u0 = &u0 + &logd;
                        exponent_sum += e * int(q.degree().unwrap() as i64);
                    }
                }
            }
            let inf = &at_inf[*combo.last().unwrap()];
            u0 = &u0 + &RatFn::from_poly(inf.poly.clone());
            let d = &inf.sigma - &exponent_sum;
            if !d.is_integer() || d.is_negative() {
                return None;
            }
            let d: usize = d.to_integer().try_into().ok()?;
            let basis = polynomial_solutions_bounded(&l.shift(&u0), d);
            (!basis.is_empty()).then_some(HyperexpClass { u0, basis })
        })
        .collect();

    // For a fixed u0 the largest degree bound gives the whole space. Classes
    // whose exponential parts differ by a rational logarithmic derivative can
    // describe the same solutions; drop any class contained in an earlier one.
    let mut by_key: BTreeMap<String, HyperexpClass> = BTreeMap::new();
    for class in results.into_iter().flatten() {
        let key = class.u0.to_string();
        match by_key.get(&key) {
            Some(old) if old.basis.len() >= class.basis.len() => {}
            _ => {
                by_key.insert(key, class);
            }
        }
    }
    let mut candidates: Vec<HyperexpClass> = by_key.into_values().collect();
    candidates.sort_by_key(|c| std::cmp::Reverse(c.basis.len()));
    let mut classes: Vec<HyperexpClass> = Vec::new();
    for class in candidates {
        if !classes.iter().any(|c| contains_class(c, &class)) {
            classes.push(class);
        }
    }
    classes.sort_by_key(|c| c.u0.to_string());
    Ok(classes)
}

/// True when every solution described by `b` is already described by `a`.
fn contains_class(a: &HyperexpClass, b: &HyperexpClass) -> bool {
    let diff = &a.u0 - &b.u0;
    let Some(ratio) = rational_exp(&diff) else {
        return false;
    };
    // b-solutions P exp(∫b.u0) = (P / ratio) exp(∫a.u0)
    b.basis.iter().all(|p| {
        let y = &RatFn::from_poly(p.clone()) * &ratio.inv().expect("nonzero");
        y.is_poly() && in_span(&a.basis, y.num())
    })
}

/// `R ∈ ℚ(x)` with `R'/R = f`, if one exists (up to a constant factor).
fn rational_exp(f: &RatFn) -> Option<RatFn> {
    if f.is_zero() {
        return Some(RatFn::one());
    }
    if !f.num().is_zero() && f.num().deg() >= f.den().deg() {
        return None;
    }
    // f must be sum e_i q_i'/q_i with integer e_i and squarefree denominator;
    // the residue at the roots of each irreducible q_i must be that integer.
    let den = f.den();
    let mut r = RatFn::one();
    let factors = poly_factor(den, &Default::default()).ok()?;
    if factors.factors.iter().any(|(_, m)| *m != 1) {
        return None;
    }
    let mut acc = RatFn::zero();
    for (q, _) in &factors.factors {
        let cof = den.div_exact(q);
        let dq = q.derivative();
        // residue e = num / (cof * q') at roots of q; rational iff this is constant mod q
        let denom = (&cof * &dq).rem(q);
        let inv = denom.inv_mod(q)?;
        let e = (f.num() * &inv).rem(q);
        if !e.is_constant() {
            return None;
        }
        let e = e.coeff(0);
        if !e.is_integer() {
            return None;
        }
        let k: i32 = e.to_integer().try_into().ok()?;
        r = &r * &RatFn::from_poly(q.clone()).pow(k).ok()?;
        acc = &acc + &RatFn::new(dq.scale(&e), q.clone()).ok()?;
    }
    (acc == *f).then_some(r)
}

fn in_span(basis: &[Poly], p: &Poly) -> bool {
    let mut p = p.clone();
    // basis is reduced: distinct monic leading degrees
    for b in basis.iter().rev() {
        let d = b.degree().unwrap();
        let c = p.coeff(d);
        if !c.is_zero() {
            p = &p - &b.scale(&c);
        }
    }
    p.is_zero()
}

/// Every `u` with `∂ - u` an exact right factor of `L`: one per basis element of
/// each hyperexponential class, verified by right division.
pub fn hyperexp_right_factors(l: &DiffOp, cfg: &SolveConfig) -> Result<Vec<FirstOrderFactor>> {
    let classes = hyperexp_classes(l, cfg)?;
    let mut us: BTreeMap<String, RatFn> = BTreeMap::new();
    for class in classes {
        for p in &class.basis {
            let logd = RatFn::new(p.derivative(), p.clone()).expect("nonzero basis element");
            let u = &class.u0 + &logd;
            if l.right_divisible_by(&DiffOp::first_order(&u)) {
                us.insert(u.to_string(), u);
            }
        }
    }
    Ok(us.into_values().map(|u| FirstOrderFactor { u }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(n: &[i64], d: &[i64]) -> RatFn {
        RatFn::new(Poly::from_ints(n), Poly::from_ints(d)).unwrap()
    }

    fn us(l: &DiffOp) -> Vec<RatFn> {
        hyperexp_right_factors(l, &SolveConfig::default())
            .unwrap()
            .into_iter()
            .map(|f| f.u)
            .collect()
    }

    #[test]
    fn first_order_is_its_own_factor() {
        let u = rf(&[1], &[0, 1]);
        assert_eq!(us(&DiffOp::first_order(&u)), vec![u]);
        let u = RatFn::from_poly(Poly::from_ints(&[1, 2]));
        assert_eq!(us(&DiffOp::first_order(&u)), vec![u]);
    }

    #[test]
    fn exponential_and_polynomial_solutions() {
        // D^2 - (1 + 1/x) D + 1/x
        let l = DiffOp::from_coeffs(vec![rf(&[1], &[0, 1]), -rf(&[1, 1], &[0, 1]), RatFn::one()]);
        let found = us(&l);
        assert_eq!(found.len(), 2);
        assert!(found.contains(&RatFn::one()));
        assert!(found.contains(&rf(&[1], &[1, 1])));
    }

    #[test]
    fn remark_operator_has_none() {
        let l = DiffOp::from_coeffs(vec![rf(&[-1], &[0, 4]), rf(&[1], &[0, 2]), RatFn::one()]);
        assert!(us(&l).is_empty());
    }

    #[test]
    fn irregular_finite_place() {
        // y = exp(-1/x) has u = 1/x^2; planted as a right factor
        let u = rf(&[1], &[0, 0, 1]);
        let l = &DiffOp::first_order(&RatFn::x()) * &DiffOp::first_order(&u);
        assert!(us(&l).contains(&u));
    }

    #[test]
    fn d_squared() {
        let found = us(&DiffOp::d_pow(2));
        assert_eq!(found, vec![RatFn::zero(), rf(&[1], &[0, 1])]);
    }

    #[test]
    fn arctan_exponential() {
        // u = 1/(x^2 + 1) has non-rational residues and is out of reach
        let u = rf(&[1], &[1, 0, 1]);
        let l = DiffOp::first_order(&u);
        let r = hyperexp_right_factors(&l, &SolveConfig::default());
        assert!(matches!(r, Err(Error::UnsupportedPlace(_))));
        // u = 2x/(x^2 + 1) has residue 1 at both roots
        let u = rf(&[0, 2], &[1, 0, 1]);
        assert_eq!(us(&DiffOp::first_order(&u)), vec![u]);
    }
}
