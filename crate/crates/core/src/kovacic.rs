//! Kovacic's algorithm for second-order operators over ℚ(x).
//!
//! The operator is reduced to `z'' = r z` and the Riccati equation
//! `ω' + ω² = r` is searched for a solution that is rational (case 1), of degree 2
//! over ℚ(x) (case 2) or of degree 4, 6 or 12 (case 3). All local data is kept in
//! ℚ. When a candidate family would need irrational constants the search marks
//! itself incomplete; a negative answer is then reported as an error instead.

use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{int, nullspace, poly_factor, rat, rat_sqrt, Poly, Rat, RatFn, ResidueField, RfPoly};
use crate::ore::{op_normal_form2, DiffOp};
use crate::solve::{polynomial_solutions_bounded, SolveConfig};

#[derive(Debug, Clone)]
pub struct KovacicConfig {
    pub solve: SolveConfig,
    /// Whether to run the case 3 search (degrees 4, 6, 12).
    pub case3: bool,
    /// Wall-clock budget for case 3.
    pub budget: Option<Duration>,
}

impl Default for KovacicConfig {
    fn default() -> Self {
        KovacicConfig {
            solve: SolveConfig::default(),
            case3: true,
            budget: Some(Duration::from_secs(30)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KovacicOutcome {
    /// A rational Riccati solution.
    Case1 { omega: RatFn },
    /// Monic degree-2 minimal polynomial of ω over ℚ(x).
    Case2 { minpoly: RfPoly },
    /// Monic minimal polynomial of ω of degree `n ∈ {4, 6, 12}`.
    Case3 { n: usize, minpoly: RfPoly },
    NonLiouvillian,
}

impl KovacicOutcome {
    pub fn case_index(&self) -> Option<u8> {
        match self {
            KovacicOutcome::Case1 { .. } => Some(1),
            KovacicOutcome::Case2 { .. } => Some(2),
            KovacicOutcome::Case3 { .. } => Some(3),
            KovacicOutcome::NonLiouvillian => None,
        }
    }

    pub fn is_liouvillian(&self) -> bool {
        !matches!(self, KovacicOutcome::NonLiouvillian)
    }

    /// The Riccati solution's minimal polynomial in `T` (degree 1 for case 1).
    pub fn minpoly(&self) -> Option<RfPoly> {
        match self {
            KovacicOutcome::Case1 { omega } => Some(RfPoly::from_coeffs(vec![-omega, RatFn::one()])),
            KovacicOutcome::Case2 { minpoly } | KovacicOutcome::Case3 { minpoly, .. } => Some(minpoly.clone()),
            KovacicOutcome::NonLiouvillian => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KovacicVerdict {
    /// `z'' = r z` is the reduced equation.
    pub r: RatFn,
    /// Solutions of the input are `y = z·exp(-∫gauge)`.
    pub gauge: RatFn,
    pub outcome: KovacicOutcome,
    pub witness: String,
    /// False when an earlier case could not be searched exhaustively over ℚ, so
    /// the reported case index may not be the least one.
    pub complete: bool,
}

/// `m(ω) = 0` is compatible with `ω' = r - ω²`: the derivative of `m(ω)` reduces to
/// zero modulo `m`.
pub fn verify_riccati_minpoly(m: &RfPoly, r: &RatFn) -> bool {
    if m.degree().unwrap_or(0) == 0 {
        return false;
    }
    let m = m.monic();
    let rhs = RfPoly::from_coeffs(vec![r.clone(), RatFn::zero(), -RatFn::one()]);
    let d = &m.coeff_derivative() + &(&m.derivative() * &rhs);
    d.rem(&m).is_zero()
}

pub fn kovacic(l: &DiffOp, cfg: &KovacicConfig) -> Result<KovacicVerdict> {
    let (r, gauge) = op_normal_form2(l)?;
    let data = PoleData::new(&r, cfg)?;
    let mut complete = true;
    let mut outcome = None;

    if r.is_zero() {
        outcome = Some(KovacicOutcome::Case1 { omega: RatFn::zero() });
    }
    if outcome.is_none() && data.case1_possible() {
        let (found, c) = case1(&r, &data, cfg)?;
        complete &= c;
        outcome = found.map(|omega| KovacicOutcome::Case1 { omega });
    }
    if outcome.is_none() && data.case2_possible() {
        let (found, c) = case2(&r, &data, cfg)?;
        complete &= c;
        outcome = found.map(|minpoly| KovacicOutcome::Case2 { minpoly });
    }
    if outcome.is_none() && data.case3_possible() {
        if cfg.case3 {
            let start = Instant::now();
            for n in [4, 6, 12] {
                let (found, c) = case3(&r, &data, n, cfg, start)?;
                complete &= c;
                if let Some(minpoly) = found {
                    outcome = Some(KovacicOutcome::Case3 { n, minpoly });
                    break;
                }
            }
        } else {
            complete = false;
        }
    }

    let outcome = match outcome {
        Some(o) => o,
        None if complete => KovacicOutcome::NonLiouvillian,
        None => {
            return Err(Error::AlgebraicConstantsRequired(format!(
                "no Riccati solution for r = {r} was found using rational local data"
            )))
        }
    };
    let witness = witness_text(&outcome, &gauge);
    Ok(KovacicVerdict {
        r,
        gauge,
        outcome,
        witness,
        complete,
    })
}

fn witness_text(outcome: &KovacicOutcome, gauge: &RatFn) -> String {
    match outcome {
        KovacicOutcome::Case1 { omega } => {
            format!("y'/y = {}", omega - gauge)
        }
        KovacicOutcome::Case2 { minpoly } | KovacicOutcome::Case3 { minpoly, .. } => {
            let tail = if gauge.is_zero() {
                String::new()
            } else {
                format!(", and y'/y = T - ({gauge})")
            };
            format!("T = z'/z is a root of {}{tail}", minpoly.fmt_var("T"))
        }
        KovacicOutcome::NonLiouvillian => "no liouvillian solutions".into(),
    }
}

/// A finite pole of `r` at the roots of the irreducible `q`.
#[derive(Debug, Clone)]
struct Pole {
    q: Poly,
    order: usize,
}

impl Pole {
    fn point(&self) -> Option<Rat> {
        (self.q.degree() == Some(1)).then(|| -self.q.coeff(0))
    }

    /// `q'/q`: the sum of `1/(x - c)` over the roots.
    fn log_derivative(&self) -> RatFn {
        RatFn::new(self.q.derivative(), self.q.clone()).expect("nonzero")
    }

    fn degree(&self) -> i64 {
        self.q.deg()
    }
}

struct PoleData {
    poles: Vec<Pole>,
    /// `deg den - deg num` of r; `None` when r = 0.
    o_inf: Option<i64>,
}

impl PoleData {
    fn new(r: &RatFn, cfg: &KovacicConfig) -> Result<Self> {
        let poles = if r.den().is_constant() {
            Vec::new()
        } else {
            poly_factor(r.den(), &cfg.solve.factor)?
                .factors
                .into_iter()
                .map(|(q, m)| Pole { q, order: m as usize })
                .collect()
        };
        Ok(PoleData { poles, o_inf: r.ord_inf() })
    }

    fn case1_possible(&self) -> bool {
        let finite = self.poles.iter().all(|p| p.order == 1 || p.order % 2 == 0);
        let inf = self.o_inf.is_none_or(|o| o % 2 == 0 || o > 2);
        finite && inf
    }

    fn case2_possible(&self) -> bool {
        self.poles.iter().any(|p| p.order == 2 || (p.order % 2 == 1 && p.order > 2))
    }

    fn case3_possible(&self) -> bool {
        self.poles.iter().all(|p| p.order <= 2) && self.o_inf.is_none_or(|o| o >= 2)
    }

    /// `S`: the product of the finite pole factors.
    fn pole_product(&self) -> Poly {
        self.poles.iter().fold(Poly::one(), |acc, p| &acc * &p.q)
    }
}

/// Laurent coefficients of `f` at `x = c` (or at infinity in `z = 1/x` when `c` is
/// `None`): returns the lowest exponent and `count` coefficients from there.
fn laurent(f: &RatFn, c: Option<&Rat>, count: usize) -> (i64, Vec<Rat>) {
    let g = match c {
        Some(c) => f.taylor_shift(c),
        None => f.invert_variable(),
    };
    let nz = g.num().low_order().unwrap_or(0);
    let dz = g.den().low_order().unwrap_or(0);
    let n: Vec<Rat> = g.num().coeffs()[nz..].to_vec();
    let d: Vec<Rat> = g.den().coeffs()[dz..].to_vec();
    let mut out: Vec<Rat> = Vec::with_capacity(count);
    for j in 0..count {
        let mut acc = n.get(j).cloned().unwrap_or_else(Rat::zero);
        for i in 1..=j.min(d.len().saturating_sub(1)) {
            acc -= &d[i] * &out[j - i];
        }
        out.push(acc / &d[0]);
    }
    (nz as i64 - dz as i64, out)
}

/// Coefficient `b` of the double pole, i.e. of `(x - c)^-2` in `r` at each root of
/// `q`, as an element of ℚ(c).
fn double_pole_coefficient(r: &RatFn, pole: &Pole) -> Poly {
    let field = ResidueField::new(&pole.q);
    let t1 = r.den().div_exact(&pole.q.pow(2));
    let dq = pole.q.derivative();
    let den = field.mul(&t1, &field.mul(&dq, &dq));
    let inv = field.inv(&den).expect("coprime");
    field.mul(&field.reduce(r.num()), &inv)
}

fn sqrt_one_plus_4b(b: &Rat) -> Option<Rat> {
    rat_sqrt(&(Rat::one() + int(4) * b))
}

/// Square-root coefficients of a Laurent series starting at `t^(-2ν)`: `√r =
/// t^(-ν) (a0 + a1 t + ...)`, up to `count` terms.
fn sqrt_series(coeffs: &[Rat], count: usize) -> Option<Vec<Rat>> {
    let a0 = rat_sqrt(&coeffs[0])?;
    let mut a = vec![a0.clone()];
    for k in 1..count {
        let mut acc = coeffs.get(k).cloned().unwrap_or_else(Rat::zero);
        for i in 1..k {
            acc -= &a[i] * &a[k - i];
        }
        a.push(acc / (int(2) * &a0));
    }
    Some(a)
}

/// Local options for one place: `(θ contribution, exponent contribution)` pairs.
enum Local {
    Options(Vec<(RatFn, Rat)>),
    /// Every option has an irrational exponent.
    IrrationalExponent,
    /// Options exist but cannot be written over ℚ.
    Unrepresentable,
}

fn dedup_options(mut v: Vec<(RatFn, Rat)>) -> Vec<(RatFn, Rat)> {
    let mut out: Vec<(RatFn, Rat)> = Vec::new();
    for o in v.drain(..) {
        if !out.contains(&o) {
            out.push(o);
        }
    }
    out
}

fn case1_local_finite(r: &RatFn, pole: &Pole) -> Local {
    let ld = pole.log_derivative();
    let deg = int(pole.degree());
    match (pole.order, pole.point()) {
        (1, _) => Local::Options(vec![(ld, deg)]),
        (2, point) => {
            let b = match &point {
                Some(c) => laurent(r, Some(c), 1).1[0].clone(),
                None => {
                    let field = ResidueField::new(&pole.q);
                    match field.as_rational(&double_pole_coefficient(r, pole)) {
                        Some(b) => b,
                        None => return Local::Unrepresentable,
                    }
                }
            };
            let Some(s) = sqrt_one_plus_4b(&b) else {
                return if point.is_some() { Local::IrrationalExponent } else { Local::Unrepresentable };
            };
            let half = rat(1, 2);
            let plus = &half + &half * &s;
            let minus = &half - &half * &s;
            if point.is_none() && plus != minus {
                // conjugate roots could take different signs
                return Local::Unrepresentable;
            }
            Local::Options(dedup_options(vec![
                (ld.scale(&plus), &plus * &deg),
                (ld.scale(&minus), &minus * &deg),
            ]))
        }
        (order, Some(c)) => {
            let nu = order / 2;
            let (_, coeffs) = laurent(r, Some(&c), nu);
            let Some(a) = sqrt_series(&coeffs, nu.saturating_sub(1).max(1)) else {
                return Local::Unrepresentable;
            };
            let t = Poly::linear_root(c.clone());
            let mut sqrt_part = RatFn::zero();
            for (k, ak) in a.iter().enumerate().take(nu - 1) {
                let term = RatFn::new(Poly::constant(ak.clone()), t.pow((nu - k) as u32)).expect("nonzero");
                sqrt_part = &sqrt_part + &term;
            }
            let mut b = coeffs[nu - 1].clone();
            for i in 0..nu - 1 {
                let j = nu - 1 - i;
                if j <= nu - 2 {
                    b -= &a[i] * &a[j];
                }
            }
            let nu_r = int(nu as i64);
            let ratio = &b / &a[0];
            let plus = (&ratio + &nu_r) / int(2);
            let minus = (-&ratio + &nu_r) / int(2);
            let ld = RatFn::new(Poly::one(), t).expect("nonzero");
            Local::Options(dedup_options(vec![
                (&sqrt_part + &ld.scale(&plus), plus),
                (&(-&sqrt_part) + &ld.scale(&minus), minus),
            ]))
        }
        _ => Local::Unrepresentable,
    }
}

fn case1_local_infinity(r: &RatFn, o_inf: i64) -> Local {
    if o_inf > 2 {
        return Local::Options(vec![(RatFn::zero(), int(0)), (RatFn::zero(), int(1))]);
    }
    if o_inf == 2 {
        let b = &r.num().lc() / &r.den().lc();
        let Some(s) = sqrt_one_plus_4b(&b) else {
            return Local::IrrationalExponent;
        };
        let half = rat(1, 2);
        return Local::Options(dedup_options(vec![
            (RatFn::zero(), &half + &half * &s),
            (RatFn::zero(), &half - &half * &s),
        ]));
    }
    let nu = (-o_inf / 2) as usize;
    let (_, coeffs) = laurent(r, None, nu + 2);
    let Some(a) = sqrt_series(&coeffs, nu + 1) else {
        return Local::Unrepresentable;
    };
    let sqrt_part = Poly::from_coeffs((0..=nu).map(|k| a[nu - k].clone()).collect());
    let mut b = coeffs[nu + 1].clone();
    for i in 0..=nu {
        let j = nu + 1 - i;
        if j <= nu {
            b -= &a[i] * &a[j];
        }
    }
    let ratio = &b / &a[0];
    let nu_r = int(nu as i64);
    let plus = (&ratio - &nu_r) / int(2);
    let minus = (-&ratio - &nu_r) / int(2);
    let sp = RatFn::from_poly(sqrt_part);
    Local::Options(dedup_options(vec![(sp.clone(), plus), (-&sp, minus)]))
}

/// Candidate (term, exponent) choices at one place.
type LocalOptions = Vec<(RatFn, Rat)>;

/// Splits local data into usable options, tracking completeness: a single place
/// with irrational exponents can never balance to an integer degree, two or more
/// might.
fn collect_locals(locals: Vec<Local>) -> (Option<Vec<LocalOptions>>, bool) {
    let irrational = locals.iter().filter(|l| matches!(l, Local::IrrationalExponent)).count();
    let unrepresentable = locals.iter().any(|l| matches!(l, Local::Unrepresentable));
    if unrepresentable {
        return (None, false);
    }
    if irrational == 1 {
        return (None, true);
    }
    if irrational > 1 {
        return (None, false);
    }
    let opts = locals
        .into_iter()
        .map(|l| match l {
            Local::Options(v) => v,
            _ => unreachable!(),
        })
        .collect();
    (Some(opts), true)
}

/// All combinations `(θ, exponent sum)` of one option per place, where the last
/// place is infinity and contributes with the opposite sign.
fn families(opts: &[Vec<(RatFn, Rat)>], cap: usize) -> Result<Vec<(RatFn, Rat)>> {
    let count = opts
        .iter()
        .try_fold(1usize, |acc, o| acc.checked_mul(o.len()))
        .unwrap_or(usize::MAX);
    if count > cap {
        return Err(Error::CandidateExplosion { count, cap });
    }
    let mut out = Vec::with_capacity(count);
    let last = opts.len() - 1;
    for mut n in 0..count {
        let mut theta = RatFn::zero();
        let mut e = Rat::zero();
        for (i, o) in opts.iter().enumerate() {
            let (t, ei) = &o[n % o.len()];
            n /= o.len();
            theta = &theta + t;
            if i == last {
                e += ei;
            } else {
                e -= ei;
            }
        }
        out.push((theta, e));
    }
    Ok(out)
}

fn nonneg_integer(q: &Rat) -> Option<usize> {
    (q.is_integer() && !q.is_negative()).then(|| q.to_integer().try_into().ok())?
}

fn case1(r: &RatFn, data: &PoleData, cfg: &KovacicConfig) -> Result<(Option<RatFn>, bool)> {
    let mut locals: Vec<Local> = data.poles.iter().map(|p| case1_local_finite(r, p)).collect();
    locals.push(case1_local_infinity(r, data.o_inf.expect("r nonzero")));
    let (opts, complete) = collect_locals(locals);
    let Some(opts) = opts else {
        return Ok((None, complete));
    };
    for (theta, d) in families(&opts, cfg.solve.candidate_cap)? {
        let Some(d) = nonneg_integer(&d) else { continue };
        let m = DiffOp::from_coeffs(vec![
            &(&theta.derive() + &(&theta * &theta)) - r,
            theta.scale(&int(2)),
            RatFn::one(),
        ]);
        for p in polynomial_solutions_bounded(&m, d) {
            let omega = &theta + &RatFn::new(p.derivative(), p.clone()).expect("nonzero");
            if &(&omega.derive() + &(&omega * &omega)) == r {
                return Ok((Some(omega), complete));
            }
        }
    }
    Ok((None, complete))
}

/// Integer members of `{base + k·step·√(1+4b)}` for `k` in `ks`.
fn e_set(b: Option<&Rat>, base: i64, step: &Rat, ks: &[i64]) -> Vec<Rat> {
    let mut out = vec![int(base)];
    if let Some(s) = b.and_then(sqrt_one_plus_4b) {
        for &k in ks {
            let e = int(base) + int(k) * step * &s;
            if e.is_integer() && !out.contains(&e) {
                out.push(e);
            }
        }
    }
    out.sort();
    out
}

/// Options `(λ·e·q'/q, e·deg q)` for cases 2 and 3. Returns `false` when conjugate
/// roots of a non-rational place could take different values of `e`.
fn e_options(r: &RatFn, pole: &Pole, lambda: &Rat, set: impl Fn(Option<&Rat>) -> Vec<Rat>) -> (Vec<(RatFn, Rat)>, bool) {
    let es = match pole.order {
        2 => {
            let b = match pole.point() {
                Some(c) => Some(laurent(r, Some(&c), 1).1[0].clone()),
                None => ResidueField::new(&pole.q).as_rational(&double_pole_coefficient(r, pole)),
            };
            set(b.as_ref())
        }
        _ => unreachable!("handled by the caller"),
    };
    let symmetric = pole.point().is_some() || es.len() == 1;
    let ld = pole.log_derivative();
    let deg = int(pole.degree());
    (
        es.into_iter().map(|e| (ld.scale(&(lambda * &e)), e * &deg)).collect(),
        symmetric,
    )
}

fn case2(r: &RatFn, data: &PoleData, cfg: &KovacicConfig) -> Result<(Option<RfPoly>, bool)> {
    let half = rat(1, 2);
    let mut complete = true;
    let mut opts: Vec<Vec<(RatFn, Rat)>> = Vec::new();
    for pole in &data.poles {
        let ld = pole.log_derivative();
        let deg = int(pole.degree());
        let o = match pole.order {
            1 => vec![(ld.scale(&int(2)), int(4) * &deg)],
            2 => {
                let (o, sym) = e_options(r, pole, &half, |b| e_set(b, 2, &int(1), &[-2, 2]));
                complete &= sym;
                o
            }
            n => {
                let e = int(n as i64);
                vec![(ld.scale(&(&half * &e)), e * &deg)]
            }
        };
        opts.push(o);
    }
    let o_inf = data.o_inf.expect("r nonzero");
    let e_inf: Vec<Rat> = if o_inf > 2 {
        vec![int(0), int(2), int(4)]
    } else if o_inf == 2 {
        let b = &r.num().lc() / &r.den().lc();
        e_set(Some(&b), 2, &int(1), &[-2, 2])
    } else {
        vec![int(o_inf)]
    };
    opts.push(e_inf.into_iter().map(|e| (RatFn::zero(), e)).collect());

    for (theta, diff) in families(&opts, cfg.solve.candidate_cap)? {
        let Some(d) = nonneg_integer(&(&diff * &half)) else { continue };
        let th2 = &theta * &theta;
        let dth = theta.derive();
        let four_r = r.scale(&int(4));
        let m = DiffOp::from_coeffs(vec![
            &(&(&(&dth.derive() + &(&theta * &dth).scale(&int(3))) + &(&th2 * &theta)) - &(&four_r * &theta))
                - &r.derive().scale(&int(2)),
            &(&th2.scale(&int(3)) + &dth.scale(&int(3))) - &four_r,
            theta.scale(&int(3)),
            RatFn::one(),
        ]);
        for p in polynomial_solutions_bounded(&m, d) {
            let phi = &theta + &RatFn::new(p.derivative(), p.clone()).expect("nonzero");
            let c0 = &(&(&phi.derive() + &(&phi * &phi)) * &RatFn::constant(half.clone())) - r;
            let minpoly = RfPoly::from_coeffs(vec![c0, -&phi, RatFn::one()]);
            if verify_riccati_minpoly(&minpoly, r) {
                return Ok((Some(minpoly), complete));
            }
        }
    }
    Ok((None, complete))
}

fn case3(
    r: &RatFn,
    data: &PoleData,
    n: usize,
    cfg: &KovacicConfig,
    start: Instant,
) -> Result<(Option<RfPoly>, bool)> {
    let lambda = Rat::new((n as i64).into(), 12.into());
    let step = Rat::new(12.into(), (n as i64).into());
    let half_n = n as i64 / 2;
    let ks: Vec<i64> = (-half_n..=half_n).filter(|&k| k != 0).collect();
    let mut complete = true;
    let mut opts: Vec<Vec<(RatFn, Rat)>> = Vec::new();
    for pole in &data.poles {
        let o = if pole.order == 1 {
            vec![(pole.log_derivative().scale(&(&lambda * int(12))), int(12) * int(pole.degree()))]
        } else {
            let (o, sym) = e_options(r, pole, &lambda, |b| e_set(b, 6, &step, &ks));
            complete &= sym;
            o
        };
        opts.push(o);
    }
    let o_inf = data.o_inf.expect("r nonzero");
    let b_inf = if o_inf == 2 {
        &r.num().lc() / &r.den().lc()
    } else {
        Rat::zero()
    };
    opts.push(
        e_set(Some(&b_inf), 6, &step, &ks)
            .into_iter()
            .map(|e| (RatFn::zero(), e))
            .collect(),
    );

    let s = RatFn::from_poly(data.pole_product());
    let ds = s.derive();
    let s2r = &(&s * &s) * r;
    for (theta, diff) in families(&opts, cfg.solve.candidate_cap)? {
        if let Some(budget) = cfg.budget {
            if start.elapsed() > budget {
                return Err(Error::BudgetExceeded(budget.as_millis() as u64));
            }
        }
        let Some(d) = nonneg_integer(&(&diff * &lambda)) else { continue };
        // P_i for P = x^j, for every j; the recursion is linear in P.
        let chains: Vec<Vec<RatFn>> = (0..=d)
            .map(|j| {
                let mut p: Vec<RatFn> = vec![RatFn::zero(); n + 2];
                // p[i + 1] holds P_i, so p[0] is P_{-1}
                p[n + 1] = -RatFn::from_poly(Poly::monomial(int(1), j));
                for i in (0..=n).rev() {
                    let ni = int((n - i) as i64);
                    let mut v = &(-&(&s * &p[i + 1].derive())) + &(&(&ds.scale(&ni) - &(&s * &theta)) * &p[i + 1]);
                    if i < n {
                        v = &v - &(&s2r * &p[i + 2]).scale(&(&ni * int(i as i64 + 1)));
                    }
                    p[i] = v;
                }
                p
            })
            .collect();
        let rows_len = chains
            .iter()
            .map(|c| c[0].num().coeffs().len().max(c[0].den().deg() as usize + 1))
            .max()
            .unwrap_or(0);
        // P_{-1} is a polynomial: S and r·S² are polynomial when poles have order ≤ 2
        let common_den = chains.iter().fold(Poly::one(), |acc, c| acc.lcm(c[0].den()));
        let cleared: Vec<Poly> = chains
            .iter()
            .map(|c| (c[0].num() * &common_den).div_exact(c[0].den()))
            .collect();
        let rows_len = rows_len.max(cleared.iter().map(|p| p.coeffs().len()).max().unwrap_or(0));
        let rows: Vec<Vec<Rat>> = (0..rows_len)
            .map(|k| cleared.iter().map(|p| p.coeff(k)).collect())
            .collect();
        for sol in nullspace(&rows, d + 1) {
            let mut coeffs = Vec::with_capacity(n + 1);
            for i in 0..=n {
                let mut pi = RatFn::zero();
                for (j, c) in sol.iter().enumerate() {
                    if !c.is_zero() {
                        pi = &pi + &chains[j][i + 1].scale(c);
                    }
                }
                let fact: Rat = (1..=(n - i) as i64).map(int).product();
                let si = s.pow(i as i32).expect("nonzero");
                coeffs.push(&(&si * &pi) * &RatFn::constant(Rat::one() / fact));
            }
            let minpoly = RfPoly::from_coeffs(coeffs);
            if minpoly.degree() == Some(n) {
                let minpoly = minpoly.monic();
                if verify_riccati_minpoly(&minpoly, r) {
                    return Ok((Some(minpoly), complete));
                }
            }
        }
    }
    Ok((None, complete))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(n: &[i64], d: &[i64]) -> RatFn {
        RatFn::new(Poly::from_ints(n), Poly::from_ints(d)).unwrap()
    }

    fn run(l: &DiffOp) -> KovacicVerdict {
        kovacic(l, &KovacicConfig::default()).unwrap()
    }

    #[test]
    fn airy_is_not_liouvillian() {
        let l = DiffOp::from_coeffs(vec![-RatFn::x(), RatFn::zero(), RatFn::one()]);
        assert_eq!(run(&l).outcome, KovacicOutcome::NonLiouvillian);
    }

    #[test]
    fn remark_operator_is_case_two() {
        let l = DiffOp::from_coeffs(vec![rf(&[-1], &[0, 4]), rf(&[1], &[0, 2]), RatFn::one()]);
        let v = run(&l);
        let KovacicOutcome::Case2 { minpoly } = &v.outcome else {
            panic!("{:?}", v.outcome)
        };
        assert!(verify_riccati_minpoly(minpoly, &v.r));
        assert_eq!(minpoly.fmt_var("T"), "T^2 - (1/(2*x))*T - (4*x - 1)/(16*x^2)");
    }

    #[test]
    fn trivial_operator_is_case_one() {
        let v = run(&DiffOp::d_pow(2));
        assert_eq!(v.outcome, KovacicOutcome::Case1 { omega: RatFn::zero() });
    }

    #[test]
    fn euler_operator_case_one() {
        let l = DiffOp::from_coeffs(vec![rf(&[-2], &[0, 0, 1]), RatFn::zero(), RatFn::one()]);
        let KovacicOutcome::Case1 { omega } = run(&l).outcome else { panic!() };
        assert_eq!(&omega.derive() + &(&omega * &omega), rf(&[2], &[0, 0, 1]));
    }

    #[test]
    fn higher_order_pole_case_one() {
        // z = exp(-1/x): ω = 1/x^2, r = ω' + ω² = (1 - 2x)/x^4
        let r = rf(&[1, -2], &[0, 0, 0, 0, 1]);
        let l = DiffOp::from_coeffs(vec![-r.clone(), RatFn::zero(), RatFn::one()]);
        let KovacicOutcome::Case1 { omega } = run(&l).outcome else { panic!() };
        assert_eq!(&omega.derive() + &(&omega * &omega), r);
    }

    #[test]
    fn exponential_of_polynomial_case_one() {
        // z = exp(x^2/2): ω = x, r = 1 + x^2
        let r = RatFn::from_poly(Poly::from_ints(&[1, 0, 1]));
        let l = DiffOp::from_coeffs(vec![-r.clone(), RatFn::zero(), RatFn::one()]);
        let KovacicOutcome::Case1 { omega } = run(&l).outcome else { panic!() };
        assert_eq!(omega, RatFn::x());
    }

    #[test]
    fn case_three_example() {
        // r = -(3/16)/x^2 - (2/9)/(x-1)^2 + (3/16)/(x(x-1)): the classic tetrahedral example
        let r = &(&rf(&[-3], &[0, 0, 16]) + &rf(&[-2], &[1, -2, 1]).scale(&rat(1, 9)))
            + &rf(&[3], &[0, -16, 16]);
        let l = DiffOp::from_coeffs(vec![-r.clone(), RatFn::zero(), RatFn::one()]);
        let v = run(&l);
        assert_eq!(v.outcome.case_index(), Some(3), "{:?}", v.outcome);
        assert!(verify_riccati_minpoly(&v.outcome.minpoly().unwrap(), &v.r));
    }

    #[test]
    fn laurent_coefficients() {
        // 1/(x^2 (1 - x)) = x^-2 + x^-1 + 1 + ...
        let f = rf(&[1], &[0, 0, 1, -1]);
        let (low, c) = laurent(&f, Some(&int(0)), 3);
        assert_eq!(low, -2);
        assert_eq!(c, vec![int(1), int(1), int(1)]);
    }
}
