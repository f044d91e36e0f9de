//! Small worked examples for each public operation, written against the parser.

use pvt_core::expr::{parse_operator, parse_poly, parse_ratfn};
use pvt_core::field::{
    int, partial_fractions, poly_factor, rf_arith, rf_derive, ArithOp, FactorConfig, Poly, RatFn,
};
use pvt_core::kovacic::{kovacic, KovacicConfig, KovacicOutcome};
use pvt_core::ore::{op_apply, op_gcrd, op_lclm, op_mul, op_normal_form2, op_right_divide, DiffOp};
use pvt_core::solve::{
    hyperexp_right_factors, indicial_roots, polynomial_solutions, rational_solutions, singular_points, Place,
    SolveConfig,
};
use pvt_core::tower::{
    elem_arith, elem_derive, elem_is_zero, minimal_annihilator, AnnihilatorConfig, AnnihilatorResult, Tower,
    TowerElem,
};
use std::sync::Arc;

const SQRT: &str = r#"{"generators": [{"name": "s", "kind": "algebraic", "data": "T^2 - x"}]}"#;
const EXP_SQRT: &str = r#"{"generators": [
    {"name": "s", "kind": "algebraic", "data": "T^2 - x"},
    {"name": "t", "kind": "exponential", "data": "1/(2*s)"}
]}"#;
const LOG: &str = r#"{"generators": [{"name": "l", "kind": "primitive", "data": "1/x"}]}"#;
const EXP: &str = r#"{"generators": [{"name": "t", "kind": "exponential", "data": "1"}]}"#;
const RICCATI: &str = r#"{"generators": [{"name": "w", "kind": "rational_ode", "data": "x - w^2"}]}"#;

fn op(s: &str) -> DiffOp {
    parse_operator(s).unwrap()
}

fn poly(s: &str) -> Poly {
    parse_poly(s).unwrap()
}

fn rf(s: &str) -> RatFn {
    parse_ratfn(s).unwrap()
}

fn tower(json: &str) -> Arc<Tower> {
    Tower::from_json(json).unwrap().into_shared()
}

fn elem(t: &Arc<Tower>, s: &str) -> TowerElem {
    TowerElem::parse(t, s).unwrap()
}

fn rats(xs: &[i64]) -> Vec<pvt_core::field::Rat> {
    xs.iter().map(|&k| int(k)).collect()
}

#[test]
fn rational_function_arithmetic() {
    assert_eq!(rf_arith(ArithOp::Add, &rf("1/x"), &rf("1/x")).unwrap(), rf("2/x"));
    assert_eq!(rf_arith(ArithOp::Mul, &rf("(x+1)/x"), &rf("x/(x+1)")).unwrap(), RatFn::one());
    assert_eq!(rf_arith(ArithOp::Div, &rf("x^2 - 1"), &rf("x - 1")).unwrap(), rf("x + 1"));
    assert!(rf_arith(ArithOp::Div, &rf("x"), &RatFn::zero()).is_err());
    assert_eq!(rf("2/x").to_string(), "2/x");
}

#[test]
fn rational_function_derivatives() {
    assert_eq!(rf_derive(&rf("x^2")), rf("2*x"));
    assert_eq!(rf_derive(&rf("(x^2 + 1)/x")), rf("(x^2 - 1)/x^2"));
    assert!(rf_derive(&rf("7")).is_zero());
}

#[test]
fn factorizations() {
    let cfg = FactorConfig::default();
    let f = poly_factor(&poly("x^3 - x"), &cfg).unwrap();
    let mut got: Vec<(Poly, u32)> = f.factors.clone();
    got.sort_by_key(|(p, _)| p.to_string());
    let mut want = vec![(poly("x"), 1), (poly("x - 1"), 1), (poly("x + 1"), 1)];
    want.sort_by_key(|(p, _)| p.to_string());
    assert_eq!(got, want);

    let f = poly_factor(&poly("x^2 + 1"), &cfg).unwrap();
    assert_eq!(f.factors, vec![(poly("x^2 + 1"), 1)]);

    let f = poly_factor(&poly("x^4 - 2*x^2 + 1"), &cfg).unwrap();
    assert_eq!(f.factors.len(), 2);
    assert!(f.factors.iter().all(|(_, m)| *m == 2));
    assert_eq!(f.expand(), poly("x^4 - 2*x^2 + 1"));
}

#[test]
fn partial_fraction_examples() {
    let cfg = FactorConfig::default();
    let f = rf("(x^2 + 1)/(x*(x - 1))");
    let pf = partial_fractions(&f, &cfg).unwrap();
    assert_eq!(pf.polynomial, Poly::one());
    assert!(pf.terms.contains(&(poly("x"), 1, poly("-1"))));
    assert!(pf.terms.contains(&(poly("x - 1"), 1, poly("2"))));
    assert_eq!(pf.recombine(), f);

    let pf = partial_fractions(&rf("1/x^2"), &cfg).unwrap();
    assert!(pf.polynomial.is_zero());
    assert_eq!(pf.terms, vec![(poly("x"), 2, Poly::one())]);

    let pf = partial_fractions(&rf("x"), &cfg).unwrap();
    assert_eq!(pf.polynomial, poly("x"));
    assert!(pf.terms.is_empty());
}

#[test]
fn operator_products() {
    assert_eq!(op_mul(&op("D"), &op("x")), op("x*D + 1"));
    assert_eq!(op_mul(&op("D + 1/x"), &op("D - 1/x")), op("D^2"));
    let l = op("D^2 - x");
    assert_eq!(op_mul(&l, &DiffOp::one()), l);
}

#[test]
fn right_division() {
    assert_eq!(op_right_divide(&op("D^2"), &op("D - 1/x")).unwrap(), (op("D + 1/x"), DiffOp::zero()));
    assert_eq!(op_right_divide(&op("D^2 - x"), &op("D")).unwrap(), (op("D"), op("-x")));
    let l = op("D^2 + (1/(2*x))*D - 1/(4*x)");
    assert_eq!(op_right_divide(&l, &l).unwrap(), (DiffOp::one(), DiffOp::zero()));
}

#[test]
fn gcrd_and_lclm() {
    assert_eq!(op_gcrd(&op("D^2"), &op("D - 1/x")).unwrap(), op("D - 1/x"));
    assert_eq!(op_gcrd(&op("D - 1"), &op("D - 2")).unwrap(), DiffOp::one());
    let l = op("2*D^2 - x");
    assert_eq!(op_gcrd(&l, &l).unwrap(), l.monic());
    assert_eq!(op_lclm(&l, &l).unwrap(), l.monic());

    for (a, b) in [("D - 1/x", "D"), ("D", "D - 1")] {
        let (a, b) = (op(a), op(b));
        let m = op_lclm(&a, &b).unwrap();
        assert_eq!(m.order(), Some(2));
        assert!(m.right_divisible_by(&a) && m.right_divisible_by(&b));
    }
    assert_eq!(op_lclm(&op("D"), &op("D - 1")).unwrap(), op("D^2 - D"));
}

#[test]
fn application() {
    assert_eq!(op_apply(&op("D^2 - x"), &rf("x")), rf("-x^2"));
    assert!(op_apply(&op("D^3 + x*D"), &RatFn::zero()).is_zero());
    let t = tower(SQRT);
    assert!(elem_is_zero(&op_apply(&op("D - 1/(2*x)"), &elem(&t, "s"))));
}

#[test]
fn normal_forms() {
    let (r, gauge) = op_normal_form2(&op("D^2 - x")).unwrap();
    assert_eq!((r, gauge), (rf("x"), RatFn::zero()));
    assert!(op_normal_form2(&op("D^2 + 2*D + 1")).unwrap().0.is_zero());
    let (r, _) = op_normal_form2(&op("D^2 + (1/(2*x))*D - 1/(4*x)")).unwrap();
    assert_eq!(r, rf("(4*x - 3)/(16*x^2)"));
}

#[test]
fn singular_places() {
    let cfg = SolveConfig::default();
    let places = |s: &str| -> Vec<Place> {
        singular_points(&op(s), &cfg).unwrap().into_iter().map(|p| p.place).collect()
    };
    assert_eq!(places("D^2 - x"), vec![Place::Infinity]);
    assert_eq!(places("D^2 + (1/(2*x))*D - 1/(4*x)"), vec![Place::Finite(Poly::x()), Place::Infinity]);
    assert_eq!(places("D^2 - 2/x^2"), vec![Place::Finite(Poly::x()), Place::Infinity]);
}

#[test]
fn indicial_exponents() {
    let cfg = SolveConfig::default();
    let roots = |s: &str, p: &Place| -> Vec<pvt_core::field::Rat> {
        indicial_roots(&op(s), p, &cfg)
            .unwrap()
            .iter()
            .map(|r| r.as_rational().unwrap())
            .collect()
    };
    let origin = Place::Finite(Poly::x());
    assert_eq!(roots("D^2 - 2/x^2", &origin), rats(&[-1, 2]));
    assert_eq!(roots("D^2", &origin), rats(&[0, 1]));
    // exponents in z = 1/x: x^2 sits at -2 and 1/x at 1
    assert_eq!(roots("D^2 - 2/x^2", &Place::Infinity), rats(&[-2, 1]));
}

#[test]
fn polynomial_and_rational_solutions() {
    let cfg = SolveConfig::default();
    assert_eq!(polynomial_solutions(&op("D^2")).len(), 2);
    assert_eq!(polynomial_solutions(&op("D^2 - 2/x^2")), vec![poly("x^2")]);
    assert!(polynomial_solutions(&op("D - 1")).is_empty());

    let euler = op("D^2 - 2/x^2");
    let sols = rational_solutions(&euler, &cfg).unwrap();
    assert_eq!(sols.len(), 2);
    assert!(sols.iter().all(|f| op_apply(&euler, f).is_zero()));
    assert!(sols.iter().any(|f| f.den().degree() == Some(1)));
    assert_eq!(rational_solutions(&op("D^2"), &cfg).unwrap().len(), 2);
    assert!(rational_solutions(&op("D^2 - x"), &cfg).unwrap().is_empty());
}

#[test]
fn first_order_right_factors() {
    let cfg = SolveConfig::default();
    let us: Vec<RatFn> = hyperexp_right_factors(&op("D - 1/x"), &cfg)
        .unwrap()
        .into_iter()
        .map(|f| f.u)
        .collect();
    assert_eq!(us, vec![rf("1/x")]);
    let mut us: Vec<String> = hyperexp_right_factors(&op("D^2 - (1 + 1/x)*D + 1/x"), &cfg)
        .unwrap()
        .iter()
        .map(|f| f.u.to_string())
        .collect();
    us.sort();
    assert_eq!(us, ["1", "1/(x + 1)"]);
    assert!(hyperexp_right_factors(&op("D^2 + (1/(2*x))*D - 1/(4*x)"), &cfg).unwrap().is_empty());
}

#[test]
fn kovacic_cases() {
    let cfg = KovacicConfig::default();
    let airy = kovacic(&op("D^2 - x"), &cfg).unwrap();
    assert_eq!(airy.outcome, KovacicOutcome::NonLiouvillian);
    let remark = kovacic(&op("D^2 + (1/(2*x))*D - 1/(4*x)"), &cfg).unwrap();
    assert_eq!(remark.outcome.case_index(), Some(2));
    let free = kovacic(&op("D^2"), &cfg).unwrap();
    assert_eq!(free.outcome, KovacicOutcome::Case1 { omega: RatFn::zero() });
}

#[test]
fn tower_arithmetic() {
    let t = tower(SQRT);
    let s = elem(&t, "s");
    assert_eq!(elem_arith(ArithOp::Mul, &s, &s).unwrap().as_ratfn(), Some(rf("x")));
    assert_eq!(elem_arith(ArithOp::Add, &s, &elem(&t, "0")).unwrap(), s);
    assert!(elem_is_zero(&elem(&t, "s^2 - x")));

    let t = tower(EXP);
    let e = elem(&t, "t");
    let tt = elem_arith(ArithOp::Mul, &e, &e).unwrap();
    assert_eq!(elem_arith(ArithOp::Div, &tt, &e).unwrap(), e);
    assert!(!elem_is_zero(&elem(&t, "t - 1")));
    assert!(elem_is_zero(&elem(&t, "0/(x + 1)")));
}

#[test]
fn tower_derivatives() {
    let t = tower(LOG);
    assert_eq!(elem_derive(&elem(&t, "l")).as_ratfn(), Some(rf("1/x")));
    let t = tower(SQRT);
    assert_eq!(elem_derive(&elem(&t, "s^2")).as_ratfn(), Some(RatFn::one()));
    let t = tower(RICCATI);
    let lhs = elem_derive(&elem(&t, "w^2"));
    assert!(elem_is_zero(&lhs.sub(&elem(&t, "2*w*(x - w^2)")).unwrap()));
}

#[test]
fn annihilators() {
    let cfg = AnnihilatorConfig::default();
    let t = tower(SQRT);
    let found = minimal_annihilator(&elem(&t, "s"), &cfg).unwrap();
    assert_eq!(found, AnnihilatorResult::Found { op: op("D - 1/(2*x)"), order: 1 });

    let t = tower(EXP_SQRT);
    let found = minimal_annihilator(&elem(&t, "t + 1/t"), &AnnihilatorConfig { max_order: 4, ..cfg }).unwrap();
    let remark = op("D^2 + (1/(2*x))*D - 1/(4*x)");
    assert_eq!(found, AnnihilatorResult::Found { op: remark, order: 2 });
}
