mod common;

use std::sync::Arc;

use proptest::prelude::*;
use pvt_core::expr::{parse_operator, parse_ratfn};
use pvt_core::field::{rf_derive, RatFn};
use pvt_core::ore::{op_apply, op_gcrd, op_lclm, DiffOp};
use pvt_core::tower::{Tower, TowerElem};
use rand::Rng;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn sqrt_exp() -> Arc<Tower> {
    Tower::from_json(
        r#"{"generators": [
            {"name": "s", "kind": "algebraic", "data": "T^2 - x"},
            {"name": "t", "kind": "exponential", "data": "1/(2*s)"}
        ]}"#,
    )
    .unwrap()
    .into_shared()
}

fn tower_elem(t: &Arc<Tower>, seed: u64) -> TowerElem {
    let mut r = common::rng(seed);
    let mut c = || r.gen_range(-3i64..=3);
    let shift = c().abs() + 1;
    let text = format!(
        "({} + {}*s + {}*t + {}*x*s*t + {}*t^2)/(t - {shift})",
        c(),
        c(),
        c(),
        c(),
        c(),
    );
    TowerElem::parse(t, &text).unwrap()
}

proptest! {
    #![proptest_config(cfg(200))]

    #[test]
    fn derivation_is_leibniz_and_linear(a in any::<u64>(), b in any::<u64>()) {
        let f = common::ratfn(&mut common::rng(a));
        let g = common::ratfn(&mut common::rng(b));
        prop_assert_eq!(rf_derive(&(&f * &g)), &(&rf_derive(&f) * &g) + &(&f * &rf_derive(&g)));
        prop_assert_eq!(rf_derive(&(&f + &g)), &rf_derive(&f) + &rf_derive(&g));
    }

    #[test]
    fn field_axioms(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = common::ratfn(&mut common::rng(a));
        let g = common::ratfn(&mut common::rng(b));
        let h = common::ratfn(&mut common::rng(c));
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&f - &f, RatFn::zero());
        if !f.is_zero() {
            prop_assert_eq!(&f * &f.inv().unwrap(), RatFn::one());
        }
    }

    #[test]
    fn ratfn_print_parse_round_trip(a in any::<u64>()) {
        let f = common::ratfn(&mut common::rng(a));
        prop_assert_eq!(parse_ratfn(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn operator_print_parse_round_trip(a in any::<u64>()) {
        let l = common::op(&mut common::rng(a), 3);
        prop_assert_eq!(parse_operator(&l.to_canonical_string()).unwrap(), l);
    }
}

proptest! {
    #![proptest_config(cfg(80))]

    #[test]
    fn ore_multiplication_is_associative(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (x, y, z) = (
            common::op(&mut common::rng(a), 2),
            common::op(&mut common::rng(b), 2),
            common::op(&mut common::rng(c), 2),
        );
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
    }

    #[test]
    fn commutation_rule(a in any::<u64>()) {
        let f = common::ratfn(&mut common::rng(a));
        let lhs = &DiffOp::d() * &DiffOp::from_ratfn(f.clone());
        let rhs = &(&DiffOp::from_ratfn(f.clone()) * &DiffOp::d()) + &DiffOp::from_ratfn(f.derive());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn right_division_identity(a in any::<u64>(), b in any::<u64>()) {
        let x = common::op(&mut common::rng(a), 3);
        let y = common::op(&mut common::rng(b), 2);
        let (q, r) = x.right_divide(&y).unwrap();
        prop_assert_eq!(&(&q * &y) + &r, x);
        prop_assert!(r.is_zero() || r.order() < y.order());
    }

    #[test]
    fn apply_is_a_homomorphism(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let x = common::op(&mut common::rng(a), 2);
        let y = common::op(&mut common::rng(b), 2);
        let f = common::ratfn(&mut common::rng(c));
        prop_assert_eq!(op_apply(&(&x * &y), &f), op_apply(&x, &op_apply(&y, &f)));
    }

    #[test]
    fn gcrd_and_lclm_contracts(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        // a shared right factor makes the gcrd nontrivial
        let common_factor = common::monic_op(&mut common::rng(c), 1);
        let x = &common::op(&mut common::rng(a), 1) * &common_factor;
        let y = &common::op(&mut common::rng(b), 1) * &common_factor;
        let g = op_gcrd(&x, &y).unwrap();
        prop_assert!(x.right_divisible_by(&g) && y.right_divisible_by(&g));
        prop_assert!(g.right_divisible_by(&common_factor));
        let m = op_lclm(&x, &y).unwrap();
        prop_assert!(m.right_divisible_by(&x) && m.right_divisible_by(&y));
        let (ox, oy, og) = (x.order().unwrap(), y.order().unwrap(), g.order().unwrap());
        prop_assert_eq!(m.order().unwrap(), ox + oy - og);
    }
}

proptest! {
    #![proptest_config(cfg(30))]

    #[test]
    fn tower_derivation_is_leibniz_and_linear(a in any::<u64>(), b in any::<u64>()) {
        let t = sqrt_exp();
        let u = tower_elem(&t, a);
        let v = tower_elem(&t, b);
        let prod = u.mul(&v).unwrap().derive();
        let leibniz = u.derive().mul(&v).unwrap().add(&u.mul(&v.derive()).unwrap()).unwrap();
        prop_assert_eq!(prod, leibniz);
        let sum = u.add(&v).unwrap().derive();
        prop_assert_eq!(sum, u.derive().add(&v.derive()).unwrap());
    }

    #[test]
    fn tower_elements_round_trip_through_printing(a in any::<u64>()) {
        let t = sqrt_exp();
        let u = tower_elem(&t, a);
        prop_assert_eq!(TowerElem::parse(&t, &u.to_string()).unwrap(), u.clone());
        prop_assert!(u.sub(&u).unwrap().is_zero());
    }
}
