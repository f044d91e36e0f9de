//! Bounded search for rational expressions of a tower element in given elements.

use std::collections::HashMap;

use super::mpoly::{exponents_of_degree, MPoly};
use crate::error::Result;
use crate::field::{int, RatFn};
use crate::fmt_util::paren_sum;
use crate::tower::{linear_relations, AnnihilatorConfig, AnnihilatorResult, TowerElem};

/// `num / den`, both polynomials over ℚ(x) in some list of elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalExpr {
    pub num: MPoly,
    pub den: MPoly,
}

impl RationalExpr {
    pub fn fmt_with(&self, names: &[&str]) -> String {
        let n = self.num.fmt_with(names);
        if self.den.total_degree() == 0 && self.den.terms().count() == 1 {
            let (_, c) = self.den.terms().next().expect("one term");
            if c.is_one() {
                return n;
            }
        }
        let d = self.den.fmt_with(names);
        let d = if d.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            d
        } else {
            format!("({d})")
        };
        format!("{}/{d}", paren_sum(n))
    }

    pub fn eval(&self, values: &[TowerElem], like: &TowerElem) -> Result<TowerElem> {
        self.num.eval(values, like)?.div(&self.den.eval(values, like)?)
    }
}

/// Caches products of a fixed list of elements by exponent vector.
pub(crate) struct MonomialCache<'a> {
    gens: &'a [TowerElem],
    like: TowerElem,
    cache: HashMap<Vec<usize>, TowerElem>,
}

impl<'a> MonomialCache<'a> {
    pub(crate) fn new(gens: &'a [TowerElem], like: &TowerElem) -> Self {
        MonomialCache {
            gens,
            like: like.clone(),
            cache: HashMap::new(),
        }
    }

    pub(crate) fn get(&mut self, e: &[usize]) -> Result<TowerElem> {
        if let Some(v) = self.cache.get(e) {
            return Ok(v.clone());
        }
        let v = match e.iter().rposition(|&k| k > 0) {
            None => TowerElem::from_rat(self.like.tower(), int(1)),
            Some(i) => {
                let mut lower = e.to_vec();
                lower[i] -= 1;
                self.get(&lower)?.mul(&self.gens[i])?
            }
        };
        self.cache.insert(e.to_vec(), v.clone());
        Ok(v)
    }
}

/// Looks for `z = N(g)/D(g)` with `N, D` over ℚ(x) of total degree at most
/// `degree_cap`, trying lower degrees first.
pub fn field_membership(
    z: &TowerElem,
    gens: &[TowerElem],
    degree_cap: usize,
    support_cap: usize,
) -> Result<Option<RationalExpr>> {
    let n = gens.len();
    if let Some(r) = z.as_ratfn() {
        return Ok(Some(RationalExpr {
            num: MPoly::constant(n, r),
            den: MPoly::constant(n, RatFn::one()),
        }));
    }
    let mut cache = MonomialCache::new(gens, z);
    let mut exps: Vec<Vec<usize>> = Vec::new();
    let mut columns: Vec<TowerElem> = Vec::new();
    let mut scaled: Vec<TowerElem> = Vec::new();
    for d in 0..=degree_cap {
        let fresh = exponents_of_degree(n, d);
        if fresh.is_empty() {
            break;
        }
        for e in fresh {
            let m = cache.get(&e)?;
            scaled.push(z.mul(&m)?.neg());
            columns.push(m);
            exps.push(e);
        }
        let all: Vec<TowerElem> = columns.iter().chain(scaled.iter()).cloned().collect();
        let k = columns.len();
        for v in linear_relations(&all, support_cap)? {
            let mut num = MPoly::zero(n);
            let mut den = MPoly::zero(n);
            for (j, e) in exps.iter().enumerate() {
                num.add_term(e.clone(), v[j].clone());
                den.add_term(e.clone(), v[k + j].clone());
            }
            if den.is_zero() || den.eval(gens, z)?.is_zero() {
                continue;
            }
            return Ok(Some(normalize(num, den)));
        }
    }
    Ok(None)
}

/// Scales so the leading printed term of the denominator has coefficient one.
fn normalize(num: MPoly, den: MPoly) -> RationalExpr {
    let lead = den
        .leading_term()
        .map(|(_, c)| c.inv().expect("nonzero"))
        .expect("nonzero denominator");
    RationalExpr {
        num: num.scale(&lead),
        den: den.scale(&lead),
    }
}

/// `y ∈ T(K|F)` test: a Found annihilator proves membership; exhausting the cap
/// is inconclusive.
pub fn t_membership(y: &TowerElem, cap: usize) -> Result<AnnihilatorResult> {
    crate::tower::minimal_annihilator(
        y,
        &AnnihilatorConfig {
            max_order: cap.max(1),
            ..Default::default()
        },
    )
}
