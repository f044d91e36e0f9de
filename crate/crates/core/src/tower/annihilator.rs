//! Minimal-order linear differential operators over ℚ(x) annihilating a tower
//! element.

use std::collections::BTreeMap;

use super::{PolyV, Tower, TowerElem, Value};
use crate::error::{Error, Result};
use crate::field::{nullspace, RatFn};
use crate::ore::DiffOp;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnnihilatorConfig {
    /// Largest order tried.
    pub max_order: usize,
    /// Largest number of ℚ(x)-coordinates allowed when flattening derivatives.
    pub support_cap: usize,
}

impl Default for AnnihilatorConfig {
    fn default() -> Self {
        AnnihilatorConfig {
            max_order: 8,
            support_cap: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnnihilatorResult {
    Found { op: DiffOp, order: usize },
    NotFoundWithinCap(usize),
}

type Coords = BTreeMap<Vec<usize>, Vec<RatFn>>;

impl Tower {
    /// Writes the values `vs` (all of level `lvl`) in common ℚ(x)-coordinates, so
    /// that a ℚ(x)-linear relation among them is the same as one among their
    /// coordinate vectors.
    fn flatten(&self, lvl: usize, vs: &[Value], prefix: Vec<usize>, out: &mut Coords, cap: usize) -> Result<()> {
        if lvl == 0 {
            let col: Vec<RatFn> = vs
                .iter()
                .map(|v| match v {
                    Value::Base(r) => r.clone(),
                    _ => unreachable!("base level holds rational functions"),
                })
                .collect();
            if col.iter().any(|r| !r.is_zero()) {
                out.insert(prefix, col);
                if out.len() > cap {
                    return Err(Error::BasisExplosion { size: out.len(), cap });
                }
            }
            return Ok(());
        }
        let polys: Vec<PolyV> = if self.is_algebraic_level(lvl) {
            vs.iter()
                .map(|v| match v {
                    Value::Alg(c) => c.clone(),
                    _ => unreachable!(),
                })
                .collect()
        } else {
            let mut common: PolyV = vec![self.v_one(lvl - 1)];
            for v in vs {
                let Value::Frac(_, d) = v else { unreachable!() };
                let g = self.p_gcd(lvl - 1, &common, d);
                common = self.p_mul(lvl - 1, &common, &self.p_div_exact(lvl - 1, d, &g));
            }
            vs.iter()
                .map(|v| {
                    let Value::Frac(n, d) = v else { unreachable!() };
                    self.p_mul(lvl - 1, n, &self.p_div_exact(lvl - 1, &common, d))
                })
                .collect()
        };
        let width = polys.iter().map(Vec::len).max().unwrap_or(0);
        let zero = self.v_zero(lvl - 1);
        for k in 0..width {
            let column: Vec<Value> = polys.iter().map(|p| p.get(k).unwrap_or(&zero).clone()).collect();
            if column.iter().all(|c| self.v_is_zero(lvl - 1, c)) {
                continue;
            }
            let mut key = prefix.clone();
            key.push(k);
            self.flatten(lvl - 1, &column, key, out, cap)?;
        }
        Ok(())
    }
}

/// Basis of the ℚ(x)-linear relations `Σ c_i e_i = 0` among elements of one tower.
pub(crate) fn linear_relations(elems: &[TowerElem], support_cap: usize) -> Result<Vec<Vec<RatFn>>> {
    let Some(first) = elems.first() else {
        return Ok(Vec::new());
    };
    let tower = first.tower();
    let values: Vec<Value> = elems.iter().map(|e| e.value().clone()).collect();
    let mut coords = Coords::new();
    tower.flatten(tower.depth(), &values, Vec::new(), &mut coords, support_cap)?;
    let rows: Vec<Vec<RatFn>> = coords.into_values().collect();
    Ok(nullspace(&rows, elems.len()))
}

/// Finds the monic operator `L` of least order `k <= max_order` with `L(y) = 0`.
///
/// Order `k` succeeds exactly when `y, y', ..., y^(k)` are linearly dependent over
/// ℚ(x), so the first dependency found gives the minimal operator.
pub fn minimal_annihilator(y: &TowerElem, cfg: &AnnihilatorConfig) -> Result<AnnihilatorResult> {
    if y.is_zero() {
        return Ok(AnnihilatorResult::Found {
            op: DiffOp::one(),
            order: 0,
        });
    }
    let tower = y.tower().clone();
    let lvl = tower.depth();
    let mut derivs = vec![y.value().clone()];
    for k in 1..=cfg.max_order {
        let next = tower.v_derive(lvl, derivs.last().expect("nonempty"));
        derivs.push(next);
        let mut coords = Coords::new();
        tower.flatten(lvl, &derivs, Vec::new(), &mut coords, cfg.support_cap)?;
        let rows: Vec<Vec<RatFn>> = coords.into_values().collect();
        let kernel = nullspace(&rows, k + 1);
        // a dependency involving y^(k) exists only if the earlier ones were
        // independent, which the previous round established
        let Some(v) = kernel.into_iter().find(|v| !v[k].is_zero()) else {
            continue;
        };
        let lead = v[k].inv().expect("nonzero");
        let op = DiffOp::from_coeffs(v.iter().map(|c| c * &lead).collect());
        debug_assert!(op.apply(y).is_zero());
        return Ok(AnnihilatorResult::Found { op, order: k });
    }
    Ok(AnnihilatorResult::NotFoundWithinCap(cfg.max_order))
}
