//! Resolution of a liouvillian extension `K = F⟨g_1, ..., g_m⟩` into steps
//! `t_i' = a_i t_i + b_i` with `a_i ∈ F` and `b_i` in `F(t_1, ..., t_{i-1})`.
//!
//! Each round picks, among candidates outside the current field `M`, one of least
//! annihilator order whose annihilator has a first-order right factor `∂ - a`
//! over ℚ(x) leaving `b = t' - a t` inside `M`.

use std::collections::HashMap;
use std::fmt;

use super::membership::{field_membership, RationalExpr};
use crate::error::{Error, Result};
use crate::field::{int, RatFn};
use crate::ore::{op_mul, DiffOp};
use crate::solve::{hyperexp_right_factors, rational_solutions, SolveConfig};
use crate::tower::{minimal_annihilator, AnnihilatorConfig, AnnihilatorResult, GeneratorKind, Tower, TowerElem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ResolveMode {
    Generic,
    /// Every `a_i` is zero.
    Unipotent,
    /// Every `b_i` is zero.
    Torus,
}

impl std::str::FromStr for ResolveMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(ResolveMode::Generic),
            "unipotent" => Ok(ResolveMode::Unipotent),
            "torus" => Ok(ResolveMode::Torus),
            other => Err(Error::InvalidInput(format!("unknown resolution mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeNote {
    Generic,
    ForcedAZero,
    ForcedBZero,
}

impl fmt::Display for ModeNote {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModeNote::Generic => "generic",
            ModeNote::ForcedAZero => "forced_a_zero",
            ModeNote::ForcedBZero => "forced_b_zero",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ResolveConfig {
    pub max_order: usize,
    /// Total degree bound of the membership ansatz.
    pub degree_cap: usize,
    /// How many derivatives of the inputs join the candidate pool.
    pub derivative_depth: usize,
    pub support_cap: usize,
    pub solve: SolveConfig,
}

impl Default for ResolveConfig {
    fn default() -> Self {
        ResolveConfig {
            max_order: 8,
            degree_cap: 12,
            derivative_depth: 2,
            support_cap: 2000,
            solve: SolveConfig::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ResolutionStep {
    pub t: TowerElem,
    pub a: RatFn,
    pub b: TowerElem,
    /// `b` written in the earlier steps `t1, t2, ...`.
    pub b_expr: RationalExpr,
    pub mode_note: ModeNote,
    /// Minimal annihilator of the candidate the step came from.
    pub annihilator: DiffOp,
}

impl ResolutionStep {
    /// `t' - a t - b = 0`, checked exactly in the tower.
    pub fn verify(&self) -> bool {
        let at = self.t.scale(&self.a);
        match self.t.derive().sub(&at).and_then(|d| d.sub(&self.b)) {
            Ok(rest) => rest.is_zero(),
            Err(_) => false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Resolution {
    pub steps: Vec<ResolutionStep>,
    /// Each input generator as a rational expression in the steps.
    pub recovery: Vec<RationalExpr>,
}

impl Resolution {
    pub fn step_names(&self) -> Vec<String> {
        (1..=self.steps.len()).map(|i| format!("t{i}")).collect()
    }
}

struct Candidate {
    elem: TowerElem,
    tier: usize,
    printed: String,
}

fn candidate_pool(gens: &[TowerElem], depth: usize) -> Result<Vec<Candidate>> {
    let mut raw: Vec<(TowerElem, usize)> = gens.iter().map(|g| (g.clone(), 0)).collect();
    for i in 0..gens.len() {
        for j in i..gens.len() {
            raw.push((gens[i].mul(&gens[j])?, 1));
            if i < j {
                raw.push((gens[i].add(&gens[j])?, 1));
            }
        }
    }
    for g in gens {
        let mut d = g.clone();
        for _ in 0..depth {
            d = d.derive();
            raw.push((d.clone(), 2));
        }
    }
    let mut out: Vec<Candidate> = Vec::new();
    for (elem, tier) in raw {
        if elem.as_ratfn().is_some() || out.iter().any(|c| c.elem == elem) {
            continue;
        }
        let printed = elem.to_string();
        out.push(Candidate { elem, tier, printed });
    }
    Ok(out)
}

/// `α ∈ ℚ(x)` with `α' = a α + b`.
fn particular_rational(a: &RatFn, b: &RatFn, cfg: &SolveConfig) -> Result<Option<RatFn>> {
    let first = DiffOp::first_order(a);
    let bd = b.derive().checked_div(b)?;
    let l2 = op_mul(&DiffOp::first_order(&bd), &first);
    for alpha in rational_solutions(&l2, cfg)? {
        let image = first.apply(&alpha);
        // image is a constant multiple of b
        let lambda = image.checked_div(b)?;
        if !lambda.is_zero() {
            return Ok(Some(alpha.checked_div(&lambda)?));
        }
    }
    Ok(None)
}

struct Attempt {
    t: TowerElem,
    a: RatFn,
    b: TowerElem,
    b_expr: RationalExpr,
}

/// Brings an accepted step into the shape the mode asks for.
fn apply_mode(step: Attempt, mode: ResolveMode, steps: &[TowerElem], cfg: &ResolveConfig) -> Result<(Attempt, ModeNote)> {
    match mode {
        ResolveMode::Generic => Ok((step, ModeNote::Generic)),
        ResolveMode::Unipotent => {
            if step.a.is_zero() {
                return Ok((step, ModeNote::ForcedAZero));
            }
            // α' = a α with α ∈ ℚ(x); then (t/α)' = b/α
            let sols = rational_solutions(&DiffOp::first_order(&step.a), &cfg.solve)?;
            let alpha = sols.into_iter().next().ok_or_else(|| {
                Error::Inconclusive(format!("no rational solution of y' = ({})*y to remove a", step.a))
            })?;
            let inv = alpha.inv()?;
            let b = step.b.scale(&inv);
            Ok((
                Attempt {
                    t: step.t.scale(&inv),
                    a: RatFn::zero(),
                    b_expr: RationalExpr {
                        num: step.b_expr.num.scale(&inv),
                        den: step.b_expr.den,
                    },
                    b,
                },
                ModeNote::ForcedAZero,
            ))
        }
        ResolveMode::Torus => {
            if step.b.is_zero() {
                return Ok((step, ModeNote::ForcedBZero));
            }
            let Some(b) = step.b.as_ratfn() else {
                return Err(Error::Inconclusive(format!(
                    "no particular solution searched for b = {} outside the base field",
                    step.b
                )));
            };
            let alpha = particular_rational(&step.a, &b, &cfg.solve)?
                .ok_or_else(|| Error::Inconclusive(format!("no rational particular solution for b = {b}")))?;
            let t = step.t.sub(&TowerElem::from_ratfn(step.t.tower(), &alpha))?;
            let zero = TowerElem::from_rat(t.tower(), int(0));
            let n = steps.len();
            Ok((
                Attempt {
                    t,
                    a: step.a,
                    b: zero,
                    b_expr: RationalExpr {
                        num: super::MPoly::zero(n),
                        den: super::MPoly::constant(n, RatFn::one()),
                    },
                },
                ModeNote::ForcedBZero,
            ))
        }
    }
}

fn check_tower(tower: &Tower) -> Result<()> {
    for name in tower.names() {
        match tower.kind_of(name) {
            Some(GeneratorKind::Algebraic) | Some(GeneratorKind::RationalOde) => {
                return Err(Error::InvalidInput(format!(
                    "resolution needs primitive and exponential generators only; {name} is not"
                )))
            }
            _ => {}
        }
    }
    Ok(())
}

pub fn tower_resolve(gens: &[TowerElem], mode: ResolveMode, cfg: &ResolveConfig) -> Result<Resolution> {
    let Some(first) = gens.first() else {
        return Ok(Resolution {
            steps: Vec::new(),
            recovery: Vec::new(),
        });
    };
    let tower = first.tower().clone();
    check_tower(&tower)?;
    for g in gens {
        if g.tower() != &tower {
            return Err(Error::TowerMismatch);
        }
        if field_membership(&g.derive(), gens, cfg.degree_cap, cfg.support_cap)?.is_none() {
            return Err(Error::NotDifferentiallyClosed(g.to_string()));
        }
    }

    let pool = candidate_pool(gens, cfg.derivative_depth)?;
    let ann_cfg = AnnihilatorConfig {
        max_order: cfg.max_order,
        support_cap: cfg.support_cap,
    };
    let mut annihilators: HashMap<usize, Option<DiffOp>> = HashMap::new();
    let mut steps: Vec<ResolutionStep> = Vec::new();
    let max_steps = 2 * tower.depth() + 2;

    loop {
        let current: Vec<TowerElem> = steps.iter().map(|s| s.t.clone()).collect();
        let mut recovery = Vec::new();
        for g in gens {
            match field_membership(g, &current, cfg.degree_cap, cfg.support_cap)? {
                Some(e) => recovery.push(e),
                None => break,
            }
        }
        if recovery.len() == gens.len() {
            return Ok(Resolution { steps, recovery });
        }
        if steps.len() >= max_steps {
            return Err(Error::Inconclusive(format!("no resolution within {max_steps} steps")));
        }

        let mut ranked: Vec<(usize, usize, &str, usize)> = Vec::new();
        let mut capped = false;
        for (idx, c) in pool.iter().enumerate() {
            if field_membership(&c.elem, &current, cfg.degree_cap, cfg.support_cap)?.is_some() {
                continue;
            }
            let ann = match annihilators.get(&idx) {
                Some(a) => a.clone(),
                None => {
                    let a = match minimal_annihilator(&c.elem, &ann_cfg)? {
                        AnnihilatorResult::Found { op, .. } => Some(op),
                        AnnihilatorResult::NotFoundWithinCap(_) => None,
                    };
                    annihilators.insert(idx, a.clone());
                    a
                }
            };
            match ann {
                Some(op) => ranked.push((op.order().unwrap_or(0), c.tier, &c.printed, idx)),
                None => capped = true,
            }
        }
        ranked.sort();

        let mut chosen = None;
        let mut offending: Option<DiffOp> = None;
        'search: for &(_, _, _, idx) in &ranked {
            let c = &pool[idx];
            let op = annihilators[&idx].clone().expect("ranked candidates have annihilators");
            let factors = match hyperexp_right_factors(&op, &cfg.solve) {
                Ok(f) => f,
                Err(e) if e.kind() == crate::error::ErrorKind::Budget => {
                    capped = true;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let mut attempts = Vec::new();
            for f in factors {
                let b = c.elem.derive().sub(&c.elem.scale(&f.u))?;
                if let Some(b_expr) = field_membership(&b, &current, cfg.degree_cap, cfg.support_cap)? {
                    attempts.push(Attempt {
                        t: c.elem.clone(),
                        a: f.u,
                        b,
                        b_expr,
                    });
                }
            }
            if attempts.is_empty() {
                offending.get_or_insert(op);
                continue;
            }
            let preferred = match mode {
                ResolveMode::Unipotent => attempts.iter().position(|s| s.a.is_zero()),
                ResolveMode::Torus => attempts.iter().position(|s| s.b.is_zero()),
                ResolveMode::Generic => None,
            }
            .unwrap_or(0);
            let attempt = attempts.swap_remove(preferred);
            chosen = Some((attempt, op));
            break 'search;
        }

        let Some((attempt, op)) = chosen else {
            if capped {
                return Err(Error::Inconclusive("annihilator or factor searches hit their caps".into()));
            }
            return Err(match offending {
                Some(op) => Error::NoFirstOrderFactor(op.to_canonical_string()),
                None => Error::Inconclusive("no candidate outside the current field".into()),
            });
        };
        let (attempt, mode_note) = apply_mode(attempt, mode, &current, cfg)?;
        let step = ResolutionStep {
            t: attempt.t,
            a: attempt.a,
            b: attempt.b,
            b_expr: attempt.b_expr,
            mode_note,
            annihilator: op,
        };
        if !step.verify() {
            return Err(Error::Inconclusive(format!("step t = {} failed verification", step.t)));
        }
        steps.push(step);
    }
}
