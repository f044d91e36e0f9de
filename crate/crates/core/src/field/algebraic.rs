//! Algebraic numbers given by a minimal polynomial and a root selector.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{int, poly_factor, FactorConfig, Poly, Rat};
use crate::error::Result;

/// Which root of the minimal polynomial is meant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootSelector {
    /// The unique root in the half-open interval `(lo, hi]`.
    Real { lo: Rat, hi: Rat },
    /// Any root of a conjugacy class with no real members; the local data that
    /// produces these is invariant under conjugation.
    NonReal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicNumber {
    pub minpoly: Poly,
    pub root: RootSelector,
}

impl AlgebraicNumber {
    pub fn rational(q: Rat) -> Self {
        AlgebraicNumber {
            minpoly: Poly::linear_root(q.clone()),
            root: RootSelector::Real {
                lo: q.clone(),
                hi: q,
            },
        }
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap_or(0)
    }

    pub fn as_rational(&self) -> Option<Rat> {
        (self.degree() == 1).then(|| -self.minpoly.coeff(0))
    }

    pub fn is_integer(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_integer())
    }

    /// All roots of `p`, grouped by irreducible factor: real roots ascending,
    /// then one entry per factor with no real roots.
    pub fn roots_of(p: &Poly, cfg: &FactorConfig) -> Result<Vec<AlgebraicNumber>> {
        let mut out = Vec::new();
        if p.is_constant() {
            return Ok(out);
        }
        for (f, _) in poly_factor(p, cfg)?.factors {
            if f.degree() == Some(1) {
                out.push(AlgebraicNumber::rational(-f.coeff(0)));
                continue;
            }
            let intervals = isolate_real_roots(&f);
            if intervals.is_empty() {
                out.push(AlgebraicNumber {
                    minpoly: f,
                    root: RootSelector::NonReal,
                });
            } else {
                for (lo, hi) in intervals {
                    out.push(AlgebraicNumber {
                        minpoly: f.clone(),
                        root: RootSelector::Real { lo, hi },
                    });
                }
            }
        }
        out.sort_by_key(|a| a.sort_key());
        Ok(out)
    }

    fn sort_key(&self) -> (u8, Rat, usize) {
        match &self.root {
            RootSelector::Real { lo, .. } => (0, lo.clone(), self.degree()),
            RootSelector::NonReal => (1, Rat::zero(), self.degree()),
        }
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        match &self.root {
            RootSelector::Real { lo, hi } => {
                write!(f, "root of {} in [{lo}, {hi}]", self.minpoly.fmt_var("T"))
            }
            RootSelector::NonReal => write!(f, "non-real root of {}", self.minpoly.fmt_var("T")),
        }
    }
}

fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(-&r);
    }
    seq
}

fn sign_changes(seq: &[Poly], at: &Rat) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| {
            let v = p.eval(at);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Disjoint isolating intervals `(lo, hi]` for the real roots of an irreducible
/// polynomial of degree at least 2 (so no rational endpoint is ever a root).
pub(crate) fn isolate_real_roots(p: &Poly) -> Vec<(Rat, Rat)> {
    if p.is_constant() {
        return Vec::new();
    }
    // Cauchy bound
    let lc = p.lc().abs();
    let bound = p
        .coeffs()
        .iter()
        .map(|c| c.abs() / &lc)
        .fold(Rat::zero(), |a, b| if b > a { b } else { a })
        + Rat::one();
    let seq = sturm_sequence(p);
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let count = sign_changes(&seq, &lo) - sign_changes(&seq, &hi);
        if count == 0 {
            continue;
        }
        if count == 1 {
            out.push((lo, hi));
            continue;
        }
        let mid = (&lo + &hi) / int(2);
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out.sort();
    out.dedup();
    out
}
