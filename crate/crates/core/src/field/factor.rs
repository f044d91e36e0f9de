//! Factorization over ℚ: squarefree decomposition, rational roots, modular
//! irreducibility certificates, and a Kronecker search splitting what the
//! certificates leave open, up to a degree bound.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::modp::{certify_irreducible, rational_roots_modular};
use super::{Poly, Rat};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct FactorConfig {
    /// Largest degree whose irreducibility we are willing to certify.
    pub degree_bound: usize,
    /// Cap on Kronecker divisor combinations per factor degree.
    pub combination_cap: usize,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            degree_bound: 8,
            combination_cap: 200_000,
        }
    }
}

/// `p = constant * prod(factor^mult)` with monic, pairwise distinct irreducible factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub constant: Rat,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.constant.clone()), |acc, (f, m)| &acc * &f.pow(*m))
    }
}

pub(crate) fn cmp_poly(a: &Poly, b: &Poly) -> Ordering {
    a.deg()
        .cmp(&b.deg())
        .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
}

/// Yun's algorithm: returns `(s_i, i)` with `p = lc * prod s_i^i`, each `s_i` monic squarefree.
pub fn squarefree_decomposition(p: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if p.is_constant() {
        return out;
    }
    let f = p.monic();
    let df = f.derivative();
    let mut a = f.gcd(&df);
    let mut b = f.div_exact(&a);
    let mut c = df.div_exact(&a);
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        a = b.gcd(&d);
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a);
        c = d.div_exact(&a);
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

fn small_factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        let mut e = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut ds = vec![BigInt::one()];
    for (p, e) in small_factor(n) {
        let mut next = Vec::with_capacity(ds.len() * (e as usize + 1));
        for d in &ds {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        ds = next;
    }
    ds.sort();
    ds
}

/// All distinct rational roots of a nonzero polynomial, ascending.
pub fn rational_roots(p: &Poly) -> Vec<Rat> {
    let mut roots = Vec::new();
    if p.is_constant() {
        return roots;
    }
    let low = p.low_order().unwrap_or(0);
    if low > 0 {
        roots.push(Rat::zero());
    }
    let q = Poly::from_coeffs(p.coeffs()[low..].to_vec());
    if q.is_constant() {
        return roots;
    }
    let q = q.div_exact(&q.gcd(&q.derivative()));
    let (_, ints) = q.primitive_part();
    roots.extend(rational_roots_modular(&ints));
    roots.sort();
    roots
}

fn lagrange(points: &[(BigInt, BigInt)]) -> Poly {
    let mut acc = Poly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut basis = Poly::constant(Rat::from_integer(yi.clone()));
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                let lin = Poly::linear_root(Rat::from_integer(xj.clone()));
                basis = &basis * &lin.scale(&Rat::new(BigInt::one(), xi - xj));
            }
        }
        acc = &acc + &basis;
    }
    acc
}

/// Find a factor of degree `k` of the squarefree primitive integer polynomial `p`,
/// or certify there is none.
fn kronecker_factor(p: &Poly, k: usize, cfg: &FactorConfig) -> Result<Option<Poly>> {
    let mut samples: Vec<(BigInt, BigInt, Vec<BigInt>)> = Vec::new();
    for a in (0i64..=40).map(|i| if i % 2 == 0 { i / 2 } else { -(i + 1) / 2 }) {
        let v = p.eval(&Rat::from_integer(BigInt::from(a)));
        if v.is_zero() {
            continue;
        }
        let v = v.to_integer();
        let ds = divisors(&v);
        samples.push((BigInt::from(a), v, ds));
    }
    if samples.len() < k + 1 {
        return Ok(None);
    }
    samples.sort_by_key(|s| s.2.len());
    samples.truncate(k + 1);
    let total: f64 = samples
        .iter()
        .enumerate()
        .map(|(i, s)| s.2.len() as f64 * if i == 0 { 1.0 } else { 2.0 })
        .product();
    if total > cfg.combination_cap as f64 {
        return Err(Error::FactorDegreeExceeded {
            degree: p.degree().unwrap_or(0),
            bound: cfg.degree_bound,
        });
    }
    let choices: Vec<Vec<BigInt>> = samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if i == 0 {
                s.2.clone()
            } else {
                s.2.iter().flat_map(|d| [d.clone(), -d]).collect()
            }
        })
        .collect();
    let mut idx = vec![0usize; k + 1];
    loop {
        let pts: Vec<(BigInt, BigInt)> = samples
            .iter()
            .zip(&idx)
            .enumerate()
            .map(|(i, (s, &j))| (s.0.clone(), choices[i][j].clone()))
            .collect();
        let g = lagrange(&pts);
        if g.degree() == Some(k) && g.coeffs().iter().all(|c| c.is_integer()) && g.divides(p) {
            return Ok(Some(g.monic()));
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(None);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Split a squarefree polynomial with no rational roots into irreducibles.
fn split_squarefree(p: &Poly, cfg: &FactorConfig, out: &mut Vec<Poly>) -> Result<()> {
    let n = p.degree().unwrap_or(0);
    if n <= 3 {
        out.push(p.monic());
        return Ok(());
    }
    let (_, ints) = p.primitive_part();
    if certify_irreducible(&ints) {
        out.push(p.monic());
        return Ok(());
    }
    if n > cfg.degree_bound {
        return Err(Error::FactorDegreeExceeded {
            degree: n,
            bound: cfg.degree_bound,
        });
    }
    let prim = Poly::from_bigints(&ints);
    for k in 2..=n / 2 {
        if let Some(g) = kronecker_factor(&prim, k, cfg)? {
            let h = p.div_exact(&g);
            split_squarefree(&g, cfg, out)?;
            return split_squarefree(&h, cfg, out);
        }
    }
    out.push(p.monic());
    Ok(())
}

/// Factor a nonzero polynomial over ℚ.
pub fn poly_factor(p: &Poly, cfg: &FactorConfig) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::InvalidInput("cannot factor the zero polynomial".into()));
    }
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    for (s, m) in squarefree_decomposition(p) {
        let mut rest = s.clone();
        for r in rational_roots(&s) {
            let lin = Poly::linear_root(r);
            rest = rest.div_exact(&lin);
            factors.push((lin, m));
        }
        if !rest.is_constant() {
            let mut irr = Vec::new();
            split_squarefree(&rest, cfg, &mut irr)?;
            factors.extend(irr.into_iter().map(|f| (f, m)));
        }
    }
    factors.sort_by(|a, b| cmp_poly(&a.0, &b.0));
    Ok(Factorization {
        constant: p.lc(),
        factors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::int;

    fn fac(p: &Poly) -> Factorization {
        poly_factor(p, &FactorConfig::default()).unwrap()
    }

    #[test]
    fn cubic_with_rational_roots() {
        let f = fac(&Poly::from_ints(&[0, -1, 0, 1]));
        let fs: Vec<_> = f.factors.iter().map(|(p, m)| (p.to_string(), *m)).collect();
        assert_eq!(
            fs,
            vec![("x - 1".into(), 1), ("x".into(), 1), ("x + 1".into(), 1)]
        );
    }

    #[test]
    fn irreducible_quadratic() {
        let f = fac(&Poly::from_ints(&[1, 0, 1]));
        assert_eq!(f.factors, vec![(Poly::from_ints(&[1, 0, 1]), 1)]);
    }

    #[test]
    fn repeated_roots() {
        let p = Poly::from_ints(&[1, 0, -2, 0, 1]);
        let f = fac(&p);
        assert_eq!(
            f.factors,
            vec![(Poly::from_ints(&[-1, 1]), 2), (Poly::from_ints(&[1, 1]), 2)]
        );
        assert_eq!(f.expand(), p);
    }

    #[test]
    fn quartic_splits_into_quadratics() {
        // (x^2 + 1)(x^2 - 2)
        let p = Poly::from_ints(&[-2, 0, -1, 0, 1]);
        let f = fac(&p);
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.expand(), p);
    }

    #[test]
    fn irreducible_quartic_is_certified() {
        let p = Poly::from_ints(&[1, 0, 0, 0, 1]);
        assert_eq!(fac(&p).factors, vec![(p, 1)]);
    }

    #[test]
    fn sextic_cubic_times_cubic() {
        let a = Poly::from_ints(&[-2, 0, 0, 1]);
        let b = Poly::from_ints(&[1, 1, 0, 1]);
        let p = (&a * &b).scale(&int(3));
        let f = fac(&p);
        assert_eq!(f.factors.len(), 2);
        assert_eq!(f.expand(), p);
    }

    #[test]
    fn beyond_bound_is_an_error() {
        // (x^5 - x - 1)(x^5 - x - 3): no rational roots, no certificate
        let p = &Poly::from_ints(&[-1, -1, 0, 0, 0, 1]) * &Poly::from_ints(&[-3, -1, 0, 0, 0, 1]);
        let cfg = FactorConfig {
            degree_bound: 8,
            ..Default::default()
        };
        assert!(matches!(
            poly_factor(&p, &cfg),
            Err(Error::FactorDegreeExceeded { .. })
        ));
    }

    #[test]
    fn roots_of_scaled_poly() {
        let p = Poly::from_ints(&[-1, 0, 4]);
        assert_eq!(rational_roots(&p), vec![Rat::new((-1).into(), 2.into()), Rat::new(1.into(), 2.into())]);
    }
}
