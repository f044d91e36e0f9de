//! Finitely generated differential algebras whose fraction field is `F⟨y⟩`.
//!
//! With `n1` the least order at which `y^(n1)` is algebraic over
//! `F(y, ..., y^(n1-1))` and `P(X) = Σ a_i X^i` a relation for it, differentiating
//! `P(y^(n1)) = 0` gives
//!
//! ```text
//! y^(n1+1) = -(Σ a_i' (y^(n1))^i) / r,   r = Σ i a_i (y^(n1))^(i-1),
//! ```
//!
//! so `F[y, ..., y^(n1), 1/r]` is closed under derivation.

use super::membership::MonomialCache;
use super::mpoly::{exponents_of_degree, MPoly};
use crate::error::{Error, Result};
use crate::field::int;
use crate::tower::{linear_relations, TowerElem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    /// Order of the first derivative algebraic over the earlier ones.
    pub n1: usize,
    /// `y` itself is algebraic over ℚ(x); then the algebra is `F[y]`.
    pub algebraic: bool,
    /// `P` in the variables `y, y1, ..., y{n1}`, monic in its leading coefficient
    /// with respect to the last one.
    pub relation: MPoly,
    /// `r = ∂P/∂y{n1}`, in the same variables.
    pub r_poly: MPoly,
    pub r: TowerElem,
    /// Generator names, matching `generators`; `rinv` stands for `1/r`.
    pub names: Vec<String>,
    pub generators: Vec<TowerElem>,
    /// Derivative of each generator as a polynomial in the generators.
    pub closure: Vec<MPoly>,
}

impl Presentation {
    fn var_names(n1: usize) -> Vec<String> {
        (0..=n1).map(|j| if j == 0 { "y".to_string() } else { format!("y{j}") }).collect()
    }

    /// `P` printed with `X` for the top derivative.
    pub fn relation_string(&self) -> String {
        let mut names = Presentation::var_names(self.n1);
        names[self.n1] = "X".to_string();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        self.relation.fmt_with(&refs)
    }

    pub fn r_string(&self) -> String {
        let names = Presentation::var_names(self.n1);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        self.r_poly.fmt_with(&refs)
    }

    /// `(name, derivative)` pairs, derivatives written in the generators.
    pub fn closure_strings(&self) -> Vec<(String, String)> {
        let refs: Vec<&str> = self.names.iter().map(String::as_str).collect();
        self.names
            .iter()
            .zip(&self.closure)
            .map(|(n, c)| (n.clone(), c.fmt_with(&refs)))
            .collect()
    }

    /// Re-evaluates every closure polynomial in the tower and compares it with
    /// the derivative of the generator.
    pub fn verify(&self) -> Result<bool> {
        let like = &self.generators[0];
        for (g, img) in self.generators.iter().zip(&self.closure) {
            if img.eval(&self.generators, like)? != g.derive() {
                return Ok(false);
            }
        }
        let top = self.relation.eval(&self.generators[..=self.n1], like)?;
        Ok(top.is_zero() && !self.r.is_zero())
    }
}

/// Finds the first relation at order `k` with total degree at most `degree_cap`.
fn relation_at_order(
    derivs: &[TowerElem],
    degree_cap: usize,
    support_cap: usize,
) -> Result<Option<MPoly>> {
    let n = derivs.len();
    let top = n - 1;
    let mut cache = MonomialCache::new(derivs, &derivs[0]);
    let mut exps: Vec<Vec<usize>> = Vec::new();
    let mut values: Vec<TowerElem> = Vec::new();
    for d in 0..=degree_cap {
        for e in exponents_of_degree(n, d) {
            values.push(cache.get(&e)?);
            exps.push(e);
        }
        if d == 0 {
            continue;
        }
        let kernel = linear_relations(&values, support_cap)?;
        let best = kernel
            .into_iter()
            .map(|v| {
                let mut p = MPoly::zero(n);
                for (e, c) in exps.iter().zip(v) {
                    p.add_term(e.clone(), c);
                }
                p
            })
            .min_by_key(|p| p.degree_in(top));
        if let Some(p) = best {
            let lead = p.coeff_in(top, p.degree_in(top));
            let c = lead.leading_term().map(|(_, c)| c.inv().expect("nonzero")).expect("nonzero");
            return Ok(Some(p.scale(&c)));
        }
    }
    Ok(None)
}

pub fn simdifalg_present(y: &TowerElem, degree_cap: usize) -> Result<Presentation> {
    simdifalg_present_with(y, degree_cap, 2000)
}

pub fn simdifalg_present_with(y: &TowerElem, degree_cap: usize, support_cap: usize) -> Result<Presentation> {
    let max_k = y.tower().transcendence_degree();
    let mut derivs = vec![y.clone()];
    for k in 0..=max_k {
        if k > 0 {
            let next = derivs[k - 1].derive();
            derivs.push(next);
        }
        let Some(relation) = relation_at_order(&derivs, degree_cap, support_cap)? else {
            continue;
        };
        let p = if k == 0 {
            algebraic_presentation(y, relation, support_cap)?
        } else {
            transcendental_presentation(&derivs, relation)?
        };
        if !p.verify()? {
            return Err(Error::Inconclusive(format!("presentation of {y} failed its closure check")));
        }
        return Ok(p);
    }
    Err(Error::RelationNotFoundWithinCap(degree_cap))
}

fn algebraic_presentation(y: &TowerElem, relation: MPoly, support_cap: usize) -> Result<Presentation> {
    let m = relation.degree_in(0);
    let r_poly = relation.partial(0);
    let r = r_poly.eval(std::slice::from_ref(y), y)?;
    // y' as a polynomial of degree below m in y
    let mut elems = vec![y.derive()];
    let mut power = TowerElem::from_rat(y.tower(), int(1));
    for _ in 0..m {
        elems.push(power.clone());
        power = power.mul(y)?;
    }
    let kernel = linear_relations(&elems, support_cap)?;
    let v = kernel
        .into_iter()
        .find(|v| !v[0].is_zero())
        .ok_or_else(|| Error::Inconclusive(format!("derivative of {y} is not a polynomial in it")))?;
    let scale = -v[0].inv().expect("nonzero");
    let mut closure = MPoly::zero(1);
    for (i, c) in v.iter().enumerate().skip(1) {
        closure.add_term(vec![i - 1], c * &scale);
    }
    Ok(Presentation {
        n1: 0,
        algebraic: true,
        relation,
        r_poly,
        r,
        names: vec!["y".into()],
        generators: vec![y.clone()],
        closure: vec![closure],
    })
}

fn transcendental_presentation(derivs: &[TowerElem], relation: MPoly) -> Result<Presentation> {
    let n1 = derivs.len() - 1;
    let nv = n1 + 2;
    let u = n1 + 1;
    // relation and r in the variables y..y{n1}, widened with a slot for 1/r
    let widen = |p: &MPoly| -> MPoly {
        let mut out = MPoly::zero(nv);
        for (e, c) in p.terms() {
            let mut e = e.clone();
            e.push(0);
            out.add_term(e, c.clone());
        }
        out
    };
    let rel = widen(&relation);
    let r_wide = rel.partial(n1);
    let r = relation.partial(n1).eval(derivs, &derivs[0])?;
    if r.is_zero() {
        return Err(Error::Inconclusive("relation has a repeated root".into()));
    }
    let mut images: Vec<MPoly> = (1..=n1).map(|j| MPoly::var(nv, j)).collect();
    // -(Σ a_i' X^i): differentiate the coefficients of P, holding X fixed
    let lower = images.clone();
    let mut numer = MPoly::zero(nv);
    for i in 0..=rel.degree_in(n1) {
        let a_i = rel.coeff_in(n1, i);
        let da = a_i.derive_with(&lower);
        numer = numer.sub(&da.mul(&MPoly::var(nv, n1).pow(i)));
    }
    images.push(numer.mul(&MPoly::var(nv, u)));
    let dr = r_wide.derive_with(&images);
    let rinv_image = dr.neg().mul(&MPoly::var(nv, u).pow(2));
    images.push(rinv_image);

    let mut names = Presentation::var_names(n1);
    let mut generators = derivs.to_vec();
    let closure = match r.as_ratfn() {
        Some(c) => {
            // 1/r lies in F, so the algebra is F[y, ..., y{n1}]
            let inv = c.inv().expect("nonzero");
            let mut subs: Vec<MPoly> = (0..=n1).map(|j| MPoly::var(n1 + 1, j)).collect();
            subs.push(MPoly::constant(n1 + 1, inv));
            images[..=n1].iter().map(|p| p.substitute(&subs)).collect()
        }
        None => {
            names.push("rinv".into());
            generators.push(TowerElem::from_rat(r.tower(), int(1)).div(&r)?);
            images
        }
    };
    Ok(Presentation {
        n1,
        algebraic: false,
        relation,
        r_poly: relation_r(&r_wide, n1),
        r,
        names,
        generators,
        closure,
    })
}

/// Drops the `1/r` slot again.
fn relation_r(r_wide: &MPoly, n1: usize) -> MPoly {
    let mut out = MPoly::zero(n1 + 1);
    for (e, c) in r_wide.terms() {
        out.add_term(e[..=n1].to_vec(), c.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::Tower;

    fn elem(json: &str, s: &str) -> TowerElem {
        let t = Tower::from_json(json).unwrap().into_shared();
        TowerElem::parse(&t, s).unwrap()
    }

    #[test]
    fn exp_sqrt() {
        let y = elem(
            r#"{"generators": [
                {"name": "s", "kind": "algebraic", "data": "T^2 - x"},
                {"name": "t", "kind": "exponential", "data": "1/(2*s)"}
            ]}"#,
            "t",
        );
        let p = simdifalg_present(&y, 4).unwrap();
        assert_eq!(p.n1, 1);
        assert_eq!(p.relation_string(), "X^2 - (1/(4*x))*y^2");
        assert_eq!(p.r_string(), "2*y1");
        assert_eq!(p.names, ["y", "y1", "rinv"]);
        let closure = p.closure_strings();
        assert_eq!(closure[1].1, "(1/(2*x))*y*y1*rinv - (1/(4*x^2))*y^2*rinv");
        assert!(p.verify().unwrap());
    }

    #[test]
    fn exp_and_log() {
        let y = elem(r#"{"generators": [{"name": "e", "kind": "exponential", "data": "1"}]}"#, "e");
        let p = simdifalg_present(&y, 4).unwrap();
        assert_eq!((p.n1, p.relation_string(), p.r_string()), (1, "X - y".into(), "1".into()));
        assert_eq!(p.names, ["y", "y1"]);
        let y = elem(r#"{"generators": [{"name": "l", "kind": "primitive", "data": "1/x"}]}"#, "l");
        let p = simdifalg_present(&y, 4).unwrap();
        assert_eq!(p.relation_string(), "X - 1/x");
    }

    #[test]
    fn algebraic_element() {
        let y = elem(r#"{"generators": [{"name": "s", "kind": "algebraic", "data": "T^2 - x"}]}"#, "s + 1");
        let p = simdifalg_present(&y, 4).unwrap();
        assert!(p.algebraic);
        assert_eq!(p.n1, 0);
        assert_eq!(p.relation_string(), "X^2 - 2*X - (x - 1)");
        assert_eq!(p.closure_strings()[0].1, "(1/(2*x))*y - 1/(2*x)");
    }

    #[test]
    fn riccati_solution() {
        let y = elem(r#"{"generators": [{"name": "w", "kind": "rational_ode", "data": "x - w^2"}]}"#, "w");
        let p = simdifalg_present(&y, 4).unwrap();
        assert_eq!(p.relation_string(), "y^2 + X - x");
    }
}
