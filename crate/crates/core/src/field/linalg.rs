//! Gaussian elimination over an exact field.

use std::fmt::Debug;

use num_traits::{One, Zero};

use super::{Rat, RatFn};

/// Minimal field interface used by the exact linear algebra.
pub trait FieldElem: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    /// Division by a nonzero element.
    fn div_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
}

impl FieldElem for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn div_ref(&self, o: &Self) -> Self {
        self / o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

impl FieldElem for RatFn {
    fn zero() -> Self {
        RatFn::zero()
    }
    fn one() -> Self {
        RatFn::one()
    }
    fn is_zero(&self) -> bool {
        RatFn::is_zero(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn div_ref(&self, o: &Self) -> Self {
        self.checked_div(o).expect("division by zero in elimination")
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

/// Basis of the right nullspace `{v : A v = 0}` of the matrix given by `rows`,
/// each of length `ncols`.
///
/// Basis vectors come out of the reduced row echelon form: one per free column,
/// with a `1` in that column, ordered by increasing free-column index.
pub fn nullspace<S: FieldElem>(rows: &[Vec<S>], ncols: usize) -> Vec<Vec<S>> {
    let mut m: Vec<Vec<S>> = rows
        .iter()
        .filter(|r| r.iter().any(|c| !c.is_zero()))
        .cloned()
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = S::one().div_ref(&m[row][col]);
        for v in m[row][col..ncols].iter_mut() {
            if !v.is_zero() {
                *v = v.mul_ref(&inv);
            }
        }
        let pivot = m[row].clone();
        for (r, line) in m.iter_mut().enumerate() {
            if r == row || line[col].is_zero() {
                continue;
            }
            let f = line[col].clone();
            for (v, pv) in line[col..ncols].iter_mut().zip(&pivot[col..ncols]) {
                if !pv.is_zero() {
                    *v = v.sub_ref(&f.mul_ref(pv));
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![S::zero(); ncols];
        v[free] = S::one();
        for (r, &pc) in pivots.iter().enumerate() {
            if !m[r][free].is_zero() {
                v[pc] = m[r][free].neg_ref();
            }
        }
        basis.push(v);
    }
    basis
}
