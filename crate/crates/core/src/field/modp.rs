//! Integer polynomials reduced modulo word-sized primes: distinct-degree
//! factorization for irreducibility certificates, and rational roots by p-adic
//! lifting of roots modulo a prime.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::Rat;

type Fp = Vec<u64>;

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Primes from `start` upward.
fn primes_from(start: u64) -> impl Iterator<Item = u64> {
    (start..).filter(|&n| is_prime(n))
}

fn reduce(f: &[BigInt], p: u64) -> Fp {
    let pb = BigInt::from(p);
    let mut out: Fp = f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    trim(&mut out);
    out
}

fn trim(f: &mut Fp) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    let mut out: Fp = (0..n)
        .map(|k| {
            let x = a.get(k).copied().unwrap_or(0);
            let y = b.get(k).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

fn mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(&mut out);
    out
}

fn divrem(a: &Fp, d: &Fp, p: u64) -> (Fp, Fp) {
    let mut r = a.clone();
    let dd = d.len() - 1;
    let inv = inv_mod(*d.last().unwrap(), p);
    let mut q = vec![0u64; r.len().saturating_sub(dd)];
    while r.len() > dd {
        let k = r.len() - 1 - dd;
        let c = mul_mod(*r.last().unwrap(), inv, p);
        for (j, &dc) in d.iter().enumerate() {
            r[k + j] = (r[k + j] + p - mul_mod(c, dc, p)) % p;
        }
        q[k] = c;
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    a
}

fn derivative(f: &Fp, p: u64) -> Fp {
    let mut out: Fp = f.iter().enumerate().skip(1).map(|(k, &c)| mul_mod(c, k as u64 % p, p)).collect();
    trim(&mut out);
    out
}

/// `base^e mod f`.
fn pow_poly(base: &Fp, mut e: u64, f: &Fp, p: u64) -> Fp {
    let mut acc: Fp = vec![1];
    let mut sq = divrem(base, f, p).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = divrem(&mul(&acc, &sq, p), f, p).1;
        }
        sq = divrem(&mul(&sq, &sq, p), f, p).1;
        e >>= 1;
    }
    acc
}

/// Degrees of the irreducible factors of a squarefree `f` modulo `p`.
fn factor_degrees(f: &Fp, p: u64) -> Vec<usize> {
    let mut f = f.clone();
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let mut degs = Vec::new();
    let mut i = 1;
    while f.len() > 2 * i {
        h = pow_poly(&h, p, &f, p);
        let g = gcd(&f, &sub(&h, &x, p), p);
        let dg = g.len() - 1;
        if dg > 0 {
            degs.extend(std::iter::repeat_n(i, dg / i));
            f = divrem(&f, &g, p).0;
            h = divrem(&h, &f, p).1;
        }
        i += 1;
    }
    if f.len() > 1 {
        degs.push(f.len() - 1);
    }
    degs
}

/// Whether `f` is squarefree modulo `p` with its degree preserved.
fn good_prime(f: &[BigInt], p: u64) -> Option<Fp> {
    let fp = reduce(f, p);
    if fp.len() != f.len() {
        return None;
    }
    let g = gcd(&fp, &derivative(&fp, p), p);
    (g.len() == 1).then_some(fp)
}

/// Certifies that the squarefree primitive integer polynomial `f` is irreducible
/// over ℚ, by intersecting the factor degrees compatible with its factorization
/// modulo several primes. `false` means no certificate was found.
pub(crate) fn certify_irreducible(f: &[BigInt]) -> bool {
    let n = f.len() - 1;
    if n <= 1 {
        return true;
    }
    // possible[d]: a factor of degree d over ℚ is consistent with every prime so far
    let mut possible = vec![true; n + 1];
    let mut tried = 0;
    for p in primes_from(10_007) {
        if tried == 24 {
            return false;
        }
        let Some(fp) = good_prime(f, p) else { continue };
        tried += 1;
        let mut sums = vec![false; n + 1];
        sums[0] = true;
        for d in factor_degrees(&fp, p) {
            for s in (d..=n).rev() {
                sums[s] = sums[s] || sums[s - d];
            }
        }
        for d in 1..n {
            possible[d] = possible[d] && sums[d];
        }
        if (1..n).all(|d| !possible[d]) {
            return true;
        }
    }
    unreachable!("the prime iterator is infinite")
}

/// Whether the integer polynomials `a` and `b` are certainly coprime over ℚ: their
/// images modulo a large prime keep both degrees and have a constant gcd.
pub(crate) fn certainly_coprime(a: &[BigInt], b: &[BigInt]) -> bool {
    const P: u64 = (1 << 61) - 1;
    let (fa, fb) = (reduce(a, P), reduce(b, P));
    fa.len() == a.len() && fb.len() == b.len() && gcd(&fa, &fb, P).len() == 1
}

fn eval_mod(f: &Fp, x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}

fn eval_big(f: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
}

/// Rational roots of a squarefree primitive integer polynomial with nonzero
/// constant term: roots modulo a small prime are lifted p-adically past the
/// Cauchy-type bound `|lc·r| <= |lc|·|c0|` and then reconstructed.
pub(crate) fn rational_roots_modular(f: &[BigInt]) -> Vec<Rat> {
    let lc = f.last().unwrap().clone();
    let bound: BigInt = 2 * lc.abs() * f[0].abs() + 1;
    let (p, fp) = primes_from(1009)
        .find_map(|p| good_prime(f, p).map(|fp| (p, fp)))
        .expect("a good prime exists for a squarefree polynomial");
    let df: Vec<BigInt> = f.iter().enumerate().skip(1).map(|(k, c)| c * k).collect();
    let mut roots = Vec::new();
    for r0 in (0..p).filter(|&r| eval_mod(&fp, r, p) == 0) {
        let mut r = BigInt::from(r0);
        let mut m = BigInt::from(p);
        while m <= bound {
            m = &m * &m;
            let fr = eval_big(f, &r, &m);
            let dfr = eval_big(&df, &r, &m);
            let inv = dfr.extended_gcd(&m).x.mod_floor(&m);
            r = (&r - fr * inv).mod_floor(&m);
        }
        // lc·root is an integer of absolute value at most |lc·c0|
        let mut c = (&lc * &r).mod_floor(&m);
        if &c * 2 > m {
            c -= &m;
        }
        let cand = Rat::new(c, lc.clone());
        let value = f.iter().rev().fold(Rat::zero(), |acc, k| acc * &cand + Rat::from_integer(k.clone()));
        if value.is_zero() && !roots.contains(&cand) {
            roots.push(cand);
        }
    }
    roots.sort();
    roots
}
