//! Dense polynomial arithmetic over a [`BaseField`].
//!
//! Polynomials are coefficient vectors in code form, little-endian (index i
//! holds the coefficient of x^i). The zero polynomial is any all-zero vector.

use super::BaseField;

pub(crate) fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub(crate) fn trim(mut a: Vec<u64>) -> Vec<u64> {
    let len = degree(&a).map_or(0, |d| d + 1);
    a.truncate(len);
    a
}

pub(crate) fn is_zero(a: &[u64]) -> bool {
    degree(a).is_none()
}

pub(crate) fn sub(f: &BaseField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = f.sub(x, y);
    }
    trim(out)
}

pub(crate) fn mul(f: &BaseField, a: &[u64], b: &[u64]) -> Vec<u64> {
    if is_zero(a) || is_zero(b) {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                out[i + j] = f.add(out[i + j], f.mul(ai, bj));
            }
        }
    }
    trim(out)
}

pub(crate) fn scale(f: &BaseField, a: &[u64], c: u64) -> Vec<u64> {
    trim(a.iter().map(|&x| f.mul(x, c)).collect())
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn divrem(f: &BaseField, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = f.inv(b[db]).expect("nonzero leading coefficient");
    let mut rem: Vec<u64> = a.to_vec();
    let da = match degree(&rem) {
        Some(d) if d >= db => d,
        _ => return (Vec::new(), trim(rem)),
    };
    let mut quot = vec![0u64; da - db + 1];
    for k in (db..=da).rev() {
        let coef = rem[k];
        if coef == 0 {
            continue;
        }
        let factor = f.mul(coef, lead_inv);
        quot[k - db] = factor;
        for (j, &bj) in b.iter().enumerate().take(db + 1) {
            if bj != 0 {
                rem[k - db + j] = f.sub(rem[k - db + j], f.mul(factor, bj));
            }
        }
    }
    (trim(quot), trim(rem))
}

pub(crate) fn rem(f: &BaseField, a: &[u64], b: &[u64]) -> Vec<u64> {
    divrem(f, a, b).1
}

/// Monic gcd.
pub(crate) fn gcd(f: &BaseField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !is_zero(&b) {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    make_monic(f, a)
}

pub(crate) fn make_monic(f: &BaseField, a: Vec<u64>) -> Vec<u64> {
    match degree(&a) {
        None => a,
        Some(d) => {
            let inv = f.inv(a[d]).expect("nonzero leading coefficient");
            scale(f, &a, inv)
        }
    }
}

/// Extended Euclid: returns `(g, s, t)` with `g = s*a + t*b`, `g` monic.
pub(crate) fn ext_gcd(f: &BaseField, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let mut r0 = trim(a.to_vec());
    let mut r1 = trim(b.to_vec());
    let mut s0 = vec![1u64];
    let mut s1 = Vec::new();
    let mut t0 = Vec::new();
    let mut t1 = vec![1u64];
    while !is_zero(&r1) {
        let (q, r) = divrem(f, &r0, &r1);
        let s = sub(f, &s0, &mul(f, &q, &s1));
        let t = sub(f, &t0, &mul(f, &q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    // normalize to a monic gcd
    if let Some(d) = degree(&r0) {
        let inv = f.inv(r0[d]).expect("nonzero leading coefficient");
        r0 = scale(f, &r0, inv);
        s0 = scale(f, &s0, inv);
        t0 = scale(f, &t0, inv);
    }
    (r0, s0, t0)
}

/// `a^exp mod m` by square-and-multiply.
pub(crate) fn powmod(f: &BaseField, a: &[u64], mut exp: u64, m: &[u64]) -> Vec<u64> {
    let mut base = rem(f, a, m);
    let mut acc = vec![1u64];
    while exp > 0 {
        if exp & 1 == 1 {
            acc = rem(f, &mul(f, &acc, &base), m);
        }
        exp >>= 1;
        if exp > 0 {
            base = rem(f, &mul(f, &base, &base), m);
        }
    }
    acc
}

/// Monic polynomials of the given degree in ascending lexicographic order
/// (coefficients compared low-degree first). Test oracle for the search.
#[cfg(test)]
pub(crate) fn monic_lex_iter(q: u64, degree: u32) -> impl Iterator<Item = Vec<u64>> {
    monic_lex_iter_from(q, degree, 0)
}

fn monic_lex_iter_from(q: u64, degree: u32, start: u128) -> impl Iterator<Item = Vec<u64>> {
    let d = degree as usize;
    let total = crate::arith::pow_u128_saturating(q, degree);
    (start..total).map(move |rank| {
        let mut coeffs = vec![0u64; d + 1];
        coeffs[d] = 1;
        let mut r = rank;
        // last free coefficient varies fastest, so ascending rank is
        // ascending lex order on (c_0, ..., c_{d-1})
        for i in (0..d).rev() {
            coeffs[i] = (r % q as u128) as u64;
            r /= q as u128;
        }
        coeffs
    })
}

/// The lexicographically smallest monic irreducible of the given degree.
pub(crate) fn smallest_irreducible(f: &BaseField, degree: u32) -> Vec<u64> {
    assert!(degree >= 1);
    if degree == 1 {
        // x is the lex-smallest monic linear polynomial
        return vec![0, 1];
    }
    // every candidate with zero constant term is divisible by x; the whole
    // block of q^(d-1) of them precedes the rest in lex order, so start after
    let start = crate::arith::pow_u128_saturating(f.q(), degree - 1);
    monic_lex_iter_from(f.q(), degree, start)
        .find(|cand| f.is_irreducible(cand).expect("monic by construction"))
        .expect("an irreducible of every degree exists over a finite field")
}
