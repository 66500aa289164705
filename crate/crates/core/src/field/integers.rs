use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::FieldError;

/// Splits a nonzero integer `n` as `k^2 * s` with `k > 0` and `s` squarefree,
/// carrying the sign of `n`. Returns `(k, s)`.
pub fn squarefree_part(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero(), "squarefree part of zero");
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut rest = n.abs();
    let mut square = BigInt::one();
    let mut core = BigInt::one();
    for (p, e) in factor(&mut rest) {
        square *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p;
        }
    }
    (square, sign * core)
}

/// Trial-division factorisation of `n > 0`. Consumes `n`.
fn factor(n: &mut BigInt) -> Vec<(BigInt, u32)> {
    let mut out = Vec::new();
    if let Some(small) = n.to_u64() {
        let mut m = small;
        let mut p = 2u64;
        while p * p <= m {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            if e > 0 {
                out.push((BigInt::from(p), e));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if m > 1 {
            out.push((BigInt::from(m), 1));
        }
        *n = BigInt::one();
        return out;
    }
    let mut p = BigInt::from(2u32);
    while &p * &p <= *n {
        let mut e = 0;
        while n.is_multiple_of(&p) {
            *n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2u32) { 1 } else { 2 };
    }
    if *n > BigInt::one() {
        out.push((n.clone(), 1));
    }
    *n = BigInt::one();
    out
}

/// Positive divisors of `n != 0`, ascending.
pub(crate) fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut m = n.abs();
    let mut out = vec![BigInt::one()];
    for (p, e) in factor(&mut m) {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// Smallest prime dividing `n` (for `|n| > 1`), or `None`.
pub(crate) fn smallest_prime_factor(n: &BigInt) -> Option<BigInt> {
    let m = n.abs();
    if m <= BigInt::one() {
        return None;
    }
    let mut p = BigInt::from(2u32);
    while &p * &p <= m {
        if m.is_multiple_of(&p) {
            return Some(p);
        }
        p += if p == BigInt::from(2u32) { 1 } else { 2 };
    }
    Some(m)
}

/// Prime support of a squarefree integer; `-1` is listed for negative input.
pub(crate) fn prime_support(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    if n.is_negative() {
        out.push(-BigInt::one());
    }
    let mut m = n.abs();
    out.extend(factor(&mut m).into_iter().map(|(p, _)| p));
    out
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Result<BigRational, FieldError> {
    let t = s.trim();
    let err = || FieldError::Parse(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| err())?;
    let d: BigInt = den.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(n, d))
}

/// `"p/q"` in lowest terms, or `"p"` for integers.
pub fn rational_to_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn is_rational_square(q: &BigRational) -> bool {
    if q.is_negative() {
        return false;
    }
    if q.is_zero() {
        return true;
    }
    let n = q.numer() * q.denom();
    squarefree_part(&n).1.is_one()
}

/// Exact square root of a rational square.
pub(crate) fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if !is_rational_square(q) {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    Some(BigRational::new(n, d))
}
