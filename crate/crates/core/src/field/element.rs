use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::integers::{smallest_prime_factor, squarefree_part};
use super::{FieldError, Rational};

/// An element of a multi-quadratic extension of the rationals.
///
/// Stored as `sum c_m * sqrt(m)` over squarefree integers `m` (with `m = 1`
/// the rational part and `sqrt(m) = i * sqrt(|m|)` for negative `m`). The
/// square roots of distinct squarefree integers are linearly independent over
/// the rationals, so this representation is canonical and equality is exact.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FieldElement {
    terms: BTreeMap<BigInt, Rational>,
}

impl FieldElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(BigInt::one(), q);
        }
        Self { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `c * sqrt(m)` for a squarefree integer `m`.
    fn radical(c: Rational, m: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    /// The canonical square root of a rational: `(k/d) * sqrt(s)` with
    /// `k/d > 0` and `s` squarefree. Negative input yields an imaginary root.
    pub fn sqrt_of_rational(q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        let nd = q.numer() * q.denom();
        let (k, s) = squarefree_part(&nd);
        Self::radical(BigRational::new(k, q.denom().clone()), s)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.to_rational().is_some_and(|q| q.is_one())
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|k| k.is_one())
    }

    pub fn to_rational(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_rational() {
            self.terms.get(&BigInt::one()).cloned()
        } else {
            None
        }
    }

    /// Rational coefficient of `sqrt(1)`.
    pub fn rational_part(&self) -> Rational {
        self.terms.get(&BigInt::one()).cloned().unwrap_or_else(Rational::zero)
    }

    /// Squarefree radicands (other than 1) with nonzero coefficient.
    pub fn radicands(&self) -> impl Iterator<Item = &BigInt> {
        self.terms.keys().filter(|k| !k.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigInt, &Rational)> {
        self.terms.iter()
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(k, c)| (k.clone(), c * q)).collect() }
    }

    fn add_term(&mut self, key: BigInt, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                let g = m.abs().gcd(&n.abs());
                let both_negative = m.is_negative() && n.is_negative();
                let key = (m * n) / (&g * &g);
                let mut c = a * b * Rational::from_integer(g);
                if both_negative {
                    // i * i = -1
                    c = -c;
                }
                out.add_term(key, c);
            }
        }
        out
    }

    pub fn square(&self) -> Self {
        self.mul_ref(self)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// Multiplicative inverse, by repeated conjugation over one radical
    /// generator at a time.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(q) = self.to_rational() {
            return Ok(Self::from_rational(q.recip()));
        }
        let p = self.split_prime();
        let (a, b) = self.split_on(&p);
        // x = a + b sqrt(p); x^{-1} = (a - b sqrt(p)) / (a^2 - p b^2)
        let sqrt_p = Self::radical(Rational::one(), p.clone());
        let conj = &a - &(&b * &sqrt_p);
        let norm = &a.square() - &b.square().scale(&Rational::from_integer(p));
        debug_assert!(norm.is_zero() || norm.split_on_checked(&sqrt_p));
        Ok(&conj * &norm.inv()?)
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        Ok(self * &other.inv()?)
    }

    /// A generator the element genuinely involves: `-1` when some radicand is
    /// negative, otherwise the smallest prime dividing a radicand.
    fn split_prime(&self) -> BigInt {
        if self.terms.keys().any(|k| k.is_negative()) {
            return -BigInt::one();
        }
        self.terms
            .keys()
            .filter_map(smallest_prime_factor)
            .min()
            .expect("irrational element has a prime radicand")
    }

    fn divides(p: &BigInt, key: &BigInt) -> bool {
        if p == &-BigInt::one() {
            key.is_negative()
        } else {
            key.is_multiple_of(p)
        }
    }

    /// `self = a + b * sqrt(p)` with `a`, `b` free of `sqrt(p)`.
    fn split_on(&self, p: &BigInt) -> (Self, Self) {
        let mut a = Self::zero();
        let mut b = Self::zero();
        for (k, c) in &self.terms {
            if Self::divides(p, k) {
                b.add_term(k / p, c.clone());
            } else {
                a.add_term(k.clone(), c.clone());
            }
        }
        (a, b)
    }

    fn split_on_checked(&self, sqrt_p: &Self) -> bool {
        let p = sqrt_p.terms.keys().next().expect("radical").clone();
        self.terms.keys().all(|k| !Self::divides(&p, k))
    }

    /// Total order on canonical representations: the rational part compares
    /// numerically first, then the remaining terms lexicographically. This is
    /// a deterministic tie-break, not an order of real numbers.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.rational_part().cmp(&other.rational_part()).then_with(|| {
            let a: Vec<_> = self.terms.iter().filter(|(k, _)| !k.is_one()).collect();
            let b: Vec<_> = other.terms.iter().filter(|(k, _)| !k.is_one()).collect();
            a.cmp(&b)
        })
    }

    /// Exact string form, e.g. `1/2 + 3*sqrt(-1) - 2*sqrt(6)`.
    pub fn to_exact_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            let coeff = super::rational_to_string(&mag);
            let body = if k.is_one() {
                coeff
            } else if mag.is_one() {
                format!("sqrt({k})")
            } else {
                format!("{coeff}*sqrt({k})")
            };
            match (i, neg) {
                (0, true) => out.push_str(&format!("-{body}")),
                (0, false) => out.push_str(&body),
                (_, true) => out.push_str(&format!(" - {body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
            }
        }
        out
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_exact_string())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_exact_string())
    }
}

impl From<Rational> for FieldElement {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl Add<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        &self + &rhs
    }
}

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        for (k, c) in &rhs.terms {
            self.add_term(k.clone(), c.clone());
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl Sub<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self + &(-rhs)
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        &self - &rhs
    }
}

impl Mul<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.mul_ref(rhs)
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.mul_ref(&rhs)
    }
}
