use std::fmt;

use num_traits::Signed;

use super::{FieldElement, FieldError, Rational};

/// Dense univariate polynomial, coefficients in ascending degree.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<FieldElement>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&n| FieldElement::from_int(n)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::new(vec![c])
    }

    /// `t - a`
    pub fn linear_root(a: &FieldElement) -> Self {
        Self::new(vec![-a, FieldElement::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = FieldElement::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![FieldElement::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&Rational::from_integer((i as i64).into())))
                .collect(),
        )
    }

    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), FieldError> {
        let dd = divisor.degree().ok_or(FieldError::DivisionByZero)?;
        let lead_inv = divisor.leading().inv()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![FieldElement::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = &rem[top] * &lead_inv;
            let shift = top - dd;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] = &rem[shift + j] - &(&c * d);
            }
            quot[shift] = c;
            rem.pop();
            while rem.last().is_some_and(|x| x.is_zero()) {
                rem.pop();
            }
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn monic(&self) -> Self {
        match self.leading().inv() {
            Ok(inv) => self.scale(&inv),
            Err(_) => Self::zero(),
        }
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Order of vanishing at `a`.
    pub fn root_multiplicity(&self, a: &FieldElement) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let lin = Self::linear_root(a);
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (q, r) = p.div_rem(&lin).expect("monic divisor");
            if !r.is_zero() {
                return Some(k);
            }
            p = q;
            k += 1;
        }
    }

    /// Yun's squarefree decomposition: monic `s_1, s_2, ...` with
    /// `self = lc * prod s_k^k`.
    pub fn squarefree_decomposition(&self) -> Vec<Self> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.div_rem(&a).expect("gcd divides").0;
        let mut c = df.div_rem(&a).expect("gcd divides").0;
        let mut d = c.sub(&b.derivative());
        while b.degree().unwrap_or(0) > 0 {
            a = b.gcd(&d);
            out.push(a.clone());
            b = b.div_rem(&a).expect("gcd divides").0;
            c = d.div_rem(&a).expect("gcd divides").0;
            d = c.sub(&b.derivative());
        }
        while out.last().is_some_and(|p| p.degree() == Some(0)) {
            out.pop();
        }
        out
    }

    pub fn is_squarefree(&self) -> bool {
        self.squarefree_decomposition().iter().skip(1).all(|p| p.degree() == Some(0))
    }

    /// Square root over the coefficient field, when `self` is a perfect square
    /// there. Chooses the root whose lowest nonzero coefficient has positive
    /// rational part (or, failing that, the canonical order's larger sign).
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let n = self.degree()?;
        if n % 2 == 1 {
            return None;
        }
        let lead = self.leading();
        let lead_root = lead.to_rational().and_then(|q| super::integers::rational_sqrt(&q))?;
        let half = n / 2;
        // Coefficient matching from the top: r_{half} = sqrt(lead), then solve
        // downward for the remaining coefficients.
        let mut r = vec![FieldElement::zero(); half + 1];
        r[half] = FieldElement::from_rational(lead_root);
        let two_r_top = r[half].scale(&Rational::from_integer(2.into())).inv().ok()?;
        for k in (0..half).rev() {
            let target = self.coeff(half + k);
            let mut acc = FieldElement::zero();
            for i in (k + 1)..=half {
                let j = half + k - i;
                if j > k && j <= half {
                    acc += &(&r[i] * &r[j]);
                }
            }
            r[k] = &(&target - &acc) * &two_r_top;
        }
        let root = Self::new(r);
        if root.mul(&root) != *self {
            return None;
        }
        let low = root.coeffs.iter().find(|c| !c.is_zero()).expect("nonzero root");
        if low.rational_part().is_negative() {
            Some(root.scale(&FieldElement::from_int(-1)))
        } else {
            Some(root)
        }
    }

    /// Distinct rational roots, ascending. `None` if a coefficient is
    /// irrational.
    pub fn rational_roots(&self) -> Option<Vec<Rational>> {
        use num_integer::Integer;
        use num_traits::{One, Zero};
        let rats: Vec<Rational> = self.coeffs.iter().map(FieldElement::to_rational).collect::<Option<_>>()?;
        if rats.is_empty() {
            return Some(Vec::new());
        }
        let mut den = num_bigint::BigInt::one();
        for q in &rats {
            den = den.lcm(q.denom());
        }
        let ints: Vec<num_bigint::BigInt> = rats.iter().map(|q| q.numer() * (&den / q.denom())).collect();
        let low = ints.iter().position(|c| !c.is_zero()).expect("nonzero");
        let mut roots = Vec::new();
        if low > 0 {
            roots.push(Rational::zero());
        }
        let content = ints[low..].iter().fold(num_bigint::BigInt::zero(), |g, c| g.gcd(c));
        let ints: Vec<num_bigint::BigInt> = ints[low..].iter().map(|c| c / &content).collect();
        if ints.len() > 1 {
            let n = ints.len() - 1;
            let at = |x: i64| {
                let mut acc = num_bigint::BigInt::zero();
                for c in ints.iter().rev() {
                    acc = acc * x + c;
                }
                acc
            };
            let (f_one, f_minus_one) = (at(1), at(-1));
            let (a0, an) = (&ints[0], &ints[n]);
            let qs = super::divisors(an);
            for p in super::divisors(a0) {
                for q in &qs {
                    if !p.gcd(q).is_one() {
                        continue;
                    }
                    for sign in [1, -1] {
                        let num = &p * sign;
                        // a root p/q forces (q - p) | f(1) and (q + p) | f(-1)
                        let d1: num_bigint::BigInt = q - &num;
                        let d2: num_bigint::BigInt = q + &num;
                        if (!d1.is_zero() && !(&f_one % &d1).is_zero()) || (!d2.is_zero() && !(&f_minus_one % &d2).is_zero()) {
                            continue;
                        }
                        // q^n f(p/q) in integers
                        let mut acc = num_bigint::BigInt::zero();
                        let mut qk = num_bigint::BigInt::one();
                        for c in ints.iter().rev() {
                            acc = acc * &num + c * &qk;
                            qk *= q;
                        }
                        let r = Rational::new(num, q.clone());
                        if acc.is_zero() && !roots.contains(&r) {
                            roots.push(r);
                        }
                    }
                }
            }
        }
        roots.sort();
        Some(roots)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_exact_string()).collect()
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})*t^{i}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A binary form `F(s, t) = sum_i c_i s^(d-i) t^i` of fixed degree `d`.
///
/// The dehomogenisation `F(1, t)` is stored; roots at `(0 : 1)` show up as a
/// drop in its degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinaryForm {
    degree: usize,
    affine: UniPoly,
}

impl BinaryForm {
    pub fn new(degree: usize, affine: UniPoly) -> Self {
        assert!(affine.degree().unwrap_or(0) <= degree, "affine part exceeds form degree");
        Self { degree, affine }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn affine(&self) -> &UniPoly {
        &self.affine
    }

    pub fn is_zero(&self) -> bool {
        self.affine.is_zero()
    }

    /// Order of vanishing at `(0 : 1)`.
    pub fn order_at_infinity(&self) -> usize {
        self.degree - self.affine.degree().unwrap_or(0)
    }

    /// Order of vanishing at `(s0 : t0)`.
    pub fn order_at(&self, s0: &FieldElement, t0: &FieldElement) -> Result<usize, FieldError> {
        if self.is_zero() {
            return Err(FieldError::Degenerate("zero form has no finite order".into()));
        }
        if s0.is_zero() {
            if t0.is_zero() {
                return Err(FieldError::Degenerate("(0:0) is not a point".into()));
            }
            return Ok(self.order_at_infinity());
        }
        let a = t0.div(s0)?;
        Ok(self.affine.root_multiplicity(&a).expect("nonzero"))
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { degree: self.degree + other.degree, affine: self.affine.mul(&other.affine) }
    }

    /// True when every root (over an algebraic closure) has even multiplicity.
    pub fn has_only_even_roots(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        if self.order_at_infinity() % 2 == 1 {
            return false;
        }
        self.affine.squarefree_decomposition().iter().enumerate().all(|(i, p)| {
            let multiplicity = i + 1;
            multiplicity % 2 == 0 || p.degree() == Some(0)
        })
    }

    /// Square root over the coefficient field.
    pub fn sqrt(&self) -> Option<Self> {
        if self.degree % 2 == 1 || self.order_at_infinity() % 2 == 1 {
            return None;
        }
        let root = self.affine.sqrt()?;
        Some(Self { degree: self.degree / 2, affine: root })
    }
}
