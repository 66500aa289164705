use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{FieldElement, FieldError, Rational, UniPoly};

/// Exponent vector. Ordered so that `x^2 > x*y > x*z > y^2 > y*z > z^2`
/// when iterated in reverse, see [`Poly::monomials_of_degree`].
pub type Monomial = Vec<u32>;

/// Sparse multivariate polynomial over [`FieldElement`].
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: FieldElement) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The `i`-th coordinate variable.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, FieldElement::one())
    }

    pub fn monomial(exps: Monomial, c: FieldElement) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// Linear form `sum c_i x_i`.
    pub fn linear(coeffs: &[FieldElement]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    /// All exponent vectors of total degree `d` in `nvars` variables, in
    /// descending lexicographic order (`x^2, xy, xz, y^2, yz, z^2` for
    /// `nvars = 3, d = 2`).
    pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(nvars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if prefix.len() == nvars - 1 {
                let used: u32 = prefix.iter().sum();
                let mut e = prefix.clone();
                e.push(d - used);
                out.push(e);
                return;
            }
            let used: u32 = prefix.iter().sum();
            for k in (0..=(d - used)).rev() {
                prefix.push(k);
                rec(nvars, d, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            return out;
        }
        rec(nvars, d, &mut Vec::new(), &mut out);
        out
    }

    /// Homogeneous polynomial from coefficients listed in
    /// [`Poly::monomials_of_degree`] order.
    pub fn from_coefficients(nvars: usize, d: u32, coeffs: &[FieldElement]) -> Result<Self, FieldError> {
        let monos = Self::monomials_of_degree(nvars, d);
        if monos.len() != coeffs.len() {
            return Err(FieldError::Dimension(format!(
                "degree {d} in {nvars} variables needs {} coefficients, got {}",
                monos.len(),
                coeffs.len()
            )));
        }
        let mut p = Self::zero(nvars);
        for (m, c) in monos.into_iter().zip(coeffs) {
            p.add_term(m, c.clone());
        }
        Ok(p)
    }

    /// Coefficients in [`Poly::monomials_of_degree`] order.
    pub fn coefficients(&self, d: u32) -> Vec<FieldElement> {
        Self::monomials_of_degree(self.nvars, d).iter().map(|m| self.coeff(m)).collect()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u32]) -> FieldElement {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.terms.values().all(FieldElement::is_rational)
    }

    fn add_term(&mut self, e: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_default();
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&FieldElement::from_int(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, FieldElement::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a * c);
        }
        out
    }

    pub fn eval(&self, point: &[FieldElement]) -> FieldElement {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        let mut acc = FieldElement::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    term = &term * &x.pow(k);
                }
            }
            acc += &term;
        }
        acc
    }

    /// Composition `self(subs[0], subs[1], ...)`.
    pub fn compose(&self, subs: &[Poly]) -> Self {
        assert_eq!(subs.len(), self.nvars, "substitution arity mismatch");
        let target = subs.first().map(|p| p.nvars).unwrap_or(0);
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (p, &k) in subs.iter().zip(e) {
                if k > 0 {
                    term = term.mul(&p.pow(k));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Dehomogenises a bivariate form at the first variable `= 1`, returning
    /// the polynomial in the second variable.
    pub fn to_univariate_in_second(&self) -> UniPoly {
        assert_eq!(self.nvars, 2, "bivariate form expected");
        let deg = self.terms.keys().map(|e| e[1]).max().unwrap_or(0) as usize;
        let mut coeffs = vec![FieldElement::zero(); deg + 1];
        for (e, c) in &self.terms {
            coeffs[e[1] as usize] += c;
        }
        UniPoly::new(coeffs)
    }

    /// Scales a polynomial with rational coefficients to a primitive integer
    /// polynomial whose leading coefficient (first monomial in descending
    /// order) is positive. Polynomials with irrational coefficients are
    /// returned monic instead.
    pub fn primitive(&self) -> Self {
        let Some((_, lead)) = self.terms.iter().next_back() else {
            return self.clone();
        };
        if !self.is_rational() {
            return self.scale(&lead.inv().expect("nonzero"));
        }
        use num_integer::Integer;
        let rats: Vec<Rational> = self.terms.values().map(|c| c.to_rational().expect("rational")).collect();
        let mut den = num_bigint::BigInt::one();
        for q in &rats {
            den = den.lcm(q.denom());
        }
        let mut g = num_bigint::BigInt::zero();
        for q in &rats {
            g = g.gcd(&(q.numer() * (&den / q.denom())));
        }
        let lead_sign = lead.to_rational().expect("rational");
        let mut factor = Rational::new(den, g);
        if lead_sign < Rational::zero() {
            factor = -factor;
        }
        self.scale(&FieldElement::from_rational(factor))
    }

    /// True when `self = c * other` for some nonzero scalar `c`.
    pub fn proportional_to(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let (e, a) = self.terms.iter().next_back().expect("nonzero");
        let b = other.coeff(e);
        if b.is_zero() {
            return false;
        }
        let c = a.div(&b).expect("nonzero");
        self.sub(&other.scale(&c)).is_zero()
    }

    pub fn to_expr_string(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .zip(names)
                .filter(|(k, _)| **k > 0)
                .map(|(k, n)| if *k == 1 { n.to_string() } else { format!("{n}^{k}") })
                .collect();
            let coeff = c.to_exact_string();
            let body = if mono.is_empty() {
                coeff
            } else if c.is_one() {
                mono.join("*")
            } else if (-c).is_one() {
                format!("-{}", mono.join("*"))
            } else if c.is_rational() {
                format!("{coeff}*{}", mono.join("*"))
            } else {
                format!("({coeff})*{}", mono.join("*"))
            };
            parts.push(body);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["x", "y", "z", "w"];
        if self.nvars <= names.len() {
            write!(f, "{}", self.to_expr_string(&names[..self.nvars]))
        } else {
            write!(f, "{:?}", self.terms)
        }
    }
}
