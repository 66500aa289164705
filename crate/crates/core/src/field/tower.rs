use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::integers::{prime_support, squarefree_part};
use super::{FieldElement, FieldError, Rational};

/// The square-root tower a computation has needed so far.
///
/// Generators are squarefree integers that are multiplicatively independent
/// modulo squares. Elements themselves do not reference the tower (see
/// [`FieldElement`]); the tower records which extension a run lives in and
/// answers whether a new radicand is already covered.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tower {
    generators: Vec<BigInt>,
    basis: Vec<BTreeSet<BigInt>>,
}

impl Tower {
    pub fn rationals() -> Self {
        Self::default()
    }

    pub fn generators(&self) -> &[BigInt] {
        &self.generators
    }

    pub fn generator_strings(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.to_string()).collect()
    }

    pub fn degree(&self) -> u64 {
        1u64 << self.generators.len()
    }

    /// Reduces the GF(2) support vector of `s` against the current basis.
    /// Each basis vector is keyed by its largest prime.
    fn reduce(&self, s: &BigInt) -> BTreeSet<BigInt> {
        let mut v: BTreeSet<BigInt> = prime_support(s).into_iter().collect();
        for b in &self.basis {
            let pivot = b.iter().next_back().expect("nonempty basis vector");
            if v.contains(pivot) {
                v = v.symmetric_difference(b).cloned().collect();
            }
        }
        v
    }

    /// True when `sqrt(a)` already lies in the tower.
    pub fn contains_sqrt(&self, a: &Rational) -> bool {
        if a.is_zero() {
            return true;
        }
        let (_, s) = squarefree_part(&(a.numer() * a.denom()));
        s.is_one() || self.reduce(&s).is_empty()
    }

    /// Ensures `sqrt(a)` is in the tower and returns it. A radicand that is
    /// already a square modulo the existing generators leaves the tower
    /// unchanged.
    pub fn adjoin_sqrt(&mut self, a: &Rational) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::Degenerate("square root of zero adjoined".into()));
        }
        let (_, s) = squarefree_part(&(a.numer() * a.denom()));
        if !s.is_one() {
            let residual = self.reduce(&s);
            if !residual.is_empty() {
                // keep the basis reduced so pivots stay unique
                let pivot = residual.iter().next_back().expect("nonempty").clone();
                for b in &mut self.basis {
                    if b.contains(&pivot) {
                        *b = b.symmetric_difference(&residual).cloned().collect();
                    }
                }
                self.basis.push(residual);
                self.generators.push(s);
            }
        }
        Ok(FieldElement::sqrt_of_rational(a))
    }

    /// Adjoins every radicand appearing in `x`.
    pub fn absorb(&mut self, x: &FieldElement) {
        let radicands: Vec<BigInt> = x.radicands().cloned().collect();
        for m in radicands {
            self.adjoin_sqrt(&Rational::from_integer(m)).expect("nonzero radicand");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::parse_rational;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn adjoin_three() {
        let mut t = Tower::rationals();
        let r = t.adjoin_sqrt(&q("3")).unwrap();
        assert_eq!(r.square(), FieldElement::from_int(3));
        assert_eq!(t.generators().len(), 1);
    }

    #[test]
    fn adjoin_square_is_noop() {
        let mut t = Tower::rationals();
        let r = t.adjoin_sqrt(&q("4")).unwrap();
        assert_eq!(r, FieldElement::from_int(2));
        assert_eq!(t.degree(), 1);
    }

    #[test]
    fn product_of_generators_is_covered() {
        let mut t = Tower::rationals();
        let a = t.adjoin_sqrt(&q("2")).unwrap();
        let b = t.adjoin_sqrt(&q("3")).unwrap();
        assert_eq!((&a * &b).square(), FieldElement::from_int(6));
        assert!(t.contains_sqrt(&q("6")));
        assert!(t.contains_sqrt(&q("24/25")));
        t.adjoin_sqrt(&q("6")).unwrap();
        assert_eq!(t.degree(), 4);
        assert!(!t.contains_sqrt(&q("-1")));
        t.adjoin_sqrt(&q("-6")).unwrap();
        assert!(t.contains_sqrt(&q("-1")));
        assert_eq!(t.degree(), 8);
    }

    #[test]
    fn zero_radicand_rejected() {
        let mut t = Tower::rationals();
        assert!(matches!(t.adjoin_sqrt(&q("0")), Err(FieldError::Degenerate(_))));
    }

    #[test]
    fn idempotent_up_to_squares() {
        let mut t = Tower::rationals();
        t.adjoin_sqrt(&q("5")).unwrap();
        let before = t.clone();
        t.adjoin_sqrt(&q("20")).unwrap();
        t.adjoin_sqrt(&q("5/9")).unwrap();
        assert_eq!(t, before);
    }
}
