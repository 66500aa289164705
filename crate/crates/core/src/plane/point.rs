use std::cmp::Ordering;
use std::fmt;

use crate::field::{FieldElement, Rational};

use super::PlaneError;

/// A point of the projective plane, scaled so that its first nonzero
/// coordinate is 1. Equality is therefore projective equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: [FieldElement; 3],
}

impl ProjPoint {
    pub fn new(coords: [FieldElement; 3]) -> Result<Self, PlaneError> {
        let lead = coords
            .iter()
            .find(|c| !c.is_zero())
            .ok_or_else(|| PlaneError::Degenerate("(0:0:0) is not a point".into()))?
            .inv()?;
        Ok(Self { coords: coords.map(|c| &c * &lead) })
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        Self::new([x.into(), y.into(), z.into()]).expect("nonzero point")
    }

    pub fn from_rationals(c: [Rational; 3]) -> Result<Self, PlaneError> {
        Self::new(c.map(FieldElement::from_rational))
    }

    pub fn coords(&self) -> &[FieldElement; 3] {
        &self.coords
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().all(FieldElement::is_rational)
    }

    /// Index of the first nonzero coordinate (always equal to 1 after
    /// normalisation).
    pub fn leading_index(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).expect("nonzero point")
    }

    pub fn to_strings(&self) -> [String; 3] {
        [0, 1, 2].map(|i| self.coords[i].to_exact_string())
    }
}

/// Cross product of coordinate vectors: the line through two points, or the
/// point on two lines.
pub(crate) fn cross(a: &[FieldElement; 3], b: &[FieldElement; 3]) -> [FieldElement; 3] {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

#[cfg(test)]
pub(crate) fn dot(a: &[FieldElement; 3], b: &[FieldElement; 3]) -> FieldElement {
    let mut acc = FieldElement::zero();
    for i in 0..3 {
        acc += &(&a[i] * &b[i]);
    }
    acc
}

pub(crate) fn is_zero_vec(a: &[FieldElement; 3]) -> bool {
    a.iter().all(FieldElement::is_zero)
}

impl Ord for ProjPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.coords.iter().zip(&other.coords) {
            match a.canonical_cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.to_strings();
        write!(f, "({a} : {b} : {c})")
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalisation_is_projective() {
        assert_eq!(ProjPoint::from_ints(2, 1, 2), ProjPoint::from_ints(-4, -2, -4));
        assert_eq!(ProjPoint::from_ints(0, 3, 0).to_string(), "(0 : 1 : 0)");
        assert!(ProjPoint::new([0.into(), 0.into(), 0.into()]).is_err());
    }

    #[test]
    fn cross_is_join() {
        let p = ProjPoint::from_ints(1, 0, 1);
        let q = ProjPoint::from_ints(1, 1, 1);
        let line = cross(p.coords(), q.coords());
        assert!(dot(&line, p.coords()).is_zero());
        assert!(dot(&line, q.coords()).is_zero());
        assert!(!is_zero_vec(&line));
    }
}
