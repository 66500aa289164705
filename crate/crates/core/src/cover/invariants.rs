use std::collections::BTreeMap;

use crate::field::{FieldElement, Monomial, Poly};
use crate::group::Character;

use super::{BuildingData, CoverError, RadicalFactor};

/// `h^0(P^2, O(n))`.
pub fn h0_plane(n: i64) -> i64 {
    if n < 0 {
        0
    } else {
        (n + 1) * (n + 2) / 2
    }
}

/// A monomial times the radical of its character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PluriSection {
    pub character: Character,
    pub monomial: Monomial,
    /// `None` for the trivial character.
    pub radical: Option<RadicalFactor>,
}

impl PluriSection {
    pub fn plane_part(&self) -> Poly {
        Poly::monomial(self.monomial.clone(), FieldElement::one())
    }

    pub fn label(&self) -> String {
        let mono = if self.monomial.iter().all(|&e| e == 0) {
            None
        } else {
            Some(self.plane_part().to_expr_string(&["x", "y", "z"]))
        };
        match (mono, &self.radical) {
            (None, None) => "1".into(),
            (Some(m), None) => m,
            (None, Some(r)) => r.label.clone(),
            (Some(m), Some(r)) => format!("{m}*{}", r.label),
        }
    }
}

impl BuildingData {
    /// `L_chi = 1/2 sum_{chi(sigma) = -1} deg D_sigma` for each nontrivial
    /// character, as a multiple of the line class.
    pub fn branch_character_classes(&self) -> Result<BTreeMap<Character, i64>, CoverError> {
        let mut out = BTreeMap::new();
        for chi in Character::all(self.rank()).into_iter().filter(|c| !c.is_trivial()) {
            let s = self.branch_degree_sum(&chi)?;
            if s % 2 == 1 {
                return Err(CoverError::NotIntegral(format!("L for {chi} (half of {s})")));
            }
            out.insert(chi, (s / 2) as i64);
        }
        Ok(out)
    }

    pub fn chi_structure_sheaf(&self) -> Result<i64, CoverError> {
        let mut twice = 2 * self.order();
        for l in self.branch_character_classes()?.values() {
            twice += l * (l - 3);
        }
        Ok(twice / 2)
    }

    pub fn geometric_genus(&self) -> Result<i64, CoverError> {
        Ok(self.branch_character_classes()?.values().map(|l| h0_plane(l - 3)).sum())
    }

    /// `K^2 = 2^r (-3 + Delta)^2` with `Delta = 1/2 sum deg D_sigma`.
    pub fn k_squared(&self) -> Result<i64, CoverError> {
        let s = self.total_degree() as i64 - 6;
        let numer = self.order() * s * s;
        if numer % 4 != 0 {
            return Err(CoverError::NotIntegral(format!("K^2 = {numer}/4")));
        }
        Ok(numer / 4)
    }

    pub fn irregularity(&self) -> Result<i64, CoverError> {
        let q = 1 - self.chi_structure_sheaf()? + self.geometric_genus()?;
        if q < 0 {
            return Err(CoverError::Inconsistent(format!("negative irregularity {q}")));
        }
        Ok(q)
    }

    /// Degree of the plane part of an `m`-canonical section of character
    /// `chi`: `m (-3 + Delta) - L_chi`.
    pub fn pluricanonical_degree(&self, m: u32, chi: &Character) -> Result<i64, CoverError> {
        let twice = m as i64 * (self.total_degree() as i64 - 6);
        if twice % 2 != 0 {
            return Err(CoverError::NotIntegral(format!("{m}(K + Delta) has half-integral degree")));
        }
        let l = if chi.is_trivial() { 0 } else { (self.branch_degree_sum(chi)? / 2) as i64 };
        Ok(twice / 2 - l)
    }

    /// Basis of `H^0(m K)` split by character: trivial character first, then
    /// the radicals in their numbering, monomials in descending order.
    pub fn pluricanonical_basis(&self, m: u32) -> Result<Vec<PluriSection>, CoverError> {
        if m == 0 {
            return Err(CoverError::Malformed("pluricanonical index must be positive".into()));
        }
        self.branch_character_classes()?;
        let mut out = Vec::new();
        let trivial = Character::trivial(self.rank());
        let mut blocks: Vec<(Character, Option<RadicalFactor>)> = vec![(trivial, None)];
        blocks.extend(self.radicals()?.into_iter().map(|r| (r.character, Some(r))));
        for (chi, radical) in blocks {
            let d = self.pluricanonical_degree(m, &chi)?;
            if d < 0 {
                continue;
            }
            for monomial in Poly::monomials_of_degree(3, d as u32) {
                out.push(PluriSection { character: chi, monomial, radical: radical.clone() });
            }
        }
        Ok(out)
    }
}
