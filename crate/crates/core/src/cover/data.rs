use std::fmt;

use crate::field::{Poly, Tower};
use crate::group::{subgroup_generated, Character, GroupElement, Subgroup};
use crate::plane::{classify_arrangement_singularities, Arrangement, PlaneCurve};

use super::CoverError;

/// Branch data `sigma -> D_sigma` of a `Z2^r` cover of the plane. Branches
/// keep their input order; the `i`-th one (1-based) has equation `d_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildingData {
    rank: u8,
    branches: Vec<(GroupElement, PlaneCurve)>,
}

/// `u_chi` with `u_chi^2 = prod_{i in indices} d_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalFactor {
    pub character: Character,
    /// 1-based branch indices with `chi(sigma_i) = -1`.
    pub indices: Vec<usize>,
    pub label: String,
}

impl RadicalFactor {
    pub fn radicand_label(&self) -> String {
        self.indices.iter().map(|i| format!("d{i}")).collect::<Vec<_>>().join("*")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotReduced(GroupElement),
    CommonComponent { first: GroupElement, second: GroupElement, component: String },
    OddParity { character: Character, degree_sum: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotReduced(s) => write!(f, "D_{s} is not reduced"),
            Violation::CommonComponent { first, second, component } => {
                write!(f, "common component {component} in D_{first} and D_{second}")
            }
            Violation::OddParity { character, degree_sum } => {
                write!(f, "parity: branch degrees under {character} sum to odd {degree_sum}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Subgroup generated by the `sigma` with nonempty branch.
    pub generated: Subgroup,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_irreducible(&self) -> bool {
        self.generated.is_whole_group()
    }
}

impl BuildingData {
    /// Fails only on structural problems (rank mismatch, identity or repeated
    /// `sigma`); geometric conditions are left to [`validate_building_data`].
    pub fn new(rank: u8, branches: Vec<(GroupElement, PlaneCurve)>) -> Result<Self, CoverError> {
        GroupElement::new(rank, 0)?;
        for (i, (s, _)) in branches.iter().enumerate() {
            if s.rank() != rank {
                return Err(CoverError::Malformed(format!("{s} has rank {}, expected {rank}", s.rank())));
            }
            if s.is_identity() {
                return Err(CoverError::Malformed("the identity cannot carry a branch divisor".into()));
            }
            if branches[..i].iter().any(|(t, _)| t == s) {
                return Err(CoverError::Malformed(format!("{s} listed twice")));
            }
        }
        Ok(Self { rank, branches })
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn order(&self) -> i64 {
        1i64 << self.rank
    }

    pub fn branches(&self) -> &[(GroupElement, PlaneCurve)] {
        &self.branches
    }

    pub fn branch(&self, sigma: &GroupElement) -> Option<&PlaneCurve> {
        self.branches.iter().find(|(s, _)| s == sigma).map(|(_, c)| c)
    }

    /// `d_i`, 1-based.
    pub fn equation(&self, index: usize) -> &Poly {
        self.branches[index - 1].1.equation()
    }

    pub fn curves(&self) -> Vec<PlaneCurve> {
        self.branches.iter().map(|(_, c)| c.clone()).collect()
    }

    /// Sum of `deg D_sigma` over all `sigma`.
    pub fn total_degree(&self) -> u32 {
        self.branches.iter().map(|(_, c)| c.degree()).sum()
    }

    /// `sum_{chi(sigma) = -1} deg D_sigma`.
    pub fn branch_degree_sum(&self, chi: &Character) -> Result<u32, CoverError> {
        let mut total = 0;
        for (s, c) in &self.branches {
            if chi.eval(s)? == -1 {
                total += c.degree();
            }
        }
        Ok(total)
    }

    /// 1-based indices `i` with `chi(sigma_i) = -1`.
    pub fn radical_indices(&self, chi: &Character) -> Result<Vec<usize>, CoverError> {
        let mut out = Vec::new();
        for (i, (s, _)) in self.branches.iter().enumerate() {
            if chi.eval(s)? == -1 {
                out.push(i + 1);
            }
        }
        Ok(out)
    }

    /// The radicals `u_chi` of the nontrivial characters, numbered `u1, u2, ...`
    /// by decreasing number of factors and then lexicographically in the
    /// factor indices.
    pub fn radicals(&self) -> Result<Vec<RadicalFactor>, CoverError> {
        let mut out = Vec::new();
        for chi in Character::all(self.rank).into_iter().filter(|c| !c.is_trivial()) {
            out.push(RadicalFactor { indices: self.radical_indices(&chi)?, character: chi, label: String::new() });
        }
        out.sort_by(|a, b| b.indices.len().cmp(&a.indices.len()).then_with(|| a.indices.cmp(&b.indices)));
        for (k, r) in out.iter_mut().enumerate() {
            r.label = format!("u{}", k + 1);
        }
        Ok(out)
    }

    pub fn radical(&self, chi: &Character) -> Result<Option<RadicalFactor>, CoverError> {
        Ok(self.radicals()?.into_iter().find(|r| &r.character == chi))
    }

    /// Classifies the singularities of the total branch locus; anything other
    /// than nodes and tacnodes between two branches is an error.
    pub fn branch_arrangement(&self, tower: &mut Tower) -> Result<Arrangement, CoverError> {
        Ok(classify_arrangement_singularities(&self.curves(), tower)?)
    }
}

/// Reducedness, absence of shared components, and parity of every character's
/// branch degree. Irreducibility of the cover is reported alongside.
pub fn validate_building_data(bd: &BuildingData) -> ValidationReport {
    let mut violations = Vec::new();
    for (s, c) in &bd.branches {
        if !c.is_reduced() {
            violations.push(Violation::NotReduced(*s));
        }
    }
    for (i, (s, c)) in bd.branches.iter().enumerate() {
        for (t, d) in &bd.branches[i + 1..] {
            for (label, f) in c.factors() {
                if d.factors().iter().any(|(_, g)| g.proportional_to(f)) {
                    violations.push(Violation::CommonComponent { first: *s, second: *t, component: label.clone() });
                }
            }
        }
    }
    for chi in Character::all(bd.rank).into_iter().filter(|c| !c.is_trivial()) {
        let degree_sum = bd.branch_degree_sum(&chi).expect("ranks checked at construction");
        if degree_sum % 2 == 1 {
            violations.push(Violation::OddParity { character: chi, degree_sum });
        }
    }
    let support: Vec<GroupElement> = bd.branches.iter().map(|(s, _)| *s).collect();
    let generated = subgroup_generated(bd.rank, &support).expect("ranks checked at construction");
    ValidationReport { violations, generated }
}
