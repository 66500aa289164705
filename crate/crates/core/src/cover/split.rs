use crate::field::{FieldElement, Poly};
use crate::group::Character;
use crate::plane::{parametrize_conic, rational_point_on_conic, restriction_is_square, PlaneCurve, PlaneError, ProjPoint, SquareRestriction};

use super::{BuildingData, CoverError};

/// The double plane `u^2 = f` attached to a nontrivial character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleCover {
    pub character: Character,
    pub radical_label: String,
    /// 1-based branch indices multiplied into `f`.
    pub indices: Vec<usize>,
    pub branch: Poly,
}

impl DoubleCover {
    pub fn branch_degree(&self) -> u32 {
        self.branch.total_degree().unwrap_or(0)
    }
}

impl BuildingData {
    /// `u_chi^2 = prod_{chi(sigma) = -1} d_sigma`.
    pub fn intermediate_cover(&self, chi: &Character) -> Result<DoubleCover, CoverError> {
        if chi.is_trivial() {
            return Err(CoverError::TrivialCharacter(*chi));
        }
        let radical = self.radical(chi)?.ok_or_else(|| CoverError::Malformed(format!("{chi} has the wrong rank")))?;
        let mut branch = Poly::constant(3, FieldElement::one());
        for &i in &radical.indices {
            branch = branch.mul(self.equation(i));
        }
        Ok(DoubleCover { character: *chi, radical_label: radical.label, indices: radical.indices, branch })
    }
}

/// Whether the preimage of a conic in a double plane has two components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitCheck {
    pub conic: String,
    pub base_point: ProjPoint,
    pub restriction: SquareRestriction,
    /// The restricted branch form is a square over the rationals. The
    /// geometric criterion is `restriction.even_multiplicities`.
    pub splits: bool,
}

/// Pulls `conic` back to `u^2 = branch` through a parametrisation from
/// `base` (or a searched rational point).
pub fn pullback_split_check(branch: &Poly, conic: &PlaneCurve, base: Option<&ProjPoint>) -> Result<SplitCheck, CoverError> {
    if conic.degree() != 2 || conic.factors().len() != 1 {
        return Err(CoverError::Malformed(format!("{} is not a smooth conic", conic.label())));
    }
    let base_point = match base {
        Some(p) => p.clone(),
        None => rational_point_on_conic(conic.equation(), 24).ok_or_else(|| {
            CoverError::Plane(PlaneError::Unsupported(format!("no small rational point found on {}", conic.label())))
        })?,
    };
    let param = parametrize_conic(conic.equation(), &base_point)?;
    let restriction = match restriction_is_square(branch, &param) {
        Err(PlaneError::RamifiedRestriction) => return Err(CoverError::ConicInBranch(conic.label().into())),
        r => r?,
    };
    let splits = restriction.is_square();
    Ok(SplitCheck { conic: conic.label().into(), base_point, restriction, splits })
}

/// Numerical shadow of a split pullback `pi^* C = A + B` on a double plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitNumerics {
    pub total_square: i64,
    pub ab: i64,
    pub a_squared: i64,
    pub a_dot_k: i64,
    pub genus: i64,
    /// Riemann-Roch lower bound for `h^0(A)`.
    pub h0_lower_bound: i64,
    pub pullback_arithmetic_genus: i64,
}

/// `k` is the number of tangency points of the conic with the branch curve
/// of degree `branch_degree`.
pub fn split_component_numerics(check: &SplitCheck, branch_degree: u32, k: u32) -> Result<SplitNumerics, CoverError> {
    if !check.splits {
        return Err(CoverError::NotSplit(check.conic.clone()));
    }
    if branch_degree % 2 == 1 {
        return Err(CoverError::NotIntegral(format!("half of branch degree {branch_degree}")));
    }
    let deg_c = 2i64;
    let total_square = 2 * deg_c * deg_c;
    let ab = k as i64;
    let a_squared = (total_square - 2 * ab) / 2;
    // K_X = pi^*((-3 + b/2) T)
    let total_dot_k = 2 * deg_c * (-3 + branch_degree as i64 / 2);
    let a_dot_k = total_dot_k / 2;
    let genus = (a_squared + a_dot_k + 2) / 2;
    let h0_lower_bound = 1 + (a_squared - a_dot_k) / 2;
    let pullback_arithmetic_genus = 1 + (total_square + total_dot_k) / 2;
    if 2 * genus - 2 != a_squared + a_dot_k || pullback_arithmetic_genus != 2 * genus + ab - 1 {
        return Err(CoverError::Inconsistent("split component numerics fail adjunction".into()));
    }
    Ok(SplitNumerics { total_square, ab, a_squared, a_dot_k, genus, h0_lower_bound, pullback_arithmetic_genus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::data::tests::{el, square_data};
    use crate::field::UniPoly;

    fn x_conic() -> PlaneCurve {
        PlaneCurve::conic_from_ints("H1", [1, 0, 0, 1, 0, -1]).unwrap()
    }

    #[test]
    fn intermediate_double_planes() {
        let bd = square_data();
        let seven = bd.radicals().unwrap().into_iter().find(|r| r.label == "u7").unwrap();
        let x = bd.intermediate_cover(&seven.character).unwrap();
        assert_eq!(x.indices, vec![3, 4]);
        assert_eq!(x.branch, bd.equation(3).mul(bd.equation(4)));
        let one = bd.radicals().unwrap().into_iter().find(|r| r.label == "u1").unwrap();
        assert_eq!(bd.intermediate_cover(&one.character).unwrap().branch_degree(), 8);
        assert!(matches!(
            bd.intermediate_cover(&Character::trivial(3)),
            Err(CoverError::TrivialCharacter(_))
        ));
        let _ = el("x");
    }

    #[test]
    fn both_conics_split_over_the_line_pairs() {
        let bd = square_data();
        let f = bd.equation(3).mul(bd.equation(4));
        let h1 = pullback_split_check(&f, &x_conic(), Some(&ProjPoint::from_ints(1, 0, 1))).unwrap();
        assert!(h1.splits);
        assert_eq!(h1.restriction.root.as_ref().unwrap().affine(), &UniPoly::from_ints(&[0, 2, 0, -2]));
        let h2 = PlaneCurve::conic_from_ints("H2", [4, -4, 0, 4, 0, -3]).unwrap();
        let c = pullback_split_check(&f, &h2, Some(&ProjPoint::from_ints(2, 1, 2))).unwrap();
        assert!(c.splits);
        assert!(c.restriction.root.is_some());
        // the base point does not matter
        assert!(pullback_split_check(&f, &h2, None).unwrap().splits);
    }

    #[test]
    fn generic_conic_does_not_split() {
        let bd = square_data();
        let f = bd.equation(3).mul(bd.equation(4));
        let generic = PlaneCurve::conic_from_ints("G", [1, 0, 0, 1, 0, -5]).unwrap();
        let check = pullback_split_check(&f, &generic, None).unwrap();
        assert!(!check.splits);
        assert!(check.restriction.root.is_none());
        assert!(matches!(split_component_numerics(&check, 4, 0), Err(CoverError::NotSplit(_))));
    }

    #[test]
    fn conic_in_branch_is_an_error() {
        let f = x_conic().equation().mul(&Poly::var(3, 0));
        assert!(matches!(pullback_split_check(&f, &x_conic(), None), Err(CoverError::ConicInBranch(_))));
    }

    #[test]
    fn step_one_numbers() {
        let bd = square_data();
        let f = bd.equation(3).mul(bd.equation(4));
        let check = pullback_split_check(&f, &x_conic(), None).unwrap();
        let n = split_component_numerics(&check, 4, 4).unwrap();
        assert_eq!(
            n,
            SplitNumerics {
                total_square: 8,
                ab: 4,
                a_squared: 0,
                a_dot_k: -2,
                genus: 0,
                h0_lower_bound: 2,
                pullback_arithmetic_genus: 3
            }
        );
    }
}
