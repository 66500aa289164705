use crate::field::{BinaryForm, ExactMatrix, FieldElement, Poly, Rational, UniPoly};

use super::point::{cross, is_zero_vec};
use super::{PlaneCurve, PlaneError, ProjPoint};

pub(crate) type Mat3 = [[FieldElement; 3]; 3];

fn pair_monomial(i: usize, j: usize) -> Vec<u32> {
    let mut e = vec![0u32; 3];
    e[i] += 1;
    e[j] += 1;
    e
}

/// Symmetric matrix `A` with `conic(v) = v^T A v`.
pub fn conic_matrix(conic: &Poly) -> Mat3 {
    let half = Rational::new(1.into(), 2.into());
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let c = conic.coeff(&pair_monomial(i, j));
            if i == j {
                c
            } else {
                c.scale(&half)
            }
        })
    })
}

pub fn conic_from_matrix(m: &Mat3) -> Poly {
    let mut out = Poly::zero(3);
    for i in 0..3 {
        for j in 0..3 {
            out = out.add(&Poly::monomial(pair_monomial(i, j), m[i][j].clone()));
        }
    }
    out
}

pub(crate) fn det3(m: &Mat3) -> FieldElement {
    let minor = |r: usize, c: usize| cofactor(m, r, c);
    let mut acc = FieldElement::zero();
    for j in 0..3 {
        acc += &(&m[0][j] * &minor(0, j));
    }
    acc
}

fn cofactor(m: &Mat3, r: usize, c: usize) -> FieldElement {
    let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
    let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
    let d = &(&m[rows[0]][cols[0]] * &m[rows[1]][cols[1]]) - &(&m[rows[0]][cols[1]] * &m[rows[1]][cols[0]]);
    if (r + c).is_multiple_of(2) {
        d
    } else {
        -d
    }
}

pub(crate) fn adjugate3(m: &Mat3) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| cofactor(m, j, i)))
}

pub(crate) fn conic_matrix_det(conic: &Poly) -> FieldElement {
    det3(&conic_matrix(conic))
}

pub(crate) fn bilinear(m: &Mat3, a: &[FieldElement; 3], b: &[FieldElement; 3]) -> FieldElement {
    let mut acc = FieldElement::zero();
    for i in 0..3 {
        for j in 0..3 {
            acc += &(&(&a[i] * &m[i][j]) * &b[j]);
        }
    }
    acc
}

/// The dual conic (adjugate matrix), normalised to a primitive integer form
/// when rational. Fails on singular conics.
pub fn dual_conic(conic: &Poly) -> Result<Poly, PlaneError> {
    let m = conic_matrix(conic);
    if det3(&m).is_zero() {
        return Err(PlaneError::Degenerate("singular conic has no dual conic".into()));
    }
    Ok(conic_from_matrix(&adjugate3(&m)).primitive())
}

/// Determinant of `A + lambda B` as a polynomial in `lambda`.
pub(crate) fn pencil_determinant(a: &Mat3, b: &Mat3) -> UniPoly {
    let e: Vec<Vec<UniPoly>> =
        (0..3).map(|i| (0..3).map(|j| UniPoly::new(vec![a[i][j].clone(), b[i][j].clone()])).collect()).collect();
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| e[r0][c0].mul(&e[r1][c1]).sub(&e[r0][c1].mul(&e[r1][c0]));
    e[0][0]
        .mul(&minor(1, 2, 1, 2))
        .sub(&e[0][1].mul(&minor(1, 2, 0, 2)))
        .add(&e[0][2].mul(&minor(1, 2, 0, 1)))
}

/// The one-parameter family of conics tangent to four lines, stored on the
/// dual side: `base + t * degenerate` is the dual conic of the member with
/// parameter `t`, and `degenerate` is the line pair joining the two vertices
/// `l1 ^ l2` and `l3 ^ l4`, viewed as a degenerate dual conic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicPencil {
    lines: [[FieldElement; 3]; 4],
    base: Poly,
    degenerate: Poly,
}

impl ConicPencil {
    pub fn lines(&self) -> &[[FieldElement; 3]; 4] {
        &self.lines
    }

    /// Dual-plane conic vanishing at the four lines' coordinate vectors.
    pub fn base(&self) -> &Poly {
        &self.base
    }

    pub fn degenerate(&self) -> &Poly {
        &self.degenerate
    }

    pub fn member_dual(&self, t: &Rational) -> Poly {
        self.base.add(&self.degenerate.scale(&FieldElement::from_rational(t.clone())))
    }

    /// Equation of the member with parameter `t` in the original plane.
    pub fn member(&self, t: &Rational) -> Result<Poly, PlaneError> {
        dual_conic(&self.member_dual(t)).map_err(|_| {
            PlaneError::Degenerate(format!("pencil member at t = {} is a degenerate conic", crate::field::rational_to_string(t)))
        })
    }

    /// Finite parameters of singular members (the degenerate generator itself
    /// sits at infinity).
    pub fn degenerate_parameters(&self) -> Vec<Rational> {
        pencil_determinant(&conic_matrix(&self.base), &conic_matrix(&self.degenerate))
            .rational_roots()
            .expect("rational pencil")
    }
}

fn normalize_first_nonzero(v: &[FieldElement]) -> Vec<FieldElement> {
    let lead = v.iter().find(|c| !c.is_zero()).expect("nonzero vector").inv().expect("nonzero");
    v.iter().map(|c| c * &lead).collect()
}

/// Conics tangent to four lines in general position (pairwise distinct, no
/// three concurrent).
pub fn tangent_conic_pencil(lines: &[PlaneCurve; 4]) -> Result<ConicPencil, PlaneError> {
    let mut coords: Vec<[FieldElement; 3]> = Vec::with_capacity(4);
    for l in lines {
        let c = l
            .line_coefficients()
            .ok_or_else(|| PlaneError::Configuration(format!("{} is not a line", l.label())))?;
        coords.push(c);
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if is_zero_vec(&cross(&coords[i], &coords[j])) {
                return Err(PlaneError::Configuration(format!(
                    "lines not distinct: {} and {}",
                    lines[i].label(),
                    lines[j].label()
                )));
            }
            for k in j + 1..4 {
                let m: Mat3 = [coords[i].clone(), coords[j].clone(), coords[k].clone()];
                if det3(&m).is_zero() {
                    return Err(PlaneError::Configuration(format!(
                        "lines {}, {}, {} are concurrent",
                        lines[i].label(),
                        lines[j].label(),
                        lines[k].label()
                    )));
                }
            }
        }
    }
    let monomials = Poly::monomials_of_degree(3, 2);
    let rows: Vec<Vec<FieldElement>> = coords
        .iter()
        .map(|c| monomials.iter().map(|e| Poly::monomial(e.clone(), FieldElement::one()).eval(c)).collect())
        .collect();
    let conditions = ExactMatrix::from_rows(rows)?;
    let kernel = conditions.kernel();
    if kernel.len() != 2 {
        return Err(PlaneError::Degenerate(format!("tangency conditions have a {}-dimensional solution space", kernel.len())));
    }

    let vertex = |a: usize, b: usize| -> Vec<FieldElement> { normalize_first_nonzero(&cross(&coords[a], &coords[b])) };
    let degenerate = Poly::linear(&vertex(0, 1)).mul(&Poly::linear(&vertex(2, 3)));
    let q1 = degenerate.coefficients(2);
    let pivot = q1.iter().position(|c| !c.is_zero()).expect("nonzero");
    let other = kernel
        .iter()
        .find(|v| !Poly::from_coefficients(3, 2, v).expect("six").proportional_to(&degenerate))
        .expect("two-dimensional kernel");
    let factor = other[pivot].div(&q1[pivot])?;
    let reduced: Vec<FieldElement> = other.iter().zip(&q1).map(|(a, b)| a - &(b * &factor)).collect();
    let base = Poly::from_coefficients(3, 2, &normalize_first_nonzero(&reduced))?;
    for c in &coords {
        debug_assert!(degenerate.eval(c).is_zero() && base.eval(c).is_zero());
    }
    Ok(ConicPencil { lines: [0, 1, 2, 3].map(|i| coords[i].clone()), base, degenerate })
}

/// Rational parametrisation of a smooth conic by projection from a point on
/// it: `(s : t)` goes to the second intersection of the conic with the line
/// joining the base point to `s * w_a + t * w_b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicParametrization {
    base: ProjPoint,
    forms: [Poly; 3],
    base_parameter: (FieldElement, FieldElement),
}

impl ConicParametrization {
    pub fn base(&self) -> &ProjPoint {
        &self.base
    }

    /// Coordinate forms, quadratic in `(s, t)`.
    pub fn forms(&self) -> &[Poly; 3] {
        &self.forms
    }

    /// Parameter mapping to the base point.
    pub fn base_parameter(&self) -> &(FieldElement, FieldElement) {
        &self.base_parameter
    }

    pub fn point_at(&self, s: &FieldElement, t: &FieldElement) -> Result<ProjPoint, PlaneError> {
        let st = [s.clone(), t.clone()];
        ProjPoint::new([0, 1, 2].map(|i| self.forms[i].eval(&st)))
    }

    /// `f` restricted to the conic, as a binary form of degree `2 deg f`.
    pub fn pullback(&self, f: &Poly) -> BinaryForm {
        let d = f.total_degree().unwrap_or(0) as usize;
        BinaryForm::new(2 * d, f.compose(&self.forms).to_univariate_in_second())
    }
}

pub fn parametrize_conic(conic: &Poly, p: &ProjPoint) -> Result<ConicParametrization, PlaneError> {
    if conic.total_degree() != Some(2) {
        return Err(PlaneError::Degenerate("parametrisation needs a conic".into()));
    }
    let m = conic_matrix(conic);
    if det3(&m).is_zero() {
        return Err(PlaneError::Degenerate("cannot parametrise a singular conic".into()));
    }
    if !conic.eval(p.coords()).is_zero() {
        return Err(PlaneError::NotOnCurve(p.to_string(), conic.to_expr_string(&["x", "y", "z"])));
    }
    let k = p.leading_index();
    let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    let unit = |i: usize| -> [FieldElement; 3] {
        std::array::from_fn(|j| if i == j { FieldElement::one() } else { FieldElement::zero() })
    };
    let (wa, wb) = (unit(others[0]), unit(others[1]));
    let s = Poly::var(2, 0);
    let t = Poly::var(2, 1);
    let v: [Poly; 3] = std::array::from_fn(|i| s.scale(&wa[i]).add(&t.scale(&wb[i])));
    let q = conic.compose(&v);
    let pa = bilinear(&m, p.coords(), &wa);
    let pb = bilinear(&m, p.coords(), &wb);
    let b = s.scale(&pa).add(&t.scale(&pb));
    let two = FieldElement::from_int(2);
    let forms: [Poly; 3] = std::array::from_fn(|i| q.scale(&p.coords()[i]).sub(&b.mul(&v[i]).scale(&two)));
    Ok(ConicParametrization { base: p.clone(), forms, base_parameter: (pb, -pa) })
}

/// A rational point on a rational conic, by a search over small integer
/// values of two coordinates. `None` if nothing is found within `bound`.
pub fn rational_point_on_conic(conic: &Poly, bound: i64) -> Option<ProjPoint> {
    if !conic.is_rational() || conic.total_degree() != Some(2) {
        return None;
    }
    for h in 0..=bound {
        for a in -h..=h {
            for b in -h..=h {
                if a.abs().max(b.abs()) != h {
                    continue;
                }
                for k in [2usize, 1, 0] {
                    let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
                    let mut v: [Poly; 3] = std::array::from_fn(|_| Poly::zero(1));
                    v[others[0]] = Poly::constant(1, FieldElement::from_int(a));
                    v[others[1]] = Poly::constant(1, FieldElement::from_int(b));
                    v[k] = Poly::var(1, 0);
                    let f = conic.compose(&v);
                    let [c0, c1, c2] = [0u32, 1, 2].map(|e| f.coeff(&[e]));
                    let root = if c2.is_zero() {
                        if c1.is_zero() {
                            continue;
                        }
                        (-&c0).div(&c1).ok()
                    } else {
                        let disc = (&c1.square() - &(&(&c0 * &c2) * &FieldElement::from_int(4))).to_rational()?;
                        crate::field::rational_sqrt(&disc).and_then(|r| {
                            (&(-&c1) + &FieldElement::from_rational(r)).div(&(&c2 * &FieldElement::from_int(2))).ok()
                        })
                    };
                    if let Some(x) = root {
                        let mut coords: [FieldElement; 3] = std::array::from_fn(|_| FieldElement::zero());
                        coords[others[0]] = FieldElement::from_int(a);
                        coords[others[1]] = FieldElement::from_int(b);
                        coords[k] = x;
                        if let Ok(p) = ProjPoint::new(coords) {
                            return Some(p);
                        }
                    }
                }
            }
        }
    }
    None
}

/// Outcome of restricting a form to a conic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareRestriction {
    pub restricted: BinaryForm,
    /// Square root over the coefficient field, when one exists.
    pub root: Option<BinaryForm>,
    /// Every root of the restriction has even multiplicity (the geometric
    /// splitting criterion).
    pub even_multiplicities: bool,
}

impl SquareRestriction {
    pub fn is_square(&self) -> bool {
        self.root.is_some()
    }
}

pub fn restriction_is_square(f: &Poly, param: &ConicParametrization) -> Result<SquareRestriction, PlaneError> {
    let restricted = param.pullback(f);
    if restricted.is_zero() {
        return Err(PlaneError::RamifiedRestriction);
    }
    let root = restricted.sqrt();
    let even_multiplicities = restricted.has_only_even_roots();
    Ok(SquareRestriction { restricted, root, even_multiplicities })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::parse_rational;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn poly(c: [i64; 6]) -> Poly {
        Poly::from_coefficients(3, 2, &c.map(FieldElement::from_int)).unwrap()
    }

    fn unit_circle() -> Poly {
        poly([1, 0, 0, 1, 0, -1])
    }

    fn square_lines() -> [PlaneCurve; 4] {
        [
            PlaneCurve::line_from_ints("T1", 1, 0, -1).unwrap(),
            PlaneCurve::line_from_ints("T2", 1, 0, 1).unwrap(),
            PlaneCurve::line_from_ints("T3", 0, 1, -1).unwrap(),
            PlaneCurve::line_from_ints("T4", 0, 1, 1).unwrap(),
        ]
    }

    #[test]
    fn matrix_round_trip() {
        let c = poly([4, -4, 0, 4, 0, -3]);
        assert_eq!(conic_from_matrix(&conic_matrix(&c)), c);
        assert_eq!(conic_matrix_det(&c), FieldElement::from_int(-36));
    }

    #[test]
    fn dual_of_circle_is_circle() {
        assert_eq!(dual_conic(&unit_circle()).unwrap(), unit_circle());
        assert!(dual_conic(&poly([1, 0, 0, -1, 0, 0])).is_err());
    }

    #[test]
    fn pencil_of_square() {
        let pencil = tangent_conic_pencil(&square_lines()).unwrap();
        assert_eq!(pencil.base(), &unit_circle());
        assert_eq!(pencil.degenerate(), &poly([0, 1, 0, 0, 0, 0]));
        assert_eq!(pencil.member(&q("0")).unwrap(), unit_circle());
        assert_eq!(pencil.member(&q("1")).unwrap(), poly([4, -4, 0, 4, 0, -3]));
        assert_eq!(pencil.degenerate_parameters(), vec![q("-2"), q("2")]);
        assert!(pencil.member(&q("2")).is_err());
    }

    #[test]
    fn pencil_members_are_tangent_to_all_lines() {
        let lines = square_lines();
        let pencil = tangent_conic_pencil(&lines).unwrap();
        for t in ["1", "-1/3", "5/7"] {
            let member = pencil.member(&q(t)).unwrap();
            // tangency: the line's coordinate vector lies on the dual conic
            let dual = dual_conic(&member).unwrap();
            for l in &lines {
                assert!(dual.eval(&l.line_coefficients().unwrap()).is_zero());
            }
        }
    }

    #[test]
    fn pencil_configuration_errors() {
        let mut lines = square_lines();
        lines[1] = PlaneCurve::line_from_ints("T2", 2, 0, -2).unwrap();
        assert!(matches!(tangent_conic_pencil(&lines), Err(PlaneError::Configuration(m)) if m.contains("not distinct")));
        let mut lines = square_lines();
        lines[2] = PlaneCurve::line_from_ints("T3", 0, 1, 0).unwrap();
        lines[3] = PlaneCurve::line_from_ints("T4", 1, 1, -1).unwrap();
        assert!(matches!(tangent_conic_pencil(&lines), Err(PlaneError::Configuration(m)) if m.contains("concurrent")));
    }

    #[test]
    fn stereographic_parametrisation() {
        let p = ProjPoint::from_ints(1, 0, 1);
        let param = parametrize_conic(&unit_circle(), &p).unwrap();
        let names = ["s", "t"];
        let got: Vec<String> = param.forms().iter().map(|f| f.to_expr_string(&names)).collect();
        assert_eq!(got, ["s^2 - t^2", "2*s*t", "s^2 + t^2"]);
        let (s0, t0) = param.base_parameter();
        assert_eq!(&param.point_at(s0, t0).unwrap(), &p);
        assert!(parametrize_conic(&unit_circle(), &ProjPoint::from_ints(1, 1, 1)).is_err());
    }

    #[test]
    fn rational_points_found() {
        for c in [unit_circle(), poly([4, -4, 0, 4, 0, -3]), poly([1, 0, 0, 1, 0, -25])] {
            let p = rational_point_on_conic(&c, 8).unwrap();
            assert!(c.eval(p.coords()).is_zero());
        }
        // x^2 + y^2 + z^2 has no real points at all
        assert!(rational_point_on_conic(&poly([1, 0, 0, 1, 0, 1]), 6).is_none());
    }

    #[test]
    fn parametrise_member_through_tangency_point() {
        let h2 = poly([4, -4, 0, 4, 0, -3]);
        let p = ProjPoint::from_ints(2, 1, 2);
        let param = parametrize_conic(&h2, &p).unwrap();
        for f in param.forms() {
            assert_eq!(f.total_degree(), Some(2));
        }
        assert!(h2.compose(param.forms()).is_zero());
        let (s0, t0) = param.base_parameter();
        assert_eq!(&param.point_at(s0, t0).unwrap(), &p);
    }

    #[test]
    fn restriction_of_line_pairs() {
        let p = ProjPoint::from_ints(1, 0, 1);
        let param = parametrize_conic(&unit_circle(), &p).unwrap();
        let xz = poly([1, 0, 0, 0, 0, -1]);
        let yz = poly([0, 0, 0, 1, 0, -1]);
        let r = restriction_is_square(&xz.mul(&yz), &param).unwrap();
        assert_eq!(r.restricted.affine(), &UniPoly::from_ints(&[0, 0, 4, 0, -8, 0, 4]));
        assert_eq!(r.root.unwrap().affine(), &UniPoly::from_ints(&[0, 2, 0, -2]));
        assert!(r.even_multiplicities);
        // x^2 - z^2 alone restricts to -4 t^2: even roots, not a square over Q
        let r = restriction_is_square(&xz, &param).unwrap();
        assert!(r.root.is_none());
        assert!(r.even_multiplicities);
        assert_eq!(restriction_is_square(&unit_circle(), &param), Err(PlaneError::RamifiedRestriction));
    }

    proptest! {
        #[test]
        fn parametrisation_lands_on_conic(s in -20i64..20, t in -20i64..20, a in 1i64..5, b in 1i64..5) {
            prop_assume!(s != 0 || t != 0);
            // a x^2 + b y^2 - (a + b) z^2 passes through (1 : 1 : 1)
            let c = poly([a, 0, 0, b, 0, -(a + b)]);
            let param = parametrize_conic(&c, &ProjPoint::from_ints(1, 1, 1)).unwrap();
            let pt = param.point_at(&FieldElement::from_int(s), &FieldElement::from_int(t)).unwrap();
            prop_assert!(c.eval(pt.coords()).is_zero());
        }
    }
}
