use crate::field::{BinaryForm, FieldElement, Poly, Rational, Tower};

use super::conic::{conic_matrix, det3, parametrize_conic, pencil_determinant, Mat3};
use super::point::{cross, is_zero_vec};
use super::{PlaneCurve, PlaneError, ProjPoint};

fn unit(i: usize) -> [FieldElement; 3] {
    std::array::from_fn(|j| if i == j { FieldElement::one() } else { FieldElement::zero() })
}

/// Two distinct points spanning the line with coefficients `l`.
fn line_points(l: &[FieldElement; 3]) -> ([FieldElement; 3], [FieldElement; 3]) {
    let cands: Vec<[FieldElement; 3]> = (0..3).map(|i| cross(l, &unit(i))).filter(|p| !is_zero_vec(p)).collect();
    let p = cands[0].clone();
    let q = cands[1..].iter().find(|q| !is_zero_vec(&cross(&p, q))).expect("line spans two points").clone();
    (p, q)
}

/// `(s : t)` with `x = s p + t q`, for `x` on the line through `p` and `q`.
fn line_parameter(p: &[FieldElement; 3], q: &[FieldElement; 3], x: &[FieldElement; 3]) -> (FieldElement, FieldElement) {
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let d = &(&p[i] * &q[j]) - &(&p[j] * &q[i]);
        if !d.is_zero() {
            let s = &(&x[i] * &q[j]) - &(&x[j] * &q[i]);
            let t = &(&p[i] * &x[j]) - &(&p[j] * &x[i]);
            return (s, t);
        }
    }
    unreachable!("p and q are independent")
}

fn line_forms(p: &[FieldElement; 3], q: &[FieldElement; 3]) -> [Poly; 3] {
    let s = Poly::var(2, 0);
    let t = Poly::var(2, 1);
    std::array::from_fn(|i| s.scale(&p[i]).add(&t.scale(&q[i])))
}

/// Distinct roots `(s : t)` of `a s^2 + b s t + c t^2` (not identically zero),
/// adjoining the discriminant's square root to `tower`.
fn binary_quadratic_roots(
    a: &FieldElement,
    b: &FieldElement,
    c: &FieldElement,
    tower: &mut Tower,
) -> Result<Vec<(FieldElement, FieldElement)>, PlaneError> {
    if a.is_zero() {
        let mut out = vec![(FieldElement::one(), FieldElement::zero())];
        if !b.is_zero() {
            out.push((c.clone(), -b));
        }
        return Ok(out);
    }
    let disc = &b.square() - &(&(a * c) * &FieldElement::from_int(4));
    let two_a = a * &FieldElement::from_int(2);
    if disc.is_zero() {
        return Ok(vec![((-b).div(&two_a)?, FieldElement::one())]);
    }
    let d = disc
        .to_rational()
        .ok_or_else(|| PlaneError::Unsupported(format!("square root of irrational discriminant {disc}")))?;
    let root = tower.adjoin_sqrt(&d)?;
    Ok(vec![
        ((&(-b) + &root).div(&two_a)?, FieldElement::one()),
        ((&(-b) - &root).div(&two_a)?, FieldElement::one()),
    ])
}

fn single_factor(c: &PlaneCurve) -> Result<&Poly, PlaneError> {
    match c.factors() {
        [(_, f)] => Ok(f),
        _ => Err(PlaneError::UnsupportedComponent(c.label().into(), "expected an irreducible component".into())),
    }
}

/// Intersection points of two irreducible components (lines or smooth
/// conics).
pub fn component_intersections(
    a: &PlaneCurve,
    b: &PlaneCurve,
    tower: &mut Tower,
) -> Result<Vec<ProjPoint>, PlaneError> {
    let (f, g) = (single_factor(a)?, single_factor(b)?);
    if f.proportional_to(g) {
        return Err(PlaneError::CommonComponent(a.label().into(), b.label().into()));
    }
    let mut points = match (a.line_coefficients(), b.line_coefficients()) {
        (Some(l), Some(m)) => vec![ProjPoint::new(cross(&l, &m))?],
        (Some(l), None) => line_conic(&l, g, tower)?,
        (None, Some(m)) => line_conic(&m, f, tower)?,
        (None, None) => conic_conic(f, g, tower)?,
    };
    points.sort();
    points.dedup();
    for p in &points {
        if !f.eval(p.coords()).is_zero() || !g.eval(p.coords()).is_zero() {
            return Err(PlaneError::Unsupported(format!("intersection of {} and {} produced a stray point {p}", a.label(), b.label())));
        }
    }
    Ok(points)
}

fn line_conic(l: &[FieldElement; 3], conic: &Poly, tower: &mut Tower) -> Result<Vec<ProjPoint>, PlaneError> {
    let (p, q) = line_points(l);
    let restricted = conic.compose(&line_forms(&p, &q));
    let [a, b, c] = [[2u32, 0], [1, 1], [0, 2]].map(|e| restricted.coeff(&e));
    binary_quadratic_roots(&a, &b, &c, tower)?
        .into_iter()
        .map(|(s, t)| ProjPoint::new(std::array::from_fn(|i| &(&s * &p[i]) + &(&t * &q[i]))))
        .collect()
}

/// The two lines making up a singular conic with rational matrix `m`.
fn split_degenerate(m: &Mat3, tower: &mut Tower) -> Result<[[FieldElement; 3]; 2], PlaneError> {
    let rows: Vec<Vec<FieldElement>> = m.iter().map(|r| r.to_vec()).collect();
    let matrix = crate::field::ExactMatrix::from_rows(rows)?;
    match matrix.rank() {
        1 => {
            let row = m.iter().find(|r| !is_zero_vec(r)).expect("rank one").clone();
            Ok([row.clone(), row])
        }
        2 => {
            let kernel = matrix.kernel();
            let vertex: [FieldElement; 3] = std::array::from_fn(|i| kernel[0][i].clone());
            let k = vertex.iter().position(|c| !c.is_zero()).expect("nonzero kernel");
            let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
            let (i, j) = (others[0], others[1]);
            let roots = binary_quadratic_roots(
                &m[i][i],
                &(&m[i][j] * &FieldElement::from_int(2)),
                &m[j][j],
                tower,
            )?;
            if roots.len() != 2 {
                return Err(PlaneError::Degenerate("rank-two conic meets a transversal in one point".into()));
            }
            let line = |(s, t): &(FieldElement, FieldElement)| {
                let mut q: [FieldElement; 3] = std::array::from_fn(|_| FieldElement::zero());
                q[i] = s.clone();
                q[j] = t.clone();
                cross(&vertex, &q)
            };
            Ok([line(&roots[0]), line(&roots[1])])
        }
        r => Err(PlaneError::Degenerate(format!("expected a singular conic, got rank {r}"))),
    }
}

/// Conic-conic intersection through the rational singular members of the
/// pencil they span: two such members give the points as intersections of
/// their lines; a single one must split over the rationals and its lines are
/// intersected with `f` directly.
fn conic_conic(f: &Poly, g: &Poly, tower: &mut Tower) -> Result<Vec<ProjPoint>, PlaneError> {
    let (a, b) = (conic_matrix(f), conic_matrix(g));
    let unsupported = || PlaneError::Unsupported("conic pair whose pencil lacks a rational singular member splitting over the field".into());
    let roots = pencil_determinant(&a, &b).rational_roots().ok_or_else(unsupported)?;
    let member = |lambda: &Rational| -> Mat3 {
        let l = FieldElement::from_rational(lambda.clone());
        std::array::from_fn(|i| std::array::from_fn(|j| &a[i][j] + &(&l * &b[i][j])))
    };
    let mut out = Vec::new();
    match roots.as_slice() {
        [] => return Err(unsupported()),
        [only] => {
            let m = member(only);
            debug_assert!(det3(&m).is_zero());
            for l in split_degenerate(&m, tower)? {
                if !l.iter().all(FieldElement::is_rational) {
                    return Err(unsupported());
                }
                out.extend(line_conic(&l, f, tower)?);
            }
        }
        [first, second, ..] => {
            let pair1 = split_degenerate(&member(first), tower)?;
            let pair2 = split_degenerate(&member(second), tower)?;
            for l in &pair1 {
                for m in &pair2 {
                    let x = cross(l, m);
                    if is_zero_vec(&x) {
                        return Err(PlaneError::Degenerate("singular pencil members share a line".into()));
                    }
                    out.push(ProjPoint::new(x)?);
                }
            }
        }
    }
    Ok(out)
}

fn component_multiplicity(
    (la, f): (&str, &Poly),
    (lb, g): (&str, &Poly),
    p: &ProjPoint,
) -> Result<u32, PlaneError> {
    if !f.eval(p.coords()).is_zero() || !g.eval(p.coords()).is_zero() {
        return Ok(0);
    }
    let infinite = || PlaneError::InfiniteMultiplicity(la.into(), lb.into());
    if f.proportional_to(g) {
        return Err(infinite());
    }
    let (form, s0, t0) = if f.total_degree() == Some(1) || g.total_degree() == Some(1) {
        let (line, other) = if f.total_degree() == Some(1) { (f, g) } else { (g, f) };
        let c = line.coefficients(1);
        let l = [c[0].clone(), c[1].clone(), c[2].clone()];
        let (pa, pb) = line_points(&l);
        let (s0, t0) = line_parameter(&pa, &pb, p.coords());
        let d = other.total_degree().unwrap_or(0) as usize;
        (BinaryForm::new(d, other.compose(&line_forms(&pa, &pb)).to_univariate_in_second()), s0, t0)
    } else {
        let param = parametrize_conic(f, p)?;
        let (s0, t0) = param.base_parameter().clone();
        (param.pullback(g), s0, t0)
    };
    if form.is_zero() {
        return Err(infinite());
    }
    Ok(form.order_at(&s0, &t0)? as u32)
}

/// Local intersection multiplicity of two curves at `p`, summed over their
/// components.
pub fn intersection_multiplicity(a: &PlaneCurve, b: &PlaneCurve, p: &ProjPoint) -> Result<u32, PlaneError> {
    let mut total = 0;
    for (la, f) in a.factors() {
        for (lb, g) in b.factors() {
            total += component_multiplicity((la, f), (lb, g), p)?;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn circle() -> PlaneCurve {
        PlaneCurve::conic_from_ints("H1", [1, 0, 0, 1, 0, -1]).unwrap()
    }

    fn h2() -> PlaneCurve {
        PlaneCurve::conic_from_ints("H2", [4, -4, 0, 4, 0, -3]).unwrap()
    }

    #[test]
    fn tangent_line_meets_once_with_multiplicity_two() {
        let t1 = PlaneCurve::line_from_ints("T1", 1, 0, -1).unwrap();
        let mut tower = Tower::rationals();
        let pts = component_intersections(&t1, &circle(), &mut tower).unwrap();
        assert_eq!(pts, vec![ProjPoint::from_ints(1, 0, 1)]);
        assert_eq!(intersection_multiplicity(&t1, &circle(), &pts[0]).unwrap(), 2);
        assert_eq!(tower.degree(), 1);
    }

    #[test]
    fn secant_line_needs_a_square_root() {
        let l = PlaneCurve::line_from_ints("L", 1, -1, 0).unwrap();
        let mut tower = Tower::rationals();
        let pts = component_intersections(&l, &circle(), &mut tower).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(tower.generator_strings(), vec!["2"]);
        for p in &pts {
            assert_eq!(intersection_multiplicity(&l, &circle(), p).unwrap(), 1);
        }
    }

    #[test]
    fn two_tangent_conics() {
        let mut tower = Tower::rationals();
        let pts = component_intersections(&circle(), &h2(), &mut tower).unwrap();
        assert_eq!(pts.len(), 4);
        let mut gens = tower.generator_strings();
        gens.sort();
        assert!(tower.degree() >= 4, "{gens:?}");
        for p in &pts {
            assert_eq!(intersection_multiplicity(&circle(), &h2(), p).unwrap(), 1);
            assert_eq!(intersection_multiplicity(&h2(), &circle(), p).unwrap(), 1);
        }
    }

    #[test]
    fn osculating_conics() {
        // y z = x^2 and y z = x^2 + y^2 meet at (0:0:1) with multiplicity 4
        let a = PlaneCurve::conic_from_ints("A", [1, 0, 0, 0, -1, 0]).unwrap();
        let b = PlaneCurve::conic_from_ints("B", [1, 0, 0, 1, -1, 0]).unwrap();
        let p = ProjPoint::from_ints(0, 0, 1);
        assert_eq!(intersection_multiplicity(&a, &b, &p).unwrap(), 4);
        let mut tower = Tower::rationals();
        assert_eq!(component_intersections(&a, &b, &mut tower).unwrap(), vec![p]);
    }

    #[test]
    fn common_component_is_infinite() {
        let t1 = PlaneCurve::line_from_ints("T1", 1, 0, -1).unwrap();
        let t1b = PlaneCurve::line_from_ints("T1b", 3, 0, -3).unwrap();
        let p = ProjPoint::from_ints(1, 0, 1);
        assert!(matches!(intersection_multiplicity(&t1, &t1b, &p), Err(PlaneError::InfiniteMultiplicity(..))));
        let mut tower = Tower::rationals();
        assert!(matches!(component_intersections(&t1, &t1b, &mut tower), Err(PlaneError::CommonComponent(..))));
    }

    #[test]
    fn off_curve_point_has_multiplicity_zero() {
        let p = ProjPoint::from_ints(0, 0, 1);
        assert_eq!(intersection_multiplicity(&circle(), &h2(), &p).unwrap(), 0);
    }

    #[test]
    fn unsupported_conic_pair_fails_loudly() {
        // det(H1 + l C) = -l^3 + l - 1 has no rational root
        let c = PlaneCurve::conic_from_ints("C", [0, 2, 0, 0, 2, 1]).unwrap();
        let mut tower = Tower::rationals();
        assert!(matches!(component_intersections(&circle(), &c, &mut tower), Err(PlaneError::Unsupported(_))));
    }

    proptest! {
        #[test]
        fn bezout_for_random_lines_and_circle(a in -6i64..6, b in -6i64..6, c in -6i64..6) {
            prop_assume!(a != 0 || b != 0 || c != 0);
            let l = PlaneCurve::line_from_ints("L", a, b, c).unwrap();
            let mut tower = Tower::rationals();
            let pts = component_intersections(&l, &circle(), &mut tower).unwrap();
            let total: u32 = pts.iter().map(|p| intersection_multiplicity(&l, &circle(), p).unwrap()).sum();
            prop_assert_eq!(total, 2);
        }

        #[test]
        fn bezout_for_circle_pencils(lambda in -5i64..5, mu in 1i64..5) {
            // circle and the scaled ellipse through its points on x = +-y
            let other = PlaneCurve::conic_from_ints("E", [mu, 0, 0, 1 + lambda * lambda, 0, -(mu + lambda * lambda + 1)]);
            prop_assume!(other.is_ok());
            let other = other.unwrap();
            prop_assume!(!other.equation().proportional_to(circle().equation()));
            let mut tower = Tower::rationals();
            let pts = component_intersections(&circle(), &other, &mut tower).unwrap();
            let total: u32 = pts.iter().map(|p| intersection_multiplicity(&circle(), &other, p).unwrap()).sum();
            prop_assert_eq!(total, 4);
        }
    }
}
