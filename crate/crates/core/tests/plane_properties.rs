//! Properties of the plane layer: arrangement types survive a rational change
//! of coordinates, and every smooth member of the tangent pencil touches each
//! of the four lines.

use num_rational::BigRational;
use proptest::prelude::*;
use z2cover_core::field::{FieldElement, Poly, Tower};
use z2cover_core::plane::{classify_arrangement_singularities, tangent_conic_pencil, AdeType, PlaneCurve};

fn fe(n: i64) -> FieldElement {
    FieldElement::from_int(n)
}

fn linear(row: [i64; 3]) -> Poly {
    Poly::linear(&row.map(fe))
}

fn det3(m: &[[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn default_curves() -> Vec<Poly> {
    let lines = [[1, 0, -1], [1, 0, 1], [0, 1, -1], [0, 1, 1]].map(linear);
    let (x, y, z) = (Poly::var(3, 0), Poly::var(3, 1), Poly::var(3, 2));
    let h1 = x.mul(&x).add(&y.mul(&y)).sub(&z.mul(&z));
    let h2 = h1.scale(&fe(4)).sub(&x.mul(&y).scale(&fe(4))).add(&z.mul(&z));
    let mut out = vec![h1, h2];
    out.extend(lines);
    out
}

fn as_curves(polys: &[Poly]) -> Vec<PlaneCurve> {
    let c = |l: &str, p: &Poly| PlaneCurve::component(l, p.clone()).unwrap();
    let t: Vec<PlaneCurve> = ["T1", "T2", "T3", "T4"].iter().zip(&polys[2..]).map(|(l, p)| c(l, p)).collect();
    vec![
        c("H1", &polys[0]),
        c("H2", &polys[1]),
        PlaneCurve::union("D3", &[&t[0], &t[1]]).unwrap(),
        PlaneCurve::union("D4", &[&t[2], &t[3]]).unwrap(),
    ]
}

fn cross(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// `(s p + t q)` for two points spanning the line `l`.
fn line_parametrisation(l: [i64; 3]) -> [Poly; 3] {
    let mut pts = [[1, 0, 0], [0, 1, 0], [0, 0, 1]].map(|e| cross(l, e)).into_iter().filter(|p| p != &[0, 0, 0]);
    let p = pts.next().unwrap();
    let q = pts.find(|q| cross(p, *q) != [0, 0, 0]).unwrap();
    let (s, t) = (Poly::var(2, 0), Poly::var(2, 1));
    [0, 1, 2].map(|i| s.scale(&fe(p[i])).add(&t.scale(&fe(q[i]))))
}

fn tangent_to(conic: &Poly, l: [i64; 3]) -> bool {
    let r = conic.compose(&line_parametrisation(l));
    let a = r.coeff(&[2, 0]);
    let b = r.coeff(&[1, 1]);
    let c = r.coeff(&[0, 2]);
    (&(&b * &b) - &(&fe(4) * &(&a * &c))).is_zero()
}

fn general_lines() -> impl Strategy<Value = [[i64; 3]; 4]> {
    proptest::array::uniform4(proptest::array::uniform3(-4i64..=4)).prop_filter("general position", |ls| {
        ls.iter().all(|l| l != &[0, 0, 0])
            && (0..4).all(|i| (i + 1..4).all(|j| cross(ls[i], ls[j]) != [0, 0, 0]))
            && (0..4).all(|i| (i + 1..4).all(|j| (j + 1..4).all(|k| det3(&[ls[i], ls[j], ls[k]]) != 0)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn arrangement_is_stable_under_coordinate_change(
        m in proptest::array::uniform3(proptest::array::uniform3(-2i64..=2)).prop_filter("invertible", |m| det3(m) != 0)
    ) {
        let subs = m.map(linear);
        let moved: Vec<Poly> = default_curves().iter().map(|f| f.compose(&subs)).collect();
        let arr = classify_arrangement_singularities(&as_curves(&moved), &mut Tower::rationals()).unwrap();
        prop_assert_eq!(arr.count(AdeType::A3), 8);
        prop_assert_eq!(arr.count(AdeType::A1), 10);
        prop_assert!(arr.bezout.iter().all(|b| b.holds()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pencil_members_touch_every_line(lines in general_lines(), num in -20i64..=20, den in 1i64..=5) {
        let curves: Vec<PlaneCurve> = lines.iter().enumerate()
            .map(|(i, l)| PlaneCurve::line_from_ints(format!("T{}", i + 1), l[0], l[1], l[2]).unwrap())
            .collect();
        let pencil = tangent_conic_pencil(&curves.try_into().unwrap()).unwrap();
        let t = BigRational::new(num.into(), den.into());
        prop_assume!(!pencil.degenerate_parameters().contains(&t));
        let member = pencil.member(&t).unwrap();
        for l in lines {
            prop_assert!(tangent_to(&member, l), "member at {} not tangent to {:?}", t, l);
        }
    }
}

#[test]
fn default_pencil_member_is_tangent() {
    let lines = [[1, 0, -1], [1, 0, 1], [0, 1, -1], [0, 1, 1]];
    for f in &default_curves()[..2] {
        for l in lines {
            assert!(tangent_to(f, l));
        }
    }
}
