//! Bicanonical sections of the cover through its nodes. Each node is a point
//! of the cover over a plane point `P` on a given sheet; a section
//! `q(x, y, z) + sum c_chi u_chi` is evaluated there exactly, and the kernel
//! of the resulting matrix is the space of sections through every node.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::cover::{BuildingData, CoverError, PluriSection};
use crate::field::{ExactMatrix, FieldElement, FieldError, Poly};
use crate::group::{Character, GroupElement};
use crate::plane::ProjPoint;
use crate::transport::{NodeInventory, PointTransport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BicanonicalError {
    #[error("expected a unique bicanonical curve through the nodes, found a {0}-dimensional space")]
    Falsified(usize),
    #[error("the section through the nodes is not a single radical: {0}")]
    NotARadical(String),
    #[error("unsupported evaluation at {0}: {1}")]
    Unsupported(String, String),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Which base-radical signs are flipped at which plane points. The default
/// takes the square root chosen by the field arithmetic everywhere.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SignConvention {
    pub flips: BTreeMap<ProjPoint, BTreeSet<Character>>,
}

/// A node as a point of the cover: a plane point and the values of every
/// `u_chi` on its sheet (the trivial character maps to 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheetPoint {
    pub node: usize,
    pub plane_point: ProjPoint,
    pub sheet: GroupElement,
    pub radicals: BTreeMap<Character, FieldElement>,
}

fn radicand_at(bd: &BuildingData, chi: &Character, p: &ProjPoint) -> Result<FieldElement, BicanonicalError> {
    let mut v = FieldElement::one();
    for i in bd.radical_indices(chi)? {
        v = &v * &bd.equation(i).eval(p.coords());
    }
    Ok(v)
}

fn shared_product(bd: &BuildingData, a: &Character, b: &Character, p: &ProjPoint) -> Result<FieldElement, BicanonicalError> {
    let mut v = FieldElement::one();
    for (i, (s, _)) in bd.branches().iter().enumerate() {
        if a.eval(s).map_err(CoverError::from)? == -1 && b.eval(s).map_err(CoverError::from)? == -1 {
            v = &v * &bd.equation(i + 1).eval(p.coords());
        }
    }
    Ok(v)
}

/// Values of `u_chi` at the base sheet over a plane point, for every `chi`
/// trivial on the inertia. Square roots are taken on a basis of those
/// characters; the rest follow from `u_a u_b = u_{ab} prod_{a, b = -1} d_sigma`
/// so the point lies on the cover.
pub fn base_radical_values(
    bd: &BuildingData,
    point: &PointTransport,
    convention: &SignConvention,
) -> Result<BTreeMap<Character, FieldElement>, BicanonicalError> {
    let p = &point.point.location;
    let flips = convention.flips.get(p);
    let mut span: BTreeMap<Character, FieldElement> = BTreeMap::new();
    span.insert(Character::trivial(bd.rank()), FieldElement::one());
    for chi in Character::all(bd.rank()) {
        if !chi.is_trivial_on(&point.inertia) || span.contains_key(&chi) {
            continue;
        }
        let r = radicand_at(bd, &chi, p)?;
        let q = r.to_rational().ok_or_else(|| {
            BicanonicalError::Unsupported(p.to_string(), format!("irrational radicand {} for {chi}", r.to_exact_string()))
        })?;
        let mut root = FieldElement::sqrt_of_rational(&q);
        if flips.is_some_and(|f| f.contains(&chi)) {
            root = -root;
        }
        let known: Vec<(Character, FieldElement)> = span.iter().map(|(c, v)| (*c, v.clone())).collect();
        for (psi, u) in known {
            let target = psi.product(&chi).map_err(CoverError::from)?;
            let value = (&u * &root).div(&shared_product(bd, &psi, &chi, p)?)?;
            span.insert(target, value);
        }
    }
    Ok(span)
}

/// One [`SheetPoint`] per node, in inventory order.
pub fn node_sheet_points(
    bd: &BuildingData,
    inventory: &NodeInventory,
    convention: &SignConvention,
) -> Result<Vec<SheetPoint>, BicanonicalError> {
    let mut bases: BTreeMap<ProjPoint, BTreeMap<Character, FieldElement>> = BTreeMap::new();
    for pt in inventory.node_points() {
        bases.insert(pt.point.location.clone(), base_radical_values(bd, pt, convention)?);
    }
    let mut out = Vec::new();
    for n in &inventory.nodes {
        let base = &bases[&n.plane_point];
        let mut radicals = BTreeMap::new();
        for chi in Character::all(bd.rank()) {
            let v = match base.get(&chi) {
                Some(u) if chi.eval(&n.sheet).map_err(CoverError::from)? == -1 => -u.clone(),
                Some(u) => u.clone(),
                None => FieldElement::zero(),
            };
            radicals.insert(chi, v);
        }
        out.push(SheetPoint { node: n.index, plane_point: n.plane_point.clone(), sheet: n.sheet, radicals });
    }
    Ok(out)
}

/// Rows are points, columns are sections.
pub fn evaluation_matrix(basis: &[PluriSection], points: &[SheetPoint]) -> Result<ExactMatrix, BicanonicalError> {
    let mut rows = Vec::with_capacity(points.len());
    for pt in points {
        let row = basis
            .iter()
            .map(|s| &s.plane_part().eval(pt.plane_point.coords()) * &pt.radicals[&s.character])
            .collect();
        rows.push(row);
    }
    Ok(ExactMatrix::from_rows(rows)?)
}

/// Restricts `f` to lines `(s + a t : b s + t : c s + d t)` until the
/// restriction keeps full degree and is squarefree; a reduced curve passes on
/// almost every line.
pub fn is_reduced_curve(f: &Poly) -> bool {
    let Some(deg) = f.total_degree() else { return false };
    if deg == 0 {
        return true;
    }
    let s = Poly::var(2, 0);
    let t = Poly::var(2, 1);
    let comb = |a: i64, b: i64| s.scale(&FieldElement::from_int(a)).add(&t.scale(&FieldElement::from_int(b)));
    for k in 0..64i64 {
        let (a, b, c, d) = (k % 4, (k / 4) % 4 - 1, (k / 16) + 1, k % 3 + 2);
        let g = f.compose(&[comb(1, a), comb(b, 1), comb(c, d)]).to_univariate_in_second();
        if g.degree() == Some(deg as usize) && g.is_squarefree() {
            return true;
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BicanonicalCertificate {
    pub basis_labels: Vec<String>,
    pub matrix: ExactMatrix,
    pub rank: usize,
    pub kernel_dimension: usize,
    pub kernel_vector: Vec<FieldElement>,
    /// Label of the single section spanning the kernel, e.g. `u7`.
    pub section: String,
    pub character: Character,
    pub radicand: String,
    pub radicand_reduced: bool,
    /// Rank of the columns of the plane quadrics.
    pub quadric_rank: usize,
    pub zero_columns: Vec<String>,
}

/// Bicanonical sections through all nodes; exactly one is expected, a single
/// radical `u_chi` whose radicand is reduced.
pub fn unique_bicanonical_through_nodes(
    bd: &BuildingData,
    inventory: &NodeInventory,
    convention: &SignConvention,
) -> Result<BicanonicalCertificate, BicanonicalError> {
    let basis = bd.pluricanonical_basis(2)?;
    let points = node_sheet_points(bd, inventory, convention)?;
    let matrix = evaluation_matrix(&basis, &points)?;
    let kernel = matrix.kernel();
    if kernel.len() != 1 {
        return Err(BicanonicalError::Falsified(kernel.len()));
    }
    let v = kernel.into_iter().next().expect("one kernel vector");
    let support: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
    let section = match support.as_slice() {
        [i] if basis[*i].radical.is_some() && basis[*i].monomial.iter().all(|&e| e == 0) => &basis[*i],
        _ => {
            let terms: Vec<String> = support.iter().map(|&i| format!("{}*{}", v[i], basis[i].label())).collect();
            return Err(BicanonicalError::NotARadical(terms.join(" + ")));
        }
    };
    let radical = section.radical.clone().expect("checked above");
    let mut radicand = Poly::constant(3, FieldElement::one());
    for &i in &radical.indices {
        radicand = radicand.mul(bd.equation(i));
    }
    let scale = v[support[0]].inv()?;
    let kernel_vector = v.iter().map(|x| x * &scale).collect();
    let quadric_cols: Vec<usize> = (0..basis.len()).filter(|&i| basis[i].radical.is_none()).collect();
    let zero_columns = (0..basis.len())
        .filter(|&c| matrix.column(c).iter().all(FieldElement::is_zero))
        .map(|c| basis[c].label())
        .collect();
    Ok(BicanonicalCertificate {
        basis_labels: basis.iter().map(PluriSection::label).collect(),
        rank: matrix.rank(),
        quadric_rank: matrix.select_columns(&quadric_cols).rank(),
        kernel_dimension: 1,
        kernel_vector,
        section: radical.label.clone(),
        character: radical.character,
        radicand: radical.radicand_label(),
        radicand_reduced: is_reduced_curve(&radicand),
        zero_columns,
        matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::BuildingData;
    use crate::field::Tower;
    use crate::plane::PlaneCurve;
    use crate::transport::node_inventory;
    use proptest::prelude::*;

    fn el(s: &str) -> GroupElement {
        GroupElement::parse(3, s).unwrap()
    }

    fn square_data() -> BuildingData {
        let h1 = PlaneCurve::conic_from_ints("H1", [1, 0, 0, 1, 0, -1]).unwrap();
        let h2 = PlaneCurve::conic_from_ints("H2", [4, -4, 0, 4, 0, -3]).unwrap();
        let t = |l, a, b, c| PlaneCurve::line_from_ints(l, a, b, c).unwrap();
        let d3 = PlaneCurve::union("D3", &[&t("T1", 1, 0, -1), &t("T2", 1, 0, 1)]).unwrap();
        let d4 = PlaneCurve::union("D4", &[&t("T3", 0, 1, -1), &t("T4", 0, 1, 1)]).unwrap();
        BuildingData::new(3, vec![(el("xyz"), h1), (el("z"), h2), (el("y"), d3), (el("x"), d4)]).unwrap()
    }

    fn setup() -> (BuildingData, NodeInventory) {
        let bd = square_data();
        let arr = bd.branch_arrangement(&mut Tower::rationals()).unwrap();
        let inv = node_inventory(&bd, &arr).unwrap();
        (bd, inv)
    }

    #[test]
    fn unique_curve_is_u7() {
        let (bd, inv) = setup();
        let cert = unique_bicanonical_through_nodes(&bd, &inv, &SignConvention::default()).unwrap();
        assert_eq!((cert.matrix.rows(), cert.matrix.cols()), (24, 12));
        assert_eq!(cert.rank, 11);
        assert_eq!(cert.section, "u7");
        assert_eq!(cert.radicand, "d3*d4");
        assert!(cert.radicand_reduced);
        assert_eq!(cert.quadric_rank, 6);
        assert_eq!(cert.zero_columns, vec!["u7".to_string()]);
    }

    #[test]
    fn sheet_points_lie_on_the_cover() {
        // oracle: u_chi^2 equals the radicand wherever u_chi is defined
        let (bd, inv) = setup();
        for sp in node_sheet_points(&bd, &inv, &SignConvention::default()).unwrap() {
            for (chi, u) in &sp.radicals {
                if chi.is_trivial() {
                    assert!(u.is_one());
                    continue;
                }
                assert_eq!(u.square(), radicand_at(&bd, chi, &sp.plane_point).unwrap(), "{chi} at {}", sp.plane_point);
            }
            for (a, ua) in &sp.radicals {
                for (b, ub) in &sp.radicals {
                    let ab = a.product(b).unwrap();
                    let lhs = ua * ub;
                    let rhs = &sp.radicals[&ab] * &shared_product(&bd, a, b, &sp.plane_point).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn reducedness_oracle() {
        let x = Poly::var(3, 0);
        let y = Poly::var(3, 1);
        assert!(is_reduced_curve(&x.mul(&y)));
        assert!(!is_reduced_curve(&x.mul(&x).mul(&y)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn sign_choices_permute_rows(mask in proptest::collection::vec(0u16..8, 6)) {
            let (bd, inv) = setup();
            let plain = unique_bicanonical_through_nodes(&bd, &inv, &SignConvention::default()).unwrap();
            let mut conv = SignConvention::default();
            for (k, pt) in inv.node_points().into_iter().enumerate() {
                let set: BTreeSet<Character> = Character::all(3)
                    .into_iter()
                    .filter(|c| !c.is_trivial() && mask[k % mask.len()] & (1 << (c.bits() % 3)) != 0)
                    .collect();
                conv.flips.insert(pt.point.location.clone(), set);
            }
            let flipped = unique_bicanonical_through_nodes(&bd, &inv, &conv).unwrap();
            prop_assert_eq!(&flipped.section, &plain.section);
            prop_assert_eq!(flipped.rank, plain.rank);
            let mut a = plain.matrix.to_string_rows();
            let mut b = flipped.matrix.to_string_rows();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }
}
