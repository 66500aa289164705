use std::collections::BTreeMap;
use std::fmt;

use crate::field::Tower;

use super::intersect::{component_intersections, intersection_multiplicity};
use super::{PlaneCurve, PlaneError, ProjPoint};

/// An irreducible component of one of the input curves.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentRef {
    /// Index of the input curve.
    pub curve: usize,
    /// Index of the factor within that curve.
    pub factor: usize,
    pub label: String,
    pub degree: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AdeType {
    A1,
    A3,
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AdeType::A1 => "A1",
            AdeType::A3 => "A3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LocalType {
    /// Two transverse branches of the same input curve.
    Node,
    /// Two transverse branches belonging to different input curves.
    TransversePair,
    /// Two simply tangent branches.
    Tacnode,
}

impl LocalType {
    pub fn ade(self) -> AdeType {
        match self {
            LocalType::Node | LocalType::TransversePair => AdeType::A1,
            LocalType::Tacnode => AdeType::A3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LocalType::Node => "node",
            LocalType::TransversePair => "transverse-pair",
            LocalType::Tacnode => "tacnode",
        }
    }
}

/// A singular point of the union of the input curves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrangementPoint {
    pub location: ProjPoint,
    pub branches: [ComponentRef; 2],
    /// Local intersection multiplicity of the two branches.
    pub contact: u32,
    pub local_type: LocalType,
}

impl ArrangementPoint {
    pub fn ade(&self) -> AdeType {
        self.local_type.ade()
    }

    pub fn lies_on_curve(&self, curve: usize) -> bool {
        self.branches.iter().any(|b| b.curve == curve)
    }

    pub fn lies_on_component(&self, label: &str) -> bool {
        self.branches.iter().any(|b| b.label == label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BezoutEntry {
    pub first: String,
    pub second: String,
    pub total: u32,
    pub expected: u32,
}

impl BezoutEntry {
    pub fn holds(&self) -> bool {
        self.total == self.expected
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    pub components: Vec<ComponentRef>,
    /// Sorted by location.
    pub points: Vec<ArrangementPoint>,
    pub bezout: Vec<BezoutEntry>,
}

impl Arrangement {
    pub fn count(&self, ade: AdeType) -> usize {
        self.points.iter().filter(|p| p.ade() == ade).count()
    }

    pub fn point_at(&self, p: &ProjPoint) -> Option<&ArrangementPoint> {
        self.points.iter().find(|a| &a.location == p)
    }
}

/// Finds and classifies the singular points of the union of `curves`.
///
/// Only transverse double points and simple tangencies between two smooth
/// branches are supported; a point on three or more components, or a higher
/// contact, is an error. Square roots needed for the coordinates are adjoined
/// to `tower`.
pub fn classify_arrangement_singularities(
    curves: &[PlaneCurve],
    tower: &mut Tower,
) -> Result<Arrangement, PlaneError> {
    let mut components = Vec::new();
    let mut pieces = Vec::new();
    for (ci, curve) in curves.iter().enumerate() {
        for (fi, (label, f)) in curve.factors().iter().enumerate() {
            let piece = PlaneCurve::component(label.clone(), f.clone())?;
            components.push(ComponentRef { curve: ci, factor: fi, label: label.clone(), degree: piece.degree() });
            pieces.push(piece);
        }
    }
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            if pieces[i].equation().proportional_to(pieces[j].equation()) {
                return Err(PlaneError::CommonComponent(components[i].label.clone(), components[j].label.clone()));
            }
        }
    }

    let mut incidences: BTreeMap<ProjPoint, Vec<(usize, usize, u32)>> = BTreeMap::new();
    let mut bezout = Vec::new();
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            let pts = component_intersections(&pieces[i], &pieces[j], tower)?;
            let mut total = 0;
            for p in pts {
                let m = intersection_multiplicity(&pieces[i], &pieces[j], &p)?;
                total += m;
                incidences.entry(p).or_default().push((i, j, m));
            }
            let expected = components[i].degree * components[j].degree;
            bezout.push(BezoutEntry {
                first: components[i].label.clone(),
                second: components[j].label.clone(),
                total,
                expected,
            });
            if total != expected {
                return Err(PlaneError::Bezout(components[i].label.clone(), components[j].label.clone(), total, expected));
            }
        }
    }

    let mut points = Vec::new();
    for (location, pairs) in incidences {
        let mut involved: Vec<usize> = pairs.iter().flat_map(|&(i, j, _)| [i, j]).collect();
        involved.sort();
        involved.dedup();
        if involved.len() > 2 {
            return Err(PlaneError::TriplePoint {
                point: location.to_string(),
                count: involved.len(),
                components: involved.iter().map(|&k| components[k].label.as_str()).collect::<Vec<_>>().join(", "),
            });
        }
        let (i, j, contact) = pairs[0];
        let local_type = match contact {
            1 if components[i].curve == components[j].curve => LocalType::Node,
            1 => LocalType::TransversePair,
            2 => LocalType::Tacnode,
            m => {
                return Err(PlaneError::HigherContact(
                    components[i].label.clone(),
                    components[j].label.clone(),
                    m,
                    location.to_string(),
                ))
            }
        };
        points.push(ArrangementPoint {
            location,
            branches: [components[i].clone(), components[j].clone()],
            contact,
            local_type,
        });
    }
    Ok(Arrangement { components, points, bezout })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn octic_parts() -> Vec<PlaneCurve> {
        vec![
            PlaneCurve::conic_from_ints("H1", [1, 0, 0, 1, 0, -1]).unwrap(),
            PlaneCurve::conic_from_ints("H2", [4, -4, 0, 4, 0, -3]).unwrap(),
            PlaneCurve::line_from_ints("T1", 1, 0, -1).unwrap(),
            PlaneCurve::line_from_ints("T2", 1, 0, 1).unwrap(),
            PlaneCurve::line_from_ints("T3", 0, 1, -1).unwrap(),
            PlaneCurve::line_from_ints("T4", 0, 1, 1).unwrap(),
        ]
    }

    #[test]
    fn octic_has_eight_tacnodes_and_ten_nodes() {
        let mut tower = Tower::rationals();
        let arr = classify_arrangement_singularities(&octic_parts(), &mut tower).unwrap();
        assert_eq!(arr.count(AdeType::A3), 8);
        assert_eq!(arr.count(AdeType::A1), 10);
        assert_eq!(arr.bezout.len(), 15);
        assert!(arr.bezout.iter().all(BezoutEntry::holds));
        let mut gens = tower.generator_strings();
        gens.sort();
        assert_eq!(tower.degree(), 4, "{gens:?}");
        assert!(tower.contains_sqrt(&crate::field::parse_rational("2").unwrap()));
        assert!(tower.contains_sqrt(&crate::field::parse_rational("3").unwrap()));
    }

    #[test]
    fn grouped_curves_distinguish_nodes() {
        let p = octic_parts();
        let d3 = PlaneCurve::union("D3", &[&p[2], &p[3]]).unwrap();
        let d4 = PlaneCurve::union("D4", &[&p[4], &p[5]]).unwrap();
        let curves = vec![p[0].relabel("D1"), p[1].relabel("D2"), d3, d4];
        let mut tower = Tower::rationals();
        let arr = classify_arrangement_singularities(&curves, &mut tower).unwrap();
        let nodes: Vec<_> = arr.points.iter().filter(|q| q.local_type == LocalType::Node).collect();
        assert_eq!(nodes.len(), 2);
        assert!(nodes.iter().any(|q| q.location == ProjPoint::from_ints(0, 1, 0)));
        assert!(nodes.iter().any(|q| q.location == ProjPoint::from_ints(1, 0, 0)));
        assert_eq!(arr.points.iter().filter(|q| q.local_type == LocalType::TransversePair).count(), 8);
    }

    #[test]
    fn triple_point_rejected() {
        let curves = vec![
            PlaneCurve::line_from_ints("a", 1, 0, 0).unwrap(),
            PlaneCurve::line_from_ints("b", 0, 1, 0).unwrap(),
            PlaneCurve::line_from_ints("c", 1, 1, 0).unwrap(),
        ];
        let mut tower = Tower::rationals();
        assert!(matches!(
            classify_arrangement_singularities(&curves, &mut tower),
            Err(PlaneError::TriplePoint { count: 3, .. })
        ));
    }

    #[test]
    fn higher_contact_rejected() {
        let curves = vec![
            PlaneCurve::conic_from_ints("A", [1, 0, 0, 0, -1, 0]).unwrap(),
            PlaneCurve::conic_from_ints("B", [1, 0, 0, 1, -1, 0]).unwrap(),
        ];
        let mut tower = Tower::rationals();
        assert!(matches!(
            classify_arrangement_singularities(&curves, &mut tower),
            Err(PlaneError::HigherContact(_, _, 4, _))
        ));
    }
}
