use std::fmt;

use crate::field::{FieldElement, Poly, Rational};

use super::{conic::conic_matrix_det, PlaneError, ProjPoint};

const XYZ: [&str; 3] = ["x", "y", "z"];

/// A labelled reduced plane curve given by its irreducible factors, each a
/// line or a smooth conic.
#[derive(Clone, PartialEq, Eq)]
pub struct PlaneCurve {
    label: String,
    factors: Vec<(String, Poly)>,
    equation: Poly,
}

impl PlaneCurve {
    /// A single irreducible component (a line or a smooth conic).
    pub fn component(label: impl Into<String>, poly: Poly) -> Result<Self, PlaneError> {
        let label = label.into();
        check_component(&label, &poly)?;
        let poly = poly.primitive();
        Ok(Self { factors: vec![(label.clone(), poly.clone())], equation: poly, label })
    }

    /// The line `a x + b y + c z = 0`.
    pub fn line(label: impl Into<String>, coeffs: [Rational; 3]) -> Result<Self, PlaneError> {
        let c: Vec<FieldElement> = coeffs.into_iter().map(FieldElement::from_rational).collect();
        Self::component(label, Poly::from_coefficients(3, 1, &c)?)
    }

    pub fn line_from_ints(label: impl Into<String>, a: i64, b: i64, c: i64) -> Result<Self, PlaneError> {
        Self::line(label, [a, b, c].map(|n| Rational::from_integer(n.into())))
    }

    /// A conic from its coefficients on `x^2, xy, xz, y^2, yz, z^2`.
    pub fn conic(label: impl Into<String>, coeffs: [Rational; 6]) -> Result<Self, PlaneError> {
        let c: Vec<FieldElement> = coeffs.into_iter().map(FieldElement::from_rational).collect();
        Self::component(label, Poly::from_coefficients(3, 2, &c)?)
    }

    pub fn conic_from_ints(label: impl Into<String>, c: [i64; 6]) -> Result<Self, PlaneError> {
        Self::conic(label, c.map(|n| Rational::from_integer(n.into())))
    }

    /// The reduced union of `parts`. Fails if two parts share a component.
    pub fn union(label: impl Into<String>, parts: &[&PlaneCurve]) -> Result<Self, PlaneError> {
        let mut factors: Vec<(String, Poly)> = Vec::new();
        for part in parts {
            for (l, f) in &part.factors {
                if let Some((other, _)) = factors.iter().find(|(_, g)| g.proportional_to(f)) {
                    return Err(PlaneError::CommonComponent(other.clone(), l.clone()));
                }
                factors.push((l.clone(), f.clone()));
            }
        }
        if factors.is_empty() {
            return Err(PlaneError::Degenerate("empty union".into()));
        }
        let mut equation = Poly::constant(3, FieldElement::one());
        for (_, f) in &factors {
            equation = equation.mul(f);
        }
        Ok(Self { label: label.into(), factors, equation })
    }

    /// Same curve under another name.
    pub fn relabel(&self, label: impl Into<String>) -> Self {
        let label = label.into();
        let mut out = self.clone();
        if out.factors.len() == 1 {
            out.factors[0].0 = label.clone();
        }
        out.label = label;
        out
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn equation(&self) -> &Poly {
        &self.equation
    }

    pub fn factors(&self) -> &[(String, Poly)] {
        &self.factors
    }

    pub fn degree(&self) -> u32 {
        self.equation.total_degree().unwrap_or(0)
    }

    pub fn is_line(&self) -> bool {
        self.degree() == 1
    }

    pub fn eval(&self, p: &ProjPoint) -> FieldElement {
        self.equation.eval(p.coords())
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.eval(p).is_zero()
    }

    /// Linear-form coefficients of a line.
    pub fn line_coefficients(&self) -> Option<[FieldElement; 3]> {
        if !self.is_line() {
            return None;
        }
        let c = self.equation.coefficients(1);
        Some([c[0].clone(), c[1].clone(), c[2].clone()])
    }

    /// Factors pairwise non-proportional (always true for curves built through
    /// the constructors).
    pub fn is_reduced(&self) -> bool {
        self.factors
            .iter()
            .enumerate()
            .all(|(i, (_, f))| self.factors[i + 1..].iter().all(|(_, g)| !f.proportional_to(g)))
    }

    pub fn to_expr_string(&self) -> String {
        self.factors
            .iter()
            .map(|(_, f)| {
                let s = f.to_expr_string(&XYZ);
                if self.factors.len() > 1 {
                    format!("({s})")
                } else {
                    s
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

fn check_component(label: &str, poly: &Poly) -> Result<(), PlaneError> {
    if poly.nvars() != 3 || !poly.is_homogeneous() || poly.is_zero() {
        return Err(PlaneError::UnsupportedComponent(label.into(), "not a nonzero ternary form".into()));
    }
    match poly.total_degree() {
        Some(1) => Ok(()),
        Some(2) => {
            if conic_matrix_det(poly).is_zero() {
                Err(PlaneError::UnsupportedComponent(label.into(), "singular conic (give its lines separately)".into()))
            } else {
                Ok(())
            }
        }
        Some(d) => Err(PlaneError::UnsupportedComponent(label.into(), format!("degree {d} components are not supported"))),
        None => unreachable!("nonzero"),
    }
}

impl fmt::Debug for PlaneCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.label, self.to_expr_string())
    }
}
