//! Numerical classes on the minimal resolution of a nodal cover: the pullback
//! `F` of a line, the exceptional curves `A_1..A_n`, and auxiliary classes
//! declared with their pairing rows. Even sets of nodes are certified by an
//! identity `2H = 2W + sum_S A_i` audited against every available row.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::field::{rational_to_string, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("no pairing recorded between {0} and {1}")]
    MissingPairing(String, String),
    #[error("bad node subset: {0}")]
    BadSubset(String),
    #[error("not integral: {0}")]
    NotIntegral(String),
    #[error("parity: {0}")]
    Parity(String),
    #[error("{certificate}: identity fails against {against} (residual pairing {residual})")]
    PairingMismatch { certificate: String, against: String, residual: String },
    #[error("inconsistent declaration: {0}")]
    Inconsistent(String),
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// An auxiliary class given by its pairings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeclaredClass {
    pub name: String,
    pub with_f: Rational,
    /// `with_nodes[i - 1]` pairs with `A_i`.
    pub with_nodes: Vec<Rational>,
    pub self_intersection: Rational,
    pub with_declared: BTreeMap<String, Rational>,
}

impl DeclaredClass {
    pub fn new(name: impl Into<String>, with_f: i64, with_nodes: Vec<i64>, self_intersection: i64) -> Self {
        Self {
            name: name.into(),
            with_f: q(with_f),
            with_nodes: with_nodes.into_iter().map(q).collect(),
            self_intersection: q(self_intersection),
            with_declared: BTreeMap::new(),
        }
    }

    pub fn pairs_with(mut self, other: &str, value: i64) -> Self {
        self.with_declared.insert(other.into(), q(value));
        self
    }
}

/// A rational combination `f F + sum a_i A_i + sum c_D D`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LatticeClass {
    pub f: Rational,
    pub nodes: BTreeMap<usize, Rational>,
    pub declared: BTreeMap<String, Rational>,
}

impl LatticeClass {
    pub fn zero() -> Self {
        Self { f: Rational::zero(), ..Default::default() }
    }

    pub fn f() -> Self {
        Self { f: Rational::one(), ..Self::zero() }
    }

    pub fn node(i: usize) -> Self {
        let mut c = Self::zero();
        c.nodes.insert(i, Rational::one());
        c
    }

    pub fn declared(name: &str) -> Self {
        let mut c = Self::zero();
        c.declared.insert(name.into(), Rational::one());
        c
    }

    /// `sum_{i in subset} A_i`.
    pub fn node_sum(subset: &[usize]) -> Self {
        subset.iter().fold(Self::zero(), |acc, &i| acc.add(&Self::node(i)))
    }

    fn prune(mut self) -> Self {
        self.nodes.retain(|_, v| !v.is_zero());
        self.declared.retain(|_, v| !v.is_zero());
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.f += &other.f;
        for (i, v) in &other.nodes {
            *out.nodes.entry(*i).or_insert_with(Rational::zero) += v;
        }
        for (n, v) in &other.declared {
            *out.declared.entry(n.clone()).or_insert_with(Rational::zero) += v;
        }
        out.prune()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            f: &self.f * c,
            nodes: self.nodes.iter().map(|(i, v)| (*i, v * c)).collect(),
            declared: self.declared.iter().map(|(n, v)| (n.clone(), v * c)).collect(),
        }
        .prune()
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&q(c))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale_int(-1))
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero() && self.nodes.is_empty() && self.declared.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.f.is_integer() && self.nodes.values().all(|v| v.is_integer()) && self.declared.values().all(|v| v.is_integer())
    }
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(Rational, String)> = Vec::new();
        if !self.f.is_zero() {
            terms.push((self.f.clone(), "F".into()));
        }
        for (n, v) in &self.declared {
            terms.push((v.clone(), n.clone()));
        }
        for (i, v) in &self.nodes {
            terms.push((v.clone(), format!("A{i}")));
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (v, name)) in terms.iter().enumerate() {
            let sign = if v.is_negative() { "-" } else if k > 0 { "+" } else { "" };
            let sep = if k > 0 { " " } else { "" };
            let mag = v.abs();
            if mag.is_one() {
                write!(f, "{sep}{sign}{}{name}", if k > 0 { " " } else { "" })?;
            } else {
                write!(f, "{sep}{sign}{}{}*{name}", if k > 0 { " " } else { "" }, rational_to_string(&mag))?;
            }
        }
        Ok(())
    }
}

/// The pairing table: `F^2`, `F.A_i = 0`, `A_i.A_j = -2 delta_ij`, plus the
/// declared rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    node_count: usize,
    f_squared: Rational,
    /// `K = canonical_f * F`, valid because nodes are crepant.
    canonical_f: Rational,
    declared: Vec<DeclaredClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Basis {
    F,
    Node(usize),
    Declared(String),
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::F => f.write_str("F"),
            Basis::Node(i) => write!(f, "A{i}"),
            Basis::Declared(n) => f.write_str(n),
        }
    }
}

fn expand(c: &LatticeClass) -> Vec<(Basis, Rational)> {
    let mut out = Vec::new();
    if !c.f.is_zero() {
        out.push((Basis::F, c.f.clone()));
    }
    out.extend(c.nodes.iter().map(|(i, v)| (Basis::Node(*i), v.clone())));
    out.extend(c.declared.iter().map(|(n, v)| (Basis::Declared(n.clone()), v.clone())));
    out
}

impl Lattice {
    pub fn new(node_count: usize, f_squared: i64, canonical_f: i64) -> Self {
        Self { node_count, f_squared: q(f_squared), canonical_f: q(canonical_f), declared: Vec::new() }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn declared_names(&self) -> Vec<&str> {
        self.declared.iter().map(|d| d.name.as_str()).collect()
    }

    pub fn canonical(&self) -> LatticeClass {
        LatticeClass::f().scale(&self.canonical_f)
    }

    /// Pullback of a plane curve of the given degree: `deg * F`.
    pub fn total_transform(&self, degree: u32) -> LatticeClass {
        LatticeClass::f().scale_int(degree as i64)
    }

    pub fn declare(&mut self, class: DeclaredClass) -> Result<(), LatticeError> {
        if class.name == "F" || class.name.starts_with('A') && class.name[1..].parse::<usize>().is_ok() {
            return Err(LatticeError::Inconsistent(format!("{} clashes with a basis name", class.name)));
        }
        if self.declared.iter().any(|d| d.name == class.name) {
            return Err(LatticeError::Inconsistent(format!("{} declared twice", class.name)));
        }
        if class.with_nodes.len() != self.node_count {
            return Err(LatticeError::Inconsistent(format!(
                "{} pairs with {} nodes, expected {}",
                class.name,
                class.with_nodes.len(),
                self.node_count
            )));
        }
        for d in &self.declared {
            if let (Some(a), Some(b)) = (class.with_declared.get(&d.name), d.with_declared.get(&class.name)) {
                if a != b {
                    return Err(LatticeError::Inconsistent(format!("{}.{} recorded twice with different values", class.name, d.name)));
                }
            }
        }
        self.declared.push(class);
        Ok(())
    }

    fn row(&self, name: &str) -> Option<&DeclaredClass> {
        self.declared.iter().find(|d| d.name == name)
    }

    fn pair(&self, a: &Basis, b: &Basis) -> Result<Rational, LatticeError> {
        let missing = || LatticeError::MissingPairing(a.to_string(), b.to_string());
        let node_ok = |i: &usize| if (1..=self.node_count).contains(i) { Ok(()) } else { Err(missing()) };
        match (a, b) {
            (Basis::F, Basis::F) => Ok(self.f_squared.clone()),
            (Basis::F, Basis::Node(i)) | (Basis::Node(i), Basis::F) => node_ok(i).map(|_| Rational::zero()),
            (Basis::Node(i), Basis::Node(j)) => {
                node_ok(i)?;
                node_ok(j)?;
                Ok(if i == j { q(-2) } else { Rational::zero() })
            }
            (Basis::Declared(n), other) | (other, Basis::Declared(n)) => {
                let row = self.row(n).ok_or_else(missing)?;
                match other {
                    Basis::F => Ok(row.with_f.clone()),
                    Basis::Node(i) => {
                        node_ok(i)?;
                        Ok(row.with_nodes[i - 1].clone())
                    }
                    Basis::Declared(m) if m == n => Ok(row.self_intersection.clone()),
                    Basis::Declared(m) => row
                        .with_declared
                        .get(m)
                        .or_else(|| self.row(m).and_then(|r| r.with_declared.get(n)))
                        .cloned()
                        .ok_or_else(missing),
                }
            }
        }
    }

    pub fn intersect(&self, a: &LatticeClass, b: &LatticeClass) -> Result<Rational, LatticeError> {
        let mut total = Rational::zero();
        for (x, cx) in expand(a) {
            for (y, cy) in expand(b) {
                total += self.pair(&x, &y)? * &cx * &cy;
            }
        }
        Ok(total)
    }

    /// Checks `total = strict + sum m_i A_i` numerically: the total transform
    /// must be orthogonal to every `A_i`, and the residual must pair to zero
    /// with `F`, every `A_i` and every declared class it can be paired with.
    pub fn check_decomposition(
        &self,
        total: &LatticeClass,
        strict: &LatticeClass,
        multiplicities: &BTreeMap<usize, i64>,
    ) -> Result<Vec<String>, LatticeError> {
        for i in 1..=self.node_count {
            let v = self.intersect(total, &LatticeClass::node(i))?;
            if !v.is_zero() {
                return Err(LatticeError::PairingMismatch {
                    certificate: "total transform".into(),
                    against: format!("A{i}"),
                    residual: rational_to_string(&v),
                });
            }
        }
        let mut residual = total.sub(strict);
        for (i, m) in multiplicities {
            residual = residual.sub(&LatticeClass::node(*i).scale_int(*m));
        }
        let (_, skipped) = self.audit("strict transform", &residual)?;
        Ok(skipped)
    }

    /// Pairs `residual` against the whole basis; returns audited and skipped
    /// names.
    fn audit(&self, certificate: &str, residual: &LatticeClass) -> Result<(Vec<String>, Vec<String>), LatticeError> {
        let mut against: Vec<(String, LatticeClass)> = vec![("F".into(), LatticeClass::f())];
        against.extend((1..=self.node_count).map(|i| (format!("A{i}"), LatticeClass::node(i))));
        against.extend(self.declared.iter().map(|d| (d.name.clone(), LatticeClass::declared(&d.name))));
        let (mut audited, mut skipped) = (Vec::new(), Vec::new());
        for (name, x) in against {
            match self.intersect(residual, &x) {
                Ok(v) if v.is_zero() => audited.push(name),
                Ok(v) => {
                    return Err(LatticeError::PairingMismatch {
                        certificate: certificate.into(),
                        against: name,
                        residual: rational_to_string(&v),
                    })
                }
                Err(LatticeError::MissingPairing(..)) => skipped.push(name),
                Err(e) => return Err(e),
            }
        }
        Ok((audited, skipped))
    }
}

/// `L = 1/2 sum_S A_i` together with `L^2` and `L.K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfClass {
    pub size: usize,
    pub l_squared: Rational,
    pub l_dot_k: Rational,
}

/// `L^2 = -|S|/2`, `L.K = 0` (the `A_i` are `K`-trivial).
pub fn half_class(subset: &[usize]) -> HalfClass {
    HalfClass { size: subset.len(), l_squared: q(-(subset.len() as i64)) / q(2), l_dot_k: Rational::zero() }
}

/// `2 half = 2 witness + sum_{subset} A_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenSetCertificate {
    pub name: String,
    pub subset: Vec<usize>,
    pub half: LatticeClass,
    pub witness: LatticeClass,
}

impl EvenSetCertificate {
    pub fn union(&self, other: &Self, name: impl Into<String>) -> Result<Self, LatticeError> {
        let mine: BTreeSet<usize> = self.subset.iter().copied().collect();
        if let Some(i) = other.subset.iter().find(|i| mine.contains(i)) {
            return Err(LatticeError::BadSubset(format!("{} and {} both contain node {i}", self.name, other.name)));
        }
        let mut subset: Vec<usize> = self.subset.iter().chain(&other.subset).copied().collect();
        subset.sort();
        Ok(Self { name: name.into(), subset, half: self.half.add(&other.half), witness: self.witness.add(&other.witness) })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenSetOutcome {
    pub name: String,
    pub subset: Vec<usize>,
    pub half_class: HalfClass,
    pub audited: Vec<String>,
    /// Classes the identity could not be paired with.
    pub skipped: Vec<String>,
}

impl EvenSetOutcome {
    pub fn is_complete(&self) -> bool {
        self.skipped.is_empty()
    }
}

pub fn even_set_check(lattice: &Lattice, cert: &EvenSetCertificate) -> Result<EvenSetOutcome, LatticeError> {
    let set: BTreeSet<usize> = cert.subset.iter().copied().collect();
    if set.is_empty() {
        return Err(LatticeError::BadSubset(format!("{} is empty", cert.name)));
    }
    if set.len() != cert.subset.len() {
        return Err(LatticeError::BadSubset(format!("{} repeats a node", cert.name)));
    }
    if let Some(i) = set.iter().find(|&&i| i == 0 || i > lattice.node_count) {
        return Err(LatticeError::BadSubset(format!("node {i} out of range 1..{}", lattice.node_count)));
    }
    for (what, c) in [("half class", &cert.half), ("witness", &cert.witness)] {
        if !c.is_integral() {
            return Err(LatticeError::NotIntegral(format!("{what} {c} of {}", cert.name)));
        }
    }
    let subset: Vec<usize> = set.into_iter().collect();
    let sum = LatticeClass::node_sum(&subset);
    let half = sum.scale(&(Rational::one() / q(2)));
    let l_squared = lattice.intersect(&half, &half)?;
    let l_dot_k = lattice.intersect(&half, &lattice.canonical())?;
    if !l_squared.is_integer() {
        return Err(LatticeError::Parity(format!("L^2 = {} for {} nodes", rational_to_string(&l_squared), subset.len())));
    }
    if !(&l_squared + &l_dot_k).to_integer().is_even() {
        return Err(LatticeError::Parity(format!(
            "L^2 + L.K = {} is odd",
            rational_to_string(&(&l_squared + &l_dot_k))
        )));
    }
    let residual = cert.half.scale_int(2).sub(&cert.witness.scale_int(2)).sub(&sum);
    let (audited, skipped) = lattice.audit(&cert.name, &residual)?;
    let expected = half_class(&subset);
    debug_assert_eq!(expected.l_squared, l_squared);
    Ok(EvenSetOutcome { name: cert.name.clone(), subset, half_class: HalfClass { size: expected.size, l_squared, l_dot_k }, audited, skipped })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Toy lattice with 16 nodes: `P` with `P.F = 8`, `P^2 = 0`, and
    /// `E = P - 1/2 sum A_i`.
    fn toy() -> Lattice {
        let mut l = Lattice::new(16, 8, 1);
        l.declare(DeclaredClass::new("P", 8, vec![0; 16], 0)).unwrap();
        l.declare(DeclaredClass::new("E", 8, vec![1; 16], -8).pairs_with("P", 0)).unwrap();
        l
    }

    fn all16() -> Vec<usize> {
        (1..=16).collect()
    }

    #[test]
    fn basis_pairings() {
        let l = toy();
        assert_eq!(l.intersect(&LatticeClass::f(), &LatticeClass::f()).unwrap(), q(8));
        assert_eq!(l.intersect(&LatticeClass::node(3), &LatticeClass::node(3)).unwrap(), q(-2));
        assert_eq!(l.intersect(&LatticeClass::node(3), &LatticeClass::node(4)).unwrap(), q(0));
        assert_eq!(l.intersect(&LatticeClass::f(), &LatticeClass::node(1)).unwrap(), q(0));
        assert!(matches!(
            l.intersect(&LatticeClass::node(17), &LatticeClass::f()),
            Err(LatticeError::MissingPairing(..))
        ));
    }

    #[test]
    fn sixteen_node_certificate() {
        let l = toy();
        let cert = EvenSetCertificate {
            name: "toy".into(),
            subset: all16(),
            half: LatticeClass::declared("P"),
            witness: LatticeClass::declared("E"),
        };
        let out = even_set_check(&l, &cert).unwrap();
        assert_eq!(out.half_class.l_squared, q(-8));
        assert_eq!(out.half_class.l_dot_k, q(0));
        assert!(out.is_complete());
        assert_eq!(out.audited.len(), 1 + 16 + 2);
    }

    #[test]
    fn single_node_is_rejected() {
        let l = toy();
        let cert = EvenSetCertificate {
            name: "one".into(),
            subset: vec![1],
            half: LatticeClass::declared("P"),
            witness: LatticeClass::declared("E"),
        };
        assert!(matches!(even_set_check(&l, &cert), Err(LatticeError::Parity(_))));
    }

    #[test]
    fn wrong_witness_is_caught() {
        let l = toy();
        let cert = EvenSetCertificate {
            name: "bad".into(),
            subset: (1..=8).collect(),
            half: LatticeClass::declared("P"),
            witness: LatticeClass::declared("E"),
        };
        match even_set_check(&l, &cert) {
            Err(LatticeError::PairingMismatch { .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn half_integral_witness_is_refused() {
        let l = toy();
        let cert = EvenSetCertificate {
            name: "half".into(),
            subset: all16(),
            half: LatticeClass::declared("P"),
            witness: LatticeClass::declared("P").sub(&LatticeClass::node_sum(&all16()).scale(&(q(1) / q(2)))),
        };
        assert!(matches!(even_set_check(&l, &cert), Err(LatticeError::NotIntegral(_))));
    }

    #[test]
    fn missing_rows_are_skipped() {
        let mut l = toy();
        l.declare(DeclaredClass::new("G", 1, vec![0; 16], -1)).unwrap();
        let cert = EvenSetCertificate {
            name: "toy".into(),
            subset: all16(),
            half: LatticeClass::declared("P"),
            witness: LatticeClass::declared("E"),
        };
        let out = even_set_check(&l, &cert).unwrap();
        assert_eq!(out.skipped, vec!["G".to_string()]);
    }

    #[test]
    fn declarations_are_validated() {
        let mut l = toy();
        assert!(l.declare(DeclaredClass::new("P", 0, vec![0; 16], 0)).is_err());
        assert!(l.declare(DeclaredClass::new("A3", 0, vec![0; 16], 0)).is_err());
        assert!(l.declare(DeclaredClass::new("Q", 0, vec![0; 3], 0)).is_err());
        assert!(l.declare(DeclaredClass::new("Q", 0, vec![0; 16], 0).pairs_with("E", 5).pairs_with("P", 1)).is_ok());
        let mut m = toy();
        m.declare(DeclaredClass::new("Q", 0, vec![0; 16], 0).pairs_with("P", 1)).unwrap();
        let mut clash = DeclaredClass::new("R", 0, vec![0; 16], 0);
        clash.with_declared.insert("Q".into(), q(2));
        assert!(m.declare(clash).is_ok());
    }

    #[test]
    fn line_decomposition() {
        // a line through two nodes with multiplicity one each: F = S + A1 + A2
        let mut l = Lattice::new(2, 1, -3);
        l.declare(DeclaredClass::new("S", 1, vec![2, 2], -3)).unwrap();
        let m: BTreeMap<usize, i64> = [(1, 1), (2, 1)].into();
        assert!(l.check_decomposition(&l.total_transform(1), &LatticeClass::declared("S"), &m).unwrap().is_empty());
        let wrong: BTreeMap<usize, i64> = [(1, 2), (2, 1)].into();
        assert!(l.check_decomposition(&l.total_transform(1), &LatticeClass::declared("S"), &wrong).is_err());
    }

    #[test]
    fn union_requires_disjoint_subsets() {
        let a = EvenSetCertificate { name: "a".into(), subset: vec![1, 2], half: LatticeClass::zero(), witness: LatticeClass::zero() };
        assert!(a.union(&a, "aa").is_err());
        let b = EvenSetCertificate { name: "b".into(), subset: vec![3], half: LatticeClass::f(), witness: LatticeClass::zero() };
        let u = a.union(&b, "ab").unwrap();
        assert_eq!(u.subset, vec![1, 2, 3]);
        assert_eq!(u.half, LatticeClass::f());
    }

    #[test]
    fn display() {
        let c = LatticeClass::f().scale_int(2).sub(&LatticeClass::node(3)).add(&LatticeClass::declared("E"));
        assert_eq!(c.to_string(), "2*F + E - A3");
    }
}
