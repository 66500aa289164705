//! The whole construction end to end: configuration, arrangement, building
//! data, the intermediate double plane `X`, the cover `Y` and its nodes, the
//! even sets on the resolution, the bicanonical curve through the nodes, and
//! the invariants of the double cover `S` branched on those nodes.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::bicanonical::{node_sheet_points, unique_bicanonical_through_nodes, BicanonicalCertificate, SheetPoint, SignConvention};
use crate::config::{ConfigError, Configuration, RunConfig};
use crate::cover::{pullback_split_check, split_component_numerics, validate_building_data, BuildingData, CoverError, DoubleCover, SplitCheck, SplitNumerics, ValidationReport};
use crate::field::{rational_to_string, Rational, Tower};
use crate::group::{character_table, Character, GroupElement};
use crate::lattice::{even_set_check, DeclaredClass, EvenSetCertificate, EvenSetOutcome, HalfClass, Lattice, LatticeClass, LatticeError};
use crate::plane::{AdeType, Arrangement, LocalType, PlaneCurve, PlaneError};
use crate::transport::{node_inventory, NodeClass, NodeInventory, TransportError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Configuration,
    Arrangement,
    BuildingData,
    Splitting,
    Invariants,
    Nodes,
    EvenSets,
    StrictTransform,
    Bicanonical,
    Assembly,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Configuration => "configuration",
            Stage::Arrangement => "arrangement",
            Stage::BuildingData => "building-data",
            Stage::Splitting => "splitting",
            Stage::Invariants => "invariants",
            Stage::Nodes => "nodes",
            Stage::EvenSets => "even-sets",
            Stage::StrictTransform => "strict-transform",
            Stage::Bicanonical => "bicanonical",
            Stage::Assembly => "assembly",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    /// Bad input; the CLI exits with 2.
    Configuration,
    /// A verification failed; the CLI exits with 1.
    Check,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{stage}: {message}")]
pub struct PipelineError {
    pub stage: Stage,
    pub kind: FailureKind,
    pub message: String,
}

impl PipelineError {
    fn config(stage: Stage, message: impl ToString) -> Self {
        Self { stage, kind: FailureKind::Configuration, message: message.to_string() }
    }

    fn check(stage: Stage, message: impl ToString) -> Self {
        Self { stage, kind: FailureKind::Check, message: message.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssemblyError {
    #[error("not integral: {0}")]
    NotIntegral(String),
    #[error("the half class covers {half} nodes but {nodes} are branch points")]
    NodeMismatch { half: usize, nodes: usize },
    #[error("even set {0} is not certified")]
    Uncertified(String),
}

/// Invariants of one surface in the tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelRecord {
    pub name: String,
    pub chi: i64,
    pub p_g: i64,
    pub q: i64,
    pub k_squared: i64,
    pub nodes: usize,
    /// The canonical system is the pullback of the lines of the plane.
    pub canonical_from_lines: bool,
    pub canonical_degree: Option<i64>,
}

impl LevelRecord {
    fn new(name: &str, chi: i64, p_g: i64, q: i64, k_squared: i64, nodes: usize, canonical_from_lines: bool) -> Self {
        let mut out = Self { name: name.into(), chi, p_g, q, k_squared, nodes, canonical_from_lines, canonical_degree: None };
        out.canonical_degree = canonical_map_degree(&out);
        out
    }

    pub fn noether_holds(&self) -> bool {
        self.chi == 1 - self.q + self.p_g
    }
}

/// `K^2` over the degree of the image, when the canonical system is the
/// pullback of the (base point free) lines of the plane.
pub fn canonical_map_degree(level: &LevelRecord) -> Option<i64> {
    (level.p_g == 3 && level.canonical_from_lines).then_some(level.k_squared)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BeauvilleBound {
    pub value: i64,
    /// False when the value is only the general bound.
    pub specified: bool,
}

pub fn beauville_bound(q: i64) -> BeauvilleBound {
    match q {
        0 => BeauvilleBound { value: 36, specified: true },
        2 => BeauvilleBound { value: 18, specified: true },
        _ => BeauvilleBound { value: 36, specified: false },
    }
}

/// Invariants of the double cover `S'` of the resolution branched on the
/// `(-2)`-curves in `2L`, and of `S`, obtained by contracting the `n`
/// `(-1)`-curves over them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeCoverInvariants {
    pub chi: i64,
    /// `K^2` of `S'`, before contraction.
    pub k_squared_before: i64,
    pub k_squared: i64,
    pub p_g: i64,
    pub q: i64,
}

pub fn node_double_cover_invariants(
    chi: i64,
    k_squared: i64,
    p_g: i64,
    nodes: usize,
    half: &HalfClass,
    h0_k_plus_l: i64,
) -> Result<NodeCoverInvariants, AssemblyError> {
    if half.size != nodes {
        return Err(AssemblyError::NodeMismatch { half: half.size, nodes });
    }
    let integral = |x: Rational, what: &str| {
        if x.is_integer() {
            Ok(x.to_integer().try_into().expect("small"))
        } else {
            Err(AssemblyError::NotIntegral(format!("{what} = {}", rational_to_string(&x))))
        }
    };
    let two = Rational::from_integer(2.into());
    let twice_chi = Rational::from_integer(chi.into()) * &two;
    let chi_s: i64 = integral(twice_chi + (&half.l_dot_k + &half.l_squared) / &two, "chi")?;
    let kl = Rational::from_integer(k_squared.into()) + &half.l_dot_k * &two + &half.l_squared;
    let before: i64 = integral(kl * &two, "K^2")?;
    let p_g_s = p_g + h0_k_plus_l;
    Ok(NodeCoverInvariants { chi: chi_s, k_squared_before: before, k_squared: before + nodes as i64, p_g: p_g_s, q: 1 - chi_s + p_g_s })
}

/// [`node_double_cover_invariants`] for a certified even set only.
pub fn certified_node_cover(
    y: &LevelRecord,
    outcome: Option<&EvenSetOutcome>,
    h0_k_plus_l: i64,
) -> Result<NodeCoverInvariants, AssemblyError> {
    let o = outcome.ok_or_else(|| AssemblyError::Uncertified(format!("for {}", y.name)))?;
    node_double_cover_invariants(y.chi, y.k_squared, y.p_g, o.subset.len(), &o.half_class, h0_k_plus_l)
}

/// Declared classes and certificates on the resolution of `Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionFixture {
    pub lattice: Lattice,
    pub certificates: Vec<EvenSetCertificate>,
    /// Pairings for the two components over the first line.
    pub line_lattice: Lattice,
    pub line_label: String,
    pub line_strict: LatticeClass,
    pub line_multiplicities: BTreeMap<usize, i64>,
}

pub const SPLIT_PULLBACK: &str = "P_A";
pub const REDUCED_SPLIT: &str = "E";
pub const LINE_PAIR_STRICT: &str = "S_13";

/// Pairing rows for:
/// - `P_A`, the pullback of one split component over `H1`, orthogonal to the
///   `A_i`;
/// - `E`, the reduced strict transform with `2 P_A = 2 E + sum_tac A_i`;
/// - `S_13`, the reduced strict transform of the preimage of `T1 + T3`, which
///   passes twice through the tacnodal nodes on those lines and once through
///   the line-pair nodes;
/// - `T_a`, `T_b`, the two components over `T1`, each through every
///   tacnodal node on `T1`, splitting the line-pair nodes on `T1` evenly.
pub fn resolution_fixture(
    bd: &BuildingData,
    inventory: &NodeInventory,
    split: &SplitNumerics,
    split_conic_degree: i64,
    lines: [&str; 2],
) -> Result<ResolutionFixture, LatticeError> {
    let n = inventory.nodes.len();
    let order = bd.order();
    let canonical = (bd.total_degree() as i64 - 6) / 2;
    let tac = inventory.indices_where(|r| r.class == NodeClass::Tacnodal);
    let internal = inventory.indices_where(|r| r.class == NodeClass::InternalNode);
    let on_lines = |r: &crate::transport::NodeRecord| lines.iter().any(|l| r.lies_over_component(l));
    let tac13 = inventory.indices_where(|r| r.class == NodeClass::Tacnodal && on_lines(r));
    let int13 = inventory.indices_where(|r| r.class == NodeClass::InternalNode && on_lines(r));
    let indicator = |set: &[usize], v: i64| -> Vec<i64> { (1..=n).map(|i| if set.contains(&i) { v } else { 0 }).collect() };
    let add = |a: Vec<i64>, b: Vec<i64>| -> Vec<i64> { a.iter().zip(&b).map(|(x, y)| x + y).collect() };

    let mut lattice = Lattice::new(n, order, canonical);
    // Y -> X has degree order/2; a split component meets a line in deg C points
    let psi = order / 2;
    let pa_f = psi * split_conic_degree;
    let pa_self = psi * split.a_squared;
    lattice.declare(DeclaredClass::new(SPLIT_PULLBACK, pa_f, vec![0; n], pa_self))?;
    let e_self = pa_self - tac.len() as i64 / 2;
    lattice.declare(DeclaredClass::new(REDUCED_SPLIT, pa_f, indicator(&tac, 1), e_self).pairs_with(SPLIT_PULLBACK, pa_self))?;
    let s_self = order - 2 * tac13.len() as i64 - int13.len() as i64 / 2;
    let s_e = pa_f - tac13.iter().filter(|i| tac.contains(i)).count() as i64;
    lattice.declare(
        DeclaredClass::new(LINE_PAIR_STRICT, order, add(indicator(&tac13, 2), indicator(&int13, 1)), s_self)
            .pairs_with(SPLIT_PULLBACK, pa_f)
            .pairs_with(REDUCED_SPLIT, s_e),
    )?;

    let l1 = EvenSetCertificate {
        name: "L1".into(),
        subset: tac.clone(),
        half: LatticeClass::declared(SPLIT_PULLBACK),
        witness: LatticeClass::declared(REDUCED_SPLIT),
    };
    let l2 = EvenSetCertificate {
        name: "L2".into(),
        subset: internal.clone(),
        half: LatticeClass::f(),
        witness: LatticeClass::declared(LINE_PAIR_STRICT).add(&LatticeClass::node_sum(&tac13)),
    };
    let union = l1.union(&l2, "L")?;

    let line = lines[0];
    let tac1 = inventory.indices_where(|r| r.class == NodeClass::Tacnodal && r.lies_over_component(line));
    let int1 = inventory.indices_where(|r| r.class == NodeClass::InternalNode && r.lies_over_component(line));
    let (int_a, int_b) = int1.split_at(int1.len() / 2);
    let mut multiplicities: BTreeMap<usize, i64> = tac1.iter().map(|&i| (i, 2)).collect();
    multiplicities.extend(int1.iter().map(|&i| (i, 1)));
    // F.T = (F . F)/4 by symmetry of the four pieces 2 T_a + 2 T_b
    let t_f = order / 4;
    let row_a = add(indicator(&tac1, 1), indicator(int_a, 1));
    let row_b = add(indicator(&tac1, 1), indicator(int_b, 1));
    let through = |row: &[i64]| -> i64 { row.iter().zip(1..=n).map(|(v, i)| v * multiplicities.get(&i).copied().unwrap_or(0)).sum() };
    let t_self = (t_f - through(&row_a)) / 2;
    let mut line_lattice = Lattice::new(n, order, canonical);
    line_lattice.declare(DeclaredClass::new("T_a", t_f, row_a, t_self))?;
    line_lattice.declare(DeclaredClass::new("T_b", t_f, row_b, t_self).pairs_with("T_a", 0))?;
    let line_strict = LatticeClass::declared("T_a").scale_int(2).add(&LatticeClass::declared("T_b").scale_int(2));
    Ok(ResolutionFixture {
        lattice,
        certificates: vec![l1, l2, union],
        line_lattice,
        line_label: line.into(),
        line_strict,
        line_multiplicities: multiplicities,
    })
}

/// Pairings of the components over `T1` that feed the vanishing of
/// `h^0(K + L)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineDecomposition {
    pub line: String,
    pub multiplicities: BTreeMap<usize, i64>,
    pub t_a_dot_nodes: Rational,
    pub t_b_dot_nodes: Rational,
    pub t_a_self: Rational,
    /// `T_a . (2F - sum A_i)`, negative so `T_a` is fixed in `|2K - sum A_i|`.
    pub premise: Rational,
    pub skipped: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub id: usize,
    pub name: String,
    pub stage: Stage,
    pub passed: bool,
    pub detail: String,
}

/// The values the construction is expected to reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Expectations {
    pub a3_points: usize,
    pub a1_points: usize,
    pub y: (i64, i64, i64, i64),
    pub tacnodal_nodes: usize,
    pub internal_nodes: usize,
    pub bicanonical_sections: usize,
    pub chi_s_prime: i64,
    /// `(p_g, q, K^2, canonical degree)` of `S`.
    pub headline: (i64, i64, i64, i64),
}

pub const EXPECTED: Expectations = Expectations {
    a3_points: 8,
    a1_points: 10,
    y: (4, 3, 0, 8),
    tacnodal_nodes: 16,
    internal_nodes: 8,
    bicanonical_sections: 12,
    chi_s_prime: 2,
    headline: (3, 2, 16, 16),
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Headline {
    pub p_g: i64,
    pub q: i64,
    pub k_squared: i64,
    pub canonical_degree: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerReport {
    pub config: RunConfig,
    pub configuration: Configuration,
    pub tower_generators: Vec<String>,
    pub arrangement: Arrangement,
    pub validation: ValidationReport,
    pub x_cover: DoubleCover,
    pub splits: Vec<SplitCheck>,
    pub split_numerics: Vec<SplitNumerics>,
    pub levels: Vec<LevelRecord>,
    pub inventory: NodeInventory,
    pub fixture: ResolutionFixture,
    pub even_sets: Vec<EvenSetOutcome>,
    pub line_decomposition: LineDecomposition,
    pub bicanonical_basis: usize,
    pub bicanonical: BicanonicalCertificate,
    pub sheet_points: Vec<SheetPoint>,
    pub premises: Vec<(String, bool)>,
    pub h0_k_plus_l: i64,
    pub final_invariants: NodeCoverInvariants,
    /// The same formula on the tacnodal even set alone.
    pub partial_invariants: NodeCoverInvariants,
    pub bound: BeauvilleBound,
    pub checks: Vec<Check>,
    pub assumptions: Vec<String>,
}

impl TowerReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn level(&self, name: &str) -> Option<&LevelRecord> {
        self.levels.iter().find(|l| l.name == name)
    }

    pub fn headline(&self) -> Headline {
        let s = self.level("S").expect("S is always recorded");
        Headline { p_g: s.p_g, q: s.q, k_squared: s.k_squared, canonical_degree: s.canonical_degree }
    }
}

pub const ASSUMPTIONS: [&str; 4] = [
    "the inertia group of a branch point is its full stabiliser; preimage counts are confirmed by the node totals",
    "S is the minimal model of S' after contracting one (-1)-curve over each branch node",
    "the canonical systems of Y and S are pullbacks of the base point free lines of the plane",
    "the two components over T1 meet only at nodes of the cover, so T_a.T_b = 0 on the resolution",
];

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: &str, stage: Stage, passed: bool, detail: String) {
        let id = self.0.len() + 1;
        self.0.push(Check { id, name: name.into(), stage, passed, detail });
    }
}

fn arrangement_error(e: CoverError) -> PipelineError {
    match e {
        CoverError::Plane(PlaneError::Field(f)) => PipelineError::check(Stage::Arrangement, f),
        CoverError::Plane(p) => PipelineError::config(Stage::Arrangement, p),
        other => PipelineError::check(Stage::Arrangement, other),
    }
}

/// Every line must be tangent to both conics at a single point.
fn tangency_audit(arr: &Arrangement, conics: [&PlaneCurve; 2], lines: &[PlaneCurve; 4]) -> Result<(), PipelineError> {
    for c in conics {
        for l in lines {
            let n = arr
                .points
                .iter()
                .filter(|p| p.local_type == LocalType::Tacnode && p.lies_on_component(c.label()) && p.lies_on_component(l.label()))
                .count();
            if n != 1 {
                return Err(PipelineError::config(
                    Stage::Arrangement,
                    format!("line {} is not tangent to {}", l.label(), c.label()),
                ));
            }
        }
    }
    Ok(())
}

fn character_table_check() -> (bool, String) {
    let table = character_table(3).expect("rank 3");
    let mut ok = true;
    let n = table.columns.len();
    for i in 0..n {
        for j in 0..n {
            let dot: i64 = table.values.iter().map(|row| (row[i] * row[j]) as i64).sum();
            ok &= dot == if i == j { n as i64 } else { 0 };
        }
    }
    (ok, format!("{}x{} table, columns orthogonal", table.rows.len(), table.columns.len()))
}

fn x_character(bd: &BuildingData) -> Result<Character, PipelineError> {
    let n = bd.branches().len();
    bd.radicals()
        .map_err(|e| PipelineError::check(Stage::Splitting, e))?
        .into_iter()
        .find(|r| r.indices == vec![n - 1, n])
        .map(|r| r.character)
        .ok_or_else(|| PipelineError::check(Stage::Splitting, "no character is -1 exactly on the two line pairs"))
}

fn level_of_cover(name: &str, bd: &BuildingData, nodes: usize, from_lines: bool) -> Result<LevelRecord, CoverError> {
    Ok(LevelRecord::new(name, bd.chi_structure_sheaf()?, bd.geometric_genus()?, bd.irregularity()?, bd.k_squared()?, nodes, from_lines))
}

pub fn run_pipeline(config: &RunConfig) -> Result<TowerReport, PipelineError> {
    run_pipeline_with(config, &SignConvention::default())
}

pub fn run_pipeline_with(config: &RunConfig, convention: &SignConvention) -> Result<TowerReport, PipelineError> {
    let mut checks = Checks(Vec::new());
    let (table_ok, table_detail) = character_table_check();
    checks.push("character table", Stage::Configuration, table_ok, table_detail);

    let configuration = config.build().map_err(|e| match e {
        ConfigError::Geometry(m) => PipelineError::config(Stage::Configuration, m),
        other => PipelineError::config(Stage::Configuration, other),
    })?;
    let bd = configuration.building_data.clone();

    let mut tower = Tower::rationals();
    let arrangement = bd.branch_arrangement(&mut tower).map_err(arrangement_error)?;
    tangency_audit(&arrangement, [&configuration.h1, &configuration.h2], &configuration.lines)?;
    let (a3, a1) = (arrangement.count(AdeType::A3), arrangement.count(AdeType::A1));
    let bezout_ok = arrangement.bezout.iter().all(|b| b.holds());
    checks.push(
        "arrangement",
        Stage::Arrangement,
        a3 == EXPECTED.a3_points && a1 == EXPECTED.a1_points && bezout_ok,
        format!("{a3} A3 + {a1} A1; Bezout holds for {} component pairs: {bezout_ok}", arrangement.bezout.len()),
    );

    let validation = validate_building_data(&bd);
    checks.push(
        "building data",
        Stage::BuildingData,
        validation.is_valid() && validation.is_irreducible(),
        format!("{} violations, cover irreducible: {}", validation.violations.len(), validation.is_irreducible()),
    );

    let x_char = x_character(&bd)?;
    let x_cover = bd.intermediate_cover(&x_char).map_err(|e| PipelineError::check(Stage::Splitting, e))?;
    let mut splits = Vec::new();
    let mut split_numerics = Vec::new();
    for conic in [&configuration.h1, &configuration.h2] {
        let touching: Vec<_> = arrangement
            .points
            .iter()
            .filter(|p| p.local_type == LocalType::Tacnode && p.lies_on_component(conic.label()))
            .collect();
        let base = touching.first().map(|p| &p.location).filter(|p| p.is_rational());
        let check = pullback_split_check(&x_cover.branch, conic, base).map_err(|e| PipelineError::check(Stage::Splitting, e))?;
        if check.splits {
            let n = split_component_numerics(&check, x_cover.branch_degree(), touching.len() as u32)
                .map_err(|e| PipelineError::check(Stage::Splitting, e))?;
            split_numerics.push(n);
        }
        splits.push(check);
    }
    let all_split = splits.iter().all(|s| s.splits);
    checks.push(
        "conics split on X",
        Stage::Splitting,
        all_split,
        splits.iter().map(|s| format!("{}: {}", s.conic, if s.splits { "splits" } else { "irreducible" })).collect::<Vec<_>>().join(", "),
    );
    if !all_split {
        return Err(PipelineError::check(Stage::Splitting, "a conic does not split on the double plane X"));
    }
    let sn = split_numerics[0];
    let numerics_ok = split_numerics.iter().all(|n| *n == sn)
        && (sn.a_squared, sn.a_dot_k, sn.genus, sn.h0_lower_bound, sn.pullback_arithmetic_genus) == (0, -2, 0, 2, 3);
    checks.push(
        "split component numerics",
        Stage::Splitting,
        numerics_ok,
        format!(
            "A^2 = {}, A.K = {}, g = {}, h0 >= {}, p_a(pullback) = {}",
            sn.a_squared, sn.a_dot_k, sn.genus, sn.h0_lower_bound, sn.pullback_arithmetic_genus
        ),
    );

    let x_bd = BuildingData::new(1, vec![(GroupElement::generator(1, 0), PlaneCurve::union("X", &[&bd.branches()[2].1, &bd.branches()[3].1]).map_err(|e| PipelineError::check(Stage::Invariants, e))?)])
        .map_err(|e| PipelineError::check(Stage::Invariants, e))?;
    let x_arr = x_bd.branch_arrangement(&mut tower).map_err(arrangement_error)?;
    let x_nodes = node_inventory(&x_bd, &x_arr).map_err(|e| PipelineError::check(Stage::Invariants, e))?.nodes.len();
    let x_level = level_of_cover("X", &x_bd, x_nodes, false).map_err(|e| PipelineError::check(Stage::Invariants, e))?;

    let inventory = node_inventory(&bd, &arrangement).map_err(|e: TransportError| PipelineError::check(Stage::Nodes, e))?;
    let y_level = level_of_cover("Y", &bd, inventory.nodes.len(), true).map_err(|e| PipelineError::check(Stage::Invariants, e))?;
    let basis = bd.pluricanonical_basis(2).map_err(|e| PipelineError::check(Stage::Invariants, e))?;
    checks.push(
        "invariants of Y",
        Stage::Invariants,
        (y_level.chi, y_level.p_g, y_level.q, y_level.k_squared) == EXPECTED.y
            && basis.len() == EXPECTED.bicanonical_sections
            && basis.len() as i64 == y_level.chi + y_level.k_squared,
        format!(
            "chi = {}, p_g = {}, q = {}, K^2 = {}, {} bicanonical sections",
            y_level.chi,
            y_level.p_g,
            y_level.q,
            y_level.k_squared,
            basis.len()
        ),
    );

    let (tac, int) = (inventory.count(NodeClass::Tacnodal), inventory.count(NodeClass::InternalNode));
    checks.push(
        "node inventory",
        Stage::Nodes,
        tac == EXPECTED.tacnodal_nodes && int == EXPECTED.internal_nodes,
        format!("{} nodes = {tac} tacnodal + {int} line-pair", inventory.nodes.len()),
    );

    let labels = [configuration.lines[0].label(), configuration.lines[2].label()];
    let fixture = resolution_fixture(&bd, &inventory, &sn, configuration.h1.degree() as i64, labels)
        .map_err(|e| PipelineError::check(Stage::EvenSets, e))?;
    let mut even_sets = Vec::new();
    for cert in &fixture.certificates {
        match even_set_check(&fixture.lattice, cert) {
            Ok(o) => {
                checks.push(
                    &format!("even set {}", cert.name),
                    Stage::EvenSets,
                    o.is_complete(),
                    format!(
                        "{} nodes, L^2 = {}, L.K = {}, audited against {} classes",
                        o.subset.len(),
                        rational_to_string(&o.half_class.l_squared),
                        rational_to_string(&o.half_class.l_dot_k),
                        o.audited.len()
                    ),
                );
                even_sets.push(o);
            }
            Err(e) => return Err(PipelineError::check(Stage::EvenSets, format!("{}: {e}", cert.name))),
        }
    }

    let ll = &fixture.line_lattice;
    let skipped = ll
        .check_decomposition(&ll.total_transform(1), &fixture.line_strict, &fixture.line_multiplicities)
        .map_err(|e| PipelineError::check(Stage::StrictTransform, e))?;
    let all_nodes = LatticeClass::node_sum(&(1..=inventory.nodes.len()).collect::<Vec<_>>());
    let pair = |a: &LatticeClass, b: &LatticeClass| ll.intersect(a, b).map_err(|e| PipelineError::check(Stage::StrictTransform, e));
    let (ta, tb) = (LatticeClass::declared("T_a"), LatticeClass::declared("T_b"));
    let line_decomposition = LineDecomposition {
        line: fixture.line_label.clone(),
        multiplicities: fixture.line_multiplicities.clone(),
        t_a_dot_nodes: pair(&ta, &all_nodes)?,
        t_b_dot_nodes: pair(&tb, &all_nodes)?,
        t_a_self: pair(&ta, &ta)?,
        premise: pair(&ta, &LatticeClass::f().scale_int(2).sub(&all_nodes))?,
        skipped,
    };
    let six = Rational::from_integer(6.into());
    let premise_negative = line_decomposition.premise < Rational::zero();
    checks.push(
        "strict transform of T1",
        Stage::StrictTransform,
        line_decomposition.t_a_dot_nodes == six && line_decomposition.t_b_dot_nodes == six && premise_negative,
        format!(
            "T_a.sum A = {}, T_b.sum A = {}, T_a.(2F - sum A) = {}",
            rational_to_string(&line_decomposition.t_a_dot_nodes),
            rational_to_string(&line_decomposition.t_b_dot_nodes),
            rational_to_string(&line_decomposition.premise)
        ),
    );

    let bicanonical =
        unique_bicanonical_through_nodes(&bd, &inventory, convention).map_err(|e| PipelineError::check(Stage::Bicanonical, e))?;
    let sheet_points = node_sheet_points(&bd, &inventory, convention).map_err(|e| PipelineError::check(Stage::Bicanonical, e))?;
    let union = even_sets.last().expect("three certificates");
    let k_plus_l = LatticeClass::f().scale_int((bd.total_degree() as i64 - 6) / 2).add(&all_nodes.scale(&Rational::new(1.into(), 2.into())));
    let minus_one = Rational::from_integer((-1).into());
    let node_premise = (1..=inventory.nodes.len())
        .all(|i| fixture.lattice.intersect(&LatticeClass::node(i), &k_plus_l).ok() == Some(minus_one.clone()));
    let premises = vec![
        ("every A_i has A_i.(K + L) = -1, so sections of K + L vanish on all A_i".to_string(), node_premise),
        (format!("T_a.(2K - sum A_i) = {} < 0", rational_to_string(&line_decomposition.premise)), premise_negative),
        ("exactly one bicanonical curve passes through the 24 nodes".to_string(), bicanonical.kernel_dimension == 1),
        (
            format!("that curve is {} = 0 with reduced radicand {}, so it is not double", bicanonical.section, bicanonical.radicand),
            bicanonical.character == x_char && bicanonical.radicand_reduced,
        ),
        (format!("even set of all {} nodes certified", union.subset.len()), union.is_complete() && union.subset.len() == inventory.nodes.len()),
    ];
    let chain = premises.iter().all(|(_, ok)| *ok);
    let h0_k_plus_l = 0;
    checks.push(
        "unique bicanonical curve through the nodes",
        Stage::Bicanonical,
        chain && bicanonical.zero_columns == vec![bicanonical.section.clone()],
        format!(
            "{}x{} matrix of rank {}, kernel spanned by {}, quadric rank {}, h0(K + L) = 0",
            bicanonical.matrix.rows(),
            bicanonical.matrix.cols(),
            bicanonical.rank,
            bicanonical.section,
            bicanonical.quadric_rank
        ),
    );

    let final_invariants = certified_node_cover(&y_level, chain.then_some(union), h0_k_plus_l)
        .map_err(|e| PipelineError::check(Stage::Assembly, e))?;
    let partial_invariants = certified_node_cover(&y_level, even_sets.first(), h0_k_plus_l)
        .map_err(|e| PipelineError::check(Stage::Assembly, e))?;
    let y_prime = LevelRecord::new("Y'", y_level.chi, y_level.p_g, y_level.q, y_level.k_squared, 0, true);
    let f = &final_invariants;
    let s_prime = LevelRecord::new("S'", f.chi, f.p_g, f.q, f.k_squared_before, 0, false);
    let s = LevelRecord::new("S", f.chi, f.p_g, f.q, f.k_squared, 0, true);
    let levels = vec![x_level, y_level, y_prime, s_prime, s];
    let noether = levels.iter().all(LevelRecord::noether_holds);
    let s = levels.last().expect("S");
    let (e_pg, e_q, e_k2, e_d) = EXPECTED.headline;
    checks.push(
        "invariants of S",
        Stage::Assembly,
        f.chi == EXPECTED.chi_s_prime && (s.p_g, s.q, s.k_squared) == (e_pg, e_q, e_k2) && noether,
        format!("chi(S') = {}, p_g = {}, q = {}, K^2 = {}; chi = 1 - q + p_g at every level: {noether}", f.chi, s.p_g, s.q, s.k_squared),
    );
    let bound = beauville_bound(s.q);
    let degree = s.canonical_degree;
    checks.push(
        "canonical degree and bound",
        Stage::Assembly,
        degree == Some(e_d) && degree.is_some_and(|d| d <= bound.value),
        format!(
            "degree {} <= {} (bound for q = {}{})",
            degree.map_or("undefined".into(), |d| d.to_string()),
            bound.value,
            s.q,
            if bound.specified { "" } else { ", general bound" }
        ),
    );

    Ok(TowerReport {
        config: config.clone(),
        configuration,
        tower_generators: tower.generator_strings(),
        arrangement,
        validation,
        x_cover,
        splits,
        split_numerics,
        levels,
        inventory,
        fixture,
        even_sets,
        line_decomposition,
        bicanonical_basis: basis.len(),
        bicanonical,
        sheet_points,
        premises,
        h0_k_plus_l,
        final_invariants,
        partial_invariants,
        bound,
        checks: checks.0,
        assumptions: ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::half_class;

    #[test]
    fn node_cover_formula() {
        let all: Vec<usize> = (1..=24).collect();
        let s = node_double_cover_invariants(4, 8, 3, 24, &half_class(&all), 0).unwrap();
        assert_eq!(s, NodeCoverInvariants { chi: 2, k_squared_before: -8, k_squared: 16, p_g: 3, q: 2 });
        let none = node_double_cover_invariants(4, 8, 3, 0, &half_class(&[]), 0).unwrap();
        assert_eq!((none.chi, none.k_squared), (8, 16));
        let sixteen: Vec<usize> = (1..=16).collect();
        assert_eq!(node_double_cover_invariants(4, 8, 3, 16, &half_class(&sixteen), 0).unwrap().chi, 4);
        assert!(node_double_cover_invariants(4, 8, 3, 23, &half_class(&all), 0).is_err());
    }

    #[test]
    fn uncertified_even_set_is_refused() {
        let y = LevelRecord::new("Y", 4, 3, 0, 8, 24, true);
        assert!(matches!(certified_node_cover(&y, None, 0), Err(AssemblyError::Uncertified(_))));
    }

    #[test]
    fn degrees_and_bounds() {
        assert_eq!(LevelRecord::new("Y", 4, 3, 0, 8, 24, true).canonical_degree, Some(8));
        assert_eq!(LevelRecord::new("S", 2, 3, 2, 16, 0, true).canonical_degree, Some(16));
        assert_eq!(LevelRecord::new("X", 1, 0, 0, 2, 6, false).canonical_degree, None);
        assert_eq!(beauville_bound(0), BeauvilleBound { value: 36, specified: true });
        assert_eq!(beauville_bound(2), BeauvilleBound { value: 18, specified: true });
        assert_eq!(beauville_bound(1), BeauvilleBound { value: 36, specified: false });
    }

    #[test]
    fn default_pipeline_passes() {
        let r = run_pipeline(&RunConfig::default()).unwrap();
        for c in &r.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        assert_eq!(r.checks.len(), 14);
        assert_eq!(r.headline(), Headline { p_g: 3, q: 2, k_squared: 16, canonical_degree: Some(16) });
        let x = r.level("X").unwrap();
        assert_eq!((x.chi, x.p_g, x.q, x.k_squared, x.nodes), (1, 0, 0, 2, 6));
        assert_eq!(r.partial_invariants.chi, 4);
    }

    #[test]
    fn tangency_is_required() {
        let cfg = RunConfig { t1: ["1", "0", "-2"].map(String::from), ..RunConfig::default() };
        let err = run_pipeline(&cfg).unwrap_err();
        assert_eq!(err.kind, FailureKind::Configuration);
        assert_eq!(err.stage, Stage::Arrangement);
    }
}
