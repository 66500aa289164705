//! The verification report as JSON. Keys are sorted and every number is an
//! exact integer or an exact rational string `"p/q"`, so two runs on the same
//! configuration produce identical bytes.

use serde_json::{json, Value};

use crate::assembly::{LevelRecord, PipelineError, TowerReport};
use crate::config::RunConfig;
use crate::field::rational_to_string;
use crate::lattice::LatticeClass;

pub const SCHEMA_VERSION: &str = "1.0.0";

fn class_json(c: &LatticeClass) -> Value {
    let mut terms = serde_json::Map::new();
    if !num_traits::Zero::is_zero(&c.f) {
        terms.insert("F".into(), json!(rational_to_string(&c.f)));
    }
    for (n, v) in &c.declared {
        terms.insert(n.clone(), json!(rational_to_string(v)));
    }
    for (i, v) in &c.nodes {
        terms.insert(format!("A{i}"), json!(rational_to_string(v)));
    }
    json!({ "expression": c.to_string(), "coefficients": terms })
}

fn level_json(l: &LevelRecord) -> Value {
    json!({
        "name": l.name,
        "chi": l.chi,
        "p_g": l.p_g,
        "q": l.q,
        "k_squared": l.k_squared,
        "nodes": l.nodes,
        "canonical_degree": l.canonical_degree,
    })
}

fn config_json(c: &RunConfig) -> Value {
    json!({
        "t1": c.t1, "t2": c.t2, "t3": c.t3, "t4": c.t4,
        "h1": c.h1,
        "pencil_t": c.pencil_t,
        "d1": c.d1, "d2": c.d2, "d3": c.d3, "d4": c.d4,
    })
}

pub fn report_json(r: &TowerReport) -> Value {
    let cfg = &r.configuration;
    let arrangement: Vec<Value> = r
        .arrangement
        .points
        .iter()
        .map(|p| {
            json!({
                "point": p.location.to_string(),
                "type": p.ade().to_string(),
                "local": p.local_type.name(),
                "components": [p.branches[0].label, p.branches[1].label],
                "contact": p.contact,
            })
        })
        .collect();
    let bezout: Vec<Value> = r
        .arrangement
        .bezout
        .iter()
        .map(|b| json!({ "pair": [b.first, b.second], "total": b.total, "expected": b.expected }))
        .collect();
    let nodes: Vec<Value> = r
        .inventory
        .nodes
        .iter()
        .map(|n| {
            json!({
                "index": n.index,
                "class": n.class.name(),
                "plane_point": n.plane_point.to_string(),
                "local": n.local_type.name(),
                "components": n.components,
                "inertia": n.inertia.labels(),
                "preimages": n.preimage_count,
                "sheet": n.sheet.to_string(),
            })
        })
        .collect();
    let certificates: Vec<Value> = r
        .fixture
        .certificates
        .iter()
        .zip(&r.even_sets)
        .map(|(c, o)| {
            json!({
                "name": c.name,
                "subset": o.subset,
                "half": class_json(&c.half),
                "witness": class_json(&c.witness),
                "l_squared": rational_to_string(&o.half_class.l_squared),
                "l_dot_k": rational_to_string(&o.half_class.l_dot_k),
                "audited": o.audited.len(),
                "skipped": o.skipped,
            })
        })
        .collect();
    let signs: Vec<Value> = r
        .sheet_points
        .iter()
        .map(|sp| {
            let values: serde_json::Map<String, Value> = sp
                .radicals
                .iter()
                .filter(|(c, v)| !c.is_trivial() && !v.is_zero())
                .map(|(c, v)| (c.to_string(), json!(v.to_exact_string())))
                .collect();
            json!({ "node": sp.node, "sheet": sp.sheet.to_string(), "radicals": values })
        })
        .collect();
    let b = &r.bicanonical;
    let line = &r.line_decomposition;
    let h = r.headline();
    json!({
        "schema_version": SCHEMA_VERSION,
        "passed": r.passed(),
        "headline": {
            "p_g": h.p_g,
            "q": h.q,
            "k_squared": h.k_squared,
            "canonical_degree": h.canonical_degree,
            "beauville_bound": r.bound.value,
            "bound_specified": r.bound.specified,
        },
        "checks": r.checks.iter().map(|c| json!({
            "id": c.id,
            "name": c.name,
            "stage": c.stage.name(),
            "passed": c.passed,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
        "configuration": {
            "input": config_json(&r.config),
            "curves": {
                "T1": cfg.lines[0].to_expr_string(),
                "T2": cfg.lines[1].to_expr_string(),
                "T3": cfg.lines[2].to_expr_string(),
                "T4": cfg.lines[3].to_expr_string(),
                "H1": cfg.h1.to_expr_string(),
                "H2": cfg.h2.to_expr_string(),
            },
            "pencil_t": rational_to_string(&cfg.pencil_t),
            "field_generators": r.tower_generators,
        },
        "arrangement": { "points": arrangement, "bezout": bezout },
        "splitting": {
            "double_plane": format!("{}^2 = {}", r.x_cover.radical_label, r.x_cover.indices.iter().map(|i| format!("d{i}")).collect::<Vec<_>>().join("*")),
            "conics": r.splits.iter().map(|s| json!({
                "conic": s.conic,
                "base_point": s.base_point.to_string(),
                "splits": s.splits,
                "even_multiplicities": s.restriction.even_multiplicities,
                "root": s.restriction.root.as_ref().map(|f| f.affine().to_strings()),
            })).collect::<Vec<_>>(),
            "numerics": r.split_numerics.first().map(|n| json!({
                "total_square": n.total_square,
                "ab": n.ab,
                "a_squared": n.a_squared,
                "a_dot_k": n.a_dot_k,
                "genus": n.genus,
                "h0_lower_bound": n.h0_lower_bound,
                "pullback_arithmetic_genus": n.pullback_arithmetic_genus,
            })),
        },
        "levels": r.levels.iter().map(level_json).collect::<Vec<_>>(),
        "nodes": nodes,
        "even_sets": certificates,
        "strict_transform": {
            "line": line.line,
            "multiplicities": line.multiplicities.iter().map(|(i, m)| json!([i, m])).collect::<Vec<_>>(),
            "t_a_dot_nodes": rational_to_string(&line.t_a_dot_nodes),
            "t_b_dot_nodes": rational_to_string(&line.t_b_dot_nodes),
            "t_a_squared": rational_to_string(&line.t_a_self),
            "t_a_dot_2f_minus_nodes": rational_to_string(&line.premise),
            "skipped": line.skipped,
        },
        "bicanonical": {
            "basis": b.basis_labels,
            "rows": b.matrix.rows(),
            "rank": b.rank,
            "kernel_dimension": b.kernel_dimension,
            "kernel_vector": b.kernel_vector.iter().map(|v| v.to_exact_string()).collect::<Vec<_>>(),
            "section": b.section,
            "radicand": b.radicand,
            "radicand_reduced": b.radicand_reduced,
            "quadric_rank": b.quadric_rank,
            "zero_columns": b.zero_columns,
            "premises": r.premises.iter().map(|(p, ok)| json!({ "statement": p, "holds": ok })).collect::<Vec<_>>(),
            "h0_k_plus_l": r.h0_k_plus_l,
            "sheet_values": signs,
        },
        "node_cover": {
            "chi_s_prime": r.final_invariants.chi,
            "k_squared_s_prime": r.final_invariants.k_squared_before,
            "k_squared_s": r.final_invariants.k_squared,
            "contracted_curves": r.inventory.nodes.len(),
            "tacnodal_only_chi": r.partial_invariants.chi,
        },
        "assumptions": r.assumptions,
    })
}

/// Report for a run that stopped at a stage.
pub fn failure_json(config: &RunConfig, err: &PipelineError) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "passed": false,
        "failure": {
            "stage": err.stage.name(),
            "kind": match err.kind {
                crate::assembly::FailureKind::Configuration => "configuration",
                crate::assembly::FailureKind::Check => "check",
            },
            "message": err.message,
        },
        "configuration": { "input": config_json(config) },
    })
}

/// The evaluation matrix with one provenance record per row.
pub fn matrix_dump(r: &TowerReport) -> Value {
    let m = &r.bicanonical.matrix;
    let rows: Vec<Value> = r
        .sheet_points
        .iter()
        .enumerate()
        .map(|(i, sp)| {
            json!({
                "node": sp.node,
                "plane_point": sp.plane_point.to_string(),
                "sheet": sp.sheet.to_string(),
                "entries": m.row(i).iter().map(|v| v.to_exact_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "columns": r.bicanonical.basis_labels,
        "rows": rows,
    })
}

pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialise");
    s.push('\n');
    s
}
