//! Run configuration: the four lines, the conic `H1`, the pencil parameter
//! of `H2`, the group labels of `D1..D4`, and output options. Numbers are
//! exact strings (`"3"`, `"-3/4"`); floats are refused.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover::BuildingData;
use crate::field::{parse_rational, rational_to_string, Rational};
use crate::group::GroupElement;
use crate::plane::{tangent_conic_pencil, ConicPencil, PlaneCurve, PlaneError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("cannot parse configuration: {0}")]
    Parse(String),
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("{0}")]
    Geometry(String),
}

fn field_err(field: &str, message: impl ToString) -> ConfigError {
    ConfigError::Field { field: field.into(), message: message.to_string() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Lines as `[a, b, c]` for `a x + b y + c z`.
    pub t1: [String; 3],
    pub t2: [String; 3],
    pub t3: [String; 3],
    pub t4: [String; 3],
    /// Coefficients of `x^2, xy, xz, y^2, yz, z^2`.
    pub h1: [String; 6],
    /// `H2` is the member of the conics tangent to `T1..T4` with this
    /// parameter.
    pub pencil_t: String,
    pub d1: String,
    pub d2: String,
    pub d3: String,
    pub d4: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dump_matrix: Option<PathBuf>,
    #[serde(default)]
    pub verbose: bool,
}

fn strings<const N: usize>(v: [&str; N]) -> [String; N] {
    v.map(String::from)
}

impl Default for RunConfig {
    /// `T1: x = z`, `T2: x = -z`, `T3: y = z`, `T4: y = -z`,
    /// `H1: x^2 + y^2 - z^2`, `H2` the member at `t = 1`.
    fn default() -> Self {
        Self {
            t1: strings(["1", "0", "-1"]),
            t2: strings(["1", "0", "1"]),
            t3: strings(["0", "1", "-1"]),
            t4: strings(["0", "1", "1"]),
            h1: strings(["1", "0", "0", "1", "0", "-1"]),
            pencil_t: "1".into(),
            d1: "xyz".into(),
            d2: "z".into(),
            d3: "y".into(),
            d4: "x".into(),
            report: None,
            dump_matrix: None,
            verbose: false,
        }
    }
}

/// The built plane configuration and its building data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub lines: [PlaneCurve; 4],
    pub h1: PlaneCurve,
    pub h2: PlaneCurve,
    pub pencil: ConicPencil,
    pub pencil_t: Rational,
    pub building_data: BuildingData,
}

fn rationals<const N: usize>(field: &str, v: &[String; N]) -> Result<[Rational; N], ConfigError> {
    let mut out = Vec::with_capacity(N);
    for (i, s) in v.iter().enumerate() {
        out.push(parse_rational(s).map_err(|_| field_err(&format!("{field}[{i}]"), format!("`{s}` is not an exact rational")))?);
    }
    Ok(out.try_into().expect("length N"))
}

fn geometry(e: PlaneError) -> ConfigError {
    ConfigError::Geometry(match e {
        PlaneError::Configuration(m) | PlaneError::Degenerate(m) => m,
        other => other.to_string(),
    })
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("plain strings serialise")
    }

    pub fn with_pencil_parameter(mut self, t: &Rational) -> Self {
        self.pencil_t = rational_to_string(t);
        self
    }

    /// Parses every number, builds the curves and the pencil, and assembles
    /// `D1 = H1, D2 = H2, D3 = T1 + T2, D4 = T3 + T4`.
    pub fn build(&self) -> Result<Configuration, ConfigError> {
        let mut lines = Vec::new();
        for (name, coeffs) in [("t1", &self.t1), ("t2", &self.t2), ("t3", &self.t3), ("t4", &self.t4)] {
            let label = name.to_uppercase();
            lines.push(PlaneCurve::line(label, rationals(name, coeffs)?).map_err(|e| field_err(name, e))?);
        }
        let lines: [PlaneCurve; 4] = lines.try_into().expect("four lines");
        let h1 = PlaneCurve::conic("H1", rationals("h1", &self.h1)?).map_err(|e| field_err("h1", e))?;
        let pencil_t = parse_rational(&self.pencil_t).map_err(|_| field_err("pencil_t", format!("`{}` is not an exact rational", self.pencil_t)))?;
        let pencil = tangent_conic_pencil(&lines).map_err(geometry)?;
        let h2_eq = pencil.member(&pencil_t).map_err(geometry)?;
        let h2 = PlaneCurve::component("H2", h2_eq).map_err(|e| field_err("pencil_t", e))?;
        if h2.equation().proportional_to(h1.equation()) {
            return Err(field_err("pencil_t", "the pencil member coincides with H1"));
        }
        let mut sigmas = Vec::new();
        for (name, label) in [("d1", &self.d1), ("d2", &self.d2), ("d3", &self.d3), ("d4", &self.d4)] {
            sigmas.push(GroupElement::parse(3, label).map_err(|e| field_err(name, e))?);
        }
        let d3 = PlaneCurve::union("D3", &[&lines[0], &lines[1]]).map_err(geometry)?;
        let d4 = PlaneCurve::union("D4", &[&lines[2], &lines[3]]).map_err(geometry)?;
        let branches = vec![(sigmas[0], h1.clone()), (sigmas[1], h2.clone()), (sigmas[2], d3), (sigmas[3], d4)];
        let building_data = BuildingData::new(3, branches).map_err(|e| ConfigError::Field { field: "d1..d4".into(), message: e.to_string() })?;
        Ok(Configuration { lines, h1, h2, pencil, pencil_t, building_data })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_builds_the_square_configuration() {
        let c = RunConfig::default().build().unwrap();
        assert_eq!(c.h2.to_expr_string(), "4*x^2 - 4*x*y + 4*y^2 - 3*z^2");
        assert_eq!(c.building_data.total_degree(), 8);
        assert_eq!(c.lines[0].label(), "T1");
    }

    #[test]
    fn toml_round_trip() {
        let cfg = RunConfig::default();
        let text = cfg.to_toml_string();
        assert!(text.contains("pencil_t = \"1\""));
        assert_eq!(RunConfig::from_toml_str(&text).unwrap(), cfg);
    }

    #[test]
    fn coincident_lines_are_rejected() {
        let cfg = RunConfig { t2: strings(["2", "0", "-2"]), ..RunConfig::default() };
        let err = cfg.build().unwrap_err();
        assert!(err.to_string().contains("lines not distinct"), "{err}");
    }

    #[test]
    fn floats_and_unknown_keys_are_rejected() {
        let text = RunConfig::default().to_toml_string().replace("pencil_t = \"1\"", "pencil_t = \"0.5\"");
        let err = RunConfig::from_toml_str(&text).unwrap().build().unwrap_err();
        assert!(matches!(err, ConfigError::Field { ref field, .. } if field == "pencil_t"));
        let bad = format!("{}\ncolour = \"red\"\n", RunConfig::default().to_toml_string());
        assert!(matches!(RunConfig::from_toml_str(&bad), Err(ConfigError::Parse(_))));
        let numeric = RunConfig::default().to_toml_string().replace("pencil_t = \"1\"", "pencil_t = 1.0");
        assert!(matches!(RunConfig::from_toml_str(&numeric), Err(ConfigError::Parse(_))));
    }

    #[test]
    fn degenerate_member_and_h1_member_are_rejected() {
        let two = RunConfig { pencil_t: "2".into(), ..RunConfig::default() };
        assert!(two.build().is_err());
        let zero = RunConfig { pencil_t: "0".into(), ..RunConfig::default() };
        assert!(matches!(zero.build(), Err(ConfigError::Field { .. })));
    }

    #[test]
    fn bad_group_label() {
        let cfg = RunConfig { d1: "w".into(), ..RunConfig::default() };
        assert!(matches!(cfg.build(), Err(ConfigError::Field { ref field, .. }) if field == "d1"));
    }
}
