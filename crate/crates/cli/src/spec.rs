//! Variety and experiment descriptions (JSON).

use serde::{Deserialize, Serialize};
use toric_core::{cartier_data, Fan, FanError, SupportFunction, TorusDivisor};

use crate::error::CliError;

/// A fan with a torus-invariant divisor, as read from a file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarietySpec {
    pub name: String,
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    pub divisor: Vec<i64>,
}

/// A validated variety: smooth complete fan plus the support function of
/// the divisor.
#[derive(Debug, Clone)]
pub struct Variety {
    pub spec: VarietySpec,
    pub fan: Fan,
    pub phi: SupportFunction,
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CliError::Schema {
            path,
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    })
}

/// Parses and validates a variety description.
pub fn parse_variety(text: &str) -> Result<VarietySpec, CliError> {
    let spec: VarietySpec = from_json(text)?;
    spec.load()?;
    Ok(spec)
}

impl VarietySpec {
    /// Builds the fan and support function, rejecting singular or
    /// incomplete fans.
    pub fn load(&self) -> Result<Variety, CliError> {
        let rays: Vec<&[i64]> = self.rays.iter().map(|r| r.as_slice()).collect();
        let cones: Vec<&[usize]> = self.max_cones.iter().map(|c| c.as_slice()).collect();
        let fan = Fan::from_i64(self.dim, &rays, &cones).map_err(|e| match e {
            FanError::BadIntersection { first, second } => CliError::FanInvalid { first, second },
            other => CliError::Fan(other),
        })?;
        if let Some(&cone) = fan.singular_cones().first() {
            return Err(CliError::NotSmooth {
                cone,
                det: fan.cone_det(cone).to_string(),
            });
        }
        if let Some(f) = fan.unmatched_facets().first() {
            return Err(CliError::NotComplete {
                cone: f.first,
                facet: f.facet.clone(),
            });
        }
        let phi = cartier_data(&fan, &TorusDivisor::from_i64s(&self.divisor)).map_err(|e| CliError::Analysis {
            context: "divisor",
            message: e.to_string(),
        })?;
        Ok(Variety {
            spec: self.clone(),
            fan,
            phi,
        })
    }

    /// Fixture layout: one ray or cone per line.
    pub fn to_canonical_json(&self) -> String {
        let rows = |items: Vec<String>| -> String {
            items
                .iter()
                .enumerate()
                .map(|(k, s)| format!("    {s}{}", if k + 1 < items.len() { "," } else { "" }))
                .collect::<Vec<_>>()
                .join("\n")
        };
        let list = |v: &[i64]| format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "));
        let ulist = |v: &[usize]| format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "));
        format!(
            "{{\n  \"name\": {},\n  \"dim\": {},\n  \"rays\": [\n{}\n  ],\n  \"max_cones\": [\n{}\n  ],\n  \"divisor\": {}\n}}\n",
            serde_json::to_string(&self.name).expect("string serializes"),
            self.dim,
            rows(self.rays.iter().map(|r| list(r)).collect()),
            rows(self.max_cones.iter().map(|c| ulist(c)).collect()),
            list(&self.divisor),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Envelope,
    Limsup,
    Growth,
    Chern,
    Sections,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub log_radius: f64,
    pub points_per_axis: usize,
    pub phases: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = toric_core::GridSpec::default();
        Self {
            log_radius: g.log_radius,
            points_per_axis: g.points_per_axis,
            phases: g.phases,
        }
    }
}

impl From<GridConfig> for toric_core::GridSpec {
    fn from(g: GridConfig) -> Self {
        Self {
            log_radius: g.log_radius,
            points_per_axis: g.points_per_axis,
            phases: g.phases,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamiliesConfig {
    pub monomials: bool,
    pub adapted: bool,
    pub random: bool,
}

/// How the sequence `Q_j` is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceSpec {
    /// `Q_j = χ^{j v}`, cycling through the vertices.
    VertexMonomials,
    /// `Q_j = (Σ c_m χ^m)^j`, cycling through a net of this many positive
    /// directions.
    DirectionNet(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff_budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub families: Option<FamiliesConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<SequenceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
}

fn missing(field: &str, kind: ExperimentKind) -> CliError {
    CliError::Schema {
        path: field.to_string(),
        line: 0,
        column: 0,
        message: format!("required for kind {kind:?}").to_lowercase(),
    }
}

/// Parses an experiment description and checks kind-specific fields.
pub fn parse_experiment(text: &str) -> Result<ExperimentSpec, CliError> {
    let spec: ExperimentSpec = from_json(text)?;
    spec.validate()?;
    Ok(spec)
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        use ExperimentKind::*;
        let need_target = matches!(self.kind, Envelope | Growth | Chern);
        let need_dmax = matches!(self.kind, Envelope | Sections);
        let need_seq = matches!(self.kind, Limsup | Chern);
        if need_target && self.target.is_none() {
            return Err(missing("target", self.kind));
        }
        if need_dmax && self.d_max.is_none() {
            return Err(missing("d_max", self.kind));
        }
        if need_seq && self.sequence.is_none() {
            return Err(missing("sequence", self.kind));
        }
        if need_seq && self.j_max.is_none() {
            return Err(missing("j_max", self.kind));
        }
        if self.grid.points_per_axis == 0 || self.grid.phases == 0 || self.grid.log_radius.is_nan() || self.grid.log_radius <= 0.0 {
            return Err(CliError::Schema {
                path: "grid".into(),
                line: 0,
                column: 0,
                message: "grid needs positive radius, points and phases".into(),
            });
        }
        if let Some(t) = &self.target {
            crate::target::Target::parse(t)?;
        }
        Ok(())
    }
}
