//! Scenario files: JSON description of an infrastructure, a slice mix and the runs to perform.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use log::warn;
use serde::{Deserialize, Serialize};
use sliceprov_core::provisioning::Variant;
use sliceprov_core::{
    build_fat_tree, precompute_rate_tables, project_equirectangular, CostTable, CoverageSpec, Density, FatTreeCaps, InfraLink,
    InfraNode, InfrastructureGraph, ModelError, Point, RadioParams, RateTables, Rect, RrhCaps, SliceSpec, SrdGraph, DEFAULT_CELL,
};
use sliceprov_milp::{Backend, MilpError, SolverOptions};
use thiserror::Error;

use crate::presets::{preset_srd, preset_traffic, reference_costs, type_counts, with_granularity, PRESET_NAMES};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error at line {line}, column {column}, field `{field}`: {message}")]
    Parse { line: usize, column: usize, field: String, message: String },
    #[error("invalid scenario field `{field}`: {reason}")]
    Invalid { field: String, reason: String },
    #[error("{path}: row {row}: {reason}")]
    Csv { path: PathBuf, row: usize, reason: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solver(#[from] MilpError),
}

fn invalid(field: impl Into<String>, reason: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid { field: field.into(), reason: reason.into() }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum TopologySpec {
    FatTree {
        k: usize,
        caps: FatTreeCaps,
        rrh: RrhCaps,
        /// Positions in meters, one per leaf.
        #[serde(default)]
        rrh_positions: Option<Vec<Point>>,
        /// `lat,lon` rows, relative to the scenario file.
        #[serde(default)]
        rrh_csv: Option<PathBuf>,
        /// `[lat, lon]` of the projection origin; defaults to the centroid of the CSV rows.
        #[serde(default)]
        origin: Option<[f64; 2]>,
    },
    Graph {
        nodes: Vec<InfraNode>,
        links: Vec<InfraLink>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverageInput {
    pub area: Vec<Rect>,
    /// Total users spread uniformly over `area`.
    #[serde(default)]
    pub users: Option<f64>,
    #[serde(default)]
    pub density: Option<Density>,
    /// Bit/s per user.
    #[serde(default)]
    pub rate_up: Option<f64>,
    #[serde(default)]
    pub rate_down: Option<f64>,
    /// Cell size in meters.
    #[serde(default)]
    pub cell: Option<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceTypeSpec {
    pub name: String,
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub srd: Option<SrdGraph>,
    /// Replaces each per-instance minimum by demand / N.
    #[serde(default)]
    pub instance_granularity: Option<u32>,
    #[serde(default)]
    pub coverage: Option<CoverageInput>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceMix {
    pub total: usize,
    /// Slices per type, in `slice_types` order. Defaults to the reference mix for three types.
    #[serde(default)]
    pub counts: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSettings {
    pub mip_gap: f64,
    pub time_limit_s: f64,
    pub seed: i32,
    pub threads: u32,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings { mip_gap: 1e-6, time_limit_s: 600.0, seed: 0, threads: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingSpec {
    pub slice_type: String,
    #[serde(default = "default_sfc_counts")]
    pub sfc_counts: Vec<usize>,
    #[serde(default = "default_link_scale")]
    pub link_scale: f64,
    #[serde(default = "default_embedding_variant")]
    pub variant: Variant,
}

fn default_sfc_counts() -> Vec<usize> {
    vec![2, 4, 6, 8, 10]
}

fn default_link_scale() -> f64 {
    0.1
}

fn default_embedding_variant() -> Variant {
    Variant::JrJn
}

fn default_variants() -> Vec<Variant> {
    Variant::ALL.to_vec()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub dir: Option<PathBuf>,
}

/// Scenario as written on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub topology: TopologySpec,
    #[serde(default = "reference_costs")]
    pub costs: CostTable,
    #[serde(default)]
    pub radio: RadioParams,
    pub slice_types: Vec<SliceTypeSpec>,
    pub slices: SliceMix,
    #[serde(default = "default_variants")]
    pub variants: Vec<Variant>,
    #[serde(default)]
    pub lambda: f64,
    /// Bisect on a demand multiplier when the full demand does not fit.
    #[serde(default)]
    pub delta_scaling: bool,
    #[serde(default)]
    pub solver: SolverSettings,
    #[serde(default)]
    pub embedding: Option<EmbeddingSpec>,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingSetup {
    pub template: SrdGraph,
    pub sfc_counts: Vec<usize>,
    pub link_scale: f64,
    pub variant: Variant,
}

/// Validated scenario with every reference resolved.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub infra: InfrastructureGraph,
    pub slices: Vec<SliceSpec>,
    /// Type name of each slice.
    pub slice_types: Vec<String>,
    pub radio: RadioParams,
    pub rates: RateTables,
    pub variants: Vec<Variant>,
    pub lambda: f64,
    pub delta_scaling: bool,
    pub solver: SolverOptions,
    pub embedding: Option<EmbeddingSetup>,
    pub output_dir: Option<PathBuf>,
}

/// Reads, parses and validates a scenario file. Relative paths inside it resolve against its directory.
pub fn load_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io { path: path.to_path_buf(), source })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_scenario(&text, base)
}

pub fn parse_scenario(text: &str, base: &Path) -> Result<Scenario, ScenarioError> {
    parse_scenario_file(text)?.resolve(base)
}

pub fn parse_scenario_file(text: &str) -> Result<ScenarioFile, ScenarioError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        ScenarioError::Parse { line: inner.line(), column: inner.column(), field, message: inner.to_string() }
    })
}

impl ScenarioFile {
    pub fn resolve(&self, base: &Path) -> Result<Scenario, ScenarioError> {
        if self.name.trim().is_empty() {
            return Err(invalid("name", "must not be empty"));
        }
        let infra = self.build_infra(base)?;
        let (templates, coverages) = self.resolve_types()?;
        let counts = self.resolve_counts()?;

        let mut slices = Vec::new();
        let mut slice_types = Vec::new();
        for (t, spec) in self.slice_types.iter().enumerate() {
            for k in 0..counts[t] {
                let name = format!("{}-{k}", spec.name);
                let slice = SliceSpec::new(name, templates[t].clone(), coverages[t].clone())?;
                if slice.has_radio_demand() && infra.rrhs().is_empty() {
                    return Err(invalid(format!("slice_types[{t}].coverage"), "radio demand on an infrastructure without RRHs"));
                }
                slices.push(slice);
                slice_types.push(spec.name.clone());
            }
        }
        self.radio.validate()?;
        let rates = precompute_rate_tables(&infra, &slices, &self.radio)?;

        if self.variants.is_empty() {
            return Err(invalid("variants", "at least one variant is required"));
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(invalid("lambda", "must be finite and >= 0"));
        }
        let solver = self.solver_options()?;
        let embedding = match &self.embedding {
            None => None,
            Some(e) => {
                let t = self
                    .slice_types
                    .iter()
                    .position(|s| s.name == e.slice_type)
                    .ok_or_else(|| invalid("embedding.slice_type", format!("no slice type named {:?}", e.slice_type)))?;
                if e.sfc_counts.is_empty() || e.sfc_counts.contains(&0) {
                    return Err(invalid("embedding.sfc_counts", "counts must be positive"));
                }
                if !(e.link_scale > 0.0 && e.link_scale.is_finite()) {
                    return Err(invalid("embedding.link_scale", "must be > 0"));
                }
                Some(EmbeddingSetup {
                    template: templates[t].clone(),
                    sfc_counts: e.sfc_counts.clone(),
                    link_scale: e.link_scale,
                    variant: e.variant,
                })
            }
        };
        Ok(Scenario {
            name: self.name.clone(),
            infra,
            slices,
            slice_types,
            radio: self.radio,
            rates,
            variants: self.variants.clone(),
            lambda: self.lambda,
            delta_scaling: self.delta_scaling,
            solver,
            embedding,
            output_dir: self.output.dir.as_ref().map(|d| base.join(d)),
        })
    }

    fn build_infra(&self, base: &Path) -> Result<InfrastructureGraph, ScenarioError> {
        match &self.topology {
            TopologySpec::Graph { nodes, links } => Ok(InfrastructureGraph::new(nodes.clone(), links.clone())?),
            TopologySpec::FatTree { k, caps, rrh, rrh_positions, rrh_csv, origin } => {
                let positions = match (rrh_positions, rrh_csv) {
                    (Some(p), None) => p.clone(),
                    (None, Some(csv)) => {
                        let path = base.join(csv);
                        let coords = read_coordinates(&path)?;
                        let origin = match origin {
                            Some([lat, lon]) => (*lat, *lon),
                            None => centroid(&coords),
                        };
                        coords.iter().map(|&(lat, lon)| project_equirectangular(lat, lon, origin)).collect()
                    }
                    _ => return Err(invalid("topology", "give exactly one of rrh_positions and rrh_csv")),
                };
                let leaves = k * k * k / 4;
                if positions.len() != leaves {
                    return Err(invalid("topology", format!("k = {k} needs {leaves} RRH positions, got {}", positions.len())));
                }
                Ok(build_fat_tree(*k, caps, &positions, rrh, &self.costs)?)
            }
        }
    }

    fn resolve_types(&self) -> Result<(Vec<SrdGraph>, Vec<CoverageSpec>), ScenarioError> {
        if self.slice_types.is_empty() {
            return Err(invalid("slice_types", "at least one slice type is required"));
        }
        let mut templates = Vec::new();
        let mut coverages = Vec::new();
        for (t, spec) in self.slice_types.iter().enumerate() {
            let field = |f: &str| format!("slice_types[{t}].{f}");
            if self.slice_types[..t].iter().any(|o| o.name == spec.name) {
                return Err(invalid(field("name"), format!("duplicate slice type {:?}", spec.name)));
            }
            let mut srd = match (&spec.preset, &spec.srd) {
                (Some(p), None) => preset_srd(p)
                    .ok_or_else(|| invalid(field("preset"), format!("unknown preset {p:?}, expected one of {PRESET_NAMES:?}")))?,
                (None, Some(g)) => g.clone(),
                _ => return Err(invalid(field("preset"), "give exactly one of preset and srd")),
            };
            if let Some(n) = spec.instance_granularity {
                if n == 0 {
                    return Err(invalid(field("instance_granularity"), "must be >= 1"));
                }
                srd = with_granularity(srd, n);
            }
            srd.validate().and_then(|_| srd.check_minima()).map_err(|r| invalid(field("srd"), r))?;
            let traffic = spec.preset.as_deref().and_then(preset_traffic);
            let coverage = match &spec.coverage {
                None => CoverageSpec::none(),
                Some(c) => {
                    let rate_up = c.rate_up.or(traffic.map(|t| t.1)).ok_or_else(|| invalid(field("coverage.rate_up"), "required"))?;
                    let rate_down =
                        c.rate_down.or(traffic.map(|t| t.2)).ok_or_else(|| invalid(field("coverage.rate_down"), "required"))?;
                    let [w, h] = c.cell.unwrap_or([DEFAULT_CELL.0, DEFAULT_CELL.1]);
                    let result = match (&c.density, c.users) {
                        (Some(d), None) => CoverageSpec::new(c.area.clone(), d.clone(), rate_up, rate_down, w, h),
                        (None, users) => {
                            let users = users.or(traffic.map(|t| t.0)).ok_or_else(|| invalid(field("coverage.users"), "required"))?;
                            CoverageSpec::uniform_users(c.area.clone(), users, rate_up, rate_down, (w, h))
                        }
                        (Some(_), Some(_)) => return Err(invalid(field("coverage"), "give at most one of users and density")),
                    };
                    result.map_err(|e| invalid(field("coverage"), e.to_string()))?
                }
            };
            templates.push(srd);
            coverages.push(coverage);
        }
        Ok((templates, coverages))
    }

    fn resolve_counts(&self) -> Result<Vec<usize>, ScenarioError> {
        let counts = match &self.slices.counts {
            Some(c) => c.clone(),
            None if self.slice_types.len() == 3 => type_counts(self.slices.total)
                .ok_or_else(|| invalid("slices.total", format!("no reference mix for {} slices; give counts", self.slices.total)))?
                .to_vec(),
            None => return Err(invalid("slices.counts", "required unless exactly three slice types are declared")),
        };
        if counts.len() != self.slice_types.len() {
            return Err(invalid("slices.counts", format!("{} counts for {} slice types", counts.len(), self.slice_types.len())));
        }
        let sum: usize = counts.iter().sum();
        if sum != self.slices.total || sum == 0 {
            return Err(invalid("slices.counts", format!("counts sum to {sum}, declared total is {}", self.slices.total)));
        }
        Ok(counts)
    }

    fn solver_options(&self) -> Result<SolverOptions, ScenarioError> {
        let s = &self.solver;
        if !(s.mip_gap >= 0.0 && s.mip_gap.is_finite()) {
            return Err(invalid("solver.mip_gap", "must be finite and >= 0"));
        }
        if !(s.time_limit_s > 0.0 && s.time_limit_s.is_finite()) {
            return Err(invalid("solver.time_limit_s", "must be > 0"));
        }
        if s.threads == 0 {
            return Err(invalid("solver.threads", "must be >= 1"));
        }
        Ok(SolverOptions {
            backend: Backend::from_env()?,
            time_limit: Duration::from_secs_f64(s.time_limit_s),
            mip_gap: s.mip_gap,
            seed: s.seed,
            threads: s.threads,
            ..SolverOptions::default()
        })
    }
}

fn centroid(coords: &[(f64, f64)]) -> (f64, f64) {
    if coords.is_empty() {
        return (0.0, 0.0);
    }
    let n = coords.len() as f64;
    (coords.iter().map(|c| c.0).sum::<f64>() / n, coords.iter().map(|c| c.1).sum::<f64>() / n)
}

/// Reads `lat,lon` rows in degrees. A non-numeric first row is taken as a header.
pub fn read_coordinates(path: &Path) -> Result<Vec<(f64, f64)>, ScenarioError> {
    let err = |row: usize, reason: String| ScenarioError::Csv { path: path.to_path_buf(), row, reason };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| err(0, e.to_string()))?;
    let mut coords = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| err(row, e.to_string()))?;
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != 2 {
            return Err(err(row, format!("expected 2 columns, got {}", record.len())));
        }
        match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
            (Ok(lat), Ok(lon)) if lat.is_finite() && lon.is_finite() => coords.push((lat, lon)),
            _ if row == 0 => continue,
            _ => return Err(err(row, format!("non-numeric values {:?}, {:?}", &record[0], &record[1]))),
        }
    }
    if coords.is_empty() {
        warn!("{}: no coordinates", path.display());
    }
    Ok(coords)
}

/// Cartesian RRH positions in meters, projected about `origin = (lat0, lon0)`, in file order.
pub fn ingest_rrh_csv(path: &Path, origin: (f64, f64)) -> Result<Vec<Point>, ScenarioError> {
    Ok(read_coordinates(path)?.into_iter().map(|(lat, lon)| project_equirectangular(lat, lon, origin)).collect())
}
