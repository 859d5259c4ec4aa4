use serde::{Deserialize, Serialize};

use crate::coverage::{aggregate_radio_demand, CoverageSpec};
use crate::error::ModelError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SrdNode {
    pub name: String,
    /// CPUs.
    pub compute: f64,
    /// GBytes.
    pub storage: f64,
    /// Per-instance minimum compute.
    pub min_compute: f64,
    /// Per-instance minimum storage.
    pub min_storage: f64,
    #[serde(default)]
    pub is_radio: bool,
    /// Bit/s, radio node only.
    #[serde(default)]
    pub rate_up: f64,
    #[serde(default)]
    pub rate_down: f64,
}

impl SrdNode {
    pub fn new(name: impl Into<String>, compute: f64, min_compute: f64, storage: f64, min_storage: f64) -> Self {
        SrdNode {
            name: name.into(),
            compute,
            storage,
            min_compute,
            min_storage,
            is_radio: false,
            rate_up: 0.0,
            rate_down: 0.0,
        }
    }

    pub fn radio(mut self) -> Self {
        self.is_radio = true;
        self
    }

    pub fn rate_radio(&self) -> f64 {
        self.rate_up + self.rate_down
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SrdLink {
    pub src: usize,
    pub dst: usize,
    /// Gbps.
    pub bandwidth: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SrdGraph {
    pub nodes: Vec<SrdNode>,
    pub links: Vec<SrdLink>,
}

impl SrdGraph {
    pub fn validate(&self) -> Result<(), String> {
        let radios = self.nodes.iter().filter(|n| n.is_radio).count();
        if radios != 1 {
            return Err(format!("expected exactly one radio node, found {radios}"));
        }
        for n in &self.nodes {
            let vals = [n.compute, n.storage, n.min_compute, n.min_storage, n.rate_up, n.rate_down];
            if !vals.iter().all(|v| v.is_finite() && *v >= 0.0) {
                return Err(format!("{}: demands must be finite and >= 0", n.name));
            }
            if (n.compute > 0.0 && n.min_compute <= 0.0) || (n.storage > 0.0 && n.min_storage <= 0.0) {
                return Err(format!("{}: positive demand needs a positive per-instance minimum", n.name));
            }
            if !n.is_radio && (n.rate_up != 0.0 || n.rate_down != 0.0) {
                return Err(format!("{}: only the radio node carries rates", n.name));
            }
        }
        for l in &self.links {
            if l.src >= self.nodes.len() || l.dst >= self.nodes.len() {
                return Err(format!("link {}->{}: unknown endpoint", l.src, l.dst));
            }
            if l.src == l.dst {
                return Err(format!("link {}->{}: self-loop", l.src, l.dst));
            }
            if !(l.bandwidth.is_finite() && l.bandwidth >= 0.0) {
                return Err(format!("link {}->{}: bandwidth must be finite and >= 0", l.src, l.dst));
            }
        }
        Ok(())
    }

    /// Input rule: a node's per-instance minimum does not exceed its demand. Scaled-down copies may break it.
    pub fn check_minima(&self) -> Result<(), String> {
        for n in &self.nodes {
            if n.min_compute > n.compute || n.min_storage > n.storage {
                return Err(format!("{}: per-instance minimum exceeds demand", n.name));
            }
        }
        Ok(())
    }

    pub fn radio_node(&self) -> usize {
        self.nodes.iter().position(|n| n.is_radio).expect("validated SRD has a radio node")
    }

    pub fn out_links(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.links.len()).filter(move |&l| self.links[l].src == v)
    }

    pub fn in_links(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.links.len()).filter(move |&l| self.links[l].dst == v)
    }

    pub fn out_bandwidth(&self, v: usize) -> f64 {
        self.out_links(v).map(|l| self.links[l].bandwidth).sum()
    }

    pub fn in_bandwidth(&self, v: usize) -> f64 {
        self.in_links(v).map(|l| self.links[l].bandwidth).sum()
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.name == name)
    }

    /// Every compute, storage and bandwidth demand multiplied by `factor`; minima unchanged.
    pub fn scaled(&self, factor: f64) -> SrdGraph {
        let mut g = self.clone();
        for n in &mut g.nodes {
            n.compute *= factor;
            n.storage *= factor;
            n.rate_up *= factor;
            n.rate_down *= factor;
        }
        for l in &mut g.links {
            l.bandwidth *= factor;
        }
        g
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceSpec {
    pub name: String,
    pub srd: SrdGraph,
    pub coverage: CoverageSpec,
}

impl SliceSpec {
    /// Builds the slice and sets the radio node's rates from the coverage aggregate.
    pub fn new(name: impl Into<String>, mut srd: SrdGraph, coverage: CoverageSpec) -> Result<Self, ModelError> {
        let name = name.into();
        srd.validate().and_then(|_| srd.check_minima()).map_err(|reason| ModelError::Srd { slice: name.clone(), reason })?;
        let (up, down) = aggregate_radio_demand(&coverage);
        let r = srd.radio_node();
        srd.nodes[r].rate_up = up;
        srd.nodes[r].rate_down = down;
        Ok(SliceSpec { name, srd, coverage })
    }

    /// Checks that the stored radio rates equal the coverage aggregate.
    pub fn validate(&self) -> Result<(), ModelError> {
        let err = |reason: String| ModelError::Srd { slice: self.name.clone(), reason };
        self.srd.validate().map_err(err)?;
        let (up, down) = aggregate_radio_demand(&self.coverage);
        let r = &self.srd.nodes[self.srd.radio_node()];
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-300);
        if !close(r.rate_up, up) || !close(r.rate_down, down) {
            return Err(err(format!(
                "radio node rates ({}, {}) differ from coverage aggregate ({up}, {down})",
                r.rate_up, r.rate_down
            )));
        }
        Ok(())
    }

    pub fn radio_node(&self) -> usize {
        self.srd.radio_node()
    }

    pub fn rate_up(&self) -> f64 {
        self.srd.nodes[self.radio_node()].rate_up
    }

    pub fn rate_down(&self) -> f64 {
        self.srd.nodes[self.radio_node()].rate_down
    }

    pub fn has_radio_demand(&self) -> bool {
        self.rate_up() > 0.0 || self.rate_down() > 0.0
    }

    /// Slice with all demands scaled by `delta`; minima stay put.
    pub fn scaled(&self, delta: f64) -> SliceSpec {
        SliceSpec { name: self.name.clone(), srd: self.srd.scaled(delta), coverage: self.coverage.with_scaled_rates(delta) }
    }
}
