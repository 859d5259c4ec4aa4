//! Link budget and per-resource-block rates with the αβγ path-loss model.

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::geometry::{Cell, Point};
use crate::slice::SliceSpec;
use crate::topology::InfrastructureGraph;

/// Which point of a cell stands for all of its users.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conservatism {
    #[default]
    Center,
    /// Farthest corner from the RRH.
    WorstCorner,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RadioParams {
    /// Hz.
    pub rb_bandwidth: f64,
    /// GHz.
    pub carrier_freq: f64,
    /// dBm.
    pub tx_power_down: f64,
    /// dBi.
    pub tx_gain_down: f64,
    pub tx_power_up: f64,
    pub tx_gain_up: f64,
    pub rx_gain_down: f64,
    pub rx_gain_up: f64,
    /// dBm/Hz.
    pub noise_density: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub conservatism: Conservatism,
}

impl Default for RadioParams {
    fn default() -> Self {
        RadioParams {
            rb_bandwidth: 0.2e6,
            carrier_freq: 2.6,
            tx_power_down: 43.0,
            tx_gain_down: 15.0,
            tx_power_up: 23.0,
            tx_gain_up: 3.0,
            rx_gain_down: 3.0,
            rx_gain_up: 15.0,
            noise_density: -174.0,
            alpha: 3.6,
            beta: 7.6,
            gamma: 2.0,
            conservatism: Conservatism::Center,
        }
    }
}

impl RadioParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.rb_bandwidth > 0.0 && self.rb_bandwidth.is_finite()) {
            return Err(ModelError::Radio("resource-block bandwidth must be > 0".into()));
        }
        if !(self.carrier_freq > 0.0 && self.carrier_freq.is_finite()) {
            return Err(ModelError::Radio("carrier frequency must be > 0".into()));
        }
        if !(self.alpha >= 0.0 && self.gamma >= 0.0) {
            return Err(ModelError::Radio("alpha and gamma must be >= 0".into()));
        }
        Ok(())
    }

    /// Noise power over one resource block, dBm.
    pub fn noise_power_dbm(&self) -> f64 {
        self.noise_density + 10.0 * self.rb_bandwidth.log10()
    }
}

/// `10 α log10(d) + β + 10 γ log10(f)` in dB, `d` in meters, `f` in GHz.
pub fn path_loss(d: f64, f: f64, params: &RadioParams) -> Result<f64, ModelError> {
    if !(d > 0.0) || !(f > 0.0) {
        return Err(ModelError::Radio(format!("path loss needs d > 0 and f > 0, got d = {d}, f = {f}")));
    }
    Ok(10.0 * params.alpha * d.log10() + params.beta + 10.0 * params.gamma * f.log10())
}

/// Distance to the cell's representative point, clamped to 1 m.
pub fn representative_distance(rrh: &Point, cell: &Cell, policy: Conservatism) -> f64 {
    let d = match policy {
        Conservatism::Center => rrh.distance(&cell.center),
        Conservatism::WorstCorner => cell.rect.corners().iter().map(|c| rrh.distance(c)).fold(0.0, f64::max),
    };
    d.max(1.0)
}

/// Shannon rate of one resource block for a given transmit budget at distance `d`.
pub fn rate_at_distance(d: f64, tx_power: f64, tx_gain: f64, rx_gain: f64, params: &RadioParams) -> f64 {
    let pl = path_loss(d.max(1.0), params.carrier_freq, params).expect("validated distance and frequency");
    let rx = tx_power + tx_gain + rx_gain - pl;
    let snr = 10f64.powf((rx - params.noise_power_dbm()) / 10.0);
    params.rb_bandwidth * (1.0 + snr).log2()
}

pub fn bits_per_rb_down(rrh: &Point, cell: &Cell, params: &RadioParams) -> f64 {
    let d = representative_distance(rrh, cell, params.conservatism);
    rate_at_distance(d, params.tx_power_down, params.tx_gain_down, params.rx_gain_down, params)
}

pub fn bits_per_rb_up(rrh: &Point, cell: &Cell, params: &RadioParams) -> f64 {
    let d = representative_distance(rrh, cell, params.conservatism);
    rate_at_distance(d, params.tx_power_up, params.tx_gain_up, params.rx_gain_up, params)
}

/// Per-RB rates for every (slice, RRH, cell), RRHs in [`InfrastructureGraph::rrhs`] order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateTables {
    pub num_rrh: usize,
    pub cells: Vec<usize>,
    up: Vec<Vec<f64>>,
    down: Vec<Vec<f64>>,
}

impl RateTables {
    /// Table for slices that have no coverage cells.
    pub fn without_cells(num_rrh: usize, num_slices: usize) -> Self {
        RateTables { num_rrh, cells: vec![0; num_slices], up: vec![Vec::new(); num_slices], down: vec![Vec::new(); num_slices] }
    }

    pub fn up(&self, slice: usize, rrh: usize, cell: usize) -> f64 {
        self.up[slice][rrh * self.cells[slice] + cell]
    }

    pub fn down(&self, slice: usize, rrh: usize, cell: usize) -> f64 {
        self.down[slice][rrh * self.cells[slice] + cell]
    }

    pub fn num_slices(&self) -> usize {
        self.cells.len()
    }

    /// Table with a subset of the slices, in the given order.
    pub fn select(&self, slices: &[usize]) -> RateTables {
        RateTables {
            num_rrh: self.num_rrh,
            cells: slices.iter().map(|&s| self.cells[s]).collect(),
            up: slices.iter().map(|&s| self.up[s].clone()).collect(),
            down: slices.iter().map(|&s| self.down[s].clone()).collect(),
        }
    }
}

pub fn precompute_rate_tables(
    infra: &InfrastructureGraph,
    slices: &[SliceSpec],
    params: &RadioParams,
) -> Result<RateTables, ModelError> {
    params.validate()?;
    let positions: Vec<Point> = infra
        .rrhs()
        .iter()
        .map(|&i| {
            infra.node(i).position.ok_or_else(|| ModelError::Node { node: infra.node(i).name.clone(), reason: "rrh without position".into() })
        })
        .collect::<Result<_, _>>()?;
    let mut up = Vec::with_capacity(slices.len());
    let mut down = Vec::with_capacity(slices.len());
    for s in slices {
        let cells = s.coverage.cells();
        let mut u = Vec::with_capacity(positions.len() * cells.len());
        let mut d = Vec::with_capacity(positions.len() * cells.len());
        for p in &positions {
            for c in cells {
                u.push(bits_per_rb_up(p, c, params));
                d.push(bits_per_rb_down(p, c, params));
            }
        }
        up.push(u);
        down.push(d);
    }
    Ok(RateTables { num_rrh: positions.len(), cells: slices.iter().map(|s| s.coverage.num_cells()).collect(), up, down })
}
