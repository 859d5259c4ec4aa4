use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::geometry::{partition_area, Cell, Point, Rect};

/// Rectangle with an additive density contribution (users per m²).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityLayer {
    pub rect: Rect,
    pub density: f64,
}

/// Piecewise-constant user density: a background level plus additive rectangular layers.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Density {
    #[serde(default)]
    pub background: f64,
    #[serde(default)]
    pub layers: Vec<DensityLayer>,
}

impl Density {
    pub fn uniform(density: f64) -> Self {
        Density { background: density, layers: Vec::new() }
    }

    pub fn value_at(&self, p: &Point) -> f64 {
        self.background + self.layers.iter().filter(|l| l.rect.contains(p)).map(|l| l.density).sum::<f64>()
    }

    /// Exact integral over `rect`.
    pub fn integrate(&self, rect: &Rect) -> f64 {
        self.background * rect.area() + self.layers.iter().map(|l| l.density * l.rect.overlap_area(rect)).sum::<f64>()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct CoverageDef {
    area: Vec<Rect>,
    density: Density,
    rate_up: f64,
    rate_down: f64,
    cell_width: f64,
    cell_height: f64,
}

/// Coverage area of a slice, its user density, per-user rates (bit/s) and the cell partition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CoverageDef", into = "CoverageDef")]
pub struct CoverageSpec {
    area: Vec<Rect>,
    density: Density,
    rate_up: f64,
    rate_down: f64,
    cell_width: f64,
    cell_height: f64,
    cells: Vec<Cell>,
    users: Vec<f64>,
}

impl TryFrom<CoverageDef> for CoverageSpec {
    type Error = ModelError;
    fn try_from(d: CoverageDef) -> Result<Self, ModelError> {
        CoverageSpec::new(d.area, d.density, d.rate_up, d.rate_down, d.cell_width, d.cell_height)
    }
}

impl From<CoverageSpec> for CoverageDef {
    fn from(c: CoverageSpec) -> Self {
        CoverageDef {
            area: c.area,
            density: c.density,
            rate_up: c.rate_up,
            rate_down: c.rate_down,
            cell_width: c.cell_width,
            cell_height: c.cell_height,
        }
    }
}

/// Cell size used by default: 90 m x 103 m.
pub const DEFAULT_CELL: (f64, f64) = (90.0, 103.0);

impl CoverageSpec {
    /// `area` is a union of pairwise-disjoint rectangles; each is partitioned on its own.
    pub fn new(
        area: Vec<Rect>,
        density: Density,
        rate_up: f64,
        rate_down: f64,
        cell_width: f64,
        cell_height: f64,
    ) -> Result<Self, ModelError> {
        if !(rate_up.is_finite() && rate_up >= 0.0 && rate_down.is_finite() && rate_down >= 0.0) {
            return Err(ModelError::Coverage("per-user rates must be finite and >= 0".into()));
        }
        if !(density.background.is_finite() && density.background >= 0.0)
            || density.layers.iter().any(|l| !(l.density.is_finite() && l.density >= 0.0) || !l.rect.is_valid())
        {
            return Err(ModelError::Coverage("densities must be finite and >= 0 over valid rectangles".into()));
        }
        for (a, r) in area.iter().enumerate() {
            for s in &area[a + 1..] {
                if r.overlap_area(s) > 0.0 {
                    return Err(ModelError::Coverage(format!("area rectangles {r:?} and {s:?} overlap")));
                }
            }
        }
        let mut cells = Vec::new();
        for r in &area {
            cells.extend(partition_area(r, cell_width, cell_height)?);
        }
        let users = cells.iter().map(|c| density.integrate(&c.rect)).collect();
        Ok(CoverageSpec { area, density, rate_up, rate_down, cell_width, cell_height, cells, users })
    }

    /// Uniform density over `area` totalling `users`.
    pub fn uniform_users(
        area: Vec<Rect>,
        users: f64,
        rate_up: f64,
        rate_down: f64,
        cell: (f64, f64),
    ) -> Result<Self, ModelError> {
        let total: f64 = area.iter().map(Rect::area).sum();
        let density = if total > 0.0 { users / total } else { 0.0 };
        CoverageSpec::new(area, Density::uniform(density), rate_up, rate_down, cell.0, cell.1)
    }

    /// A slice without radio coverage.
    pub fn none() -> Self {
        CoverageSpec {
            area: Vec::new(),
            density: Density::default(),
            rate_up: 0.0,
            rate_down: 0.0,
            cell_width: DEFAULT_CELL.0,
            cell_height: DEFAULT_CELL.1,
            cells: Vec::new(),
            users: Vec::new(),
        }
    }

    pub fn area(&self) -> &[Rect] {
        &self.area
    }

    pub fn density(&self) -> &Density {
        &self.density
    }

    pub fn rate_up(&self) -> f64 {
        self.rate_up
    }

    pub fn rate_down(&self) -> f64 {
        self.rate_down
    }

    pub fn cell_size(&self) -> (f64, f64) {
        (self.cell_width, self.cell_height)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    /// Users per cell, precomputed at construction.
    pub fn cell_users(&self) -> &[f64] {
        &self.users
    }

    /// Same geometry with both per-user rates multiplied by `factor`.
    pub fn with_scaled_rates(&self, factor: f64) -> Self {
        CoverageSpec { rate_up: self.rate_up * factor, rate_down: self.rate_down * factor, ..self.clone() }
    }
}

/// Total uplink and downlink demand (bit/s) over the whole coverage area.
pub fn aggregate_radio_demand(coverage: &CoverageSpec) -> (f64, f64) {
    let users: f64 = coverage.area.iter().map(|r| coverage.density.integrate(r)).sum();
    (coverage.rate_up * users, coverage.rate_down * users)
}

/// Number of users in cell `q`.
pub fn per_cell_demand(coverage: &CoverageSpec, q: usize) -> Result<f64, ModelError> {
    coverage.users.get(q).copied().ok_or(ModelError::Index { index: q, len: coverage.users.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn square() -> Rect {
        Rect::with_size(0.0, 0.0, 180.0, 206.0)
    }

    #[test]
    fn aggregate_examples() {
        let hd = CoverageSpec::uniform_users(vec![square()], 200.0, 0.0, 4e6, DEFAULT_CELL).unwrap();
        let (u, d) = aggregate_radio_demand(&hd);
        assert_eq!(u, 0.0);
        assert!((d - 800e6).abs() < 1e-3);
        let cam = CoverageSpec::uniform_users(vec![square()], 50.0, 1e6, 0.0, DEFAULT_CELL).unwrap();
        assert!((aggregate_radio_demand(&cam).0 - 50e6).abs() < 1e-3);
        let zero = CoverageSpec::new(vec![square()], Density::uniform(0.0), 1e6, 1e6, 90.0, 103.0).unwrap();
        assert_eq!(aggregate_radio_demand(&zero), (0.0, 0.0));
        assert_eq!(aggregate_radio_demand(&CoverageSpec::none()), (0.0, 0.0));
    }

    #[test]
    fn per_cell_examples() {
        let c = CoverageSpec::uniform_users(vec![square()], 200.0, 0.0, 1.0, DEFAULT_CELL).unwrap();
        for q in 0..4 {
            assert!((per_cell_demand(&c, q).unwrap() - 50.0).abs() < 1e-9);
        }
        assert!(per_cell_demand(&c, 4).is_err());

        let layer = DensityLayer { rect: Rect::with_size(90.0, 0.0, 90.0, 103.0), density: 0.01 };
        let one = CoverageSpec::new(vec![square()], Density { background: 0.0, layers: vec![layer] }, 0.0, 1.0, 90.0, 103.0)
            .unwrap();
        let users: Vec<f64> = (0..4).map(|q| per_cell_demand(&one, q).unwrap()).collect();
        assert!((users[1] - 0.01 * 90.0 * 103.0).abs() < 1e-9);
        assert_eq!((users[0], users[2], users[3]), (0.0, 0.0, 0.0));
    }

    #[test]
    fn two_density_monte_carlo() {
        let area = Rect::with_size(0.0, 0.0, 500.0, 400.0);
        let dense = DensityLayer { rect: Rect::new(130.0, 70.0, 310.0, 260.0), density: 0.004 };
        let d = Density { background: 0.001, layers: vec![dense] };
        let c = CoverageSpec::new(vec![area], d.clone(), 0.0, 1.0, 90.0, 103.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (q, cell) in c.cells().iter().enumerate() {
            let n = 200_000;
            let mut acc = 0.0;
            for _ in 0..n {
                let p = Point::new(rng.gen_range(cell.rect.x0..cell.rect.x1), rng.gen_range(cell.rect.y0..cell.rect.y1));
                acc += d.value_at(&p);
            }
            let mc = acc / n as f64 * cell.rect.area();
            let exact = per_cell_demand(&c, q).unwrap();
            assert!((mc - exact).abs() <= 0.005 * exact, "cell {q}: mc {mc} exact {exact}");
        }
    }

    #[test]
    fn sum_of_cells_matches_aggregate() {
        let rects = vec![Rect::with_size(0.0, 0.0, 1430.0, 4950.0), Rect::with_size(2000.0, 0.0, 333.0, 77.0)];
        let d = Density {
            background: 2e-5,
            layers: vec![DensityLayer { rect: Rect::new(100.0, 100.0, 777.0, 1234.5), density: 3e-4 }],
        };
        let c = CoverageSpec::new(rects, d, 1e6, 4e6, 90.0, 103.0).unwrap();
        let sum: f64 = c.cell_users().iter().sum();
        let (u, dn) = aggregate_radio_demand(&c);
        assert!((sum * 1e6 - u).abs() <= 1e-9 * u);
        assert!((sum * 4e6 - dn).abs() <= 1e-9 * dn);
    }

    #[test]
    fn rejects_overlap_and_negative_rates() {
        let r = square();
        assert!(CoverageSpec::new(vec![r, r], Density::uniform(1.0), 0.0, 0.0, 90.0, 103.0).is_err());
        assert!(CoverageSpec::new(vec![r], Density::uniform(1.0), -1.0, 0.0, 90.0, 103.0).is_err());
    }
}
