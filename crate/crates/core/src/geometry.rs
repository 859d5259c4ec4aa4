use serde::{Deserialize, Serialize};

use crate::error::ModelError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]` in meters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Rect { x0, y0, x1, y1 }
    }

    pub fn with_size(x0: f64, y0: f64, w: f64, h: f64) -> Self {
        Rect { x0, y0, x1: x0 + w, y1: y0 + h }
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> f64 {
        self.width().max(0.0) * self.height().max(0.0)
    }

    pub fn center(&self) -> Point {
        Point { x: 0.5 * (self.x0 + self.x1), y: 0.5 * (self.y0 + self.y1) }
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            Point::new(self.x0, self.y0),
            Point::new(self.x1, self.y0),
            Point::new(self.x0, self.y1),
            Point::new(self.x1, self.y1),
        ]
    }

    pub fn is_valid(&self) -> bool {
        [self.x0, self.y0, self.x1, self.y1].iter().all(|v| v.is_finite()) && self.x1 > self.x0 && self.y1 > self.y0
    }

    pub fn overlap_area(&self, other: &Rect) -> f64 {
        let w = self.x1.min(other.x1) - self.x0.max(other.x0);
        let h = self.y1.min(other.y1) - self.y0.max(other.y0);
        if w > 0.0 && h > 0.0 {
            w * h
        } else {
            0.0
        }
    }

    /// Half-open membership test, so adjacent rectangles never share a point.
    pub fn contains(&self, p: &Point) -> bool {
        p.x >= self.x0 && p.x < self.x1 && p.y >= self.y0 && p.y < self.y1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub rect: Rect,
    pub center: Point,
}

/// Grid cells of `cell_w x cell_h` covering `area`, clipped at the far edges, row-major from `(x0, y0)`.
pub fn partition_area(area: &Rect, cell_w: f64, cell_h: f64) -> Result<Vec<Cell>, ModelError> {
    if !(cell_w > 0.0 && cell_h > 0.0 && cell_w.is_finite() && cell_h.is_finite()) {
        return Err(ModelError::Coverage(format!("cell size must be positive, got {cell_w} x {cell_h}")));
    }
    if !area.is_valid() {
        return Err(ModelError::Coverage(format!("degenerate area {area:?}")));
    }
    // The small slack keeps exact multiples from producing an empty sliver cell.
    let nx = ((area.width() / cell_w) - 1e-9).ceil().max(1.0) as usize;
    let ny = ((area.height() / cell_h) - 1e-9).ceil().max(1.0) as usize;
    let mut cells = Vec::with_capacity(nx * ny);
    for r in 0..ny {
        let y0 = area.y0 + r as f64 * cell_h;
        let y1 = if r + 1 == ny { area.y1 } else { (y0 + cell_h).min(area.y1) };
        for c in 0..nx {
            let x0 = area.x0 + c as f64 * cell_w;
            let x1 = if c + 1 == nx { area.x1 } else { (x0 + cell_w).min(area.x1) };
            let rect = Rect { x0, y0, x1, y1 };
            cells.push(Cell { rect, center: rect.center() });
        }
    }
    Ok(cells)
}

/// Meters per degree of latitude used by the local projection.
pub const METERS_PER_DEGREE: f64 = 111_320.0;

/// Equirectangular projection of `(lat, lon)` degrees about `origin = (lat0, lon0)`.
pub fn project_equirectangular(lat: f64, lon: f64, origin: (f64, f64)) -> Point {
    let (lat0, lon0) = origin;
    Point {
        x: METERS_PER_DEGREE * lat0.to_radians().cos() * (lon - lon0),
        y: METERS_PER_DEGREE * (lat - lat0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_tiling() {
        let cells = partition_area(&Rect::with_size(0.0, 0.0, 180.0, 206.0), 90.0, 103.0).unwrap();
        assert_eq!(cells.len(), 4);
        assert_eq!(cells[1].center, Point::new(135.0, 51.5));
        assert_eq!(cells[2].center, Point::new(45.0, 154.5));
    }

    #[test]
    fn clipped_study_area() {
        let area = Rect::with_size(0.0, 0.0, 1430.0, 4950.0);
        let cells = partition_area(&area, 90.0, 103.0).unwrap();
        // Independent enumeration of grid origins inside the area.
        let mut n = 0;
        let mut y = 0.0;
        while y < 4950.0 {
            let mut x = 0.0;
            while x < 1430.0 {
                n += 1;
                x += 90.0;
            }
            y += 103.0;
        }
        assert_eq!(cells.len(), n);
        assert_eq!(cells.len(), 16 * 49);
        let total: f64 = cells.iter().map(|c| c.rect.area()).sum();
        assert!((total - area.area()).abs() / area.area() < 1e-12);
        let last = cells.last().unwrap().rect;
        assert!((last.width() - 80.0).abs() < 1e-9 && (last.height() - 6.0).abs() < 1e-9);
    }

    #[test]
    fn small_area_is_one_cell() {
        let area = Rect::with_size(5.0, 5.0, 30.0, 40.0);
        let cells = partition_area(&area, 90.0, 103.0).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].rect, area);
    }

    #[test]
    fn rejects_degenerate() {
        assert!(partition_area(&Rect::with_size(0.0, 0.0, 0.0, 5.0), 1.0, 1.0).is_err());
        assert!(partition_area(&Rect::with_size(0.0, 0.0, 5.0, 5.0), 0.0, 1.0).is_err());
    }

    #[test]
    fn projection() {
        assert_eq!(project_equirectangular(48.9, 2.36, (48.9, 2.36)), Point::new(0.0, 0.0));
        let p = project_equirectangular(48.9, 2.361, (48.9, 2.36));
        assert!((p.x - 73.2).abs() < 0.5, "{}", p.x);
        assert!(p.y.abs() < 1e-9);
    }
}
