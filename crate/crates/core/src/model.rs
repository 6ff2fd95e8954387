//! Layout data model: cells, geometry and structural validation.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use thiserror::Error;

/// Number of clock zones in the four-phase scheme.
pub const NUM_ZONES: u8 = 4;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("dot occupancies sum to {0}, polarization undefined")]
    ZeroOccupancy(f64),
}

/// Index of a cell within its layout (canonical `(layer, y, x)` order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId(pub usize);

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Functional role of a cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CellKind {
    Normal,
    Input(String),
    Output(String),
    /// Polarization pinned to +1 (`true`, logic 1) or -1 (`false`, logic 0).
    Fixed(bool),
}

impl CellKind {
    pub fn label(&self) -> Option<&str> {
        match self {
            CellKind::Input(l) | CellKind::Output(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_input(&self) -> bool {
        matches!(self, CellKind::Input(_))
    }

    pub fn is_output(&self) -> bool {
        matches!(self, CellKind::Output(_))
    }

    pub fn is_fixed(&self) -> bool {
        matches!(self, CellKind::Fixed(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub x: i32,
    pub y: i32,
    pub layer: i32,
    pub zone: u8,
    pub kind: CellKind,
    /// 45-degree rotated cell. Representable, but rejected by the engine.
    pub rotated: bool,
}

impl Cell {
    pub fn new(x: i32, y: i32, zone: u8, kind: CellKind) -> Self {
        Cell {
            x,
            y,
            layer: 0,
            zone,
            kind,
            rotated: false,
        }
    }

    pub fn normal(x: i32, y: i32, zone: u8) -> Self {
        Cell::new(x, y, zone, CellKind::Normal)
    }

    /// Polarization a simulation starts from: the pinned value for fixed
    /// cells, zero otherwise.
    pub fn initial_polarization(&self) -> f64 {
        match self.kind {
            CellKind::Fixed(true) => 1.0,
            CellKind::Fixed(false) => -1.0,
            _ => 0.0,
        }
    }

    pub(crate) fn sort_key(&self) -> (i32, i32, i32) {
        (self.layer, self.y, self.x)
    }
}

/// Occupation probabilities of the four dots, numbered clockwise from the
/// top-right dot so that dots 1 and 3 form the logic-1 diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DotOccupancies {
    pub rho1: f64,
    pub rho2: f64,
    pub rho3: f64,
    pub rho4: f64,
}

impl DotOccupancies {
    pub fn new(rho1: f64, rho2: f64, rho3: f64, rho4: f64) -> Self {
        DotOccupancies {
            rho1,
            rho2,
            rho3,
            rho4,
        }
    }
}

pub fn polarization_from_occupancies(o: &DotOccupancies) -> Result<f64, ModelError> {
    let total = o.rho1 + o.rho2 + o.rho3 + o.rho4;
    if total.is_nan() || total <= 0.0 {
        return Err(ModelError::ZeroOccupancy(total));
    }
    Ok((o.rho1 + o.rho3 - o.rho2 - o.rho4) / total)
}

/// Physical dimensions shared by every cell of a layout, in nanometres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub cell_size: f64,
    pub dot_diameter: f64,
    pub grid_pitch: f64,
    pub layer_separation: f64,
}

impl Default for Geometry {
    fn default() -> Self {
        Geometry {
            cell_size: 18.0,
            dot_diameter: 5.0,
            grid_pitch: 20.0,
            layer_separation: 11.5,
        }
    }
}

impl Geometry {
    pub fn is_valid(&self) -> bool {
        let all_positive = [
            self.cell_size,
            self.dot_diameter,
            self.grid_pitch,
            self.layer_separation,
        ]
        .iter()
        .all(|v| v.is_finite() && *v > 0.0);
        all_positive && self.dot_diameter < self.cell_size && self.cell_size < 2.0 * self.grid_pitch
    }
}

/// A named set of cells. Cells are kept in canonical `(layer, y, x)` order,
/// which also defines their [`CellId`]s and the order of labeled ports.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub name: String,
    pub geometry: Geometry,
    cells: Vec<Cell>,
}

impl Layout {
    pub fn new(name: impl Into<String>, geometry: Geometry, mut cells: Vec<Cell>) -> Self {
        cells.sort_by_key(Cell::sort_key);
        Layout {
            name: name.into(),
            geometry,
            cells,
        }
    }

    pub fn empty(name: impl Into<String>) -> Self {
        Layout::new(name, Geometry::default(), Vec::new())
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, id: CellId) -> &Cell {
        &self.cells[id.0]
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = CellId> {
        (0..self.cells.len()).map(CellId)
    }

    /// Input cells in port order.
    pub fn inputs(&self) -> Vec<(CellId, &str)> {
        self.ports(CellKind::is_input)
    }

    /// Output cells in port order.
    pub fn outputs(&self) -> Vec<(CellId, &str)> {
        self.ports(CellKind::is_output)
    }

    fn ports(&self, pred: fn(&CellKind) -> bool) -> Vec<(CellId, &str)> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| pred(&c.kind))
            .filter_map(|(i, c)| c.kind.label().map(|l| (CellId(i), l)))
            .collect()
    }

    pub fn find_label(&self, label: &str) -> Option<CellId> {
        self.cells
            .iter()
            .position(|c| c.kind.label() == Some(label))
            .map(CellId)
    }

    /// Returns a copy with every cell shifted by `(dx, dy)` grid units.
    pub fn translated(&self, dx: i32, dy: i32) -> Layout {
        let cells = self
            .cells
            .iter()
            .map(|c| Cell {
                x: c.x + dx,
                y: c.y + dy,
                ..c.clone()
            })
            .collect();
        Layout::new(self.name.clone(), self.geometry, cells)
    }

    /// Inclusive grid bounding box `(min_x, min_y, max_x, max_y)`.
    pub fn bounding_box(&self) -> Option<(i32, i32, i32, i32)> {
        let first = self.cells.first()?;
        let init = (first.x, first.y, first.x, first.y);
        Some(self.cells.iter().fold(init, |(x0, y0, x1, y1), c| {
            (x0.min(c.x), y0.min(c.y), x1.max(c.x), y1.max(c.y))
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ZoneOutOfRange { x: i32, y: i32, zone: u8 },
    DuplicatePosition { x: i32, y: i32, layer: i32 },
    DuplicateLabel(String),
    EmptyLabel { x: i32, y: i32 },
    InvalidGeometry,
    MultilayerUnsupported { x: i32, y: i32, layer: i32 },
    RotatedUnsupported { x: i32, y: i32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZoneOutOfRange { x, y, zone } => {
                write!(f, "zone-out-of-range: cell ({x},{y}) has zone {zone}")
            }
            Violation::DuplicatePosition { x, y, layer } => {
                write!(f, "duplicate-position: ({x},{y}) layer {layer}")
            }
            Violation::DuplicateLabel(l) => write!(f, "duplicate-label: {l}"),
            Violation::EmptyLabel { x, y } => write!(f, "empty-label: cell ({x},{y})"),
            Violation::InvalidGeometry => write!(f, "invalid-geometry"),
            Violation::MultilayerUnsupported { x, y, layer } => {
                write!(f, "multilayer-unsupported: cell ({x},{y}) on layer {layer}")
            }
            Violation::RotatedUnsupported { x, y } => {
                write!(f, "rotated-unsupported: cell ({x},{y})")
            }
        }
    }
}

/// Checks every layout invariant plus the engine's single-layer,
/// rotation-free restriction. An empty result means the layout is usable.
pub fn validate(layout: &Layout) -> Vec<Violation> {
    let mut out = Vec::new();
    if !layout.geometry.is_valid() {
        out.push(Violation::InvalidGeometry);
    }
    let mut positions = HashSet::new();
    let mut labels: BTreeMap<&str, usize> = BTreeMap::new();
    for c in layout.cells() {
        if c.zone >= NUM_ZONES {
            out.push(Violation::ZoneOutOfRange {
                x: c.x,
                y: c.y,
                zone: c.zone,
            });
        }
        if !positions.insert((c.x, c.y, c.layer)) {
            out.push(Violation::DuplicatePosition {
                x: c.x,
                y: c.y,
                layer: c.layer,
            });
        }
        if let Some(l) = c.kind.label() {
            if l.is_empty() {
                out.push(Violation::EmptyLabel { x: c.x, y: c.y });
            }
            *labels.entry(l).or_default() += 1;
        }
        if c.layer != 0 {
            out.push(Violation::MultilayerUnsupported {
                x: c.x,
                y: c.y,
                layer: c.layer,
            });
        }
        if c.rotated {
            out.push(Violation::RotatedUnsupported { x: c.x, y: c.y });
        }
    }
    out.extend(
        labels
            .into_iter()
            .filter(|(_, n)| *n > 1)
            .map(|(l, _)| Violation::DuplicateLabel(l.to_string())),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wire() -> Layout {
        Layout::new(
            "wire",
            Geometry::default(),
            vec![
                Cell::new(0, 0, 0, CellKind::Input("in".into())),
                Cell::normal(1, 0, 0),
                Cell::new(2, 0, 0, CellKind::Output("out".into())),
            ],
        )
    }

    #[test]
    fn occupancy_examples() {
        let one = DotOccupancies::new(0.5, 0.0, 0.5, 0.0);
        let zero = DotOccupancies::new(0.0, 0.5, 0.0, 0.5);
        let null = DotOccupancies::new(0.25, 0.25, 0.25, 0.25);
        assert_eq!(polarization_from_occupancies(&one).unwrap(), 1.0);
        assert_eq!(polarization_from_occupancies(&zero).unwrap(), -1.0);
        assert_eq!(polarization_from_occupancies(&null).unwrap(), 0.0);
    }

    #[test]
    fn zero_occupancy_is_domain_error() {
        let o = DotOccupancies::new(0.0, 0.0, 0.0, 0.0);
        assert!(matches!(
            polarization_from_occupancies(&o),
            Err(ModelError::ZeroOccupancy(_))
        ));
    }

    #[test]
    fn valid_wire_has_no_violations() {
        assert!(validate(&wire()).is_empty());
    }

    #[test]
    fn layer_one_is_rejected() {
        let mut cells = wire().cells().to_vec();
        cells[1].layer = 1;
        let v = validate(&Layout::new("w", Geometry::default(), cells));
        assert_eq!(
            v,
            vec![Violation::MultilayerUnsupported {
                x: 1,
                y: 0,
                layer: 1
            }]
        );
    }

    #[test]
    fn rotated_cell_is_rejected() {
        let mut cells = wire().cells().to_vec();
        cells[1].rotated = true;
        let v = validate(&Layout::new("w", Geometry::default(), cells));
        assert_eq!(v, vec![Violation::RotatedUnsupported { x: 1, y: 0 }]);
    }

    #[test]
    fn duplicate_output_label() {
        let mut cells = wire().cells().to_vec();
        cells.push(Cell::new(0, 2, 0, CellKind::Output("Sum".into())));
        cells.push(Cell::new(2, 2, 0, CellKind::Output("Sum".into())));
        let v = validate(&Layout::new("w", Geometry::default(), cells));
        assert_eq!(v, vec![Violation::DuplicateLabel("Sum".into())]);
    }

    #[test]
    fn ports_follow_canonical_order() {
        let l = Layout::new(
            "p",
            Geometry::default(),
            vec![
                Cell::new(0, 2, 0, CellKind::Input("B".into())),
                Cell::new(0, 0, 0, CellKind::Input("A".into())),
            ],
        );
        let labels: Vec<_> = l.inputs().into_iter().map(|(_, s)| s).collect();
        assert_eq!(labels, ["A", "B"]);
    }

    #[test]
    fn default_geometry_is_valid() {
        assert!(Geometry::default().is_valid());
        let bad = Geometry {
            dot_diameter: 20.0,
            ..Geometry::default()
        };
        assert!(!bad.is_valid());
    }
}
