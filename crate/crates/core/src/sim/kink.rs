//! Electrostatic coupling between cells.
//!
//! Each cell carries four dots in its corners, each dot separated from the
//! cell edge by half a dot diameter. A polarized cell holds one electron on each
//! dot of its diagonal and a neutralizing +e/2 on every dot, so each dot
//! carries ±e/2. The kink energy is the Coulomb energy of the anti-aligned
//! pair minus that of the aligned pair.

use std::f64::consts::PI;

use thiserror::Error;

use crate::model::{Cell, CellId, Geometry, Layout};
use crate::physics::{ELEMENTARY_CHARGE, VACUUM_PERMITTIVITY};

#[derive(Debug, Error, PartialEq)]
pub enum KinkError {
    #[error("cells ({0},{1}) coincide")]
    Coincident(i32, i32),
}

/// Dot offsets from the cell centre (in units of the dot offset),
/// numbered clockwise from top-right, with the sign each dot's charge takes
/// for a +1 polarized cell (dots 1 and 3 occupied).
const DOTS: [(f64, f64, f64); 4] = [
    (1.0, -1.0, 1.0),
    (1.0, 1.0, -1.0),
    (-1.0, 1.0, 1.0),
    (-1.0, -1.0, -1.0),
];

fn position_nm(c: &Cell, g: &Geometry) -> (f64, f64) {
    (f64::from(c.x) * g.grid_pitch, f64::from(c.y) * g.grid_pitch)
}

/// Kink energy in joules for cells separated by `(dx, dy)` nanometres.
pub fn kink_energy_at(dx: f64, dy: f64, g: &Geometry, eps_r: f64) -> f64 {
    // E(d) = E(-d); summing in one canonical orientation keeps the table
    // exactly symmetric
    let (dx, dy) = if dx < 0.0 || (dx == 0.0 && dy < 0.0) {
        (-dx, -dy)
    } else {
        (dx, dy)
    };
    let inset = g.cell_size / 2.0 - g.dot_diameter;
    let q = ELEMENTARY_CHARGE / 2.0;
    let coulomb = 1.0 / (4.0 * PI * VACUUM_PERMITTIVITY * eps_r);
    // interaction of two +1 cells; anti-aligned is its negation
    let mut aligned = 0.0;
    for (ax, ay, sa) in DOTS {
        for (bx, by, sb) in DOTS {
            let rx = dx + (bx - ax) * inset;
            let ry = dy + (by - ay) * inset;
            let r = (rx * rx + ry * ry).sqrt() * 1e-9;
            aligned += (sa * q) * (sb * q) / r;
        }
    }
    -2.0 * coulomb * aligned
}

/// Kink energy between two layer-0 cells, zero beyond `radius_nm`
/// (centre to centre).
pub fn kink_energy(
    a: &Cell,
    b: &Cell,
    g: &Geometry,
    eps_r: f64,
    radius_nm: f64,
) -> Result<f64, KinkError> {
    if (a.x, a.y) == (b.x, b.y) {
        return Err(KinkError::Coincident(a.x, a.y));
    }
    let (ax, ay) = position_nm(a, g);
    let (bx, by) = position_nm(b, g);
    let (dx, dy) = (bx - ax, by - ay);
    if (dx * dx + dy * dy).sqrt() > radius_nm {
        return Ok(0.0);
    }
    Ok(kink_energy_at(dx, dy, g, eps_r))
}

/// Sparse symmetric coupling table for one layout.
#[derive(Debug, Clone)]
pub struct KinkTable {
    neighbours: Vec<Vec<(usize, f64)>>,
}

impl KinkTable {
    pub fn build(layout: &Layout, eps_r: f64, radius_nm: f64) -> Self {
        let g = &layout.geometry;
        let cells = layout.cells();
        let reach = (radius_nm / g.grid_pitch).floor() as i32;
        let mut neighbours = vec![Vec::new(); cells.len()];
        for (i, a) in cells.iter().enumerate() {
            for (j, b) in cells.iter().enumerate().skip(i + 1) {
                if (a.x - b.x).abs() > reach || (a.y - b.y).abs() > reach {
                    continue;
                }
                let ek = kink_energy(a, b, g, eps_r, radius_nm).unwrap_or(0.0);
                if ek != 0.0 {
                    neighbours[i].push((j, ek));
                    neighbours[j].push((i, ek));
                }
            }
        }
        for n in &mut neighbours {
            n.sort_by_key(|&(j, _)| j);
        }
        KinkTable { neighbours }
    }

    pub fn neighbours(&self, id: CellId) -> &[(usize, f64)] {
        &self.neighbours[id.0]
    }

    pub fn get(&self, a: CellId, b: CellId) -> f64 {
        self.neighbours[a.0]
            .binary_search_by_key(&b.0, |&(j, _)| j)
            .map(|k| self.neighbours[a.0][k].1)
            .unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.neighbours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbours.is_empty()
    }

    /// Σ_j E_k(i,j)·P_j
    pub fn field(&self, id: CellId, pols: &[f64]) -> f64 {
        self.neighbours[id.0]
            .iter()
            .map(|&(j, ek)| ek * pols[j])
            .sum()
    }

    /// Largest coupling to an orthogonally adjacent cell anywhere in the
    /// layout; zero if no cell has such a neighbour.
    pub fn max_adjacent(&self, layout: &Layout) -> f64 {
        let cells = layout.cells();
        self.neighbours
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| {
                ns.iter().filter_map(move |&(j, ek)| {
                    let (a, b) = (&cells[i], &cells[j]);
                    ((a.x - b.x).abs() + (a.y - b.y).abs() == 1).then_some(ek)
                })
            })
            .fold(0.0, f64::max)
    }
}
