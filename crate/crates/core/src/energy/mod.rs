//! Upper-bound energy dissipation from a two-state cell Hamiltonian.
//!
//! Each cell is a two-level system with Hamiltonian vector
//! `Γ = [-2γ, 0, -Σ E_k P_j] / ħ`. Its thermal steady-state coherence vector
//! is `λ = -tanh(ħ|Γ| / 2kT) Γ/|Γ|`, and a sudden change `Γ_b -> Γ_a` dissipates
//! at most `ħ/2 Γ_a · (λ_b - λ_a)`.
//!
//! For a pair of input vectors `(v1, v2)` every free cell goes through
//! three steps: the barrier is lowered while its neighbours still hold the
//! `v1` state (release), the neighbourhood changes to `v2` while the cell is
//! erased (switch), and the barrier is raised again (hold). Dissipation in
//! the switch step is switching energy when the cell's settled polarization
//! changes sign between `v1` and `v2`; everything else is leakage.

use std::fmt::Write as _;

use thiserror::Error;

use crate::fmt::sig;
use crate::model::{CellId, Layout};
use crate::physics::{joules_to_ev, BOLTZMANN, HBAR};
use crate::sim::{steady_states, Engine, SimError, SimParams};

/// Exhaustive vector pairs are limited to this many inputs.
pub const MAX_ENERGY_INPUTS: usize = 8;

#[derive(Debug, Error, PartialEq)]
pub enum EnergyError {
    #[error("{0} inputs is too many for exhaustive vector pairs (limit {MAX_ENERGY_INPUTS})")]
    TooManyInputs(usize),
    #[error("temperature must be positive (got {0})")]
    Temperature(f64),
    #[error("tunneling factor must be positive (got {0})")]
    TunnelingFactor(f64),
    #[error("layout has no adjacent cell pair to set the reference kink energy")]
    NoReference,
    #[error("report does not belong to layout `{0}`")]
    LayoutMismatch(String),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParams {
    /// Kelvin.
    pub temperature: f64,
    /// Multiple of the reference kink energy used as the raised barrier γ.
    pub tunneling_factor: f64,
}

impl Default for EnergyParams {
    fn default() -> Self {
        EnergyParams {
            temperature: 2.0,
            tunneling_factor: 1.0,
        }
    }
}

pub type Vec3 = [f64; 3];

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Γ in rad/s for a cell with neighbour field `field` (J) and tunneling
/// energy `gamma` (J).
pub fn hamiltonian(field: f64, gamma: f64) -> Vec3 {
    [-2.0 * gamma / HBAR, 0.0, -field / HBAR]
}

/// Γ for cell `id` of the engine's layout given all polarizations.
pub fn hamiltonian_vector(engine: &Engine, id: CellId, pols: &[f64], gamma: f64) -> Vec3 {
    hamiltonian(engine.kinks().field(id, pols), gamma)
}

/// Thermal steady-state coherence vector; zero when Γ vanishes.
pub fn steady_coherence(gamma_vec: &Vec3, temperature: f64) -> Vec3 {
    let mag = norm(gamma_vec);
    if mag == 0.0 {
        return [0.0; 3];
    }
    let t = (HBAR * mag / (2.0 * BOLTZMANN * temperature)).tanh();
    gamma_vec.map(|g| -t * g / mag)
}

/// Upper bound on the energy (eV) released by a sudden change of Γ.
pub fn transition_dissipation(before: &Vec3, after: &Vec3, temperature: f64) -> f64 {
    let lb = steady_coherence(before, temperature);
    let la = steady_coherence(after, temperature);
    let diff = [lb[0] - la[0], lb[1] - la[1], lb[2] - la[2]];
    joules_to_ev((HBAR / 2.0 * dot(after, &diff)).max(0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellEnergy {
    pub id: CellId,
    pub x: i32,
    pub y: i32,
    pub leakage: f64,
    pub switching: f64,
}

impl CellEnergy {
    pub fn total(&self) -> f64 {
        self.leakage + self.switching
    }
}

/// Per-cell and aggregate dissipation in eV, averaged over ordered input
/// vector pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub layout: String,
    pub per_cell: Vec<CellEnergy>,
    pub avg_leakage: f64,
    pub avg_switching: f64,
    pub total: f64,
    pub params: EnergyParams,
    /// Reference kink energy, J.
    pub reference_ek: f64,
}

pub fn analyze(
    layout: &Layout,
    eparams: &EnergyParams,
    sim: &SimParams,
) -> Result<EnergyReport, EnergyError> {
    if eparams.temperature.is_nan() || eparams.temperature <= 0.0 {
        return Err(EnergyError::Temperature(eparams.temperature));
    }
    if eparams.tunneling_factor.is_nan() || eparams.tunneling_factor <= 0.0 {
        return Err(EnergyError::TunnelingFactor(eparams.tunneling_factor));
    }
    let n = layout.inputs().len();
    if n > MAX_ENERGY_INPUTS {
        return Err(EnergyError::TooManyInputs(n));
    }
    let engine = Engine::new(layout, sim)?;
    let reference_ek = engine.kinks().max_adjacent(layout);
    if reference_ek <= 0.0 {
        return Err(EnergyError::NoReference);
    }
    let states = steady_states(layout, sim)?;
    let (lo, hi) = (sim.clock_low, eparams.tunneling_factor * reference_ek);
    let temp = eparams.temperature;

    let cells = layout.cells();
    let mut per_cell: Vec<CellEnergy> = cells
        .iter()
        .enumerate()
        .map(|(i, c)| CellEnergy {
            id: CellId(i),
            x: c.x,
            y: c.y,
            leakage: 0.0,
            switching: 0.0,
        })
        .collect();
    let fields: Vec<Vec<f64>> = states
        .iter()
        .map(|p| {
            (0..cells.len())
                .map(|i| engine.kinks().field(CellId(i), p))
                .collect()
        })
        .collect();

    let pairs = (states.len() * states.len()) as f64;
    for (i, acc) in per_cell.iter_mut().enumerate() {
        if !engine.is_free(CellId(i)) {
            continue;
        }
        for (v1, f1) in fields.iter().enumerate() {
            let held = hamiltonian(f1[i], lo);
            let released = hamiltonian(f1[i], hi);
            let release = transition_dissipation(&held, &released, temp);
            for (v2, f2) in fields.iter().enumerate() {
                let switched = hamiltonian(f2[i], hi);
                let switch = transition_dissipation(&released, &switched, temp);
                let hold = transition_dissipation(&switched, &hamiltonian(f2[i], lo), temp);
                acc.leakage += release + hold;
                if (states[v1][i] >= 0.0) != (states[v2][i] >= 0.0) {
                    acc.switching += switch;
                } else {
                    acc.leakage += switch;
                }
            }
        }
        acc.leakage /= pairs;
        acc.switching /= pairs;
    }
    let avg_leakage: f64 = per_cell.iter().map(|c| c.leakage).sum();
    let avg_switching: f64 = per_cell.iter().map(|c| c.switching).sum();
    Ok(EnergyReport {
        layout: layout.name.clone(),
        per_cell,
        avg_leakage,
        avg_switching,
        total: avg_leakage + avg_switching,
        params: *eparams,
        reference_ek,
    })
}

impl EnergyReport {
    /// `cell_id,x,y,leakage_eV,switching_eV,total_eV`, one row per cell and
    /// a closing `total` row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("cell_id,x,y,leakage_eV,switching_eV,total_eV\n");
        for c in &self.per_cell {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                c.id.0,
                c.x,
                c.y,
                sig(c.leakage, 6),
                sig(c.switching, 6),
                sig(c.total(), 6)
            );
        }
        let _ = writeln!(
            out,
            "total,,,{},{},{}",
            sig(self.avg_leakage, 6),
            sig(self.avg_switching, 6),
            sig(self.total, 6)
        );
        out
    }
}

/// Dense per-site total dissipation over the layout's bounding box,
/// row-major from the top-left corner.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerMap {
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
}

impl PowerMap {
    pub fn get(&self, col: usize, row: usize) -> f64 {
        self.values[row * self.width + col]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Whitespace-separated rows.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in self.values.chunks(self.width.max(1)).take(self.height) {
            let line: Vec<String> = row.iter().map(|&v| sig(v, 6)).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Binary 8-bit PGM scaled so the largest value is white.
    pub fn to_pgm(&self) -> Vec<u8> {
        let max = self.values.iter().copied().fold(0.0, f64::max);
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.values.iter().map(|&v| {
            if max > 0.0 {
                (v / max * 255.0).round() as u8
            } else {
                0
            }
        }));
        out
    }
}

pub fn power_map(report: &EnergyReport, layout: &Layout) -> Result<PowerMap, EnergyError> {
    let cells = layout.cells();
    let mismatch = || EnergyError::LayoutMismatch(layout.name.as_str().to_string());
    if report.layout != layout.name.as_str() || report.per_cell.len() != cells.len() {
        return Err(mismatch());
    }
    let Some((x0, y0, x1, y1)) = layout.bounding_box() else {
        return Ok(PowerMap {
            width: 0,
            height: 0,
            values: Vec::new(),
        });
    };
    let width = (x1 - x0 + 1) as usize;
    let height = (y1 - y0 + 1) as usize;
    let mut values = vec![0.0; width * height];
    for (c, e) in cells.iter().zip(&report.per_cell) {
        if (c.x, c.y) != (e.x, e.y) {
            return Err(mismatch());
        }
        values[(c.y - y0) as usize * width + (c.x - x0) as usize] += e.total();
    }
    Ok(PowerMap {
        width,
        height,
        values,
    })
}
