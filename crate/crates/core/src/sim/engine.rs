//! Bistable relaxation engine.

use thiserror::Error;

use crate::model::{validate, CellId, CellKind, Layout, Violation};

use super::clock::{Clock, ClockState, Phase};
use super::kink::KinkTable;
use super::params::{ParamError, SimParams};
use super::trace::{RunStats, Trace};

/// Every input vector is held for this many clock cycles.
pub const CYCLES_PER_VECTOR: usize = 4;
/// Fewer samples per clock cycle than this cannot resolve the four phases.
pub const MIN_SAMPLES_PER_CYCLE: usize = 16;
/// Exhaustive sweeps are limited to this many inputs.
pub const MAX_SIM_INPUTS: usize = 16;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("layout is not simulable: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("layout has no input cells")]
    NoInputs,
    #[error("layout has no output cells")]
    NoOutputs,
    #[error("{inputs} inputs exceed the exhaustive-sweep limit of {MAX_SIM_INPUTS}")]
    TooManyInputs { inputs: usize },
    #[error(
        "{samples} samples cannot hold {vectors} vectors for {CYCLES_PER_VECTOR} cycles \
         (need at least {needed})"
    )]
    TooFewSamples {
        samples: usize,
        vectors: usize,
        needed: usize,
    },
    #[error(transparent)]
    Params(#[from] ParamError),
}

/// Bistable cell response: x / sqrt(1 + x²) with x = field / (2γ).
pub fn update_cell(sum_field: f64, gamma: f64) -> f64 {
    let x = sum_field / (2.0 * gamma);
    if x.is_infinite() {
        return x.signum();
    }
    x / (1.0 + x * x).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxOutcome {
    pub iterations: usize,
    pub converged: bool,
}

/// Precomputed couplings and clamps for one layout.
#[derive(Debug, Clone)]
pub struct Engine {
    kinks: KinkTable,
    zones: Vec<u8>,
    free: Vec<bool>,
    tol: f64,
    max_iter: usize,
}

impl Engine {
    pub fn new(layout: &Layout, params: &SimParams) -> Result<Self, SimError> {
        params.check()?;
        let violations = validate(layout);
        if !violations.is_empty() {
            return Err(SimError::Invalid(violations));
        }
        let kinks = KinkTable::build(
            layout,
            params.relative_permittivity,
            params.radius_of_effect,
        );
        Ok(Engine {
            kinks,
            zones: layout.cells().iter().map(|c| c.zone).collect(),
            free: layout
                .cells()
                .iter()
                .map(|c| matches!(c.kind, CellKind::Normal | CellKind::Output(_)))
                .collect(),
            tol: params.convergence_tol,
            max_iter: params.max_iter_per_sample,
        })
    }

    pub fn kinks(&self) -> &KinkTable {
        &self.kinks
    }

    pub fn is_free(&self, id: CellId) -> bool {
        self.free[id.0]
    }

    pub fn zone(&self, id: CellId) -> u8 {
        self.zones[id.0]
    }

    /// Polarization vector with fixed cells pinned and everything else 0.
    pub fn initial_state(layout: &Layout) -> Vec<f64> {
        layout
            .cells()
            .iter()
            .map(|c| c.initial_polarization())
            .collect()
    }

    /// Gauss-Seidel sweeps over the free cells in canonical order until the
    /// largest change drops below the tolerance or the iteration cap is hit.
    /// Clamped cells (inputs, fixed) are left untouched.
    pub fn relax(&self, pols: &mut [f64], clock: &ClockState) -> RelaxOutcome {
        for it in 1..=self.max_iter {
            let mut max_delta: f64 = 0.0;
            for i in 0..pols.len() {
                if !self.free[i] {
                    continue;
                }
                let field = self.kinks.field(CellId(i), pols);
                let p = update_cell(field, clock.gamma[self.zones[i] as usize]);
                max_delta = max_delta.max((p - pols[i]).abs());
                pols[i] = p;
            }
            if max_delta < self.tol {
                return RelaxOutcome {
                    iterations: it,
                    converged: true,
                };
            }
        }
        RelaxOutcome {
            iterations: self.max_iter,
            converged: false,
        }
    }
}

/// Bit of input `i` (port order, first port is the most significant bit)
/// in input vector `vector`.
pub fn input_bit(vector: usize, i: usize, n_inputs: usize) -> bool {
    (vector >> (n_inputs - 1 - i)) & 1 == 1
}

pub fn relax_sample(engine: &Engine, pols: &mut [f64], clock: &ClockState) -> RelaxOutcome {
    engine.relax(pols, clock)
}

struct Sweep {
    engine: Engine,
    inputs: Vec<CellId>,
    vectors: usize,
    clock: Clock,
}

impl Sweep {
    fn new(layout: &Layout, params: &SimParams) -> Result<Self, SimError> {
        let engine = Engine::new(layout, params)?;
        let inputs: Vec<CellId> = layout.inputs().iter().map(|&(id, _)| id).collect();
        if inputs.is_empty() {
            return Err(SimError::NoInputs);
        }
        if layout.outputs().is_empty() {
            return Err(SimError::NoOutputs);
        }
        let n = inputs.len();
        if n > MAX_SIM_INPUTS {
            return Err(SimError::TooManyInputs { inputs: n });
        }
        let vectors = 1usize << n;
        let cycles = vectors * CYCLES_PER_VECTOR;
        let needed = cycles * MIN_SAMPLES_PER_CYCLE;
        if params.num_samples < needed {
            return Err(SimError::TooFewSamples {
                samples: params.num_samples,
                vectors,
                needed,
            });
        }
        let clock = Clock::new(params, params.num_samples as f64 / cycles as f64);
        Ok(Sweep {
            engine,
            inputs,
            vectors,
            clock,
        })
    }

    /// Drives every input vector in counter order and calls `visit` with
    /// the sample index, the vector and the relaxed state.
    fn run(
        &self,
        layout: &Layout,
        samples: usize,
        mut visit: impl FnMut(usize, usize, &RelaxOutcome, &[f64]),
    ) {
        let n = self.inputs.len();
        let samples_per_vector = self.clock.samples_per_cycle() * CYCLES_PER_VECTOR as f64;
        let mut pols = Engine::initial_state(layout);
        for s in 0..samples {
            let vector = ((s as f64 / samples_per_vector) as usize).min(self.vectors - 1);
            for (i, id) in self.inputs.iter().enumerate() {
                pols[id.0] = if input_bit(vector, i, n) { 1.0 } else { -1.0 };
            }
            let outcome = self.engine.relax(&mut pols, &self.clock.state(s));
            visit(s, vector, &outcome, &pols);
        }
    }
}

/// Exhaustive sweep: every input vector in counter order, each held for
/// [`CYCLES_PER_VECTOR`] clock cycles, relaxing at every sample.
pub fn run_simulation(layout: &Layout, params: &SimParams) -> Result<Trace, SimError> {
    let sweep = Sweep::new(layout, params)?;
    let n = sweep.inputs.len();
    let probes: Vec<CellId> = layout
        .inputs()
        .iter()
        .chain(layout.outputs().iter())
        .map(|&(id, _)| id)
        .collect();
    let mut trace = Trace::new(
        layout,
        sweep.clock.samples_per_cycle(),
        n,
        params.num_samples,
    );
    let mut stats = RunStats::default();
    sweep.run(layout, params.num_samples, |_, _, outcome, pols| {
        stats.record(outcome, pols);
        for (k, id) in probes.iter().enumerate() {
            trace.push(k, pols[id.0]);
        }
    });
    trace.stats = stats;
    Ok(trace)
}

/// Settled polarization of every cell under every input vector: each cell
/// is read at the hold centre of its zone in the last cycle the vector is
/// applied. Indexed `[vector][cell]`.
pub fn steady_states(layout: &Layout, params: &SimParams) -> Result<Vec<Vec<f64>>, SimError> {
    let sweep = Sweep::new(layout, params)?;
    let spc = sweep.clock.samples_per_cycle();
    let zones: Vec<u8> = layout.cells().iter().map(|c| c.zone).collect();
    // hold centres of the last cycle; zone 3 may spill into the next
    // vector's window, so its read is taken one cycle earlier
    let read_at = |vector: usize, zone: u8| -> usize {
        let last = (vector + 1) * CYCLES_PER_VECTOR - 1;
        let mut t = Clock::phase_time(zone, last, Phase::Hold);
        if t >= ((vector + 1) * CYCLES_PER_VECTOR) as f64 {
            t -= 1.0;
        }
        ((t * spc).round() as usize).min(params.num_samples - 1)
    };
    let mut states = vec![vec![0.0; zones.len()]; sweep.vectors];
    let end = read_at(sweep.vectors - 1, 3).max(read_at(sweep.vectors - 1, 0)) + 1;
    sweep.run(layout, end.min(params.num_samples), |s, vector, _, pols| {
        for (i, &z) in zones.iter().enumerate() {
            if read_at(vector, z) == s {
                states[vector][i] = pols[i];
            }
        }
    });
    Ok(states)
}

/// Runs the exhaustive sweep twice in lockstep, the second time with every
/// clamped polarization (inputs and fixed cells) negated, and returns the
/// largest |P + P_neg| seen on any cell at any sample.
pub fn odd_symmetry_residual(layout: &Layout, params: &SimParams) -> Result<f64, SimError> {
    let sweep = Sweep::new(layout, params)?;
    let n = sweep.inputs.len();
    let samples_per_vector = sweep.clock.samples_per_cycle() * CYCLES_PER_VECTOR as f64;
    let mut pos = Engine::initial_state(layout);
    let mut neg: Vec<f64> = pos.iter().map(|p| -p).collect();
    let mut worst: f64 = 0.0;
    for s in 0..params.num_samples {
        let vector = ((s as f64 / samples_per_vector) as usize).min(sweep.vectors - 1);
        for (i, id) in sweep.inputs.iter().enumerate() {
            let p = if input_bit(vector, i, n) { 1.0 } else { -1.0 };
            pos[id.0] = p;
            neg[id.0] = -p;
        }
        let clock = sweep.clock.state(s);
        sweep.engine.relax(&mut pos, &clock);
        sweep.engine.relax(&mut neg, &clock);
        for (a, b) in pos.iter().zip(&neg) {
            worst = worst.max((a + b).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Cell, Geometry};

    #[test]
    fn update_cell_closed_forms() {
        assert_eq!(update_cell(0.0, 1e-22), 0.0);
        let g = 2.5e-22;
        let p = update_cell(2.0 * g, g);
        assert!((p - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert_eq!(update_cell(f64::INFINITY, g), 1.0);
        assert!(update_cell(1e6 * g, g) > 0.999_999);
    }

    #[test]
    fn update_cell_is_odd_and_monotone() {
        let g = 1e-22;
        let mut prev = -1.0;
        for k in -200..=200 {
            let f = k as f64 * 1e-23;
            let p = update_cell(f, g);
            assert_eq!(p, -update_cell(-f, g));
            assert!(p >= prev && p.abs() < 1.0);
            prev = p;
        }
    }

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
    fn held_wire_follows_input() {
        let layout = wire();
        let params = SimParams::default();
        let engine = Engine::new(&layout, &params).unwrap();
        let mut pols = vec![1.0, 0.0, 0.0];
        let out = engine.relax(&mut pols, &ClockState::uniform(params.clock_low));
        assert!(out.converged);
        assert!(pols[1] > 0.95);
        assert!(pols[2] > 0.85);
    }

    #[test]
    fn wire_is_odd() {
        let params = SimParams {
            num_samples: 512,
            ..SimParams::default()
        };
        assert!(odd_symmetry_residual(&wire(), &params).unwrap() < 1e-12);
    }

    #[test]
    fn rejects_short_budget() {
        let params = SimParams {
            num_samples: 100,
            ..SimParams::default()
        };
        assert!(matches!(
            run_simulation(&wire(), &params),
            Err(SimError::TooFewSamples { .. })
        ));
    }

    #[test]
    fn rejects_rotated() {
        let mut cells = wire().cells().to_vec();
        cells[1].rotated = true;
        let layout = Layout::new("r", Geometry::default(), cells);
        assert!(matches!(
            run_simulation(&layout, &SimParams::default()),
            Err(SimError::Invalid(_))
        ));
    }

    #[test]
    fn input_bits_msb_first() {
        let bits: Vec<bool> = (0..3).map(|i| input_bit(0b110, i, 3)).collect();
        assert_eq!(bits, [true, true, false]);
    }
}
