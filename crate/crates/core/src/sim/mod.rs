//! Bistable-approximation simulation with four-phase clocking.

pub mod clock;
pub mod engine;
pub mod kink;
pub mod params;
pub mod trace;

pub use clock::{clock_gamma, Clock, ClockState, Phase};
pub use engine::{
    input_bit, odd_symmetry_residual, relax_sample, run_simulation, steady_states, update_cell,
    Engine, RelaxOutcome, SimError, CYCLES_PER_VECTOR, MIN_SAMPLES_PER_CYCLE,
};
pub use kink::{kink_energy, kink_energy_at, KinkError, KinkTable};
pub use params::{ParamError, SimParams};
pub use trace::{extract_truth_table, ExtractError, RunStats, Trace};
