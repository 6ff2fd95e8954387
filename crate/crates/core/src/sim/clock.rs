//! Four-phase clock.
//!
//! Within one cycle each zone passes through switch, hold, release and
//! relax, a quarter cycle each. Zone `z` lags zone `z - 1` by a quarter
//! cycle. The waveform is a cosine centred between the clock energies,
//! scaled by `(high - low) * amplitude_factor` and clipped to `[low, high]`.

use std::f64::consts::TAU;

use crate::model::NUM_ZONES;

use super::params::SimParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Switch,
    Hold,
    Release,
    Relax,
}

impl Phase {
    /// Position of the phase centre within a zone's own cycle, in cycles.
    pub fn centre(self) -> f64 {
        match self {
            Phase::Switch => 0.125,
            Phase::Hold => 0.375,
            Phase::Release => 0.625,
            Phase::Relax => 0.875,
        }
    }
}

/// Per-zone tunneling energies at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockState {
    pub gamma: [f64; NUM_ZONES as usize],
}

impl ClockState {
    pub fn uniform(gamma: f64) -> Self {
        ClockState {
            gamma: [gamma; NUM_ZONES as usize],
        }
    }
}

/// Maps sample indices to clock phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Clock {
    low: f64,
    high: f64,
    amplitude: f64,
    samples_per_cycle: f64,
}

impl Clock {
    pub fn new(params: &SimParams, samples_per_cycle: f64) -> Self {
        Clock {
            low: params.clock_low,
            high: params.clock_high,
            amplitude: (params.clock_high - params.clock_low) * params.clock_amplitude_factor,
            samples_per_cycle,
        }
    }

    pub fn samples_per_cycle(&self) -> f64 {
        self.samples_per_cycle
    }

    /// γ for `zone` at time `t`, measured in clock cycles.
    pub fn gamma_at(&self, zone: u8, t: f64) -> f64 {
        let local = t - f64::from(zone) / f64::from(NUM_ZONES);
        let mid = (self.high + self.low) / 2.0;
        let raw = mid + self.amplitude * (TAU * (local - Phase::Relax.centre())).cos();
        raw.clamp(self.low, self.high)
    }

    pub fn gamma(&self, zone: u8, sample: usize) -> f64 {
        self.gamma_at(zone, sample as f64 / self.samples_per_cycle)
    }

    pub fn state(&self, sample: usize) -> ClockState {
        let mut gamma = [0.0; NUM_ZONES as usize];
        for (z, g) in gamma.iter_mut().enumerate() {
            *g = self.gamma(z as u8, sample);
        }
        ClockState { gamma }
    }

    /// Time (in cycles) of the centre of `phase` for `zone` during its
    /// `cycle`-th cycle.
    pub fn phase_time(zone: u8, cycle: usize, phase: Phase) -> f64 {
        cycle as f64 + f64::from(zone) / f64::from(NUM_ZONES) + phase.centre()
    }
}

/// γ for `zone` at `sample` when `total_samples` cover `total_cycles`
/// clock cycles.
pub fn clock_gamma(
    zone: u8,
    sample: usize,
    params: &SimParams,
    total_samples: usize,
    total_cycles: usize,
) -> f64 {
    Clock::new(params, total_samples as f64 / total_cycles as f64).gamma(zone, sample)
}
