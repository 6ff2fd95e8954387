use thiserror::Error;

/// Engine settings. Defaults are the stock bistable-simulator values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimParams {
    pub num_samples: usize,
    pub convergence_tol: f64,
    /// Centre-to-centre interaction cutoff, nm.
    pub radius_of_effect: f64,
    pub relative_permittivity: f64,
    /// Tunneling energy floor (hold phase), J.
    pub clock_low: f64,
    /// Tunneling energy ceiling (relax phase), J.
    pub clock_high: f64,
    pub clock_amplitude_factor: f64,
    pub max_iter_per_sample: usize,
    /// |P| below this reads as undecided.
    pub decision_threshold: f64,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            num_samples: 50_000,
            convergence_tol: 1e-3,
            radius_of_effect: 65.0,
            relative_permittivity: 12.9,
            clock_low: 3.8e-23,
            clock_high: 9.8e-22,
            clock_amplitude_factor: 2.0,
            max_iter_per_sample: 100,
            decision_threshold: 0.5,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("clock energies must satisfy 0 < low < high (got {low:e}, {high:e})")]
    ClockRange { low: f64, high: f64 },
    #[error("{name} must be positive (got {value})")]
    NotPositive { name: &'static str, value: f64 },
    #[error("decision threshold must lie in (0, 1] (got {0})")]
    Threshold(f64),
    #[error("max iterations per sample must be at least 1")]
    NoIterations,
}

impl SimParams {
    pub fn check(&self) -> Result<(), ParamError> {
        if !(self.clock_low > 0.0 && self.clock_low < self.clock_high) {
            return Err(ParamError::ClockRange {
                low: self.clock_low,
                high: self.clock_high,
            });
        }
        for (name, value) in [
            ("convergence_tol", self.convergence_tol),
            ("radius_of_effect", self.radius_of_effect),
            ("relative_permittivity", self.relative_permittivity),
            ("clock_amplitude_factor", self.clock_amplitude_factor),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ParamError::NotPositive { name, value });
            }
        }
        if !(self.decision_threshold > 0.0 && self.decision_threshold <= 1.0) {
            return Err(ParamError::Threshold(self.decision_threshold));
        }
        if self.max_iter_per_sample == 0 {
            return Err(ParamError::NoIterations);
        }
        Ok(())
    }
}
