//! CODATA constants used by the electrostatics and the energy estimator.

pub const BOLTZMANN: f64 = 1.380_649e-23; // J/K
pub const HBAR: f64 = 1.054_571_817e-34; // J·s
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19; // C
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12; // F/m

pub fn joules_to_ev(e: f64) -> f64 {
    e / ELEMENTARY_CHARGE
}
