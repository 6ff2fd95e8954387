//! Quantum-dot cellular automata toolkit: layout model, bistable
//! simulator, reversible-logic oracle, energy estimator and reference
//! designs.

pub mod designs;
pub mod energy;
pub mod fmt;
pub mod metrics;
pub mod model;
pub mod oracle;
pub mod physics;
pub mod qlf;
pub mod sim;

pub use model::{Cell, CellId, CellKind, Geometry, Layout};
