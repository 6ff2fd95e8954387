//! Gate-level functional reference for every Boolean block, plus
//! reversibility and interface accounting.

mod gates;
mod network;
mod table;

use thiserror::Error;

pub use gates::{adder_subtractor, feynman, maj3, rqg, AddSub};
pub use network::{
    eval_network, interface_metrics, library, truth_table, Gate, GateNetwork, InterfaceMetrics,
    NetOutput, NodeId, MAX_TABLE_INPUTS,
};
pub use table::{is_reversible, ConstColumn, RowDiff, TruthTable};

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("{inputs} inputs need {} rows, got {rows}", 1u64 << (*inputs).min(63))]
    RowCount { inputs: usize, rows: usize },
    #[error("{0} inputs is too many for an exhaustive table")]
    TooManyInputs(usize),
    #[error("port labels differ: expected {expected:?}, got {got:?}")]
    LabelMismatch {
        expected: Vec<String>,
        got: Vec<String>,
    },
    #[error("truth-table CSV line {line}: {msg}")]
    Csv { line: usize, msg: String },
    #[error("unknown oracle `{0}`")]
    Unknown(String),
}

/// Reference networks by CLI name.
pub fn by_name(name: &str) -> Result<GateNetwork, OracleError> {
    Ok(match name {
        "maj" => library::majority(),
        "xor" => library::xor2(),
        "feynman" => library::feynman(),
        "rqg" => library::rqg(),
        "addsub" => library::adder_subtractor(),
        _ => return Err(OracleError::Unknown(name.to_string())),
    })
}
