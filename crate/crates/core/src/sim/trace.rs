use std::fmt::Write as _;

use thiserror::Error;

use crate::fmt::sig;
use crate::model::Layout;
use crate::oracle::TruthTable;

use super::clock::{Clock, Phase};
use super::engine::{RelaxOutcome, CYCLES_PER_VECTOR};
use super::params::SimParams;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunStats {
    pub samples: usize,
    pub unconverged: usize,
    pub total_iterations: usize,
    /// Largest |P| seen on any cell after any sample.
    pub max_abs_polarization: f64,
}

impl RunStats {
    pub(crate) fn record(&mut self, outcome: &RelaxOutcome, pols: &[f64]) {
        self.samples += 1;
        self.total_iterations += outcome.iterations;
        if !outcome.converged {
            self.unconverged += 1;
        }
        let m = pols.iter().fold(0.0f64, |m, p| m.max(p.abs()));
        self.max_abs_polarization = self.max_abs_polarization.max(m);
    }

    pub fn unconverged_fraction(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.unconverged as f64 / self.samples as f64
        }
    }
}

/// Polarization time series for every input and output cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    /// Inputs first, then outputs, each in port order.
    pub labels: Vec<String>,
    pub zones: Vec<u8>,
    pub n_inputs: usize,
    pub samples_per_cycle: f64,
    pub samples: Vec<Vec<f64>>,
    pub stats: RunStats,
}

impl Trace {
    pub(crate) fn new(
        layout: &Layout,
        samples_per_cycle: f64,
        n_inputs: usize,
        len: usize,
    ) -> Self {
        let ports: Vec<_> = layout
            .inputs()
            .into_iter()
            .chain(layout.outputs())
            .collect();
        Trace {
            labels: ports.iter().map(|(_, l)| l.to_string()).collect(),
            zones: ports.iter().map(|(id, _)| layout.cell(*id).zone).collect(),
            n_inputs,
            samples_per_cycle,
            samples: vec![Vec::with_capacity(len); ports.len()],
            stats: RunStats::default(),
        }
    }

    pub(crate) fn push(&mut self, probe: usize, p: f64) {
        self.samples[probe].push(p);
    }

    pub fn len(&self) -> usize {
        self.samples.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn series(&self, label: &str) -> Option<&[f64]> {
        let k = self.labels.iter().position(|l| l == label)?;
        Some(&self.samples[k])
    }

    pub fn input_labels(&self) -> &[String] {
        &self.labels[..self.n_inputs]
    }

    pub fn output_labels(&self) -> &[String] {
        &self.labels[self.n_inputs..]
    }

    /// `sample,<label>...` header, one row per sample.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sample");
        for l in &self.labels {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for s in 0..self.len() {
            let _ = write!(out, "{s}");
            for series in &self.samples {
                out.push(',');
                out.push_str(&sig(series[s], 6));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ExtractError {
    #[error("output `{label}` undecided (P = {polarization:.4}) for input vector {vector}")]
    Undecided {
        label: String,
        vector: String,
        polarization: f64,
    },
    #[error("trace too short: needs sample {needed}, has {len}")]
    TooShort { needed: usize, len: usize },
    #[error("latency {0} cycles does not fit in a {CYCLES_PER_VECTOR}-cycle vector hold")]
    LatencyTooLong(f64),
}

/// Reads each output at the hold centre of its zone, `ceil(latency)`
/// cycles after every input vector is applied.
pub fn extract_truth_table(
    trace: &Trace,
    latency_cycles: f64,
    params: &SimParams,
) -> Result<TruthTable, ExtractError> {
    let offset = latency_cycles.ceil().max(0.0) as usize;
    if offset + 1 >= CYCLES_PER_VECTOR {
        return Err(ExtractError::LatencyTooLong(latency_cycles));
    }
    let n = trace.n_inputs;
    let n_out = trace.labels.len() - n;
    let mut rows = Vec::with_capacity(1 << n);
    for vector in 0..1usize << n {
        let cycle = vector * CYCLES_PER_VECTOR + offset;
        let mut row = Vec::with_capacity(n_out);
        for k in n..trace.labels.len() {
            let t = Clock::phase_time(trace.zones[k], cycle, Phase::Hold);
            let s = (t * trace.samples_per_cycle).round() as usize;
            let p = *trace.samples[k].get(s).ok_or(ExtractError::TooShort {
                needed: s,
                len: trace.len(),
            })?;
            if p >= params.decision_threshold {
                row.push(true);
            } else if p <= -params.decision_threshold {
                row.push(false);
            } else {
                let bits: String = (0..n)
                    .map(|i| {
                        if (vector >> (n - 1 - i)) & 1 == 1 {
                            '1'
                        } else {
                            '0'
                        }
                    })
                    .collect();
                return Err(ExtractError::Undecided {
                    label: trace.labels[k].clone(),
                    vector: bits,
                    polarization: p,
                });
            }
        }
        rows.push(row);
    }
    Ok(TruthTable::new(
        trace.input_labels().to_vec(),
        trace.output_labels().to_vec(),
        rows,
    )
    .expect("row count matches input width"))
}
