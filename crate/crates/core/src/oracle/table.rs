use std::collections::HashSet;
use std::fmt;

use super::OracleError;

/// An input column pinned to a constant, kept for interface accounting and
/// display. `position` indexes the full input column list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstColumn {
    pub position: usize,
    pub value: bool,
}

/// Exhaustive map from the free inputs (binary-counter order, first label
/// most significant) to output bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    input_labels: Vec<String>,
    output_labels: Vec<String>,
    constants: Vec<ConstColumn>,
    rows: Vec<Vec<bool>>,
}

/// One disagreeing row between two tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowDiff {
    pub row: usize,
    pub inputs: Vec<bool>,
    pub expected: Vec<bool>,
    pub actual: Vec<bool>,
}

fn bits(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl fmt::Display for RowDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "row {}: inputs {} expected {} got {}",
            self.row,
            bits(&self.inputs),
            bits(&self.expected),
            bits(&self.actual)
        )
    }
}

impl TruthTable {
    pub fn new(
        input_labels: Vec<String>,
        output_labels: Vec<String>,
        rows: Vec<Vec<bool>>,
    ) -> Result<Self, OracleError> {
        Self::with_constants(input_labels, output_labels, Vec::new(), rows)
    }

    pub fn with_constants(
        input_labels: Vec<String>,
        output_labels: Vec<String>,
        mut constants: Vec<ConstColumn>,
        rows: Vec<Vec<bool>>,
    ) -> Result<Self, OracleError> {
        let n = input_labels.len();
        if n >= usize::BITS as usize || rows.len() != 1usize << n {
            return Err(OracleError::RowCount {
                inputs: n,
                rows: rows.len(),
            });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != output_labels.len()) {
            return Err(OracleError::WidthMismatch {
                expected: output_labels.len(),
                got: r.len(),
            });
        }
        constants.sort_by_key(|c| c.position);
        Ok(TruthTable {
            input_labels,
            output_labels,
            constants,
            rows,
        })
    }

    pub fn input_labels(&self) -> &[String] {
        &self.input_labels
    }

    pub fn output_labels(&self) -> &[String] {
        &self.output_labels
    }

    pub fn constants(&self) -> &[ConstColumn] {
        &self.constants
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    /// Free-input bits of row `k`.
    pub fn inputs_of(&self, k: usize) -> Vec<bool> {
        let n = self.input_labels.len();
        (0..n).map(|i| (k >> (n - 1 - i)) & 1 == 1).collect()
    }

    /// All input columns of row `k`, constants included, in column order.
    pub fn full_inputs_of(&self, k: usize) -> Vec<bool> {
        let mut free = self.inputs_of(k).into_iter();
        let width = self.input_labels.len() + self.constants.len();
        (0..width)
            .map(
                |pos| match self.constants.iter().find(|c| c.position == pos) {
                    Some(c) => c.value,
                    None => free.next().unwrap_or(false),
                },
            )
            .collect()
    }

    fn full_input_labels(&self) -> Vec<String> {
        let mut free = self.input_labels.iter();
        let width = self.input_labels.len() + self.constants.len();
        (0..width)
            .map(
                |pos| match self.constants.iter().find(|c| c.position == pos) {
                    Some(c) => if c.value { "1" } else { "0" }.to_string(),
                    None => free.next().cloned().unwrap_or_default(),
                },
            )
            .collect()
    }

    /// `inputs...,outputs...` in counter order. Constant columns appear in
    /// place with the constant as their header.
    pub fn to_csv(&self) -> String {
        let mut header = self.full_input_labels();
        header.extend(self.output_labels.iter().cloned());
        let mut out = header.join(",");
        out.push('\n');
        for (k, row) in self.rows.iter().enumerate() {
            let cells: Vec<&str> = self
                .full_inputs_of(k)
                .iter()
                .chain(row)
                .map(|&b| if b { "1" } else { "0" })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Parses the CSV written by [`TruthTable::to_csv`]. The number of
    /// output columns must be given since the header alone cannot tell
    /// inputs from outputs; a header of `0` or `1` marks a constant column.
    pub fn from_csv(text: &str, n_outputs: usize) -> Result<Self, OracleError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<&str> = lines
            .next()
            .ok_or(OracleError::Csv {
                line: 1,
                msg: "empty file".into(),
            })?
            .split(',')
            .map(str::trim)
            .collect();
        if header.len() <= n_outputs {
            return Err(OracleError::Csv {
                line: 1,
                msg: format!("need more than {n_outputs} columns"),
            });
        }
        let n_cols_in = header.len() - n_outputs;
        let mut inputs = Vec::new();
        let mut constants = Vec::new();
        for (pos, h) in header[..n_cols_in].iter().enumerate() {
            match *h {
                "0" | "1" => constants.push(ConstColumn {
                    position: pos,
                    value: *h == "1",
                }),
                l => inputs.push(l.to_string()),
            }
        }
        let outputs: Vec<String> = header[n_cols_in..].iter().map(|s| s.to_string()).collect();
        let n = inputs.len();
        if n >= 24 {
            return Err(OracleError::TooManyInputs(n));
        }
        let mut rows: Vec<Option<Vec<bool>>> = vec![None; 1 << n];
        for (idx, line) in lines.enumerate() {
            let lineno = idx + 2;
            let vals: Vec<bool> = line
                .split(',')
                .map(|v| match v.trim() {
                    "0" => Ok(false),
                    "1" => Ok(true),
                    other => Err(OracleError::Csv {
                        line: lineno,
                        msg: format!("bad bit `{other}`"),
                    }),
                })
                .collect::<Result<_, _>>()?;
            if vals.len() != header.len() {
                return Err(OracleError::Csv {
                    line: lineno,
                    msg: format!("expected {} fields, got {}", header.len(), vals.len()),
                });
            }
            let mut k = 0usize;
            for (pos, &b) in vals[..n_cols_in].iter().enumerate() {
                match constants.iter().find(|c| c.position == pos) {
                    Some(c) if c.value != b => {
                        return Err(OracleError::Csv {
                            line: lineno,
                            msg: format!("constant column {pos} must be {}", c.value as u8),
                        })
                    }
                    Some(_) => {}
                    None => k = (k << 1) | b as usize,
                }
            }
            if rows[k].replace(vals[n_cols_in..].to_vec()).is_some() {
                return Err(OracleError::Csv {
                    line: lineno,
                    msg: "repeated input row".into(),
                });
            }
        }
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(k, r)| {
                r.ok_or(OracleError::Csv {
                    line: 0,
                    msg: format!("missing input row {k}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        TruthTable::with_constants(inputs, outputs, constants, rows)
    }

    /// The same function with free inputs and outputs listed in the given
    /// label orders. Constant columns are kept as they are.
    pub fn reordered(&self, inputs: &[String], outputs: &[String]) -> Result<Self, OracleError> {
        let mismatch = || OracleError::LabelMismatch {
            expected: [inputs, outputs].concat(),
            got: [self.input_labels.clone(), self.output_labels.clone()].concat(),
        };
        let position = |labels: &[String], l: &String| labels.iter().position(|x| x == l);
        let in_map: Vec<usize> = inputs
            .iter()
            .map(|l| position(&self.input_labels, l))
            .collect::<Option<_>>()
            .ok_or_else(mismatch)?;
        let out_map: Vec<usize> = outputs
            .iter()
            .map(|l| position(&self.output_labels, l))
            .collect::<Option<_>>()
            .ok_or_else(mismatch)?;
        if in_map.len() != self.input_labels.len() || out_map.len() != self.output_labels.len() {
            return Err(mismatch());
        }
        let n = inputs.len();
        let rows = (0..self.rows.len())
            .map(|k| {
                // bit i of the new counter feeds old input in_map[i]
                let mut old = 0usize;
                for (i, &src) in in_map.iter().enumerate() {
                    if (k >> (n - 1 - i)) & 1 == 1 {
                        old |= 1 << (n - 1 - src);
                    }
                }
                out_map.iter().map(|&o| self.rows[old][o]).collect()
            })
            .collect();
        TruthTable::with_constants(
            inputs.to_vec(),
            outputs.to_vec(),
            self.constants.clone(),
            rows,
        )
    }

    /// Rows where `actual` disagrees with `self`. Port labels must agree;
    /// constant columns are not compared.
    pub fn diff(&self, actual: &TruthTable) -> Result<Vec<RowDiff>, OracleError> {
        if self.input_labels != actual.input_labels || self.output_labels != actual.output_labels {
            return Err(OracleError::LabelMismatch {
                expected: [self.input_labels.clone(), self.output_labels.clone()].concat(),
                got: [actual.input_labels.clone(), actual.output_labels.clone()].concat(),
            });
        }
        Ok(self
            .rows
            .iter()
            .zip(&actual.rows)
            .enumerate()
            .filter(|(_, (e, a))| e != a)
            .map(|(row, (e, a))| RowDiff {
                row,
                inputs: self.inputs_of(row),
                expected: e.clone(),
                actual: a.clone(),
            })
            .collect())
    }
}

/// True iff the row map is injective and the input width (constants
/// included) equals the output width. With no constant columns this is
/// bijectivity; otherwise it is checked over the realized domain.
pub fn is_reversible(t: &TruthTable) -> Result<bool, OracleError> {
    let width = t.input_labels.len() + t.constants.len();
    if width != t.output_labels.len() {
        return Err(OracleError::WidthMismatch {
            expected: width,
            got: t.output_labels.len(),
        });
    }
    let mut seen = HashSet::with_capacity(t.rows.len());
    Ok(t.rows.iter().all(|r| seen.insert(r.as_slice())))
}
