//! QLF v1, the line-oriented layout text format.
//!
//! ```text
//! qca-layout v1 name=wire pitch_nm=20 cell_nm=18 dot_nm=5
//! cell x=0 y=0 layer=0 zone=0 kind=input:A
//! cell x=1 y=0 layer=0 zone=0 kind=normal rot=45
//! ```
//!
//! `#` starts a comment. Unknown keys are errors.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{Cell, CellKind, Geometry, Layout, NUM_ZONES};

const MAGIC: &str = "qca-layout";
const VERSION: &str = "v1";

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: missing header `{MAGIC} {VERSION} ...`")]
    MissingHeader { line: usize },
    #[error("line {line}: zone {zone} out of range 0..=3")]
    ZoneRange { line: usize, zone: i64 },
    #[error("line {line}: duplicate position ({x},{y}) on layer {layer}")]
    DuplicatePosition {
        line: usize,
        x: i32,
        y: i32,
        layer: i32,
    },
    #[error("line {line}: duplicate label `{label}`")]
    DuplicateLabel { line: usize, label: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("invalid geometry in header")]
    Geometry,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn malformed(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Malformed {
        line,
        msg: msg.into(),
    }
}

/// Splits `key=value` tokens, rejecting keys outside `allowed` and repeats.
fn key_values<'a>(
    line: usize,
    tokens: impl Iterator<Item = &'a str>,
    allowed: &[&str],
) -> Result<HashMap<&'a str, &'a str>, ParseError> {
    let mut out = HashMap::new();
    for tok in tokens {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| malformed(line, format!("expected key=value, got `{tok}`")))?;
        if !allowed.contains(&k) {
            return Err(ParseError::UnknownKey {
                line,
                key: k.to_string(),
            });
        }
        if out.insert(k, v).is_some() {
            return Err(malformed(line, format!("repeated key `{k}`")));
        }
    }
    Ok(out)
}

fn require<'a>(line: usize, kv: &HashMap<&str, &'a str>, key: &str) -> Result<&'a str, ParseError> {
    kv.get(key)
        .copied()
        .ok_or_else(|| malformed(line, format!("missing key `{key}`")))
}

fn number<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T, ParseError> {
    v.parse()
        .map_err(|_| malformed(line, format!("bad value `{v}` for `{key}`")))
}

fn parse_kind(line: usize, v: &str) -> Result<CellKind, ParseError> {
    let port = |label: &str| {
        if label.is_empty() {
            Err(malformed(line, "empty port label"))
        } else {
            Ok(label.to_string())
        }
    };
    match v.split_once(':') {
        None if v == "normal" => Ok(CellKind::Normal),
        Some(("input", l)) => port(l).map(CellKind::Input),
        Some(("output", l)) => port(l).map(CellKind::Output),
        Some(("fixed", "+1")) => Ok(CellKind::Fixed(true)),
        Some(("fixed", "-1")) => Ok(CellKind::Fixed(false)),
        _ => Err(malformed(line, format!("bad kind `{v}`"))),
    }
}

fn parse_header(line: usize, text: &str) -> Result<(String, Geometry), ParseError> {
    let mut toks = text.split_whitespace();
    if toks.next() != Some(MAGIC) || toks.next() != Some(VERSION) {
        return Err(ParseError::MissingHeader { line });
    }
    let kv = key_values(line, toks, &["name", "pitch_nm", "cell_nm", "dot_nm"])?;
    let name = require(line, &kv, "name")?.to_string();
    let geometry = Geometry {
        grid_pitch: number(line, "pitch_nm", require(line, &kv, "pitch_nm")?)?,
        cell_size: number(line, "cell_nm", require(line, &kv, "cell_nm")?)?,
        dot_diameter: number(line, "dot_nm", require(line, &kv, "dot_nm")?)?,
        ..Geometry::default()
    };
    if !geometry.is_valid() {
        return Err(ParseError::Geometry);
    }
    Ok((name, geometry))
}

fn parse_cell(line: usize, text: &str) -> Result<Cell, ParseError> {
    let mut toks = text.split_whitespace();
    if toks.next() != Some("cell") {
        return Err(malformed(line, "expected `cell` record"));
    }
    let kv = key_values(line, toks, &["x", "y", "layer", "zone", "kind", "rot"])?;
    let zone: i64 = number(line, "zone", require(line, &kv, "zone")?)?;
    if !(0..NUM_ZONES as i64).contains(&zone) {
        return Err(ParseError::ZoneRange { line, zone });
    }
    let rotated = match kv.get("rot").copied() {
        None | Some("0") => false,
        Some("45") => true,
        Some(v) => return Err(malformed(line, format!("bad rotation `{v}`"))),
    };
    Ok(Cell {
        x: number(line, "x", require(line, &kv, "x")?)?,
        y: number(line, "y", require(line, &kv, "y")?)?,
        layer: number(line, "layer", require(line, &kv, "layer")?)?,
        zone: zone as u8,
        kind: parse_kind(line, require(line, &kv, "kind")?)?,
        rotated,
    })
}

/// Parses a QLF v1 document. Line numbers in errors are 1-based.
pub fn parse_layout(text: &str) -> Result<Layout, ParseError> {
    let mut header = None;
    let mut cells = Vec::new();
    let mut positions = HashSet::new();
    let mut labels = HashSet::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        if header.is_none() {
            header = Some(parse_header(line, body)?);
            continue;
        }
        let cell = parse_cell(line, body)?;
        if !positions.insert((cell.x, cell.y, cell.layer)) {
            return Err(ParseError::DuplicatePosition {
                line,
                x: cell.x,
                y: cell.y,
                layer: cell.layer,
            });
        }
        if let Some(l) = cell.kind.label() {
            if !labels.insert(l.to_string()) {
                return Err(ParseError::DuplicateLabel {
                    line,
                    label: l.to_string(),
                });
            }
        }
        cells.push(cell);
    }
    let (name, geometry) = header.ok_or(ParseError::MissingHeader {
        line: last_line.max(1),
    })?;
    Ok(Layout::new(name, geometry, cells))
}

fn kind_token(kind: &CellKind) -> String {
    match kind {
        CellKind::Normal => "normal".to_string(),
        CellKind::Input(l) => format!("input:{l}"),
        CellKind::Output(l) => format!("output:{l}"),
        CellKind::Fixed(true) => "fixed:+1".to_string(),
        CellKind::Fixed(false) => "fixed:-1".to_string(),
    }
}

/// Renders a layout as QLF v1, cells in `(layer, y, x)` order.
pub fn serialize_layout(layout: &Layout) -> String {
    let g = &layout.geometry;
    let mut out = format!(
        "{MAGIC} {VERSION} name={} pitch_nm={} cell_nm={} dot_nm={}\n",
        layout.name, g.grid_pitch, g.cell_size, g.dot_diameter
    );
    for c in layout.cells() {
        let _ = write!(
            out,
            "cell x={} y={} layer={} zone={} kind={}",
            c.x,
            c.y,
            c.layer,
            c.zone,
            kind_token(&c.kind)
        );
        if c.rotated {
            out.push_str(" rot=45");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate;
    use proptest::prelude::*;

    const WIRE: &str = "\
# three cell wire
qca-layout v1 name=wire pitch_nm=20 cell_nm=18 dot_nm=5
cell x=0 y=0 layer=0 zone=0 kind=input:A
cell x=1 y=0 layer=0 zone=0 kind=normal   # middle
cell x=2 y=0 layer=0 zone=0 kind=output:Y
";

    #[test]
    fn parses_wire() {
        let l = parse_layout(WIRE).unwrap();
        assert_eq!(l.name, "wire");
        assert_eq!(l.cells().len(), 3);
        assert_eq!(l.geometry, Geometry::default());
        assert!(validate(&l).is_empty());
    }

    #[test]
    fn duplicate_position_reports_line() {
        let text = "qca-layout v1 name=d pitch_nm=20 cell_nm=18 dot_nm=5\n\
                    cell x=0 y=0 layer=0 zone=0 kind=normal\n\
                    cell x=0 y=0 layer=0 zone=1 kind=normal\n";
        assert_eq!(
            parse_layout(text),
            Err(ParseError::DuplicatePosition {
                line: 3,
                x: 0,
                y: 0,
                layer: 0
            })
        );
    }

    #[test]
    fn zone_four_is_rejected() {
        let text = "qca-layout v1 name=d pitch_nm=20 cell_nm=18 dot_nm=5\n\
                    cell x=0 y=0 layer=0 zone=4 kind=normal\n";
        assert_eq!(
            parse_layout(text),
            Err(ParseError::ZoneRange { line: 2, zone: 4 })
        );
    }

    #[test]
    fn duplicate_label_reports_line() {
        let text = "qca-layout v1 name=d pitch_nm=20 cell_nm=18 dot_nm=5\n\
                    cell x=0 y=0 layer=0 zone=0 kind=output:S\n\
                    \n\
                    cell x=1 y=0 layer=0 zone=0 kind=output:S\n";
        assert_eq!(
            parse_layout(text),
            Err(ParseError::DuplicateLabel {
                line: 4,
                label: "S".into()
            })
        );
    }

    #[test]
    fn unknown_key_is_strict() {
        let text = "qca-layout v1 name=d pitch_nm=20 cell_nm=18 dot_nm=5\n\
                    cell x=0 y=0 layer=0 zone=0 kind=normal color=red\n";
        assert!(matches!(
            parse_layout(text),
            Err(ParseError::UnknownKey { line: 2, .. })
        ));
    }

    #[test]
    fn malformed_lines() {
        let head = "qca-layout v1 name=d pitch_nm=20 cell_nm=18 dot_nm=5\n";
        for bad in [
            "cell x=0 y=0 layer=0 zone=0",
            "cell x=a y=0 layer=0 zone=0 kind=normal",
            "cell x=0 y=0 layer=0 zone=0 kind=fixed:0",
            "cell x=0 y=0 layer=0 zone=0 kind=input:",
            "wire x=0",
            "cell x=0 y=0 layer=0 zone=0 kind=normal rot=30",
        ] {
            let err = parse_layout(&format!("{head}{bad}\n")).unwrap_err();
            assert!(
                matches!(err, ParseError::Malformed { line: 2, .. }),
                "{bad}: {err}"
            );
        }
        assert!(matches!(
            parse_layout("cell x=0 y=0 layer=0 zone=0 kind=normal\n"),
            Err(ParseError::MissingHeader { line: 1 })
        ));
    }

    #[test]
    fn empty_layout_is_header_only() {
        let text = serialize_layout(&Layout::empty("e"));
        assert_eq!(
            text,
            "qca-layout v1 name=e pitch_nm=20 cell_nm=18 dot_nm=5\n"
        );
        assert_eq!(parse_layout(&text).unwrap(), Layout::empty("e"));
    }

    #[test]
    fn serializes_sorted() {
        let shuffled = "qca-layout v1 name=wire pitch_nm=20 cell_nm=18 dot_nm=5\n\
                        cell x=2 y=0 layer=0 zone=0 kind=output:Y\n\
                        cell x=0 y=0 layer=0 zone=0 kind=input:A\n\
                        cell x=1 y=0 layer=0 zone=0 kind=normal rot=45\n";
        let text = serialize_layout(&parse_layout(shuffled).unwrap());
        let lines: Vec<_> = text.lines().skip(1).collect();
        assert_eq!(
            lines,
            [
                "cell x=0 y=0 layer=0 zone=0 kind=input:A",
                "cell x=1 y=0 layer=0 zone=0 kind=normal rot=45",
                "cell x=2 y=0 layer=0 zone=0 kind=output:Y",
            ]
        );
    }

    fn arb_layout() -> impl Strategy<Value = Layout> {
        let kind = prop_oneof![
            Just(CellKind::Normal),
            any::<bool>().prop_map(CellKind::Fixed),
        ];
        let cell = (-30i32..30, -30i32..30, 0i32..2, 0u8..4, kind, any::<bool>());
        (proptest::collection::vec(cell, 0..40), 0usize..4).prop_map(|(raw, n_ports)| {
            let mut seen = HashSet::new();
            let mut cells: Vec<Cell> = raw
                .into_iter()
                .filter(|(x, y, l, ..)| seen.insert((*x, *y, *l)))
                .map(|(x, y, layer, zone, kind, rotated)| Cell {
                    x,
                    y,
                    layer,
                    zone,
                    kind,
                    rotated,
                })
                .collect();
            for (i, c) in cells.iter_mut().take(n_ports).enumerate() {
                c.kind = if i % 2 == 0 {
                    CellKind::Input(format!("in{i}"))
                } else {
                    CellKind::Output(format!("out{i}"))
                };
            }
            Layout::new("prop", Geometry::default(), cells)
        })
    }

    proptest! {
        #[test]
        fn round_trip(layout in arb_layout()) {
            let back = parse_layout(&serialize_layout(&layout)).unwrap();
            prop_assert_eq!(back, layout);
        }

        #[test]
        fn line_order_does_not_matter(layout in arb_layout(), seed in any::<u64>()) {
            let text = serialize_layout(&layout);
            let mut lines: Vec<&str> = text.lines().skip(1).collect();
            // deterministic shuffle from the seed
            let n = lines.len();
            for i in (1..n).rev() {
                let j = (seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64) % (i as u64 + 1)) as usize;
                lines.swap(i, j);
            }
            let shuffled = format!("{}\n{}\n", text.lines().next().unwrap(), lines.join("\n"));
            let back = parse_layout(&shuffled).unwrap();
            prop_assert_eq!(back.cells().len(), layout.cells().len());
            prop_assert_eq!(back, layout);
        }
    }
}
