//! Layouts drawn as character grids.
//!
//! `.` or space is an empty site, a digit `0`-`3` is a normal cell in that
//! clock zone, and any other character is looked up in a legend.

use crate::model::{Cell, CellKind, Geometry, Layout};

#[derive(Debug, Clone)]
pub struct Port {
    pub symbol: char,
    pub zone: u8,
    pub kind: CellKind,
}

impl Port {
    pub fn input(symbol: char, zone: u8, label: &str) -> Self {
        Port {
            symbol,
            zone,
            kind: CellKind::Input(label.to_string()),
        }
    }

    pub fn output(symbol: char, zone: u8, label: &str) -> Self {
        Port {
            symbol,
            zone,
            kind: CellKind::Output(label.to_string()),
        }
    }

    pub fn fixed(symbol: char, zone: u8, value: bool) -> Self {
        Port {
            symbol,
            zone,
            kind: CellKind::Fixed(value),
        }
    }
}

/// Builds a layout from `art`. Panics on a symbol missing from `legend`;
/// art is compiled into the crate, so that is a programming error.
pub fn from_art(name: &str, art: &str, legend: &[Port]) -> Layout {
    let mut cells = Vec::new();
    let rows: Vec<&str> = art.lines().filter(|l| !l.trim().is_empty()).collect();
    let indent = rows
        .iter()
        .map(|r| r.len() - r.trim_start().len())
        .min()
        .unwrap_or(0);
    for (y, row) in rows.iter().enumerate() {
        for (x, ch) in row.chars().skip(indent).enumerate() {
            let (zone, kind) = match ch {
                '.' | ' ' => continue,
                '0'..='3' => (ch as u8 - b'0', CellKind::Normal),
                _ => {
                    let p = legend
                        .iter()
                        .find(|p| p.symbol == ch)
                        .unwrap_or_else(|| panic!("symbol `{ch}` missing from legend of {name}"));
                    (p.zone, p.kind.clone())
                }
            };
            cells.push(Cell::new(x as i32, y as i32, zone, kind));
        }
    }
    Layout::new(name, Geometry::default(), cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_a_wire() {
        let l = from_art(
            "w",
            "
            .........
            A0011223Y
            ",
            &[Port::input('A', 0, "A"), Port::output('Y', 3, "Y")],
        );
        assert_eq!(l.cells().len(), 9);
        assert_eq!((l.cells()[0].x, l.cells()[0].y), (0, 1));
        assert_eq!(l.cells()[0].kind, CellKind::Input("A".into()));
        assert_eq!(l.cells()[8].zone, 3);
    }
}
