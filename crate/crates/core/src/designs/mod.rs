//! Bundled reference layouts, each paired with the gate network it must
//! reproduce and the metrics it is expected to show.

pub mod art;

use thiserror::Error;

use crate::model::Layout;
use crate::oracle::{library, GateNetwork};

use art::{from_art, Port};

#[derive(Debug, Error, PartialEq)]
pub enum DesignError {
    #[error("unknown design `{0}`")]
    Unknown(String),
}

/// Cell count goal with a relative tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountTarget {
    pub nominal: usize,
    pub tolerance: f64,
}

impl CountTarget {
    pub fn contains(&self, count: usize) -> bool {
        let n = self.nominal as f64;
        (count as f64 - n).abs() <= n * self.tolerance
    }
}

#[derive(Debug, Clone)]
pub struct ReferenceDesign {
    pub layout: Layout,
    pub oracle: GateNetwork,
    /// Clock cycles.
    pub expected_latency: f64,
    pub cell_count_target: Option<CountTarget>,
    pub notes: &'static str,
}

/// Every bundled design, smallest first.
pub const NAMES: [&str; 8] = [
    "wire", "inverter", "majority", "crossing", "xor2", "feynman", "rqg", "addsub",
];

pub fn build(name: &str) -> Result<ReferenceDesign, DesignError> {
    match name {
        "rqg" => Ok(build_rqg()),
        "addsub" => Ok(build_adder_subtractor()),
        "feynman" => Ok(build_feynman()),
        _ => build_primitive(name),
    }
}

pub fn build_primitive(name: &str) -> Result<ReferenceDesign, DesignError> {
    Ok(match name {
        "wire" => wire(),
        "inverter" => inverter(),
        "majority" => majority(),
        "crossing" => crossing(),
        "xor2" => xor2(),
        _ => return Err(DesignError::Unknown(name.to_string())),
    })
}

fn wire() -> ReferenceDesign {
    let layout = from_art(
        "wire",
        "A00112233Y",
        &[Port::input('A', 0, "in"), Port::output('Y', 3, "out")],
    );
    ReferenceDesign {
        layout,
        oracle: library::identity(),
        expected_latency: 1.0,
        cell_count_target: None,
        notes: "straight wire through all four clock zones",
    }
}

fn inverter() -> ReferenceDesign {
    let layout = from_art(
        "inverter",
        "
        ...00...
        A000.11Y
        ...00...
        ",
        &[Port::input('A', 0, "in"), Port::output('Y', 1, "out")],
    );
    ReferenceDesign {
        layout,
        oracle: library::inverter(),
        expected_latency: 0.5,
        cell_count_target: None,
        notes: "forked inverter: two branches meet the output diagonally",
    }
}

fn majority() -> ReferenceDesign {
    let layout = from_art(
        "majority",
        "
        ..A.....
        ..0.....
        B000111Y
        ..0.....
        ..C.....
        ",
        &[
            Port::input('A', 0, "A"),
            Port::input('B', 0, "B"),
            Port::input('C', 0, "C"),
            Port::output('Y', 1, "Y"),
        ],
    );
    ReferenceDesign {
        layout,
        oracle: library::majority(),
        expected_latency: 0.5,
        cell_count_target: None,
        notes: "three-input majority with the device cell at the centre of the cross",
    }
}

fn crossing() -> ReferenceDesign {
    let layout = from_art(
        "crossing",
        "
        .......B.......
        .......0.......
        .......1.......
        .......1.......
        .......2.......
        .......2.......
        A22330000011112P
        ...............
        .......3.......
        .......3.......
        .......0.......
        .......0.......
        .......1.......
        .......Q.......
        ",
        &[
            Port::input('A', 2, "A"),
            Port::input('B', 0, "B"),
            Port::output('P', 2, "Ao"),
            Port::output('Q', 1, "Bo"),
        ],
    );
    ReferenceDesign {
        layout,
        oracle: library::crossing(),
        expected_latency: 1.5,
        cell_count_target: None,
        notes: "coplanar crossing: the vertical signal jumps over the shared cell \
                while the horizontal signal holds it",
    }
}

fn xor2() -> ReferenceDesign {
    let layout = from_art(
        "xor2",
        "
        ......P......
        ......0......
        A00000100000B
        .0....1....0.
        .0....1....0.
        .0....2....0.
        .0....2....0.
        .0..N23Y...0.
        .0....2....0.
        .0....2....0.
        .0...1.1...0.
        .0...111...0.
        .0....1....0.
        .00000100000.
        ......0......
        ......N......
        ",
        &[
            Port::input('A', 0, "A"),
            Port::input('B', 0, "B"),
            Port::output('Y', 3, "Y"),
            Port::fixed('P', 0, true),
            Port::fixed('N', 0, false),
        ],
    );
    ReferenceDesign {
        layout,
        oracle: library::xor2(),
        expected_latency: 1.0,
        cell_count_target: None,
        notes: "OR on top, NAND below through a forked inverter, joined by an AND; \
                the output cell sits inside the layout",
    }
}

fn build_feynman() -> ReferenceDesign {
    let layout = from_art(
        "feynman",
        "
        .........H......
        .........0......
        ...X00000100000Y
        ....0....1....0.
        .2110....1....0.
        .2..0....2....0.
        .3..0....2....0.
        .P..0..N23Q...0.
        ....0....2....0.
        ....0....2....0.
        ....0...1.1...0.
        ....0...111...0.
        ....0....1....0.
        ....00000100000.
        .........0......
        .........N......
        ",
        &[
            Port::input('X', 0, "X"),
            Port::input('Y', 0, "Y"),
            Port::output('P', 3, "P"),
            Port::output('Q', 3, "Q"),
            Port::fixed('H', 0, true),
            Port::fixed('N', 0, false),
        ],
    );
    ReferenceDesign {
        layout,
        oracle: library::feynman(),
        expected_latency: 1.0,
        cell_count_target: None,
        notes: "the xor2 block with a delayed copy of X tapped off its input bus",
    }
}

/// Y1 and Y2 are majority gates sharing all three inputs; Y3 = X1 ^ X3 is
/// built as MAJ(X1, !P, Q) with P = X1 & X3 and Q = !X1 & X3. X2 reaches
/// the second majority by hopping over Y1's path.
pub fn build_rqg() -> ReferenceDesign {
    let layout = from_art(
        "rqg",
        "
        ....P.....Q...........
        ....3.....3...........
        ....3.....3...........
        ....2.....3...........
        ....2.....3...........
        .0002.1122322111111111
        .0..2.....2....1.....0
        .0..2.....2....1.....0
        .0..1...222....1.....0
        .0..1...111111121K...0
        .0..1...1......2.....0
        .0..1..0.0.....2.....0
        .0..1..000.....2.....0
        .0..1...X00112233R...0
        .0..1...0......2.....0
        Y000100000.....2.....0
        ....0....0.11..2.....0
        ....0..K0111.222.....0
        ....0....0.11........0
        ....0....0...........0
        ....0....0...........0
        ....00000000000000000Z
        ",
        &[
            Port::input('X', 0, "X1"),
            Port::input('Y', 0, "X2"),
            Port::input('Z', 0, "X3"),
            Port::output('P', 3, "Y1"),
            Port::output('Q', 3, "Y2"),
            Port::output('R', 3, "Y3"),
            Port::fixed('K', 0, false),
        ],
    );
    ReferenceDesign {
        layout,
        oracle: library::rqg(),
        expected_latency: 1.0,
        cell_count_target: None,
        notes: "one clock-zone crossing; X1 and Y3 sit inside the layout",
    }
}

/// The RQG core with A, B, C on X1, X2, X3 gives Cout, Bout and Gar.
/// SumDiff = MAJ(A, Bout, !Cout); A reaches it through a second crossing
/// on B's trunk, which sets the 7-stage latency.
pub fn build_adder_subtractor() -> ReferenceDesign {
    let layout = from_art(
        "addsub",
        "
        ....P..................
        ....3...........Q......
        ....3........S..0......
        ....3........2..0......
        ....3..33....1..0......
        ....3333.00001000......
        ....3..33....0..3......
        ....3........0..3......
        ....3........3..3......
        ....3........3..3......
        ....3........2..3......
        ....3........2..3......
        ....3........1..3......
        ....2........1..3......
        ....2...........3......
        .0002.11112222223222222
        .0..2........0..2.....2
        .0..2........0..2.....2
        .0..1........0..2.....2
        .0..1...000A00..1.K...2
        .0..1...0.......1.1...2
        .0..1...0.......1121111
        .0..1...0.00....1.2...1
        .0..1...000.11111.2...1
        .0..1...0.00......2...1
        B0001000000111122233G.1
        ....0....0........2...1
        ....0....0.11.....2...1
        ....0..K0111.222222...1
        ....0....0.11.........1
        ....0....0............1
        ....000C001111111111111
        ",
        &[
            Port::input('A', 0, "A"),
            Port::input('B', 0, "B"),
            Port::input('C', 0, "C"),
            Port::output('P', 3, "Cout"),
            Port::output('Q', 0, "Bout"),
            Port::output('S', 2, "SumDiff"),
            Port::output('G', 3, "Gar"),
            Port::fixed('K', 0, false),
        ],
    );
    ReferenceDesign {
        layout,
        oracle: library::adder_subtractor(),
        expected_latency: 1.75,
        cell_count_target: Some(CountTarget {
            nominal: 228,
            tolerance: 0.15,
        }),
        notes: "single layer, no rotated cells, two clock-zone crossings",
    }
}
