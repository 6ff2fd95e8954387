//! Gate-level reference functions.

pub fn maj3(a: bool, b: bool, c: bool) -> bool {
    (a && b) || (b && c) || (a && c)
}

/// The 3x3 reversible gate: two majorities (the second with its first
/// input inverted) and an XOR of the outer inputs.
pub fn rqg(x1: bool, x2: bool, x3: bool) -> (bool, bool, bool) {
    (maj3(x1, x2, x3), maj3(!x1, x2, x3), x1 ^ x3)
}

/// Feynman (controlled-NOT) gate: `(x, y) -> (x, x ^ y)`.
pub fn feynman(x: bool, y: bool) -> (bool, bool) {
    (x, x ^ y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AddSub {
    pub cout: bool,
    pub bout: bool,
    pub sumdiff: bool,
    /// `a ^ c`, kept only to make the map invertible.
    pub gar: bool,
}

/// Full adder-subtractor built from one reversible gate and two Feynman
/// gates, with the constant input tied to 0.
pub fn adder_subtractor(a: bool, b: bool, c: bool) -> AddSub {
    let (b_copy, b_fan) = feynman(b, false);
    let (cout, bout, a_xor_c) = rqg(a, b_copy, c);
    let (gar, sumdiff) = feynman(a_xor_c, b_fan);
    AddSub {
        cout,
        bout,
        sumdiff,
        gar,
    }
}
