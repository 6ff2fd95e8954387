use super::table::{ConstColumn, TruthTable};
use super::OracleError;

/// Truth tables are enumerated exhaustively up to this many free inputs.
pub const MAX_TABLE_INPUTS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeId(usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    Input(String),
    Const(bool),
    Maj3(NodeId, NodeId, NodeId),
    Not(NodeId),
    Xor2(NodeId, NodeId),
    Fanout(NodeId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetOutput {
    pub label: String,
    pub node: NodeId,
    pub garbage: bool,
}

/// Acyclic gate graph. Nodes may only reference earlier nodes, so
/// insertion order is a topological order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GateNetwork {
    nodes: Vec<Gate>,
    /// Primary input columns (free inputs and constants) in order.
    columns: Vec<NodeId>,
    outputs: Vec<NetOutput>,
}

impl GateNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, g: Gate) -> NodeId {
        self.nodes.push(g);
        NodeId(self.nodes.len() - 1)
    }

    pub fn input(&mut self, label: impl Into<String>) -> NodeId {
        let id = self.push(Gate::Input(label.into()));
        self.columns.push(id);
        id
    }

    /// A constant primary input column.
    pub fn constant(&mut self, value: bool) -> NodeId {
        let id = self.push(Gate::Const(value));
        self.columns.push(id);
        id
    }

    pub fn maj3(&mut self, a: NodeId, b: NodeId, c: NodeId) -> NodeId {
        self.push(Gate::Maj3(a, b, c))
    }

    pub fn not(&mut self, a: NodeId) -> NodeId {
        self.push(Gate::Not(a))
    }

    pub fn xor2(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.push(Gate::Xor2(a, b))
    }

    pub fn fanout(&mut self, a: NodeId) -> NodeId {
        self.push(Gate::Fanout(a))
    }

    /// Feynman gate as a fanout of `x` and `x ^ y`.
    pub fn feynman(&mut self, x: NodeId, y: NodeId) -> (NodeId, NodeId) {
        (self.fanout(x), self.xor2(x, y))
    }

    pub fn output(&mut self, label: impl Into<String>, node: NodeId, garbage: bool) {
        self.outputs.push(NetOutput {
            label: label.into(),
            node,
            garbage,
        });
    }

    pub fn outputs(&self) -> &[NetOutput] {
        &self.outputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.nodes
    }

    /// Width of the primary input vector, constant columns included.
    pub fn input_width(&self) -> usize {
        self.columns.len()
    }

    pub fn free_inputs(&self) -> Vec<&str> {
        self.columns
            .iter()
            .filter_map(|id| match &self.nodes[id.0] {
                Gate::Input(l) => Some(l.as_str()),
                _ => None,
            })
            .collect()
    }

    fn constant_columns(&self) -> Vec<ConstColumn> {
        self.columns
            .iter()
            .enumerate()
            .filter_map(|(position, id)| match self.nodes[id.0] {
                Gate::Const(value) => Some(ConstColumn { position, value }),
                _ => None,
            })
            .collect()
    }
}

/// Evaluates the network on a full input vector (one bit per input
/// column, constant columns included).
pub fn eval_network(net: &GateNetwork, inputs: &[bool]) -> Result<Vec<bool>, OracleError> {
    if inputs.len() != net.columns.len() {
        return Err(OracleError::WidthMismatch {
            expected: net.columns.len(),
            got: inputs.len(),
        });
    }
    let mut values = vec![false; net.nodes.len()];
    for (id, &bit) in net.columns.iter().zip(inputs) {
        values[id.0] = bit;
    }
    for (i, g) in net.nodes.iter().enumerate() {
        values[i] = match *g {
            Gate::Input(_) | Gate::Const(_) => values[i],
            Gate::Maj3(a, b, c) => super::gates::maj3(values[a.0], values[b.0], values[c.0]),
            Gate::Not(a) => !values[a.0],
            Gate::Xor2(a, b) => values[a.0] ^ values[b.0],
            Gate::Fanout(a) => values[a.0],
        };
    }
    Ok(net.outputs.iter().map(|o| values[o.node.0]).collect())
}

/// Exhaustive table over the free inputs, constants at their pinned values.
pub fn truth_table(net: &GateNetwork) -> Result<TruthTable, OracleError> {
    let free = net.free_inputs();
    let n = free.len();
    if n > MAX_TABLE_INPUTS {
        return Err(OracleError::TooManyInputs(n));
    }
    let consts = net.constant_columns();
    let mut rows = Vec::with_capacity(1 << n);
    for k in 0..1usize << n {
        let mut bit = n;
        let full: Vec<bool> = (0..net.columns.len())
            .map(|pos| match consts.iter().find(|c| c.position == pos) {
                Some(c) => c.value,
                None => {
                    bit -= 1;
                    (k >> bit) & 1 == 1
                }
            })
            .collect();
        rows.push(eval_network(net, &full)?);
    }
    TruthTable::with_constants(
        free.into_iter().map(String::from).collect(),
        net.outputs.iter().map(|o| o.label.clone()).collect(),
        consts,
        rows,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InterfaceMetrics {
    pub constant_inputs: usize,
    pub garbage_outputs: usize,
}

pub fn interface_metrics(net: &GateNetwork) -> InterfaceMetrics {
    InterfaceMetrics {
        constant_inputs: net.constant_columns().len(),
        garbage_outputs: net.outputs.iter().filter(|o| o.garbage).count(),
    }
}

/// Named reference networks.
pub mod library {
    use super::GateNetwork;

    pub fn identity() -> GateNetwork {
        let mut n = GateNetwork::new();
        let a = n.input("in");
        n.output("out", a, false);
        n
    }

    pub fn inverter() -> GateNetwork {
        let mut n = GateNetwork::new();
        let a = n.input("in");
        let y = n.not(a);
        n.output("out", y, false);
        n
    }

    pub fn majority() -> GateNetwork {
        let mut n = GateNetwork::new();
        let (a, b, c) = (n.input("A"), n.input("B"), n.input("C"));
        let y = n.maj3(a, b, c);
        n.output("Y", y, false);
        n
    }

    pub fn xor2() -> GateNetwork {
        let mut n = GateNetwork::new();
        let (a, b) = (n.input("A"), n.input("B"));
        let y = n.xor2(a, b);
        n.output("Y", y, false);
        n
    }

    /// Two independent wires, `A -> Ao` and `B -> Bo`.
    pub fn crossing() -> GateNetwork {
        let mut n = GateNetwork::new();
        let (a, b) = (n.input("A"), n.input("B"));
        n.output("Ao", a, false);
        n.output("Bo", b, false);
        n
    }

    pub fn feynman() -> GateNetwork {
        let mut n = GateNetwork::new();
        let (x, y) = (n.input("X"), n.input("Y"));
        let (p, q) = n.feynman(x, y);
        n.output("P", p, false);
        n.output("Q", q, false);
        n
    }

    pub fn rqg() -> GateNetwork {
        let mut n = GateNetwork::new();
        let (x1, x2, x3) = (n.input("X1"), n.input("X2"), n.input("X3"));
        let y1 = n.maj3(x1, x2, x3);
        let nx1 = n.not(x1);
        let y2 = n.maj3(nx1, x2, x3);
        let y3 = n.xor2(x1, x3);
        n.output("Y1", y1, false);
        n.output("Y2", y2, false);
        n.output("Y3", y3, false);
        n
    }

    /// Reversible full adder-subtractor: input columns `A, B, 0, C`; the
    /// first Feynman gate copies B, the reversible gate forms carry, borrow
    /// and A^C, and the second Feynman gate folds B into the sum.
    pub fn adder_subtractor() -> GateNetwork {
        let mut n = GateNetwork::new();
        let a = n.input("A");
        let b = n.input("B");
        let zero = n.constant(false);
        let c = n.input("C");
        let (b_copy, b_fan) = n.feynman(b, zero);
        let cout = n.maj3(a, b_copy, c);
        let na = n.not(a);
        let bout = n.maj3(na, b_copy, c);
        let a_xor_c = n.xor2(a, c);
        let (gar, sum) = n.feynman(a_xor_c, b_fan);
        n.output("Cout", cout, false);
        n.output("Bout", bout, false);
        n.output("SumDiff", sum, false);
        n.output("Gar", gar, true);
        n
    }
}

#[cfg(test)]
mod tests {
    use super::library::*;
    use super::*;
    use crate::oracle::gates;
    use crate::oracle::is_reversible;

    #[test]
    fn rqg_network_row() {
        let y = eval_network(&rqg(), &[false, true, false]).unwrap();
        assert_eq!(y, [false, true, false]);
    }

    #[test]
    fn adder_network_first_row() {
        let y = eval_network(&adder_subtractor(), &[false, false, false, false]).unwrap();
        assert_eq!(y, [false; 4]);
    }

    #[test]
    fn single_not() {
        assert_eq!(eval_network(&inverter(), &[true]).unwrap(), [false]);
        assert!(matches!(
            eval_network(&inverter(), &[true, false]),
            Err(OracleError::WidthMismatch { .. })
        ));
    }

    #[test]
    fn identity_table() {
        let t = truth_table(&identity()).unwrap();
        assert_eq!(t.rows(), [vec![false], vec![true]]);
    }

    #[test]
    fn composition_matches_gate_function() {
        let net = adder_subtractor();
        for k in 0..8u8 {
            let (a, b, c) = (k & 4 != 0, k & 2 != 0, k & 1 != 0);
            let r = gates::adder_subtractor(a, b, c);
            let y = eval_network(&net, &[a, b, false, c]).unwrap();
            assert_eq!(y, [r.cout, r.bout, r.sumdiff, r.gar]);
        }
    }

    #[test]
    fn interface_counts() {
        let m = interface_metrics(&adder_subtractor());
        assert_eq!((m.constant_inputs, m.garbage_outputs), (1, 1));
        assert_eq!(interface_metrics(&rqg()).constant_inputs, 0);

        // three constants feeding a multiplexer-style block
        let mut n = GateNetwork::new();
        let a = n.input("A");
        let k0 = n.constant(false);
        let k1 = n.constant(true);
        let k2 = n.constant(false);
        let m1 = n.maj3(a, k0, k1);
        let m2 = n.maj3(m1, k2, a);
        n.output("Y", m2, false);
        n.output("G", k1, true);
        assert_eq!(interface_metrics(&n).constant_inputs, 3);
    }

    #[test]
    fn too_many_inputs() {
        let mut n = GateNetwork::new();
        let ids: Vec<_> = (0..21).map(|i| n.input(format!("i{i}"))).collect();
        n.output("y", ids[0], false);
        assert_eq!(truth_table(&n), Err(OracleError::TooManyInputs(21)));
    }

    #[test]
    fn reversibility_verdicts() {
        assert_eq!(is_reversible(&truth_table(&rqg()).unwrap()), Ok(true));
        assert_eq!(is_reversible(&truth_table(&feynman()).unwrap()), Ok(true));
        assert_eq!(
            is_reversible(&truth_table(&adder_subtractor()).unwrap()),
            Ok(true)
        );
    }
}
