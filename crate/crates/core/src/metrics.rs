//! Cell count, bounding-box area and clock-zone latency.

use std::collections::HashMap;

use thiserror::Error;

use crate::model::{Layout, NUM_ZONES};

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("layout is empty")]
    Empty,
    #[error("layout has no input cells")]
    NoInputs,
    #[error("layout has no output cells")]
    NoOutputs,
    #[error("output `{0}` is not reachable from any input")]
    Unreachable(String),
    #[error("clock zones form a feedback loop")]
    FeedbackLoop,
}

/// Every cell counts, including inputs, outputs and fixed cells.
pub fn cell_count(layout: &Layout) -> usize {
    layout.cells().len()
}

/// Bounding-box area in square micrometres.
pub fn area(layout: &Layout) -> Result<f64, MetricsError> {
    let (x0, y0, x1, y1) = layout.bounding_box().ok_or(MetricsError::Empty)?;
    let g = &layout.geometry;
    let w = f64::from(x1 - x0) * g.grid_pitch + g.cell_size;
    let h = f64::from(y1 - y0) * g.grid_pitch + g.cell_size;
    Ok(w * h * 1e-6)
}

pub fn rotated_count(layout: &Layout) -> usize {
    layout.cells().iter().filter(|c| c.rotated).count()
}

pub fn layer_count(layout: &Layout) -> usize {
    let mut layers: Vec<i32> = layout.cells().iter().map(|c| c.layer).collect();
    layers.sort_unstable();
    layers.dedup();
    layers.len()
}

/// The eight surrounding grid positions.
const NEIGHBOURS: [(i32, i32); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];
const DIRECTIONS: [(i32, i32); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
/// Longest straight hop across a crossing, in grid steps.
const MAX_HOP: i32 = 3;

/// Per cell: `(adjacent cells, cells reachable by a hop)`.
///
/// A hop is a straight jump of two or three steps across a crossing: exactly
/// one cell lies in between, and its zone is two steps from the origin's.
pub(crate) fn adjacency(layout: &Layout) -> Vec<(Vec<usize>, Vec<usize>)> {
    let cells = layout.cells();
    let index: HashMap<(i32, i32, i32), usize> = cells
        .iter()
        .enumerate()
        .map(|(i, c)| ((c.x, c.y, c.layer), i))
        .collect();
    cells
        .iter()
        .map(|c| {
            let at = |dx: i32, dy: i32| index.get(&(c.x + dx, c.y + dy, c.layer)).copied();
            let adj = NEIGHBOURS
                .iter()
                .filter_map(|&(dx, dy)| at(dx, dy))
                .collect();
            let mut hops = Vec::new();
            for (ux, uy) in DIRECTIONS {
                let mut between: Vec<usize> = Vec::new();
                for k in 1..=MAX_HOP {
                    let Some(j) = at(ux * k, uy * k) else {
                        continue;
                    };
                    if let [m] = between[..] {
                        if cells[m].zone == (c.zone + 2) % NUM_ZONES {
                            hops.push(j);
                        }
                    }
                    between.push(j);
                }
            }
            (adj, hops)
        })
        .collect()
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Longest input-to-output path measured in clock-zone stages, divided by
/// four (one stage per quarter cycle).
///
/// Adjacent cells sharing a zone form one stage. Data may only move from a
/// stage to an adjacent stage whose zone is one step later (mod 4); that
/// step may also hop straight across a crossing.
pub fn latency(layout: &Layout) -> Result<f64, MetricsError> {
    let inputs = layout.inputs();
    let outputs = layout.outputs();
    if layout.is_empty() {
        return Err(MetricsError::Empty);
    }
    if inputs.is_empty() {
        return Err(MetricsError::NoInputs);
    }
    if outputs.is_empty() {
        return Err(MetricsError::NoOutputs);
    }
    let cells = layout.cells();
    let adj = adjacency(layout);

    let mut parent: Vec<usize> = (0..cells.len()).collect();
    for (i, (ns, _)) in adj.iter().enumerate() {
        for &j in ns {
            if cells[i].zone == cells[j].zone {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let comp: Vec<usize> = (0..cells.len()).map(|i| find(&mut parent, i)).collect();

    let mut succ: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, (ns, hops)) in adj.iter().enumerate() {
        for &j in ns.iter().chain(hops) {
            if cells[j].zone % NUM_ZONES == (cells[i].zone + 1) % NUM_ZONES {
                succ.entry(comp[i]).or_default().push(comp[j]);
            }
        }
    }
    for v in succ.values_mut() {
        v.sort_unstable();
        v.dedup();
    }

    // Longest path (in stages) from any input stage, by memoised DFS over
    // the stage DAG reachable from the inputs.
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let mut mark = vec![Mark::New; cells.len()];
    let mut order = Vec::new();
    for &(id, _) in &inputs {
        let start = comp[id.0];
        if mark[start] != Mark::New {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        mark[start] = Mark::Active;
        while let Some((node, k)) = stack.pop() {
            let next = succ.get(&node).and_then(|s| s.get(k)).copied();
            match next {
                Some(n) => {
                    stack.push((node, k + 1));
                    match mark[n] {
                        Mark::New => {
                            mark[n] = Mark::Active;
                            stack.push((n, 0));
                        }
                        Mark::Active => return Err(MetricsError::FeedbackLoop),
                        Mark::Done => {}
                    }
                }
                None => {
                    mark[node] = Mark::Done;
                    order.push(node);
                }
            }
        }
    }
    // `order` is a post-order, so reversing it is topological.
    let mut depth = vec![0usize; cells.len()];
    for &(id, _) in &inputs {
        depth[comp[id.0]] = 1;
    }
    for &node in order.iter().rev() {
        if depth[node] == 0 {
            continue;
        }
        if let Some(s) = succ.get(&node) {
            for &n in s {
                depth[n] = depth[n].max(depth[node] + 1);
            }
        }
    }
    let mut stages = 0;
    for (id, label) in outputs {
        match depth[comp[id.0]] {
            0 => return Err(MetricsError::Unreachable(label.to_string())),
            d => stages = stages.max(d),
        }
    }
    Ok(stages as f64 / f64::from(NUM_ZONES))
}
