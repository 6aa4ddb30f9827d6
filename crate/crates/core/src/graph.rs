//! Small graph utilities on boolean adjacency matrices.

use num_integer::Integer;

use crate::bits::BoolMatrix;

/// Strongly connected components, each sorted, ordered by least member.
/// Vertices on no cycle still form singleton components.
pub fn strongly_connected_components(adj: &BoolMatrix) -> Vec<Vec<usize>> {
    let reach = adj.reflexive_closure();
    let n = adj.dim();
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for v in 0..n {
        if assigned[v] {
            continue;
        }
        let comp: Vec<usize> = (v..n).filter(|&u| reach.get(v, u) && reach.get(u, v)).collect();
        for &u in &comp {
            assigned[u] = true;
        }
        out.push(comp);
    }
    out
}

/// Period (gcd of cycle lengths) of the strongly connected subgraph on `comp`, and the level of
/// each member modulo the period, measured from `comp[0]`.
pub fn period_and_levels(adj: &BoolMatrix, comp: &[usize]) -> (usize, Vec<usize>) {
    let mut level = vec![usize::MAX; adj.dim()];
    let mut queue = std::collections::VecDeque::new();
    level[comp[0]] = 0;
    queue.push_back(comp[0]);
    while let Some(u) = queue.pop_front() {
        for &v in comp {
            if adj.get(u, v) && level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut g = 0usize;
    for &u in comp {
        for &v in comp {
            if adj.get(u, v) {
                g = g.gcd(&(level[u] + 1).abs_diff(level[v]));
            }
        }
    }
    let residues = comp.iter().map(|&u| if g == 0 { 0 } else { level[u] % g }).collect();
    (g, residues)
}
