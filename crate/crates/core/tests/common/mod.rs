#![allow(dead_code)]

use std::collections::BTreeSet;

use qnary::debruijn::QNaryGraph;

/// Canonical form of a cyclic edge sequence: its least rotation.
pub fn canonical_cycle(edges: &[usize]) -> Vec<usize> {
    (0..edges.len())
        .map(|k| {
            let mut r = edges.to_vec();
            r.rotate_left(k);
            r
        })
        .min()
        .unwrap()
}

fn is_repetition(edges: &[usize]) -> bool {
    let l = edges.len();
    (1..l).any(|d| l % d == 0 && (0..l).all(|i| edges[i] == edges[i % d]))
}

/// Primitive closed walks of length <= max_len found by depth-first search
/// over edge sequences, with no reference to words.
pub fn primitive_cycles_by_dfs(g: &QNaryGraph, max_len: usize) -> BTreeSet<Vec<usize>> {
    fn extend(g: &QNaryGraph, path: &mut Vec<usize>, max_len: usize, out: &mut BTreeSet<Vec<usize>>) {
        let first = path[0];
        let last = *path.last().unwrap();
        if g.terminus(last) == g.origin(first) && !is_repetition(path) {
            out.insert(canonical_cycle(path));
        }
        if path.len() == max_len {
            return;
        }
        for e in g.out_edges(g.terminus(last)) {
            path.push(e);
            extend(g, path, max_len, out);
            path.pop();
        }
    }
    let mut out = BTreeSet::new();
    for e in 0..g.edge_count() {
        let mut path = vec![e];
        extend(g, &mut path, max_len, &mut out);
    }
    out
}

/// Sets of distinct cycles with total length `n`.
pub fn cycle_sets(cycles: &[Vec<usize>], n: usize) -> BTreeSet<BTreeSet<Vec<usize>>> {
    fn go(
        cycles: &[Vec<usize>],
        from: usize,
        remaining: usize,
        current: &mut Vec<Vec<usize>>,
        out: &mut BTreeSet<BTreeSet<Vec<usize>>>,
    ) {
        if remaining == 0 {
            out.insert(current.iter().cloned().collect());
            return;
        }
        for i in from..cycles.len() {
            if cycles[i].len() <= remaining {
                current.push(cycles[i].clone());
                go(cycles, i + 1, remaining - cycles[i].len(), current, out);
                current.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    go(cycles, 0, n, &mut Vec::new(), &mut out);
    out
}
