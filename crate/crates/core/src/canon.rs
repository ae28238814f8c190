//! Color-respecting canonical forms and small-structure generators.
//!
//! Vertices are first split into cells by iterated color refinement (colors,
//! loops, then multisets of neighbor cells in each direction). The canonical
//! form is the lexicographically least encoding over every vertex order that
//! lists cells in refinement order and permutes freely inside each cell.
//! Refinement only prunes orders that could never be isomorphism-invariant, so
//! the result is exact.

use std::collections::{BTreeMap, HashSet};

use crate::colored::ColoredGraph;
use crate::graph::{Digraph, Vertex};

/// Opaque canonical encoding; equal iff the structures are isomorphic by a
/// map that preserves arcs and color sets.
pub type CanonicalForm = Vec<u32>;

fn refine(x: &ColoredGraph) -> Vec<usize> {
    let g = x.carrier();
    let n = x.n();
    let initial: Vec<(Vec<Vertex>, bool)> = (0..n).map(|v| (x.colors(v).collect(), g.has_arc(v, v))).collect();
    let mut labels = rank(&initial);
    let mut classes = count_classes(&labels);
    loop {
        let sigs: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut outs: Vec<usize> = g.out_neighbors(v).iter().map(|&w| labels[w]).collect();
                let mut ins: Vec<usize> = g.in_neighbors(v).iter().map(|&w| labels[w]).collect();
                outs.sort_unstable();
                ins.sort_unstable();
                (labels[v], outs, ins)
            })
            .collect();
        let next = rank(&sigs);
        let next_classes = count_classes(&next);
        labels = next;
        if next_classes == classes {
            return labels;
        }
        classes = next_classes;
    }
}

fn rank<T: Ord + Clone>(sigs: &[T]) -> Vec<usize> {
    let mut distinct: Vec<T> = sigs.to_vec();
    distinct.sort();
    distinct.dedup();
    sigs.iter().map(|s| distinct.binary_search(s).unwrap()).collect()
}

fn count_classes(labels: &[usize]) -> usize {
    labels.iter().collect::<HashSet<_>>().len()
}

fn encode(x: &ColoredGraph, order: &[Vertex]) -> CanonicalForm {
    let g = x.carrier();
    let n = order.len();
    let mut code = vec![n as u32, x.template_n() as u32, g.is_symmetric() as u32];
    for &v in order {
        code.push(x.color_count(v) as u32);
        code.extend(x.colors(v).map(|h| h as u32));
    }
    let mut word = 0u32;
    let mut bits = 0;
    for &u in order {
        for &v in order {
            word = (word << 1) | g.has_arc(u, v) as u32;
            bits += 1;
            if bits == 32 {
                code.push(word);
                word = 0;
                bits = 0;
            }
        }
    }
    if bits > 0 {
        code.push(word << (32 - bits));
    }
    code
}

fn permutations(items: &[Vertex]) -> Vec<Vec<Vertex>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut result = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            result.push(tail);
        }
    }
    result
}

pub fn canonical_form(x: &ColoredGraph) -> CanonicalForm {
    let labels = refine(x);
    let mut cells: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
    for (v, &l) in labels.iter().enumerate() {
        cells.entry(l).or_default().push(v);
    }
    let cell_perms: Vec<Vec<Vec<Vertex>>> = cells.values().map(|c| permutations(c)).collect();
    let mut pos = vec![0usize; cell_perms.len()];
    let mut best: Option<CanonicalForm> = None;
    loop {
        let order: Vec<Vertex> = pos.iter().zip(&cell_perms).flat_map(|(&i, perms)| perms[i].iter().copied()).collect();
        let code = encode(x, &order);
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
        let mut p = cell_perms.len();
        loop {
            if p == 0 {
                return best.unwrap_or_else(|| encode(x, &[]));
            }
            p -= 1;
            pos[p] += 1;
            if pos[p] < cell_perms[p].len() {
                break;
            }
            pos[p] = 0;
        }
    }
}

pub fn canonical_form_of_graph(g: &Digraph) -> CanonicalForm {
    canonical_form(&ColoredGraph::uncolored(g.clone(), 0))
}

/// One undirected tree per isomorphism class on exactly `n` vertices, built by
/// attaching a leaf to every vertex of every smaller tree.
pub fn tree_shapes(n: usize) -> Vec<Digraph> {
    if n == 0 {
        return Vec::new();
    }
    let mut level = vec![Digraph::undirected("T", 1, []).unwrap()];
    for size in 2..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for t in &level {
            for v in 0..t.n() {
                let mut edges = t.undirected_edges();
                edges.push((v, size - 1));
                let grown = Digraph::undirected("T", size, edges).unwrap();
                if seen.insert(canonical_form_of_graph(&grown)) {
                    next.push(grown);
                }
            }
        }
        level = next;
    }
    level
}
