//! Instance generators: exhaustive small bipartite graphs and seeded random
//! colored graphs satisfying the H-embed preconditions.

use std::collections::HashSet;

use rand::Rng;

use crate::canon::canonical_form_of_graph;
use crate::colored::ColoredGraph;
use crate::graph::{classify, Digraph, Vertex};

/// Every connected bipartite graph on `1..=max_n` vertices, one per
/// isomorphism class, ordered by vertex count then by edge pattern.
pub fn connected_bipartite_graphs(max_n: usize) -> Vec<Digraph> {
    let mut out = Vec::new();
    if max_n >= 1 {
        out.push(Digraph::undirected("B1_0", 1, []).unwrap());
    }
    for n in 2..=max_n {
        let mut seen = HashSet::new();
        for a in 1..=n / 2 {
            let cross: Vec<(Vertex, Vertex)> = (0..a).flat_map(|u| (a..n).map(move |v| (u, v))).collect();
            for mask in 1u64..(1u64 << cross.len()) {
                let edges = cross.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
                let g = Digraph::undirected("B", n, edges).unwrap();
                if classify(&g).connected && seen.insert(canonical_form_of_graph(&g)) {
                    let index = seen.len() - 1;
                    out.push(g.renamed(format!("B{n}_{index}")));
                }
            }
        }
    }
    out
}

/// Every graph on exactly `n` vertices, one per isomorphism class: symmetric
/// when `symmetric`, arbitrary digraphs otherwise, with loops only when
/// `loops`.
pub fn graphs_up_to_iso(n: usize, symmetric: bool, loops: bool) -> Vec<Digraph> {
    let mut slots = Vec::new();
    for u in 0..n {
        for v in 0..n {
            let wanted = if u == v { loops } else { !symmetric || u < v };
            if wanted {
                slots.push((u, v));
            }
        }
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << slots.len()) {
        let edges = slots.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
        let g = if symmetric { Digraph::undirected("G", n, edges) } else { Digraph::directed("G", n, edges) }.unwrap();
        if seen.insert(canonical_form_of_graph(&g)) {
            out.push(g.renamed(format!("G{n}_{}", out.len())));
        }
    }
    out
}

/// A random undirected colored graph over `template` with at most one color
/// per vertex and no edge between colored vertices whose colors are not
/// adjacent in the template.
pub fn random_embeddable_colored<R: Rng>(template: &Digraph, rng: &mut R, max_vertices: usize) -> ColoredGraph {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let edge_p = rng.gen_range(0.2..0.6);
    let color_p = rng.gen_range(0.2..0.7);
    let colors: Vec<Option<Vertex>> =
        (0..n).map(|_| (template.n() > 0 && rng.gen_bool(color_p)).then(|| rng.gen_range(0..template.n()))).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !rng.gen_bool(edge_p) {
                continue;
            }
            if let (Some(a), Some(b)) = (colors[u], colors[v]) {
                if !template.has_arc(a, b) {
                    continue;
                }
            }
            edges.push((u, v));
        }
    }
    let carrier = Digraph::undirected("G", n, edges).unwrap();
    let pairs = colors.iter().enumerate().filter_map(|(v, c)| c.map(|h| (v, h)));
    ColoredGraph::new(carrier, template.n(), pairs).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colored::h_embed;
    use crate::graph::families::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn counts_match_known_sequence() {
        // connected bipartite graphs by order: 1, 1, 1, 3, 5, 17, 44
        let graphs = connected_bipartite_graphs(7);
        let counts: Vec<usize> = (1..=7).map(|n| graphs.iter().filter(|g| g.n() == n).count()).collect();
        assert_eq!(counts, vec![1, 1, 1, 3, 5, 17, 44]);
    }

    #[test]
    fn small_graph_counts() {
        let count = |n, s, l| graphs_up_to_iso(n, s, l).len();
        assert_eq!([count(2, true, false), count(3, true, false), count(4, true, false)], [2, 4, 11]);
        assert_eq!([count(1, true, true), count(2, true, true), count(3, true, true)], [2, 6, 20]);
        assert_eq!([count(2, false, false), count(3, false, false), count(4, false, false)], [3, 16, 218]);
        assert_eq!([count(1, false, true), count(2, false, true)], [2, 10]);
    }

    #[test]
    fn random_instances_meet_embed_preconditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for h in [k2(), path(4), cycle(6)] {
            for _ in 0..50 {
                let g = random_embeddable_colored(&h, &mut rng, 6);
                assert!(h_embed(&g, &h).is_ok());
            }
        }
    }
}
