use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::sole_color;
use crate::canon::{canonical_form, tree_shapes};
use crate::colored::{canonical_template, ColoredGraph};
use crate::error::{Error, Result};
use crate::graph::{bipartition, classify, find_odd_cycle, Digraph, Side, Vertex};
use crate::hom::is_critical_obstruction;

/// How strictly "each leaf is uniquely colored" is read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum LeafColors {
    /// Every leaf carries exactly one color.
    #[default]
    Single,
    /// Additionally, no two leaves share a color.
    Distinct,
}

/// A colored tree whose colored vertices are exactly its leaves, with leaf
/// parities (undirected) or leaf orientations (directed) matching the template.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HTree {
    pub tree: ColoredGraph,
    pub directed: bool,
}

impl HTree {
    pub fn leaves(&self) -> Vec<Vertex> {
        let g = self.tree.carrier();
        (0..g.n()).filter(|&v| g.degree(v) == 1).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TreeViolation {
    WrongCarrierKind { expected_directed: bool },
    Disconnected,
    HasCycle,
    ColoredInternal { vertex: Vertex },
    UncoloredLeaf { vertex: Vertex },
    LeafColorCount { vertex: Vertex, count: usize },
    RepeatedLeafColor { color: Vertex, leaves: (Vertex, Vertex) },
    ParityMismatch { leaves: (Vertex, Vertex), colors: (Vertex, Vertex), tree_distance: usize },
    ColorsUnreachable { colors: (Vertex, Vertex) },
    NotStronglyBipartite,
    LeafOrientation { leaf: Vertex, color: Vertex, needs_incoming: bool },
}

/// Checks every H-tree condition and returns all violations found.
pub fn validate_h_tree(t: &ColoredGraph, h: &Digraph, directed: bool, leaf_colors: LeafColors) -> Vec<TreeViolation> {
    let g = t.carrier();
    let n = g.n();
    let mut violations = Vec::new();
    if g.is_symmetric() == directed && g.arc_count() > 0 {
        violations.push(TreeViolation::WrongCarrierKind { expected_directed: directed });
    }
    if n > 0 && g.distances_from(0).iter().any(Option::is_none) {
        violations.push(TreeViolation::Disconnected);
    }
    if g.has_loop() || g.undirected_edges().len() + 1 != n.max(1) {
        violations.push(TreeViolation::HasCycle);
    }

    let mut leaves = Vec::new();
    for v in 0..n {
        let is_leaf = g.degree(v) == 1;
        let count = t.color_count(v);
        match (is_leaf, count) {
            (false, 0) => {}
            (false, _) => violations.push(TreeViolation::ColoredInternal { vertex: v }),
            (true, 0) => violations.push(TreeViolation::UncoloredLeaf { vertex: v }),
            (true, 1) => leaves.push(v),
            (true, count) => violations.push(TreeViolation::LeafColorCount { vertex: v, count }),
        }
    }

    if leaf_colors == LeafColors::Distinct {
        for (i, &a) in leaves.iter().enumerate() {
            for &b in &leaves[i + 1..] {
                if sole_color(t, a) == sole_color(t, b) {
                    violations.push(TreeViolation::RepeatedLeafColor { color: sole_color(t, a).unwrap(), leaves: (a, b) });
                }
            }
        }
    }

    if directed {
        if !classify(g).strongly_bipartite {
            violations.push(TreeViolation::NotStronglyBipartite);
        }
        for &leaf in &leaves {
            let color = sole_color(t, leaf).unwrap();
            if color >= h.n() {
                continue;
            }
            let is_sink = h.out_neighbors(color).is_empty() && !h.in_neighbors(color).is_empty();
            let is_source = h.in_neighbors(color).is_empty() && !h.out_neighbors(color).is_empty();
            if is_sink && g.in_neighbors(leaf).is_empty() {
                violations.push(TreeViolation::LeafOrientation { leaf, color, needs_incoming: true });
            }
            if is_source && g.out_neighbors(leaf).is_empty() {
                violations.push(TreeViolation::LeafOrientation { leaf, color, needs_incoming: false });
            }
        }
    } else {
        for (i, &va) in leaves.iter().enumerate() {
            let from_va = g.distances_from(va);
            for &vb in &leaves[i + 1..] {
                let (a, b) = (sole_color(t, va).unwrap(), sole_color(t, vb).unwrap());
                let Some(tree_distance) = from_va[vb] else { continue };
                if a >= h.n() || b >= h.n() {
                    continue;
                }
                match h.distances_from(a)[b] {
                    None => violations.push(TreeViolation::ColorsUnreachable { colors: (a, b) }),
                    Some(d) if d % 2 != tree_distance % 2 => {
                        violations.push(TreeViolation::ParityMismatch { leaves: (va, vb), colors: (a, b), tree_distance })
                    }
                    _ => {}
                }
            }
        }
    }
    violations
}

fn tree_mode(h: &Digraph) -> Result<bool> {
    if h.is_symmetric() {
        if let Some(cycle) = find_odd_cycle(h) {
            return Err(Error::NotBipartite { odd_cycle: cycle });
        }
        Ok(false)
    } else if classify(h).strongly_bipartite {
        Ok(true)
    } else {
        Err(Error::HypothesisViolated(format!("`{}` is neither undirected nor strongly bipartite", h.name())))
    }
}

/// Every valid H-tree with at most `max_leaves` leaves and `max_vertices`
/// vertices, one per color-respecting isomorphism class. Directed H-trees are
/// produced when `h` is a strongly bipartite digraph, undirected ones when `h`
/// is an undirected bipartite graph. Order: by vertex count, then tree shape,
/// then leaf coloring, then orientation.
pub fn enumerate_h_trees(h: &Digraph, max_leaves: usize, max_vertices: usize, leaf_colors: LeafColors) -> Result<Vec<HTree>> {
    if max_leaves < 2 {
        return Err(Error::InvalidBound("an H-tree needs room for at least 2 leaves".into()));
    }
    let directed = tree_mode(h)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for size in 2..=max_vertices {
        for shape in tree_shapes(size) {
            let leaves: Vec<Vertex> = (0..size).filter(|&v| shape.degree(v) == 1).collect();
            if leaves.len() > max_leaves || h.n() == 0 {
                continue;
            }
            let carriers: Vec<Digraph> = if directed {
                let parts = bipartition(&shape)?;
                [Side::A, Side::B]
                    .into_iter()
                    .map(|from| {
                        let arcs = shape.arcs().filter(|&(u, _)| parts.side_of(u) == from);
                        Digraph::directed("T", size, arcs).unwrap()
                    })
                    .collect()
            } else {
                vec![shape.clone()]
            };
            let mut coloring = vec![0usize; leaves.len()];
            loop {
                for carrier in &carriers {
                    let tree = ColoredGraph::new(carrier.clone(), h.n(), leaves.iter().copied().zip(coloring.iter().copied())).unwrap();
                    if validate_h_tree(&tree, h, directed, leaf_colors).is_empty() && seen.insert(canonical_form(&tree)) {
                        let tree = tree.renamed(format!("T{}", out.len()));
                        out.push(HTree { tree, directed });
                    }
                }
                if !advance(&mut coloring, h.n()) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// The enumerated H-trees that are critical obstructions for `H^c`.
pub fn critical_tree_obstructions(h: &Digraph, max_leaves: usize, max_vertices: usize, leaf_colors: LeafColors) -> Result<Vec<HTree>> {
    let template = canonical_template(h);
    let mut out = Vec::new();
    for t in enumerate_h_trees(h, max_leaves, max_vertices, leaf_colors)? {
        if is_critical_obstruction(&t.tree, &template)?.is_critical() {
            out.push(t);
        }
    }
    Ok(out)
}

/// One branch produced by [`split_tree_at`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPiece {
    pub tree: HTree,
    /// Original vertex id of each piece vertex; the split vertex's copy keeps its id.
    pub original: Vec<Vertex>,
    /// Empty when the piece is a valid H-tree.
    pub violations: Vec<TreeViolation>,
}

/// Removes internal vertex `u` and re-attaches a copy of it, colored `color`,
/// to each resulting branch. Pieces come in ascending order of `u`'s neighbor.
pub fn split_tree_at(t: &HTree, u: Vertex, color: Vertex, h: &Digraph, leaf_colors: LeafColors) -> Result<Vec<SplitPiece>> {
    let x = &t.tree;
    let g = x.carrier();
    if u >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: u, n: g.n() });
    }
    if g.degree(u) <= 1 {
        return Err(Error::VertexIsLeaf(u));
    }
    if x.is_colored(u) {
        return Err(Error::VertexColored(u));
    }
    if color >= x.template_n() {
        return Err(Error::ColorOutOfRange { color, template_n: x.template_n() });
    }
    let mut pieces = Vec::new();
    for start in g.neighbors(u) {
        let mut member = vec![false; g.n()];
        member[u] = true;
        member[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for w in g.neighbors(v) {
                if !member[w] {
                    member[w] = true;
                    queue.push_back(w);
                }
            }
        }
        let original: Vec<Vertex> = (0..g.n()).filter(|&v| member[v]).collect();
        let mut piece = x.induced(&original);
        let copy = original.iter().position(|&v| v == u).unwrap();
        piece.add_color(copy, color)?;
        let violations = validate_h_tree(&piece, h, t.directed, leaf_colors);
        pieces.push(SplitPiece { tree: HTree { tree: piece, directed: t.directed }, original, violations });
    }
    Ok(pieces)
}
