use serde::{Deserialize, Serialize};

use super::tree::{enumerate_h_trees, LeafColors};
use crate::colored::{canonical_template, embed_as_colored, ColoredGraph};
use crate::error::{Error, Result};
use crate::graph::{find_odd_cycle, Digraph, Vertex};
use crate::hom::{find_homomorphism, is_critical_obstruction, Homomorphism, SearchOutcome};

/// An H-tree obstruction for `H^c` that nevertheless maps into `G_H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeFailure {
    pub tree: ColoredGraph,
    pub critical: bool,
    /// The homomorphism from the tree into `G_H`.
    pub phi: Homomorphism,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArVerdict {
    /// Hypothesis holds within bounds and `H` is a retract of `G`.
    Retract,
    /// Some bounded tree obstruction maps into `G_H`, and no retraction exists.
    HypothesisFails,
    /// Hypothesis holds within bounds but no retraction exists: either larger
    /// trees break the hypothesis, or `H` is not an absolute retract for
    /// this many leaves.
    CandidateCounterexample,
    /// A retraction exists although a tree obstruction maps into `G_H`; the
    /// retraction composed with that map would contradict the obstruction.
    Violated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArReport {
    pub max_leaves: usize,
    pub max_vertices: usize,
    pub leaf_colors: LeafColors,
    pub colored_host: ColoredGraph,
    pub template: Digraph,
    pub tree_obstructions_checked: usize,
    pub critical_obstructions_checked: usize,
    pub failures: Vec<TreeFailure>,
    pub retraction: SearchOutcome,
    pub verdict: ArVerdict,
}

impl ArReport {
    pub fn hypothesis_holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Bounded check of the absolute-retract condition for one host graph: every
/// H-tree obstruction for `H^c` with at most `max_leaves` leaves and
/// `max_vertices` vertices must stay an obstruction for `G_H`; then tests
/// whether `H` is actually a retract of `G`.
pub fn absolute_retract_check(
    g: &Digraph,
    h: &Digraph,
    embedding: &[Vertex],
    max_leaves: usize,
    max_vertices: usize,
    leaf_colors: LeafColors,
) -> Result<ArReport> {
    for graph in [g, h] {
        if let Some((u, v)) = graph.arcs().find(|&(u, v)| !graph.has_arc(v, u)) {
            return Err(Error::NotSymmetric { name: graph.name().to_string(), u, v });
        }
        if let Some(odd_cycle) = find_odd_cycle(graph) {
            return Err(Error::NotBipartite { odd_cycle });
        }
    }
    let colored_host = embed_as_colored(g, h, embedding)?;
    let template = canonical_template(h);

    let mut tree_obstructions_checked = 0;
    let mut critical_obstructions_checked = 0;
    let mut failures = Vec::new();
    for t in enumerate_h_trees(h, max_leaves, max_vertices, leaf_colors)? {
        if find_homomorphism(&t.tree, &template)?.is_found() {
            continue;
        }
        tree_obstructions_checked += 1;
        let critical = is_critical_obstruction(&t.tree, &template)?.is_critical();
        critical_obstructions_checked += critical as usize;
        if let Some(phi) = find_homomorphism(&t.tree, &colored_host)?.witness {
            failures.push(TreeFailure { tree: t.tree, critical, phi });
        }
    }

    let retraction = find_homomorphism(&colored_host, &template)?;
    let verdict = match (failures.is_empty(), retraction.is_found()) {
        (true, true) => ArVerdict::Retract,
        (false, false) => ArVerdict::HypothesisFails,
        (true, false) => ArVerdict::CandidateCounterexample,
        (false, true) => ArVerdict::Violated,
    };
    Ok(ArReport {
        max_leaves,
        max_vertices,
        leaf_colors,
        colored_host,
        template: h.clone(),
        tree_obstructions_checked,
        critical_obstructions_checked,
        failures,
        retraction,
        verdict,
    })
}
