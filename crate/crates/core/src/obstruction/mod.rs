//! Obstruction catalogs: elementary critical obstructions, H-trees, duality
//! verification and the bounded absolute-retract harness.

mod absolute;
mod duality;
mod tree;

pub use absolute::{absolute_retract_check, ArReport, ArVerdict, TreeFailure};
pub use duality::{enumerate_colored_graphs, verify_duality, Discrepancy, DiscrepancyKind, DualityBounds, DualityReport, DualityStatus};
pub use tree::{
    critical_tree_obstructions, enumerate_h_trees, split_tree_at, validate_h_tree, HTree, LeafColors, SplitPiece, TreeViolation,
};

use serde::{Deserialize, Serialize};

use crate::colored::ColoredGraph;
use crate::error::{Error, Result};
use crate::graph::{classify, distance, find_odd_cycle, Digraph, Vertex};

/// Which clause of the elementary family a structure comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElementaryKind {
    /// One vertex carrying two distinct colors.
    DoubleColor,
    /// Directed: an arc whose head is colored with a source of H.
    SinkColoredBySource,
    /// Directed: an arc whose tail is colored with a sink of H.
    SourceColoredBySink,
    /// Directed: the uncolored directed path of length 2.
    DirectedTwoPath,
    /// Undirected: a path whose length has the wrong parity for its end colors.
    ParityPath,
    /// Undirected: an uncolored odd cycle.
    OddCycle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Elementary {
    pub kind: ElementaryKind,
    pub graph: ColoredGraph,
}

fn require_nontrivial_connected(h: &Digraph) -> Result<()> {
    let report = classify(h);
    if !report.nontrivial {
        return Err(Error::HypothesisViolated(format!("`{}` is trivial", h.name())));
    }
    if !report.connected {
        return Err(Error::HypothesisViolated(format!("`{}` is not connected", h.name())));
    }
    Ok(())
}

fn double_colors(h: &Digraph, symmetric: bool) -> Vec<Elementary> {
    let n = h.n();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let carrier = Digraph::with_flag(format!("A({a},{b})"), 1, [], symmetric).unwrap();
            let graph = ColoredGraph::new(carrier, n, [(0, a), (0, b)]).unwrap();
            out.push(Elementary { kind: ElementaryKind::DoubleColor, graph });
        }
    }
    out
}

/// The finite elementary family of a non-trivial connected strongly bipartite
/// digraph, in order: double colors, sink colored by a source, source colored
/// by a sink, the directed 2-path.
pub fn elementary_obstructions_directed(h: &Digraph) -> Result<Vec<Elementary>> {
    require_nontrivial_connected(h)?;
    let report = classify(h);
    if !report.strongly_bipartite {
        return Err(Error::HypothesisViolated(format!("`{}` is not strongly bipartite", h.name())));
    }
    let n = h.n();
    let mut out = double_colors(h, false);
    for &d in &report.sources {
        let carrier = Digraph::directed(format!("B({d})"), 2, [(0, 1)]).unwrap();
        let graph = ColoredGraph::new(carrier, n, [(1, d)]).unwrap();
        out.push(Elementary { kind: ElementaryKind::SinkColoredBySource, graph });
    }
    for &u in &report.sinks {
        let carrier = Digraph::directed(format!("C({u})"), 2, [(0, 1)]).unwrap();
        let graph = ColoredGraph::new(carrier, n, [(0, u)]).unwrap();
        out.push(Elementary { kind: ElementaryKind::SourceColoredBySink, graph });
    }
    let carrier = Digraph::directed("D", 3, [(0, 1), (1, 2)]).unwrap();
    out.push(Elementary { kind: ElementaryKind::DirectedTwoPath, graph: ColoredGraph::uncolored(carrier, n) });
    Ok(out)
}

/// The slice of the (infinite) elementary family of a non-trivial connected
/// bipartite graph with paths and cycles of length at most `max_length`.
/// Paths start at length 1; a single vertex with two colors is the
/// double-color clause.
pub fn elementary_obstructions_bipartite(h: &Digraph, max_length: usize) -> Result<Vec<Elementary>> {
    if max_length == 0 {
        return Err(Error::InvalidBound("maximum path length must be at least 1".into()));
    }
    require_nontrivial_connected(h)?;
    if !h.is_symmetric() {
        return Err(Error::HypothesisViolated(format!("`{}` is not undirected", h.name())));
    }
    if let Some(cycle) = find_odd_cycle(h) {
        return Err(Error::HypothesisViolated(format!("`{}` is not bipartite: odd cycle {cycle:?}", h.name())));
    }
    let n = h.n();
    let mut out = double_colors(h, true);
    for a in 0..n {
        for b in a..n {
            let d = distance(h, a, b)?.expect("connected");
            for len in (1..=max_length).filter(|len| len % 2 != d % 2) {
                let carrier = Digraph::undirected(format!("B({a},{b};{len})"), len + 1, (0..len).map(|i| (i, i + 1))).unwrap();
                let graph = ColoredGraph::new(carrier, n, [(0, a), (len, b)]).unwrap();
                out.push(Elementary { kind: ElementaryKind::ParityPath, graph });
            }
        }
    }
    for len in (3..=max_length).step_by(2) {
        let carrier = Digraph::undirected(format!("C{len}"), len, (0..len).map(|i| (i, (i + 1) % len))).unwrap();
        out.push(Elementary { kind: ElementaryKind::OddCycle, graph: ColoredGraph::uncolored(carrier, n) });
    }
    Ok(out)
}

/// Colors of a single-colored vertex, used by the tree routines.
pub(crate) fn sole_color(x: &ColoredGraph, v: Vertex) -> Option<Vertex> {
    (x.color_count(v) == 1).then(|| x.colors(v).next().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colored::canonical_template;
    use crate::graph::families::*;
    use crate::hom::is_critical_obstruction;

    fn kinds(list: &[Elementary]) -> Vec<ElementaryKind> {
        list.iter().map(|e| e.kind).collect()
    }

    #[test]
    fn single_arc_family() {
        use ElementaryKind::*;
        let fam = elementary_obstructions_directed(&arc()).unwrap();
        assert_eq!(kinds(&fam), vec![DoubleColor, SinkColoredBySource, SourceColoredBySink, DirectedTwoPath]);
        assert!(fam[1].graph.has_color(1, 0));
        assert!(fam[2].graph.has_color(0, 1));
        let t = canonical_template(&arc());
        for e in &fam {
            assert!(is_critical_obstruction(&e.graph, &t).unwrap().is_critical(), "{:?}", e.kind);
        }
    }

    #[test]
    fn oriented_p3_family_has_seven() {
        let p = Digraph::directed("p", 3, [(0, 1), (2, 1)]).unwrap();
        let fam = elementary_obstructions_directed(&p).unwrap();
        assert_eq!(fam.len(), 7);
    }

    #[test]
    fn directed_hypotheses() {
        assert!(matches!(elementary_obstructions_directed(&Digraph::empty("v", 1)), Err(Error::HypothesisViolated(_))));
        let not_sb = Digraph::directed("p", 3, [(0, 1), (1, 2)]).unwrap();
        assert!(matches!(elementary_obstructions_directed(&not_sb), Err(Error::HypothesisViolated(_))));
        let split = Digraph::directed("s", 4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(elementary_obstructions_directed(&split), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn k2_slice_of_length_three() {
        use ElementaryKind::*;
        let fam = elementary_obstructions_bipartite(&k2(), 3).unwrap();
        assert_eq!(fam.len(), 7);
        assert_eq!(kinds(&fam).iter().filter(|&&k| k == ParityPath).count(), 5);
        assert_eq!(fam.last().unwrap().kind, OddCycle);
        assert_eq!(fam.last().unwrap().graph.n(), 3);
        assert!(matches!(elementary_obstructions_bipartite(&k2(), 0), Err(Error::InvalidBound(_))));
        assert!(matches!(elementary_obstructions_bipartite(&cycle(5), 3), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn bipartite_family_is_critical() {
        for h in [k2(), path(3), cycle(6)] {
            let t = canonical_template(&h);
            for e in elementary_obstructions_bipartite(&h, 5).unwrap() {
                assert!(is_critical_obstruction(&e.graph, &t).unwrap().is_critical(), "{}", e.graph.name());
            }
        }
    }
}
