//! Template-colored digraphs: a carrier digraph whose vertices carry sets of
//! template vertices, plus the constructions that move between plain graphs
//! containing a template and colored structures over it.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Digraph, Vertex};

/// A digraph whose vertices carry colors drawn from the vertices of a
/// template on `template_n` vertices. Vertex `v` is colored `h` when `h` is in
/// its color set; sets may be empty or hold several colors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "ColoredWire", try_from = "ColoredWire")]
pub struct ColoredGraph {
    carrier: Digraph,
    template_n: usize,
    colors: Vec<FixedBitSet>,
}

impl ColoredGraph {
    /// Builds a colored graph from `(vertex, color)` pairs.
    pub fn new<I>(carrier: Digraph, template_n: usize, colors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut x = Self::uncolored(carrier, template_n);
        for (v, h) in colors {
            x.add_color(v, h)?;
        }
        Ok(x)
    }

    pub fn uncolored(carrier: Digraph, template_n: usize) -> Self {
        let colors = vec![FixedBitSet::with_capacity(template_n); carrier.n()];
        Self { carrier, template_n, colors }
    }

    pub fn add_color(&mut self, v: Vertex, h: Vertex) -> Result<()> {
        if v >= self.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n() });
        }
        if h >= self.template_n {
            return Err(Error::ColorOutOfRange { color: h, template_n: self.template_n });
        }
        self.colors[v].insert(h);
        Ok(())
    }

    pub fn carrier(&self) -> &Digraph {
        &self.carrier
    }

    pub fn name(&self) -> &str {
        self.carrier.name()
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.carrier = self.carrier.renamed(name);
        self
    }

    pub fn n(&self) -> usize {
        self.carrier.n()
    }

    pub fn template_n(&self) -> usize {
        self.template_n
    }

    pub fn color_set(&self, v: Vertex) -> &FixedBitSet {
        &self.colors[v]
    }

    /// Colors of `v`, ascending.
    pub fn colors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.colors[v].ones()
    }

    pub fn color_count(&self, v: Vertex) -> usize {
        self.colors[v].count_ones(..)
    }

    pub fn is_colored(&self, v: Vertex) -> bool {
        !self.colors[v].is_clear()
    }

    pub fn has_color(&self, v: Vertex, h: Vertex) -> bool {
        self.colors[v].contains(h)
    }

    /// All `(vertex, color)` memberships in ascending order.
    pub fn color_pairs(&self) -> Vec<(Vertex, Vertex)> {
        (0..self.n()).flat_map(|v| self.colors(v).map(move |h| (v, h))).collect()
    }

    /// The substructure obtained by applying `delta`.
    pub fn apply(&self, delta: &SubstructureDelta) -> ColoredGraph {
        match *delta {
            SubstructureDelta::RemoveEdge { u, v } => {
                let symmetric = self.carrier.is_symmetric();
                let out = (0..self.n())
                    .map(|a| {
                        self.carrier
                            .out_neighbors(a)
                            .iter()
                            .copied()
                            .filter(|&b| !((a, b) == (u, v) || (symmetric && (a, b) == (v, u))))
                            .collect()
                    })
                    .collect();
                let carrier = Digraph::from_adjacency(self.name().to_string(), out, symmetric);
                Self { carrier, template_n: self.template_n, colors: self.colors.clone() }
            }
            SubstructureDelta::RemoveColor { vertex, color } => {
                let mut next = self.clone();
                next.colors[vertex].set(color, false);
                next
            }
            SubstructureDelta::RemoveIsolatedVertex { vertex } => {
                let keep: Vec<Vertex> = (0..self.n()).filter(|&w| w != vertex).collect();
                self.induced(&keep)
            }
        }
    }

    /// Colored subgraph induced on `keep`, renumbered in the given order.
    pub fn induced(&self, keep: &[Vertex]) -> ColoredGraph {
        Self {
            carrier: self.carrier.induced(keep),
            template_n: self.template_n,
            colors: keep.iter().map(|&v| self.colors[v].clone()).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ColoredWire {
    carrier: Digraph,
    template_n: usize,
    colors: Vec<Vec<Vertex>>,
}

impl From<ColoredGraph> for ColoredWire {
    fn from(x: ColoredGraph) -> Self {
        let colors = x.colors.iter().map(|c| c.ones().collect()).collect();
        ColoredWire { carrier: x.carrier, template_n: x.template_n, colors }
    }
}

impl TryFrom<ColoredWire> for ColoredGraph {
    type Error = Error;

    fn try_from(w: ColoredWire) -> Result<Self> {
        if w.colors.len() != w.carrier.n() {
            return Err(Error::PreconditionViolated(format!("{} color lists for {} vertices", w.colors.len(), w.carrier.n())));
        }
        let pairs: Vec<(Vertex, Vertex)> = w.colors.iter().enumerate().flat_map(|(v, hs)| hs.iter().map(move |&h| (v, h))).collect();
        ColoredGraph::new(w.carrier, w.template_n, pairs)
    }
}

/// One step down the substructure order: the result is a proper substructure
/// covered by the original.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubstructureDelta {
    /// Removes arc `(u, v)`; on symmetric carriers both orientations go and `u <= v`.
    RemoveEdge {
        u: Vertex,
        v: Vertex,
    },
    RemoveColor {
        vertex: Vertex,
        color: Vertex,
    },
    /// Removes an uncolored vertex with no incident arcs. Later vertices shift down by one.
    RemoveIsolatedVertex {
        vertex: Vertex,
    },
}

/// Every maximal proper substructure, as deltas in a fixed order: edges by
/// ascending pair, then colors by (vertex, color), then isolated vertices.
pub fn maximal_proper_substructures(x: &ColoredGraph) -> Vec<SubstructureDelta> {
    let g = x.carrier();
    let mut deltas: Vec<SubstructureDelta> = if g.is_symmetric() {
        g.undirected_edges().into_iter().map(|(u, v)| SubstructureDelta::RemoveEdge { u, v }).collect()
    } else {
        g.arcs().map(|(u, v)| SubstructureDelta::RemoveEdge { u, v }).collect()
    };
    deltas.extend(x.color_pairs().into_iter().map(|(vertex, color)| SubstructureDelta::RemoveColor { vertex, color }));
    deltas.extend(
        (0..x.n())
            .filter(|&v| !x.is_colored(v) && g.out_neighbors(v).is_empty() && g.in_neighbors(v).is_empty())
            .map(|vertex| SubstructureDelta::RemoveIsolatedVertex { vertex }),
    );
    deltas
}

/// `h` with each vertex colored by itself.
pub fn canonical_template(h: &Digraph) -> ColoredGraph {
    let mut x = ColoredGraph::uncolored(h.clone(), h.n());
    for v in 0..h.n() {
        x.colors[v].insert(v);
    }
    x
}

/// Checks that `embedding` maps `h` injectively onto an induced copy inside `g`.
pub fn check_embedding(g: &Digraph, h: &Digraph, embedding: &[Vertex]) -> Result<()> {
    if embedding.len() != h.n() {
        return Err(Error::EmbeddingLength { expected: h.n(), got: embedding.len() });
    }
    let mut seen = vec![None; g.n()];
    for (a, &image) in embedding.iter().enumerate() {
        if image >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: image, n: g.n() });
        }
        if let Some(first) = seen[image] {
            return Err(Error::NotInjective { first, second: a, image });
        }
        seen[image] = Some(a);
    }
    for a in 0..h.n() {
        for b in 0..h.n() {
            let in_template = h.has_arc(a, b);
            let in_host = g.has_arc(embedding[a], embedding[b]);
            if in_template != in_host {
                let detail = if in_template {
                    format!("is an arc of the template but ({},{}) is missing in the host", embedding[a], embedding[b])
                } else {
                    format!("is not an arc of the template but ({},{}) is an arc of the host", embedding[a], embedding[b])
                };
                return Err(Error::NotInduced { a, b, detail });
            }
        }
    }
    Ok(())
}

/// The colored graph `G_H`: `g` with each embedded template vertex colored by
/// its template preimage and every other vertex uncolored.
pub fn embed_as_colored(g: &Digraph, h: &Digraph, embedding: &[Vertex]) -> Result<ColoredGraph> {
    check_embedding(g, h, embedding)?;
    ColoredGraph::new(g.clone(), h.n(), embedding.iter().enumerate().map(|(a, &image)| (image, a)))
}

/// Output of [`h_embed`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HEmbed {
    /// Template vertices occupy `0..template.n()`; the uncolored vertices follow.
    pub graph: Digraph,
    /// Identity embedding of the template into `graph`.
    pub embedding: Vec<Vertex>,
    /// Original ids of the uncolored vertices, in their new order.
    pub uncolored: Vec<Vertex>,
}

/// Builds the graph on `H ∪ U` (U the uncolored vertices of `g`) that joins an
/// uncolored `u` to template vertex `h` whenever `u` neighbors a vertex colored `h`.
pub fn h_embed(g: &ColoredGraph, template: &Digraph) -> Result<HEmbed> {
    if g.template_n() != template.n() {
        return Err(Error::TemplateMismatch { source_template: g.template_n(), target_template: template.n() });
    }
    if !template.is_symmetric() {
        return Err(Error::PreconditionViolated(format!("template `{}` is not undirected", template.name())));
    }
    let carrier = g.carrier();
    if !carrier.is_symmetric() {
        return Err(Error::PreconditionViolated(format!("colored graph `{}` is not undirected", g.name())));
    }
    let mut color_of = vec![None; g.n()];
    for (v, slot) in color_of.iter_mut().enumerate() {
        match g.color_count(v) {
            0 => {}
            1 => *slot = g.colors(v).next(),
            _ => {
                let colors: Vec<Vertex> = g.colors(v).collect();
                return Err(Error::PreconditionViolated(format!("vertex {v} has more than one color {colors:?}")));
            }
        }
    }
    for (u, v) in carrier.arcs() {
        if let (Some(a), Some(b)) = (color_of[u], color_of[v]) {
            if !template.has_arc(a, b) {
                return Err(Error::PreconditionViolated(format!(
                    "edge ({u},{v}) joins vertices colored {a} and {b}, which are not adjacent in the template"
                )));
            }
        }
    }

    let hn = template.n();
    let uncolored: Vec<Vertex> = (0..g.n()).filter(|&v| color_of[v].is_none()).collect();
    let mut new_id = vec![usize::MAX; g.n()];
    for (i, &u) in uncolored.iter().enumerate() {
        new_id[u] = hn + i;
    }
    let mut edges = template.undirected_edges();
    for &u in &uncolored {
        for &w in carrier.out_neighbors(u) {
            match color_of[w] {
                None => edges.push((new_id[u], new_id[w])),
                Some(h) => edges.push((h, new_id[u])),
            }
        }
    }
    let graph = Digraph::undirected(format!("{}_embed", g.name()), hn + uncolored.len(), edges)?;
    Ok(HEmbed { graph, embedding: (0..hn).collect(), uncolored })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::graph::{classify, power};

    fn color_lists(x: &ColoredGraph) -> Vec<Vec<Vertex>> {
        (0..x.n()).map(|v| x.colors(v).collect()).collect()
    }

    #[test]
    fn canonical_template_colors_each_vertex_by_itself() {
        assert_eq!(color_lists(&canonical_template(&k2())), vec![vec![0], vec![1]]);
        assert_eq!(color_lists(&canonical_template(&Digraph::empty("v", 1))), vec![vec![0]]);
        let c6 = canonical_template(&cycle(6));
        assert!((0..6).all(|v| color_lists(&c6)[v] == vec![v]));
    }

    #[test]
    fn embed_examples() {
        let k2 = k2();
        let id = embed_as_colored(&k2, &k2, &[0, 1]).unwrap();
        assert_eq!(id, canonical_template(&k2));

        let p = Digraph::undirected("p", 3, [(2, 0), (0, 1)]).unwrap();
        let x = embed_as_colored(&p, &k2, &[0, 1]).unwrap();
        assert_eq!(color_lists(&x), vec![vec![0], vec![1], vec![]]);

        assert!(embed_as_colored(&cycle(3), &k2, &[0, 1]).is_ok());
        assert!(matches!(embed_as_colored(&cycle(3), &path(3), &[0, 1, 2]), Err(Error::NotInduced { a: 0, b: 2, .. })));
        assert!(matches!(embed_as_colored(&cycle(3), &k2, &[1, 1]), Err(Error::NotInjective { .. })));
        assert!(matches!(embed_as_colored(&cycle(3), &k2, &[1]), Err(Error::EmbeddingLength { .. })));
    }

    #[test]
    fn maximal_substructure_counts() {
        let v = ColoredGraph::new(Digraph::empty("v", 1), 2, [(0, 0), (0, 1)]).unwrap();
        assert_eq!(
            maximal_proper_substructures(&v),
            vec![SubstructureDelta::RemoveColor { vertex: 0, color: 0 }, SubstructureDelta::RemoveColor { vertex: 0, color: 1 }]
        );

        let edge = ColoredGraph::uncolored(k2(), 2);
        assert_eq!(maximal_proper_substructures(&edge), vec![SubstructureDelta::RemoveEdge { u: 0, v: 1 }]);

        let amb = ColoredGraph::new(path(3), 3, [(0, 0), (2, 2)]).unwrap();
        assert_eq!(maximal_proper_substructures(&amb).len(), 4);

        let lone = ColoredGraph::uncolored(Digraph::empty("e", 2), 1);
        assert_eq!(maximal_proper_substructures(&lone).len(), 2);
    }

    #[test]
    fn applying_deltas() {
        let x = ColoredGraph::new(path(3), 3, [(0, 0), (2, 2)]).unwrap();
        let deltas = maximal_proper_substructures(&x);
        let results: Vec<ColoredGraph> = deltas.iter().map(|d| x.apply(d)).collect();
        for (i, r) in results.iter().enumerate() {
            assert_ne!(r, &x);
            for s in &results[i + 1..] {
                assert_ne!(r, s);
            }
        }
        let no_edge = x.apply(&SubstructureDelta::RemoveEdge { u: 0, v: 1 });
        assert_eq!(no_edge.carrier().arc_count(), 2);
        assert!(no_edge.carrier().is_symmetric());

        let iso = ColoredGraph::new(Digraph::undirected("i", 3, [(0, 2)]).unwrap(), 1, [(2, 0)]).unwrap();
        let removed = iso.apply(&SubstructureDelta::RemoveIsolatedVertex { vertex: 1 });
        assert_eq!(removed.n(), 2);
        assert!(removed.carrier().has_arc(0, 1));
        assert_eq!(color_lists(&removed), vec![vec![], vec![0]]);
    }

    #[test]
    fn h_embed_examples() {
        let k2 = k2();
        let g = ColoredGraph::uncolored(path(3), 2);
        let e = h_embed(&g, &k2).unwrap();
        assert_eq!(e.graph.n(), 5);
        assert_eq!(e.graph.undirected_edges(), vec![(0, 1), (2, 3), (3, 4)]);
        assert_eq!(e.embedding, vec![0, 1]);

        // u=0 adjacent to c=1 colored 0
        let g = ColoredGraph::new(k2.clone(), 2, [(1, 0)]).unwrap();
        let e = h_embed(&g, &k2).unwrap();
        assert_eq!(e.graph.n(), 3);
        assert_eq!(e.graph.undirected_edges(), vec![(0, 1), (0, 2)]);
        assert_eq!(e.uncolored, vec![0]);

        let g = ColoredGraph::new(Digraph::empty("v", 1), 2, [(0, 0), (0, 1)]).unwrap();
        assert!(matches!(h_embed(&g, &k2), Err(Error::PreconditionViolated(_))));

        let g = ColoredGraph::new(k2.clone(), 2, [(0, 0), (1, 0)]).unwrap();
        assert!(matches!(h_embed(&g, &k2), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn h_embed_contains_template_induced() {
        let c6 = cycle(6);
        let g = ColoredGraph::new(power(&path(2), 2).unwrap(), 6, [(0, 0), (3, 1)]).unwrap();
        let e = h_embed(&g, &c6).unwrap();
        assert!(check_embedding(&e.graph, &c6, &e.embedding).is_ok());
        assert!(classify(&e.graph).bipartite);
    }

    #[test]
    fn serde_round_trip() {
        let x = ColoredGraph::new(arc(), 3, [(0, 2), (1, 0), (1, 1)]).unwrap();
        let json = serde_json::to_string(&x).unwrap();
        let back: ColoredGraph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
    }
}
