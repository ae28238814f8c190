//! Dense integer-vertex digraphs and the structural operations built on them:
//! symmetric closure, classification, bipartitions, orientations, relational
//! powers and distances.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Largest vertex count [`power`] will materialize unless told otherwise.
pub const DEFAULT_SIZE_CAP: usize = 1_000_000;

/// A digraph on the vertices `0..n`.
///
/// Undirected graphs are digraphs whose edge set is closed under reversal;
/// they carry `symmetric = true`. Loops are representable. Values are
/// immutable once built.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "DigraphWire", try_from = "DigraphWire")]
pub struct Digraph {
    name: String,
    n: usize,
    out: Vec<Vec<Vertex>>,
    inc: Vec<Vec<Vertex>>,
    arc_count: usize,
    symmetric: bool,
}

impl Digraph {
    /// Builds a digraph from arcs. Duplicate arcs are merged.
    pub fn directed<I>(name: impl Into<String>, n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        Self::with_flag(name, n, arcs, false)
    }

    /// Builds an undirected graph; every edge is stored in both orientations.
    pub fn undirected<I>(name: impl Into<String>, n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut out = vec![Vec::new(); n];
        for (u, v) in edges {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            out[u].push(v);
            out[v].push(u);
        }
        Ok(Self::from_adjacency(name.into(), out, true))
    }

    /// Builds a digraph and, when `symmetric` is set, checks that the arcs are
    /// closed under reversal.
    pub fn with_flag<I>(name: impl Into<String>, n: usize, arcs: I, symmetric: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let name = name.into();
        let mut out = vec![Vec::new(); n];
        for (u, v) in arcs {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            out[u].push(v);
        }
        let g = Self::from_adjacency(name, out, false);
        if symmetric {
            let missing = g.arcs().find(|&(u, v)| !g.has_arc(v, u));
            if let Some((u, v)) = missing {
                return Err(Error::NotSymmetric { name: g.name, u, v });
            }
            return Ok(Self { symmetric: true, ..g });
        }
        Ok(g)
    }

    pub fn empty(name: impl Into<String>, n: usize) -> Self {
        Self::from_adjacency(name.into(), vec![Vec::new(); n], false)
    }

    pub(crate) fn from_adjacency(name: String, mut out: Vec<Vec<Vertex>>, symmetric: bool) -> Self {
        let n = out.len();
        let mut inc = vec![Vec::new(); n];
        let mut arc_count = 0;
        for (u, list) in out.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            arc_count += list.len();
            for &v in list.iter() {
                inc[v].push(u);
            }
        }
        // `inc` lists are filled in ascending u order, so already sorted.
        Self { name, n, out, inc, arc_count, symmetric }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Number of stored arcs; an undirected edge counts twice, a loop once.
    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn has_arc(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && self.out[u].binary_search(&v).is_ok()
    }

    pub fn out_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.inc[v]
    }

    /// Neighbors of `v` in the symmetric closure, ascending.
    pub fn neighbors(&self, v: Vertex) -> Vec<Vertex> {
        let mut all: Vec<Vertex> = self.out[v].iter().chain(&self.inc[v]).copied().collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    /// Number of edges incident to `v` in the symmetric closure.
    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbors(v).len()
    }

    pub fn has_loop(&self) -> bool {
        (0..self.n).any(|v| self.has_arc(v, v))
    }

    /// All arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.out.iter().enumerate().flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    /// Undirected edges `(u, v)` with `u <= v` of the symmetric closure.
    pub fn undirected_edges(&self) -> Vec<(Vertex, Vertex)> {
        let set: BTreeSet<(Vertex, Vertex)> = self.arcs().map(|(u, v)| (u.min(v), u.max(v))).collect();
        set.into_iter().collect()
    }

    /// Breadth-first distances from `source` in the symmetric closure.
    pub fn distances_from(&self, source: Vertex) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in self.out[u].iter().chain(&self.inc[u]) {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Subgraph induced on `keep` (in the given order), renumbered `0..keep.len()`.
    pub fn induced(&self, keep: &[Vertex]) -> Digraph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let out = keep.iter().map(|&u| self.out[u].iter().filter(|&&v| index[v] != usize::MAX).map(|&v| index[v]).collect()).collect();
        Self::from_adjacency(self.name.clone(), out, self.symmetric)
    }
}

fn check_vertex(v: Vertex, n: usize) -> Result<()> {
    if v >= n {
        Err(Error::VertexOutOfRange { vertex: v, n })
    } else {
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct DigraphWire {
    name: String,
    n: usize,
    directed: bool,
    edges: Vec<(Vertex, Vertex)>,
}

impl From<Digraph> for DigraphWire {
    fn from(g: Digraph) -> Self {
        let edges = if g.symmetric { g.undirected_edges() } else { g.arcs().collect() };
        DigraphWire { name: g.name, n: g.n, directed: !g.symmetric, edges }
    }
}

impl TryFrom<DigraphWire> for Digraph {
    type Error = Error;

    fn try_from(w: DigraphWire) -> Result<Self> {
        if w.directed {
            Digraph::directed(w.name, w.n, w.edges)
        } else {
            Digraph::undirected(w.name, w.n, w.edges)
        }
    }
}

/// The two sides of a bipartite graph; `part_a` holds vertex 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    pub part_a: Vec<Vertex>,
    pub part_b: Vec<Vertex>,
}

impl Bipartition {
    pub fn side_of(&self, v: Vertex) -> Side {
        if self.part_a.binary_search(&v).is_ok() {
            Side::A
        } else {
            Side::B
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub connected: bool,
    pub bipartite: bool,
    pub strongly_bipartite: bool,
    pub nontrivial: bool,
    /// Vertices without incoming arcs (isolated vertices included).
    pub sources: Vec<Vertex>,
    /// Vertices without outgoing arcs (isolated vertices included).
    pub sinks: Vec<Vertex>,
}

pub fn symmetric_closure(d: &Digraph) -> Digraph {
    if d.symmetric {
        return d.clone();
    }
    let out = (0..d.n).map(|v| d.neighbors(v)).collect();
    Digraph::from_adjacency(d.name.clone(), out, true)
}

pub fn classify(d: &Digraph) -> StructureReport {
    let connected = d.n == 0 || d.distances_from(0).iter().all(Option::is_some);
    let bipartite = two_color(d).is_ok();
    let sources: Vec<Vertex> = (0..d.n).filter(|&v| d.inc[v].is_empty()).collect();
    let sinks: Vec<Vertex> = (0..d.n).filter(|&v| d.out[v].is_empty()).collect();
    let strongly_bipartite = (0..d.n).all(|v| d.inc[v].is_empty() || d.out[v].is_empty());
    StructureReport { connected, bipartite, strongly_bipartite, nontrivial: d.n > 1 && d.arc_count > 0, sources, sinks }
}

/// 2-colors the symmetric closure, component by component from the smallest
/// vertex. Returns an odd cycle on failure.
fn two_color(d: &Digraph) -> std::result::Result<Vec<bool>, Vec<Vertex>> {
    let n = d.n;
    let mut color: Vec<Option<bool>> = vec![None; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    for root in 0..n {
        if color[root].is_some() {
            continue;
        }
        color[root] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for w in d.neighbors(u) {
                match color[w] {
                    None => {
                        color[w] = Some(!color[u].unwrap());
                        parent[w] = u;
                        depth[w] = depth[u] + 1;
                        queue.push_back(w);
                    }
                    Some(c) if c == color[u].unwrap() => {
                        return Err(odd_cycle(u, w, &parent, &depth));
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(color.into_iter().map(Option::unwrap).collect())
}

fn odd_cycle(u: Vertex, w: Vertex, parent: &[Vertex], depth: &[usize]) -> Vec<Vertex> {
    if u == w {
        return vec![u];
    }
    let (mut a, mut b) = (u, w);
    let mut up_a = vec![a];
    let mut up_b = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        up_a.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        up_b.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        up_a.push(a);
        up_b.push(b);
    }
    // up_a: u .. lca, up_b: w .. lca
    up_b.pop();
    let mut cycle: Vec<Vertex> = up_a.into_iter().rev().collect();
    cycle.extend(up_b);
    cycle
}

/// An odd cycle of the symmetric closure (a loop counts as length 1), if any.
pub fn find_odd_cycle(d: &Digraph) -> Option<Vec<Vertex>> {
    two_color(d).err()
}

/// The bipartition of a connected bipartite graph, with vertex 0 in `part_a`.
pub fn bipartition(d: &Digraph) -> Result<Bipartition> {
    let colors = two_color(d).map_err(|odd_cycle| Error::NotBipartite { odd_cycle })?;
    if d.n > 0 && d.distances_from(0).iter().any(Option::is_none) {
        return Err(Error::NotConnected);
    }
    let (part_a, part_b) = (0..d.n).partition(|&v| !colors[v]);
    Ok(Bipartition { part_a, part_b })
}

/// Orients every edge of a connected bipartite graph out of `from`.
pub fn orient_bipartition(h: &Digraph, from: Side) -> Result<Digraph> {
    if !h.symmetric {
        if let Some((u, v)) = h.arcs().find(|&(u, v)| !h.has_arc(v, u)) {
            return Err(Error::NotSymmetric { name: h.name.clone(), u, v });
        }
    }
    let parts = bipartition(h)?;
    let arcs = h.arcs().filter(|&(u, _)| parts.side_of(u) == from);
    let suffix = match from {
        Side::A => "a",
        Side::B => "b",
    };
    Digraph::directed(format!("{}_d{}", h.name, suffix), h.n, arcs)
}

/// Shortest-path length in the symmetric closure, `None` when unreachable.
pub fn distance(h: &Digraph, a: Vertex, b: Vertex) -> Result<Option<usize>> {
    check_vertex(a, h.n)?;
    check_vertex(b, h.n)?;
    Ok(h.distances_from(a)[b])
}

/// Mixed-radix encoding of `arity`-tuples over `0..base`, most significant
/// coordinate first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleCodec {
    pub base: usize,
    pub arity: usize,
}

impl TupleCodec {
    pub fn new(base: usize, arity: usize, cap: usize) -> Result<Self> {
        let required = (base as u128).checked_pow(arity as u32).unwrap_or(u128::MAX);
        if required > cap as u128 {
            return Err(Error::SizeCapExceeded { required, cap });
        }
        Ok(Self { base, arity })
    }

    pub fn len(&self) -> usize {
        self.base.pow(self.arity as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn encode(&self, tuple: &[Vertex]) -> Vertex {
        debug_assert_eq!(tuple.len(), self.arity);
        tuple.iter().fold(0, |acc, &t| acc * self.base + t)
    }

    pub fn decode(&self, mut index: Vertex) -> Vec<Vertex> {
        let mut tuple = vec![0; self.arity];
        for slot in tuple.iter_mut().rev() {
            *slot = index % self.base;
            index /= self.base;
        }
        tuple
    }

    /// Coordinate `p` (0-based) of the encoded tuple: the projection onto factor `p`.
    pub fn coordinate(&self, index: Vertex, p: usize) -> Vertex {
        let shift = self.base.pow((self.arity - 1 - p) as u32);
        (index / shift) % self.base
    }
}

/// `h^k` under the default size cap.
pub fn power(h: &Digraph, k: usize) -> Result<Digraph> {
    power_capped(h, k, DEFAULT_SIZE_CAP)
}

/// The k-fold relational product of `h`. Vertex ids follow [`TupleCodec`].
pub fn power_capped(h: &Digraph, k: usize, cap: usize) -> Result<Digraph> {
    if k == 0 {
        return Err(Error::InvalidBound("power exponent must be at least 1".into()));
    }
    let codec = TupleCodec::new(h.n, k, cap)?;
    let mut out = Vec::with_capacity(codec.len());
    for index in 0..codec.len() {
        let tuple = codec.decode(index);
        let choices: Vec<&[Vertex]> = tuple.iter().map(|&t| h.out[t].as_slice()).collect();
        out.push(product_indices(&choices, &codec));
    }
    Ok(Digraph::from_adjacency(format!("{}^{}", h.name, k), out, h.symmetric))
}

/// Encodings of every tuple picking one entry from each choice list.
fn product_indices(choices: &[&[Vertex]], codec: &TupleCodec) -> Vec<Vertex> {
    if choices.iter().any(|c| c.is_empty()) {
        return Vec::new();
    }
    let mut result = Vec::new();
    let mut pos = vec![0usize; choices.len()];
    loop {
        let tuple: Vec<Vertex> = pos.iter().zip(choices).map(|(&i, c)| c[i]).collect();
        result.push(codec.encode(&tuple));
        let mut p = choices.len();
        loop {
            if p == 0 {
                return result;
            }
            p -= 1;
            pos[p] += 1;
            if pos[p] < choices[p].len() {
                break;
            }
            pos[p] = 0;
        }
    }
}

/// Small named graphs used as templates throughout the tests and fixtures.
pub mod families {
    use super::{Digraph, Vertex};

    /// The single arc 0→1.
    pub fn arc() -> Digraph {
        Digraph::directed("arc", 2, [(0, 1)]).unwrap()
    }

    /// The undirected path on `vertices` vertices (`path(2)` is K2).
    pub fn path(vertices: usize) -> Digraph {
        let name = if vertices == 2 { "K2".to_string() } else { format!("P{vertices}") };
        Digraph::undirected(name, vertices, (1..vertices).map(|v| (v - 1, v))).unwrap()
    }

    pub fn k2() -> Digraph {
        path(2)
    }

    pub fn cycle(n: usize) -> Digraph {
        Digraph::undirected(format!("C{n}"), n, (0..n).map(|v| (v, (v + 1) % n))).unwrap()
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Digraph {
        let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
        Digraph::undirected(format!("K{a},{b}"), a + b, edges).unwrap()
    }

    /// Center 0 joined to leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Digraph {
        complete_bipartite(1, leaves).renamed(format!("S{leaves}"))
    }

    /// `base` plus one extra vertex adjacent to each of `attach`.
    pub fn with_apex(base: &Digraph, attach: &[Vertex]) -> Digraph {
        let apex = base.n();
        let mut edges = base.undirected_edges();
        edges.extend(attach.iter().map(|&v| (v, apex)));
        Digraph::undirected(format!("{}+apex", base.name()), apex + 1, edges).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;

    fn arcs(g: &Digraph) -> Vec<(Vertex, Vertex)> {
        g.arcs().collect()
    }

    #[test]
    fn closure_of_single_arc_is_k2() {
        let c = symmetric_closure(&arc());
        assert!(c.is_symmetric());
        assert_eq!(arcs(&c), vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn closure_is_idempotent() {
        let p = path(4);
        assert_eq!(symmetric_closure(&p), p);
        let d = Digraph::directed("d", 3, [(0, 1), (1, 2)]).unwrap();
        let once = symmetric_closure(&d);
        assert_eq!(arcs(&once), vec![(0, 1), (1, 0), (1, 2), (2, 1)]);
        assert_eq!(symmetric_closure(&once), once);
    }

    #[test]
    fn symmetric_flag_is_checked() {
        assert!(matches!(Digraph::with_flag("x", 2, [(0, 1)], true), Err(Error::NotSymmetric { u: 0, v: 1, .. })));
        assert!(Digraph::with_flag("x", 2, [(0, 1), (1, 0)], true).unwrap().is_symmetric());
        assert!(matches!(Digraph::directed("x", 2, [(0, 2)]), Err(Error::VertexOutOfRange { vertex: 2, n: 2 })));
    }

    #[test]
    fn duplicate_arcs_merge() {
        let d = Digraph::directed("d", 2, [(0, 1), (0, 1)]).unwrap();
        assert_eq!(d.arc_count(), 1);
    }

    #[test]
    fn classify_examples() {
        let single = classify(&Digraph::empty("v", 1));
        assert!(!single.nontrivial);
        assert!(single.connected);

        let a = classify(&arc());
        assert!(a.strongly_bipartite);
        assert_eq!(a.sources, vec![0]);
        assert_eq!(a.sinks, vec![1]);

        let p = classify(&Digraph::directed("p", 3, [(0, 1), (1, 2)]).unwrap());
        assert!(!p.strongly_bipartite);
        assert!(p.bipartite);
        assert!(p.connected);

        let two = classify(&Digraph::empty("two", 2));
        assert!(!two.connected);
        assert!(two.strongly_bipartite);
        assert_eq!(two.sources, vec![0, 1]);
        assert_eq!(two.sinks, vec![0, 1]);
    }

    #[test]
    fn bipartition_examples() {
        let k2 = bipartition(&k2()).unwrap();
        assert_eq!((k2.part_a, k2.part_b), (vec![0], vec![1]));
        let c4 = bipartition(&cycle(4)).unwrap();
        assert_eq!((c4.part_a, c4.part_b), (vec![0, 2], vec![1, 3]));
        assert_eq!(bipartition(&cycle(3)), Err(Error::NotBipartite { odd_cycle: vec![0, 1, 2] }));
        assert_eq!(bipartition(&Digraph::empty("two", 2)), Err(Error::NotConnected));
    }

    #[test]
    fn odd_cycle_witness_is_a_cycle() {
        for n in [3, 5, 7] {
            let g = cycle(n);
            let Err(Error::NotBipartite { odd_cycle }) = bipartition(&g) else { panic!() };
            assert_eq!(odd_cycle.len() % 2, 1);
            for i in 0..odd_cycle.len() {
                let (u, v) = (odd_cycle[i], odd_cycle[(i + 1) % odd_cycle.len()]);
                assert!(g.has_arc(u, v), "{odd_cycle:?}");
            }
        }
        let looped = Digraph::directed("l", 2, [(0, 1), (1, 1)]).unwrap();
        assert_eq!(bipartition(&looped), Err(Error::NotBipartite { odd_cycle: vec![1] }));
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(arcs(&orient_bipartition(&k2(), Side::A).unwrap()), vec![(0, 1)]);
        assert_eq!(arcs(&orient_bipartition(&cycle(4), Side::A).unwrap()), vec![(0, 1), (0, 3), (2, 1), (2, 3)]);
        assert_eq!(arcs(&orient_bipartition(&cycle(4), Side::B).unwrap()), vec![(1, 0), (1, 2), (3, 0), (3, 2)]);
        assert!(matches!(orient_bipartition(&cycle(3), Side::A), Err(Error::NotBipartite { .. })));
    }

    #[test]
    fn power_examples() {
        let k2 = k2();
        let p1 = power(&k2, 1).unwrap();
        assert_eq!(arcs(&p1), arcs(&k2));
        let p2 = power(&k2, 2).unwrap();
        assert_eq!(p2.n(), 4);
        // 00=0, 01=1, 10=2, 11=3
        assert_eq!(arcs(&p2), vec![(0, 3), (1, 2), (2, 1), (3, 0)]);
        assert!(p2.is_symmetric());
        let a2 = power(&arc(), 2).unwrap();
        assert_eq!(arcs(&a2), vec![(0, 3)]);
        assert!(!a2.is_symmetric());
    }

    #[test]
    fn power_respects_cap() {
        assert_eq!(power_capped(&cycle(6), 4, 1000), Err(Error::SizeCapExceeded { required: 1296, cap: 1000 }));
        assert!(matches!(power(&k2(), 0), Err(Error::InvalidBound(_))));
    }

    #[test]
    fn codec_round_trip() {
        let codec = TupleCodec::new(3, 4, DEFAULT_SIZE_CAP).unwrap();
        for i in 0..codec.len() {
            let t = codec.decode(i);
            assert_eq!(codec.encode(&t), i);
            for (p, &x) in t.iter().enumerate() {
                assert_eq!(codec.coordinate(i, p), x);
            }
        }
        assert_eq!(codec.decode(5), vec![0, 0, 1, 2]);
    }

    #[test]
    fn distance_examples() {
        let c6 = cycle(6);
        assert_eq!(distance(&c6, 2, 2).unwrap(), Some(0));
        assert_eq!(distance(&c6, 0, 3).unwrap(), Some(3));
        assert_eq!(distance(&Digraph::empty("two", 2), 0, 1).unwrap(), None);
        // distances ignore arc direction
        assert_eq!(distance(&Digraph::directed("d", 3, [(1, 0), (1, 2)]).unwrap(), 0, 2).unwrap(), Some(2));
    }
}
