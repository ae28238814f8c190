//! Colored-graph homomorphism search, retraction testing, and reduction of
//! obstructions to critical obstructions.
//!
//! The search keeps one bitset domain per source vertex, enforces arc
//! consistency on every arc constraint, and branches on the smallest
//! undecided domain (ties by vertex id) trying values in ascending order.
//! Every reported witness is re-checked by [`check_homomorphism`], which does
//! not share any bookkeeping with the search.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::colored::{canonical_template, embed_as_colored, maximal_proper_substructures, ColoredGraph, SubstructureDelta};
use crate::error::{Error, Result};
use crate::graph::{Digraph, Vertex};

/// A total vertex map from a source structure to a target structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Homomorphism {
    pub assignment: Vec<Vertex>,
}

impl Homomorphism {
    pub fn image(&self, v: Vertex) -> Vertex {
        self.assignment[v]
    }
}

/// Why a vertex map fails to be a colored homomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HomViolation {
    WrongLength { expected: usize, got: usize },
    ImageOutOfRange { vertex: Vertex, image: Vertex },
    ArcNotPreserved { arc: (Vertex, Vertex), image: (Vertex, Vertex) },
    ColorNotPreserved { vertex: Vertex, color: Vertex, image: Vertex },
}

/// Full-scan validity check of `map` as a homomorphism `x -> target`.
pub fn check_homomorphism(x: &ColoredGraph, target: &ColoredGraph, map: &[Vertex]) -> std::result::Result<(), HomViolation> {
    if map.len() != x.n() {
        return Err(HomViolation::WrongLength { expected: x.n(), got: map.len() });
    }
    if let Some((vertex, &image)) = map.iter().enumerate().find(|(_, &t)| t >= target.n()) {
        return Err(HomViolation::ImageOutOfRange { vertex, image });
    }
    for (a, b) in x.carrier().arcs() {
        if !target.carrier().has_arc(map[a], map[b]) {
            return Err(HomViolation::ArcNotPreserved { arc: (a, b), image: (map[a], map[b]) });
        }
    }
    for (vertex, color) in x.color_pairs() {
        if color >= target.template_n() || !target.has_color(map[vertex], color) {
            return Err(HomViolation::ColorNotPreserved { vertex, color, image: map[vertex] });
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchStatus {
    Found,
    NoHomomorphism,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Branching decisions tried.
    pub nodes: u64,
    /// Domain values removed by propagation.
    pub propagations: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub witness: Option<Homomorphism>,
    pub stats: SearchStats,
}

impl SearchOutcome {
    pub fn status(&self) -> SearchStatus {
        if self.witness.is_some() {
            SearchStatus::Found
        } else {
            SearchStatus::NoHomomorphism
        }
    }

    pub fn is_found(&self) -> bool {
        self.witness.is_some()
    }
}

/// Precomputed neighborhoods of the target as bitsets.
struct TargetIndex {
    out: Vec<FixedBitSet>,
    inc: Vec<FixedBitSet>,
    loops: FixedBitSet,
    /// For each color, the target vertices carrying it.
    carriers: Vec<FixedBitSet>,
}

impl TargetIndex {
    fn new(target: &ColoredGraph) -> Self {
        let n = target.n();
        let g = target.carrier();
        let to_set = |list: &[Vertex]| {
            let mut s = FixedBitSet::with_capacity(n);
            s.extend(list.iter().copied());
            s
        };
        let mut carriers = vec![FixedBitSet::with_capacity(n); target.template_n()];
        for (v, h) in target.color_pairs() {
            carriers[h].insert(v);
        }
        let mut loops = FixedBitSet::with_capacity(n);
        loops.extend((0..n).filter(|&v| g.has_arc(v, v)));
        Self {
            out: (0..n).map(|v| to_set(g.out_neighbors(v))).collect(),
            inc: (0..n).map(|v| to_set(g.in_neighbors(v))).collect(),
            loops,
            carriers,
        }
    }
}

struct Search<'a> {
    source: &'a Digraph,
    index: TargetIndex,
    /// Non-loop arcs of the source, and for each vertex the arc ids touching it.
    arcs: Vec<(Vertex, Vertex)>,
    incident: Vec<Vec<usize>>,
    stats: SearchStats,
}

impl Search<'_> {
    /// Removes unsupported values until every arc is consistent. Returns false
    /// on a wipe-out.
    fn propagate(&mut self, domains: &mut [FixedBitSet], mut queue: VecDeque<usize>, queued: &mut FixedBitSet) -> bool {
        while let Some(arc) = queue.pop_front() {
            queued.set(arc, false);
            let (a, b) = self.arcs[arc];
            let changed_a = self.revise(domains, a, b, true);
            let changed_b = self.revise(domains, b, a, false);
            if domains[a].is_clear() || domains[b].is_clear() {
                return false;
            }
            for v in changed_a.then_some(a).into_iter().chain(changed_b.then_some(b)) {
                for &other in &self.incident[v] {
                    if other != arc && !queued.contains(other) {
                        queued.insert(other);
                        queue.push_back(other);
                    }
                }
            }
        }
        true
    }

    /// Restricts `domains[v]` to values with a neighbor in `domains[w]`, where
    /// the constraint is arc `v -> w` when `forward` and `w -> v` otherwise.
    fn revise(&mut self, domains: &mut [FixedBitSet], v: Vertex, w: Vertex, forward: bool) -> bool {
        let neighborhoods = if forward { &self.index.out } else { &self.index.inc };
        let doomed: Vec<Vertex> = domains[v].ones().filter(|&t| neighborhoods[t].is_disjoint(&domains[w])).collect();
        for &t in &doomed {
            domains[v].set(t, false);
        }
        self.stats.propagations += doomed.len() as u64;
        !doomed.is_empty()
    }

    fn solve(&mut self, domains: Vec<FixedBitSet>) -> Option<Vec<FixedBitSet>> {
        let branch = (0..domains.len()).map(|v| (domains[v].count_ones(..), v)).filter(|&(size, _)| size > 1).min();
        let Some((_, var)) = branch else {
            return Some(domains);
        };
        let values: Vec<Vertex> = domains[var].ones().collect();
        for value in values {
            self.stats.nodes += 1;
            let mut next = domains.clone();
            next[var].clear();
            next[var].insert(value);
            let queue: VecDeque<usize> = self.incident[var].iter().copied().collect();
            let mut queued = FixedBitSet::with_capacity(self.arcs.len());
            queued.extend(queue.iter().copied());
            if self.propagate(&mut next, queue, &mut queued) {
                if let Some(done) = self.solve(next) {
                    return Some(done);
                }
            }
        }
        None
    }
}

/// Decides whether `x` maps homomorphically to `target`, returning a witness
/// when it does. The search is complete.
pub fn find_homomorphism(x: &ColoredGraph, target: &ColoredGraph) -> Result<SearchOutcome> {
    if x.template_n() != target.template_n() {
        return Err(Error::TemplateMismatch { source_template: x.template_n(), target_template: target.template_n() });
    }
    let tn = target.n();
    let index = TargetIndex::new(target);
    let mut domains = Vec::with_capacity(x.n());
    for v in 0..x.n() {
        let mut d = FixedBitSet::with_capacity(tn);
        d.insert_range(..);
        for h in x.colors(v) {
            d.intersect_with(&index.carriers[h]);
        }
        if x.carrier().has_arc(v, v) {
            d.intersect_with(&index.loops);
        }
        domains.push(d);
    }

    let source = x.carrier();
    let arcs: Vec<(Vertex, Vertex)> = source.arcs().filter(|&(a, b)| a != b).collect();
    let mut incident = vec![Vec::new(); x.n()];
    for (i, &(a, b)) in arcs.iter().enumerate() {
        incident[a].push(i);
        incident[b].push(i);
    }
    let mut search = Search { source, index, arcs, incident, stats: SearchStats::default() };

    let wiped = domains.iter().any(FixedBitSet::is_clear);
    let mut queued = FixedBitSet::with_capacity(search.arcs.len());
    queued.insert_range(..);
    let solved =
        if !wiped && search.propagate(&mut domains, (0..search.arcs.len()).collect(), &mut queued) { search.solve(domains) } else { None };

    let witness = solved.map(|domains| Homomorphism { assignment: domains.iter().map(|d| d.minimum().expect("decided domain")).collect() });
    if let Some(w) = &witness {
        debug_assert!(
            check_homomorphism(x, target, &w.assignment).is_ok(),
            "search produced an invalid witness for `{}`",
            search.source.name()
        );
    }
    Ok(SearchOutcome { witness, stats: search.stats })
}

/// Convenience: does `x` map to `target`?
pub fn is_feasible(x: &ColoredGraph, target: &ColoredGraph) -> Result<bool> {
    Ok(find_homomorphism(x, target)?.is_found())
}

/// Searches for a retraction of `g` onto the copy of `h` given by `embedding`.
/// A witness maps `g`'s vertices to `h`'s and fixes the embedded copy.
pub fn find_retraction(g: &Digraph, h: &Digraph, embedding: &[Vertex]) -> Result<SearchOutcome> {
    let colored = embed_as_colored(g, h, embedding)?;
    find_homomorphism(&colored, &canonical_template(h))
}

/// Greedily strips `x` down to a critical obstruction for `target`.
///
/// Deltas are tried in [`maximal_proper_substructures`] order and kept when
/// the result still has no homomorphism to `target`; this repeats until no
/// delta can be kept.
pub fn minimize_to_critical(x: &ColoredGraph, target: &ColoredGraph) -> Result<ColoredGraph> {
    if is_feasible(x, target)? {
        return Err(Error::NotAnObstruction);
    }
    let mut current = x.clone();
    'outer: loop {
        for delta in maximal_proper_substructures(&current) {
            let candidate = current.apply(&delta);
            if !is_feasible(&candidate, target)? {
                current = candidate;
                continue 'outer;
            }
        }
        return Ok(current);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Criticality {
    /// An obstruction whose maximal proper substructures are all feasible.
    Critical,
    /// Not an obstruction at all.
    Feasible(Homomorphism),
    /// An obstruction, but this delta leaves an obstruction behind.
    NotMinimal(SubstructureDelta),
}

impl Criticality {
    pub fn is_critical(&self) -> bool {
        matches!(self, Criticality::Critical)
    }
}

/// Feasibility is monotone under substructures, so checking the maximal proper
/// substructures decides criticality.
pub fn is_critical_obstruction(x: &ColoredGraph, target: &ColoredGraph) -> Result<Criticality> {
    if let Some(w) = find_homomorphism(x, target)?.witness {
        return Ok(Criticality::Feasible(w));
    }
    for delta in maximal_proper_substructures(x) {
        if !is_feasible(&x.apply(&delta), target)? {
            return Ok(Criticality::NotMinimal(delta));
        }
    }
    Ok(Criticality::Critical)
}

/// Exhaustive enumeration of every vertex map, used as a test oracle.
pub mod oracle {
    use super::*;

    /// First valid map in lexicographic order, by trying all `|target|^|x|` maps.
    pub fn brute_force_homomorphism(x: &ColoredGraph, target: &ColoredGraph) -> Option<Vec<Vertex>> {
        let (n, t) = (x.n(), target.n());
        if n == 0 {
            return Some(Vec::new());
        }
        if t == 0 {
            return None;
        }
        let mut map = vec![0; n];
        loop {
            if check_homomorphism(x, target, &map).is_ok() {
                return Some(map);
            }
            let mut p = n;
            loop {
                if p == 0 {
                    return None;
                }
                p -= 1;
                map[p] += 1;
                if map[p] < t {
                    break;
                }
                map[p] = 0;
            }
        }
    }

    /// Number of maps the brute-force oracle would try, saturating.
    pub fn search_space(x: &ColoredGraph, target: &ColoredGraph) -> u128 {
        (target.n() as u128).checked_pow(x.n() as u32).unwrap_or(u128::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn p3c() -> ColoredGraph {
        canonical_template(&path(3))
    }

    #[test]
    fn forced_single_vertex() {
        let h = cycle(6);
        for v in 0..6 {
            let x = ColoredGraph::new(Digraph::empty("x", 1), 6, [(0, v)]).unwrap();
            let out = find_homomorphism(&x, &canonical_template(&h)).unwrap();
            assert_eq!(out.witness.unwrap().assignment, vec![v]);
        }
    }

    #[test]
    fn double_color_is_obstruction() {
        let x = ColoredGraph::new(Digraph::empty("x", 1), 3, [(0, 0), (0, 2)]).unwrap();
        let out = find_homomorphism(&x, &p3c()).unwrap();
        assert_eq!(out.status(), SearchStatus::NoHomomorphism);
    }

    #[test]
    fn propagation_fixes_middle() {
        let x = ColoredGraph::new(path(3), 3, [(0, 0), (2, 2)]).unwrap();
        let out = find_homomorphism(&x, &p3c()).unwrap();
        assert_eq!(out.witness.unwrap().assignment, vec![0, 1, 2]);
        assert_eq!(out.stats.nodes, 0);
    }

    #[test]
    fn template_mismatch() {
        let x = ColoredGraph::uncolored(Digraph::empty("x", 1), 2);
        assert!(matches!(find_homomorphism(&x, &p3c()), Err(Error::TemplateMismatch { .. })));
    }

    #[test]
    fn empty_source_and_target() {
        let empty = ColoredGraph::uncolored(Digraph::empty("x", 0), 3);
        assert!(find_homomorphism(&empty, &p3c()).unwrap().is_found());
        let nothing = ColoredGraph::uncolored(Digraph::empty("t", 0), 3);
        let one = ColoredGraph::uncolored(Digraph::empty("x", 1), 3);
        assert!(!find_homomorphism(&one, &nothing).unwrap().is_found());
    }

    #[test]
    fn loops_need_loops() {
        let looped = ColoredGraph::uncolored(Digraph::directed("l", 1, [(0, 0)]).unwrap(), 2);
        assert!(!is_feasible(&looped, &canonical_template(&k2())).unwrap());
        let reflexive = canonical_template(&Digraph::directed("r", 2, [(0, 0), (0, 1)]).unwrap());
        assert_eq!(find_homomorphism(&looped, &reflexive).unwrap().witness.unwrap().assignment, vec![0]);
    }

    #[test]
    fn odd_cycles_need_branching() {
        let c5 = ColoredGraph::uncolored(cycle(5), 2);
        let out = find_homomorphism(&c5, &canonical_template(&k2())).unwrap();
        assert!(!out.is_found());
        assert!(out.stats.nodes > 0);
        let c6 = ColoredGraph::uncolored(cycle(6), 2);
        assert!(is_feasible(&c6, &canonical_template(&k2())).unwrap());
    }

    #[test]
    fn directed_arcs_respect_direction() {
        let arc_t = canonical_template(&arc());
        let back = ColoredGraph::new(arc(), 2, [(0, 1)]).unwrap();
        assert!(!is_feasible(&back, &arc_t).unwrap());
        let fwd = ColoredGraph::new(arc(), 2, [(0, 0)]).unwrap();
        assert_eq!(find_homomorphism(&fwd, &arc_t).unwrap().witness.unwrap().assignment, vec![0, 1]);
    }

    #[test]
    fn retraction_examples() {
        let k2 = k2();
        let id = find_retraction(&k2, &k2, &[0, 1]).unwrap();
        assert_eq!(id.witness.unwrap().assignment, vec![0, 1]);

        let p = Digraph::undirected("p", 3, [(2, 0), (0, 1)]).unwrap();
        assert_eq!(find_retraction(&p, &k2, &[0, 1]).unwrap().witness.unwrap().assignment, vec![0, 1, 1]);

        assert!(!find_retraction(&cycle(3), &k2, &[0, 1]).unwrap().is_found());
        assert!(matches!(find_retraction(&cycle(3), &path(3), &[0, 1, 2]), Err(Error::NotInduced { .. })));
    }

    #[test]
    fn retraction_of_c6_with_apex() {
        let c6 = cycle(6);
        let g = with_apex(&c6, &[0, 2]);
        let r = find_retraction(&g, &c6, &[0, 1, 2, 3, 4, 5]).unwrap().witness.unwrap();
        assert_eq!(r.assignment[6], 1);
        let g = with_apex(&c6, &[0, 2, 4]);
        assert!(!find_retraction(&g, &c6, &[0, 1, 2, 3, 4, 5]).unwrap().is_found());
    }

    #[test]
    fn minimize_examples() {
        let target = p3c();
        // two-vertex colored path is already critical
        let crit = ColoredGraph::new(Digraph::undirected("v", 1, []).unwrap(), 3, [(0, 0), (0, 2)]).unwrap();
        assert_eq!(minimize_to_critical(&crit, &target).unwrap(), crit);

        // doubly colored vertex 0 plus a feasible colored edge 1-2
        let carrier = Digraph::undirected("x", 3, [(1, 2)]).unwrap();
        let x = ColoredGraph::new(carrier, 3, [(0, 0), (0, 2), (1, 0), (2, 1)]).unwrap();
        let min = minimize_to_critical(&x, &target).unwrap();
        assert_eq!(min, crit.clone().renamed("x"));

        // length-3 path with ends 0 and 2: parity mismatch, critical as is
        let p = ColoredGraph::new(path(4), 3, [(0, 0), (3, 2)]).unwrap();
        assert_eq!(maximal_proper_substructures(&p).len(), 5);
        assert_eq!(minimize_to_critical(&p, &target).unwrap(), p);

        let feasible = ColoredGraph::new(path(3), 3, [(0, 0)]).unwrap();
        assert_eq!(minimize_to_critical(&feasible, &target), Err(Error::NotAnObstruction));
    }

    #[test]
    fn criticality_examples() {
        let k2c = canonical_template(&k2());
        let v = ColoredGraph::new(Digraph::empty("v", 1), 2, [(0, 0), (0, 1)]).unwrap();
        assert_eq!(is_critical_obstruction(&v, &k2c).unwrap(), Criticality::Critical);

        let feasible = ColoredGraph::new(k2(), 2, [(0, 0)]).unwrap();
        assert!(matches!(is_critical_obstruction(&feasible, &k2c).unwrap(), Criticality::Feasible(_)));

        // doubly colored vertex 0 with a redundant uncolored edge 1-2
        let carrier = Digraph::undirected("x", 3, [(1, 2)]).unwrap();
        let x = ColoredGraph::new(carrier, 2, [(0, 0), (0, 1)]).unwrap();
        assert_eq!(is_critical_obstruction(&x, &k2c).unwrap(), Criticality::NotMinimal(SubstructureDelta::RemoveEdge { u: 1, v: 2 }));
    }

    #[test]
    fn checker_reports_violations() {
        let k2c = canonical_template(&k2());
        let x = ColoredGraph::new(k2(), 2, [(0, 0)]).unwrap();
        assert!(check_homomorphism(&x, &k2c, &[0, 1]).is_ok());
        assert!(matches!(check_homomorphism(&x, &k2c, &[1, 0]), Err(HomViolation::ColorNotPreserved { .. })));
        assert!(matches!(check_homomorphism(&x, &k2c, &[0, 0]), Err(HomViolation::ArcNotPreserved { .. })));
        assert!(matches!(check_homomorphism(&x, &k2c, &[0]), Err(HomViolation::WrongLength { .. })));
        assert!(matches!(check_homomorphism(&x, &k2c, &[0, 2]), Err(HomViolation::ImageOutOfRange { .. })));
    }

    #[test]
    fn deterministic() {
        let x = ColoredGraph::uncolored(cycle(6), 6);
        let t = canonical_template(&cycle(6));
        let a = find_homomorphism(&x, &t).unwrap();
        let b = find_homomorphism(&x, &t).unwrap();
        assert_eq!(a, b);
    }
}
