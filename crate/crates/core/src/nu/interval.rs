use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bipartition, Digraph, Vertex};

/// Vertices on some shortest `u`–`v` path.
pub fn interval(h: &Digraph, u: Vertex, v: Vertex) -> Result<Vec<Vertex>> {
    for w in [u, v] {
        if w >= h.n() {
            return Err(Error::VertexOutOfRange { vertex: w, n: h.n() });
        }
    }
    let from_u = h.distances_from(u);
    let from_v = h.distances_from(v);
    interval_from(&from_u, &from_v, v).ok_or(Error::Unreachable(u, v))
}

fn interval_from(from_u: &[Option<usize>], from_v: &[Option<usize>], v: Vertex) -> Option<Vec<Vertex>> {
    let d = from_u[v]?;
    Some((0..from_u.len()).filter(|&x| matches!((from_u[x], from_v[x]), (Some(a), Some(b)) if a + b == d)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalReport {
    pub holds: bool,
    pub violating_pair: Option<(Vertex, Vertex)>,
    /// Neighbors of the pair's first vertex inside the interval.
    pub violating_neighbors: Option<Vec<Vertex>>,
    pub pairs_checked: usize,
}

/// For every ordered pair at distance at least 3, the neighbors of `u` inside
/// `I(u, v)` must have a common neighbor in `I(u, v)` other than `u`.
/// Pairs are scanned in ascending order; the first failure is reported.
pub fn bandelt_3nu_criterion(h: &Digraph) -> Result<IntervalReport> {
    if let Some((u, v)) = h.arcs().find(|&(u, v)| !h.has_arc(v, u)) {
        return Err(Error::NotSymmetric { name: h.name().to_string(), u, v });
    }
    bipartition(h)?;
    let n = h.n();
    let dist: Vec<Vec<Option<usize>>> = (0..n).map(|s| h.distances_from(s)).collect();
    let mut pairs_checked = 0;
    for u in 0..n {
        for v in 0..n {
            if dist[u][v].unwrap() < 3 {
                continue;
            }
            pairs_checked += 1;
            let span = interval_from(&dist[u], &dist[v], v).unwrap();
            let neighbors: Vec<Vertex> = h.out_neighbors(u).iter().copied().filter(|x| span.contains(x)).collect();
            let shared = span.iter().any(|&w| w != u && neighbors.iter().all(|&x| h.has_arc(x, w)));
            if !shared {
                return Ok(IntervalReport {
                    holds: false,
                    violating_pair: Some((u, v)),
                    violating_neighbors: Some(neighbors),
                    pairs_checked,
                });
            }
        }
    }
    Ok(IntervalReport { holds: true, violating_pair: None, violating_neighbors: None, pairs_checked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    #[test]
    fn interval_examples() {
        let c6 = cycle(6);
        assert_eq!(interval(&c6, 2, 2).unwrap(), vec![2]);
        assert_eq!(interval(&path(4), 0, 3).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(interval(&c6, 0, 3).unwrap(), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(interval(&c6, 0, 2).unwrap(), vec![0, 1, 2]);
        assert_eq!(interval(&Digraph::empty("two", 2), 0, 1), Err(Error::Unreachable(0, 1)));
    }

    #[test]
    fn criterion_examples() {
        let c4 = bandelt_3nu_criterion(&cycle(4)).unwrap();
        assert!(c4.holds);
        assert_eq!(c4.pairs_checked, 0);

        let p4 = bandelt_3nu_criterion(&path(4)).unwrap();
        assert!(p4.holds);
        assert_eq!(p4.pairs_checked, 2);

        let c6 = bandelt_3nu_criterion(&cycle(6)).unwrap();
        assert!(!c6.holds);
        assert_eq!(c6.violating_pair, Some((0, 3)));
        assert_eq!(c6.violating_neighbors, Some(vec![1, 5]));
    }

    #[test]
    fn criterion_preconditions() {
        assert!(matches!(bandelt_3nu_criterion(&cycle(5)), Err(Error::NotBipartite { .. })));
        assert_eq!(bandelt_3nu_criterion(&Digraph::undirected("two", 2, []).unwrap()), Err(Error::NotConnected));
        assert!(matches!(bandelt_3nu_criterion(&arc()), Err(Error::NotSymmetric { .. })));
    }
}
