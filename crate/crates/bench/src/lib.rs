//! Benchmark inputs shared by the criterion targets.

use nuretract::graph::families;
use nuretract::Digraph;

/// Bipartite templates of increasing size used across benchmarks.
pub fn templates() -> Vec<Digraph> {
    vec![families::path(4), families::cycle(4), families::complete_bipartite(2, 3), families::cycle(6)]
}
