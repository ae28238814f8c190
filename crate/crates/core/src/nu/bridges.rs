//! Cross-checks between colored homomorphisms, retractions of the H-embed,
//! NU polymorphisms of orientations, and the forward retraction argument.

use serde::{Deserialize, Serialize};

use super::{build_nu_instance_capped, find_nu_polymorphism_capped, NuWitness};
use crate::colored::{canonical_template, h_embed, ColoredGraph, HEmbed};
use crate::error::Result;
use crate::graph::{orient_bipartition, Digraph, Side};
use crate::hom::{find_homomorphism, find_retraction, SearchOutcome};

/// Both sides of "G maps to H^c exactly when H is a retract of G's H-embed".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma2Report {
    pub instance: ColoredGraph,
    pub template: Digraph,
    pub embed: HEmbed,
    pub homomorphism: SearchOutcome,
    pub retraction: SearchOutcome,
}

impl Lemma2Report {
    pub fn agrees(&self) -> bool {
        self.homomorphism.is_found() == self.retraction.is_found()
    }
}

pub fn check_lemma2(g: &ColoredGraph, template: &Digraph) -> Result<Lemma2Report> {
    let embed = h_embed(g, template)?;
    let homomorphism = find_homomorphism(g, &canonical_template(template))?;
    let retraction = find_retraction(&embed.graph, template, &embed.embedding)?;
    Ok(Lemma2Report { instance: g.clone(), template: template.clone(), embed, homomorphism, retraction })
}

/// NU existence on an undirected bipartite graph and on both of its
/// source-to-sink orientations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationReport {
    pub arity: usize,
    pub undirected: Option<NuWitness>,
    pub from_a: Option<NuWitness>,
    pub from_b: Option<NuWitness>,
    pub oriented_a: Digraph,
    pub oriented_b: Digraph,
}

impl OrientationReport {
    pub fn agrees(&self) -> bool {
        let u = self.undirected.is_some();
        u == self.from_a.is_some() && u == self.from_b.is_some()
    }
}

pub fn check_orientation_invariance(h: &Digraph, arity: usize, cap: usize) -> Result<OrientationReport> {
    let oriented_a = orient_bipartition(h, Side::A)?;
    let oriented_b = orient_bipartition(h, Side::B)?;
    let (undirected, from_a, from_b) = std::thread::scope(|s| {
        let a = s.spawn(|| find_nu_polymorphism_capped(&oriented_a, arity, cap));
        let b = s.spawn(|| find_nu_polymorphism_capped(&oriented_b, arity, cap));
        let u = find_nu_polymorphism_capped(h, arity, cap);
        (u, a.join().expect("search thread panicked"), b.join().expect("search thread panicked"))
    });
    Ok(OrientationReport {
        arity,
        undirected: undirected?.witness,
        from_a: from_a?.witness,
        from_b: from_b?.witness,
        oriented_a,
        oriented_b,
    })
}

/// Retraction of the H-embed of the NU instance back onto `h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForwardReport {
    pub arity: usize,
    pub instance_vertices: usize,
    pub embed: HEmbed,
    pub retraction: SearchOutcome,
}

pub fn theorem1_forward(h: &Digraph, arity: usize, cap: usize) -> Result<ForwardReport> {
    let instance = build_nu_instance_capped(h, arity, cap)?;
    let embed = h_embed(&instance, h)?;
    let retraction = find_retraction(&embed.graph, h, &embed.embedding)?;
    Ok(ForwardReport { arity, instance_vertices: instance.n(), embed, retraction })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::graph::families::*;
    use crate::graph::{classify, DEFAULT_SIZE_CAP};

    #[test]
    fn embed_bridge_examples() {
        let k2 = k2();
        let lone = ColoredGraph::uncolored(Digraph::undirected("u", 1, []).unwrap(), 2);
        let r = check_lemma2(&lone, &k2).unwrap();
        assert!(r.homomorphism.is_found() && r.retraction.is_found());

        let g = ColoredGraph::new(k2.clone(), 2, [(1, 0)]).unwrap();
        let r = check_lemma2(&g, &k2).unwrap();
        assert_eq!(r.homomorphism.witness.as_ref().unwrap().assignment, vec![1, 0]);
        assert_eq!(r.retraction.witness.as_ref().unwrap().assignment, vec![0, 1, 1]);

        let g = ColoredGraph::new(k2.clone(), 2, [(0, 0), (1, 0)]).unwrap();
        assert!(matches!(check_lemma2(&g, &k2), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn embed_bridge_negative_side() {
        // ends colored 0 and 2 at odd distance over P3
        let g = ColoredGraph::new(path(4), 3, [(0, 0), (3, 2)]).unwrap();
        let r = check_lemma2(&g, &path(3)).unwrap();
        assert!(r.agrees());
        assert!(!r.homomorphism.is_found());
    }

    #[test]
    fn orientation_examples() {
        let r = check_orientation_invariance(&k2(), 3, DEFAULT_SIZE_CAP).unwrap();
        assert!(r.agrees() && r.undirected.is_some());
        assert!(classify(&r.oriented_a).strongly_bipartite);
        let r = check_orientation_invariance(&cycle(6), 3, DEFAULT_SIZE_CAP).unwrap();
        assert!(r.agrees() && r.undirected.is_none());
        assert!(matches!(check_orientation_invariance(&cycle(3), 3, DEFAULT_SIZE_CAP), Err(Error::NotBipartite { .. })));
    }

    #[test]
    fn forward_examples() {
        let r = theorem1_forward(&cycle(4), 3, DEFAULT_SIZE_CAP).unwrap();
        assert!(r.retraction.is_found());
        assert_eq!(r.instance_vertices, 64);
        let r = theorem1_forward(&cycle(6), 3, DEFAULT_SIZE_CAP).unwrap();
        assert!(!r.retraction.is_found());
        assert_eq!(r.embed.graph.n(), 6 + 216 - 96);
        assert!(classify(&r.embed.graph).bipartite);
    }
}
