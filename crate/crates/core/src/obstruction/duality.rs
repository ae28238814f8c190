use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::canonical_form;
use crate::colored::{canonical_template, ColoredGraph};
use crate::error::{Error, Result};
use crate::graph::{Digraph, Vertex};
use crate::hom::{find_homomorphism, Homomorphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DualityStatus {
    Complete,
    IncompleteWithinBounds,
    Violated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityBounds {
    pub max_x_vertices: usize,
    pub loops: bool,
    /// Structures enumerated, after isomorphism rejection.
    pub structures_checked: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiscrepancyKind {
    /// No homomorphism to `H^c`, yet no family member maps in.
    UncoveredObstruction,
    /// A family member maps in, yet the structure maps to `H^c`.
    FeasibleButHit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub kind: DiscrepancyKind,
    pub x: ColoredGraph,
    /// Homomorphism `x -> H^c`, present for `FeasibleButHit`.
    pub feasibility: Option<Homomorphism>,
    /// Index of the family member mapping into `x` and its homomorphism.
    pub member: Option<usize>,
    pub member_witness: Option<Homomorphism>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub status: DualityStatus,
    pub bounds: DualityBounds,
    pub discrepancies: Vec<Discrepancy>,
}

/// All colored graphs on at most `max_vertices` vertices over a template with
/// `template_n` vertices, one per color-respecting isomorphism class. Every
/// color subset is allowed on every vertex. Symmetric carriers when
/// `symmetric`, otherwise arbitrary digraphs; loops only when `loops`.
pub fn enumerate_colored_graphs(template_n: usize, max_vertices: usize, symmetric: bool, loops: bool) -> Vec<ColoredGraph> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for n in 0..=max_vertices {
        let mut slots: Vec<(Vertex, Vertex)> = Vec::new();
        for u in 0..n {
            for v in 0..n {
                let wanted = if u == v {
                    loops
                } else if symmetric {
                    u < v
                } else {
                    true
                };
                if wanted {
                    slots.push((u, v));
                }
            }
        }
        let color_bits = n * template_n;
        for edge_mask in 0u64..(1u64 << slots.len()) {
            let chosen = slots.iter().enumerate().filter(|(i, _)| edge_mask >> i & 1 == 1).map(|(_, &e)| e);
            let carrier = if symmetric { Digraph::undirected("X", n, chosen).unwrap() } else { Digraph::directed("X", n, chosen).unwrap() };
            for color_mask in 0u64..(1u64 << color_bits) {
                let pairs = (0..color_bits).filter(|b| color_mask >> b & 1 == 1).map(|b| (b / template_n, b % template_n));
                let x = ColoredGraph::new(carrier.clone(), template_n, pairs).unwrap();
                if seen.insert(canonical_form(&x)) {
                    out.push(x.renamed(format!("X{}", out.len())));
                }
            }
        }
    }
    out
}

/// Checks `family` as a homomorphism duality for `H^c` on every colored graph
/// with at most `max_x_vertices` vertices. Carriers range over undirected
/// graphs when `h` is undirected and over digraphs otherwise.
pub fn verify_duality(h: &Digraph, family: &[ColoredGraph], max_x_vertices: usize, loops: bool) -> Result<DualityReport> {
    let template = canonical_template(h);
    for (index, member) in family.iter().enumerate() {
        if find_homomorphism(member, &template)?.is_found() {
            return Err(Error::FamilyMemberFeasible { index, name: member.name().to_string() });
        }
    }
    let universe = enumerate_colored_graphs(h.n(), max_x_vertices, h.is_symmetric(), loops);
    let checked: Vec<Option<Discrepancy>> = universe
        .par_iter()
        .map(|x| -> Result<Option<Discrepancy>> {
            let feasibility = find_homomorphism(x, &template)?.witness;
            let mut hit = None;
            for (i, member) in family.iter().enumerate() {
                if let Some(w) = find_homomorphism(member, x)?.witness {
                    hit = Some((i, w));
                    break;
                }
            }
            let kind = match (&feasibility, &hit) {
                (Some(_), Some(_)) => DiscrepancyKind::FeasibleButHit,
                (None, None) => DiscrepancyKind::UncoveredObstruction,
                _ => return Ok(None),
            };
            let (member, member_witness) = hit.map_or((None, None), |(i, w)| (Some(i), Some(w)));
            Ok(Some(Discrepancy { kind, x: x.clone(), feasibility, member, member_witness }))
        })
        .collect::<Result<_>>()?;
    let discrepancies: Vec<Discrepancy> = checked.into_iter().flatten().collect();
    let status = if discrepancies.iter().any(|d| d.kind == DiscrepancyKind::FeasibleButHit) {
        DualityStatus::Violated
    } else if discrepancies.is_empty() {
        DualityStatus::Complete
    } else {
        DualityStatus::IncompleteWithinBounds
    };
    Ok(DualityReport { status, bounds: DualityBounds { max_x_vertices, loops, structures_checked: universe.len() }, discrepancies })
}
