//! Machine-readable run reports and the certificates they carry.
//!
//! Every certificate can be re-verified by [`recheck`] using only the
//! full-scan homomorphism checker, the NU verifier, breadth-first distances,
//! and the brute-force oracle. None of the search code is involved.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::colored::{canonical_template, embed_as_colored, ColoredGraph};
use crate::error::Result;
use crate::graph::{Digraph, Vertex};
use crate::hom::{check_homomorphism, oracle, SearchOutcome};
use crate::nu::{verify_nu_witness, ForwardReport, IntervalReport, Lemma2Report, NuWitness};
use crate::obstruction::{ArReport, DiscrepancyKind, DualityReport};

/// Refutations are re-derived by brute force only when the number of maps to
/// try stays below this bound.
pub const BRUTE_FORCE_LIMIT: u128 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Homomorphism {
        label: String,
        source: ColoredGraph,
        target: ColoredGraph,
        map: Vec<Vertex>,
    },
    /// Claims that no homomorphism `source -> target` exists.
    Refutation {
        label: String,
        source: ColoredGraph,
        target: ColoredGraph,
    },
    NuPolymorphism {
        label: String,
        base: Digraph,
        witness: NuWitness,
    },
    /// `neighbors` are the neighbors of `pair.0` inside the interval, and
    /// they have no common neighbor there other than `pair.0`.
    IntervalViolation {
        label: String,
        graph: Digraph,
        pair: (Vertex, Vertex),
        neighbors: Vec<Vertex>,
    },
}

impl Certificate {
    pub fn label(&self) -> &str {
        match self {
            Certificate::Homomorphism { label, .. }
            | Certificate::Refutation { label, .. }
            | Certificate::NuPolymorphism { label, .. }
            | Certificate::IntervalViolation { label, .. } => label,
        }
    }

    /// A homomorphism certificate when `outcome` found one, else a refutation.
    pub fn from_search(label: impl Into<String>, source: &ColoredGraph, target: &ColoredGraph, outcome: &SearchOutcome) -> Self {
        let (label, source, target) = (label.into(), source.clone(), target.clone());
        match &outcome.witness {
            Some(w) => Certificate::Homomorphism { label, source, target, map: w.assignment.clone() },
            None => Certificate::Refutation { label, source, target },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", content = "detail", rename_all = "snake_case")]
pub enum Recheck {
    Verified,
    /// Too large to re-derive independently.
    Skipped(String),
    Failed(String),
}

impl Recheck {
    pub fn is_failure(&self) -> bool {
        matches!(self, Recheck::Failed(_))
    }
}

pub fn recheck(cert: &Certificate) -> Recheck {
    match cert {
        Certificate::Homomorphism { source, target, map, .. } => match check_homomorphism(source, target, map) {
            Ok(()) => Recheck::Verified,
            Err(v) => Recheck::Failed(format!("{v:?}")),
        },
        Certificate::Refutation { source, target, .. } => {
            if source.template_n() != target.template_n() {
                return Recheck::Failed("template sizes differ".into());
            }
            let space = oracle::search_space(source, target);
            if space > BRUTE_FORCE_LIMIT {
                return Recheck::Skipped(format!("{} maps exceed the brute-force limit", space));
            }
            match oracle::brute_force_homomorphism(source, target) {
                None => Recheck::Verified,
                Some(map) => Recheck::Failed(format!("homomorphism exists: {map:?}")),
            }
        }
        Certificate::NuPolymorphism { base, witness, .. } => match verify_nu_witness(base, witness) {
            Ok(()) => Recheck::Verified,
            Err(v) => Recheck::Failed(format!("{v:?}")),
        },
        Certificate::IntervalViolation { graph, pair: (u, v), neighbors, .. } => recheck_interval(graph, *u, *v, neighbors),
    }
}

fn recheck_interval(g: &Digraph, u: Vertex, v: Vertex, neighbors: &[Vertex]) -> Recheck {
    if u >= g.n() || v >= g.n() {
        return Recheck::Failed("pair out of range".into());
    }
    let du = g.distances_from(u);
    let dv = g.distances_from(v);
    let Some(d) = du[v] else {
        return Recheck::Failed("pair is disconnected".into());
    };
    if d < 3 {
        return Recheck::Failed(format!("pair at distance {d}"));
    }
    let inside: Vec<Vertex> = (0..g.n()).filter(|&x| matches!((du[x], dv[x]), (Some(a), Some(b)) if a + b == d)).collect();
    let expected: Vec<Vertex> = inside.iter().copied().filter(|&x| g.has_arc(u, x)).collect();
    if expected != neighbors {
        return Recheck::Failed(format!("neighbors in interval are {expected:?}"));
    }
    match inside.iter().find(|&&w| w != u && neighbors.iter().all(|&x| g.has_arc(x, w))) {
        Some(w) => Recheck::Failed(format!("common neighbor {w}")),
        None => Recheck::Verified,
    }
}

pub fn certify_lemma2(r: &Lemma2Report) -> Result<Vec<Certificate>> {
    let template = canonical_template(&r.template);
    let host = embed_as_colored(&r.embed.graph, &r.template, &r.embed.embedding)?;
    Ok(vec![
        Certificate::from_search("instance to template", &r.instance, &template, &r.homomorphism),
        Certificate::from_search("retraction of embed", &host, &template, &r.retraction),
    ])
}

pub fn certify_forward(h: &Digraph, r: &ForwardReport) -> Result<Vec<Certificate>> {
    let host = embed_as_colored(&r.embed.graph, h, &r.embed.embedding)?;
    Ok(vec![Certificate::from_search("retraction of embed", &host, &canonical_template(h), &r.retraction)])
}

pub fn certify_interval(h: &Digraph, r: &IntervalReport) -> Vec<Certificate> {
    match (r.violating_pair, &r.violating_neighbors) {
        (Some(pair), Some(neighbors)) => vec![Certificate::IntervalViolation {
            label: "interval violation".into(),
            graph: h.clone(),
            pair,
            neighbors: neighbors.clone(),
        }],
        _ => Vec::new(),
    }
}

pub fn certify_ar(r: &ArReport) -> Vec<Certificate> {
    let template = canonical_template(&r.template);
    let mut out = Vec::new();
    for (i, f) in r.failures.iter().enumerate() {
        out.push(Certificate::Homomorphism {
            label: format!("tree {i} into host"),
            source: f.tree.clone(),
            target: r.colored_host.clone(),
            map: f.phi.assignment.clone(),
        });
        out.push(Certificate::Refutation {
            label: format!("tree {i} is an obstruction"),
            source: f.tree.clone(),
            target: template.clone(),
        });
    }
    out.push(Certificate::from_search("retraction", &r.colored_host, &template, &r.retraction));
    out
}

pub fn certify_duality(h: &Digraph, family: &[ColoredGraph], r: &DualityReport) -> Vec<Certificate> {
    let template = canonical_template(h);
    let mut out = Vec::new();
    for (i, d) in r.discrepancies.iter().enumerate() {
        match d.kind {
            DiscrepancyKind::FeasibleButHit => {
                let (Some(f), Some(m), Some(mw)) = (&d.feasibility, d.member, &d.member_witness) else { continue };
                out.push(Certificate::Homomorphism {
                    label: format!("discrepancy {i} maps to template"),
                    source: d.x.clone(),
                    target: template.clone(),
                    map: f.assignment.clone(),
                });
                out.push(Certificate::Homomorphism {
                    label: format!("discrepancy {i} is hit by member {m}"),
                    source: family[m].clone(),
                    target: d.x.clone(),
                    map: mw.assignment.clone(),
                });
            }
            DiscrepancyKind::UncoveredObstruction => {
                out.push(Certificate::Refutation {
                    label: format!("discrepancy {i} is an obstruction"),
                    source: d.x.clone(),
                    target: template.clone(),
                });
                for (m, member) in family.iter().enumerate() {
                    out.push(Certificate::Refutation {
                        label: format!("discrepancy {i} avoids member {m}"),
                        source: member.clone(),
                        target: d.x.clone(),
                    });
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Found,
    NotFound,
    Holds,
    Fails,
    Complete,
    Incomplete,
    Violated,
    InputError,
}

impl RunStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            RunStatus::Found | RunStatus::Holds | RunStatus::Complete => 0,
            RunStatus::NotFound | RunStatus::Fails | RunStatus::Incomplete | RunStatus::Violated => 1,
            RunStatus::InputError => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub bounds: BTreeMap<String, Value>,
    pub status: RunStatus,
    pub exit_code: i32,
    pub summary: String,
    pub result: Value,
    pub certificates: Vec<Certificate>,
    pub elapsed_ms: u64,
}

impl RunReport {
    pub fn new(command: Vec<String>, status: RunStatus, summary: impl Into<String>) -> Self {
        RunReport {
            command,
            inputs: Vec::new(),
            bounds: BTreeMap::new(),
            status,
            exit_code: status.exit_code(),
            summary: summary.into(),
            result: Value::Null,
            certificates: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "status: {:?} (exit {})", self.status, self.exit_code);
        let _ = writeln!(out, "{}", self.summary);
        for input in &self.inputs {
            let _ = writeln!(out, "input {} sha256 {}", input.path, input.sha256);
        }
        for (k, v) in &self.bounds {
            let _ = writeln!(out, "bound {k} = {v}");
        }
        for c in &self.certificates {
            let _ = writeln!(out, "certificate: {}", c.label());
        }
        let _ = writeln!(out, "elapsed: {} ms", self.elapsed_ms);
        out
    }
}

/// Rechecks every certificate in `report`, in order.
pub fn recheck_report(report: &RunReport) -> Vec<(String, Recheck)> {
    report.certificates.iter().map(|c| (c.label().to_string(), recheck(c))).collect()
}
