//! Near-unanimity polymorphisms: the colored instance whose homomorphisms to
//! `H^c` are exactly the NU polymorphisms of `H`, the witness table and its
//! verifier, the interval criterion for arity 3, and the checks bridging
//! colored graphs, retractions and orientations.

mod bridges;
mod interval;

pub use bridges::{check_lemma2, check_orientation_invariance, theorem1_forward, ForwardReport, Lemma2Report, OrientationReport};
pub use interval::{bandelt_3nu_criterion, interval, IntervalReport};

use serde::{Deserialize, Serialize};

use crate::colored::{canonical_template, ColoredGraph};
use crate::error::{Error, Result};
use crate::graph::{power_capped, Digraph, TupleCodec, Vertex, DEFAULT_SIZE_CAP};
use crate::hom::{find_homomorphism, SearchStats};

/// The value a tuple is near-unanimous for: `Some(x)` when every coordinate
/// but at most one equals `x`. Needs `tuple.len() >= 3` to be unambiguous.
pub fn near_unanimous_value(tuple: &[Vertex]) -> Option<Vertex> {
    debug_assert!(tuple.len() >= 3);
    let x = if tuple[0] == tuple[1] || tuple[0] == tuple[2] { tuple[0] } else { tuple[1] };
    let off = tuple.iter().filter(|&&t| t != x).count();
    (off <= 1).then_some(x)
}

fn check_arity(arity: usize) -> Result<()> {
    if arity < 3 {
        return Err(Error::InvalidBound(format!("near-unanimity arity must be at least 3, got {arity}")));
    }
    Ok(())
}

/// `build_nu_instance_capped` under [`DEFAULT_SIZE_CAP`].
pub fn build_nu_instance(h: &Digraph, arity: usize) -> Result<ColoredGraph> {
    build_nu_instance_capped(h, arity, DEFAULT_SIZE_CAP)
}

/// The colored graph on `h^arity` with every near-unanimous tuple colored by
/// its near-unanimous value and every other tuple uncolored.
pub fn build_nu_instance_capped(h: &Digraph, arity: usize, cap: usize) -> Result<ColoredGraph> {
    check_arity(arity)?;
    let codec = TupleCodec::new(h.n(), arity, cap)?;
    let carrier = power_capped(h, arity, cap)?.renamed(format!("K({},{arity})", h.name()));
    let colors: Vec<(Vertex, Vertex)> = (0..codec.len()).filter_map(|i| near_unanimous_value(&codec.decode(i)).map(|x| (i, x))).collect();
    ColoredGraph::new(carrier, h.n(), colors)
}

/// A full operation table `H^arity -> H`, indexed by [`TupleCodec`] encoding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NuWitness {
    pub base_n: usize,
    pub arity: usize,
    pub table: Vec<Vertex>,
}

impl NuWitness {
    pub fn codec(&self) -> TupleCodec {
        TupleCodec { base: self.base_n, arity: self.arity }
    }

    pub fn apply(&self, tuple: &[Vertex]) -> Vertex {
        self.table[self.codec().encode(tuple)]
    }

    /// Tabulates `f` over every tuple.
    pub fn from_fn(base_n: usize, arity: usize, f: impl Fn(&[Vertex]) -> Vertex) -> Self {
        let codec = TupleCodec { base: base_n, arity };
        let table = (0..codec.len()).map(|i| f(&codec.decode(i))).collect();
        Self { base_n, arity, table }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NuViolation {
    Shape { expected_len: usize, got_len: usize },
    ValueOutOfRange { tuple: Vec<Vertex>, value: Vertex },
    NotNearUnanimous { tuple: Vec<Vertex>, expected: Vertex, got: Vertex },
    EdgeNotPreserved { from: Vec<Vertex>, to: Vec<Vertex>, image: (Vertex, Vertex) },
}

/// Exhaustively checks the near-unanimity identities and that every arc of
/// `h^arity` maps onto an arc of `h`. Returns the first violation.
pub fn verify_nu_witness(h: &Digraph, w: &NuWitness) -> std::result::Result<(), NuViolation> {
    let n = h.n();
    let expected_len = (n as u128).checked_pow(w.arity as u32);
    if w.base_n != n || w.arity == 0 || expected_len != Some(w.table.len() as u128) {
        return Err(NuViolation::Shape { expected_len: expected_len.unwrap_or(u128::MAX) as usize, got_len: w.table.len() });
    }
    let codec = w.codec();
    if let Some((i, &value)) = w.table.iter().enumerate().find(|(_, &v)| v >= n) {
        return Err(NuViolation::ValueOutOfRange { tuple: codec.decode(i), value });
    }
    for x in 0..n {
        for y in 0..n {
            for p in 0..w.arity {
                let mut tuple = vec![x; w.arity];
                tuple[p] = y;
                let got = w.apply(&tuple);
                if got != x {
                    return Err(NuViolation::NotNearUnanimous { tuple, expected: x, got });
                }
            }
        }
    }
    let product = power_capped(h, w.arity, usize::MAX).expect("table size already matches");
    for (a, b) in product.arcs() {
        let image = (w.table[a], w.table[b]);
        if !h.has_arc(image.0, image.1) {
            return Err(NuViolation::EdgeNotPreserved { from: codec.decode(a), to: codec.decode(b), image });
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NuSearch {
    pub witness: Option<NuWitness>,
    pub instance_vertices: usize,
    pub stats: SearchStats,
}

/// `find_nu_polymorphism_capped` under [`DEFAULT_SIZE_CAP`].
pub fn find_nu_polymorphism(h: &Digraph, arity: usize) -> Result<Option<NuWitness>> {
    Ok(find_nu_polymorphism_capped(h, arity, DEFAULT_SIZE_CAP)?.witness)
}

/// Searches for an NU polymorphism of the given arity as a homomorphism from
/// the NU instance to `H^c`. Refuses instances beyond `cap` rather than
/// searching partially.
pub fn find_nu_polymorphism_capped(h: &Digraph, arity: usize, cap: usize) -> Result<NuSearch> {
    let instance = build_nu_instance_capped(h, arity, cap)?;
    let outcome = find_homomorphism(&instance, &canonical_template(h))?;
    let witness = outcome.witness.map(|hom| NuWitness { base_n: h.n(), arity, table: hom.assignment });
    if let Some(w) = &witness {
        if let Err(violation) = verify_nu_witness(h, w) {
            panic!("solver returned an invalid NU table for `{}`: {violation:?}", h.name());
        }
    }
    Ok(NuSearch { witness, instance_vertices: instance.n(), stats: outcome.stats })
}
