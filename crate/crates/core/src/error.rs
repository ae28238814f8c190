use thiserror::Error;

use crate::graph::Vertex;

/// Errors raised by the graph, search and catalog operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },

    #[error("color {color} out of range for a template on {template_n} vertices")]
    ColorOutOfRange { color: Vertex, template_n: usize },

    #[error("edge set of `{name}` is not closed under reversal: ({u},{v}) has no reverse")]
    NotSymmetric { name: String, u: Vertex, v: Vertex },

    #[error("graph is not bipartite; odd cycle {odd_cycle:?}")]
    NotBipartite { odd_cycle: Vec<Vertex> },

    #[error("graph is not connected")]
    NotConnected,

    #[error("size cap exceeded: {required} vertices required, cap is {cap}")]
    SizeCapExceeded { required: u128, cap: usize },

    #[error("embedding is not injective: template vertices {first} and {second} both map to {image}")]
    NotInjective { first: Vertex, second: Vertex, image: Vertex },

    #[error("embedding is not induced: template pair ({a},{b}) {detail}")]
    NotInduced { a: Vertex, b: Vertex, detail: String },

    #[error("embedding has {got} entries, template has {expected} vertices")]
    EmbeddingLength { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("template mismatch: source colored over {source_template} vertices, target over {target_template}")]
    TemplateMismatch { source_template: usize, target_template: usize },

    #[error("structure is not an obstruction: it admits a homomorphism to the target")]
    NotAnObstruction,

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("family member {index} (`{name}`) admits a homomorphism to the template")]
    FamilyMemberFeasible { index: usize, name: String },

    #[error("vertex {0} is a leaf")]
    VertexIsLeaf(Vertex),

    #[error("vertex {0} is colored")]
    VertexColored(Vertex),

    #[error("invalid bound: {0}")]
    InvalidBound(String),

    #[error("vertices {0} and {1} are in different components")]
    Unreachable(Vertex, Vertex),
}

pub type Result<T> = std::result::Result<T, Error>;
