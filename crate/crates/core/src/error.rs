use crate::certkit::IndexSet;
use crate::linalg::NormTag;
use crate::polylp::LpError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of range for universe of size {universe}")]
    IndexOutOfRange { index: usize, universe: usize },

    #[error("norm pair (domain {domain}, codomain {codomain}) is not supported by {context}")]
    UnsupportedNorms {
        domain: NormTag,
        codomain: NormTag,
        context: &'static str,
    },

    #[error("linear program failed: {0}")]
    Lp(#[from] LpError),

    #[error("polyhedron is empty")]
    EmptyPolyhedron,

    #[error("{what} has size {size}, limit is {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("index set is not relatively surjective, certificate {support}")]
    NotRelativelySurjective { support: IndexSet },

    #[error("Newton iteration did not converge after {iterations} steps (decrement {decrement:e})")]
    NewtonNonConvergence { iterations: usize, decrement: f64 },

    #[error("image subspace is trivial")]
    TrivialImage,

    #[error("probe failed on {set}: {source}")]
    Probe {
        set: IndexSet,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
