use thiserror::Error;

use crate::digraph::VertexId;

/// Structural problems with a graph description.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate arc ({0}, {1})")]
    DuplicateArc(usize, usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("anti-parallel pair ({0}, {1}) and ({1}, {0})")]
    AntiParallel(usize, usize),
    #[error("vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("label {0} assigned twice")]
    RepeatedLabel(usize),
    #[error("graph needs at least {min} vertices, got {n}")]
    TooFewVertices { n: usize, min: usize },
}

/// Why a predation batch cannot be applied to a state.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IllegalBatch {
    #[error("batch for predator {0} names no prey")]
    EmptyPrey(VertexId),
    #[error("prey {1} listed twice for predator {0}")]
    RepeatedPrey(VertexId, VertexId),
    #[error("vertex {0} does not belong to the web")]
    UnknownVertex(VertexId),
    #[error("arc ({0}, {1}) is not a remaining arc")]
    ArcNotRemaining(VertexId, VertexId),
    #[error("predator {predator} has population {population} but the batch needs {needed}")]
    PredatorExhausted {
        predator: VertexId,
        population: usize,
        needed: usize,
    },
    #[error("prey {0} is exhausted (population 0)")]
    PreyExhausted(VertexId),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),

    #[error("{what} = {value} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("{0}")]
    Domain(String),

    #[error("illegal predation at step {step}: {reason}")]
    IllegalStep { step: usize, reason: IllegalBatch },

    #[error("strategy ended in a non-terminal state ({legal} legal predations remain)")]
    NotTerminal { legal: usize },

    #[error("base graph is disconnected")]
    Disconnected,

    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("unknown claim id `{0}`")]
    UnknownClaim(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_cap(what: &'static str, value: usize, cap: usize) -> Result<()> {
    if value > cap {
        Err(Error::CapExceeded { what, value, cap })
    } else {
        Ok(())
    }
}
