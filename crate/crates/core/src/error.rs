use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {{{0}, {1}}}")]
    UnknownEdge(VertexId, VertexId),
    #[error("loop at vertex {0}")]
    Loop(VertexId),
    #[error("parameter {name} = {value} out of range: {reason}")]
    Parameter { name: &'static str, value: i64, reason: &'static str },
    #[error("size cap exceeded: {what} has {size} > {cap}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("malformed certificate: {0}")]
    Certificate(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn cap(what: &'static str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::CapExceeded { what, size, cap })
    } else {
        Ok(())
    }
}
