use alloc::string::String;

use crate::graph::VertexId;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: VertexId, n: usize },

    #[error("no layer with peel value {0}")]
    UnknownLayer(u32),

    #[error("vertex {vertex} is not in layer {layer}")]
    NotInLayer { vertex: VertexId, layer: u32 },

    #[error("no path from vertex {from} to {to}")]
    NoPath { from: VertexId, to: VertexId },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
