//! Error type shared by every module.

use alloc::string::String;

/// Failures reported by the simulation routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Array shapes or dimensions do not agree.
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// An axis index beyond the lattice dimension.
    #[error("axis {axis} out of range for a {dims}D lattice")]
    Axis {
        /// Requested axis.
        axis: usize,
        /// Lattice dimension.
        dims: usize,
    },
    /// A matrix expected to be unitary is not.
    #[error("matrix is not unitary: |U^dag U - 1| = {residual:e}")]
    NotUnitary {
        /// Max-abs entry of `U^dag U - 1`.
        residual: f64,
    },
    /// A matrix expected to be Hermitian is not.
    #[error("matrix is not Hermitian: |H - H^dag| = {residual:e}")]
    NotHermitian {
        /// Max-abs entry of `H - H^dag`.
        residual: f64,
    },
    /// A metric or triad that cannot be inverted at some node.
    #[error("degenerate metric at node {node}: {reason}")]
    DegenerateMetric {
        /// Linear node index.
        node: usize,
        /// What went wrong.
        reason: String,
    },
    /// A parameter violates a documented precondition.
    #[error("invalid parameter: {0}")]
    Invalid(String),
    /// A measurement branch with vanishing probability was requested.
    #[error("outcome probability {0:e} is below the 1e-15 floor")]
    ImpossibleOutcome(f64),
    /// A time slice needed by a stencil is missing.
    #[error("stencil out of bounds: {0}")]
    Stencil(String),
}

/// Result alias used across the crate.
pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

pub(crate) fn shape(msg: impl Into<String>) -> Error {
    Error::Shape(msg.into())
}
