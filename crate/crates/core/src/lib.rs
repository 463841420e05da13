//! Coherence of quantum states and the cohering / decohering power of
//! quantum channels.
//!
//! Two state measures are provided: the l1-norm of off-diagonal elements
//! and the Wigner–Yanase skew information. On top of them, [`power`]
//! computes how much coherence a channel can create from incoherent inputs
//! and how much it can destroy from maximally coherent ones, both through
//! generic numerical routes and through closed forms for unitary,
//! depolarizing and bit-flip qubit channels. Every closed form can be
//! checked against the brute-force minimizers in [`oracle`].

pub mod channels;
pub mod coherence;
pub mod figures;
pub mod linalg;
pub mod oracle;
pub mod power;
pub mod random;
pub mod states;
pub mod verify;

pub use channels::{BlochAffineMap, Channel, ChannelKind, ChannelSpec};
pub use coherence::{CoherenceValue, Measure, Observable};
pub use linalg::{ComplexMatrix, EigenDecomposition};
pub use oracle::SearchConfig;
pub use power::{Method, PowerResult, Witness};
pub use states::{BlochVector, DensityMatrix, PureState, Vec3};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed matrix: {len} entries cannot form a {dim}x{dim} matrix")]
    MalformedMatrix { dim: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max |a - a†| = {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("state vector norm is {0}, expected 1")]
    NotNormalized(f64),

    #[error("Bloch vector length {0} exceeds 1")]
    OutsideBlochBall(f64),

    #[error("expected a unit vector, got length {0}")]
    NotUnitVector(f64),

    #[error("parameter `{name}` = {value} is out of range")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("{count} phases given, expected {expected}")]
    PhaseCount { expected: usize, count: usize },

    #[error("Kraus operators are not trace preserving (‖Σ K†K − I‖ = {0:.3e})")]
    NotTracePreserving(f64),

    #[error("matrix is not unitary (‖U†U − I‖ = {0:.3e})")]
    NotUnitary(f64),

    #[error("operation needs a qubit, got dimension {0}")]
    NotQubit(usize),

    #[error("tensor product of an empty channel list")]
    EmptyTensor,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("search over {0} phases exceeds the 3-dimensional grid limit")]
    SearchDimension(usize),

    #[error("invalid search configuration: {0}")]
    SearchConfig(String),

    #[error("empty interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("channel spec field `{field}`: {reason}")]
    Spec { field: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
