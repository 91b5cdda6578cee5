//! Zero-forcing delivery over an `L`-antenna broadcast channel.
//!
//! In block `s`, served user `i` gets a precoding vector `v_i` with
//! `h_{R_i} v_i = 1` and `h_{R_j} v_i = 0` for every other member `R_j` of
//! its interference set. The effective matrix `R = H^(s) V^(s)` then tells
//! each user what it hears. Packets are formal symbols, so decoding is a
//! coefficient check: after removing cached packets, a user must be left with
//! exactly its own packet at coefficient one.

mod channel;
mod precoder;
mod scalar;

pub use channel::{make_channel, worst_condition, ChannelKind, ChannelMatrix, MAX_CONDITION};
pub use precoder::{
    effective_matrix, simulate, solve_precoder, BlockReport, PrecoderBlock, SimulationReport,
};
pub use scalar::{solve, Mode, Scalar, FLOAT_TOLERANCE};

use thiserror::Error;

use crate::scheme::{PacketId, PlanError};
use crate::validate::ValidationError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error(transparent)]
    Invalid(#[from] ValidationError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error("degenerate channel dimensions K={users}, L={antennas}")]
    Degenerate { users: usize, antennas: usize },
    #[error("gaussian channels need float mode")]
    ExactGaussian,
    #[error("no well-conditioned gaussian channel after {draws} draws")]
    IllConditioned { draws: usize },
    #[error(
        "block {label}: interference set of user {user} has {size} members, more than L={antennas}"
    )]
    Oversized {
        label: u32,
        user: usize,
        size: usize,
        antennas: usize,
    },
    #[error("block {label}: zero-forcing system for user {user} is singular")]
    Singular { label: u32, user: usize },
    #[error("block {label}: user {user} cannot decode; {packet} has coefficient {coefficient}")]
    DecodeFailure {
        label: u32,
        user: usize,
        packet: PacketId,
        coefficient: String,
    },
}
