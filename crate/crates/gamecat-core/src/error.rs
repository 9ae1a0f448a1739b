//! Error type shared by every module of the engine.

use alloc::string::String;

use crate::game::Moment;

/// Failures reported by constructors, checks and enumerations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    /// An enumeration visited more moments than the configured cap allows.
    #[error("enumeration cap of {cap} exceeded at moment {moment}")]
    Cap { cap: usize, moment: Moment },
    /// The input does not describe a legal object; `depth` locates the failure when known.
    #[error("rejected input: {reason}")]
    Rejected { reason: String },
    /// A run descriptor leaves the tree it was declared against.
    #[error("not a run of the tree: truncation of length {depth} is not a moment")]
    NotARun { depth: usize },
    /// A moment that should be reachable is not.
    #[error("moment {moment} is not reachable")]
    Unreachable { moment: Moment },
    /// A tree that should be pruned has a moment without children.
    #[error("moment {witness} has no legal continuation")]
    NotPruned { witness: Moment },
    /// A map violates length or truncation preservation.
    #[error("not chronological at {witness}: {reason}")]
    NotChronological { witness: Moment, reason: String },
    /// A map that must be onto misses a target moment.
    #[error("not surjective: {missing} has no preimage")]
    NotSurjective { missing: Moment },
    /// A map's run extension disagrees with its moment oracle.
    #[error("integrity failure after probing {probe} moves: {reason}")]
    Integrity { probe: usize, reason: String },
    /// The construction needs run bases or another feature the input lacks.
    #[error("unsupported: {reason}")]
    Unsupported { reason: String },
}

impl GameError {
    pub fn rejected(reason: impl Into<String>) -> Self {
        GameError::Rejected { reason: reason.into() }
    }

    pub fn unsupported(reason: impl Into<String>) -> Self {
        GameError::Unsupported { reason: reason.into() }
    }
}

pub type Result<T> = core::result::Result<T, GameError>;
