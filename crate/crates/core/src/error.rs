use alloc::string::String;
use core::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("nothing to extract: the hull tree is empty")]
    EmptyTree,
    #[error("point ids must be dense 0..n in input order (found id {found} at position {position})")]
    NonDenseIds { position: usize, found: u32 },
    #[error("point {id} has a coordinate outside [-2^30, 2^30]")]
    OutOfBounds { id: u32 },
    #[error("duplicate point: ids {first} and {second} share coordinates")]
    Duplicate { first: u32, second: u32 },
    #[error("unknown point id {0}")]
    UnknownId(u32),
    #[error("invariant violated: {0}")]
    Invariant(ValidationError),
}

/// Which structural invariant a validation pass found broken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariant {
    Links,
    Monotonicity,
    Convexity,
    Cursor,
    CursorOrder,
    Domination,
    EmptyHullWithChildren,
    RankResidency,
    Census,
    TailAfterInsert,
}

impl Invariant {
    pub fn code(&self) -> &'static str {
        match self {
            Invariant::Links => "links",
            Invariant::Monotonicity => "monotonicity",
            Invariant::Convexity => "convexity",
            Invariant::Cursor => "cursor",
            Invariant::CursorOrder => "cursor-order",
            Invariant::Domination => "domination",
            Invariant::EmptyHullWithChildren => "empty-hull-with-children",
            Invariant::RankResidency => "rank-residency",
            Invariant::Census => "census",
            Invariant::TailAfterInsert => "tail-after-insert",
        }
    }
}

/// First violated invariant, with the path (`L`/`R` steps from the root) to
/// the offending hull-tree node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationError {
    pub invariant: Invariant,
    pub path: String,
    pub detail: String,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = if self.path.is_empty() { "root" } else { self.path.as_str() };
        write!(f, "{} at {}: {}", self.invariant.code(), path, self.detail)
    }
}

impl core::error::Error for ValidationError {}
