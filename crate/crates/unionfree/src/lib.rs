//! Constructive extraction of large union-free and a-union-free subfamilies
//! from finite set families.
//!
//! A family is *union-free* when no three distinct members satisfy
//! X ∪ Y = Z, and *a-union-free* when no member is the union of `a` distinct
//! other members. Every family of `m` sets contains a union-free subfamily of
//! size ⌊√(4m+1)⌋ − 1, and an a-union-free subfamily of size
//! max{a, a^(1/4)·√m/3}; both bounds are met constructively here:
//!
//! - [`family`]: canonical [`SetFamily`] representation and the exact
//!   predicates everything is checked against.
//! - [`poset`]: the inclusion order, level decompositions, chains.
//! - [`union_free`]: witness-graph extraction meeting the ⌊√(4m+1)⌋ − 1
//!   bound, with the achieved selection and a per-class audit.
//! - [`ladders`]: certificate extraction (chain, antichain, degenerate set,
//!   or ladder) meeting the a-union-free bound on arbitrary posets.
//! - [`constructions`]: the extremal grid/stack families showing both bounds
//!   tight, plus seeded random instance generators.
//! - [`oracle`]: exact desk-scale maxima by branch and bound, the ground
//!   truth the extractors are tested against.

pub mod bits;
pub mod constructions;
pub mod family;
pub mod ladders;
pub mod oracle;
pub mod poset;
pub mod union_free;

pub use bits::MemberSet;
pub use family::{Selection, SetFamily, StructureKind};
pub use ladders::{extract_a_union_free, meets_target, Certificate, CertificateKind, Ladder};
pub use poset::{Direction, LevelDecomposition, Poset};
pub use union_free::{extract_union_free, union_free_bound, ExtractionReport};

use std::fmt;

/// Errors surfaced to callers. Violated internal contracts (theorem-level
/// guarantees) panic instead: they are bugs, not inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input document.
    Parse { line: usize, msg: String },
    /// Structurally valid input that violates an argument contract.
    InvalidInput(String),
    /// Request exceeds what the exact methods can decide at desk scale.
    Capability(String),
    /// Requested instance cannot exist (e.g. more distinct sets than the
    /// universe admits).
    Infeasible(String),
    /// Caller broke a documented precondition of an operation.
    Contract(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::Capability(msg) => write!(f, "capability exceeded: {msg}"),
            Error::Infeasible(msg) => write!(f, "infeasible request: {msg}"),
            Error::Contract(msg) => write!(f, "contract violation: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
