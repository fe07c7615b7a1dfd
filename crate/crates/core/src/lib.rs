//! Block theory of finite hyperfields.
//!
//! The addition of a hyperfield with multiplicative group `H^×` and a fixed
//! `-1` is determined by the relation `π = {(x, y) : y ∈ x + 1}`, and `π` is
//! always a union of *blocks*: orbits of pairs under two involutions. This
//! crate computes those blocks, enumerates and classifies the hyperfields
//! they generate, counts ample block selections, detects quotients of finite
//! fields, and solves homogeneous linear systems over ample hyperfields.

pub mod blocks;
pub mod catalog;
pub mod census;
pub mod counting;
pub mod error;
pub mod fetvins;
pub mod field;
pub mod group;
pub mod hyperfield;
pub mod quotient;

pub use blocks::{compute_blocks, BlockPartition, CoeffMatrix, Pair};
pub use census::{Census, Mode};
pub use counting::InequalitySystem;
pub use error::{Error, Result};
pub use fetvins::{Hyperfield, LinearSystem};
pub use group::{AbelianGroup, Automorphism, Elem};
pub use hyperfield::{
    AmpleParams, Axiom, Element, ElementSet, HyperfieldCandidate, PairRelation, Status,
    VerificationReport,
};
pub use quotient::QuotientStatus;
