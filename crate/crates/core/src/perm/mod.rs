//! Finite level quotients `G/st(n)` as permutation groups on the leaves of
//! the truncated tree.

pub mod bits;
mod chain;
mod group;
mod permutation;
mod quotient;

use thiserror::Error;

pub use group::{PermGroup, ENUMERATION_GUARD};
pub use permutation::{Perm, MAX_PERM_LEVEL};
pub use quotient::{generator_image, image_at_level, Tower};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("level {level} is outside the supported range 1..={max}")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("image list is not a bijection")]
    NotABijection,
    #[error("permutation does not preserve the tree structure")]
    NotTreeAutomorphism,
    #[error("group has more than {limit} elements")]
    TooLarge { limit: usize },
    #[error("cannot parse: {0}")]
    Parse(String),
}
