//! Elements of the group acting on the rooted binary tree.
//!
//! Words act right to left: in `xy` the letter `y` acts first. Conjugation
//! is `x^y = y^-1 x y`.

mod element;
mod parse;
mod portrait;
mod vertex;
mod word;

use thiserror::Error;

pub use element::{Decomposition, Element, KMember, Node};
pub use parse::{parse_element_with, NameResolver, WordsOnly};
pub use portrait::Portrait;
pub use vertex::Vertex;
pub use word::{reduce_word, Generator, Word};

pub(crate) use word::act_generator;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown name '{name}' at position {position}")]
    UnknownName { name: String, position: usize },
    #[error("element does not fix vertex {vertex}: it moves the prefix {moved_prefix}")]
    NotInVertexStabilizer { vertex: String, moved_prefix: String },
}
