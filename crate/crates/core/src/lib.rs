//! Exact computations in the first Grigorchuk group: the element algebra on
//! the binary tree, finite level quotients as permutation groups, Frattini
//! ranks of finite 2-groups, and the rank and rank-gradient computations for
//! the vertex-stabilizer chain.

pub mod catalog;
pub mod config;
pub mod perm;
pub mod pgroup;
pub mod rigidity;
pub mod tree;
pub mod verify;

/// Parses words, products, powers, inverses, pairs and catalog names such
/// as `t`, `x3`, `uu`.
pub fn parse_element(text: &str) -> Result<tree::Element, tree::TreeError> {
    tree::parse_element_with(text, &catalog::CatalogNames::default())
}
