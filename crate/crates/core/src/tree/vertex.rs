use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::TreeError;

/// A vertex of the rooted binary tree, addressed by a finite 0/1 string.
/// The empty string is the root; the length is the level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Vertex {
    bits: Vec<u8>,
}

impl Vertex {
    pub fn root() -> Vertex {
        Vertex::default()
    }

    pub fn from_bits(bits: Vec<u8>) -> Vertex {
        debug_assert!(bits.iter().all(|&b| b < 2));
        Vertex { bits }
    }

    /// The vertex `1^m`.
    pub fn rightmost(level: usize) -> Vertex {
        Vertex { bits: vec![1; level] }
    }

    /// Vertex at `level` whose bit string, read as a binary number with the
    /// first letter most significant, equals `index`.
    pub fn from_index(level: usize, index: usize) -> Vertex {
        let bits = (0..level).map(|i| ((index >> (level - 1 - i)) & 1) as u8).collect();
        Vertex { bits }
    }

    pub fn index(&self) -> usize {
        self.bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn level(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub(crate) fn bits_mut(&mut self) -> &mut [u8] {
        &mut self.bits
    }

    pub fn child(&self, bit: u8) -> Vertex {
        let mut bits = self.bits.clone();
        bits.push(bit);
        Vertex { bits }
    }

    pub fn prefix(&self, len: usize) -> Vertex {
        Vertex { bits: self.bits[..len].to_vec() }
    }

    pub fn concat(&self, other: &Vertex) -> Vertex {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        Vertex { bits }
    }

    /// All vertices of a level, in index order.
    pub fn level_vertices(level: usize) -> impl Iterator<Item = Vertex> {
        (0..1usize << level).map(move |i| Vertex::from_index(level, i))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for Vertex {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Vertex, TreeError> {
        s.chars()
            .enumerate()
            .map(|(i, ch)| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(TreeError::Syntax {
                    position: i,
                    message: format!("'{ch}' is not a binary digit"),
                }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Vertex::from_bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_is_msb_first() {
        let v: Vertex = "100".parse().unwrap();
        assert_eq!(v.index(), 4);
        assert_eq!(Vertex::from_index(3, 4), v);
        assert_eq!(Vertex::root().index(), 0);
        assert_eq!(Vertex::rightmost(3).index(), 7);
    }

    #[test]
    fn parse_rejects_other_digits() {
        assert!("012".parse::<Vertex>().is_err());
        assert_eq!("".parse::<Vertex>().unwrap(), Vertex::root());
    }
}
