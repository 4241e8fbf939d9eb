use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::TreeError;

/// One of the four involutive generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    A,
    B,
    C,
    D,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::A, Generator::B, Generator::C, Generator::D];

    pub fn letter(self) -> char {
        match self {
            Generator::A => 'a',
            Generator::B => 'b',
            Generator::C => 'c',
            Generator::D => 'd',
        }
    }

    pub fn from_letter(ch: char) -> Option<Generator> {
        match ch {
            'a' => Some(Generator::A),
            'b' => Some(Generator::B),
            'c' => Some(Generator::C),
            'd' => Some(Generator::D),
            _ => None,
        }
    }

    pub fn is_klein(self) -> bool {
        self != Generator::A
    }

    /// Product inside the Klein group {1, b, c, d}; `None` is the identity.
    fn klein_mul(self, other: Generator) -> Option<Generator> {
        use Generator::*;
        match (self, other) {
            (x, y) if x == y => None,
            (B, C) | (C, B) => Some(D),
            (B, D) | (D, B) => Some(C),
            (C, D) | (D, C) => Some(B),
            _ => unreachable!("klein_mul called with the generator a"),
        }
    }

    /// Sections `(g|0, g|1)` of a Klein generator; `a` has trivial sections
    /// and swaps the two subtrees.
    pub(crate) fn sections(self) -> (Option<Generator>, Option<Generator>) {
        use Generator::*;
        match self {
            A => (None, None),
            B => (Some(A), Some(C)),
            C => (Some(A), Some(D)),
            D => (None, Some(B)),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A word over `{a, b, c, d}`, always stored in reduced form.
///
/// Reduced means that `a` alternates with letters of the Klein group
/// `{b, c, d}`: no `aa`, and no two adjacent Klein letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<Generator>,
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    pub fn generator(g: Generator) -> Word {
        Word { letters: vec![g] }
    }

    /// Builds a word from arbitrary letters, reducing it on the way.
    pub fn from_letters<I: IntoIterator<Item = Generator>>(letters: I) -> Word {
        let mut w = Word::identity();
        for g in letters {
            w.push(g);
        }
        w
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Appends a letter on the right, keeping the word reduced.
    pub fn push(&mut self, g: Generator) {
        match self.letters.last().copied() {
            Some(Generator::A) if g == Generator::A => {
                self.letters.pop();
            }
            Some(top) if top.is_klein() && g.is_klein() => match top.klein_mul(g) {
                None => {
                    self.letters.pop();
                }
                Some(m) => *self.letters.last_mut().unwrap() = m,
            },
            _ => self.letters.push(g),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &g in &other.letters {
            w.push(g);
        }
        w
    }

    /// Generators are involutions, so the inverse is the reversed word.
    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().copied().collect() }
    }

    /// Number of `a` letters is odd iff the word swaps the two first-level subtrees.
    pub fn swaps_root(&self) -> bool {
        self.letters.iter().filter(|&&g| g == Generator::A).count() % 2 == 1
    }

    /// Wreath recursion of a word: `(swap, w|0, w|1)`.
    ///
    /// The rightmost letter acts first, so the letters are scanned from the
    /// right while tracking which subtree each starting point currently sits in.
    pub fn decompose(&self) -> (bool, Word, Word) {
        let mut sections = [Vec::new(), Vec::new()];
        for (start, out) in sections.iter_mut().enumerate() {
            let mut pos = start;
            for &g in self.letters.iter().rev() {
                if g == Generator::A {
                    pos ^= 1;
                } else {
                    let (s0, s1) = g.sections();
                    if let Some(s) = if pos == 0 { s0 } else { s1 } {
                        out.push(s);
                    }
                }
            }
            out.reverse();
        }
        let [s0, s1] = sections;
        (self.swaps_root(), Word::from_letters(s0), Word::from_letters(s1))
    }

    /// Image of a vertex, given as a bit slice, modified in place.
    pub(crate) fn act_in_place(&self, bits: &mut [u8]) {
        for &g in self.letters.iter().rev() {
            act_generator(g, bits);
        }
    }
}

/// Applies one generator to a bit string using the four recursive rules.
pub(crate) fn act_generator(g: Generator, bits: &mut [u8]) {
    let mut state = Some(g);
    for bit in bits.iter_mut() {
        match state {
            None => return,
            Some(Generator::A) => {
                *bit ^= 1;
                return;
            }
            Some(k) => {
                let (s0, s1) = k.sections();
                state = if *bit == 0 { s0 } else { s1 };
            }
        }
    }
}

/// Stand-alone reduction entry point.
pub fn reduce_word(w: &[Generator]) -> Word {
    Word::from_letters(w.iter().copied())
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.letters {
            write!(f, "{}", g)?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Word, TreeError> {
        s.chars()
            .enumerate()
            .map(|(i, ch)| {
                Generator::from_letter(ch).ok_or(TreeError::Syntax {
                    position: i,
                    message: format!("'{ch}' is not a generator letter"),
                })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word::from_letters)
    }
}
