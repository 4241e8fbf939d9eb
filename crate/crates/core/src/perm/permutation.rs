use std::fmt;
use std::str::FromStr;

use super::bits::Bits;
use super::PermError;

/// A permutation of the `2^level` leaves of the truncated tree.
///
/// Leaf `x` is the vertex whose bit string, first letter most significant,
/// reads as `x`. Composition follows the action convention: in `p.compose(q)`
/// the permutation `q` acts first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    level: u8,
    images: Vec<u16>,
}

/// Deepest level a permutation can describe (degree fits in `u16`).
pub const MAX_PERM_LEVEL: usize = 15;

impl Perm {
    pub fn identity(level: usize) -> Perm {
        assert!(level <= MAX_PERM_LEVEL, "level {level} is too deep");
        Perm { level: level as u8, images: (0..1u32 << level).map(|x| x as u16).collect() }
    }

    /// Checks that `images` is a bijection of `0..2^level`.
    pub fn from_images(level: usize, images: Vec<usize>) -> Result<Perm, PermError> {
        if level > MAX_PERM_LEVEL {
            return Err(PermError::LevelOutOfRange { level, max: MAX_PERM_LEVEL });
        }
        let degree = 1usize << level;
        if images.len() != degree {
            return Err(PermError::DegreeMismatch { expected: degree, found: images.len() });
        }
        let mut seen = vec![false; degree];
        for &y in &images {
            if y >= degree || seen[y] {
                return Err(PermError::NotABijection);
            }
            seen[y] = true;
        }
        Ok(Perm { level: level as u8, images: images.into_iter().map(|y| y as u16).collect() })
    }

    pub(crate) fn from_raw(level: usize, images: Vec<u16>) -> Perm {
        debug_assert_eq!(images.len(), 1 << level);
        Perm { level: level as u8, images }
    }

    pub fn level(&self) -> usize {
        self.level as usize
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&y| y as usize)
    }

    pub(crate) fn raw(&self) -> &[u16] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y as usize)
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.level, other.level, "degree mismatch");
        Perm { level: self.level, images: other.images.iter().map(|&y| self.images[y as usize]).collect() }
    }

    pub(crate) fn compose_into(&self, other: &Perm, out: &mut Perm) {
        out.level = self.level;
        out.images.clear();
        out.images.extend(other.images.iter().map(|&y| self.images[y as usize]));
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u16; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y as usize] = x as u16;
        }
        Perm { level: self.level, images }
    }

    /// `by^-1 ∘ self ∘ by`, the image of `x^y`.
    pub fn conjugate(&self, by: &Perm, by_inverse: &Perm) -> Perm {
        Perm {
            level: self.level,
            images: by.images.iter().map(|&y| by_inverse.images[self.images[y as usize] as usize]).collect(),
        }
    }

    /// `self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Perm) -> Perm {
        let (si, oi) = (self.inverse(), other.inverse());
        si.compose(&oi).compose(self).compose(other)
    }

    pub fn pow(&self, k: usize) -> Perm {
        let mut out = Perm::identity(self.level());
        for _ in 0..k {
            out = out.compose(self);
        }
        out
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
        }
        k
    }

    /// Largest `l` such that every vertex of level `l` is fixed.
    pub fn fixed_level(&self) -> usize {
        let moved = self.images.iter().enumerate().fold(0usize, |acc, (x, &y)| acc | (x ^ y as usize));
        self.level() - (usize::BITS - moved.leading_zeros()) as usize
    }

    /// Whether the permutation respects the tree: the image of a leaf's
    /// level-`l` ancestor depends only on that ancestor, for every `l`.
    pub fn is_tree_automorphism(&self) -> bool {
        let n = self.level();
        (1..n).all(|l| {
            let shift = n - l;
            let block = 1usize << shift;
            (0..self.degree()).step_by(block).all(|start| {
                let anc = self.image(start) >> shift;
                (start..start + block).all(|x| self.image(x) >> shift == anc)
            })
        })
    }

    /// Image of the level-`l` vertex with index `v`.
    pub fn vertex_image(&self, l: usize, v: usize) -> usize {
        let shift = self.level() - l;
        self.image(v << shift) >> shift
    }

    /// Swap bits at the level-`l` vertices, for a permutation fixing level `l`.
    pub fn activity(&self, l: usize) -> Bits {
        let mut out = Bits::zeros(1 << l);
        let shift = self.level() - l - 1;
        for j in 0..1usize << l {
            if (self.image((2 * j) << shift) >> shift) & 1 == 1 {
                out.set(j, true);
            }
        }
        out
    }

    /// The induced permutation of level `l`.
    pub fn project(&self, l: usize) -> Perm {
        assert!(l <= self.level());
        let shift = self.level() - l;
        Perm {
            level: l as u8,
            images: (0..1usize << l).map(|v| (self.image(v << shift) >> shift) as u16).collect(),
        }
    }

    /// The automorphism acting as `left` below vertex 0 and `right` below vertex 1.
    pub fn combine(left: &Perm, right: &Perm) -> Perm {
        assert_eq!(left.level, right.level, "degree mismatch");
        let half = left.images.len() as u16;
        let mut images = left.images.clone();
        images.extend(right.images.iter().map(|&y| y + half));
        Perm { level: left.level + 1, images }
    }

    /// Acts as `inner` below the level-`l` vertex `v` and trivially elsewhere.
    pub fn embed(inner: &Perm, l: usize, v: usize) -> Perm {
        let level = inner.level() + l;
        let base = (v << inner.level()) as u16;
        let mut images: Vec<u16> = (0..1u32 << level).map(|x| x as u16).collect();
        for (x, &y) in inner.images.iter().enumerate() {
            images[base as usize + x] = base + y;
        }
        Perm { level: level as u8, images }
    }

    /// The element of `st(level-1)` with swap bits `activity` at level `level-1`.
    pub fn from_last_activity(level: usize, activity: &Bits) -> Perm {
        let mut p = Perm::identity(level);
        for j in activity.ones() {
            p.images.swap(2 * j, 2 * j + 1);
        }
        p
    }

    /// 64 bits, bit `k` set when some leaf of the `k`-th block of `degree/64`
    /// leaves is moved. Disjoint masks imply disjoint supports.
    pub(crate) fn support_mask(&self) -> u64 {
        let block = (self.images.len() / 64).max(1);
        let mut mask = 0u64;
        for (x, &y) in self.images.iter().enumerate() {
            if x != y as usize {
                mask |= 1 << (x / block);
            }
        }
        mask
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, y) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{y}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{self}]")
    }
}

/// Parses a one-line image array such as `1 0 3 2`.
impl FromStr for Perm {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Perm, PermError> {
        let images = s
            .split_whitespace()
            .map(|tok| tok.parse::<usize>().map_err(|_| PermError::Parse(tok.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        if !images.len().is_power_of_two() {
            return Err(PermError::Parse(format!("{} images is not a power of two", images.len())));
        }
        let level = images.len().trailing_zeros() as usize;
        Perm::from_images(level, images)
    }
}
