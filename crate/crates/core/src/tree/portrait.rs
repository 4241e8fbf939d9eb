use super::{Element, Vertex};

/// Finite truncation of an automorphism: swap bits on the vertices of levels
/// `0..depth` and the section elements hanging below the vertices of level `depth`.
///
/// `activity[l][i]` is the swap bit at the level-`l` vertex with index `i`;
/// `boundary[i]` is the section at the level-`depth` vertex with index `i`.
#[derive(Debug, Clone)]
pub struct Portrait {
    pub depth: usize,
    pub activity: Vec<Vec<bool>>,
    pub boundary: Vec<Element>,
}

impl Portrait {
    pub(crate) fn of(g: &Element, depth: usize) -> Portrait {
        let mut activity = Vec::with_capacity(depth);
        let mut frontier = vec![g.clone()];
        for _ in 0..depth {
            let mut bits = Vec::with_capacity(frontier.len());
            let mut next = Vec::with_capacity(2 * frontier.len());
            for s in &frontier {
                let d = s.decompose();
                bits.push(d.swap);
                next.push(d.left);
                next.push(d.right);
            }
            activity.push(bits);
            frontier = next;
        }
        Portrait { depth, activity, boundary: frontier }
    }

    /// Action of the automorphism described by the portrait.
    pub fn act(&self, v: &Vertex) -> Vertex {
        let mut bits = v.bits().to_vec();
        let top = self.depth.min(bits.len());
        let mut index = 0usize;
        for (level, bit) in bits.iter_mut().take(top).enumerate() {
            let original = *bit;
            *bit ^= self.activity[level][index] as u8;
            index = (index << 1) | original as usize;
        }
        if bits.len() > self.depth {
            self.boundary[index].act_bits(&mut bits[self.depth..]);
        }
        Vertex::from_bits(bits)
    }

    /// The portrait one level deeper, obtained by decomposing every boundary section.
    pub fn refine(&self) -> Portrait {
        let mut activity = self.activity.clone();
        let mut bits = Vec::with_capacity(self.boundary.len());
        let mut boundary = Vec::with_capacity(2 * self.boundary.len());
        for s in &self.boundary {
            let d = s.decompose();
            bits.push(d.swap);
            boundary.push(d.left);
            boundary.push(d.right);
        }
        activity.push(bits);
        Portrait { depth: self.depth + 1, activity, boundary }
    }

    /// Same automorphism as `other`: equal swap bits and equal boundary sections.
    pub fn same_as(&self, other: &Portrait) -> bool {
        self.depth == other.depth
            && self.activity == other.activity
            && self.boundary.iter().zip(&other.boundary).all(|(x, y)| x.equals(y))
    }
}
