use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::portrait::Portrait;
use super::word::{Generator, Word};
use super::{TreeError, Vertex};

/// An automorphism of the rooted binary tree built from the generators.
///
/// Cheap to clone: the node is shared behind an `Arc` and never mutated.
#[derive(Clone)]
pub struct Element(Arc<Node>);

#[derive(Debug)]
pub enum Node {
    Word(Word),
    /// No root swap, left section and right section.
    Pair(Element, Element),
    Product(Vec<Element>),
    Inverse(Element),
}

/// An element certified to lie in the branching subgroup `K`.
///
/// Only such elements may be placed into a [`Element::pair`]: `psi(K)`
/// contains `K x K`, so the pair is guaranteed to have a preimage in the group.
#[derive(Clone, Debug)]
pub struct KMember(Element);

impl KMember {
    /// Callers must have checked membership in `K`.
    pub(crate) fn certified(e: Element) -> KMember {
        KMember(e)
    }

    pub fn element(&self) -> &Element {
        &self.0
    }

    pub fn into_element(self) -> Element {
        self.0
    }
}

/// Result of one step of the wreath recursion.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub swap: bool,
    pub left: Element,
    pub right: Element,
}

impl Element {
    fn from_node(node: Node) -> Element {
        Element(Arc::new(node))
    }

    pub fn identity() -> Element {
        Element::word(Word::identity())
    }

    pub fn word(w: Word) -> Element {
        Element::from_node(Node::Word(w))
    }

    pub fn generator(g: Generator) -> Element {
        Element::word(Word::generator(g))
    }

    pub fn pair(left: KMember, right: KMember) -> Element {
        Element::pair_unchecked(left.0, right.0)
    }

    /// Used internally when both sides are already known to come from `K`
    /// (for instance products of sections of certified pairs).
    pub(crate) fn pair_unchecked(left: Element, right: Element) -> Element {
        Element::from_node(Node::Pair(left, right))
    }

    pub fn product<I: IntoIterator<Item = Element>>(factors: I) -> Element {
        Element::from_node(Node::Product(factors.into_iter().collect()))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn as_word(&self) -> Option<&Word> {
        match self.node() {
            Node::Word(w) => Some(w),
            _ => None,
        }
    }

    pub fn mul(&self, other: &Element) -> Element {
        Element::product([self.clone(), other.clone()])
    }

    pub fn inverse(&self) -> Element {
        match self.node() {
            Node::Word(w) => Element::word(w.inverse()),
            Node::Inverse(inner) => inner.clone(),
            _ => Element::from_node(Node::Inverse(self.clone())),
        }
    }

    /// `self^by = by^-1 * self * by`.
    pub fn conjugate(&self, by: &Element) -> Element {
        Element::product([by.inverse(), self.clone(), by.clone()])
    }

    /// `[self, other] = self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Element) -> Element {
        Element::product([self.inverse(), other.inverse(), self.clone(), other.clone()])
    }

    pub fn pow(&self, k: usize) -> Element {
        Element::product(std::iter::repeat_n(self.clone(), k))
    }

    /// Flattens products, pushes inverses down to words and pairs, merges
    /// adjacent words and adjacent pairs. The result is a word, a pair, or a
    /// product alternating between reduced words and pairs.
    pub fn simplify(&self) -> Element {
        if let Node::Word(_) = self.node() {
            return self.clone();
        }
        let mut atoms = Vec::new();
        flatten(self, false, &mut atoms);
        match atoms.len() {
            0 => Element::identity(),
            1 => atoms.pop().unwrap(),
            _ => Element::product(atoms),
        }
    }

    /// Splits the element as `swap . (left, right)`.
    pub fn decompose(&self) -> Decomposition {
        let simple = self.simplify();
        match simple.node() {
            Node::Word(w) => {
                let (swap, l, r) = w.decompose();
                Decomposition { swap, left: Element::word(l), right: Element::word(r) }
            }
            Node::Pair(l, r) => Decomposition { swap: false, left: l.clone(), right: r.clone() },
            Node::Product(atoms) => {
                let mut swap = false;
                let mut sections: [Vec<Element>; 2] = [Vec::new(), Vec::new()];
                for atom in atoms {
                    let d = atom.decompose();
                    if d.swap {
                        sections.swap(0, 1);
                    }
                    sections[0].push(d.left);
                    sections[1].push(d.right);
                    swap ^= d.swap;
                }
                let [l, r] = sections;
                Decomposition {
                    swap,
                    left: Element::product(l).simplify(),
                    right: Element::product(r).simplify(),
                }
            }
            Node::Inverse(_) => unreachable!("simplify removes inverse nodes"),
        }
    }

    /// Restriction to the subtree rooted at `v`; `self` must fix every prefix of `v`.
    pub fn section_at(&self, v: &Vertex) -> Result<Element, TreeError> {
        let mut current = self.clone();
        for (k, &bit) in v.bits().iter().enumerate() {
            let d = current.decompose();
            if d.swap {
                return Err(TreeError::NotInVertexStabilizer {
                    vertex: v.to_string(),
                    moved_prefix: v.prefix(k + 1).to_string(),
                });
            }
            current = if bit == 0 { d.left } else { d.right };
        }
        Ok(current)
    }

    /// Image of a vertex.
    pub fn act(&self, v: &Vertex) -> Vertex {
        let mut out = v.clone();
        self.act_bits(out.bits_mut());
        out
    }

    pub(crate) fn act_bits(&self, bits: &mut [u8]) {
        match self.node() {
            Node::Word(w) => w.act_in_place(bits),
            Node::Product(factors) => {
                for f in factors.iter().rev() {
                    f.act_bits(bits);
                }
            }
            Node::Pair(l, r) => {
                if let Some((first, rest)) = bits.split_first_mut() {
                    if *first == 0 { l.act_bits(rest) } else { r.act_bits(rest) }
                }
            }
            Node::Inverse(_) => {
                let mut current = self.clone();
                for bit in bits.iter_mut() {
                    let d = current.decompose();
                    let b = *bit;
                    *bit ^= d.swap as u8;
                    current = if b == 0 { d.left } else { d.right };
                }
            }
        }
    }

    /// Decides the word problem by contraction: an element is trivial iff it
    /// does not swap at the root and both sections are trivial.
    pub fn is_identity(&self) -> bool {
        let simple = self.simplify();
        match simple.node() {
            Node::Word(w) => word_is_identity(w),
            Node::Pair(l, r) => l.is_identity() && r.is_identity(),
            _ => {
                let d = simple.decompose();
                !d.swap && d.left.is_identity() && d.right.is_identity()
            }
        }
    }

    /// Group equality, decided through `is_identity(self * other^-1)`.
    pub fn equals(&self, other: &Element) -> bool {
        self.mul(&other.inverse()).is_identity()
    }

    pub fn portrait(&self, depth: usize) -> Portrait {
        Portrait::of(self, depth)
    }
}

fn flatten(e: &Element, inverted: bool, out: &mut Vec<Element>) {
    match e.node() {
        Node::Word(w) => push_atom(out, Element::word(if inverted { w.inverse() } else { w.clone() })),
        Node::Pair(l, r) => {
            let atom = if inverted {
                Element::pair_unchecked(l.inverse().simplify(), r.inverse().simplify())
            } else {
                e.clone()
            };
            push_atom(out, atom)
        }
        Node::Product(factors) => {
            if inverted {
                for f in factors.iter().rev() {
                    flatten(f, true, out);
                }
            } else {
                for f in factors {
                    flatten(f, false, out);
                }
            }
        }
        Node::Inverse(inner) => flatten(inner, !inverted, out),
    }
}

fn push_atom(out: &mut Vec<Element>, atom: Element) {
    if let Node::Word(w) = atom.node() {
        if w.is_empty() {
            return;
        }
    }
    let merged = match (out.last().map(|e| e.node()), atom.node()) {
        (Some(Node::Word(prev)), Node::Word(w)) => Some(Element::word(prev.concat(w))),
        (Some(Node::Pair(l0, r0)), Node::Pair(l1, r1)) => Some(Element::pair_unchecked(
            l0.mul(l1).simplify(),
            r0.mul(r1).simplify(),
        )),
        _ => None,
    };
    match merged {
        Some(m) => {
            out.pop();
            if !matches!(m.node(), Node::Word(w) if w.is_empty()) {
                out.push(m);
            }
        }
        None => out.push(atom),
    }
}

const MEMO_LIMIT: usize = 1 << 20;

thread_local! {
    static WORD_MEMO: RefCell<HashMap<Word, bool>> = RefCell::new(HashMap::new());
}

fn word_is_identity(w: &Word) -> bool {
    if w.is_empty() {
        return true;
    }
    if w.swaps_root() {
        return false;
    }
    if let Some(known) = WORD_MEMO.with(|m| m.borrow().get(w).copied()) {
        return known;
    }
    let (_, l, r) = w.decompose();
    let result = word_is_identity(&l) && word_is_identity(&r);
    WORD_MEMO.with(|m| {
        let mut m = m.borrow_mut();
        if m.len() >= MEMO_LIMIT {
            m.clear();
        }
        m.insert(w.clone(), result);
    });
    result
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Word(w) if w.is_empty() => write!(f, "1"),
            Node::Word(w) => write!(f, "{w}"),
            Node::Pair(l, r) => write!(f, "({l}, {r})"),
            Node::Product(factors) => {
                for (i, x) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    match x.node() {
                        Node::Product(_) => write!(f, "({x})")?,
                        _ => write!(f, "{x}")?,
                    }
                }
                Ok(())
            }
            Node::Inverse(x) => match x.node() {
                Node::Product(_) => write!(f, "({x})!"),
                _ => write!(f, "{x}!"),
            },
        }
    }
}

impl From<Word> for Element {
    fn from(w: Word) -> Element {
        Element::word(w)
    }
}

impl From<Generator> for Element {
    fn from(g: Generator) -> Element {
        Element::generator(g)
    }
}
