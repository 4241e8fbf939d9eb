//! Stabilizer chains along the level filtration.
//!
//! For a group `H` of tree automorphisms truncated at level `n`, each
//! quotient `(H ∩ st(l)) / (H ∩ st(l+1))` embeds in `F2^(2^l)` through the
//! swap bits at level `l`. Layer `l` of the chain holds elements of
//! `H ∩ st(l)` whose swap vectors are in echelon form (distinct pivots, each
//! vector reduced against the earlier ones). Sifting peels off one layer at a
//! time, so the tail of the chain from layer `k` on is exactly `H ∩ st(k)`.
//!
//! In the language of base and strong generating sets, the base point of an
//! entry is the leftmost leaf below the left child of its pivot vertex; every
//! basic orbit has length 2.
//!
//! Construction is a deterministic closure. A new entry schedules tasks: sift
//! its square and its commutators with the other entries of its layer, and
//! sift its conjugate by every conjugator. Once every task sifts, each layer
//! times the deeper layers is a group normalized by the conjugators, so the
//! table describes the closure exactly.

use std::collections::VecDeque;

use super::bits::Bits;
use super::permutation::Perm;

#[derive(Clone, Debug)]
pub(crate) struct Entry {
    pub perm: Perm,
    pub inv: Perm,
    pub vec: Bits,
    pub pivot: usize,
    pub mask: u64,
}

#[derive(Clone, Debug)]
pub(crate) struct Chain {
    level: usize,
    layers: Vec<Vec<Entry>>,
}

pub(crate) enum Sifted {
    Member,
    Residue { layer: usize, perm: Option<Perm>, vec: Bits },
}

impl Chain {
    pub fn trivial(level: usize) -> Chain {
        Chain { level, layers: vec![Vec::new(); level] }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn layer_dims(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &Entry)> {
        self.layers.iter().enumerate().flat_map(|(l, es)| es.iter().map(move |e| (l, e)))
    }

    /// The chain of `H ∩ st(k)`.
    pub fn tail(&self, k: usize) -> Chain {
        let layers = self
            .layers
            .iter()
            .enumerate()
            .map(|(l, es)| if l >= k { es.clone() } else { Vec::new() })
            .collect();
        Chain { level: self.level, layers }
    }

    fn reduce(&self, l: usize, vec: &mut Bits) {
        for e in &self.layers[l] {
            if vec.get(e.pivot) {
                vec.xor_assign(&e.vec);
            }
        }
    }

    pub fn contains(&self, g: &Perm) -> bool {
        matches!(self.sift(g), Sifted::Member)
    }

    pub fn sift(&self, g: &Perm) -> Sifted {
        let n = self.level;
        let mut cur = g.clone();
        let mut tmp = Perm::identity(n);
        loop {
            let l = cur.fixed_level();
            if l == n {
                return Sifted::Member;
            }
            let mut vec = cur.activity(l);
            if l + 1 == n {
                self.reduce(l, &mut vec);
                return if vec.is_zero() {
                    Sifted::Member
                } else {
                    Sifted::Residue { layer: l, perm: None, vec }
                };
            }
            for e in &self.layers[l] {
                if vec.get(e.pivot) {
                    vec.xor_assign(&e.vec);
                    e.inv.compose_into(&cur, &mut tmp);
                    std::mem::swap(&mut cur, &mut tmp);
                }
            }
            if !vec.is_zero() {
                return Sifted::Residue { layer: l, perm: Some(cur), vec };
            }
        }
    }

    /// The last layer is handled by linear algebra alone.
    fn sift_last(&self, mut vec: Bits) -> Option<Bits> {
        self.reduce(self.level - 1, &mut vec);
        (!vec.is_zero()).then_some(vec)
    }

    fn push(&mut self, layer: usize, perm: Option<Perm>, vec: Bits) -> usize {
        let perm = perm.unwrap_or_else(|| Perm::from_last_activity(self.level, &vec));
        let inv = perm.inverse();
        let pivot = vec.first_one().expect("residue vectors are nonzero");
        let mask = perm.support_mask();
        self.layers[layer].push(Entry { perm, inv, vec, pivot, mask });
        self.layers[layer].len() - 1
    }
}

#[derive(Clone, Copy)]
enum Task {
    Square(usize, usize),
    Commutator(usize, usize, usize),
    Conjugate(usize, usize, usize),
}

/// Incremental closure. `conjugators` may grow; each addition schedules the
/// conjugates of all existing entries.
pub(crate) struct Closure {
    chain: Chain,
    conjugators: Vec<(Perm, Perm)>,
    queue: VecDeque<Task>,
}

impl Closure {
    pub fn new(level: usize) -> Closure {
        Closure { chain: Chain::trivial(level), conjugators: Vec::new(), queue: VecDeque::new() }
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    pub fn into_chain(self) -> Chain {
        self.chain
    }

    pub fn add_conjugator(&mut self, y: &Perm) {
        let k = self.conjugators.len();
        self.conjugators.push((y.clone(), y.inverse()));
        for (l, es) in self.chain.layers.iter().enumerate() {
            for i in 0..es.len() {
                self.queue.push_back(Task::Conjugate(l, i, k));
            }
        }
        self.run();
    }

    /// Sifts `g` and closes up if it is new. Returns whether `g` was new.
    pub fn insert(&mut self, g: &Perm) -> bool {
        let added = self.absorb(self.chain.sift(g));
        self.run();
        added
    }

    fn absorb(&mut self, sifted: Sifted) -> bool {
        let Sifted::Residue { layer, perm, vec } = sifted else {
            return false;
        };
        let i = self.chain.push(layer, perm, vec);
        if layer + 1 < self.chain.level {
            self.queue.push_back(Task::Square(layer, i));
            let mask = self.chain.layers[layer][i].mask;
            for j in 0..i {
                if self.chain.layers[layer][j].mask & mask != 0 {
                    self.queue.push_back(Task::Commutator(layer, j, i));
                }
            }
        }
        for k in 0..self.conjugators.len() {
            self.queue.push_back(Task::Conjugate(layer, i, k));
        }
        true
    }

    fn run(&mut self) {
        let last = self.chain.level.saturating_sub(1);
        while let Some(task) = self.queue.pop_front() {
            let sifted = match task {
                Task::Square(l, i) => {
                    let e = &self.chain.layers[l][i];
                    self.chain.sift(&e.perm.compose(&e.perm))
                }
                Task::Commutator(l, i, j) => {
                    let (e, f) = (&self.chain.layers[l][i], &self.chain.layers[l][j]);
                    let c = e.inv.compose(&f.inv).compose(&e.perm).compose(&f.perm);
                    self.chain.sift(&c)
                }
                Task::Conjugate(l, i, k) if l == last => {
                    let (y, _) = &self.conjugators[k];
                    let e = &self.chain.layers[l][i];
                    let mut vec = Bits::zeros(e.vec.len());
                    for v in 0..vec.len() {
                        if e.vec.get(y.vertex_image(l, v)) {
                            vec.set(v, true);
                        }
                    }
                    match self.chain.sift_last(vec) {
                        Some(vec) => Sifted::Residue { layer: l, perm: None, vec },
                        None => Sifted::Member,
                    }
                }
                Task::Conjugate(l, i, k) => {
                    let (y, yi) = &self.conjugators[k];
                    self.chain.sift(&self.chain.layers[l][i].perm.conjugate(y, yi))
                }
            };
            self.absorb(sifted);
        }
    }
}

/// Chain of the subgroup generated by `gens`, with the indices of the
/// generators that were not already in the group of the earlier ones.
pub(crate) fn generate(level: usize, gens: &[Perm]) -> (Chain, Vec<usize>) {
    let mut closure = Closure::new(level);
    let mut kept = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if !closure.chain.contains(g) {
            closure.add_conjugator(g);
            closure.insert(g);
            kept.push(i);
        }
    }
    (closure.into_chain(), kept)
}

/// Chain of the normal closure of `seeds` under `conjugators`, with the
/// indices of the seeds that were not already in the closure of the earlier ones.
pub(crate) fn normal_closure(level: usize, conjugators: &[Perm], seeds: &[Perm]) -> (Chain, Vec<usize>) {
    let mut closure = Closure::new(level);
    for y in conjugators {
        closure.add_conjugator(y);
    }
    let mut kept = Vec::new();
    for (i, s) in seeds.iter().enumerate() {
        if closure.insert(s) {
            kept.push(i);
        }
    }
    (closure.into_chain(), kept)
}
