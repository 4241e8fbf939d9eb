use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;
use std::sync::OnceLock;

use num_bigint::BigUint;

use super::chain::{self, Chain};
use super::permutation::Perm;
use super::PermError;

/// Largest group the brute-force enumeration will produce.
pub const ENUMERATION_GUARD: usize = 1 << 16;

/// A group of tree automorphisms truncated at some level, acting on the
/// `2^level` leaves. The stabilizer chain is built on first use.
pub struct PermGroup {
    level: usize,
    generators: Vec<Perm>,
    chain: OnceLock<Chain>,
    kept: OnceLock<Vec<usize>>,
}

impl Clone for PermGroup {
    fn clone(&self) -> PermGroup {
        PermGroup {
            level: self.level,
            generators: self.generators.clone(),
            chain: self.chain.clone(),
            kept: self.kept.clone(),
        }
    }
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PermGroup")
            .field("level", &self.level)
            .field("generators", &self.generators.len())
            .finish()
    }
}

impl PermGroup {
    /// The group generated by `generators`, which must be tree automorphisms
    /// of the given level.
    pub fn new(level: usize, generators: Vec<Perm>) -> Result<PermGroup, PermError> {
        for g in &generators {
            if g.level() != level {
                return Err(PermError::DegreeMismatch { expected: 1 << level, found: g.degree() });
            }
            if !g.is_tree_automorphism() {
                return Err(PermError::NotTreeAutomorphism);
            }
        }
        Ok(PermGroup::from_parts(level, generators))
    }

    pub fn trivial(level: usize) -> PermGroup {
        PermGroup::from_parts(level, Vec::new())
    }

    fn from_parts(level: usize, generators: Vec<Perm>) -> PermGroup {
        PermGroup { level, generators, chain: OnceLock::new(), kept: OnceLock::new() }
    }

    fn with_chain(level: usize, generators: Vec<Perm>, chain: Chain) -> PermGroup {
        let g = PermGroup::from_parts(level, generators);
        let _ = g.chain.set(chain);
        g
    }

    fn from_chain(chain: Chain) -> PermGroup {
        let gens = chain.entries().map(|(_, e)| e.perm.clone()).collect();
        PermGroup::with_chain(chain.level(), gens, chain)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn degree(&self) -> usize {
        1 << self.level
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub(crate) fn chain(&self) -> &Chain {
        self.chain.get_or_init(|| {
            let (chain, kept) = chain::generate(self.level, &self.generators);
            let _ = self.kept.set(kept);
            chain
        })
    }

    /// Generators not lying in the group generated by the earlier ones.
    pub fn essential_generators(&self) -> Vec<Perm> {
        let kept = self.kept.get_or_init(|| chain::generate(self.level, &self.generators).1);
        kept.iter().map(|&i| self.generators[i].clone()).collect()
    }

    /// Removes generators one at a time while the rest still generate the
    /// group. For a 2-group the result has exactly `d` elements.
    pub fn pruned_generators(&self) -> Vec<Perm> {
        let mut gens = self.essential_generators();
        let target = self.order_log2();
        let mut i = 0;
        while i < gens.len() {
            let rest: Vec<Perm> = gens.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.clone()).collect();
            if chain::generate(self.level, &rest).0.len() == target {
                gens = rest;
            } else {
                i += 1;
            }
        }
        gens
    }

    /// `log2 |G|`; every group here is a 2-group.
    pub fn order_log2(&self) -> usize {
        self.chain().len()
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(1u8) << self.order_log2()
    }

    pub fn is_trivial(&self) -> bool {
        self.order_log2() == 0
    }

    /// Number of chain entries in each level layer.
    pub fn layer_dims(&self) -> Vec<usize> {
        self.chain().layer_dims()
    }

    /// Base points in chain order: the leftmost leaf below the left child of
    /// each entry's pivot vertex.
    pub fn base(&self) -> Vec<usize> {
        let n = self.level;
        self.chain().entries().map(|(l, e)| (2 * e.pivot) << (n - l - 1)).collect()
    }

    pub fn strong_generators(&self) -> Vec<(usize, Perm)> {
        self.chain().entries().map(|(l, e)| (l, e.perm.clone())).collect()
    }

    fn check_degree(&self, p: &Perm) -> Result<(), PermError> {
        if p.level() != self.level {
            return Err(PermError::DegreeMismatch { expected: self.degree(), found: p.degree() });
        }
        Ok(())
    }

    pub fn contains(&self, p: &Perm) -> Result<bool, PermError> {
        self.check_degree(p)?;
        Ok(self.chain().contains(p))
    }

    /// `other ≤ self`.
    pub fn contains_group(&self, other: &PermGroup) -> Result<bool, PermError> {
        if other.level != self.level {
            return Err(PermError::DegreeMismatch { expected: self.degree(), found: other.degree() });
        }
        Ok(other.generators.iter().all(|g| self.chain().contains(g)))
    }

    pub fn same_group(&self, other: &PermGroup) -> Result<bool, PermError> {
        Ok(self.order_log2() == other.order_log2() && self.contains_group(other)?)
    }

    /// Whether `self` is normalized by every generator of `ambient`.
    pub fn is_normalized_by(&self, ambient: &PermGroup) -> Result<bool, PermError> {
        if ambient.level != self.level {
            return Err(PermError::DegreeMismatch { expected: self.degree(), found: ambient.degree() });
        }
        let gens = self.essential_generators();
        Ok(ambient.generators.iter().all(|y| {
            let yi = y.inverse();
            gens.iter().all(|s| self.chain().contains(&s.conjugate(y, &yi)))
        }))
    }

    pub fn normalizes(&self, x: &Perm) -> Result<bool, PermError> {
        self.check_degree(x)?;
        let xi = x.inverse();
        Ok(self.essential_generators().iter().all(|s| self.chain().contains(&s.conjugate(x, &xi))))
    }

    /// Subgroup generated by `gens` (assumed to lie in this group's degree).
    pub fn subgroup(&self, gens: Vec<Perm>) -> Result<PermGroup, PermError> {
        PermGroup::new(self.level, gens)
    }

    /// Smallest subgroup containing `seeds` and closed under conjugation by
    /// the generators of `self`.
    pub fn normal_closure(&self, seeds: &[Perm]) -> Result<PermGroup, PermError> {
        Ok(self.normal_closure_with_kept(seeds)?.0)
    }

    /// Also returns the seeds not already in the closure of the earlier ones;
    /// they generate the closure as a normal subgroup.
    pub fn normal_closure_with_kept(&self, seeds: &[Perm]) -> Result<(PermGroup, Vec<Perm>), PermError> {
        for s in seeds {
            self.check_degree(s)?;
            if !s.is_tree_automorphism() {
                return Err(PermError::NotTreeAutomorphism);
            }
        }
        let conjugators = self.essential_generators();
        let (chain, kept) = chain::normal_closure(self.level, &conjugators, seeds);
        let kept = kept.into_iter().map(|i| seeds[i].clone()).collect();
        Ok((PermGroup::from_chain(chain), kept))
    }

    /// Elements fixing every vertex of level `k`.
    pub fn level_stabilizer_image(&self, k: usize) -> Result<PermGroup, PermError> {
        if k > self.level {
            return Err(PermError::LevelOutOfRange { level: k, max: self.level });
        }
        Ok(PermGroup::from_chain(self.chain().tail(k)))
    }

    /// The induced group on level `l`.
    pub fn project(&self, l: usize) -> Result<PermGroup, PermError> {
        if l > self.level {
            return Err(PermError::LevelOutOfRange { level: l, max: self.level });
        }
        Ok(PermGroup::from_parts(l, self.generators.iter().map(|g| g.project(l)).collect()))
    }

    /// Orbit of a leaf, sorted.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        self.vertex_orbit(self.level, point).into_iter().map(|(v, _)| v).collect()
    }

    /// Orbit of the level-`l` vertex `v`, with a transversal element for each
    /// orbit point, in BFS order.
    fn vertex_orbit(&self, l: usize, v: usize) -> Vec<(usize, Perm)> {
        let mut seen = HashMap::new();
        let mut order = vec![(v, Perm::identity(self.level))];
        seen.insert(v, 0);
        let mut i = 0;
        while i < order.len() {
            let (w, ref u) = order[i];
            let u = u.clone();
            for g in &self.generators {
                let img = g.vertex_image(l, w);
                if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(img) {
                    slot.insert(order.len());
                    order.push((img, g.compose(&u)));
                }
            }
            i += 1;
        }
        order.sort_by_key(|&(w, _)| w);
        order
    }

    /// Stabilizer of the level-`l` vertex with index `v`, by Schreier generators.
    pub fn vertex_stabilizer(&self, l: usize, v: usize) -> Result<PermGroup, PermError> {
        if l > self.level {
            return Err(PermError::LevelOutOfRange { level: l, max: self.level });
        }
        let orbit = self.vertex_orbit(l, v);
        let index: HashMap<usize, usize> = orbit.iter().enumerate().map(|(i, (w, _))| (*w, i)).collect();
        let mut closure = chain::Closure::new(self.level);
        let mut gens = Vec::new();
        for (w, u) in &orbit {
            for g in &self.generators {
                let img = g.vertex_image(l, *w);
                let back = &orbit[index[&img]].1;
                let s = back.inverse().compose(g).compose(u);
                if !closure.chain().contains(&s) {
                    closure.add_conjugator(&s);
                    closure.insert(&s);
                    gens.push(s);
                }
            }
        }
        let chain = closure.into_chain();
        Ok(PermGroup::with_chain(self.level, gens, chain))
    }

    pub fn point_stabilizer(&self, point: usize) -> Result<PermGroup, PermError> {
        self.vertex_stabilizer(self.level, point)
    }

    /// All elements by breadth-first search; fails beyond [`ENUMERATION_GUARD`].
    pub fn enumerate(&self) -> Result<Vec<Perm>, PermError> {
        let id = Perm::identity(self.level);
        let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        let mut out = Vec::new();
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = g.compose(&x);
                if seen.insert(y.clone()) {
                    if seen.len() > ENUMERATION_GUARD {
                        return Err(PermError::TooLarge { limit: ENUMERATION_GUARD });
                    }
                    queue.push_back(y);
                }
            }
            out.push(x);
        }
        Ok(out)
    }

    /// Plain-text form: a `level` line, a `generators` count followed by one
    /// image array per line, then a `strong` count followed by lines of the
    /// form `layer: images` for the chain entries.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "level {}", self.level).unwrap();
        writeln!(s, "generators {}", self.generators.len()).unwrap();
        for g in &self.generators {
            writeln!(s, "{g}").unwrap();
        }
        let strong = self.strong_generators();
        writeln!(s, "strong {}", strong.len()).unwrap();
        for (l, g) in strong {
            writeln!(s, "{l}: {g}").unwrap();
        }
        s
    }

    /// Reads the format of [`PermGroup::to_text`]; the chain is rebuilt from
    /// the generators and checked against the stored strong generators.
    pub fn from_text(text: &str) -> Result<PermGroup, PermError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let mut header = |key: &str| -> Result<usize, PermError> {
            let line = lines.next().ok_or_else(|| PermError::Parse(format!("missing '{key}' line")))?;
            line.strip_prefix(key)
                .and_then(|rest| rest.trim().parse().ok())
                .ok_or_else(|| PermError::Parse(format!("expected '{key} <count>', found '{line}'")))
        };
        let level = header("level")?;
        let count = header("generators")?;
        let mut gens = Vec::with_capacity(count);
        for _ in 0..count {
            let line = lines.next().ok_or_else(|| PermError::Parse("missing generator line".into()))?;
            gens.push(line.parse::<Perm>()?);
        }
        let group = PermGroup::new(level, gens)?;
        if let Some(line) = lines.next() {
            let strong: usize = line
                .strip_prefix("strong")
                .and_then(|rest| rest.trim().parse().ok())
                .ok_or_else(|| PermError::Parse(format!("expected 'strong <count>', found '{line}'")))?;
            for _ in 0..strong {
                let line = lines.next().ok_or_else(|| PermError::Parse("missing strong generator line".into()))?;
                let (_, images) = line.split_once(':').ok_or_else(|| PermError::Parse(line.to_string()))?;
                let p: Perm = images.parse()?;
                if !group.contains(&p)? {
                    return Err(PermError::Parse("strong generator outside the group".into()));
                }
            }
            if strong != group.order_log2() {
                return Err(PermError::Parse("strong generator count disagrees with the group order".into()));
            }
        }
        Ok(group)
    }
}
