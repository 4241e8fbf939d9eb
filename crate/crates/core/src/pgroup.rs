//! Finite 2-groups: Frattini quotients, lower central series, and the rank
//! checks built on them.

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::perm::bits::{self, Bits};
use crate::perm::{Perm, PermError, PermGroup};

/// Lower central series longer than this is reported as an error.
pub const SERIES_CAP: usize = 64;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PgroupError {
    #[error("not a 2-group: a generator has order {0}")]
    NotA2Group(usize),
    #[error("lower central series did not reach the trivial group within {0} terms")]
    SeriesCap(usize),
    #[error("subgroup is not contained in the ambient group")]
    NotContained,
    #[error("the element does not normalize the subgroup")]
    DoesNotNormalize,
    #[error("the element lies in the subgroup")]
    InSubgroup,
    #[error("the element is not an involution")]
    NotAnInvolution,
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Debug, Clone)]
pub struct RankResult {
    /// `log2 [H : Φ(H)]`, the minimal number of generators.
    pub d: usize,
    pub frattini_subgroup: PermGroup,
}

pub fn frattini_subgroup(h: &PermGroup) -> Result<PermGroup, PgroupError> {
    let gens = h.essential_generators();
    for g in &gens {
        let k = g.order();
        if !k.is_power_of_two() {
            return Err(PgroupError::NotA2Group(k));
        }
    }
    let mut seeds: Vec<Perm> = gens.iter().map(|g| g.compose(g)).collect();
    for (i, g) in gens.iter().enumerate() {
        for f in &gens[..i] {
            seeds.push(f.commutator(g));
        }
    }
    Ok(h.normal_closure(&seeds)?)
}

pub fn frattini_rank(h: &PermGroup) -> Result<RankResult, PgroupError> {
    let phi = frattini_subgroup(h)?;
    Ok(RankResult { d: h.order_log2() - phi.order_log2(), frattini_subgroup: phi })
}

#[derive(Debug, Clone)]
pub struct SeriesResult {
    /// `γ1 = H, γ2, ...`, ending with the trivial group.
    pub terms: Vec<PermGroup>,
    pub class: usize,
}

/// `γ(i+1)` is the normal closure of `[x, s]` over generators `x` of `H` and
/// normal generators `s` of `γi`.
pub fn lower_central_series(h: &PermGroup) -> Result<SeriesResult, PgroupError> {
    let gens = h.essential_generators();
    let mut terms = vec![h.clone()];
    let mut normal_gens = gens.clone();
    while !terms.last().unwrap().is_trivial() {
        if terms.len() >= SERIES_CAP {
            return Err(PgroupError::SeriesCap(SERIES_CAP));
        }
        let seeds: Vec<Perm> =
            gens.iter().flat_map(|x| normal_gens.iter().map(move |s| x.commutator(s))).collect();
        let (next, kept) = h.normal_closure_with_kept(&seeds)?;
        normal_gens = kept;
        terms.push(next);
    }
    let class = terms.len() - 1;
    Ok(SeriesResult { terms, class })
}

/// Uniform record for the checks of this module.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CheckReport {
    pub check: String,
    pub inputs: Value,
    pub lhs: Value,
    pub rhs: Value,
    pub holds: bool,
}

fn big_json(x: &BigUint) -> Value {
    match u64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

#[derive(Debug, Clone)]
pub struct RankBound {
    pub d_g: usize,
    pub d_h: usize,
    pub class: usize,
    /// `d(G)^c`.
    pub bound: BigUint,
    /// `d(H) <= d(G)^c`.
    pub holds: bool,
    /// `d(H) < d(G)^c`, recorded but not asserted.
    pub holds_strict: bool,
}

impl RankBound {
    pub fn report(&self) -> CheckReport {
        CheckReport {
            check: "rank_bound".into(),
            inputs: json!({ "d_G": self.d_g, "d_H": self.d_h, "class": self.class, "strict": self.holds_strict }),
            lhs: json!(self.d_h),
            rhs: big_json(&self.bound),
            holds: self.holds,
        }
    }
}

/// Evaluates `d(H) <= d(G)^c` for `H <= G`, with `c` the class of `G`.
pub fn check_rank_bound(g: &PermGroup, h: &PermGroup) -> Result<RankBound, PgroupError> {
    if !g.contains_group(h)? {
        return Err(PgroupError::NotContained);
    }
    let d_g = frattini_rank(g)?.d;
    let d_h = frattini_rank(h)?.d;
    let class = lower_central_series(g)?.class;
    let bound = BigUint::from(d_g).pow(class as u32);
    let lhs = BigUint::from(d_h);
    Ok(RankBound { d_g, d_h, class, holds: lhs <= bound, holds_strict: lhs < bound, bound })
}

/// 64-bit linear congruential generator with Knuth's MMIX constants;
/// `next` returns the high 32 bits of the new state.
#[derive(Debug, Clone)]
pub struct Lcg(u64);

impl Lcg {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Lcg {
        Lcg(seed)
    }

    pub fn next_u32(&mut self) -> u32 {
        self.0 = self.0.wrapping_mul(Lcg::MULTIPLIER).wrapping_add(Lcg::INCREMENT);
        (self.0 >> 32) as u32
    }

    pub fn below(&mut self, n: usize) -> usize {
        ((self.next_u32() as u64 * n as u64) >> 32) as usize
    }
}

/// Letters per random word in [`random_subgroup`].
pub const RANDOM_WORD_LENGTH: usize = 16;

/// Subgroup generated by `k` products of [`RANDOM_WORD_LENGTH`] generators
/// of `g`, each chosen by the seeded [`Lcg`].
pub fn random_subgroup(g: &PermGroup, k: usize, seed: u64) -> PermGroup {
    let mut rng = Lcg::new(seed);
    let gens = g.generators();
    let picks = (0..k)
        .map(|_| {
            let mut p = Perm::identity(g.level());
            if !gens.is_empty() {
                for _ in 0..RANDOM_WORD_LENGTH {
                    p = p.compose(&gens[rng.below(gens.len())]);
                }
            }
            p
        })
        .collect();
    g.subgroup(picks).expect("products of generators are tree automorphisms")
}

#[derive(Debug, Clone)]
pub struct SemidirectRank {
    /// `dim G^(2)` computed directly for `G = <H, x>`.
    pub lhs: usize,
    /// `dim H^(2) - rank(1 + α) + 1`.
    pub rhs: usize,
    pub dim_h: usize,
    pub rank_one_plus_alpha: usize,
}

impl SemidirectRank {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn report(&self) -> CheckReport {
        CheckReport {
            check: "semidirect_rank_identity".into(),
            inputs: json!({ "dim_H": self.dim_h, "rank_1_plus_alpha": self.rank_one_plus_alpha }),
            lhs: json!(self.lhs),
            rhs: json!(self.rhs),
            holds: self.holds(),
        }
    }
}

/// Coordinates in `H/Φ(H)` with respect to a basis `e1..ed` taken from a
/// pruned generating set, read off the chain `Φ = M0 < M1 < ... < Md = H`
/// with `Mj = <Φ, e1..ej>`.
struct FrattiniCoordinates {
    basis: Vec<Perm>,
    steps: Vec<PermGroup>,
}

impl FrattiniCoordinates {
    fn new(h: &PermGroup, phi: &PermGroup) -> FrattiniCoordinates {
        let basis = h.pruned_generators();
        let mut gens = phi.strong_generators().into_iter().map(|(_, p)| p).collect::<Vec<_>>();
        let mut steps = vec![phi.clone()];
        for e in &basis {
            gens.push(e.clone());
            steps.push(PermGroup::new(h.level(), gens.clone()).expect("tree automorphisms"));
        }
        FrattiniCoordinates { basis, steps }
    }

    fn coordinates(&self, h: &Perm) -> Bits {
        let d = self.basis.len();
        let mut out = Bits::zeros(d);
        let mut cur = h.clone();
        for j in (0..d).rev() {
            if !self.steps[j].contains(&cur).unwrap() {
                out.set(j, true);
                cur = cur.compose(&self.basis[j].inverse());
            }
        }
        debug_assert!(self.steps[0].contains(&cur).unwrap());
        out
    }
}

/// Compares `dim <H, x>^(2)` with `dim H^(2)/(1+α)H^(2) + 1`, where `α` is
/// conjugation by the involution `x` normalizing `H`.
pub fn semidirect_rank_identity(h: &PermGroup, x: &Perm) -> Result<SemidirectRank, PgroupError> {
    if !h.normalizes(x)? {
        return Err(PgroupError::DoesNotNormalize);
    }
    if h.contains(x)? {
        return Err(PgroupError::InSubgroup);
    }
    if !x.compose(x).is_identity() {
        return Err(PgroupError::NotAnInvolution);
    }
    let rank_h = frattini_rank(h)?;
    let coords = FrattiniCoordinates::new(h, &rank_h.frattini_subgroup);
    let xi = x.inverse();
    let rows: Vec<Bits> = coords
        .basis
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let mut v = coords.coordinates(&e.conjugate(x, &xi));
            v.set(i, !v.get(i));
            v
        })
        .collect();
    let r = bits::rank(&rows);
    let mut gens = h.generators().to_vec();
    gens.push(x.clone());
    let g = PermGroup::new(h.level(), gens)?;
    let lhs = frattini_rank(&g)?.d;
    Ok(SemidirectRank { lhs, rhs: rank_h.d - r + 1, dim_h: rank_h.d, rank_one_plus_alpha: r })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    fn group(level: usize, gens: &[&str]) -> PermGroup {
        PermGroup::new(level, gens.iter().map(|s| p(s)).collect()).unwrap()
    }

    #[test]
    fn klein_four_has_rank_two() {
        let v = group(2, &["1 0 2 3", "0 1 3 2"]);
        assert_eq!(frattini_rank(&v).unwrap().d, 2);
        assert_eq!(lower_central_series(&v).unwrap().class, 1);
    }

    #[test]
    fn dihedral_of_order_eight() {
        // the full automorphism group of the depth-2 tree
        let d8 = group(2, &["2 3 0 1", "1 0 2 3"]);
        assert_eq!(d8.order_log2(), 3);
        assert_eq!(frattini_rank(&d8).unwrap().d, 2);
        assert_eq!(lower_central_series(&d8).unwrap().class, 2);
    }

    #[test]
    fn trivial_group_has_class_zero() {
        let t = PermGroup::trivial(3);
        assert_eq!(lower_central_series(&t).unwrap().class, 0);
        assert_eq!(frattini_rank(&t).unwrap().d, 0);
    }

    #[test]
    fn semidirect_identity_on_dihedral() {
        // cyclic of order 4 inverted by a reflection
        let r = p("2 3 1 0");
        assert_eq!(r.order(), 4);
        let c4 = PermGroup::new(2, vec![r]).unwrap();
        let x = p("1 0 2 3");
        let s = semidirect_rank_identity(&c4, &x).unwrap();
        assert_eq!((s.lhs, s.rhs), (2, 2));
        // elementary abelian base, centralizing involution
        let e = group(3, &["1 0 2 3 4 5 6 7", "0 1 2 3 5 4 6 7"]);
        let s = semidirect_rank_identity(&e, &p("0 1 3 2 4 5 6 7")).unwrap();
        assert_eq!((s.lhs, s.rhs, s.rank_one_plus_alpha), (3, 3, 0));
    }

    #[test]
    fn semidirect_identity_preconditions() {
        let c2 = group(2, &["1 0 2 3"]);
        assert_eq!(semidirect_rank_identity(&c2, &p("1 0 2 3")).unwrap_err(), PgroupError::InSubgroup);
        assert_eq!(semidirect_rank_identity(&c2, &p("2 3 0 1")).unwrap_err(), PgroupError::DoesNotNormalize);
    }

    #[test]
    fn lcg_is_reproducible() {
        let mut a = Lcg::new(42);
        let mut b = Lcg::new(42);
        for _ in 0..10 {
            assert_eq!(a.next_u32(), b.next_u32());
        }
        assert!(Lcg::new(7).below(5) < 5);
    }
}
