//! Rank witnesses, indices, rank-gradient tables along the vertex-stabilizer
//! and level-stabilizer chains, the normal-subgroup sandwich check and a
//! random probe of finite-index subgroups.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::catalog::{
    k_image, subgroup_generators, vertex_product, CatalogError, SubgroupSpec, VerificationReport,
};
use crate::perm::{image_at_level, PermError, PermGroup, Tower};
use crate::pgroup::{frattini_rank, random_subgroup, Lcg, PgroupError};
use crate::tree::Element;

/// Tolerance for comparisons of floating-point ratios.
pub const RATIO_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RigidityError {
    #[error("{0} is not supported here")]
    Unsupported(SubgroupSpec),
    #[error("order of G/st({n}) disagrees with the closed formula")]
    FormulaMismatch { n: usize },
    #[error("row n={n} has index {index} and d={d}; rigidity ratios need index >= 4 and d >= 2")]
    RowRejected { n: usize, index: String, d: usize },
    #[error("no rows")]
    Empty,
    #[error("level {m} must exceed n0 + 6 = {}", n0 + 6)]
    LevelTooLow { m: usize, n0: usize },
    #[error("the subgroup is trivial modulo st({0})")]
    TrivialImage(usize),
    #[error("probe level {0} outside 3..=6")]
    ProbeLevel(usize),
    #[error("chain must be P or st, got {0}")]
    UnknownChain(String),
    #[error("unknown suite {0}")]
    UnknownSuite(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Pgroup(#[from] PgroupError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// `2^(5·2^(n-3)+2)`, the order of `G/st(n)` for `n >= 3`.
pub fn quotient_order_formula(n: usize) -> BigUint {
    assert!(n >= 3);
    BigUint::one() << (5 * (1usize << (n - 3)) + 2)
}

fn power_of_two(k: usize) -> BigUint {
    BigUint::one() << k
}

/// Index in `G`. For `P_n` this is the orbit length of `1^n`; for `st(n)` the
/// quotient order, cross-checked against the closed formula for `n >= 3`;
/// for `K` and `K_n` the index of the image modulo `st(3)` and `st(n+3)`,
/// which they contain.
pub fn index_of(tower: &Tower, spec: SubgroupSpec) -> Result<BigUint, RigidityError> {
    match spec {
        SubgroupSpec::P(n) if n >= 1 => {
            let q = tower.level_quotient(n)?;
            Ok(BigUint::from(q.orbit((1 << n) - 1).len()))
        }
        SubgroupSpec::St(n) if n >= 1 => {
            let order = tower.level_quotient(n)?.order();
            if n >= 3 && order != quotient_order_formula(n) {
                return Err(RigidityError::FormulaMismatch { n });
            }
            Ok(order)
        }
        SubgroupSpec::K => {
            let q = tower.level_quotient(3)?;
            Ok(power_of_two(q.order_log2() - k_image(tower, 3)?.order_log2()))
        }
        SubgroupSpec::K1 | SubgroupSpec::Kn(_) => {
            let n = if let SubgroupSpec::Kn(n) = spec { n } else { 1 };
            let q = tower.level_quotient(n + 3)?;
            let h = tower.image_group(&subgroup_generators(spec)?, n + 3)?;
            Ok(power_of_two(q.order_log2() - h.order_log2()))
        }
        _ => Err(RigidityError::Unsupported(spec)),
    }
}

/// Level budget used when none is given: `n+5` for the indexed families,
/// 6 for `K`.
pub fn default_budget(spec: SubgroupSpec) -> usize {
    match spec {
        SubgroupSpec::P(n) | SubgroupSpec::R(n) | SubgroupSpec::Q(n) | SubgroupSpec::Kn(n) => n + 5,
        _ => 6,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankWitness {
    pub spec: SubgroupSpec,
    /// Frattini rank of the image at `witness_level`.
    pub lower_bound: usize,
    pub witness_level: usize,
    /// Length of the generator list.
    pub upper_bound: usize,
    pub certified: bool,
    /// `(level, rank)` for every level tried.
    pub ranks: Vec<(usize, usize)>,
}

/// Frattini ranks of the image of the generator list at levels `1, 2, ...`,
/// stopping once the rank reaches the list length or at the budget (clamped
/// to the tower's level guard).
pub fn rank_witness(tower: &Tower, spec: SubgroupSpec, level_budget: usize) -> Result<RankWitness, RigidityError> {
    let gens = subgroup_generators(spec)?;
    let upper = gens.len();
    let budget = level_budget.min(tower.max_level()).max(1);
    let mut ranks = Vec::new();
    for m in 1..=budget {
        let d = frattini_rank(&tower.image_group(&gens, m)?)?.d;
        ranks.push((m, d));
        if d == upper {
            break;
        }
    }
    let &(witness_level, lower_bound) = ranks.last().expect("at least one level");
    Ok(RankWitness { spec, lower_bound, witness_level, upper_bound: upper, certified: lower_bound == upper, ranks })
}

fn log2_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits() as usize;
    if x.count_ones() == 1 {
        return (bits - 1) as f64;
    }
    if bits < 1000 {
        return x.to_f64().expect("finite").log2();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("finite").log2() + shift as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankGradientRow {
    pub n: usize,
    pub d: usize,
    #[serde(serialize_with = "ser_big")]
    pub index: BigUint,
    #[serde(serialize_with = "ser_rational")]
    pub rg: BigRational,
    pub log2_d: f64,
    pub log2_log2_index: f64,
    /// `log2 log2 index / log2 d`, when `index >= 4` and `d >= 2`.
    pub ratio: Option<f64>,
    pub certified: bool,
    /// Level at which `d` was computed.
    pub witness_level: usize,
    /// What the row's `d` is and why it is or is not certified.
    pub note: String,
}

fn ser_big<S: serde::Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_rational<S: serde::Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl RankGradientRow {
    pub fn new(n: usize, d: usize, index: BigUint, certified: bool, witness_level: usize, note: String) -> RankGradientRow {
        let rg = BigRational::new(BigInt::from(d as i64 - 1), index.clone().into());
        let log2_d = (d as f64).log2();
        let log2_log2_index = log2_big(&index).log2();
        let ratio = (index >= BigUint::from(4u8) && d >= 2).then(|| log2_log2_index / log2_d);
        RankGradientRow { n, d, index, rg, log2_d, log2_log2_index, ratio, certified, witness_level, note }
    }

    pub fn csv_header() -> &'static str {
        "n,d,index,rg_num,rg_den,log2_d,loglog2_index,ratio,certified"
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.n,
            self.d,
            self.index,
            self.rg.numer(),
            self.rg.denom(),
            self.log2_d,
            self.log2_log2_index,
            self.ratio.map(|r| r.to_string()).unwrap_or_default(),
            self.certified
        )
    }
}

pub fn rows_to_csv(rows: &[RankGradientRow]) -> String {
    let mut out = String::from(RankGradientRow::csv_header());
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

pub fn rows_to_markdown(rows: &[RankGradientRow]) -> String {
    let mut out = String::from("| n | d | index | rg | ratio | certified |\n|---|---|---|---|---|---|\n");
    for r in rows {
        let ratio = r.ratio.map(|x| format!("{x:.6}")).unwrap_or_else(|| "-".into());
        out.push_str(&format!("| {} | {} | {} | {} | {} | {} |\n", r.n, r.d, r.index, r.rg, ratio, r.certified));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Chain {
    /// Stabilizers of the vertices `1^n`, through the catalog lists `P_n`.
    P,
    /// Level stabilizers `st(n)`.
    St,
}

impl std::str::FromStr for Chain {
    type Err = RigidityError;
    fn from_str(s: &str) -> Result<Chain, RigidityError> {
        match s {
            "P" | "p" => Ok(Chain::P),
            "st" | "St" | "ST" => Ok(Chain::St),
            _ => Err(RigidityError::UnknownChain(s.into())),
        }
    }
}

/// Row of the `P` chain. `d` comes from [`rank_witness`] on the list; the
/// row is certified only if the witness is and the list image equals the
/// stabilizer of `1^n` modulo the witness level.
pub fn p_row(tower: &Tower, n: usize, level_budget: usize) -> Result<RankGradientRow, RigidityError> {
    let spec = SubgroupSpec::P(n);
    let w = rank_witness(tower, spec, level_budget)?;
    let index = index_of(tower, spec)?;
    let m = w.witness_level.max(n);
    let stab = tower.level_quotient(m)?.vertex_stabilizer(n, (1 << n) - 1)?;
    let list = tower.image_group(&subgroup_generators(spec)?, m)?;
    let generates = list.same_group(&stab)?;
    let note = if !w.certified {
        format!("rank of the list image is only a lower bound at level {}", w.witness_level)
    } else if generates {
        format!("list rank certified at level {}; list image is the stabilizer of 1^{n}", w.witness_level)
    } else {
        let stab_rank = frattini_rank(&stab)?.d;
        format!(
            "list rank certified at level {}, but the list image has index {} in the stabilizer of 1^{n}, whose Frattini rank there is {stab_rank}",
            w.witness_level,
            power_of_two(stab.order_log2() - list.order_log2()),
        )
    };
    Ok(RankGradientRow::new(n, w.lower_bound, index, w.certified && generates, w.witness_level, note))
}

/// Row of the level-stabilizer chain. `st(n)` has no finite generator list
/// here, so `d` is the Frattini rank of its image at the deepest level in
/// the budget, a lower bound.
pub fn st_row(tower: &Tower, n: usize, level_budget: usize) -> Result<RankGradientRow, RigidityError> {
    let index = index_of(tower, SubgroupSpec::St(n))?;
    let m = level_budget.min(tower.max_level()).max(n);
    let image = tower.level_quotient(m)?.level_stabilizer_image(n)?;
    let d = frattini_rank(&image)?.d;
    let note = format!("lower bound from the image modulo st({m})");
    Ok(RankGradientRow::new(n, d, index, false, m, note))
}

/// Rows `n = 1..=n_max`. A budget of 0 means [`default_budget`] per row.
pub fn rank_gradient_table(
    tower: &Tower,
    chain: Chain,
    n_max: usize,
    level_budget: usize,
) -> Result<Vec<RankGradientRow>, RigidityError> {
    (1..=n_max)
        .map(|n| {
            let budget = if level_budget == 0 { n + 5 } else { level_budget };
            match chain {
                Chain::P => p_row(tower, n, budget),
                Chain::St => st_row(tower, n, budget),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RigidityReport {
    pub rows: Vec<RankGradientRow>,
    pub d_min: f64,
    pub ratios: Vec<f64>,
}

/// Rows with `index >= 4` and `d >= 2`, the ones a rigidity report accepts.
pub fn eligible_rows(rows: &[RankGradientRow]) -> Vec<RankGradientRow> {
    rows.iter().filter(|r| r.ratio.is_some()).cloned().collect()
}

/// `D_min = max over rows of max(r, 1/r)` for `r = log2 log2 index / log2 d`.
pub fn rigidity_report(rows: &[RankGradientRow]) -> Result<RigidityReport, RigidityError> {
    if rows.is_empty() {
        return Err(RigidityError::Empty);
    }
    let mut ratios = Vec::new();
    for r in rows {
        match r.ratio {
            Some(x) => ratios.push(x),
            None => return Err(RigidityError::RowRejected { n: r.n, index: r.index.to_string(), d: r.d }),
        }
    }
    let d_min = ratios.iter().map(|&x| x.max(1.0 / x)).fold(1.0, f64::max);
    Ok(RigidityReport { rows: rows.to_vec(), d_min, ratios })
}

/// Input of [`normal_sandwich_check`].
#[derive(Debug, Clone)]
pub enum SandwichInput {
    Spec(SubgroupSpec),
    /// The normal closure of one element.
    Element(Element),
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichResult {
    pub n0: usize,
    pub level: usize,
    pub report: VerificationReport,
}

impl SandwichResult {
    pub fn to_json(&self) -> Value {
        json!({
            "n0": self.n0,
            "modulo": format!("st({})", self.level),
            "certified": format!("conclusions hold modulo st({}) only", self.level),
            "checks": self.report,
        })
    }
}

/// Computes `n0` with `N <= st(n0)` and `N` not in `st(n0+1)`, then checks
/// modulo `st(M)`: `st(n0+6) <= N`, and for `n0 >= 4` also
/// `K_(n0+3) <= N <= K_(n0-3)`.
pub fn normal_sandwich_check(tower: &Tower, input: &SandwichInput, m: usize) -> Result<SandwichResult, RigidityError> {
    let q = tower.level_quotient(m)?;
    let seeds: Vec<_> = match input {
        SandwichInput::Spec(spec) => match spec {
            SubgroupSpec::K | SubgroupSpec::B | SubgroupSpec::K1 | SubgroupSpec::Kn(_) => subgroup_generators(*spec)?,
            _ => return Err(RigidityError::Unsupported(*spec)),
        },
        SandwichInput::Element(g) => vec![g.clone()],
    };
    let seeds: Vec<_> = seeds.iter().map(|g| image_at_level(g, m)).collect();
    let n_img = q.normal_closure(&seeds)?;
    if n_img.is_trivial() {
        return Err(RigidityError::TrivialImage(m));
    }
    let n0 = (0..m).take_while(|&l| n_img.project(l + 1).map(|p| p.is_trivial()).unwrap_or(false)).count();
    if m <= n0 + 6 {
        return Err(RigidityError::LevelTooLow { m, n0 });
    }
    let mut report = VerificationReport::default();
    let inst = format!("n0={n0}, modulo st({m})");
    let st = q.level_stabilizer_image(n0 + 6)?;
    report.push(format!("st({})<=N", n0 + 6), "st(n0+6) < N", inst.clone(), n_img.contains_group(&st)?);
    if n0 >= 4 {
        let lower = vertex_product(m, n0 + 3, &k_image(tower, m - n0 - 3)?)?;
        let upper = vertex_product(m, n0 - 3, &k_image(tower, m - n0 + 3)?)?;
        report.push(format!("K{}<=N", n0 + 3), "K_(n0+3) < N < K_(n0-3)", inst.clone(), n_img.contains_group(&lower)?);
        report.push(format!("N<=K{}", n0 - 3), "K_(n0+3) < N < K_(n0-3)", inst, upper.contains_group(&n_img)?);
    }
    Ok(SandwichResult { n0, level: m, report })
}

/// Random subgroups of `G/st(level)` with their Frattini ranks. Each is the
/// image of a finite-index subgroup containing `st(level)`, whose rank is at
/// least the one recorded; rows are never certified.
pub fn conjecture_probe(tower: &Tower, level: usize, samples: usize, seed: u64) -> Result<Vec<RankGradientRow>, RigidityError> {
    if !(3..=6).contains(&level) {
        return Err(RigidityError::ProbeLevel(level));
    }
    let q = tower.level_quotient(level)?;
    let mut rng = Lcg::new(seed);
    (0..samples)
        .map(|i| {
            let k = 1 + rng.below(4);
            let h = random_subgroup(&q, k, rng.next_u32() as u64);
            probe_row(&q, &h, i, format!("probe sample {i}: {k} random words, lower bound only"))
        })
        .collect()
}

/// An uncertified row for a subgroup of a level quotient.
pub fn probe_row(q: &PermGroup, h: &PermGroup, n: usize, note: String) -> Result<RankGradientRow, RigidityError> {
    let d = frattini_rank(h)?.d;
    let index = power_of_two(q.order_log2() - h.order_log2());
    Ok(RankGradientRow::new(n, d, index, false, q.level(), note))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;

    fn tower() -> Tower {
        Tower::new(Config { max_level: 8 })
    }

    #[test]
    fn rows_from_values() {
        let r = RankGradientRow::new(4, 8, BigUint::from(16u8), true, 9, String::new());
        assert_eq!(r.rg, BigRational::new(7.into(), 16.into()));
        assert!((r.ratio.unwrap() - 2.0 / 3.0).abs() < RATIO_TOLERANCE);
        let r8 = RankGradientRow::new(8, 12, BigUint::from(256u16), true, 10, String::new());
        assert!((r8.ratio.unwrap() - 3.0 / 12f64.log2()).abs() < RATIO_TOLERANCE);
        let rep = rigidity_report(std::slice::from_ref(&r)).unwrap();
        assert!((rep.d_min - 1.5).abs() < RATIO_TOLERANCE);
        let small = RankGradientRow::new(1, 4, BigUint::from(2u8), true, 3, String::new());
        assert!(small.ratio.is_none());
        assert!(matches!(rigidity_report(&[small.clone(), r]), Err(RigidityError::RowRejected { n: 1, .. })));
        assert!(eligible_rows(&[small]).is_empty());
    }

    #[test]
    fn indices() {
        let t = tower();
        assert_eq!(index_of(&t, SubgroupSpec::St(1)).unwrap(), BigUint::from(2u8));
        assert_eq!(index_of(&t, SubgroupSpec::St(3)).unwrap(), BigUint::from(128u8));
        assert_eq!(index_of(&t, SubgroupSpec::K).unwrap(), BigUint::from(16u8));
        assert_eq!(index_of(&t, SubgroupSpec::P(5)).unwrap(), BigUint::from(32u8));
        assert!(matches!(index_of(&t, SubgroupSpec::R(2)), Err(RigidityError::Unsupported(_))));
    }

    #[test]
    fn small_witnesses() {
        let t = tower();
        let k = rank_witness(&t, SubgroupSpec::K, 6).unwrap();
        assert!(k.certified && k.lower_bound == 3);
        let p1 = rank_witness(&t, SubgroupSpec::P(1), 5).unwrap();
        assert!(p1.certified && p1.lower_bound == 4);
        let short = rank_witness(&t, SubgroupSpec::P(2), 2).unwrap();
        assert!(!short.certified && short.witness_level == 2);
    }

    #[test]
    fn probe_is_deterministic() {
        let t = tower();
        let a = conjecture_probe(&t, 4, 5, 7).unwrap();
        assert_eq!(a, conjecture_probe(&t, 4, 5, 7).unwrap());
        assert!(a.iter().all(|r| !r.certified));
        assert!(conjecture_probe(&t, 7, 1, 0).is_err());
    }
}
