//! Verification suites shared by the command line and the test harness.

use num_bigint::BigUint;

use crate::catalog::{
    subgroup_generators, verify_branching, verify_conjugation_tables, SubgroupSpec, VerificationReport,
};
use crate::perm::{image_at_level, Tower};
use crate::pgroup::{check_rank_bound, random_subgroup, Lcg};
use crate::rigidity::{
    default_budget, normal_sandwich_check, quotient_order_formula, rank_witness, RigidityError, SandwichInput,
};

/// Suite names accepted by [`run_suite`], in the order `all` runs them.
pub const SUITES: [&str; 6] = ["conjugation", "branching", "orders", "ranks", "sandwich", "nilpotent-bound"];

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub max_m: usize,
    pub level: usize,
}

impl Default for SuiteOptions {
    fn default() -> SuiteOptions {
        SuiteOptions { max_m: 8, level: 6 }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SuiteOutcome {
    pub report: VerificationReport,
    /// Checks not run, with the reason.
    pub skipped: Vec<String>,
}

pub fn run_suite(tower: &Tower, name: &str, opts: SuiteOptions) -> Result<SuiteOutcome, RigidityError> {
    let mut out = SuiteOutcome::default();
    match name {
        "conjugation" => out.report = verify_conjugation_tables(opts.max_m),
        "branching" => {
            for m in 4..=opts.level {
                out.report.extend(verify_branching(tower, m)?);
            }
        }
        "orders" => out.report = orders_suite(tower, opts.level)?,
        "ranks" => out.report = ranks_suite(tower)?,
        "sandwich" => out = sandwich_suite(tower)?,
        "nilpotent-bound" => out.report = nilpotent_bound_suite(tower, 100, 20)?,
        "all" => {
            for s in SUITES {
                let o = run_suite(tower, s, opts)?;
                out.report.extend(o.report);
                out.skipped.extend(o.skipped);
            }
        }
        other => return Err(RigidityError::UnknownSuite(other.into())),
    }
    Ok(out)
}

/// Brute force for levels 1 and 2, chain order against enumeration up to
/// level 4, and the closed formula for levels `3..=level`.
pub fn orders_suite(tower: &Tower, level: usize) -> Result<VerificationReport, RigidityError> {
    let mut r = VerificationReport::default();
    for (n, expected) in [(1usize, 2usize), (2, 8)] {
        let count = tower.level_quotient(n)?.enumerate()?.len();
        r.push(format!("|G/st({n})|={expected}"), "level quotient orders", "enumeration", count == expected);
    }
    for n in 1..=4 {
        let q = tower.level_quotient(n)?;
        let count = q.enumerate()?.len();
        r.push(format!("chain=BFS n={n}"), "level quotient orders", format!("{count} elements"), q.order() == BigUint::from(count));
    }
    for n in 3..=level.max(3) {
        let q = tower.level_quotient(n)?;
        let e = 5 * (1usize << (n - 3)) + 2;
        r.push(format!("|G/st({n})|=2^{e}"), "index of st(n)", format!("degree {}", 1usize << n), q.order() == quotient_order_formula(n));
    }
    Ok(r)
}

/// Stated ranks of the catalog subgroups, each certified within its default
/// budget, and whether each vertex-stabilizer list generates the stabilizer.
pub fn ranks_suite(tower: &Tower) -> Result<VerificationReport, RigidityError> {
    use SubgroupSpec::*;
    let mut expected = vec![(K, 3), (P(1), 4), (R(2), 5), (Q(1), 4), (Q(2), 5)];
    for n in 2..=5 {
        expected.push((P(n), n + 4));
    }
    for n in 3..=5 {
        expected.push((R(n), n + 4));
        expected.push((Q(n), n + 4));
    }
    let mut r = VerificationReport::default();
    for (spec, d) in expected {
        let w = rank_witness(tower, spec, default_budget(spec))?;
        let inst = if w.certified {
            format!("certified at level {}", w.witness_level)
        } else {
            format!("lower bound {} at level {}, list length {}", w.lower_bound, w.witness_level, w.upper_bound)
        };
        r.push(format!("d({spec})={d}"), "Frattini ranks", inst, w.certified && w.lower_bound == d);
    }
    for n in 1..=5 {
        let m = (n + 3).min(tower.max_level());
        let stab = tower.level_quotient(m)?.vertex_stabilizer(n, (1 << n) - 1)?;
        let list = tower.image_group(&subgroup_generators(P(n))?, m)?;
        let inst = format!("modulo st({m}), index {} in the stabilizer", BigUint::from(1u8) << (stab.order_log2() - list.order_log2()));
        r.push(format!("<P{n} list>=st(1^{n})"), "vertex stabilizer generators", inst, list.same_group(&stab)?);
    }
    Ok(r)
}

/// Level `n0` with `N <= st(n0)` and `N` not in `st(n0+1)`; independent of the
/// level at which it is detected.
pub fn first_fixed_level(tower: &Tower, input: &SandwichInput) -> Result<usize, RigidityError> {
    let seeds = match input {
        SandwichInput::Spec(spec) => subgroup_generators(*spec)?,
        SandwichInput::Element(g) => vec![g.clone()],
    };
    for m in 1..=tower.max_level() {
        if seeds.iter().any(|g| !image_at_level(g, m).is_identity()) {
            return Ok(m - 1);
        }
    }
    Err(RigidityError::TrivialImage(tower.max_level()))
}

/// Expected `n0` values for `K`, `K2`, `K3`, `B`, each checked at `M = n0+7`.
pub const SANDWICH_CASES: [(SubgroupSpec, usize); 4] =
    [(SubgroupSpec::K, 1), (SubgroupSpec::Kn(2), 3), (SubgroupSpec::Kn(3), 4), (SubgroupSpec::B, 1)];

pub fn sandwich_suite(tower: &Tower) -> Result<SuiteOutcome, RigidityError> {
    let mut out = SuiteOutcome::default();
    for (spec, expected) in SANDWICH_CASES {
        let input = SandwichInput::Spec(spec);
        let n0 = first_fixed_level(tower, &input)?;
        out.report.push(format!("n0({spec})={expected}"), "normal subgroup sandwich", "", n0 == expected);
        let m = n0 + 7;
        if m > tower.max_level() {
            out.skipped.push(format!("{spec}: needs level {m}, the level guard is {}", tower.max_level()));
            continue;
        }
        out.report.extend(normal_sandwich_check(tower, &input, m)?.report);
    }
    Ok(out)
}

/// `d(H) <= d(G)^c` on seeded random subgroups of `G/st(4)` and `G/st(5)`.
pub fn nilpotent_bound_suite(tower: &Tower, at4: usize, at5: usize) -> Result<VerificationReport, RigidityError> {
    let mut r = VerificationReport::default();
    for (level, count) in [(4usize, at4), (5, at5)] {
        let q = tower.level_quotient(level)?;
        let mut rng = Lcg::new(level as u64);
        for i in 0..count {
            let k = 1 + rng.below(5);
            let seed = rng.next_u32() as u64;
            let h = random_subgroup(&q, k, seed);
            let b = check_rank_bound(&q, &h).map_err(RigidityError::from)?;
            r.push(
                format!("level {level} sample {i}"),
                "rank bound for subgroups of nilpotent groups",
                format!("k={k}, seed={seed}, d(H)={}, d(G)={}, class={}", b.d_h, b.d_g, b.class),
                b.holds,
            );
        }
    }
    Ok(r)
}
