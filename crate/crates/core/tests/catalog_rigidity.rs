use num_bigint::BigUint;
use num_rational::BigRational;

use grig_core::catalog::{family_element, member_of_k, subgroup_generators, Family, SubgroupSpec};
use grig_core::config::Config;
use grig_core::perm::Tower;
use grig_core::pgroup::frattini_rank;
use grig_core::rigidity::*;

fn tower() -> Tower {
    Tower::new(Config { max_level: 10 })
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn stabilizer_lists_have_n_plus_4_entries() {
    for n in 2..=8 {
        assert_eq!(subgroup_generators(SubgroupSpec::P(n)).unwrap().len(), n + 4);
    }
}

#[test]
fn named_elements_lie_in_k() {
    for f in [Family::X, Family::U, Family::V] {
        for m in 0..=6 {
            assert!(member_of_k(&family_element(f, m).unwrap()), "{f:?} {m}");
        }
    }
}

#[test]
fn stabilizer_list_generation_at_level_n() {
    // the list generates the stabilizer of 1^n modulo st(n) only for n = 2
    let t = tower();
    for n in 2..=6 {
        let stab = t.level_quotient(n).unwrap().vertex_stabilizer(n, (1 << n) - 1).unwrap();
        let list = t.image_group(&subgroup_generators(SubgroupSpec::P(n)).unwrap(), n).unwrap();
        assert!(stab.contains_group(&list).unwrap());
        assert_eq!(list.same_group(&stab).unwrap(), n == 2, "n={n}");
    }
}

#[test]
fn index_examples_and_formula() {
    let t = tower();
    assert_eq!(index_of(&t, SubgroupSpec::St(1)).unwrap(), BigUint::from(2u8));
    assert_eq!(index_of(&t, SubgroupSpec::St(3)).unwrap(), BigUint::from(128u8));
    assert_eq!(index_of(&t, SubgroupSpec::K).unwrap(), BigUint::from(16u8));
    for n in 3..=8 {
        assert_eq!(index_of(&t, SubgroupSpec::St(n)).unwrap(), quotient_order_formula(n));
    }
    for n in 1..=7 {
        assert_eq!(index_of(&t, SubgroupSpec::P(n)).unwrap(), BigUint::from(1u32 << n));
    }
    // [G:K] = 16 and [K:K x K] = 4, so [G:K_n] = 16 * 4^(2^n - 1)
    assert_eq!(index_of(&t, SubgroupSpec::K1).unwrap(), BigUint::from(64u8));
    for n in 1..=4 {
        assert_eq!(index_of(&t, SubgroupSpec::Kn(n)).unwrap(), BigUint::from(1u8) << ((1usize << (n + 1)) + 2), "n={n}");
    }
}

#[test]
fn witness_examples() {
    let t = tower();
    for (spec, budget, d) in [(SubgroupSpec::K, 6, 3), (SubgroupSpec::P(2), 7, 6), (SubgroupSpec::P(1), 5, 4)] {
        let w = rank_witness(&t, spec, budget).unwrap();
        assert!(w.certified, "{spec}");
        assert_eq!(w.lower_bound, d);
    }
}

#[test]
fn certification_is_monotone_and_stable() {
    let t = tower();
    use SubgroupSpec::*;
    for spec in [K, P(1), P(2), P(3), R(2), R(3), Q(1), Q(2), Q(4)] {
        let w = rank_witness(&t, spec, default_budget(spec)).unwrap();
        assert!(w.ranks.windows(2).all(|p| p[0].1 <= p[1].1), "{spec}");
        assert!(w.certified, "{spec}");
        let beyond = t.image_group(&subgroup_generators(spec).unwrap(), w.witness_level + 1).unwrap();
        assert_eq!(frattini_rank(&beyond).unwrap().d, w.lower_bound, "{spec}");
    }
    // Q3 stalls one below its list length
    let w = rank_witness(&t, Q(3), default_budget(Q(3))).unwrap();
    assert!(!w.certified);
    assert_eq!((w.lower_bound, w.upper_bound, w.witness_level), (6, 7, 8));
}

#[test]
fn stabilizer_chain_rows() {
    let t = tower();
    let rows = rank_gradient_table(&t, Chain::P, 8, 0).unwrap();
    assert_eq!(rows[0].rg, q(3, 2));
    assert!(rows[0].certified);
    assert_eq!(rows[1].rg, q(5, 4));
    assert_eq!(rows[4].rg, q(1, 4));
    for r in &rows[1..] {
        let n = r.n as i64;
        assert_eq!(r.rg, q(n + 3, 1 << n), "n={n}");
        assert_eq!(r.d, r.n + 4);
        // the list generates an index-2 subgroup of the stabilizer, so the row is not certified
        assert!(!r.certified, "n={n}");
        assert!(r.note.contains("index 2"), "{}", r.note);
    }
    for p in rows[1..].windows(2) {
        let n = p[0].n as i64;
        assert_eq!(&p[1].rg / &p[0].rg, q(n + 4, 2 * (n + 3)));
    }
}

#[test]
fn rigidity_constant_is_bounded() {
    let t = tower();
    let rows = rank_gradient_table(&t, Chain::P, 8, 0).unwrap();
    let eligible = eligible_rows(&rows);
    assert_eq!(eligible.first().unwrap().n, 2);
    let full = rigidity_report(&eligible).unwrap();
    assert!(full.d_min.is_finite() && full.d_min <= 4.0);
    for (r, &x) in full.rows.iter().zip(&full.ratios) {
        assert!(1.0 / full.d_min <= x + RATIO_TOLERANCE && x <= full.d_min + RATIO_TOLERANCE, "n={}", r.n);
    }
    let mut prev = f64::INFINITY;
    for k in 3..=eligible.len() {
        let d = rigidity_report(&eligible[..k]).unwrap().d_min;
        if eligible[k - 1].n > 4 {
            assert!(d <= prev + RATIO_TOLERANCE);
        }
        prev = d;
    }
    let p4 = &rows[3];
    assert!((p4.ratio.unwrap() - 2.0 / 3.0).abs() < RATIO_TOLERANCE);
    let p8 = &rows[7];
    assert!((p8.ratio.unwrap() - 3.0 / 12f64.log2()).abs() < RATIO_TOLERANCE);
    assert!(rigidity_report(&rows).is_err());
}

#[test]
fn sandwich_on_k_and_k2() {
    let t = tower();
    for (spec, n0) in [(SubgroupSpec::K, 1), (SubgroupSpec::Kn(2), 3)] {
        let r = normal_sandwich_check(&t, &SandwichInput::Spec(spec), n0 + 7).unwrap();
        assert_eq!(r.n0, n0);
        assert!(r.report.all_pass(), "{spec}");
    }
    let k = normal_sandwich_check(&t, &SandwichInput::Spec(SubgroupSpec::K), 8).unwrap();
    assert_eq!(k.report.len(), 1);
    assert!(matches!(
        normal_sandwich_check(&t, &SandwichInput::Spec(SubgroupSpec::K), 7),
        Err(RigidityError::LevelTooLow { m: 7, n0: 1 })
    ));
}

#[test]
fn sandwich_on_normal_closures() {
    let t = tower();
    let b = normal_sandwich_check(&t, &SandwichInput::Spec(SubgroupSpec::B), 9).unwrap();
    assert_eq!(b.n0, 1);
    assert!(b.report.all_pass());
    let g = grig_core::parse_element("x0").unwrap();
    let x0 = normal_sandwich_check(&t, &SandwichInput::Element(g), 10).unwrap();
    assert_eq!(x0.n0, 3);
    assert!(x0.report.all_pass());
}

#[test]
fn probe_rows() {
    let t = tower();
    let q4 = t.level_quotient(4).unwrap();
    let whole = probe_row(&q4, &q4, 0, String::new()).unwrap();
    assert_eq!(whole.index, BigUint::from(1u8));
    assert!(whole.ratio.is_none());
    assert_eq!(whole.d, frattini_rank(&q4).unwrap().d);
    // the stabilizer of 1^n modulo st(n) has the list's rank there for n <= 3 only
    for (n, same) in [(1, true), (2, true), (3, true), (4, false), (5, false)] {
        let qn = t.level_quotient(n).unwrap();
        let stab = qn.vertex_stabilizer(n, (1 << n) - 1).unwrap();
        let row = probe_row(&qn, &stab, n, String::new()).unwrap();
        let w = rank_witness(&t, SubgroupSpec::P(n), n + 5).unwrap();
        let at_n = w.ranks.iter().find(|(m, _)| *m == n).unwrap().1;
        assert_eq!(row.d == at_n, same, "n={n}");
        assert_eq!(row.index, BigUint::from(1u32 << n));
    }
    let a = conjecture_probe(&t, 5, 8, 3).unwrap();
    assert_eq!(a, conjecture_probe(&t, 5, 8, 3).unwrap());
    assert!(a.iter().all(|r| !r.certified && r.d >= 1));
}

#[test]
fn csv_layout() {
    let rows = rank_gradient_table(&tower(), Chain::P, 3, 0).unwrap();
    let csv = rows_to_csv(&rows);
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "n,d,index,rg_num,rg_den,log2_d,loglog2_index,ratio,certified");
    assert_eq!(lines.next().unwrap(), "1,4,2,3,2,2,0,,true");
    assert!(lines.next().unwrap().starts_with("2,6,4,5,4,"));
}
