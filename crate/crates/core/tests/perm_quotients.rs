use grig_core::perm::{image_at_level, PermGroup, Tower};
use grig_core::config::Config;
use grig_core::tree::{parse_element_with, WordsOnly};

fn tower() -> Tower {
    Tower::new(Config { max_level: 10 })
}

#[test]
fn small_quotients_match_enumeration() {
    let t = tower();
    for n in 1..=4 {
        let q = t.level_quotient(n).unwrap();
        let count = q.enumerate().unwrap().len();
        assert_eq!(num_bigint::BigUint::from(count), q.order(), "level {n}");
    }
    assert_eq!(t.level_quotient(1).unwrap().order_log2(), 1);
    assert_eq!(t.level_quotient(2).unwrap().order_log2(), 3);
}

#[test]
fn index_formula() {
    let t = tower();
    for n in 3..=8 {
        let q = t.level_quotient(n).unwrap();
        assert_eq!(q.order_log2(), 5 * (1 << (n - 3)) + 2, "level {n}");
    }
}

#[test]
fn k_image_has_index_16() {
    let t = tower();
    let q = t.level_quotient(3).unwrap();
    let tt = parse_element_with("abab", &WordsOnly).unwrap();
    let k = q.normal_closure(&[image_at_level(&tt, 3)]).unwrap();
    assert_eq!(k.order_log2(), 3);
    assert!(q.contains_group(&k).unwrap());
}

#[test]
fn stabilizers_and_orbits() {
    let t = tower();
    let q4 = t.level_quotient(4).unwrap();
    let st3 = q4.level_stabilizer_image(3).unwrap();
    assert_eq!(q4.order_log2() - st3.order_log2(), 7);
    assert!(q4.level_stabilizer_image(4).unwrap().is_trivial());
    assert_eq!(q4.level_stabilizer_image(0).unwrap().order_log2(), q4.order_log2());
    for n in 1..=8 {
        assert_eq!(t.level_quotient(n).unwrap().orbit(0).len(), 1 << n);
    }
    let stab = q4.point_stabilizer(15).unwrap();
    assert_eq!(q4.order_log2() - stab.order_log2(), 4);
    assert_eq!(stab.orbit(15), vec![15]);
}

#[test]
fn text_round_trip() {
    let q = tower().level_quotient(3).unwrap();
    let text = q.to_text();
    let back = PermGroup::from_text(&text).unwrap();
    assert_eq!(back.order_log2(), 7);
}

mod properties {
    use grig_core::perm::{image_at_level, Tower};
    use grig_core::config::Config;
    use grig_core::tree::{Element, Generator, Word};
    use proptest::prelude::*;

    fn word(max_len: usize) -> impl Strategy<Value = Element> {
        prop::collection::vec(prop::sample::select(Generator::ALL.to_vec()), 0..=max_len)
            .prop_map(|ls| Element::word(Word::from_letters(ls)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn images_are_functorial(g in word(24), h in word(24)) {
            for n in 1..=6 {
                prop_assert_eq!(image_at_level(&g.mul(&h), n), image_at_level(&g, n).compose(&image_at_level(&h, n)));
                prop_assert_eq!(image_at_level(&g.inverse(), n), image_at_level(&g, n).inverse());
            }
        }

        #[test]
        fn images_project_to_lower_levels(g in word(24)) {
            for n in 1..8 {
                prop_assert_eq!(image_at_level(&g, n + 1).project(n), image_at_level(&g, n));
            }
        }
    }

    #[test]
    fn quotient_orders_divide_and_strong_generators_are_2_elements() {
        let t = Tower::new(Config { max_level: 8 });
        for n in 1..8 {
            let (q, q1) = (t.level_quotient(n).unwrap(), t.level_quotient(n + 1).unwrap());
            assert!(q.order_log2() <= q1.order_log2());
            assert!(q1.project(n).unwrap().same_group(&q).unwrap());
            for (_, s) in q1.strong_generators() {
                assert!(s.order().is_power_of_two());
            }
        }
    }
}
