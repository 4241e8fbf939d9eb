use grig_core::catalog::{family_element_with_max, t, Family};
use grig_core::perm::image_at_level;
use grig_core::pgroup::Lcg;
use grig_core::tree::{reduce_word, Element, Generator, Vertex, Word};
use proptest::prelude::*;

fn letters(max_len: usize) -> impl Strategy<Value = Vec<Generator>> {
    prop::collection::vec(prop::sample::select(Generator::ALL.to_vec()), 0..=max_len)
}

fn elem(ls: &[Generator]) -> Element {
    Element::word(Word::from_letters(ls.iter().copied()))
}

/// Raw product of single letters, so nothing is reduced before the check.
fn unreduced(ls: &[Generator]) -> Element {
    Element::product(ls.iter().map(|&g| Element::generator(g)))
}

fn level_one_word(max_len: usize) -> impl Strategy<Value = Vec<Generator>> {
    letters(max_len).prop_map(|mut ls| {
        if ls.iter().filter(|&&g| g == Generator::A).count() % 2 == 1 {
            ls.push(Generator::A);
        }
        ls
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reduction_is_idempotent_and_preserves_the_element(ls in letters(40)) {
        let r = reduce_word(&ls);
        prop_assert!(r.len() <= ls.len());
        prop_assert_eq!(reduce_word(r.letters()), r.clone());
        prop_assert!(unreduced(&ls).mul(&Element::word(r).inverse()).is_identity());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn action_is_a_level_bijection(ls in letters(30)) {
        let g = elem(&ls);
        for n in 0..=8 {
            let mut seen = vec![false; 1 << n];
            for v in Vertex::level_vertices(n) {
                let w = g.act(&v);
                prop_assert_eq!(w.level(), n);
                prop_assert!(!seen[w.index()]);
                seen[w.index()] = true;
                if n > 0 {
                    prop_assert_eq!(g.act(&v.prefix(n - 1)), w.prefix(n - 1));
                }
            }
        }
    }

    #[test]
    fn sections_multiply_componentwise(x in level_one_word(20), y in level_one_word(20)) {
        let (g, h) = (elem(&x), elem(&y));
        let (dg, dh, dgh) = (g.decompose(), h.decompose(), g.mul(&h).decompose());
        prop_assert!(!dg.swap && !dh.swap && !dgh.swap);
        prop_assert!(dgh.left.equals(&dg.left.mul(&dh.left)));
        prop_assert!(dgh.right.equals(&dg.right.mul(&dh.right)));
    }

    #[test]
    fn decomposition_rebuilds_the_action(ls in letters(30), extra in 0usize..3) {
        let g = if extra == 0 { elem(&ls) } else { elem(&ls).mul(&t().pow(extra)) };
        let p = g.portrait(1);
        for n in 0..=6 {
            for v in Vertex::level_vertices(n) {
                prop_assert_eq!(p.act(&v), g.act(&v));
            }
        }
        prop_assert!(p.refine().same_as(&g.portrait(2)));
    }
}

#[test]
fn generator_relations() {
    use Generator::*;
    for g in Generator::ALL {
        assert!(unreduced(&[g, g]).is_identity());
    }
    for (x, y, z) in [(B, C, D), (C, B, D), (B, D, C), (D, B, C), (C, D, B), (D, C, B)] {
        assert!(unreduced(&[x, y]).equals(&Element::generator(z)));
    }
}

fn nontrivial_level(g: &Element, max: usize) -> Option<usize> {
    (1..=max).find(|&n| !image_at_level(g, n).is_identity())
}

#[test]
fn word_problem_agrees_with_level_images() {
    let mut rng = Lcg::new(2024);
    let mut trivial = 0;
    for _ in 0..1000 {
        let len = rng.below(31);
        let ls: Vec<Generator> = (0..len).map(|_| Generator::ALL[rng.below(4)]).collect();
        let g = unreduced(&ls);
        if g.is_identity() {
            trivial += 1;
            assert_eq!(nontrivial_level(&g, 10), None, "{ls:?}");
        } else {
            assert!(nontrivial_level(&g, 10).is_some(), "{ls:?}");
        }
    }
    assert!(trivial > 0);
}

#[test]
fn catalog_elements_are_detected_by_level_ten() {
    let mut named = vec![t()];
    for m in 0..=6 {
        named.push(family_element_with_max(Family::X, m, 12).unwrap());
    }
    for m in 0..=7 {
        named.push(family_element_with_max(Family::U, m, 12).unwrap());
        named.push(family_element_with_max(Family::V, m, 12).unwrap());
    }
    named.push(family_element_with_max(Family::UPair, 0, 12).unwrap());
    for g in &named {
        assert!(!g.is_identity());
        assert!(nontrivial_level(g, 10).is_some(), "{g}");
    }
    // x_m first acts at level m+4, so x_7 is invisible at level 10
    let x7 = family_element_with_max(Family::X, 7, 12).unwrap();
    assert!(!x7.is_identity());
    assert_eq!(nontrivial_level(&x7, 10), None);
    assert_eq!(nontrivial_level(&x7, 11), Some(11));
}
