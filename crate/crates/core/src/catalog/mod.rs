//! Named elements and subgroups, and verifiers for their conjugation tables
//! and branching decompositions.

mod branching;
mod report;
mod tables;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::DEFAULT_MAX_LEVEL;
use crate::perm::{image_at_level, PermGroup};
use crate::tree::{Element, KMember, NameResolver, Vertex, Word};

pub use branching::verify_branching;
pub(crate) use branching::{k_image, vertex_product};
pub use report::{Check, VerificationReport};
pub use tables::verify_conjugation_tables;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("index {index} exceeds the configured maximum {max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("{0} has no element-level generator list")]
    NoGenerators(SubgroupSpec),
    #[error("{0} is not defined")]
    Undefined(SubgroupSpec),
    #[error("{0} is not in K")]
    NotInK(String),
    #[error("level {level} is too small; the check needs at least {min}")]
    LevelTooSmall { level: usize, min: usize },
    #[error(transparent)]
    Perm(#[from] crate::perm::PermError),
}

/// Families of named elements. `X`, `U` and `V` are indexed, with `U(0) = u`
/// and `V(0) = v`; the others take index 0 only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    T,
    X,
    U,
    V,
    /// The element `(u, u)`.
    UPair,
}

pub fn t() -> Element {
    word("abab")
}

fn word(s: &str) -> Element {
    Element::word(s.parse::<Word>().expect("valid word"))
}

/// `d d^a`, which decomposes as `(b, b)`.
pub fn dda() -> Element {
    word("dada")
}

/// Named element of a family, with `m` bounded by [`DEFAULT_MAX_LEVEL`].
pub fn family_element(family: Family, m: usize) -> Result<Element, CatalogError> {
    family_element_with_max(family, m, DEFAULT_MAX_LEVEL)
}

pub fn family_element_with_max(family: Family, m: usize, max: usize) -> Result<Element, CatalogError> {
    if m > max {
        return Err(CatalogError::IndexOutOfRange { index: m, max });
    }
    Ok(match family {
        Family::T | Family::UPair if m > 0 => return Err(CatalogError::IndexOutOfRange { index: m, max: 0 }),
        Family::T => t(),
        Family::UPair => {
            let u = certify(&word("badabada")).expect("u lies in K");
            Element::pair(u.clone(), u)
        }
        Family::X | Family::U | Family::V => {
            let base = match family {
                Family::X => word("acacacac"),
                Family::U => word("badabada"),
                _ => word("abadabad"),
            };
            rightmost_embedding(base, m)
        }
    })
}

/// `(1, (1, ... (1, g)))` with `m` pairs: acts as `g` below `1^m`.
fn rightmost_embedding(g: Element, m: usize) -> Element {
    embed_at(g, &Vertex::rightmost(m))
}

/// The element acting as `g` on the subtree at `w` and trivially elsewhere;
/// `g` must lie in `K`.
pub fn embed_at(g: Element, w: &Vertex) -> Element {
    let one = certify(&Element::identity()).expect("1 lies in K");
    let mut cur = g;
    for &bit in w.bits().iter().rev() {
        let k = certify(&cur).expect("embedding of an element of K");
        cur = if bit == 0 { Element::pair(k, one.clone()) } else { Element::pair(one.clone(), k) };
    }
    cur
}

/// Image of `K` in `G/st(3)`: the normal closure of the image of `(ab)^2`.
pub fn k_image_level3() -> &'static PermGroup {
    static K3: OnceLock<PermGroup> = OnceLock::new();
    K3.get_or_init(|| {
        let g3 = PermGroup::new(3, crate::tree::Generator::ALL.iter().map(|&x| crate::perm::generator_image(x, 3)).collect())
            .expect("generator images are tree automorphisms");
        g3.normal_closure(&[image_at_level(&t(), 3)]).expect("same degree")
    })
}

/// Decided at level 3, which suffices because `K` contains `st(3)`.
pub fn member_of_k(g: &Element) -> bool {
    k_image_level3().contains(&image_at_level(g, 3)).expect("level-3 image")
}

pub fn certify(g: &Element) -> Option<KMember> {
    member_of_k(g).then(|| KMember::certified(g.clone()))
}

/// Named subgroups. `St` has no generator list and is handled in quotients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubgroupSpec {
    K,
    B,
    K1,
    Kn(usize),
    St(usize),
    R(usize),
    Q(usize),
    P(usize),
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupSpec::K => write!(f, "K"),
            SubgroupSpec::B => write!(f, "B"),
            SubgroupSpec::K1 => write!(f, "K1"),
            SubgroupSpec::Kn(n) => write!(f, "K{n}"),
            SubgroupSpec::St(n) => write!(f, "st{n}"),
            SubgroupSpec::R(n) => write!(f, "R{n}"),
            SubgroupSpec::Q(n) => write!(f, "Q{n}"),
            SubgroupSpec::P(n) => write!(f, "P{n}"),
        }
    }
}

/// Accepts `K`, `B`, `K1`, `K<n>`, `st<n>`, `R<n>`, `Q<n>`, `P<n>`.
impl FromStr for SubgroupSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<SubgroupSpec, String> {
        let bad = || format!("unknown subgroup '{s}'");
        let (head, digits) = s.split_at(s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len()));
        let n = if digits.is_empty() { None } else { Some(digits.parse::<usize>().map_err(|_| bad())?) };
        Ok(match (head, n) {
            ("K", None) => SubgroupSpec::K,
            ("B", None) => SubgroupSpec::B,
            ("K", Some(1)) => SubgroupSpec::K1,
            ("K", Some(n)) => SubgroupSpec::Kn(n),
            ("st", Some(n)) => SubgroupSpec::St(n),
            ("R", Some(n)) => SubgroupSpec::R(n),
            ("Q", Some(n)) => SubgroupSpec::Q(n),
            ("P", Some(n)) => SubgroupSpec::P(n),
            _ => return Err(bad()),
        })
    }
}

fn x(m: usize) -> (String, Element) {
    (format!("x{m}"), rightmost_embedding(word("acacacac"), m))
}

fn u(m: usize) -> (String, Element) {
    (format!("u{m}"), rightmost_embedding(word("badabada"), m))
}

fn v(m: usize) -> (String, Element) {
    (format!("v{m}"), rightmost_embedding(word("abadabad"), m))
}

fn named(name: &str, e: Element) -> (String, Element) {
    (name.to_string(), e)
}

fn upair() -> (String, Element) {
    named("(u,u)", family_element(Family::UPair, 0).expect("index 0"))
}

fn k_list() -> Vec<(String, Element)> {
    vec![named("t", t()), u(0), v(0)]
}

/// Generator lists with display names, as stated for each subgroup.
pub fn labelled_generators(spec: SubgroupSpec) -> Result<Vec<(String, Element)>, CatalogError> {
    use SubgroupSpec::*;
    Ok(match spec {
        K | R(1) => k_list(),
        B | Q(1) => {
            let mut g = vec![named("b", word("b"))];
            g.extend(k_list());
            g
        }
        K1 => kn_list(1),
        Kn(n) => kn_list(n),
        St(_) => return Err(CatalogError::NoGenerators(spec)),
        R(2) => vec![x(0), u(0), u(1), v(0), upair()],
        R(n) if n >= 3 => {
            let mut g: Vec<_> = (0..=n - 2).map(x).collect();
            g.extend([u(0), u(1), u(2), v(n - 2), upair()]);
            g
        }
        Q(2) => vec![named("b", word("b")), x(0), u(0), v(0), upair()],
        Q(n) if n >= 3 => {
            let mut g = vec![named("b", word("b"))];
            g.extend((0..=n - 2).map(x));
            g.extend([u(0), u(2), v(n - 2), upair()]);
            g
        }
        P(1) => vec![named("d", word("d")), named("c", word("c")), named("d^a", word("ada")), named("c^a", word("aca"))],
        P(n) if n >= 2 => {
            let mut g = vec![named("c", word("c")), named("d", word("d"))];
            g.extend((0..=n - 2).map(x));
            g.extend([u(0), v(n - 2), upair()]);
            g
        }
        R(_) | Q(_) | P(_) => return Err(CatalogError::Undefined(spec)),
    })
}

pub fn subgroup_generators(spec: SubgroupSpec) -> Result<Vec<Element>, CatalogError> {
    Ok(labelled_generators(spec)?.into_iter().map(|(_, e)| e).collect())
}

/// Copies of `t, u, v` below every level-`n` vertex.
fn kn_list(n: usize) -> Vec<(String, Element)> {
    Vertex::level_vertices(n)
        .flat_map(|w| {
            k_list().into_iter().map(move |(name, g)| (format!("{name}@{w}"), embed_at(g, &w)))
        })
        .collect()
}

/// Resolves `t`, `u`, `v`, `uu` for `(u, u)`, and `x<m>`, `u<m>`, `v<m>`.
pub struct CatalogNames {
    pub max_index: usize,
}

impl Default for CatalogNames {
    fn default() -> CatalogNames {
        CatalogNames { max_index: DEFAULT_MAX_LEVEL }
    }
}

impl NameResolver for CatalogNames {
    fn resolve(&self, name: &str) -> Option<Element> {
        match name {
            "t" => return Some(t()),
            "u" => return family_element(Family::U, 0).ok(),
            "v" => return family_element(Family::V, 0).ok(),
            "uu" => return family_element(Family::UPair, 0).ok(),
            _ => {}
        }
        let (head, digits) = name.split_at(1);
        let m: usize = digits.parse().ok()?;
        let family = match head {
            "x" => Family::X,
            "u" => Family::U,
            "v" => Family::V,
            _ => return None,
        };
        family_element_with_max(family, m, self.max_index).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::parse_element_with;

    fn e(s: &str) -> Element {
        parse_element_with(s, &CatalogNames::default()).unwrap()
    }

    #[test]
    fn named_elements_as_pairs() {
        let u0 = family_element(Family::U, 0).unwrap();
        let d = u0.decompose();
        assert!(!d.swap && d.left.equals(&t()) && d.right.is_identity());
        let x1 = family_element(Family::X, 1).unwrap();
        assert!(x1.section_at(&"1".parse().unwrap()).unwrap().equals(&word("acacacac")));
        assert!(x1.section_at(&"0".parse().unwrap()).unwrap().is_identity());
        assert!(dda().equals(&e("d*d^a")));
    }

    #[test]
    fn membership_in_k() {
        for s in ["t", "u", "v", "x0", "x3", "u2", "v5", "uu", "1"] {
            assert!(member_of_k(&e(s)), "{s}");
        }
        for s in ["a", "b", "c", "d", "ab"] {
            assert!(!member_of_k(&e(s)), "{s}");
        }
    }

    #[test]
    fn list_lengths() {
        for n in 2..=8 {
            assert_eq!(subgroup_generators(SubgroupSpec::P(n)).unwrap().len(), n + 4);
        }
        assert_eq!(subgroup_generators(SubgroupSpec::R(2)).unwrap().len(), 5);
        assert_eq!(subgroup_generators(SubgroupSpec::Kn(3)).unwrap().len(), 24);
        assert!(subgroup_generators(SubgroupSpec::St(2)).is_err());
        assert!(subgroup_generators(SubgroupSpec::R(0)).is_err());
        assert_eq!("K3".parse::<SubgroupSpec>().unwrap(), SubgroupSpec::Kn(3));
        assert_eq!("K1".parse::<SubgroupSpec>().unwrap(), SubgroupSpec::K1);
        assert_eq!("st4".parse::<SubgroupSpec>().unwrap(), SubgroupSpec::St(4));
        assert!("Z2".parse::<SubgroupSpec>().is_err());
    }

    #[test]
    fn index_guard() {
        assert!(family_element(Family::X, 11).is_err());
        assert!(family_element(Family::T, 1).is_err());
        assert!(parse_element_with("x11", &CatalogNames::default()).is_err());
    }
}
