use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use super::{Perm, PermError, PermGroup, MAX_PERM_LEVEL};
use crate::config::Config;
use crate::tree::{act_generator, Element, Generator, Node};

/// Image of a generator on level `n`.
pub fn generator_image(g: Generator, n: usize) -> Perm {
    let mut bits = vec![0u8; n];
    let images = (0..1usize << n)
        .map(|x| {
            for (i, b) in bits.iter_mut().enumerate() {
                *b = ((x >> (n - 1 - i)) & 1) as u8;
            }
            act_generator(g, &mut bits);
            bits.iter().fold(0u16, |acc, &b| (acc << 1) | b as u16)
        })
        .collect();
    Perm::from_raw(n, images)
}

/// Permutation induced on level `n`, without a range guard beyond the
/// representable degree. See [`Tower::image_at_level`] for the checked form.
pub fn image_at_level(g: &Element, n: usize) -> Perm {
    assert!(n <= MAX_PERM_LEVEL);
    let gens: Vec<Perm> = Generator::ALL.iter().map(|&x| generator_image(x, n)).collect();
    image_with(g, n, &gens)
}

fn image_with(g: &Element, n: usize, gens: &[Perm]) -> Perm {
    match g.node() {
        Node::Word(w) => {
            let images = (0..1u16 << n)
                .map(|mut y| {
                    for &letter in w.letters().iter().rev() {
                        y = gens[letter as usize].raw()[y as usize];
                    }
                    y
                })
                .collect();
            Perm::from_raw(n, images)
        }
        Node::Pair(l, r) => {
            if n == 0 {
                return Perm::identity(0);
            }
            let lower: Vec<Perm> = Generator::ALL.iter().map(|&x| generator_image(x, n - 1)).collect();
            Perm::combine(&image_with(l, n - 1, &lower), &image_with(r, n - 1, &lower))
        }
        Node::Product(factors) => {
            let mut out = Perm::identity(n);
            for f in factors {
                out = out.compose(&image_with(f, n, gens));
            }
            out
        }
        Node::Inverse(inner) => image_with(inner, n, gens).inverse(),
    }
}

/// Level quotients `G/st(n)` under a level guard, built once and shared.
pub struct Tower {
    config: Config,
    quotients: Mutex<BTreeMap<usize, Arc<PermGroup>>>,
}

impl Default for Tower {
    fn default() -> Tower {
        Tower::new(Config::from_env())
    }
}

impl Tower {
    pub fn new(config: Config) -> Tower {
        Tower { config, quotients: Mutex::new(BTreeMap::new()) }
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn max_level(&self) -> usize {
        self.config.max_level.min(MAX_PERM_LEVEL)
    }

    pub fn check_level(&self, n: usize) -> Result<(), PermError> {
        if n == 0 || n > self.max_level() {
            return Err(PermError::LevelOutOfRange { level: n, max: self.max_level() });
        }
        Ok(())
    }

    pub fn image_at_level(&self, g: &Element, n: usize) -> Result<Perm, PermError> {
        self.check_level(n)?;
        Ok(image_at_level(g, n))
    }

    /// `G/st(n)`, generated by the images of `a, b, c, d`.
    pub fn level_quotient(&self, n: usize) -> Result<Arc<PermGroup>, PermError> {
        self.check_level(n)?;
        if let Some(q) = self.quotients.lock().unwrap().get(&n) {
            return Ok(q.clone());
        }
        let gens = Generator::ALL.iter().map(|&x| generator_image(x, n)).collect();
        let q = Arc::new(PermGroup::new(n, gens)?);
        q.order_log2();
        Ok(self.quotients.lock().unwrap().entry(n).or_insert(q).clone())
    }

    /// Subgroup of `G/st(n)` generated by the images of `elements`.
    pub fn image_group(&self, elements: &[Element], n: usize) -> Result<PermGroup, PermError> {
        self.check_level(n)?;
        PermGroup::new(n, elements.iter().map(|e| image_at_level(e, n)).collect())
    }
}
