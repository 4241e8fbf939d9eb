//! Element expressions.
//!
//! ```text
//! expr    := term ('*' term)*
//! term    := postfix ('^' postfix)*      conjugation, left associative
//! postfix := primary '!'*                inversion
//! primary := name | '1' | '(' expr ')'
//! ```
//!
//! A name made only of the letters `a b c d` is a word; any other name is
//! looked up through a [`NameResolver`].

use super::{Element, TreeError, Word};

/// Supplies elements for names that are not plain generator words.
pub trait NameResolver {
    fn resolve(&self, name: &str) -> Option<Element>;
}

/// Resolver that knows no names besides generator words.
pub struct WordsOnly;

impl NameResolver for WordsOnly {
    fn resolve(&self, _name: &str) -> Option<Element> {
        None
    }
}

pub fn parse_element_with(text: &str, names: &dyn NameResolver) -> Result<Element, TreeError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, names };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected '{}'", p.chars[p.pos])));
    }
    Ok(e)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a dyn NameResolver,
}

impl Parser<'_> {
    fn error(&self, message: String) -> TreeError {
        TreeError::Syntax { position: self.pos, message }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Element, TreeError> {
        let mut factors = vec![self.term()?];
        while self.peek() == Some('*') {
            self.pos += 1;
            factors.push(self.term()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Element::product(factors) })
    }

    fn term(&mut self) -> Result<Element, TreeError> {
        let mut base = self.postfix()?;
        while self.peek() == Some('^') {
            self.pos += 1;
            let by = self.postfix()?;
            base = base.conjugate(&by);
        }
        Ok(base)
    }

    fn postfix(&mut self) -> Result<Element, TreeError> {
        let mut e = self.primary()?;
        while self.peek() == Some('!') {
            self.pos += 1;
            e = e.inverse();
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<Element, TreeError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            Some('1') => {
                self.pos += 1;
                Ok(Element::identity())
            }
            Some(c) if c.is_ascii_lowercase() => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric()) {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                if name.chars().all(|c| "abcd".contains(c)) {
                    return Ok(Element::word(name.parse::<Word>()?));
                }
                self.names
                    .resolve(&name)
                    .ok_or(TreeError::UnknownName { name, position: start })
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Element, TreeError> {
        parse_element_with(s, &WordsOnly)
    }

    #[test]
    fn words_and_products() {
        assert_eq!(parse("abab").unwrap().as_word().unwrap().to_string(), "abab");
        assert!(parse("a*a").unwrap().is_identity());
        assert!(parse(" (ab) * (ba) ").unwrap().is_identity());
        assert!(parse("1").unwrap().is_identity());
    }

    #[test]
    fn conjugation_and_inversion() {
        let lhs = parse("(abab)^a").unwrap();
        let rhs = parse("(abab)!").unwrap();
        assert!(lhs.equals(&rhs));
        // '^' binds tighter than '*'
        assert!(parse("b^a*aba").unwrap().is_identity());
        assert!(parse("(ad)!!*(ad)!").unwrap().is_identity());
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse("ab*"), Err(TreeError::Syntax { position: 3, .. })));
        assert!(matches!(parse("(ab"), Err(TreeError::Syntax { position: 3, .. })));
        assert!(matches!(parse("ab)"), Err(TreeError::Syntax { position: 2, .. })));
        assert!(matches!(parse("ab*zz"), Err(TreeError::UnknownName { position: 3, .. })));
    }
}
