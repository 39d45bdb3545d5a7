use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub name: String,
    pub inverse: bool,
}

impl Letter {
    pub fn new(name: impl Into<String>) -> Self {
        Letter {
            name: name.into(),
            inverse: false,
        }
    }

    pub fn inv(name: impl Into<String>) -> Self {
        Letter {
            name: name.into(),
            inverse: true,
        }
    }
}

/// A word `s_1 s_2 … s_l` in generator names, each letter with exponent ±1.
///
/// Text form: letters separated by whitespace or `*`, inverses written `a^-1`.
/// The empty word is the empty string.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    /// Splits into `(prefix, suffix)` at `k`.
    pub fn split_at(&self, k: usize) -> (Word, Word) {
        (Word(self.0[..k].to_vec()), Word(self.0[k..].to_vec()))
    }

    /// Every word of length `<= max_len` over the names and their inverses,
    /// shortest first, lexicographic within a length.
    pub fn exhaustive<S: AsRef<str>>(names: &[S], max_len: usize) -> Vec<Word> {
        let alphabet = alphabet(names);
        let mut out = vec![Word::empty()];
        let mut frontier = vec![Word::empty()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(frontier.len() * alphabet.len());
            for w in &frontier {
                for l in &alphabet {
                    let mut w2 = w.clone();
                    w2.push(l.clone());
                    next.push(w2);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// A uniformly random word of length exactly `len`.
    pub fn random<S: AsRef<str>, R: Rng>(names: &[S], len: usize, rng: &mut R) -> Word {
        let alphabet = alphabet(names);
        if alphabet.is_empty() {
            return Word::empty();
        }
        Word(
            (0..len)
                .map(|_| alphabet[rng.random_range(0..alphabet.len())].clone())
                .collect(),
        )
    }
}

fn alphabet<S: AsRef<str>>(names: &[S]) -> Vec<Letter> {
    names
        .iter()
        .flat_map(|n| [Letter::new(n.as_ref()), Letter::inv(n.as_ref())])
        .collect()
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&l.name)?;
            if l.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut letters = Vec::new();
        for tok in s.split(|c: char| c.is_whitespace() || c == '*') {
            if tok.is_empty() {
                continue;
            }
            let (name, inverse) = match tok.split_once('^') {
                None => (tok, false),
                Some((name, "-1")) => (name, true),
                Some((name, "1")) => (name, false),
                Some(_) => return Err(Error::InvalidWord(format!("bad exponent in `{tok}`"))),
            };
            if name.is_empty() {
                return Err(Error::InvalidWord(format!("missing name in `{tok}`")));
            }
            letters.push(Letter {
                name: name.to_string(),
                inverse,
            });
        }
        Ok(Word(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let w: Word = "a b^-1 * c".parse().unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.letters()[1], Letter::inv("b"));
        assert_eq!(w.to_string(), "a b^-1 c");
        assert_eq!("".parse::<Word>().unwrap(), Word::empty());
        assert!("a^2".parse::<Word>().is_err());
        assert!("^-1".parse::<Word>().is_err());
    }

    #[test]
    fn exhaustive_counts() {
        // 1 + 4 + 16 words over two names and their inverses
        assert_eq!(Word::exhaustive(&["a", "b"], 2).len(), 21);
        assert_eq!(Word::exhaustive::<&str>(&[], 3).len(), 1);
    }
}
