//! Freely reduced words in the generators and their inverses.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::GroupPresentation;
use crate::error::{Error, Result};
use crate::isom::Sp21Matrix;
use crate::scalar::Scalar;

/// Generator `gen` or its inverse. Ordered `a < A < b < B < …`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inv(self) -> Self {
        Self {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    fn symbol(self) -> char {
        let base = (b'a' + (self.gen % 26) as u8) as char;
        if self.inverse {
            base.to_ascii_uppercase()
        } else {
            base
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[1] != w[0].inv())
    }

    /// Product of the letter matrices, left to right.
    pub fn evaluate<S: Scalar>(&self, g: &GroupPresentation<S>) -> Sp21Matrix<S> {
        self.0
            .iter()
            .fold(Sp21Matrix::identity(), |acc, &l| &acc * &g.letter_matrix(l))
    }
}

/// Space-separated letters, lowercase for generators and uppercase for
/// inverses: `"a B a a"`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{}", l.symbol())?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace()
            .map(|tok| {
                let mut chars = tok.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) if c.is_ascii_alphabetic() => Ok(Letter {
                        gen: (c.to_ascii_lowercase() as u8 - b'a') as usize,
                        inverse: c.is_ascii_uppercase(),
                    }),
                    _ => Err(Error::Parse(format!("bad letter {tok:?} in word {s:?}"))),
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Breadth-first enumeration of reduced words of length `1..=max_len`,
/// shortest first and lexicographic within a length. Each word comes with
/// its matrix, computed from the previous level by one multiplication.
///
/// Holds one level in memory: `2n(2n−1)^(L−1)` matrices at length `L`.
pub struct WordIter<'a, S> {
    group: &'a GroupPresentation<S>,
    letters: Vec<(Letter, Sp21Matrix<S>)>,
    max_len: usize,
    level: Vec<(Word, Sp21Matrix<S>)>,
    pos: usize,
    len: usize,
}

impl<'a, S: Scalar> WordIter<'a, S> {
    pub(crate) fn new(group: &'a GroupPresentation<S>, max_len: usize) -> Self {
        let letters: Vec<_> = group
            .letters()
            .into_iter()
            .map(|l| (l, group.letter_matrix(l)))
            .collect();
        let level = if max_len == 0 {
            Vec::new()
        } else {
            letters.iter().map(|(l, m)| (Word(vec![*l]), m.clone())).collect()
        };
        Self {
            group,
            letters,
            max_len,
            level,
            pos: 0,
            len: 1,
        }
    }

    pub fn group(&self) -> &GroupPresentation<S> {
        self.group
    }

    fn advance_level(&mut self) -> bool {
        if self.len >= self.max_len {
            return false;
        }
        let mut next = Vec::with_capacity(self.level.len() * self.letters.len().saturating_sub(1));
        for (word, m) in &self.level {
            let last = *word.0.last().expect("words are nonempty");
            for (l, lm) in &self.letters {
                if *l == last.inv() {
                    continue;
                }
                let mut w = word.0.clone();
                w.push(*l);
                next.push((Word(w), m * lm));
            }
        }
        self.level = next;
        self.pos = 0;
        self.len += 1;
        !self.level.is_empty()
    }
}

impl<S: Scalar> Iterator for WordIter<'_, S> {
    type Item = (Word, Sp21Matrix<S>);

    fn next(&mut self) -> Option<Self::Item> {
        if self.pos >= self.level.len() && !self.advance_level() {
            return None;
        }
        let item = self.level[self.pos].clone();
        self.pos += 1;
        Some(item)
    }
}

/// Number of reduced words of length `1..=max_len` on `n` generators.
pub fn reduced_word_count(n: usize, max_len: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let mut per_len = 2 * n;
    let mut total = 0;
    for _ in 0..max_len {
        total += per_len;
        per_len *= 2 * n - 1;
    }
    total
}
