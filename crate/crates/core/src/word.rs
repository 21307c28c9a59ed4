//! Reduced words in free groups and the central extension `F_2 x Z/2`.
//!
//! Words are written with `a`..`z` for generators and uppercase for their
//! inverses, so `abA` is `a b a^-1`. The identity prints as `1`. In the
//! `F_2 x Z/2` alphabet the letter `c` denotes the central involution and is
//! always normalised to a single trailing `c`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A signed generator: `+i` is the `i`-th generator (1-based), `-i` its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter(i8);

impl Letter {
    pub const MAX_RANK: u8 = 26;

    pub fn generator(index: u8) -> Letter {
        assert!(
            index < Self::MAX_RANK,
            "generator index {index} out of range"
        );
        Letter(index as i8 + 1)
    }

    /// Zero-based generator index, ignoring the sign.
    pub fn index(self) -> u8 {
        (self.0.unsigned_abs()) - 1
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a'..='z' => Some(Letter((c as u8 - b'a') as i8 + 1)),
            'A'..='Z' => Some(Letter(-((c as u8 - b'A') as i8 + 1))),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        let base = if self.is_inverse() { b'A' } else { b'a' };
        (base + self.index()) as char
    }

    /// All `2 * rank` letters, in the order `a, A, b, B, ...`.
    pub fn alphabet(rank: u8) -> Vec<Letter> {
        (0..rank)
            .flat_map(|i| {
                let g = Letter::generator(i);
                [g, g.inverse()]
            })
            .collect()
    }
}

// Lexicographic order on words uses a, A, b, B, ...
impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.index(), self.is_inverse()).cmp(&(other.index(), other.is_inverse()))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A freely reduced word.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    /// Builds a word from arbitrary letters, freely reducing as it goes.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut w = Word::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn generator(index: u8) -> Word {
        Word {
            letters: vec![Letter::generator(index)],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Right-multiplies by a single letter, cancelling if possible.
    pub fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inverse()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn pop(&mut self) -> Option<Letter> {
        self.letters.pop()
    }

    /// Largest generator index used plus one (0 for the identity).
    pub fn rank_used(&self) -> u8 {
        self.letters.iter().map(|l| l.index() + 1).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.clone();
        out.mul_assign(other);
        out
    }

    pub fn mul_assign(&mut self, other: &Word) {
        for &l in &other.letters {
            self.push(l);
        }
    }

    pub fn inv(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inv() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out.mul_assign(&base);
        }
        out
    }

    /// Length of the longest common prefix.
    pub fn common_prefix_len(&self, other: &Word) -> usize {
        common_prefix_len(&self.letters, &other.letters)
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word {
            letters: self.letters[..len.min(self.len())].to_vec(),
        }
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.letters.starts_with(&prefix.letters)
    }

    /// Word metric distance `|self^-1 other|`.
    pub fn dist(&self, other: &Word) -> usize {
        self.len() + other.len() - 2 * self.common_prefix_len(other)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => f != l.inverse() || self.len() == 1,
            _ => true,
        }
    }

    /// Splits `self = conjugator * core * conjugator^-1` with `core`
    /// cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k] == self.letters[n - 1 - k].inverse() {
            k += 1;
        }
        let conjugator = Word {
            letters: self.letters[..k].to_vec(),
        };
        let core = Word {
            letters: self.letters[k..n - k].to_vec(),
        };
        (core, conjugator)
    }

    /// All reduced words of length exactly `len` over `rank` generators.
    pub fn sphere(rank: u8, len: usize) -> Vec<Word> {
        let alphabet = Letter::alphabet(rank);
        let mut level = vec![Word::identity()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(level.len() * 3);
            for w in &level {
                for &l in &alphabet {
                    if w.last() != Some(l.inverse()) {
                        let mut x = w.clone();
                        x.letters.push(l);
                        next.push(x);
                    }
                }
            }
            level = next;
        }
        level
    }

    /// All reduced words of length at most `radius`, by increasing length.
    pub fn ball(rank: u8, radius: usize) -> Vec<Word> {
        let alphabet = Letter::alphabet(rank);
        let mut out = vec![Word::identity()];
        let mut start = 0;
        for _ in 0..radius {
            let end = out.len();
            for i in start..end {
                for &l in &alphabet {
                    if out[i].last() != Some(l.inverse()) {
                        let mut x = out[i].clone();
                        x.letters.push(l);
                        out.push(x);
                    }
                }
            }
            start = end;
        }
        out
    }

    pub(crate) fn from_reduced_unchecked(letters: Vec<Letter>) -> Word {
        debug_assert!(letters.windows(2).all(|p| p[0] != p[1].inverse()));
        Word { letters }
    }
}

pub(crate) fn common_prefix_len(a: &[Letter], b: &[Letter]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::identity());
        }
        let letters = s
            .chars()
            .map(|c| Letter::from_char(c).ok_or_else(|| Error::Parse(format!("bad letter {c:?} in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Word::from_letters(letters))
    }
}

/// Which group a textual word is read in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Alphabet {
    /// Free group of the given rank.
    Free(u8),
    /// `F_2 x Z/2` with generators `a`, `b` and the central involution `c`.
    FreeTimesZ2,
}

/// An element of `F_k` or of `F_2 x Z/2`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct GroupElement {
    pub word: Word,
    /// Whether the central involution is present (only meaningful in `F_2 x Z/2`).
    pub central: bool,
}

impl GroupElement {
    pub fn identity() -> GroupElement {
        GroupElement::default()
    }

    pub fn free(word: Word) -> GroupElement {
        GroupElement {
            word,
            central: false,
        }
    }

    pub fn involution() -> GroupElement {
        GroupElement {
            word: Word::identity(),
            central: true,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_identity() && !self.central
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            word: self.word.mul(&other.word),
            central: self.central ^ other.central,
        }
    }

    pub fn inv(&self) -> GroupElement {
        GroupElement {
            word: self.word.inv(),
            central: self.central,
        }
    }

    pub fn pow(&self, n: i64) -> GroupElement {
        GroupElement {
            word: self.word.pow(n),
            central: self.central && n % 2 != 0,
        }
    }

    /// `(core, conjugator)` with `self = conjugator * core * conjugator^-1`.
    /// The central letter stays with the core.
    pub fn cyclic_reduce(&self) -> (GroupElement, GroupElement) {
        let (core, conj) = self.word.cyclic_reduce();
        (
            GroupElement {
                word: core,
                central: self.central,
            },
            GroupElement::free(conj),
        )
    }

    /// Length in the generating set (the involution counts one).
    pub fn len(&self) -> usize {
        self.word.len() + self.central as usize
    }

    pub fn parse(s: &str, alphabet: Alphabet) -> Result<GroupElement> {
        let s = s.trim();
        match alphabet {
            Alphabet::Free(rank) => {
                let word: Word = s.parse()?;
                if word.rank_used() > rank {
                    return Err(Error::Parse(format!("{s:?} uses letters outside F_{rank}")));
                }
                Ok(GroupElement::free(word))
            }
            Alphabet::FreeTimesZ2 => {
                let mut central = false;
                let mut letters = Vec::new();
                if !(s.is_empty() || s == "1") {
                    for ch in s.chars() {
                        match ch {
                            'c' | 'C' => central = !central,
                            'a' | 'A' | 'b' | 'B' => letters.push(Letter::from_char(ch).unwrap()),
                            _ => {
                                return Err(Error::Parse(format!(
                                    "bad letter {ch:?} in F2xZ/2 word {s:?}"
                                )))
                            }
                        }
                    }
                }
                Ok(GroupElement {
                    word: Word::from_letters(letters),
                    central,
                })
            }
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.word.is_identity(), self.central) {
            (true, true) => f.write_str("c"),
            (_, false) => write!(f, "{}", self.word),
            (false, true) => write!(f, "{}c", self.word),
        }
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement({self})")
    }
}

impl FromStr for GroupElement {
    type Err = Error;

    /// Parses in the free alphabet of rank 26; use [`GroupElement::parse`]
    /// for the `F_2 x Z/2` alphabet.
    fn from_str(s: &str) -> Result<GroupElement> {
        GroupElement::parse(s, Alphabet::Free(Letter::MAX_RANK))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn mul_cancels_inverse_pair() {
        assert_eq!(w("ab").mul(&w("BA")), Word::identity());
        assert_eq!(w("ab").mul(&w("Bc")), w("ac"));
    }

    #[test]
    fn inverse_reverses_and_flips() {
        assert_eq!(w("ab").inv(), w("BA"));
        assert_eq!(w("ab").inv().to_string(), "BA");
    }

    #[test]
    fn cyclic_reduce_conjugate() {
        let (core, conj) = w("abA").cyclic_reduce();
        assert_eq!(core, w("b"));
        assert_eq!(conj, w("a"));
        let (core, conj) = w("a").cyclic_reduce();
        assert_eq!((core, conj), (w("a"), Word::identity()));
        let (core, conj) = Word::identity().cyclic_reduce();
        assert!(core.is_identity() && conj.is_identity());
    }

    #[test]
    fn parse_reduces_and_prints_identity() {
        assert_eq!(w("aAb"), w("b"));
        assert_eq!(w("aA").to_string(), "1");
        assert!("a1".parse::<Word>().is_err());
    }

    #[test]
    fn central_letter_normalises() {
        let g = GroupElement::parse("acbc", Alphabet::FreeTimesZ2).unwrap();
        assert_eq!(g.to_string(), "ab");
        let g = GroupElement::parse("cab", Alphabet::FreeTimesZ2).unwrap();
        assert_eq!(g.to_string(), "abc");
        assert!(GroupElement::parse("ad", Alphabet::FreeTimesZ2).is_err());
        assert!(GroupElement::parse("c", Alphabet::Free(2)).is_err());
    }

    #[test]
    fn ball_sizes() {
        // 1 + 4 * (3^r - 1) / 2 reduced words in F_2
        for r in 0..6 {
            assert_eq!(Word::ball(2, r).len(), 1 + 2 * (3usize.pow(r as u32) - 1));
        }
        assert_eq!(Word::sphere(2, 3).len(), 36);
    }

    #[test]
    fn pow_and_distance() {
        assert_eq!(w("ab").pow(-2), w("BABA"));
        assert_eq!(w("ab").dist(&w("ac")), 2);
    }
}
