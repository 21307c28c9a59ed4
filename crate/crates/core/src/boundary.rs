//! Boundary points of the model spaces.
//!
//! Ends of a free-group tree are infinite reduced words. They are either
//! eventually periodic (`prefix . period^inf`, exact) or known only through a
//! finite prefix, which is how limit points of sampled walks are stored.

use std::fmt;

use crate::error::{Error, Result};
use crate::space::Model;
use crate::word::{common_prefix_len, Letter, Word};

/// An end of the Cayley tree of a free group.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum End {
    /// `prefix . period . period . ...`, kept in canonical form: `period` is
    /// primitive and cyclically reduced, and `prefix` does not end with the
    /// last letter of `period`.
    Periodic { prefix: Word, period: Word },
    /// Only the first `prefix.len()` letters are known.
    Truncated { prefix: Word },
}

impl End {
    pub fn periodic(prefix: Word, period: Word) -> Result<End> {
        if period.is_identity() {
            return Err(Error::InvalidBoundary("empty period".into()));
        }
        if !period.is_cyclically_reduced() {
            return Err(Error::InvalidBoundary(format!(
                "period {period} is not cyclically reduced"
            )));
        }
        if let (Some(l), Some(f)) = (prefix.last(), period.first()) {
            if l == f.inverse() {
                return Err(Error::InvalidBoundary(format!(
                    "{prefix} followed by {period} is not reduced"
                )));
            }
        }
        Ok(canonical(prefix, period))
    }

    /// `w^inf` for a cyclically reduced or arbitrary nontrivial `w`; the
    /// conjugator of `w` is absorbed into the prefix.
    pub fn attracting_fixed_point(w: &Word) -> Result<End> {
        let (core, conj) = w.cyclic_reduce();
        if core.is_identity() {
            return Err(Error::InvalidBoundary("identity has no fixed points at infinity".into()));
        }
        End::periodic(conj, core)
    }

    pub fn truncated(prefix: Word) -> End {
        End::Truncated { prefix }
    }

    pub fn parse(s: &str) -> Result<End> {
        let s = s.trim();
        if let Some(open) = s.find('(') {
            let close = s
                .strip_suffix(")^inf")
                .or_else(|| s.strip_suffix(")"))
                .ok_or_else(|| Error::Parse(format!("bad end {s:?}: expected prefix(period)")))?;
            let prefix: Word = if open == 0 { Word::identity() } else { s[..open].parse()? };
            let period: Word = close[open + 1..].parse()?;
            End::periodic(prefix, period)
        } else if let Some(p) = s.strip_suffix("...") {
            Ok(End::truncated(p.parse()?))
        } else {
            Err(Error::Parse(format!(
                "bad end {s:?}: use prefix(period) or prefix..."
            )))
        }
    }

    /// Number of known letters, `None` when the whole end is known.
    pub fn known_depth(&self) -> Option<usize> {
        match self {
            End::Periodic { .. } => None,
            End::Truncated { prefix } => Some(prefix.len()),
        }
    }

    pub fn letter(&self, i: usize) -> Option<Letter> {
        match self {
            End::Periodic { prefix, period } => {
                if i < prefix.len() {
                    Some(prefix.letters()[i])
                } else {
                    let j = (i - prefix.len()) % period.len();
                    Some(period.letters()[j])
                }
            }
            End::Truncated { prefix } => prefix.letters().get(i).copied(),
        }
    }

    /// The first `len` letters.
    pub fn prefix(&self, len: usize) -> Result<Word> {
        let mut letters = Vec::with_capacity(len);
        for i in 0..len {
            letters.push(self.letter(i).ok_or(Error::Unresolved {
                known: i,
                needed: len,
            })?);
        }
        Ok(Word::from_reduced_unchecked(letters))
    }

    /// Length of the common prefix of the end and the finite word `w`.
    pub fn common_prefix_with(&self, w: &Word) -> Result<usize> {
        if let End::Truncated { prefix } = self {
            let cp = common_prefix_len(prefix.letters(), w.letters());
            if cp < prefix.len() || cp == w.len() {
                return Ok(cp);
            }
            return Err(Error::Unresolved {
                known: prefix.len(),
                needed: w.len().min(cp + 1),
            });
        }
        Ok(w.letters()
            .iter()
            .enumerate()
            .take_while(|(i, l)| self.letter(*i) == Some(**l))
            .count())
    }

    /// Length of the common prefix of two ends, `None` when they are equal.
    pub fn common_prefix(&self, other: &End) -> Result<Option<usize>> {
        match (self, other) {
            (End::Periodic { prefix: p1, period: q1 }, End::Periodic { prefix: p2, period: q2 }) => {
                // Equal ends agree on every letter; eventually periodic words
                // that agree on this many letters agree forever.
                let horizon = p1.len().max(p2.len()) + 2 * q1.len() * q2.len() + 1;
                for i in 0..horizon {
                    if self.letter(i) != other.letter(i) {
                        return Ok(Some(i));
                    }
                }
                Ok(None)
            }
            _ => {
                let known = self
                    .known_depth()
                    .into_iter()
                    .chain(other.known_depth())
                    .min()
                    .expect("one end is truncated");
                for i in 0..known {
                    if self.letter(i) != other.letter(i) {
                        return Ok(Some(i));
                    }
                }
                Err(Error::Unresolved {
                    known,
                    needed: known + 1,
                })
            }
        }
    }

    /// The end `w . self`.
    pub fn translate(&self, w: &Word) -> End {
        match self {
            End::Periodic { prefix, period } => {
                // Cancellation consumes at most |w| letters of the tail.
                let copies = w.len() / period.len() + 2;
                let mut tail = prefix.clone();
                for _ in 0..copies {
                    tail.mul_assign(period);
                }
                let moved = w.mul(&tail);
                canonical(moved, period.clone())
            }
            End::Truncated { prefix } => {
                let cancelled = common_prefix_len(
                    w.inv().letters(),
                    prefix.letters(),
                );
                if cancelled >= prefix.len() {
                    // Everything known was cancelled; the remaining letters of
                    // `w` may cancel further against unknown letters.
                    End::truncated(Word::identity())
                } else {
                    End::truncated(w.mul(prefix))
                }
            }
        }
    }
}

/// Moves trailing period letters out of the prefix and makes the period primitive.
fn canonical(mut prefix: Word, period: Word) -> End {
    let mut period_letters = period.letters().to_vec();
    // primitive root
    let n = period_letters.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && (0..n).all(|i| period_letters[i] == period_letters[i % d]) {
            period_letters.truncate(d);
            break;
        }
    }
    while let (Some(l), Some(&t)) = (prefix.last(), period_letters.last()) {
        if l != t {
            break;
        }
        prefix.pop();
        period_letters.rotate_right(1);
    }
    End::Periodic {
        prefix,
        period: Word::from_reduced_unchecked(period_letters),
    }
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            End::Periodic { prefix, period } => {
                if prefix.is_identity() {
                    write!(f, "({period})^inf")
                } else {
                    write!(f, "{prefix}({period})^inf")
                }
            }
            End::Truncated { prefix } => write!(f, "{prefix}..."),
        }
    }
}

impl fmt::Debug for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "End({self})")
    }
}

/// The two ends of the real line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LineEnd {
    Plus,
    Minus,
}

/// A point of the Gromov boundary of one of the models.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryPoint {
    Tree(End),
    Line(LineEnd),
    /// The end of ray `i` of the wedge.
    Wedge(u64),
}

impl BoundaryPoint {
    /// Reads `+inf`/`-inf` on the line, `rayN` on the wedge and an end
    /// such as `ab(a)` on a tree.
    pub fn parse(model: &Model, s: &str) -> Result<BoundaryPoint> {
        let s = s.trim();
        match model {
            Model::Free { .. } => Ok(BoundaryPoint::Tree(End::parse(s)?)),
            Model::Line => match s {
                "+inf" | "inf" => Ok(BoundaryPoint::Line(LineEnd::Plus)),
                "-inf" => Ok(BoundaryPoint::Line(LineEnd::Minus)),
                _ => Err(Error::Parse(format!("line end must be +inf or -inf, got {s:?}"))),
            },
            Model::Wedge => s
                .strip_prefix("ray")
                .and_then(|n| n.parse().ok())
                .filter(|&n| n >= 1)
                .map(BoundaryPoint::Wedge)
                .ok_or_else(|| Error::Parse(format!("wedge end must be rayN with N >= 1, got {s:?}"))),
            _ => Err(Error::Unsupported {
                op: "boundary points",
                model: model.name(),
            }),
        }
    }

    pub fn tree_end(&self) -> Option<&End> {
        match self {
            BoundaryPoint::Tree(e) => Some(e),
            _ => None,
        }
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Tree(e) => write!(f, "{e}"),
            BoundaryPoint::Line(LineEnd::Plus) => f.write_str("+inf"),
            BoundaryPoint::Line(LineEnd::Minus) => f.write_str("-inf"),
            BoundaryPoint::Wedge(i) => write!(f, "ray{i}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form_absorbs_period_letters() {
        let e = End::periodic(w("aa"), w("a")).unwrap();
        assert_eq!(e, End::periodic(Word::identity(), w("a")).unwrap());
        let e = End::periodic(w("b"), w("abab")).unwrap();
        assert_eq!(e.to_string(), "(ba)^inf");
    }

    #[test]
    fn reduced_forever() {
        assert!(End::periodic(w("a"), w("A")).is_err());
        assert!(End::periodic(Word::identity(), w("abA")).is_err());
        let e = End::parse("ab(a)").unwrap();
        let p = e.prefix(40).unwrap();
        assert_eq!(Word::from_letters(p.letters().iter().copied()).len(), 40);
    }

    #[test]
    fn translation_cancels_into_period() {
        let a_inf = End::parse("(a)").unwrap();
        assert_eq!(a_inf.translate(&w("A")), a_inf);
        assert_eq!(a_inf.translate(&w("AAAb")).to_string(), "AAAb(a)^inf");
        assert_eq!(End::parse("b(a)").unwrap().translate(&w("AB")).to_string(), "(a)^inf");
        let e = End::parse("b(a)").unwrap();
        assert_eq!(e.translate(&w("B")), a_inf);
    }

    #[test]
    fn common_prefixes() {
        let x = End::parse("ab(a)").unwrap();
        let y = End::parse("(a)").unwrap();
        assert_eq!(x.common_prefix(&y).unwrap(), Some(1));
        assert_eq!(y.common_prefix(&y.clone()).unwrap(), None);
        let t = End::truncated(w("aab"));
        assert_eq!(t.common_prefix(&y).unwrap(), Some(2));
        assert!(End::truncated(w("aa")).common_prefix(&y).is_err());
        assert_eq!(t.common_prefix_with(&w("aaa")).unwrap(), 2);
        assert!(End::truncated(w("a")).common_prefix_with(&w("aa")).is_err());
    }

    #[test]
    fn truncated_translation_tracks_known_depth() {
        let t = End::truncated(w("abab"));
        assert_eq!(t.translate(&w("BA")), End::truncated(w("ab")));
        assert_eq!(t.translate(&w("bb")), End::truncated(w("bbabab")));
        assert_eq!(t.translate(&w("BABA")), End::truncated(Word::identity()));
    }
}
