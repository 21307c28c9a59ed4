//! Limit points of sample paths as stable boundary prefixes.

use crate::boundary::End;
use crate::error::{Error, Result};
use crate::word::Word;

use super::path::SamplePath;
use super::step::StepDistribution;

/// Default stability margin: twice the longest step. A walk at distance
/// `d + margin` must lose `margin` letters before its length-`d` prefix can
/// change.
pub fn default_margin(mu: &StepDistribution) -> usize {
    2 * mu.max_step_len().max(1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitPrefix {
    pub prefix: Word,
    /// First time from which every location starts with `prefix`.
    pub stable_from: usize,
}

/// The length-`d` prefix of the limit point, read off `w_n` when
/// `|w_n| >= d + margin`.
pub fn limit_point(path: &SamplePath, d: usize, margin: usize) -> Result<LimitPrefix> {
    let n = path.len();
    if path.word_len(n) < d + margin {
        return Err(Error::Unresolved {
            known: path.word_len(n).saturating_sub(margin),
            needed: d,
        });
    }
    let prefix = path.prefix(n, d)?;
    let mut stable_from = n;
    while stable_from > 0 && path.same_prefix(stable_from - 1, n, d) {
        stable_from -= 1;
    }
    Ok(LimitPrefix {
        prefix,
        stable_from,
    })
}

/// The limit point known to depth `|w_n| - margin`.
pub fn limit_end(path: &SamplePath, margin: usize) -> Result<End> {
    let n = path.len();
    let depth = path.word_len(n).checked_sub(margin).ok_or(Error::Unresolved {
        known: 0,
        needed: 1,
    })?;
    Ok(End::truncated(path.prefix(n, depth)?))
}

/// Same as [`limit_point`] for an endpoint word.
pub fn limit_prefix_of(w: &Word, d: usize, margin: usize) -> Option<Word> {
    (w.len() >= d + margin).then(|| w.prefix(d))
}
