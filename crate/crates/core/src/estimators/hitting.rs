//! Hitting probabilities of shadows by the forward or backward walk.

use crate::coarse::Shadow;
use crate::error::{Error, Result};
use crate::space::{q, ModelPoint, ModelSpace, Q};
use crate::walk::{backward_stream, forward_stream, run_trials, stream_rng, StepDistribution};
use crate::word::{Letter, Word};

use super::stats::{wilson, Z95};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// The mu-walk `w_n`.
    Forward,
    /// The reflected walk `w_{-n}`.
    Backward,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HittingEstimate {
    pub horizon: usize,
    pub trials: u64,
    /// First time each trial was in the shadow, if before the horizon.
    pub first_hits: Vec<Option<usize>>,
}

impl HittingEstimate {
    /// Fraction of trials that entered the shadow at or before `h`.
    pub fn at_horizon(&self, h: usize) -> f64 {
        let hits = self.first_hits.iter().filter(|t| t.is_some_and(|t| t <= h)).count();
        hits as f64 / self.trials as f64
    }

    pub fn estimate(&self) -> f64 {
        self.at_horizon(self.horizon)
    }

    pub fn hits(&self) -> u64 {
        self.first_hits.iter().filter(|t| t.is_some()).count() as u64
    }

    pub fn wilson(&self) -> (f64, f64) {
        wilson(self.hits(), self.trials, Z95)
    }
}

/// Common-prefix length of a moving word with a fixed word, updated per letter.
struct PrefixTracker<'a> {
    target: &'a [Letter],
    cp: usize,
}

impl PrefixTracker<'_> {
    fn grow(&mut self, len_before: usize, l: Letter) {
        if self.cp == len_before && self.cp < self.target.len() && self.target[self.cp] == l {
            self.cp += 1;
        }
    }

    fn shrink(&mut self, len_after: usize) {
        self.cp = self.cp.min(len_after);
    }
}

fn split(space: &ModelSpace, p: &ModelPoint) -> Result<(Word, bool)> {
    space.check(p)?;
    match p {
        ModelPoint::Tree(w) => Ok((w.clone(), false)),
        ModelPoint::F2Z2 { word, bit } => Ok((word.clone(), *bit)),
        _ => Err(Error::Unsupported {
            op: "hitting probabilities",
            model: space.model.name(),
        }),
    }
}

/// Probability that the walk enters `s` by time `horizon` (time 0 counts).
///
/// Membership is the exact Gromov-product test; the common prefixes of the
/// walk with the base and center of the shadow are maintained letter by
/// letter, so a step costs `O(|g|)`.
pub fn hitting_prob(
    space: &ModelSpace,
    mu: &StepDistribution,
    s: &Shadow,
    horizon: usize,
    trials: u64,
    seed: u64,
    direction: Direction,
) -> Result<HittingEstimate> {
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let (base, base_bit) = split(space, &s.base)?;
    let (center, center_bit) = split(space, &s.center)?;
    let threshold = s.distance_parameter(space)?;
    let bc = space.dist(&s.base, &s.center)?;
    let walk_mu = match direction {
        Direction::Forward => mu.clone(),
        Direction::Backward => mu.reflected(),
    };
    let inside = |len: usize, bit: bool, cp_b: usize, cp_c: usize| -> bool {
        let d_b = (base.len() + len - 2 * cp_b) as i64 + (bit != base_bit) as i64;
        let d_c = (center.len() + len - 2 * cp_c) as i64 + (bit != center_bit) as i64;
        // 2 (c . y)_b = d(b, c) + d(b, y) - d(c, y)
        bc + q(d_b - d_c) >= q(2) * threshold
    };
    let first_hits = run_trials(trials, |t| {
        let stream = match direction {
            Direction::Forward => forward_stream(t),
            Direction::Backward => backward_stream(t),
        };
        let mut rng = stream_rng(seed, stream);
        let mut w: Vec<Letter> = Vec::new();
        let mut bit = false;
        let mut tb = PrefixTracker { target: base.letters(), cp: 0 };
        let mut tc = PrefixTracker { target: center.letters(), cp: 0 };
        if inside(0, false, 0, 0) {
            return Some(0);
        }
        for k in 1..=horizon {
            let g = walk_mu.sample(&mut rng);
            for l in g.word.letters() {
                if w.last() == Some(&l.inverse()) {
                    w.pop();
                    tb.shrink(w.len());
                    tc.shrink(w.len());
                } else {
                    tb.grow(w.len(), *l);
                    tc.grow(w.len(), *l);
                    w.push(*l);
                }
            }
            bit ^= g.central;
            if inside(w.len(), bit, tb.cp, tc.cp) {
                return Some(k);
            }
        }
        None
    });
    Ok(HittingEstimate {
        horizon,
        trials,
        first_hits,
    })
}

/// Shadows `S_{x_0}(g, |g| - r)` of distance parameter `r` centered at the
/// length-`r + 1` prefix of a power of each support element.
pub fn pilot_shadows(space: &ModelSpace, mu: &StepDistribution, r: usize) -> Vec<Shadow> {
    let mut out: Vec<Shadow> = Vec::new();
    for (g, _) in mu.support() {
        if g.word.is_identity() {
            continue;
        }
        let core = g.word.cyclic_reduce().0;
        let reps = (r + 1) / core.len().max(1) + 2;
        let long = g.word.mul(&core.pow(reps as i64));
        if long.len() < r + 1 {
            continue;
        }
        let center = long.prefix(r + 1);
        let center_pt = match space.model {
            crate::space::Model::FreeTimesZ2 => ModelPoint::F2Z2 { word: center, bit: false },
            _ => ModelPoint::Tree(center),
        };
        let sh = Shadow::new(space.basepoint.clone(), center_pt, q(1));
        if !out.contains(&sh) {
            out.push(sh);
        }
    }
    out
}

/// Largest pilot hitting probability, over both directions, of the shadows
/// of distance parameter `r` from [`pilot_shadows`].
pub fn pilot_max_hitting(
    space: &ModelSpace,
    mu: &StepDistribution,
    r: usize,
    horizon: usize,
    trials: u64,
    seed: u64,
) -> Result<Q> {
    let mut worst = 0.0f64;
    for s in pilot_shadows(space, mu, r) {
        for dir in [Direction::Forward, Direction::Backward] {
            worst = worst.max(hitting_prob(space, mu, &s, horizon, trials, seed, dir)?.estimate());
        }
    }
    Ok(Q::new((worst * 1e6).round() as i64, 1_000_000))
}
