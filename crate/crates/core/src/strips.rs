//! Bounded-geometry elements and strips between two ends of a free-group tree.
//!
//! `g` has `(K, R, v)`-bounded geometry for the pair `(alpha, beta)` when
//! `d(g x_0, g v x_0) >= R`, `alpha` lies in the boundary closure of
//! `S_{g v x_0}(g x_0, K)` and `beta` in that of `S_{g x_0}(g v x_0, K)`.

use std::collections::BTreeSet;

use crate::boundary::End;
use crate::coarse::{shadow_contains_end, Shadow};
use crate::error::{Error, Result};
use crate::space::{q, Model, ModelPoint, ModelSpace, Q};
use crate::walk::{limit_end, sample_bi_infinite, BiInfinitePath, StepDistribution};
use crate::word::{GroupElement, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BGParams {
    pub k: Q,
    pub r: Q,
    pub v: Word,
}

impl BGParams {
    pub fn new(k: Q, r: Q, v: Word) -> Result<BGParams> {
        if k <= q(0) || r <= q(0) {
            return Err(Error::Config("K and R must be positive".into()));
        }
        if q(v.len() as i64) < r {
            return Err(Error::Config(format!("|v| = {} is below R = {r}", v.len())));
        }
        Ok(BGParams { k, r, v })
    }

    /// Whether every bounded-geometry point lies within `K` of the line
    /// between the two ends (true in trees once `|v| > 2K`).
    pub fn near_line(&self) -> bool {
        q(self.v.len() as i64) > q(2) * self.k
    }
}

/// Two distinct ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryPair {
    pub alpha: End,
    pub beta: End,
    /// Length of the common prefix of the two ends.
    divergence: usize,
}

impl BoundaryPair {
    pub fn new(alpha: End, beta: End) -> Result<BoundaryPair> {
        match alpha.common_prefix(&beta)? {
            None => Err(Error::InvalidBoundary(format!("{alpha} and {beta} coincide"))),
            Some(divergence) => Ok(BoundaryPair {
                alpha,
                beta,
                divergence,
            }),
        }
    }

    pub fn divergence(&self) -> usize {
        self.divergence
    }

    pub fn translate(&self, g: &Word) -> Result<BoundaryPair> {
        BoundaryPair::new(self.alpha.translate(g), self.beta.translate(g))
    }
}

fn require_free(space: &ModelSpace) -> Result<u8> {
    match space.model {
        Model::Free { rank } => Ok(rank),
        _ => Err(Error::Unsupported {
            op: "bounded geometry",
            model: space.model.name(),
        }),
    }
}

pub fn is_bounded_geometry(space: &ModelSpace, g: &Word, pair: &BoundaryPair, params: &BGParams) -> Result<bool> {
    require_free(space)?;
    let gx = ModelPoint::Tree(g.clone());
    let gvx = ModelPoint::Tree(g.mul(&params.v));
    if space.dist(&gx, &gvx)? < params.r {
        return Ok(false);
    }
    let s1 = Shadow::new(gvx.clone(), gx.clone(), params.k);
    if !shadow_contains_end(space, &s1, &pair.alpha)? {
        return Ok(false);
    }
    let s2 = Shadow::new(gx, gvx, params.k);
    shadow_contains_end(space, &s2, &pair.beta)
}

/// Depth to which both ends must be known to decide membership of every
/// element of length at most `r`.
pub fn required_depth(params: &BGParams, r: usize) -> usize {
    let k = params.k.ceil().to_integer().max(0) as usize;
    r + k + params.v.len() + 1
}

/// All bounded-geometry elements of length at most `r`.
///
/// When [`BGParams::near_line`] holds the candidates are the elements
/// within `K` of the line vertices of length at most `r + K`; otherwise
/// every word of length at most `r` is tested, subject to `budget`.
pub fn enumerate_bg_in_ball(
    space: &ModelSpace,
    pair: &BoundaryPair,
    params: &BGParams,
    r: usize,
    budget: usize,
) -> Result<Vec<Word>> {
    if params.near_line() {
        enumerate_near_line(space, pair, params, r)
    } else {
        enumerate_naive(space, pair, params, r, budget)
    }
}

fn enumerate_near_line(space: &ModelSpace, pair: &BoundaryPair, params: &BGParams, r: usize) -> Result<Vec<Word>> {
    let rank = require_free(space)?;
    let k = params.k.floor().to_integer().max(0) as usize;
    let mut candidates = BTreeSet::new();
    let neighbourhood = Word::ball(rank, k);
    let top = r + k;
    for end in [&pair.alpha, &pair.beta] {
        for len in pair.divergence..=top {
            let p = end.prefix(len)?;
            for u in &neighbourhood {
                let g = p.mul(u);
                if g.len() <= r {
                    candidates.insert(g);
                }
            }
        }
    }
    let mut out = Vec::new();
    for g in candidates {
        if is_bounded_geometry(space, &g, pair, params)? {
            out.push(g);
        }
    }
    Ok(out)
}

/// Exhaustive test of every word of length at most `r`.
pub fn enumerate_naive(
    space: &ModelSpace,
    pair: &BoundaryPair,
    params: &BGParams,
    r: usize,
    budget: usize,
) -> Result<Vec<Word>> {
    let rank = require_free(space)?;
    let k = 2 * rank as u128;
    let size: u128 = 1 + (1..=r as u32).map(|l| k * (k - 1).pow(l - 1)).sum::<u128>();
    if size > budget as u128 {
        return Err(Error::BudgetExceeded { budget });
    }
    let mut out = Vec::new();
    for g in Word::ball(rank, r) {
        if is_bounded_geometry(space, &g, pair, params)? {
            out.push(g);
        }
    }
    out.sort();
    Ok(out)
}

/// Number of bounded-geometry points in `B(x, 4K)`.
pub fn per_ball_multiplicity(space: &ModelSpace, pair: &BoundaryPair, params: &BGParams, x: &Word) -> Result<usize> {
    let rank = require_free(space)?;
    let radius = (q(4) * params.k).floor().to_integer().max(0) as usize;
    let mut count = 0;
    for u in Word::ball(rank, radius) {
        if is_bounded_geometry(space, &x.mul(&u), pair, params)? {
            count += 1;
        }
    }
    Ok(count)
}

/// `#{g : |g| <= l, |y^-1 g y| <= l}`: elements moving both `e` and `y` by
/// at most `l`.
///
/// For `|y| >= 2l` the prefix `y_l` of length `l` lies on `g [e, y]`, so
/// `g = y_l y_i^-1` for a prefix `y_i` of `y`; only those `|y| + 1`
/// candidates are tested.
pub fn displacement_count(y: &Word, l: usize) -> Result<usize> {
    if y.len() < 2 * l {
        return Err(Error::Config(format!("|y| = {} must be at least 2l = {}", y.len(), 2 * l)));
    }
    let yl = y.prefix(l);
    let yinv = y.inv();
    let mut set = BTreeSet::new();
    for i in 0..=y.len() {
        let g = yl.mul(&y.prefix(i).inv());
        if g.len() <= l && yinv.mul(&g).mul(y).len() <= l {
            set.insert(g);
        }
    }
    Ok(set.len())
}

/// Brute-force version of [`displacement_count`] over the ball of radius `l`.
pub fn displacement_count_naive(rank: u8, y: &Word, l: usize) -> usize {
    let yinv = y.inv();
    Word::ball(rank, l)
        .into_iter()
        .filter(|g| yinv.mul(g).mul(y).len() <= l)
        .count()
}

/// The acylindricity constant `N(l)` of the free group acting on its tree
/// with separation `2l + 1`: every element counted by
/// [`displacement_count`] has the form `y_l y_i^-1` with `|l - i| <= l`, so
/// at most `2l + 1` of them exist, and `y = a^(2l+1)` attains the bound.
pub fn acylindricity_constant(l: usize) -> usize {
    let y = Word::generator(0).pow(2 * l as i64 + 1);
    displacement_count(&y, l).expect("long enough")
}

/// Number of balls of radius `4K`, centered every `6K` along the line, that
/// cover the part of the strip in `B(x_0, r)`.
pub fn cover_factor(params: &BGParams, r: usize) -> usize {
    let span = q(2) * (q(r as i64) + params.k);
    (span / (q(6) * params.k)).floor().to_integer() as usize + 1
}

/// The pair `(backward limit, forward limit)` of a bi-infinite path.
pub fn walk_pair(path: &BiInfinitePath, margin: usize) -> Result<BoundaryPair> {
    BoundaryPair::new(limit_end(&path.backward, margin)?, limit_end(&path.forward, margin)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StripSeries {
    /// `(n, (1/n) ln(1 + |S(alpha, beta) ∩ B_G(1, d(x_0, w_n x_0))|))`.
    pub points: Vec<(usize, f64)>,
    /// Fraction of times `1 <= n <= n_max` with `w_n` in the strip.
    pub strip_time_density: f64,
    /// Whether the identity itself has bounded geometry.
    pub identity_in_strip: bool,
}

/// Strip-criterion series along one bi-infinite walk.
pub fn strip_criterion_series(
    space: &ModelSpace,
    path: &BiInfinitePath,
    params: &BGParams,
    ns: &[usize],
    margin: usize,
) -> Result<StripSeries> {
    let pair = walk_pair(path, margin)?;
    let n_max = ns.iter().copied().max().unwrap_or(0);
    if n_max > path.forward.len() {
        return Err(Error::ShiftTooLong {
            shift: n_max,
            len: path.forward.len(),
        });
    }
    let mut points = Vec::with_capacity(ns.len());
    for &n in ns {
        let r = path.forward.word_len(n);
        let count = enumerate_bg_in_ball(space, &pair, params, r, 1 << 22)?.len();
        points.push((n, (1.0 + count as f64).ln() / n.max(1) as f64));
    }
    let mut in_strip = 0;
    for n in 1..=n_max {
        if is_bounded_geometry(space, &path.forward.location(n).word, &pair, params)? {
            in_strip += 1;
        }
    }
    Ok(StripSeries {
        points,
        strip_time_density: if n_max == 0 { 0.0 } else { in_strip as f64 / n_max as f64 },
        identity_in_strip: is_bounded_geometry(space, &Word::identity(), &pair, params)?,
    })
}

/// Samples trial `trial` with both halves long enough that the limit ends
/// are known past the largest ball.
pub fn strip_trial(
    space: &ModelSpace,
    mu: &StepDistribution,
    params: &BGParams,
    ns: &[usize],
    margin: usize,
    seed: u64,
    trial: u64,
) -> Result<StripSeries> {
    let n_max = ns.iter().copied().max().unwrap_or(0);
    let mut len = 2 * n_max.max(16);
    loop {
        let path = sample_bi_infinite(mu, len, len, seed, trial);
        match strip_criterion_series(space, &path, params, ns, margin) {
            Err(Error::Unresolved { .. }) if len < 64 * n_max.max(16) => len *= 2,
            other => return other,
        }
    }
}

pub fn strip_elements(space: &ModelSpace, pair: &BoundaryPair, params: &BGParams, r: usize) -> Result<Vec<GroupElement>> {
    Ok(enumerate_bg_in_ball(space, pair, params, r, 1 << 22)?
        .into_iter()
        .map(GroupElement::free)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn end(s: &str) -> End {
        End::parse(s).unwrap()
    }

    fn axis() -> (ModelSpace, BoundaryPair, BGParams) {
        (
            ModelSpace::free(2),
            BoundaryPair::new(end("(A)"), end("(a)")).unwrap(),
            BGParams::new(q(1), q(3), w("aaaa")).unwrap(),
        )
    }

    #[test]
    fn axis_examples() {
        let (f2, pair, params) = axis();
        assert!(is_bounded_geometry(&f2, &Word::identity(), &pair, &params).unwrap());
        let off = BoundaryPair::new(end("(A)"), end("(b)")).unwrap();
        assert!(!is_bounded_geometry(&f2, &Word::identity(), &off, &params).unwrap());
        assert!(BoundaryPair::new(end("(a)"), end("a(a)")).is_err());
    }

    #[test]
    fn axis_strip_is_the_axis() {
        let (f2, pair, params) = axis();
        for r in 0..8 {
            let got = enumerate_bg_in_ball(&f2, &pair, &params, r, 1 << 20).unwrap();
            let naive = enumerate_naive(&f2, &pair, &params, r, 1 << 20).unwrap();
            assert_eq!(got, naive, "r = {r}");
            assert_eq!(got.len(), 2 * r + 1);
        }
        assert_eq!(enumerate_bg_in_ball(&f2, &pair, &params, 0, 10).unwrap(), vec![Word::identity()]);
    }

    /// Dual route on off-axis pairs with `|v| > 2K`.
    #[test]
    fn line_neighbourhood_matches_naive() {
        let f2 = ModelSpace::free(2);
        let pairs = [("b(A)", "ab(a)"), ("(ab)", "(BA)"), ("Ab(bA)", "a(b)"), ("(B)", "(a)")];
        let params = [
            BGParams::new(q(1), q(3), w("aba")).unwrap(),
            BGParams::new(q(1), q(2), w("ab")).unwrap(),
            BGParams::new(q(1), q(3), w("aaa")).unwrap(),
        ];
        for (a, b) in pairs {
            let pair = BoundaryPair::new(end(a), end(b)).unwrap();
            for p in &params {
                for r in 0..=6 {
                    let naive = enumerate_naive(&f2, &pair, p, r, 1 << 20).unwrap();
                    let got = enumerate_bg_in_ball(&f2, &pair, p, r, 1 << 20).unwrap();
                    assert_eq!(got, naive, "{a} {b} {p:?} r = {r}");
                }
            }
        }
    }

    #[test]
    fn equivariance() {
        let f2 = ModelSpace::free(2);
        let pair = BoundaryPair::new(end("b(A)"), end("ab(a)")).unwrap();
        let params = BGParams::new(q(1), q(3), w("aba")).unwrap();
        for g in ["a", "Ba", "bab"] {
            let g = w(g);
            let moved = pair.translate(&g).unwrap();
            for h in Word::ball(2, 4) {
                assert_eq!(
                    is_bounded_geometry(&f2, &h, &pair, &params).unwrap(),
                    is_bounded_geometry(&f2, &g.mul(&h), &moved, &params).unwrap()
                );
            }
        }
    }

    #[test]
    fn acylindricity_counts() {
        for l in 1..=3 {
            let n = acylindricity_constant(l);
            assert_eq!(n, 2 * l + 1);
            for len in [2 * l, 2 * l + 1] {
                for y in Word::sphere(2, len) {
                    let fast = displacement_count(&y, l).unwrap();
                    assert_eq!(fast, displacement_count_naive(2, &y, l), "{y} l = {l}");
                    assert!(fast <= n);
                }
            }
        }
        assert_eq!(acylindricity_constant(22), 45);
    }

    #[test]
    fn multiplicity() {
        let (f2, pair, params) = axis();
        assert_eq!(per_ball_multiplicity(&f2, &pair, &params, &Word::identity()).unwrap(), 9);
        assert_eq!(per_ball_multiplicity(&f2, &pair, &params, &w("bbbbbbbbbb")).unwrap(), 0);
        assert!(per_ball_multiplicity(&f2, &pair, &params, &w("aaab")).unwrap() >= 1);
    }

    #[test]
    fn ray_walk_strip() {
        let f2 = ModelSpace::free(2);
        let mu = StepDistribution::point_mass(
            crate::word::Alphabet::Free(2),
            GroupElement::free(Word::generator(0)),
        )
        .unwrap();
        let (_, _, params) = axis();
        let s = strip_trial(&f2, &mu, &params, &[10, 100, 400], 2, 0, 0).unwrap();
        assert!(s.identity_in_strip);
        assert_eq!(s.strip_time_density, 1.0);
        let last = s.points.last().unwrap();
        assert!((last.1 - (1.0 + 801.0f64).ln() / 400.0).abs() < 1e-12);
    }
}
