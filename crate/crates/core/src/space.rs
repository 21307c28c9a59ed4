//! The five exactly representable model spaces and the group actions on them.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Alphabet, GroupElement, Word};

/// Exact scalar used for every distance, Gromov product and horofunction value.
pub type Q = Ratio<i64>;

pub fn q(n: i64) -> Q {
    Q::from_integer(n)
}

/// `num / den` as an exact scalar.
pub fn qr(num: i64, den: i64) -> Q {
    Q::new(num, den)
}

/// Parses `3`, `-3/2` or `1.25` into an exact rational.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.len() > 12 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.trim_start().starts_with('-');
        let int_part: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let den = 10i64.pow(frac.len() as u32);
        let frac_part: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let magnitude = Q::from_integer(int_part.abs()) + Q::new(frac_part, den);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    s.parse::<i64>().map(Q::from_integer).map_err(|_| bad())
}

pub fn q_to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// A point of one of the model spaces.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelPoint {
    /// Vertex of the Cayley tree of a free group.
    Tree(Word),
    /// Point at distance `s` along ray `ray` of the countable wedge of rays.
    /// The basepoint is always stored as `ray = 0, s = 0`.
    Ray { ray: u64, s: Q },
    Line(Q),
    /// Vertex of `Z x Z/2` with the L1 metric.
    ZxZ2 { n: i64, bit: bool },
    /// Vertex of the Cayley graph of `F_2 x Z/2`.
    F2Z2 { word: Word, bit: bool },
}

impl ModelPoint {
    pub fn tree(s: &str) -> ModelPoint {
        ModelPoint::Tree(s.parse().expect("valid word"))
    }

    /// Wedge point with the basepoint identification applied.
    pub fn ray(ray: u64, s: Q) -> ModelPoint {
        if s.is_zero() {
            ModelPoint::Ray { ray: 0, s }
        } else {
            ModelPoint::Ray { ray, s }
        }
    }

    pub fn line(x: i64) -> ModelPoint {
        ModelPoint::Line(q(x))
    }

    pub fn as_word(&self) -> Option<&Word> {
        match self {
            ModelPoint::Tree(w) | ModelPoint::F2Z2 { word: w, .. } => Some(w),
            _ => None,
        }
    }
}

impl fmt::Display for ModelPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelPoint::Tree(w) => write!(f, "{w}"),
            ModelPoint::Ray { ray, s } => write!(f, "{ray}:{s}"),
            ModelPoint::Line(x) => write!(f, "{x}"),
            ModelPoint::ZxZ2 { n, bit } => write!(f, "{n},{}", *bit as u8),
            ModelPoint::F2Z2 { word, bit } => write!(
                f,
                "{}",
                GroupElement {
                    word: word.clone(),
                    central: *bit
                }
            ),
        }
    }
}

impl fmt::Debug for ModelPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModelPoint({self})")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    /// Cayley tree of the free group of the given rank.
    Free { rank: u8 },
    /// Countable wedge of rays joined at the basepoint.
    Wedge,
    Line,
    /// `Z x Z/2` with the L1 metric.
    ZxZ2,
    /// Cayley graph of `F_2 x Z/2` for the generators `a, b, c`.
    FreeTimesZ2,
}

impl Model {
    pub fn name(&self) -> String {
        match self {
            Model::Free { rank } => format!("F{rank}"),
            Model::Wedge => "wedge".into(),
            Model::Line => "line".into(),
            Model::ZxZ2 => "ZxZ/2".into(),
            Model::FreeTimesZ2 => "F2xZ/2".into(),
        }
    }

    /// Tree-like models whose ends are infinite reduced words.
    pub fn is_free(&self) -> bool {
        matches!(self, Model::Free { .. })
    }

    /// Models whose points form a lattice (all geodesic points are vertices).
    pub fn is_discrete(&self) -> bool {
        !matches!(self, Model::Wedge | Model::Line)
    }

    pub fn acts(&self) -> bool {
        matches!(self, Model::Free { .. } | Model::FreeTimesZ2)
    }

    pub fn alphabet(&self) -> Option<Alphabet> {
        match self {
            Model::Free { rank } => Some(Alphabet::Free(*rank)),
            Model::FreeTimesZ2 => Some(Alphabet::FreeTimesZ2),
            _ => None,
        }
    }
}

/// Accepts the names printed by [`Model::name`] (`F2`, `wedge`, `line`,
/// `ZxZ/2`, `F2xZ/2`), case-insensitively and with or without the slash.
impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Model> {
        let t = s.trim().to_ascii_lowercase().replace('/', "");
        match t.as_str() {
            "wedge" => return Ok(Model::Wedge),
            "line" => return Ok(Model::Line),
            "zxz2" => return Ok(Model::ZxZ2),
            "f2xz2" => return Ok(Model::FreeTimesZ2),
            _ => {}
        }
        let rank = t
            .strip_prefix('f')
            .and_then(|r| r.parse::<u8>().ok())
            .filter(|r| (1..=crate::word::Letter::MAX_RANK).contains(r))
            .ok_or_else(|| Error::Parse(format!("unknown model {s:?}")))?;
        Ok(Model::Free { rank })
    }
}

/// A metric space whose distances are exact.
///
/// The five built-in models implement this through [`ModelSpace`]; user
/// models can implement it to reuse the Gromov-product helpers in
/// [`crate::coarse`].
pub trait Metric {
    type Point;

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> Result<Q>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSpace {
    pub model: Model,
    /// Hyperbolicity constant: 0 for trees and the line, 1 for the product models.
    pub delta: Q,
    pub basepoint: ModelPoint,
}

impl ModelSpace {
    pub fn new(model: Model) -> ModelSpace {
        let (delta, basepoint) = match model {
            Model::Free { rank } => {
                assert!(
                    (1..=crate::word::Letter::MAX_RANK).contains(&rank),
                    "free group rank {rank} out of range"
                );
                (q(0), ModelPoint::Tree(Word::identity()))
            }
            Model::Wedge => (q(0), ModelPoint::ray(0, q(0))),
            Model::Line => (q(0), ModelPoint::Line(q(0))),
            Model::ZxZ2 => (q(1), ModelPoint::ZxZ2 { n: 0, bit: false }),
            Model::FreeTimesZ2 => (
                q(1),
                ModelPoint::F2Z2 {
                    word: Word::identity(),
                    bit: false,
                },
            ),
        };
        ModelSpace {
            model,
            delta,
            basepoint,
        }
    }

    pub fn free(rank: u8) -> ModelSpace {
        ModelSpace::new(Model::Free { rank })
    }

    pub fn wedge() -> ModelSpace {
        ModelSpace::new(Model::Wedge)
    }

    pub fn line() -> ModelSpace {
        ModelSpace::new(Model::Line)
    }

    pub fn zxz2() -> ModelSpace {
        ModelSpace::new(Model::ZxZ2)
    }

    pub fn f2z2() -> ModelSpace {
        ModelSpace::new(Model::FreeTimesZ2)
    }

    pub fn contains(&self, p: &ModelPoint) -> bool {
        match (&self.model, p) {
            (Model::Free { rank }, ModelPoint::Tree(w)) => w.rank_used() <= *rank,
            (Model::Wedge, ModelPoint::Ray { ray, s }) => {
                !s.is_negative() && (!s.is_zero() || *ray == 0)
            }
            (Model::Line, ModelPoint::Line(_)) => true,
            (Model::ZxZ2, ModelPoint::ZxZ2 { .. }) => true,
            (Model::FreeTimesZ2, ModelPoint::F2Z2 { word, .. }) => word.rank_used() <= 2,
            _ => false,
        }
    }

    pub fn check(&self, p: &ModelPoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::ModelMismatch {
                model: self.model.name(),
                point: p.to_string(),
            })
        }
    }

    /// Reads a point in the canonical text encoding of this model.
    pub fn parse_point(&self, s: &str) -> Result<ModelPoint> {
        let s = s.trim();
        let p = match self.model {
            Model::Free { .. } => ModelPoint::Tree(s.parse()?),
            Model::FreeTimesZ2 => {
                let g = GroupElement::parse(s, Alphabet::FreeTimesZ2)?;
                ModelPoint::F2Z2 {
                    word: g.word,
                    bit: g.central,
                }
            }
            Model::Line => ModelPoint::Line(parse_q(s)?),
            Model::Wedge => {
                let (ray, t) = s
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("wedge point must be ray:s, got {s:?}")))?;
                let ray = ray
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad ray index in {s:?}")))?;
                ModelPoint::ray(ray, parse_q(t)?)
            }
            Model::ZxZ2 => {
                let (n, b) = s
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("ZxZ/2 point must be n,bit, got {s:?}")))?;
                let n = n
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad integer in {s:?}")))?;
                let bit = match b.trim() {
                    "0" => false,
                    "1" => true,
                    _ => return Err(Error::Parse(format!("bad bit in {s:?}"))),
                };
                ModelPoint::ZxZ2 { n, bit }
            }
        };
        self.check(&p)?;
        Ok(p)
    }

    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let alphabet = self.model.alphabet().ok_or(Error::Unsupported {
            op: "group elements",
            model: self.model.name(),
        })?;
        GroupElement::parse(s, alphabet)
    }

    pub fn dist(&self, x: &ModelPoint, y: &ModelPoint) -> Result<Q> {
        self.check(x)?;
        self.check(y)?;
        Ok(match (x, y) {
            (ModelPoint::Tree(a), ModelPoint::Tree(b)) => q(a.dist(b) as i64),
            (ModelPoint::Ray { ray: i, s }, ModelPoint::Ray { ray: j, s: t }) => {
                if i == j || s.is_zero() || t.is_zero() {
                    (*s - *t).abs()
                } else {
                    *s + *t
                }
            }
            (ModelPoint::Line(a), ModelPoint::Line(b)) => (*a - *b).abs(),
            (ModelPoint::ZxZ2 { n, bit }, ModelPoint::ZxZ2 { n: m, bit: c }) => {
                q((n - m).abs() + (bit != c) as i64)
            }
            (ModelPoint::F2Z2 { word: a, bit }, ModelPoint::F2Z2 { word: b, bit: c }) => {
                q(a.dist(b) as i64 + (bit != c) as i64)
            }
            _ => unreachable!("check() guarantees matching variants"),
        })
    }

    /// A geodesic from `x` to `y`.
    ///
    /// Discrete models list every vertex. The line lists its endpoints and the
    /// wedge additionally lists the basepoint when the path changes rays.
    pub fn geodesic(&self, x: &ModelPoint, y: &ModelPoint) -> Result<Vec<ModelPoint>> {
        self.check(x)?;
        self.check(y)?;
        if x == y {
            return Ok(vec![x.clone()]);
        }
        Ok(match (x, y) {
            (ModelPoint::Tree(a), ModelPoint::Tree(b)) => {
                tree_path(a, b).into_iter().map(ModelPoint::Tree).collect()
            }
            (ModelPoint::F2Z2 { word: a, bit }, ModelPoint::F2Z2 { word: b, bit: c }) => {
                let mut pts: Vec<ModelPoint> = tree_path(a, b)
                    .into_iter()
                    .map(|w| ModelPoint::F2Z2 { word: w, bit: *bit })
                    .collect();
                if bit != c {
                    pts.push(y.clone());
                }
                pts
            }
            (ModelPoint::ZxZ2 { n, bit }, ModelPoint::ZxZ2 { n: m, bit: c }) => {
                let step = if m >= n { 1 } else { -1 };
                let mut pts = Vec::new();
                let mut k = *n;
                loop {
                    pts.push(ModelPoint::ZxZ2 { n: k, bit: *bit });
                    if k == *m {
                        break;
                    }
                    k += step;
                }
                if bit != c {
                    pts.push(y.clone());
                }
                pts
            }
            (ModelPoint::Line(_), ModelPoint::Line(_)) => vec![x.clone(), y.clone()],
            (ModelPoint::Ray { ray: i, s }, ModelPoint::Ray { ray: j, s: t }) => {
                if i == j || s.is_zero() || t.is_zero() {
                    vec![x.clone(), y.clone()]
                } else {
                    vec![x.clone(), self.basepoint.clone(), y.clone()]
                }
            }
            _ => unreachable!(),
        })
    }

    /// The point at distance `t` from `x` along the geodesic to `y`.
    ///
    /// Discrete models require `t` to be an integer.
    pub fn interpolate(&self, x: &ModelPoint, y: &ModelPoint, t: Q) -> Result<ModelPoint> {
        let d = self.dist(x, y)?;
        if t.is_negative() || t > d {
            return Err(Error::Invariant(format!("interpolation parameter {t} outside [0, {d}]")));
        }
        match (x, y) {
            (ModelPoint::Line(a), ModelPoint::Line(b)) => {
                Ok(ModelPoint::Line(if b >= a { *a + t } else { *a - t }))
            }
            (ModelPoint::Ray { ray: i, s }, ModelPoint::Ray { ray: j, s: u }) => {
                if i == j || s.is_zero() || u.is_zero() {
                    let ray = if s.is_zero() { *j } else { *i };
                    let pos = if u >= s { *s + t } else { *s - t };
                    Ok(ModelPoint::ray(ray, pos))
                } else if t <= *s {
                    Ok(ModelPoint::ray(*i, *s - t))
                } else {
                    Ok(ModelPoint::ray(*j, t - *s))
                }
            }
            _ => {
                if !t.is_integer() {
                    return Err(Error::Invariant(format!(
                        "non-integer interpolation {t} in a discrete model"
                    )));
                }
                let path = self.geodesic(x, y)?;
                Ok(path[t.to_integer() as usize].clone())
            }
        }
    }

    pub fn act(&self, g: &GroupElement, x: &ModelPoint) -> Result<ModelPoint> {
        self.check(x)?;
        let unsupported = || Error::Unsupported {
            op: "group action",
            model: self.model.name(),
        };
        match (&self.model, x) {
            (Model::Free { rank }, ModelPoint::Tree(w)) => {
                if g.central || g.word.rank_used() > *rank {
                    return Err(Error::ModelMismatch {
                        model: self.model.name(),
                        point: g.to_string(),
                    });
                }
                Ok(ModelPoint::Tree(g.word.mul(w)))
            }
            (Model::FreeTimesZ2, ModelPoint::F2Z2 { word, bit }) => {
                if g.word.rank_used() > 2 {
                    return Err(Error::ModelMismatch {
                        model: self.model.name(),
                        point: g.to_string(),
                    });
                }
                Ok(ModelPoint::F2Z2 {
                    word: g.word.mul(word),
                    bit: bit ^ g.central,
                })
            }
            _ => Err(unsupported()),
        }
    }

    /// The orbit point `g x_0`.
    pub fn orbit(&self, g: &GroupElement) -> Result<ModelPoint> {
        self.act(g, &self.basepoint)
    }

    /// All vertices within `radius` of `center` (discrete models only).
    pub fn ball(&self, center: &ModelPoint, radius: usize) -> Result<Vec<ModelPoint>> {
        self.check(center)?;
        match (&self.model, center) {
            (Model::Free { rank }, ModelPoint::Tree(c)) => Ok(Word::ball(*rank, radius)
                .into_iter()
                .map(|w| ModelPoint::Tree(c.mul(&w)))
                .collect()),
            (Model::FreeTimesZ2, ModelPoint::F2Z2 { word, bit }) => {
                let mut out = Vec::new();
                for w in Word::ball(2, radius) {
                    out.push(ModelPoint::F2Z2 {
                        word: word.mul(&w),
                        bit: *bit,
                    });
                    if w.len() < radius {
                        out.push(ModelPoint::F2Z2 {
                            word: word.mul(&w),
                            bit: !*bit,
                        });
                    }
                }
                Ok(out)
            }
            (Model::ZxZ2, ModelPoint::ZxZ2 { n, bit }) => {
                let r = radius as i64;
                let mut out = Vec::new();
                for k in -r..=r {
                    out.push(ModelPoint::ZxZ2 { n: n + k, bit: *bit });
                    if k.abs() < r {
                        out.push(ModelPoint::ZxZ2 { n: n + k, bit: !*bit });
                    }
                }
                Ok(out)
            }
            _ => Err(Error::Unsupported {
                op: "ball enumeration",
                model: self.model.name(),
            }),
        }
    }
}

impl Metric for ModelSpace {
    type Point = ModelPoint;

    fn distance(&self, x: &ModelPoint, y: &ModelPoint) -> Result<Q> {
        self.dist(x, y)
    }
}

/// Vertices of the tree geodesic from `a` to `b`.
fn tree_path(a: &Word, b: &Word) -> Vec<Word> {
    let meet = a.common_prefix_len(b);
    let mut out = Vec::with_capacity(a.len() + b.len() - 2 * meet + 1);
    for len in (meet..=a.len()).rev() {
        out.push(a.prefix(len));
    }
    for len in meet + 1..=b.len() {
        out.push(b.prefix(len));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_distance_cancels_prefix() {
        let f2 = ModelSpace::free(2);
        assert_eq!(f2.dist(&ModelPoint::tree("ab"), &ModelPoint::tree("ac")), Err(Error::ModelMismatch { model: "F2".into(), point: "ac".into() }));
        let f3 = ModelSpace::free(3);
        assert_eq!(f3.dist(&ModelPoint::tree("ab"), &ModelPoint::tree("ac")).unwrap(), q(2));
    }

    #[test]
    fn wedge_distances() {
        let w = ModelSpace::wedge();
        let p = |i, s| ModelPoint::ray(i, q(s));
        assert_eq!(w.dist(&p(1, 3), &p(2, 4)).unwrap(), q(7));
        assert_eq!(w.dist(&p(1, 3), &p(1, 1)).unwrap(), q(2));
        assert_eq!(p(5, 0), w.basepoint);
    }

    #[test]
    fn geodesics() {
        let f2 = ModelSpace::free(2);
        let g = f2.geodesic(&ModelPoint::tree("1"), &ModelPoint::tree("ab")).unwrap();
        assert_eq!(g, vec![ModelPoint::tree("1"), ModelPoint::tree("a"), ModelPoint::tree("ab")]);
        let g = f2.geodesic(&ModelPoint::tree("a"), &ModelPoint::tree("a")).unwrap();
        assert_eq!(g, vec![ModelPoint::tree("a")]);
        let w = ModelSpace::wedge();
        let g = w
            .geodesic(&ModelPoint::ray(1, q(2)), &ModelPoint::ray(2, q(1)))
            .unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g[1], w.basepoint);
    }

    #[test]
    fn actions() {
        let f2 = ModelSpace::free(2);
        let a: GroupElement = "a".parse().unwrap();
        assert_eq!(f2.orbit(&a).unwrap(), ModelPoint::tree("a"));
        assert_eq!(
            f2.act(&a.inv(), &ModelPoint::tree("ab")).unwrap(),
            ModelPoint::tree("b")
        );
        let p = ModelSpace::f2z2();
        let c = p.parse_element("c").unwrap();
        assert_eq!(
            p.act(&c, &p.basepoint).unwrap(),
            ModelPoint::F2Z2 { word: Word::identity(), bit: true }
        );
        assert!(ModelSpace::line().act(&a, &ModelPoint::line(0)).is_err());
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_q("1.5").unwrap(), qr(3, 2));
        assert_eq!(parse_q("-0.25").unwrap(), qr(-1, 4));
        assert_eq!(parse_q("7/3").unwrap(), qr(7, 3));
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn discrete_balls() {
        let z = ModelSpace::zxz2();
        assert_eq!(z.ball(&z.basepoint, 1).unwrap().len(), 4);
        let p = ModelSpace::f2z2();
        assert_eq!(p.ball(&p.basepoint, 1).unwrap().len(), 6);
    }

    #[test]
    fn interpolation_on_wedge() {
        let w = ModelSpace::wedge();
        let x = ModelPoint::ray(1, q(2));
        let y = ModelPoint::ray(2, q(3));
        assert_eq!(w.interpolate(&x, &y, q(1)).unwrap(), ModelPoint::ray(1, q(1)));
        assert_eq!(w.interpolate(&x, &y, q(4)).unwrap(), ModelPoint::ray(2, q(2)));
    }
}
