//! Gromov products, nearest-point projections and shadows.
//!
//! Every coarse inequality takes its additive slack as an explicit argument.
//! In the tree models the slack is 0 and the identities hold exactly; the
//! product models use `4 * delta` (see [`default_slack`]).

use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryPoint, End};
use crate::error::{Error, Result};
use crate::space::{parse_q, q, Metric, ModelPoint, ModelSpace, Q};
use crate::word::Word;

/// `(x . y)_base = (d(base, x) + d(base, y) - d(x, y)) / 2`.
pub fn gromov_product<M: Metric>(
    space: &M,
    base: &M::Point,
    x: &M::Point,
    y: &M::Point,
) -> Result<Q> {
    let bx = space.distance(base, x)?;
    let by = space.distance(base, y)?;
    let xy = space.distance(x, y)?;
    Ok((bx + by - xy) / q(2))
}

/// Slack used by coarse inequalities: 0 in trees, `4 * delta` otherwise.
pub fn default_slack(space: &ModelSpace) -> Q {
    space.delta * q(4)
}

/// A Gromov product that may be infinite (two equal boundary points).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GpValue {
    Finite(Q),
    Infinite,
}

impl GpValue {
    pub fn finite(self) -> Option<Q> {
        match self {
            GpValue::Finite(x) => Some(x),
            GpValue::Infinite => None,
        }
    }

    pub fn at_least(self, threshold: Q) -> bool {
        match self {
            GpValue::Finite(x) => x >= threshold,
            GpValue::Infinite => true,
        }
    }
}

/// Second argument of a boundary Gromov product.
#[derive(Clone, Copy, Debug)]
pub enum EndOrPoint<'a> {
    End(&'a BoundaryPoint),
    Point(&'a ModelPoint),
}

fn free_word<'a>(space: &ModelSpace, p: &'a ModelPoint) -> Result<&'a Word> {
    space.check(p)?;
    match p {
        ModelPoint::Tree(w) => Ok(w),
        _ => Err(Error::Unsupported {
            op: "boundary Gromov product",
            model: space.model.name(),
        }),
    }
}

fn free_end<'a>(space: &ModelSpace, b: &'a BoundaryPoint) -> Result<&'a End> {
    b.tree_end().ok_or(Error::Unsupported {
        op: "boundary Gromov product",
        model: space.model.name(),
    })
}

/// `(xi . eta)_base` for an end `xi` and an end or point `eta` of a free-group tree.
///
/// Rooting the tree at the identity, with `cp` the common-prefix length,
/// `(u . v)_z = |z| - cp(z, u) - cp(z, v) + cp(u, v)`, which is what the
/// limit over truncations of the ends gives.
pub fn gromov_product_boundary(
    space: &ModelSpace,
    base: &ModelPoint,
    xi: &BoundaryPoint,
    eta: EndOrPoint<'_>,
) -> Result<GpValue> {
    if !space.model.is_free() {
        return Err(Error::Unsupported {
            op: "boundary Gromov product",
            model: space.model.name(),
        });
    }
    let z = free_word(space, base)?;
    let xi = free_end(space, xi)?;
    let cz_xi = xi.common_prefix_with(z)? as i64;
    match eta {
        EndOrPoint::Point(p) => {
            let w = free_word(space, p)?;
            let cz_w = z.common_prefix_len(w) as i64;
            let cw_xi = xi.common_prefix_with(w)? as i64;
            Ok(GpValue::Finite(q(z.len() as i64 - cz_w - cz_xi + cw_xi)))
        }
        EndOrPoint::End(eta) => {
            let eta = free_end(space, eta)?;
            let cz_eta = eta.common_prefix_with(z)? as i64;
            match xi.common_prefix(eta)? {
                None => Ok(GpValue::Infinite),
                Some(c) => Ok(GpValue::Finite(q(z.len() as i64 - cz_xi - cz_eta + c as i64))),
            }
        }
    }
}

/// `(x . xi)_z` for a tree vertex and end, as an integer.
pub(crate) fn tree_gp_point_end(z: &Word, x: &Word, xi: &End) -> Result<i64> {
    let cz_x = z.common_prefix_len(x) as i64;
    let cz_xi = xi.common_prefix_with(z)? as i64;
    let cx_xi = xi.common_prefix_with(x)? as i64;
    Ok(z.len() as i64 - cz_x - cz_xi + cx_xi)
}

/// A geodesic with a chosen direction of travel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedGeodesic {
    points: Vec<ModelPoint>,
    positions: Vec<Q>,
    reversed: bool,
}

impl OrientedGeodesic {
    pub fn new(space: &ModelSpace, from: &ModelPoint, to: &ModelPoint) -> Result<Self> {
        let points = space.geodesic(from, to)?;
        Self::from_points(space, points)
    }

    pub fn from_points(space: &ModelSpace, points: Vec<ModelPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Invariant("empty geodesic".into()));
        }
        let mut positions = vec![q(0)];
        for pair in points.windows(2) {
            let last = *positions.last().unwrap();
            positions.push(last + space.dist(&pair[0], &pair[1])?);
        }
        Ok(OrientedGeodesic {
            points,
            positions,
            reversed: false,
        })
    }

    /// Underlying points in their stored order (independent of orientation).
    pub fn points(&self) -> &[ModelPoint] {
        &self.points
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    pub fn reversed(&self) -> Self {
        OrientedGeodesic {
            reversed: !self.reversed,
            ..self.clone()
        }
    }

    pub fn length(&self) -> Q {
        *self.positions.last().unwrap()
    }

    /// Arc-length coordinate of `p` measured from the first stored point.
    pub fn position(&self, space: &ModelSpace, p: &ModelPoint) -> Result<Q> {
        if let Some(i) = self.points.iter().position(|x| x == p) {
            return Ok(self.positions[i]);
        }
        if !space.model.is_discrete() {
            for (i, pair) in self.points.windows(2).enumerate() {
                let ap = space.dist(&pair[0], p)?;
                let pb = space.dist(p, &pair[1])?;
                if ap + pb == self.positions[i + 1] - self.positions[i] {
                    return Ok(self.positions[i] + ap);
                }
            }
        }
        Err(Error::NotOnGeodesic(p.to_string()))
    }

    /// Points sampled along the geodesic: every vertex in discrete models,
    /// otherwise the breakpoints plus points spaced `step` apart.
    pub fn sample(&self, space: &ModelSpace, step: Q) -> Result<Vec<ModelPoint>> {
        if space.model.is_discrete() {
            return Ok(self.points.clone());
        }
        let mut out = Vec::new();
        for (i, pair) in self.points.windows(2).enumerate() {
            let len = self.positions[i + 1] - self.positions[i];
            let mut t = q(0);
            while t < len {
                out.push(space.interpolate(&pair[0], &pair[1], t)?);
                t += step;
            }
        }
        out.push(self.points.last().unwrap().clone());
        Ok(out)
    }
}

/// Signed distance from `x` to `y` along `gamma`: positive when `y` comes
/// after `x` in the orientation.
pub fn signed_distance(
    space: &ModelSpace,
    gamma: &OrientedGeodesic,
    x: &ModelPoint,
    y: &ModelPoint,
) -> Result<Q> {
    let d = gamma.position(space, y)? - gamma.position(space, x)?;
    Ok(if gamma.reversed { -d } else { d })
}

/// A point of `gamma` nearest to `y`. Ties go to the least point in the
/// derived order on [`ModelPoint`].
pub fn nearest_point_projection(
    space: &ModelSpace,
    y: &ModelPoint,
    gamma: &[ModelPoint],
) -> Result<ModelPoint> {
    if gamma.is_empty() {
        return Err(Error::Invariant("empty geodesic".into()));
    }
    let mut candidates = Vec::new();
    if space.model.is_discrete() || gamma.len() == 1 {
        candidates.extend(gamma.iter().cloned());
    } else {
        // The line and the wedge are R-trees: the projection onto [a, b] sits
        // at distance (b . y)_a from a.
        for pair in gamma.windows(2) {
            let len = space.dist(&pair[0], &pair[1])?;
            let t = gromov_product(space, &pair[0], &pair[1], y)?.clamp(q(0), len);
            candidates.push(space.interpolate(&pair[0], &pair[1], t)?);
        }
    }
    let mut best: Option<(Q, ModelPoint)> = None;
    for c in candidates {
        let d = space.dist(y, &c)?;
        best = match best {
            Some((bd, bp)) if bd < d || (bd == d && bp <= c) => Some((bd, bp)),
            _ => Some((d, c)),
        };
    }
    Ok(best.unwrap().1)
}

/// Distance from `y` to the nearest point of `gamma`.
pub fn dist_to_geodesic(space: &ModelSpace, y: &ModelPoint, gamma: &[ModelPoint]) -> Result<Q> {
    let p = nearest_point_projection(space, y, gamma)?;
    space.dist(y, &p)
}

/// The shadow `S_base(center, r) = { y : (center . y)_base >= d(base, center) - r }`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Shadow {
    pub base: ModelPoint,
    pub center: ModelPoint,
    pub r: Q,
}

impl fmt::Debug for Shadow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S_{}({}, {})", self.base, self.center, self.r)
    }
}

/// JSON form of a shadow, points in the canonical text encoding.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShadowRecord {
    pub base: String,
    pub center: String,
    #[serde(rename = "R")]
    pub r: serde_json::Number,
}

impl Shadow {
    pub fn new(base: ModelPoint, center: ModelPoint, r: Q) -> Shadow {
        Shadow { base, center, r }
    }

    /// `d(base, center) - r`.
    pub fn distance_parameter(&self, space: &ModelSpace) -> Result<Q> {
        Ok(space.dist(&self.base, &self.center)? - self.r)
    }

    /// `2 r - d(base, center)`.
    pub fn depth(&self, space: &ModelSpace) -> Result<Q> {
        Ok(q(2) * self.r - space.dist(&self.base, &self.center)?)
    }

    pub fn to_record(&self) -> ShadowRecord {
        let r = crate::space::q_to_f64(self.r);
        ShadowRecord {
            base: self.base.to_string(),
            center: self.center.to_string(),
            r: serde_json::Number::from_f64(r).expect("finite radius"),
        }
    }

    pub fn from_record(space: &ModelSpace, rec: &ShadowRecord) -> Result<Shadow> {
        Ok(Shadow {
            base: space.parse_point(&rec.base)?,
            center: space.parse_point(&rec.center)?,
            r: parse_q(&rec.r.to_string())?,
        })
    }
}

pub fn shadow_contains(space: &ModelSpace, s: &Shadow, y: &ModelPoint) -> Result<bool> {
    Ok(gromov_product(space, &s.base, &s.center, y)? >= s.distance_parameter(space)?)
}

/// Whether an end lies in the closure of a shadow of a free-group tree.
///
/// Ends of a tree shadow form a clopen set of ends, so the closure and the
/// interior of the closure agree; the test is the same threshold on the
/// boundary Gromov product.
pub fn shadow_contains_end(space: &ModelSpace, s: &Shadow, xi: &End) -> Result<bool> {
    if !space.model.is_free() {
        return Err(Error::Unsupported {
            op: "boundary shadow membership",
            model: space.model.name(),
        });
    }
    let z = free_word(space, &s.base)?;
    let c = free_word(space, &s.center)?;
    let gp = tree_gp_point_end(z, c, xi)?;
    Ok(q(gp) >= s.distance_parameter(space)?)
}

/// The shadow `S_center(base, d(base, center) - r + slack)` that covers the
/// complement of `s`.
pub fn shadow_complement_cover(space: &ModelSpace, s: &Shadow, slack: Q) -> Result<Shadow> {
    if slack.is_negative() {
        return Err(Error::Invariant("slack must be non-negative".into()));
    }
    Ok(Shadow {
        base: s.center.clone(),
        center: s.base.clone(),
        r: s.distance_parameter(space)? + slack,
    })
}

/// Returns `(b . d)` when `(a . b) >= big_a`, `(c . d) >= big_a` and
/// `(a . c) < big_a - slack`, in which case `(b . d)` and `(a . c)` agree up
/// to the slack (exactly in trees).
#[allow(clippy::too_many_arguments)]
pub fn four_point_gp_estimate(
    space: &ModelSpace,
    base: &ModelPoint,
    a: &ModelPoint,
    b: &ModelPoint,
    c: &ModelPoint,
    d: &ModelPoint,
    big_a: Q,
    slack: Q,
) -> Result<Option<Q>> {
    let ab = gromov_product(space, base, a, b)?;
    let cd = gromov_product(space, base, c, d)?;
    let ac = gromov_product(space, base, a, c)?;
    if ab >= big_a && cd >= big_a && ac < big_a - slack {
        Ok(Some(gromov_product(space, base, b, d)?))
    } else {
        Ok(None)
    }
}

/// Whether `gamma` lies in the union of the other two sides, thickened by `delta`.
pub fn side_is_slim(
    space: &ModelSpace,
    side: &[ModelPoint],
    other1: &[ModelPoint],
    other2: &[ModelPoint],
    delta: Q,
) -> Result<bool> {
    for p in side {
        let d1 = dist_to_geodesic(space, p, other1)?;
        let d2 = dist_to_geodesic(space, p, other2)?;
        if d1.min(d2) > delta {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::qr;

    fn t(s: &str) -> ModelPoint {
        ModelPoint::tree(s)
    }

    fn f2() -> ModelSpace {
        ModelSpace::free(2)
    }

    #[test]
    fn gromov_product_examples() {
        let f3 = ModelSpace::free(3);
        assert_eq!(gromov_product(&f3, &t("1"), &t("ab"), &t("ac")).unwrap(), q(1));
        let x = t("abA");
        assert_eq!(gromov_product(&f2(), &t("1"), &x, &x).unwrap(), q(3));
        assert_eq!(gromov_product(&f2(), &t("1"), &t("abA"), &t("aBA")).unwrap(), q(1));
    }

    #[test]
    fn boundary_gromov_products() {
        let s = f2();
        let e = t("1");
        let end = |x: &str| BoundaryPoint::Tree(End::parse(x).unwrap());
        let a_inf = end("(a)");
        assert_eq!(
            gromov_product_boundary(&s, &e, &a_inf, EndOrPoint::End(&end("(b)"))).unwrap(),
            GpValue::Finite(q(0))
        );
        assert_eq!(
            gromov_product_boundary(&s, &e, &a_inf, EndOrPoint::End(&a_inf)).unwrap(),
            GpValue::Infinite
        );
        assert_eq!(
            gromov_product_boundary(&s, &e, &end("ab(a)"), EndOrPoint::End(&a_inf)).unwrap(),
            GpValue::Finite(q(1))
        );
        assert!(gromov_product_boundary(&ModelSpace::line(), &ModelPoint::line(0), &a_inf, EndOrPoint::End(&a_inf)).is_err());
    }

    /// Oracle: the Gromov product of finite truncations stabilises at the
    /// boundary value.
    #[test]
    fn boundary_product_matches_truncations() {
        let s = f2();
        let xi = End::parse("ab(a)").unwrap();
        let eta = End::parse("(a)").unwrap();
        for base in ["1", "b", "aab", "abaaa"] {
            let z = t(base);
            let exact = gromov_product_boundary(
                &s,
                &z,
                &BoundaryPoint::Tree(xi.clone()),
                EndOrPoint::End(&BoundaryPoint::Tree(eta.clone())),
            )
            .unwrap()
            .finite()
            .unwrap();
            let mut last = None;
            for depth in 10..30 {
                let x = ModelPoint::Tree(xi.prefix(depth).unwrap());
                let y = ModelPoint::Tree(eta.prefix(depth).unwrap());
                last = Some(gromov_product(&s, &z, &x, &y).unwrap());
            }
            assert_eq!(last.unwrap(), exact, "base {base}");
        }
    }

    #[test]
    fn projection_examples() {
        let s = f2();
        let g = s.geodesic(&t("1"), &t("A")).unwrap();
        assert_eq!(nearest_point_projection(&s, &t("ab"), &g).unwrap(), t("1"));
        let g = s.geodesic(&t("1"), &t("aB")).unwrap();
        assert_eq!(nearest_point_projection(&s, &t("a"), &g).unwrap(), t("a"));
        let y = t("abb");
        let p = nearest_point_projection(&s, &y, &g).unwrap();
        // brute force
        let best = g.iter().min_by_key(|x| s.dist(&y, x).unwrap()).unwrap();
        assert_eq!(&p, best);
        assert_eq!(p, t("a"));
    }

    #[test]
    fn projection_on_continuous_models() {
        let line = ModelSpace::line();
        let g = line.geodesic(&ModelPoint::line(0), &ModelPoint::line(5)).unwrap();
        assert_eq!(nearest_point_projection(&line, &ModelPoint::line(7), &g).unwrap(), ModelPoint::line(5));
        assert_eq!(
            nearest_point_projection(&line, &ModelPoint::Line(qr(5, 2)), &g).unwrap(),
            ModelPoint::Line(qr(5, 2))
        );
        let w = ModelSpace::wedge();
        let g = w.geodesic(&ModelPoint::ray(1, q(3)), &ModelPoint::ray(2, q(3))).unwrap();
        assert_eq!(nearest_point_projection(&w, &ModelPoint::ray(3, q(9)), &g).unwrap(), w.basepoint);
        assert_eq!(
            nearest_point_projection(&w, &ModelPoint::ray(1, q(9)), &g).unwrap(),
            ModelPoint::ray(1, q(3))
        );
    }

    #[test]
    fn signed_distances() {
        let s = f2();
        let g = OrientedGeodesic::new(&s, &t("1"), &t("ab")).unwrap();
        assert_eq!(signed_distance(&s, &g, &t("a"), &t("a")).unwrap(), q(0));
        assert_eq!(signed_distance(&s, &g, &t("a"), &t("ab")).unwrap(), q(1));
        assert_eq!(signed_distance(&s, &g.reversed(), &t("a"), &t("ab")).unwrap(), q(-1));
        assert!(signed_distance(&s, &g, &t("a"), &t("b")).is_err());
        let line = ModelSpace::line();
        let g = OrientedGeodesic::new(&line, &ModelPoint::line(0), &ModelPoint::line(5)).unwrap();
        assert_eq!(
            signed_distance(&line, &g, &ModelPoint::line(4), &ModelPoint::Line(qr(3, 2))).unwrap(),
            qr(-5, 2)
        );
    }

    #[test]
    fn shadow_membership_examples() {
        let s = f2();
        let sh = Shadow::new(t("1"), t("ab"), qr(1, 2));
        assert!(shadow_contains(&s, &sh, &t("aba")).unwrap());
        assert!(!shadow_contains(&s, &sh, &t("a")).unwrap());
        assert!(shadow_contains(&s, &sh, &t("ab")).unwrap());
        assert_eq!(sh.distance_parameter(&s).unwrap(), qr(3, 2));
        assert_eq!(sh.depth(&s).unwrap(), q(-1));
    }

    #[test]
    fn complement_cover_formula() {
        let s = f2();
        let sh = Shadow::new(t("1"), t("ab"), qr(1, 2));
        let cover = shadow_complement_cover(&s, &sh, q(0)).unwrap();
        assert_eq!(cover, Shadow::new(t("ab"), t("1"), qr(3, 2)));
        let line = ModelSpace::line();
        let sh = Shadow::new(ModelPoint::line(0), ModelPoint::line(5), q(1));
        let cover = shadow_complement_cover(&line, &sh, q(0)).unwrap();
        assert_eq!(cover, Shadow::new(ModelPoint::line(5), ModelPoint::line(0), q(4)));
    }

    /// Exhaustive oracle over the ball of radius 5: every point outside the
    /// shadow lies in the complement cover.
    #[test]
    fn complement_cover_exhaustive() {
        let s = f2();
        let pts: Vec<ModelPoint> = Word::ball(2, 5).into_iter().map(ModelPoint::Tree).collect();
        for center in Word::ball(2, 3) {
            for r in [qr(1, 2), qr(3, 2), qr(5, 2)] {
                let sh = Shadow::new(t("1"), ModelPoint::Tree(center.clone()), r);
                let cover = shadow_complement_cover(&s, &sh, q(0)).unwrap();
                for y in &pts {
                    if !shadow_contains(&s, &sh, y).unwrap() {
                        assert!(shadow_contains(&s, &cover, y).unwrap(), "{sh:?} {y}");
                    }
                }
            }
        }
    }

    #[test]
    fn four_point_estimate() {
        let s = f2();
        let e = t("1");
        let got = four_point_gp_estimate(&s, &e, &t("aaa"), &t("aaa"), &t("bbb"), &t("bbb"), q(2), q(0)).unwrap();
        assert_eq!(got, Some(q(0)));
        let got = four_point_gp_estimate(&s, &e, &t("abA"), &t("abb"), &t("aBB"), &t("aBA"), q(2), q(0)).unwrap();
        assert_eq!(got, Some(q(1)));
        assert_eq!(gromov_product(&s, &e, &t("abA"), &t("aBB")).unwrap(), q(1));
        let got = four_point_gp_estimate(&s, &e, &t("a"), &t("b"), &t("a"), &t("b"), q(2), q(0)).unwrap();
        assert_eq!(got, None);
    }

    #[test]
    fn shadow_record_roundtrip() {
        let s = f2();
        let sh = Shadow::new(t("1"), t("ab"), qr(1, 2));
        let json = serde_json::to_string(&sh.to_record()).unwrap();
        assert_eq!(json, r#"{"base":"1","center":"ab","R":0.5}"#);
        let rec: ShadowRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(Shadow::from_record(&s, &rec).unwrap(), sh);
    }
}
