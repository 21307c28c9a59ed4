//! Horofunctions: orbit functions `rho_y` and Busemann functions of ends.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Signed;

use crate::boundary::{BoundaryPoint, LineEnd};
use crate::coarse::OrientedGeodesic;
use crate::error::{Error, Result};
use crate::space::{q, Model, ModelPoint, ModelSpace, Q};
use crate::word::GroupElement;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HoroKind {
    /// `rho_y(z) = d(z, y) - d(x_0, y)`.
    Orbit(ModelPoint),
    /// `lim_t d(z, gamma(t)) - t` along a ray to the boundary point.
    Busemann(BoundaryPoint),
}

/// A horofunction normalized to vanish at `basepoint`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Horofunction {
    pub kind: HoroKind,
    pub basepoint: ModelPoint,
}

impl Horofunction {
    pub fn orbit(space: &ModelSpace, y: ModelPoint) -> Horofunction {
        Horofunction {
            kind: HoroKind::Orbit(y),
            basepoint: space.basepoint.clone(),
        }
    }

    pub fn busemann(space: &ModelSpace, xi: BoundaryPoint) -> Horofunction {
        Horofunction {
            kind: HoroKind::Busemann(xi),
            basepoint: space.basepoint.clone(),
        }
    }

    pub fn with_basepoint(mut self, basepoint: ModelPoint) -> Horofunction {
        self.basepoint = basepoint;
        self
    }
}

impl fmt::Display for Horofunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            HoroKind::Orbit(y) => write!(f, "rho[{y}]"),
            HoroKind::Busemann(xi) => write!(f, "busemann[{xi}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HoroClass {
    /// `inf h > -inf`.
    Finite,
    /// `inf h = -inf`.
    Infinite,
    /// Probing ran out of budget without a certificate.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalMinResult {
    PointSet(BTreeSet<ModelPoint>),
    Boundary(BoundaryPoint),
}

/// Busemann function of `xi` before normalization at the basepoint.
fn busemann_raw(space: &ModelSpace, xi: &BoundaryPoint, z: &ModelPoint) -> Result<Q> {
    space.check(z)?;
    let mismatch = || Error::Unsupported {
        op: "Busemann function for this boundary point",
        model: space.model.name(),
    };
    match (&space.model, xi, z) {
        (Model::Free { .. }, BoundaryPoint::Tree(end), ModelPoint::Tree(w)) => {
            let cp = end.common_prefix_with(w)? as i64;
            Ok(q(w.len() as i64 - 2 * cp))
        }
        (Model::Line, BoundaryPoint::Line(LineEnd::Plus), ModelPoint::Line(x)) => Ok(-*x),
        (Model::Line, BoundaryPoint::Line(LineEnd::Minus), ModelPoint::Line(x)) => Ok(*x),
        (Model::Wedge, BoundaryPoint::Wedge(n), ModelPoint::Ray { ray, s }) => {
            if *n == 0 {
                return Err(Error::InvalidBoundary("wedge rays are numbered from 1".into()));
            }
            Ok(if ray == n { -*s } else { *s })
        }
        _ => Err(mismatch()),
    }
}

pub fn horo_eval(space: &ModelSpace, h: &Horofunction, z: &ModelPoint) -> Result<Q> {
    space.check(z)?;
    match &h.kind {
        HoroKind::Orbit(y) => Ok(space.dist(z, y)? - space.dist(&h.basepoint, y)?),
        HoroKind::Busemann(xi) => {
            Ok(busemann_raw(space, xi, z)? - busemann_raw(space, xi, &h.basepoint)?)
        }
    }
}

/// Structural classification: orbit functions attain their infimum
/// `-d(x_0, y)` at `y`, Busemann functions decrease without bound along the ray.
pub fn classify(space: &ModelSpace, h: &Horofunction) -> Result<HoroClass> {
    match &h.kind {
        HoroKind::Orbit(y) => {
            space.check(y)?;
            Ok(HoroClass::Finite)
        }
        HoroKind::Busemann(xi) => {
            busemann_raw(space, xi, &h.basepoint)?;
            Ok(HoroClass::Infinite)
        }
    }
}

/// Greedy descent from the basepoint over unit neighbours.
///
/// A local minimum is a certificate for [`HoroClass::Finite`]; horofunctions
/// of these models have no other local minima. When `budget` steps pass
/// without reaching one the answer is [`HoroClass::Unknown`].
pub fn classify_by_probing(space: &ModelSpace, h: &Horofunction, budget: usize) -> Result<HoroClass> {
    if !space.model.is_discrete() {
        return Err(Error::Unsupported {
            op: "probing classification",
            model: space.model.name(),
        });
    }
    let mut x = h.basepoint.clone();
    let mut hx = horo_eval(space, h, &x)?;
    for _ in 0..budget {
        let mut best: Option<(Q, ModelPoint)> = None;
        for y in space.ball(&x, 1)? {
            let hy = horo_eval(space, h, &y)?;
            if hy < hx && best.as_ref().is_none_or(|(b, p)| hy < *b || (hy == *b && y < *p)) {
                best = Some((hy, y));
            }
        }
        match best {
            None => return Ok(HoroClass::Finite),
            Some((hy, y)) => {
                x = y;
                hx = hy;
            }
        }
    }
    Ok(HoroClass::Unknown)
}

/// The local-minimum map: `{x : h(x) <= inf h + 1}` for finite
/// horofunctions, the end of the minimizing rays otherwise.
pub fn local_min_map(space: &ModelSpace, h: &Horofunction) -> Result<LocalMinResult> {
    match &h.kind {
        HoroKind::Busemann(xi) => {
            busemann_raw(space, xi, &h.basepoint)?;
            Ok(LocalMinResult::Boundary(xi.clone()))
        }
        HoroKind::Orbit(y) => {
            if !space.model.is_discrete() {
                return Err(Error::Unsupported {
                    op: "local-minimum set",
                    model: space.model.name(),
                });
            }
            let inf = horo_eval(space, h, y)?;
            let mut set = BTreeSet::new();
            for x in space.ball(y, 2)? {
                if horo_eval(space, h, &x)? <= inf + q(1) {
                    set.insert(x);
                }
            }
            Ok(LocalMinResult::PointSet(set))
        }
    }
}

/// Largest distance between two points of a finite set.
pub fn diameter(space: &ModelSpace, set: &BTreeSet<ModelPoint>) -> Result<Q> {
    let mut best = q(0);
    for x in set {
        for y in set {
            best = best.max(space.dist(x, y)?);
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileShape {
    /// `h(x) = h(p) + |x - p|` along the geodesic.
    VShape,
    /// `h(x) = h(p) + slope * (x - p)` with `p` the first point.
    Monotone { slope: i8 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub shape: ProfileShape,
    pub p: ModelPoint,
    /// Largest deviation between `h` and the reported shape on the samples.
    pub residual: Q,
}

/// Fits the restriction of `h` to `gamma` to a V-shape or a monotone line
/// of slope +-1. Continuous models are sampled at unit spacing.
pub fn restrict_profile(
    space: &ModelSpace,
    h: &Horofunction,
    gamma: &OrientedGeodesic,
    slack: Q,
) -> Result<Profile> {
    let mut pts = gamma.sample(space, q(1))?;
    if gamma.is_reversed() {
        pts.reverse();
    }
    let mut pos = Vec::with_capacity(pts.len());
    let mut vals = Vec::with_capacity(pts.len());
    let mut acc = q(0);
    for (i, p) in pts.iter().enumerate() {
        if i > 0 {
            acc += space.dist(&pts[i - 1], p)?;
        }
        pos.push(acc);
        vals.push(horo_eval(space, h, p)?);
    }
    let mut argmin = 0;
    for i in 1..vals.len() {
        if vals[i] < vals[argmin] {
            argmin = i;
        }
    }
    let last = pts.len() - 1;
    let (shape, anchor, predict): (ProfileShape, usize, Box<dyn Fn(usize) -> Q>) = if argmin == 0 {
        let (v0, p0) = (vals[0], pos[0]);
        let pos = pos.clone();
        (ProfileShape::Monotone { slope: 1 }, 0, Box::new(move |i| v0 + (pos[i] - p0)))
    } else if argmin == last {
        let (v0, p0) = (vals[0], pos[0]);
        let pos = pos.clone();
        (ProfileShape::Monotone { slope: -1 }, 0, Box::new(move |i| v0 - (pos[i] - p0)))
    } else {
        let (vm, pm) = (vals[argmin], pos[argmin]);
        let pos = pos.clone();
        (ProfileShape::VShape, argmin, Box::new(move |i| vm + (pos[i] - pm).abs()))
    };
    let mut residual = q(0);
    for (i, v) in vals.iter().enumerate() {
        residual = residual.max((*v - predict(i)).abs());
    }
    if residual > slack {
        return Err(Error::Invariant(format!(
            "{h} restricted to the geodesic deviates by {residual} from both profiles"
        )));
    }
    Ok(Profile {
        shape,
        p: pts[anchor].clone(),
        residual,
    })
}

/// `g.h`, the horofunction `z -> h(g^-1 z) - h(g^-1 x_0)`.
pub fn horo_action(space: &ModelSpace, g: &GroupElement, h: &Horofunction) -> Result<Horofunction> {
    if !space.model.acts() {
        return Err(Error::Unsupported {
            op: "group action",
            model: space.model.name(),
        });
    }
    let kind = match &h.kind {
        HoroKind::Orbit(y) => HoroKind::Orbit(space.act(g, y)?),
        HoroKind::Busemann(BoundaryPoint::Tree(end)) if space.model.is_free() && !g.central => {
            HoroKind::Busemann(BoundaryPoint::Tree(end.translate(&g.word)))
        }
        HoroKind::Busemann(_) => {
            return Err(Error::Unsupported {
                op: "action on Busemann functions",
                model: space.model.name(),
            })
        }
    };
    // The defining formula is normalized at x_0 whatever the basepoint of h.
    Ok(Horofunction {
        kind,
        basepoint: space.basepoint.clone(),
    })
}

/// Evaluates `g.h` at `z` straight from the defining formula.
pub fn horo_action_eval(
    space: &ModelSpace,
    g: &GroupElement,
    h: &Horofunction,
    z: &ModelPoint,
) -> Result<Q> {
    let ginv = g.inv();
    let gz = space.act(&ginv, z)?;
    let gx = space.act(&ginv, &space.basepoint)?;
    Ok(horo_eval(space, h, &gz)? - horo_eval(space, h, &gx)?)
}

/// `sup_z |h(z) - candidate(z)|` over the test points, for the last
/// horofunction of `seq`.
pub fn pointwise_limit_check(
    space: &ModelSpace,
    seq: &[Horofunction],
    candidate: &Horofunction,
    test_points: &[ModelPoint],
) -> Result<Q> {
    let last = seq
        .last()
        .ok_or_else(|| Error::Invariant("empty horofunction sequence".into()))?;
    deviation(space, last, candidate, test_points)
}

pub fn deviation(
    space: &ModelSpace,
    h1: &Horofunction,
    h2: &Horofunction,
    test_points: &[ModelPoint],
) -> Result<Q> {
    let mut worst = q(0);
    for z in test_points {
        worst = worst.max((horo_eval(space, h1, z)? - horo_eval(space, h2, z)?).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::End;
    use crate::coarse::{gromov_product, shadow_contains, Shadow};
    use crate::space::qr;
    use crate::word::Word;

    fn t(s: &str) -> ModelPoint {
        ModelPoint::tree(s)
    }

    fn end(s: &str) -> BoundaryPoint {
        BoundaryPoint::Tree(End::parse(s).unwrap())
    }

    #[test]
    fn eval_examples() {
        let f2 = ModelSpace::free(2);
        let rho = Horofunction::orbit(&f2, t("ab"));
        assert_eq!(horo_eval(&f2, &rho, &t("a")).unwrap(), q(-1));
        assert_eq!(horo_eval(&f2, &rho, &f2.basepoint).unwrap(), q(0));

        let line = ModelSpace::line();
        let plus = Horofunction::busemann(&line, BoundaryPoint::Line(LineEnd::Plus));
        assert_eq!(horo_eval(&line, &plus, &ModelPoint::line(3)).unwrap(), q(-3));

        let z = ModelSpace::zxz2();
        let at = ModelPoint::ZxZ2 { n: 0, bit: true };
        for n in 1..20 {
            let r0 = Horofunction::orbit(&z, ModelPoint::ZxZ2 { n, bit: false });
            let r1 = Horofunction::orbit(&z, ModelPoint::ZxZ2 { n, bit: true });
            assert_eq!(horo_eval(&z, &r0, &at).unwrap(), q(1));
            assert_eq!(horo_eval(&z, &r1, &at).unwrap(), q(-1));
        }
    }

    /// Oracle: Busemann values equal `d(z, gamma_t) - t` once `t` is large.
    #[test]
    fn busemann_matches_truncated_orbit_functions() {
        let f2 = ModelSpace::free(2);
        let xi = End::parse("aB(ab)").unwrap();
        let h = Horofunction::busemann(&f2, BoundaryPoint::Tree(xi.clone()));
        for z in Word::ball(2, 4) {
            let z = ModelPoint::Tree(z);
            let far = ModelPoint::Tree(xi.prefix(30).unwrap());
            let approx = horo_eval(&f2, &Horofunction::orbit(&f2, far), &z).unwrap();
            assert_eq!(horo_eval(&f2, &h, &z).unwrap(), approx);
        }
    }

    #[test]
    fn classification() {
        let f2 = ModelSpace::free(2);
        assert_eq!(classify(&f2, &Horofunction::orbit(&f2, t("ab"))).unwrap(), HoroClass::Finite);
        let b = Horofunction::busemann(&f2, end("(a)"));
        assert_eq!(classify(&f2, &b).unwrap(), HoroClass::Infinite);
        for n in 1..6 {
            assert_eq!(horo_eval(&f2, &b, &ModelPoint::Tree(Word::generator(0).pow(n))).unwrap(), q(-n));
        }
        let w = ModelSpace::wedge();
        let hn = Horofunction::busemann(&w, BoundaryPoint::Wedge(4));
        assert_eq!(classify(&w, &hn).unwrap(), HoroClass::Infinite);
    }

    #[test]
    fn probing_is_three_valued() {
        let f2 = ModelSpace::free(2);
        let rho = Horofunction::orbit(&f2, t("abAb"));
        assert_eq!(classify_by_probing(&f2, &rho, 10).unwrap(), HoroClass::Finite);
        assert_eq!(classify_by_probing(&f2, &rho, 2).unwrap(), HoroClass::Unknown);
        let b = Horofunction::busemann(&f2, end("(ab)"));
        assert_eq!(classify_by_probing(&f2, &b, 50).unwrap(), HoroClass::Unknown);
    }

    #[test]
    fn local_min_sets() {
        let f2 = ModelSpace::free(2);
        let got = local_min_map(&f2, &Horofunction::orbit(&f2, t("ab"))).unwrap();
        let want: BTreeSet<_> = ["ab", "a", "abb", "aba", "abA"].into_iter().map(t).collect();
        // Oracle: exhaustive scan of the radius-4 ball.
        let inf = q(-2);
        let rho = Horofunction::orbit(&f2, t("ab"));
        let scanned: BTreeSet<_> = f2
            .ball(&f2.basepoint, 4)
            .unwrap()
            .into_iter()
            .filter(|x| horo_eval(&f2, &rho, x).unwrap() <= inf + q(1))
            .collect();
        assert_eq!(got, LocalMinResult::PointSet(want.clone()));
        assert_eq!(scanned, want);
        assert_eq!(diameter(&f2, &want).unwrap(), q(2));

        let b = Horofunction::busemann(&f2, end("(a)"));
        assert_eq!(local_min_map(&f2, &b).unwrap(), LocalMinResult::Boundary(end("(a)")));
    }

    #[test]
    fn profiles_on_geodesics() {
        let f2 = ModelSpace::free(2);
        let g = OrientedGeodesic::new(&f2, &f2.basepoint, &t("aB")).unwrap();
        let p = restrict_profile(&f2, &Horofunction::orbit(&f2, t("ab")), &g, q(0)).unwrap();
        assert_eq!(p, Profile { shape: ProfileShape::VShape, p: t("a"), residual: q(0) });

        let g = OrientedGeodesic::new(&f2, &f2.basepoint, &t("aaa")).unwrap();
        let p = restrict_profile(&f2, &Horofunction::busemann(&f2, end("(a)")), &g, q(0)).unwrap();
        assert_eq!(p.shape, ProfileShape::Monotone { slope: -1 });
        assert_eq!(p.p, f2.basepoint);

        let line = ModelSpace::line();
        let g = OrientedGeodesic::new(&line, &ModelPoint::line(0), &ModelPoint::line(5)).unwrap();
        let h = Horofunction::busemann(&line, BoundaryPoint::Line(LineEnd::Plus));
        let p = restrict_profile(&line, &h, &g, q(0)).unwrap();
        assert_eq!((p.shape, p.residual), (ProfileShape::Monotone { slope: -1 }, q(0)));
        let p = restrict_profile(&line, &h, &g.reversed(), q(0)).unwrap();
        assert_eq!(p.shape, ProfileShape::Monotone { slope: 1 });
    }

    #[test]
    fn action_examples() {
        let f2 = ModelSpace::free(2);
        let a = GroupElement::free(Word::generator(0));
        let moved = horo_action(&f2, &a, &Horofunction::orbit(&f2, t("b"))).unwrap();
        assert_eq!(moved, Horofunction::orbit(&f2, t("ab")));
        let moved = horo_action(&f2, &a, &Horofunction::busemann(&f2, end("(b)"))).unwrap();
        assert_eq!(moved, Horofunction::busemann(&f2, end("a(b)")));
        for h in [
            Horofunction::orbit(&f2, t("bAb")),
            Horofunction::busemann(&f2, end("A(b)")),
        ] {
            for g in ["a", "bA", "AAb"] {
                let g = f2.parse_element(g).unwrap();
                let gh = horo_action(&f2, &g, &h).unwrap();
                for z in Word::ball(2, 3) {
                    let z = ModelPoint::Tree(z);
                    assert_eq!(
                        horo_eval(&f2, &gh, &z).unwrap(),
                        horo_action_eval(&f2, &g, &h, &z).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn wedge_limits() {
        let w = ModelSpace::wedge();
        let rho0 = Horofunction::orbit(&w, w.basepoint.clone());
        let tests: Vec<_> = (1..=5)
            .flat_map(|r| [qr(1, 2), q(1), q(3)].map(|s| ModelPoint::ray(r, s)))
            .collect();
        let seq: Vec<_> = (1..=8).map(|n| Horofunction::busemann(&w, BoundaryPoint::Wedge(n))).collect();
        assert_eq!(pointwise_limit_check(&w, &seq, &rho0, &tests).unwrap(), q(0));
        assert!(pointwise_limit_check(&w, &seq[..3], &rho0, &tests).unwrap() > q(0));
        let seq: Vec<_> = (1..=8)
            .map(|n| Horofunction::orbit(&w, ModelPoint::ray(n, q(n as i64))))
            .collect();
        assert_eq!(pointwise_limit_check(&w, &seq, &rho0, &tests).unwrap(), q(0));
    }

    #[test]
    fn coset_path_oscillates() {
        let s = ModelSpace::f2z2();
        let c = s.parse_point("c").unwrap();
        let mut vals = Vec::new();
        let mut w = GroupElement::identity();
        for _ in 0..10 {
            w = w.mul(&s.parse_element("ac").unwrap());
            let h = Horofunction::orbit(&s, s.orbit(&w).unwrap());
            vals.push(horo_eval(&s, &h, &c).unwrap());
        }
        for (i, v) in vals.iter().enumerate() {
            assert_eq!(*v, if i % 2 == 0 { q(-1) } else { q(1) });
        }
    }

    #[test]
    fn shadows_agree_with_horofunction_test() {
        let f2 = ModelSpace::free(2);
        let pts = Word::ball(2, 4);
        for center in Word::ball(2, 2) {
            for r in [qr(1, 2), q(1), qr(3, 2), q(2)] {
                let sh = Shadow::new(f2.basepoint.clone(), ModelPoint::Tree(center.clone()), r);
                let depth = sh.depth(&f2).unwrap();
                for y in &pts {
                    let y = ModelPoint::Tree(y.clone());
                    let rho = Horofunction::orbit(&f2, y.clone());
                    let by_horo = horo_eval(&f2, &rho, &sh.center).unwrap() <= depth;
                    assert_eq!(shadow_contains(&f2, &sh, &y).unwrap(), by_horo);
                }
            }
        }
    }

    #[test]
    fn horofunction_gromov_inequality() {
        let f2 = ModelSpace::free(2);
        let pts: Vec<_> = Word::ball(2, 3).into_iter().map(ModelPoint::Tree).collect();
        for h in [Horofunction::busemann(&f2, end("b(aB)")), Horofunction::orbit(&f2, t("abab"))] {
            for x in &pts {
                for y in &pts {
                    let lhs = (-horo_eval(&f2, &h, x).unwrap()).min(-horo_eval(&f2, &h, y).unwrap());
                    assert!(lhs <= gromov_product(&f2, &f2.basepoint, x, y).unwrap());
                }
            }
        }
    }
}
