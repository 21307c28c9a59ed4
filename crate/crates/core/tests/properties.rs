use proptest::prelude::*;

use gromov_walk::boundary::End;
use gromov_walk::coarse::{gromov_product, nearest_point_projection, shadow_contains, Shadow};
use gromov_walk::estimators::{hitting_prob, Direction};
use gromov_walk::horo::{horo_action, horo_eval, local_min_map, Horofunction, LocalMinResult};
use gromov_walk::space::{q, ModelPoint, ModelSpace, Q};
use gromov_walk::strips::{enumerate_bg_in_ball, is_bounded_geometry, BGParams, BoundaryPair};
use gromov_walk::walk::{sample_path, StepDistribution};
use gromov_walk::word::{GroupElement, Word};

fn word(max: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(prop::sample::select(vec!['a', 'A', 'b', 'B']), 0..=max)
        .prop_map(|cs| cs.into_iter().collect::<String>().parse::<Word>().unwrap())
}

fn point(max: usize) -> impl Strategy<Value = ModelPoint> {
    word(max).prop_map(ModelPoint::Tree)
}

fn f2() -> ModelSpace {
    ModelSpace::free(2)
}

fn gp(x: &ModelPoint, y: &ModelPoint) -> Q {
    let s = f2();
    gromov_product(&s, &s.basepoint, x, y).unwrap()
}

fn f2z2_element(max: usize) -> impl Strategy<Value = GroupElement> {
    (word(max), any::<bool>()).prop_map(|(w, c)| {
        let g = GroupElement::free(w);
        if c {
            g.mul(&GroupElement::involution())
        } else {
            g
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn metric_axioms(x in point(12), y in point(12), z in point(12)) {
        let s = f2();
        let dxy = s.dist(&x, &y).unwrap();
        prop_assert_eq!(dxy, s.dist(&y, &x).unwrap());
        prop_assert_eq!(dxy == q(0), x == y);
        prop_assert!(dxy <= s.dist(&x, &z).unwrap() + s.dist(&z, &y).unwrap());
    }

    #[test]
    fn product_metric_axioms(g in f2z2_element(8), h in f2z2_element(8), k in f2z2_element(8)) {
        let s = ModelSpace::f2z2();
        let (x, y, z) = (s.orbit(&g).unwrap(), s.orbit(&h).unwrap(), s.orbit(&k).unwrap());
        prop_assert!(s.dist(&x, &y).unwrap() <= s.dist(&x, &z).unwrap() + s.dist(&z, &y).unwrap());
        prop_assert_eq!(s.dist(&x, &y).unwrap(), s.dist(&s.act(&k, &x).unwrap(), &s.act(&k, &y).unwrap()).unwrap());
    }

    #[test]
    fn action_is_an_isometric_group_action(g in word(6), h in word(6), x in point(8), y in point(8)) {
        let s = f2();
        let (g, h) = (GroupElement::free(g), GroupElement::free(h));
        let lhs = s.act(&g, &s.act(&h, &x).unwrap()).unwrap();
        prop_assert_eq!(lhs, s.act(&g.mul(&h), &x).unwrap());
        prop_assert_eq!(s.dist(&s.act(&g, &x).unwrap(), &s.act(&g, &y).unwrap()).unwrap(), s.dist(&x, &y).unwrap());
    }

    #[test]
    fn cyclic_reduce_round_trip(g in word(12)) {
        let (core, conj) = g.cyclic_reduce();
        prop_assert!(core.is_cyclically_reduced());
        prop_assert_eq!(conj.mul(&core).mul(&conj.inv()), g);
    }

    #[test]
    fn geodesic_triangles_are_thin(x in point(8), y in point(8), z in point(8)) {
        let s = f2();
        let xy = s.geodesic(&x, &y).unwrap();
        let yz = s.geodesic(&y, &z).unwrap();
        let zx = s.geodesic(&z, &x).unwrap();
        for p in &xy {
            prop_assert!(yz.contains(p) || zx.contains(p));
        }
    }

    #[test]
    fn gromov_product_inequality(x in point(10), y in point(10), z in point(10)) {
        prop_assert!(gp(&x, &y) >= gp(&x, &z).min(gp(&y, &z)));
    }

    #[test]
    fn product_is_distance_to_geodesic(x in point(10), y in point(10)) {
        let s = f2();
        let gamma = s.geodesic(&x, &y).unwrap();
        let d = gamma.iter().map(|p| s.dist(&s.basepoint, p).unwrap()).min().unwrap();
        prop_assert_eq!(d, gp(&x, &y));
    }

    #[test]
    fn projections_split_distances(x in point(8), y in point(8), a in point(8), b in point(8)) {
        let s = f2();
        let gamma = s.geodesic(&a, &b).unwrap();
        let px = nearest_point_projection(&s, &x, &gamma).unwrap();
        let py = nearest_point_projection(&s, &y, &gamma).unwrap();
        for z in &gamma {
            prop_assert_eq!(s.dist(&x, z).unwrap(), s.dist(&x, &px).unwrap() + s.dist(&px, z).unwrap());
        }
        if px != py {
            let split = s.dist(&x, &px).unwrap() + s.dist(&px, &py).unwrap() + s.dist(&py, &y).unwrap();
            prop_assert_eq!(s.dist(&x, &y).unwrap(), split);
        }
    }

    #[test]
    fn shadow_points_have_large_products(c in point(5), r in 0i64..4, x in point(8), y in point(8)) {
        let s = f2();
        let sh = Shadow::new(s.basepoint.clone(), c, q(r));
        if shadow_contains(&s, &sh, &x).unwrap() && shadow_contains(&s, &sh, &y).unwrap() {
            prop_assert!(gp(&x, &y) >= sh.distance_parameter(&s).unwrap());
        }
    }

    #[test]
    fn horofunction_inequality(h in point(8), x in point(8), y in point(8)) {
        let s = f2();
        let rho = Horofunction::orbit(&s, h);
        let hx = horo_eval(&s, &rho, &x).unwrap();
        let hy = horo_eval(&s, &rho, &y).unwrap();
        prop_assert!((-hx).min(-hy) <= gp(&x, &y));
    }

    #[test]
    fn weak_convexity(z1 in point(8), z2 in point(8), x in point(8)) {
        let s = f2();
        let a = horo_eval(&s, &Horofunction::orbit(&s, z1.clone()), &x).unwrap();
        let b = horo_eval(&s, &Horofunction::orbit(&s, z2.clone()), &x).unwrap();
        for y in s.geodesic(&z1, &z2).unwrap() {
            let v = horo_eval(&s, &Horofunction::orbit(&s, y), &x).unwrap();
            prop_assert!(a.min(b) <= v && v <= a.max(b));
        }
    }

    #[test]
    fn local_min_map_is_equivariant(g in word(6), y in point(8)) {
        let s = f2();
        let g = GroupElement::free(g);
        let h = Horofunction::orbit(&s, y);
        let moved = local_min_map(&s, &horo_action(&s, &g, &h).unwrap()).unwrap();
        let LocalMinResult::PointSet(before) = local_min_map(&s, &h).unwrap() else {
            panic!("orbit horofunctions have point sets");
        };
        let expected = before.iter().map(|p| s.act(&g, p).unwrap()).collect();
        prop_assert_eq!(moved, LocalMinResult::PointSet(expected));
    }

    #[test]
    fn busemann_local_min_is_equivariant(g in word(6), period in word(4).prop_filter("nontrivial", |w| w.is_cyclically_reduced() && !w.is_identity())) {
        let s = f2();
        let end = End::periodic(Word::identity(), period).unwrap();
        let h = Horofunction::busemann(&s, gromov_walk::boundary::BoundaryPoint::Tree(end.clone()));
        let moved = local_min_map(&s, &horo_action(&s, &GroupElement::free(g.clone()), &h).unwrap()).unwrap();
        prop_assert_eq!(moved, LocalMinResult::Boundary(gromov_walk::boundary::BoundaryPoint::Tree(end.translate(&g))));
    }

    #[test]
    fn bounded_geometry_is_equivariant(
        g in word(5),
        h in word(6),
        a in word(3).prop_filter("reduced ray", |w| w.last().map(|l| l.to_char()) != Some('a')),
        b in word(3).prop_filter("reduced ray", |w| w.last().map(|l| l.to_char()) != Some('B')),
    ) {
        let s = f2();
        let alpha = End::periodic(a, "A".parse().unwrap()).unwrap();
        let beta = End::periodic(b, "b".parse().unwrap()).unwrap();
        prop_assume!(alpha != beta);
        let pair = BoundaryPair::new(alpha, beta).unwrap();
        let params = BGParams::new(q(1), q(3), "aba".parse().unwrap()).unwrap();
        let moved = pair.translate(&g).unwrap();
        prop_assert_eq!(
            is_bounded_geometry(&s, &h, &pair, &params).unwrap(),
            is_bounded_geometry(&s, &g.mul(&h), &moved, &params).unwrap()
        );
        let strip = enumerate_bg_in_ball(&s, &pair, &params, 6, 1 << 16).unwrap();
        prop_assert!(!strip.is_empty());
        for x in &strip {
            prop_assert!(is_bounded_geometry(&s, &g.mul(x), &moved, &params).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn kingman_subadditivity(seed in any::<u64>(), n in 1usize..200, m in 1usize..200) {
        let mu = StepDistribution::uniform_generators(2);
        let path = sample_path(&mu, n + m, seed);
        let shifted = path.shift(n).unwrap();
        prop_assert!(path.word_len(n + m) <= path.word_len(n) + shifted.word_len(m));
    }

    #[test]
    fn reflection_is_an_involution(weights in proptest::collection::vec(1u32..10, 4)) {
        let s = f2();
        let total: u32 = weights.iter().sum();
        let support = ["a", "bA", "abb", "B"]
            .iter()
            .zip(&weights)
            .map(|(w, p)| (s.parse_element(w).unwrap(), *p as f64 / total as f64))
            .collect();
        let mu = StepDistribution::new(s.model.alphabet().unwrap(), support).unwrap();
        prop_assert_eq!(mu.reflected().reflected(), mu);
    }

    #[test]
    fn hitting_is_monotone(seed in any::<u64>(), c in point(3)) {
        let s = f2();
        let mu = StepDistribution::uniform_generators(2);
        let small = Shadow::new(s.basepoint.clone(), c.clone(), q(0));
        let large = Shadow::new(s.basepoint.clone(), c, q(1));
        let p_small = hitting_prob(&s, &mu, &small, 60, 200, seed, Direction::Forward).unwrap();
        let p_large = hitting_prob(&s, &mu, &large, 60, 200, seed, Direction::Forward).unwrap();
        let mut last = 0.0;
        for h in [0, 10, 30, 60] {
            let p = p_small.at_horizon(h);
            prop_assert!(p >= last);
            last = p;
        }
        // same streams, and the larger shadow contains the smaller one
        prop_assert!(p_large.estimate() >= p_small.estimate());
    }
}

#[test]
fn shift_preserves_location_law() {
    // Chi-squared test on |w_n| for shifted paths against fresh ones.
    let mu = StepDistribution::uniform_generators(2);
    let n = 12;
    let trials = 20_000u64;
    let mut fresh = vec![0f64; n + 1];
    let mut shifted = vec![0f64; n + 1];
    for t in 0..trials {
        fresh[gromov_walk::walk::sample_trial(&mu, n, 5, t).word_len(n)] += 1.0;
        let long = gromov_walk::walk::sample_trial(&mu, n + 7, 6, t);
        shifted[long.shift(7).unwrap().word_len(n)] += 1.0;
    }
    let mut chi2 = 0.0;
    let mut dof = 0;
    for d in 0..=n {
        let tot = fresh[d] + shifted[d];
        if tot < 20.0 {
            continue;
        }
        let e = tot / 2.0;
        chi2 += (fresh[d] - e).powi(2) / e + (shifted[d] - e).powi(2) / e;
        dof += 1;
    }
    // 7 even lengths survive; 99.9% quantile of chi2(6) is 22.46
    assert!(dof >= 6, "dof {dof}");
    assert!(chi2 < 22.46, "chi2 {chi2} with {dof} cells");
}
