//! Invariant suites behind `verify quick|full`.

use std::fmt;
use std::time::Instant;

use num_traits::Signed;

use crate::boundary::End;
use crate::coarse::{
    gromov_product, nearest_point_projection, shadow_complement_cover, shadow_contains, Shadow,
};
use crate::estimators::persistence::PersistenceParams;
use crate::estimators::{
    estimate_drift, hitting_prob, persistence_experiment, translation_length_exact, translation_length_formula,
    Direction,
};
use crate::horo::{horo_action, horo_action_eval, horo_eval, Horofunction};
use crate::oracle;
use crate::space::{q, qr, ModelPoint, ModelSpace, Q};
use crate::strips::{
    displacement_count, displacement_count_naive, enumerate_bg_in_ball, enumerate_naive, is_bounded_geometry,
    BGParams, BoundaryPair,
};
use crate::walk::{
    empirical_pushforward, forward_stream, run_trials_with_workers, sample_trial, stationarity_tv_with_noise, walk_endpoint,
    PushforwardKey, StepDistribution,
};
use crate::word::{GroupElement, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    /// Radius of the exhaustive oracles.
    pub fn radius(self) -> usize {
        match self {
            Level::Quick => 5,
            Level::Full => 8,
        }
    }

    pub fn trials(self) -> u64 {
        match self {
            Level::Quick => 1_000,
            Level::Full => 100_000,
        }
    }
}

impl std::str::FromStr for Level {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Level> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            _ => Err(crate::Error::Parse(format!("verify level must be quick or full, got {s:?}"))),
        }
    }
}

/// Mutations used to check that the suites can fail.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fault {
    #[default]
    None,
    /// Shadow membership tested with `<` instead of `>=`.
    FlipShadowInequality,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub module: &'static str,
    pub invariant: &'static str,
    /// `None` on success, otherwise a concrete counterexample.
    pub counterexample: Option<String>,
    pub seconds: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub level: Level,
    pub suites: Vec<SuiteResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SuiteResult> {
        self.suites.iter().filter(|s| !s.passed())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            let status = if s.passed() { "PASS" } else { "FAIL" };
            writeln!(f, "{status} {:<16} {:<44} {:>8.2}s", s.module, s.invariant, s.seconds)?;
            if let Some(c) = &s.counterexample {
                writeln!(f, "     counterexample: {c}")?;
            }
        }
        let failed = self.failures().count();
        write!(f, "{} suites, {} failed", self.suites.len(), failed)
    }
}

type Outcome = std::result::Result<(), String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: crate::Error) -> String {
    format!("error: {e}")
}

fn tree(w: &Word) -> ModelPoint {
    ModelPoint::Tree(w.clone())
}

fn words(rank: u8, r: usize) -> Vec<Word> {
    Word::ball(rank, r)
}

pub fn run(level: Level, fault: Fault) -> Report {
    type Suite = (&'static str, &'static str, Box<dyn Fn(Level, Fault) -> Outcome>);
    let suites: Vec<Suite> = vec![
        ("space-core", "group axioms on reduced words", Box::new(group_axioms)),
        ("space-core", "triangle inequality", Box::new(triangle)),
        ("space-core", "cyclic reduction and |g^2| - |g|", Box::new(cyclic_reduction)),
        ("coarse-geometry", "0-hyperbolic four-point condition", Box::new(four_point)),
        ("coarse-geometry", "shadow complement cover", Box::new(complement_cover)),
        ("coarse-geometry", "projection splits distances", Box::new(projection)),
        ("horofunction", "shadow-horofunction equivalence", Box::new(shadow_horo)),
        ("horofunction", "1-Lipschitz and Gromov inequality", Box::new(horo_lipschitz)),
        ("horofunction", "action matches defining formula", Box::new(horo_equivariance)),
        ("walk-engine", "worker-count independence", Box::new(workers)),
        ("walk-engine", "subadditivity of E|w_n|", Box::new(subadditive)),
        ("walk-engine", "stationarity of limit prefixes", Box::new(stationarity)),
        ("estimators", "drift agrees with DP oracle", Box::new(drift)),
        ("estimators", "translation formula equals core length", Box::new(translation)),
        ("estimators", "hitting probability monotone, oracle", Box::new(hitting)),
        ("estimators", "persistence lower bound", Box::new(persistence)),
        ("strips", "line-neighbourhood equals exhaustive", Box::new(strips_enumeration)),
        ("strips", "displacement counts", Box::new(strips_displacement)),
        ("strips", "G-equivariance", Box::new(strips_equivariance)),
    ];
    let suites = suites
        .into_iter()
        .map(|(module, invariant, f)| {
            let start = Instant::now();
            let outcome = f(level, fault);
            SuiteResult {
                module,
                invariant,
                counterexample: outcome.err(),
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect();
    Report { level, suites }
}

fn group_axioms(level: Level, _: Fault) -> Outcome {
    let xs = words(2, level.radius());
    let ys = words(2, 3);
    for x in &xs {
        check(x.mul(&x.inv()).is_identity(), || format!("x = {x}: x x^-1 != 1"))?;
        for y in &ys {
            let xy = x.mul(y);
            check(xy.inv() == y.inv().mul(&x.inv()), || format!("x = {x}, y = {y}: (xy)^-1"))?;
            check(xy.len() <= x.len() + y.len(), || format!("x = {x}, y = {y}: |xy|"))?;
            check(xy.mul(&y.inv()) == *x, || format!("x = {x}, y = {y}: xy y^-1 != x"))?;
        }
    }
    Ok(())
}

fn triangle(level: Level, _: Fault) -> Outcome {
    let r = level.radius();
    let xs = words(2, r);
    let ys = words(2, r / 2 + 1);
    let zs = words(2, 2);
    for x in &xs {
        for y in &ys {
            for z in &zs {
                check(x.dist(z) <= x.dist(y) + y.dist(z), || format!("x = {x}, y = {y}, z = {z}"))?;
            }
        }
    }
    let s = ModelSpace::f2z2();
    let pts = s.ball(&s.basepoint, r.min(5)).map_err(err)?;
    let near = s.ball(&s.basepoint, 2).map_err(err)?;
    for x in &pts {
        for y in &near {
            for z in &near {
                let (xz, xy, yz) = (
                    s.dist(x, z).map_err(err)?,
                    s.dist(x, y).map_err(err)?,
                    s.dist(y, z).map_err(err)?,
                );
                check(xz <= xy + yz, || format!("F2xZ/2: x = {x}, y = {y}, z = {z}"))?;
            }
        }
    }
    Ok(())
}

fn cyclic_reduction(level: Level, _: Fault) -> Outcome {
    for g in words(2, level.radius()) {
        let (core, u) = g.cyclic_reduce();
        check(u.mul(&core).mul(&u.inv()) == g, || format!("g = {g}: u c u^-1 != g"))?;
        check(core.is_cyclically_reduced(), || format!("g = {g}: core {core} not cyclically reduced"))?;
        if !g.is_identity() {
            check(g.mul(&g).len() - g.len() == core.len(), || format!("g = {g}: |g^2| - |g| != |core|"))?;
        }
    }
    Ok(())
}

fn four_point(level: Level, _: Fault) -> Outcome {
    let f2 = ModelSpace::free(2);
    let pts: Vec<ModelPoint> = words(2, level.radius().min(4)).iter().map(tree).collect();
    let o = &f2.basepoint;
    let gp = |a: &ModelPoint, b: &ModelPoint| gromov_product(&f2, o, a, b).expect("tree");
    for x in &pts {
        for y in &pts {
            let xy = gp(x, y);
            for z in pts.iter().step_by(3) {
                check(gp(x, z) >= xy.min(gp(y, z)), || format!("x = {x}, y = {y}, z = {z}"))?;
            }
        }
    }
    Ok(())
}

fn radii() -> [Q; 3] {
    [qr(1, 2), qr(3, 2), qr(5, 2)]
}

fn complement_cover(level: Level, _: Fault) -> Outcome {
    let f2 = ModelSpace::free(2);
    let pts: Vec<ModelPoint> = words(2, level.radius()).iter().map(tree).collect();
    for base in words(2, 1) {
        for center in words(2, 3) {
            for r in radii() {
                let s = Shadow::new(tree(&base), tree(&center), r);
                let cover = shadow_complement_cover(&f2, &s, q(0)).map_err(err)?;
                for y in &pts {
                    let inside = shadow_contains(&f2, &s, y).map_err(err)?;
                    let covered = shadow_contains(&f2, &cover, y).map_err(err)?;
                    check(inside || covered, || format!("{s:?}, y = {y}"))?;
                }
            }
        }
    }
    Ok(())
}

fn projection(level: Level, _: Fault) -> Outcome {
    let f2 = ModelSpace::free(2);
    for end in Word::sphere(2, 3) {
        let gamma = f2.geodesic(&f2.basepoint, &tree(&end)).map_err(err)?;
        for y in words(2, level.radius()) {
            let y = tree(&y);
            let p = nearest_point_projection(&f2, &y, &gamma).map_err(err)?;
            let d = |a: &ModelPoint, b: &ModelPoint| f2.dist(a, b).expect("tree");
            for x in [&f2.basepoint, gamma.last().unwrap()] {
                check(d(&y, x) == d(&y, &p) + d(&p, x), || format!("y = {y}, segment 1..{end}, p = {p}"))?;
            }
        }
    }
    Ok(())
}

fn shadow_horo(level: Level, fault: Fault) -> Outcome {
    let f2 = ModelSpace::free(2);
    let pts: Vec<ModelPoint> = words(2, level.radius().min(6)).iter().map(tree).collect();
    for center in words(2, 4) {
        for r in radii() {
            let s = Shadow::new(f2.basepoint.clone(), tree(&center), r);
            let depth = s.depth(&f2).map_err(err)?;
            let dp = s.distance_parameter(&f2).map_err(err)?;
            for y in &pts {
                let gp = gromov_product(&f2, &s.base, &s.center, y).map_err(err)?;
                let by_definition = match fault {
                    Fault::None => gp >= dp,
                    Fault::FlipShadowInequality => gp < dp,
                };
                let rho = Horofunction::orbit(&f2, y.clone());
                let by_horo = horo_eval(&f2, &rho, &s.center).map_err(err)? <= depth;
                check(by_definition == by_horo, || {
                    format!("S_1({center}, {r}), y = {y}: definition {by_definition}, horofunction {by_horo}")
                })?;
            }
        }
    }
    Ok(())
}

fn sample_horofunctions(f2: &ModelSpace) -> Vec<Horofunction> {
    vec![
        Horofunction::busemann(f2, crate::boundary::BoundaryPoint::Tree(End::parse("b(aB)").expect("end"))),
        Horofunction::busemann(f2, crate::boundary::BoundaryPoint::Tree(End::parse("(a)").expect("end"))),
        Horofunction::orbit(f2, ModelPoint::tree("abab")),
        Horofunction::orbit(f2, ModelPoint::tree("B")),
    ]
}

fn horo_lipschitz(level: Level, _: Fault) -> Outcome {
    let f2 = ModelSpace::free(2);
    let pts: Vec<ModelPoint> = words(2, level.radius().min(4)).iter().map(tree).collect();
    for h in sample_horofunctions(&f2) {
        let vals: Vec<Q> = pts.iter().map(|x| horo_eval(&f2, &h, x)).collect::<crate::Result<_>>().map_err(err)?;
        for (i, x) in pts.iter().enumerate() {
            for (j, y) in pts.iter().enumerate() {
                let d = f2.dist(x, y).map_err(err)?;
                check((vals[i] - vals[j]).abs() <= d, || format!("{h:?}: x = {x}, y = {y}"))?;
                let gp = gromov_product(&f2, &f2.basepoint, x, y).map_err(err)?;
                check((-vals[i]).min(-vals[j]) <= gp, || format!("{h:?}: x = {x}, y = {y}"))?;
            }
        }
    }
    Ok(())
}

fn horo_equivariance(level: Level, _: Fault) -> Outcome {
    let f2 = ModelSpace::free(2);
    let pts: Vec<ModelPoint> = words(2, level.radius().min(4)).iter().map(tree).collect();
    for h in sample_horofunctions(&f2) {
        for g in words(2, 2) {
            let g = GroupElement::free(g);
            let gh = horo_action(&f2, &g, &h).map_err(err)?;
            for z in &pts {
                let a = horo_eval(&f2, &gh, z).map_err(err)?;
                let b = horo_action_eval(&f2, &g, &h, z).map_err(err)?;
                check(a == b, || format!("g = {g}, h = {h:?}, z = {z}: {a} != {b}"))?;
            }
        }
    }
    Ok(())
}

fn simple() -> StepDistribution {
    StepDistribution::uniform_generators(2)
}

fn workers(level: Level, _: Fault) -> Outcome {
    let mu = simple();
    let trials = level.trials() / 10;
    let f = |t: u64| walk_endpoint(&mu, 100, 11, forward_stream(t));
    let one = run_trials_with_workers(1, trials, f);
    let many = run_trials_with_workers(3, trials, f);
    if let Some(t) = (0..one.len()).find(|&i| one[i] != many[i]) {
        return Err(format!("trial {t}: {} with 1 worker, {} with 3", one[t], many[t]));
    }
    let p = sample_trial(&mu, 50, 11, 4);
    check(p.regenerate(&mu).map_err(err)? == p, || "regenerated path differs".into())
}

fn subadditive(level: Level, _: Fault) -> Outcome {
    let e: Vec<f64> = (0..=30).map(|n| oracle::expected_distance(2, n)).collect();
    for m in 1..=15 {
        for n in 1..=15 {
            check(e[m + n] <= e[m] + e[n] + 1e-12, || format!("E d_{} > E d_{m} + E d_{n}", m + n))?;
        }
    }
    let mu = simple();
    for t in 0..level.trials().min(2000) {
        let p = sample_trial(&mu, 60, 5, t);
        for (m, n) in [(10, 20), (25, 35), (1, 59)] {
            check(p.dist(0, m + n) <= p.dist(0, m) + p.dist(m, m + n), || {
                format!("trial {t}: d(w_0, w_{}) > d(w_0, w_{m}) + d(w_{m}, w_{})", m + n, m + n)
            })?;
        }
    }
    Ok(())
}

fn stationarity(level: Level, _: Fault) -> Outcome {
    let mu = simple();
    let d = 2;
    let key = PushforwardKey::BoundaryPrefix { d: d + 1, margin: 2 };
    let deep = empirical_pushforward(&mu, 40, level.trials(), key, 21, false).map_err(err)?;
    let (tv, noise) = stationarity_tv_with_noise(&mu, &deep, d).map_err(err)?;
    check(tv <= 2.0 * noise, || format!("TV = {tv} > 2 x noise scale {noise} at depth {d}"))
}

fn drift(level: Level, _: Fault) -> Outcome {
    let n = 100;
    let est = estimate_drift(&simple(), n, level.trials(), 2).map_err(err)?;
    let exact = oracle::expected_distance(2, n) / n as f64;
    check((est.l_hat - exact).abs() <= 4.0 * est.stderr, || {
        format!("L = {} vs oracle {exact}, stderr {}", est.l_hat, est.stderr)
    })
}

fn translation(level: Level, _: Fault) -> Outcome {
    let f2 = ModelSpace::free(2);
    for g in words(2, level.radius()) {
        if g.is_identity() {
            continue;
        }
        let g = GroupElement::free(g);
        let exact = translation_length_exact(&g);
        let formula = translation_length_formula(&f2, &g, q(1)).map_err(err)?;
        check(formula == Some(q(exact as i64)), || format!("g = {g}: formula {formula:?}, core {exact}"))?;
    }
    Ok(())
}

fn hitting(level: Level, _: Fault) -> Outcome {
    let f2 = ModelSpace::free(2);
    let s = Shadow::new(f2.basepoint.clone(), ModelPoint::tree("ab"), qr(1, 2));
    let est = hitting_prob(&f2, &simple(), &s, 60, level.trials(), 8, Direction::Forward).map_err(err)?;
    let mut last = 0.0;
    for h in 0..=60 {
        let p = est.at_horizon(h);
        check(p >= last, || format!("P(hit by {h}) = {p} < P(hit by {}) = {last}", h - 1))?;
        last = p;
    }
    let exact = oracle::vertex_hitting_probability(2, 2);
    let sd = (exact * (1.0 - exact) / est.trials as f64).sqrt();
    check((est.estimate() - exact).abs() <= 4.0 * sd + 0.005, || {
        format!("hitting S_1(ab, 1/2): {} vs oracle {exact}", est.estimate())
    })
}

fn persistence(level: Level, _: Fault) -> Outcome {
    let params = PersistenceParams {
        k: 10,
        r: q(1),
        c: q(0),
        c0: q(1),
    };
    let st = persistence_experiment(&simple(), params, 20, level.trials().min(5000), 13).map_err(err)?;
    match st.per_trial.iter().position(|p| !p.lower_bound_holds) {
        None => Ok(()),
        Some(t) => Err(format!(
            "trial {t}: Z = {}, d = {}",
            st.per_trial[t].z, st.per_trial[t].distance
        )),
    }
}

fn strip_pairs() -> Vec<BoundaryPair> {
    [("(A)", "(a)"), ("b(A)", "ab(a)"), ("(ab)", "(BA)"), ("Ab(bA)", "a(b)")]
        .iter()
        .map(|(a, b)| BoundaryPair::new(End::parse(a).expect("end"), End::parse(b).expect("end")).expect("distinct"))
        .collect()
}

fn strip_params() -> Vec<BGParams> {
    [("aaaa", 3), ("aba", 3), ("ab", 2)]
        .iter()
        .map(|(v, r)| BGParams::new(q(1), q(*r), v.parse().expect("word")).expect("params"))
        .collect()
}

fn strips_enumeration(level: Level, _: Fault) -> Outcome {
    let f2 = ModelSpace::free(2);
    for pair in strip_pairs() {
        for params in strip_params() {
            for r in 0..=level.radius().min(6) {
                let fast = enumerate_bg_in_ball(&f2, &pair, &params, r, 1 << 20).map_err(err)?;
                let naive = enumerate_naive(&f2, &pair, &params, r, 1 << 20).map_err(err)?;
                check(fast == naive, || format!("{pair:?}, {params:?}, r = {r}: {fast:?} vs {naive:?}"))?;
            }
        }
    }
    Ok(())
}

fn strips_displacement(level: Level, _: Fault) -> Outcome {
    let top = if level == Level::Quick { 2 } else { 3 };
    for l in 1..=top {
        for len in [2 * l, 2 * l + 1] {
            for y in Word::sphere(2, len) {
                let fast = displacement_count(&y, l).map_err(err)?;
                let naive = displacement_count_naive(2, &y, l);
                check(fast == naive, || format!("y = {y}, l = {l}: {fast} vs {naive}"))?;
                check(fast <= 2 * l + 1, || format!("y = {y}, l = {l}: {fast} > {}", 2 * l + 1))?;
            }
        }
    }
    Ok(())
}

fn strips_equivariance(level: Level, _: Fault) -> Outcome {
    let f2 = ModelSpace::free(2);
    let hs = words(2, level.radius().min(5));
    for pair in strip_pairs() {
        for params in strip_params() {
            for g in words(2, 2) {
                let moved = pair.translate(&g).map_err(err)?;
                for h in &hs {
                    let a = is_bounded_geometry(&f2, h, &pair, &params).map_err(err)?;
                    let b = is_bounded_geometry(&f2, &g.mul(h), &moved, &params).map_err(err)?;
                    check(a == b, || format!("g = {g}, h = {h}, {pair:?}, {params:?}"))?;
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fault_is_caught_with_a_word() {
        let out = shadow_horo(Level::Quick, Fault::FlipShadowInequality).unwrap_err();
        assert!(out.contains("y = "), "{out}");
        assert!(shadow_horo(Level::Quick, Fault::None).is_ok());
    }
}
