//! Empirical measures of walk locations and limit-point prefixes.

use std::collections::BTreeMap;
use std::io::Write;

use crate::error::{Error, Result};
use crate::word::{GroupElement, Word};

use super::step::StepDistribution;
use super::{forward_stream, run_trials, stream_rng};

/// Counts of group elements (or of boundary prefixes, stored as free words).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EmpiricalMeasure {
    counts: BTreeMap<GroupElement, u64>,
    total: u64,
    /// Trials that produced no key (unresolved limit points).
    unresolved: u64,
}

impl EmpiricalMeasure {
    pub fn new() -> EmpiricalMeasure {
        EmpiricalMeasure::default()
    }

    pub fn add(&mut self, key: GroupElement) {
        *self.counts.entry(key).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn add_unresolved(&mut self) {
        self.unresolved += 1;
    }

    pub fn merge(&mut self, other: &EmpiricalMeasure) {
        for (k, c) in &other.counts {
            *self.counts.entry(k.clone()).or_insert(0) += c;
        }
        self.total += other.total;
        self.unresolved += other.unresolved;
    }

    pub fn count(&self, key: &GroupElement) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn mass(&self, key: &GroupElement) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count(key) as f64 / self.total as f64
        }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn unresolved(&self) -> u64 {
        self.unresolved
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, u64)> {
        self.counts.iter().map(|(k, c)| (k, *c))
    }

    /// Largest mass of a single key.
    pub fn max_mass(&self) -> f64 {
        self.counts
            .values()
            .map(|c| *c as f64 / self.total.max(1) as f64)
            .fold(0.0, f64::max)
    }

    /// Re-keys boundary prefixes of depth `>= d` by their first `d` letters.
    pub fn coarsen(&self, d: usize) -> Result<EmpiricalMeasure> {
        let mut out = EmpiricalMeasure {
            unresolved: self.unresolved,
            ..EmpiricalMeasure::default()
        };
        for (k, c) in &self.counts {
            if k.word.len() < d {
                return Err(Error::Unresolved {
                    known: k.word.len(),
                    needed: d,
                });
            }
            *out.counts.entry(GroupElement::free(k.word.prefix(d))).or_insert(0) += c;
            out.total += c;
        }
        Ok(out)
    }

    /// CSV with columns `key,count,total`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["key", "count", "total"]).map_err(io)?;
        for (k, c) in &self.counts {
            w.write_record([k.to_string(), c.to_string(), self.total.to_string()])
                .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PushforwardKey {
    /// The location `w_n`.
    Location,
    /// The length-`d` prefix of the limit point, resolved with the margin.
    BoundaryPrefix { d: usize, margin: usize },
}

/// Counts of `w_n` or of limit-point prefixes over independent trials.
///
/// With `stratified` the first step of trial `t` is support element
/// `t mod |support|` instead of a random draw; this requires a uniform
/// measure and makes the first-step frequencies exact.
pub fn empirical_pushforward(
    mu: &StepDistribution,
    n: usize,
    trials: u64,
    key: PushforwardKey,
    seed: u64,
    stratified: bool,
) -> Result<EmpiricalMeasure> {
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    if stratified && !mu.is_uniform() {
        return Err(Error::InvalidDistribution(
            "stratified first steps need a uniform measure".into(),
        ));
    }
    let m = mu.support().len() as u64;
    let keys = run_trials(trials, |t| {
        let mut rng = stream_rng(seed, forward_stream(t));
        let mut w = GroupElement::identity();
        for k in 0..n {
            let g = if stratified && k == 0 {
                &mu.support()[(t % m) as usize].0
            } else {
                mu.sample(&mut rng)
            };
            for l in g.word.letters() {
                w.word.push(*l);
            }
            w.central ^= g.central;
        }
        match key {
            PushforwardKey::Location => Some(w),
            PushforwardKey::BoundaryPrefix { d, margin } => {
                super::limit::limit_prefix_of(&w.word, d, margin).map(GroupElement::free)
            }
        }
    });
    let mut out = EmpiricalMeasure::new();
    for k in keys {
        match k {
            Some(k) => out.add(k),
            None => out.add_unresolved(),
        }
    }
    Ok(out)
}

/// Total-variation distance between the empirical measure of depth-`d`
/// cylinders and its convolution `sum_g mu(g) nu(g^-1 .)`.
///
/// `deep` holds limit prefixes of depth `D >= d + max|g|`; the translate
/// `g . [v]` of a depth-`D` cylinder is then the cylinder `[g v]` of depth at
/// least `d`, so both sides are computed exactly from the same samples.
pub fn stationarity_tv(mu: &StepDistribution, deep: &EmpiricalMeasure, d: usize) -> Result<f64> {
    let total = deep.total();
    if total == 0 {
        return Err(Error::Invariant("empty empirical measure".into()));
    }
    let depth = deep.iter().map(|(k, _)| k.word.len()).min().unwrap_or(0);
    if depth < d + mu.max_step_len() {
        return Err(Error::Unresolved {
            known: depth,
            needed: d + mu.max_step_len(),
        });
    }
    Ok(stationarity_tv_with_noise(mu, deep, d)?.0)
}

/// [`stationarity_tv`] together with a plug-in noise scale
/// `(1/2) sum_C sd(diff_C)`, where `diff_C` is the signed difference on
/// cylinder `C`, a linear function of the multinomial sample.
pub fn stationarity_tv_with_noise(mu: &StepDistribution, deep: &EmpiricalMeasure, d: usize) -> Result<(f64, f64)> {
    let total = deep.total();
    if total == 0 {
        return Err(Error::Invariant("empty empirical measure".into()));
    }
    let depth = deep.iter().map(|(k, _)| k.word.len()).min().unwrap_or(0);
    if depth < d + mu.max_step_len() {
        return Err(Error::Unresolved {
            known: depth,
            needed: d + mu.max_step_len(),
        });
    }
    let mut diff: BTreeMap<Word, f64> = BTreeMap::new();
    let mut second: BTreeMap<Word, f64> = BTreeMap::new();
    for (v, c) in deep.iter() {
        let mass = c as f64 / total as f64;
        let mut coef: BTreeMap<Word, f64> = BTreeMap::new();
        *coef.entry(v.word.prefix(d)).or_insert(0.0) += 1.0;
        for (g, p) in mu.support() {
            *coef.entry(g.word.mul(&v.word).prefix(d)).or_insert(0.0) -= p;
        }
        for (cyl, a) in coef {
            *diff.entry(cyl.clone()).or_insert(0.0) += a * mass;
            *second.entry(cyl).or_insert(0.0) += a * a * mass;
        }
    }
    let tv = diff.values().map(|x| x.abs()).sum::<f64>() / 2.0;
    let noise = second.values().map(|m2| (m2 / total as f64).sqrt()).sum::<f64>() / 2.0;
    Ok((tv, noise))
}
