//! Harmonic measure of shadows at increasing distance.
//!
//! In the free group the closure of the shadow `S_e(u, 1/2)` of a length-`r`
//! word meets the boundary in the cylinder of ends starting with `u`, so the
//! empirical limit-point measure of cylinders measures shadows directly.

use crate::error::{Error, Result};
use crate::walk::{forward_stream, limit::limit_prefix_of, run_trials, walk_endpoint, StepDistribution};
use crate::word::Word;

use super::stats::ols;

#[derive(Clone, Debug, PartialEq)]
pub struct CylinderMass {
    pub prefix: Word,
    pub count: u64,
    pub mass: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayFit {
    /// Masses of the nested cylinders along the reference word, `r = r1..=r2`.
    pub chain: Vec<(usize, CylinderMass)>,
    /// Masses of every depth-1 cylinder.
    pub first_letters: Vec<CylinderMass>,
    /// Depths whose cylinder had no sample, left out of the fit.
    pub dropped: Vec<usize>,
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
    pub resolved: u64,
    pub unresolved: u64,
}

/// Limit-point prefixes of `trials` walks of `n` steps, at depth `depth`.
pub fn limit_prefixes(
    mu: &StepDistribution,
    n: usize,
    depth: usize,
    margin: usize,
    trials: u64,
    seed: u64,
) -> Vec<Option<Word>> {
    run_trials(trials, |t| {
        let w = walk_endpoint(mu, n, seed, forward_stream(t));
        limit_prefix_of(&w.word, depth, margin)
    })
}

/// Default reference word: `a b a b ...`.
pub fn alternating_word(len: usize) -> Word {
    Word::from_letters((0..len).map(|i| crate::word::Letter::generator((i % 2) as u8)))
}

/// Empirical masses of cylinders of depth `r1..=r2` along `reference` and a
/// least-squares fit of `ln(mass)` against `r`.
#[allow(clippy::too_many_arguments)]
pub fn shadow_decay(
    mu: &StepDistribution,
    rank: u8,
    r1: usize,
    r2: usize,
    reference: &Word,
    n: usize,
    margin: usize,
    trials: u64,
    seed: u64,
) -> Result<DecayFit> {
    if r1 == 0 || r1 > r2 || reference.len() < r2 {
        return Err(Error::Config(format!(
            "need 1 <= r1 <= r2 <= |reference|, got r1 = {r1}, r2 = {r2}, |reference| = {}",
            reference.len()
        )));
    }
    let prefixes = limit_prefixes(mu, n, r2, margin, trials, seed);
    let resolved: Vec<&Word> = prefixes.iter().flatten().collect();
    let total = resolved.len() as u64;
    let unresolved = trials - total;
    let mass_of = |u: &Word| -> CylinderMass {
        let count = resolved.iter().filter(|w| w.starts_with(u)).count() as u64;
        CylinderMass {
            prefix: u.clone(),
            count,
            mass: if total == 0 { 0.0 } else { count as f64 / total as f64 },
        }
    };
    let chain: Vec<(usize, CylinderMass)> = (r1..=r2).map(|r| (r, mass_of(&reference.prefix(r)))).collect();
    let first_letters = Word::sphere(rank, 1).iter().map(mass_of).collect();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut dropped = Vec::new();
    for (r, m) in &chain {
        if m.count == 0 {
            dropped.push(*r);
        } else {
            xs.push(*r as f64);
            ys.push(m.mass.ln());
        }
    }
    let (slope, intercept, residual) = ols(&xs, &ys).unwrap_or((f64::NAN, f64::NAN, f64::NAN));
    Ok(DecayFit {
        chain,
        first_letters,
        dropped,
        slope,
        intercept,
        residual,
        resolved: total,
        unresolved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{Alphabet, GroupElement};

    #[test]
    fn point_mass_never_reaches_other_cylinders() {
        let mu = StepDistribution::point_mass(Alphabet::Free(2), GroupElement::free(Word::generator(0))).unwrap();
        let fit = shadow_decay(&mu, 2, 1, 3, &"bbb".parse().unwrap(), 20, 2, 10, 0).unwrap();
        assert!(fit.chain.iter().all(|(_, m)| m.mass == 0.0));
        assert_eq!(fit.dropped, vec![1, 2, 3]);
        let a = fit.first_letters.iter().find(|m| m.prefix.to_string() == "a").unwrap();
        assert_eq!(a.mass, 1.0);
    }

    #[test]
    fn cylinders_are_shadows() {
        use crate::boundary::End;
        use crate::coarse::{shadow_contains_end, Shadow};
        use crate::space::{qr, ModelPoint, ModelSpace};
        let f2 = ModelSpace::free(2);
        let u: Word = "abA".parse().unwrap();
        let s = Shadow::new(f2.basepoint.clone(), ModelPoint::Tree(u.clone()), qr(1, 2));
        for w in Word::sphere(2, 6) {
            let end = End::truncated(w.clone());
            assert_eq!(shadow_contains_end(&f2, &s, &end).unwrap(), w.starts_with(&u), "{w}");
        }
    }

    #[test]
    fn uniform_first_letters_are_balanced() {
        let mu = StepDistribution::uniform_generators(2);
        let fit = shadow_decay(&mu, 2, 1, 4, &alternating_word(4), 80, 2, 8000, 3).unwrap();
        for m in &fit.first_letters {
            assert!((m.mass - 0.25).abs() < 0.02, "{m:?}");
        }
        assert!((fit.slope + 3f64.ln()).abs() < 0.3, "{}", fit.slope);
    }
}
