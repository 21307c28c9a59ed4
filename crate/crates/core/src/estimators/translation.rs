//! Translation lengths: exact cyclic reduction and the Gromov-product formula.

use crate::coarse::gromov_product;
use crate::error::{Error, Result};
use crate::space::{q, ModelSpace, Q};
use crate::walk::{forward_stream, run_trials, walk_endpoint, StepDistribution};
use crate::word::GroupElement;

use super::stats::{wilson, Z95};

/// `tau(g)`: the length of the cyclic core of the free part.
pub fn translation_length_exact(g: &GroupElement) -> usize {
    g.word.cyclic_reduce().0.len()
}

/// `d(x_0, g x_0) - 2 (g^-1 x_0 . g x_0)`, or `None` when
/// `d(x_0, g x_0) < 2 (g^-1 x_0 . g x_0) + c0`.
pub fn translation_length_formula(space: &ModelSpace, g: &GroupElement, c0: Q) -> Result<Option<Q>> {
    let x0 = &space.basepoint;
    let gx = space.orbit(g)?;
    let ginvx = space.orbit(&g.inv())?;
    let d = space.dist(x0, &gx)?;
    let gp = gromov_product(space, x0, &ginvx, &gx)?;
    if d < q(2) * gp + c0 {
        return Ok(None);
    }
    Ok(Some(d - q(2) * gp))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TranslationSample {
    pub tau_exact: usize,
    pub tau_formula: Option<Q>,
}

impl TranslationSample {
    pub fn guard_held(&self) -> bool {
        self.tau_formula.is_some()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TranslationStats {
    pub n: usize,
    pub l: f64,
    pub samples: Vec<TranslationSample>,
    /// Fraction of trials with `tau(w_n) <= L n`.
    pub tail: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    /// Whether the formula matched the exact value on every sample whose
    /// guard held, and `tau(w_n) = |w_n^2| - |w_n|` on every sample.
    pub formula_agrees: bool,
}

/// Tail of `tau(w_n)` below `L n`, with formula cross-checks on every sample.
pub fn translation_growth(
    space: &ModelSpace,
    mu: &StepDistribution,
    n: usize,
    l: f64,
    trials: u64,
    seed: u64,
    c0: Q,
) -> Result<TranslationStats> {
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let results = run_trials(trials, |t| -> Result<(TranslationSample, bool)> {
        let w = walk_endpoint(mu, n, seed, forward_stream(t));
        let exact = translation_length_exact(&w);
        let formula = translation_length_formula(space, &w, c0)?;
        let square_ok = w.word.is_identity()
            || w.word.mul(&w.word).len() - w.word.len() == exact;
        let formula_ok = formula.is_none_or(|f| f == q(exact as i64));
        Ok((
            TranslationSample {
                tau_exact: exact,
                tau_formula: formula,
            },
            square_ok && formula_ok,
        ))
    });
    let mut samples = Vec::with_capacity(results.len());
    let mut agrees = true;
    for r in results {
        let (s, ok) = r?;
        agrees &= ok;
        samples.push(s);
    }
    let hits = samples
        .iter()
        .filter(|s| s.tau_exact as f64 <= l * n as f64)
        .count() as u64;
    let (lo, hi) = wilson(hits, trials, Z95);
    Ok(TranslationStats {
        n,
        l,
        samples,
        tail: hits as f64 / trials as f64,
        wilson_lo: lo,
        wilson_hi: hi,
        formula_agrees: agrees,
    })
}
