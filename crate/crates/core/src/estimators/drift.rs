//! Linear progress of the walk and its lower tail.

use crate::error::{Error, Result};
use crate::walk::{check_nonelementary, forward_stream, run_trials, walk_visit, StepDistribution};

use super::stats::{mean_stderr, wilson, Z95};

/// Length of support products searched for independent hyperbolic elements.
pub const NONELEMENTARY_SEARCH_LEN: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct DriftEstimate {
    pub l_hat: f64,
    pub stderr: f64,
    pub n: usize,
    pub trials: u64,
}

/// Mean and standard error of `d(x_0, w_n x_0) / n`; rejects elementary measures.
pub fn estimate_drift(mu: &StepDistribution, n: usize, trials: u64, seed: u64) -> Result<DriftEstimate> {
    require_nonelementary(mu)?;
    estimate_drift_unchecked(mu, n, trials, seed)
}

pub(crate) fn require_nonelementary(mu: &StepDistribution) -> Result<()> {
    if check_nonelementary(mu, NONELEMENTARY_SEARCH_LEN).holds() {
        Ok(())
    } else {
        Err(Error::Elementary(format!(
            "no two independent hyperbolic elements among products of up to {NONELEMENTARY_SEARCH_LEN} steps"
        )))
    }
}

/// [`estimate_drift`] without the non-elementary check (deterministic walks).
pub fn estimate_drift_unchecked(
    mu: &StepDistribution,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<DriftEstimate> {
    if n == 0 || trials == 0 {
        return Err(Error::Config("drift needs n >= 1 and trials >= 1".into()));
    }
    let ratios = run_trials(trials, |t| {
        let d = crate::walk::walk_endpoint(mu, n, seed, forward_stream(t)).len();
        d as f64 / n as f64
    });
    let (l_hat, stderr) = mean_stderr(&ratios);
    Ok(DriftEstimate {
        l_hat,
        stderr,
        n,
        trials,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailEstimate {
    pub n: usize,
    pub l: f64,
    pub hits: u64,
    pub trials: u64,
    pub p_hat: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

/// `P(d(x_0, w_n x_0) <= L n)` for each `n` in `ns`, all read off the same
/// trials (one walk of length `max ns` per trial).
pub fn drift_tail(
    mu: &StepDistribution,
    ns: &[usize],
    l: f64,
    trials: u64,
    seed: u64,
) -> Result<Vec<TailEstimate>> {
    if l.is_nan() || l <= 0.0 {
        return Err(Error::Config(format!("tail level L must be positive, got {l}")));
    }
    if trials == 0 || ns.is_empty() {
        return Err(Error::Config("tail needs trials >= 1 and at least one n".into()));
    }
    let horizon = *ns.iter().max().unwrap();
    let per_trial = run_trials(trials, |t| {
        let mut below = vec![false; ns.len()];
        walk_visit(mu, horizon, seed, forward_stream(t), |k, w| {
            for (i, n) in ns.iter().enumerate() {
                if k == *n {
                    below[i] = w.len() as f64 <= l * *n as f64;
                }
            }
        });
        below
    });
    Ok(ns
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let hits = per_trial.iter().filter(|b| b[i]).count() as u64;
            let (lo, hi) = wilson(hits, trials, Z95);
            TailEstimate {
                n: *n,
                l,
                hits,
                trials,
                p_hat: hits as f64 / trials as f64,
                wilson_lo: lo,
                wilson_hi: hi,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{Alphabet, GroupElement};

    fn g(s: &str) -> GroupElement {
        s.parse().unwrap()
    }

    #[test]
    fn deterministic_walk_has_unit_drift() {
        let mu = StepDistribution::point_mass(Alphabet::Free(2), g("a")).unwrap();
        assert!(matches!(estimate_drift(&mu, 10, 5, 0), Err(Error::Elementary(_))));
        let d = estimate_drift_unchecked(&mu, 10, 5, 0).unwrap();
        assert_eq!((d.l_hat, d.stderr), (1.0, 0.0));
        let t = drift_tail(&mu, &[20], 0.5, 10, 0).unwrap();
        assert_eq!(t[0].p_hat, 0.0);
        let t = drift_tail(&mu, &[20], 1.0, 10, 0).unwrap();
        assert_eq!(t[0].p_hat, 1.0);
    }

    #[test]
    fn elementary_measures_are_rejected() {
        let mu = StepDistribution::new(Alphabet::Free(2), vec![(g("a"), 0.5), (g("A"), 0.5)]).unwrap();
        assert!(matches!(estimate_drift(&mu, 10, 5, 0), Err(Error::Elementary(_))));
    }

    #[test]
    fn uniform_drift_near_one_half() {
        let mu = StepDistribution::uniform_generators(2);
        let d = estimate_drift(&mu, 2000, 100, 17).unwrap();
        assert!((d.l_hat - 0.5).abs() < 4.0 * d.stderr + 0.01, "{d:?}");
    }
}
