//! Sublinear tracking of the limit geodesic.

use crate::error::{Error, Result};
use crate::walk::{run_trials, sample_trial, SamplePath, StepDistribution};

/// Upper bound for `max_{k >= 100} d(w_k x_0, gamma) / ln k` on the simple
/// walk on `F_2` up to `n = 10^4`: the pilot maximum over 100 walks on
/// [`PILOT_SEED`], rounded up (see `examples/calibrate_tracking.rs`).
pub const TRACKING_LOG_CONSTANT: f64 = 2.0;

pub const PILOT_SEED: u64 = 0x7261_636b;

#[derive(Clone, Debug, PartialEq)]
pub struct TrackingSeries {
    /// `d(w_k x_0, gamma)` for `k = 0..=n`.
    pub distances: Vec<u32>,
    /// `d(w_n x_0, gamma) / n`.
    pub final_ratio: f64,
    /// `max d(w_k x_0, gamma) / ln k` over `k >= log_from`.
    pub max_log_ratio: f64,
}

/// Distances from `w_0, ..., w_n` to the ray from `x_0` to the limit point.
///
/// The limit point is read off the end of `path` (which must extend past
/// `n`) to depth `|w_N| - margin`. In the tree the distance from `w_k` to the
/// ray is `|w_k| - cp(w_k, ray)`; it is only determined when `w_k` leaves the
/// known part of the ray, otherwise the result is `Unresolved`.
pub fn tracking_series(path: &SamplePath, n: usize, margin: usize, log_from: usize) -> Result<TrackingSeries> {
    let big_n = path.len();
    if n > big_n {
        return Err(Error::ShiftTooLong { shift: n, len: big_n });
    }
    let known = path.word_len(big_n).saturating_sub(margin);
    let mut distances = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let cp = path.common_prefix(k, big_n).min(known);
        let len = path.word_len(k);
        if cp == known && len > known {
            return Err(Error::Unresolved {
                known,
                needed: len,
            });
        }
        distances.push((len - cp) as u32);
    }
    let final_ratio = if n == 0 { 0.0 } else { distances[n] as f64 / n as f64 };
    let max_log_ratio = (log_from.max(2)..=n)
        .map(|k| distances[k] as f64 / (k as f64).ln())
        .fold(0.0, f64::max);
    Ok(TrackingSeries {
        distances,
        final_ratio,
        max_log_ratio,
    })
}

/// Samples each trial for `2n` steps, doubling until the limit ray covers
/// the first `n` locations.
pub fn tracking_trial(
    mu: &StepDistribution,
    n: usize,
    margin: usize,
    log_from: usize,
    seed: u64,
    trial: u64,
) -> Result<TrackingSeries> {
    let mut len = 2 * n.max(1);
    loop {
        let path = sample_trial(mu, len, seed, trial);
        match tracking_series(&path, n, margin, log_from) {
            Err(Error::Unresolved { .. }) if len < 64 * n.max(1) => len *= 2,
            other => return other,
        }
    }
}

pub fn tracking_experiment(
    mu: &StepDistribution,
    n: usize,
    margin: usize,
    log_from: usize,
    trials: u64,
    seed: u64,
) -> Result<Vec<TrackingSeries>> {
    run_trials(trials, |t| tracking_trial(mu, n, margin, log_from, seed, t))
        .into_iter()
        .collect()
}
