//! Persistent subsegments of the k-step walk.

use crate::error::{Error, Result};
use crate::space::{q, ModelSpace, Q};
use crate::walk::{run_trials, sample_trial, SamplePath, StepDistribution};

use super::hitting::pilot_max_hitting;
use super::stats::{wilson, Z99};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PersistenceParams {
    pub k: usize,
    pub r: Q,
    pub c: Q,
    pub c0: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathPersistence {
    /// `persistent[i]` for the segment `[x_i, x_{i+1}]`, `x_i = w_{ki}`.
    pub persistent: Vec<bool>,
    /// `Z = #{i : [x_i, x_{i+1}] persistent}`.
    pub z: usize,
    /// `d(x_0, x_n)`.
    pub distance: usize,
    /// Whether `d(x_0, x_n) >= (c0 / 2) Z`.
    pub lower_bound_holds: bool,
}

/// Evaluates the three persistence conditions for the `count` segments of
/// the k-step walk along `path`:
///
/// 1. `d(x_i, x_{i+1}) >= 2R + 2C + C0`;
/// 2. `x_j` lies in `S_{x_{i+1}}(x_i, R)` for every `j <= i`;
/// 3. `x_j` lies in `S_{x_i}(x_{i+1}, R)` for every `i + 1 <= j <= count`.
pub fn persistent_segments(
    path: &SamplePath,
    count: usize,
    params: &PersistenceParams,
) -> Result<PathPersistence> {
    let PersistenceParams { k, r, c, c0 } = *params;
    if k == 0 {
        return Err(Error::Config("k must be at least 1".into()));
    }
    if path.len() < k * count {
        return Err(Error::ShiftTooLong {
            shift: k * count,
            len: path.len(),
        });
    }
    let x = |i: usize| i * k;
    let long_enough = q(2) * r + q(2) * c + c0;
    let mut persistent = Vec::with_capacity(count);
    for i in 0..count {
        let d = q(path.dist(x(i), x(i + 1)) as i64);
        let c1 = d >= long_enough;
        // y in S_b(a, R)  <=>  (a . y)_b >= d(a, b) - R
        let c2 = c1 && (0..=i).all(|j| path.gromov_product(x(i + 1), x(i), x(j)) >= d - r);
        let c3 = c2 && (i + 1..=count).all(|j| path.gromov_product(x(i), x(i + 1), x(j)) >= d - r);
        persistent.push(c3);
    }
    let z = persistent.iter().filter(|p| **p).count();
    let distance = path.dist(0, x(count));
    Ok(PathPersistence {
        persistent,
        z,
        distance,
        lower_bound_holds: q(distance as i64) >= c0 / q(2) * q(z as i64),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PersistenceStats {
    pub params: PersistenceParams,
    pub count: usize,
    pub per_trial: Vec<PathPersistence>,
    /// Persistent segments over all segments.
    pub density: f64,
    pub stderr: f64,
    pub wilson99: (f64, f64),
    pub lower_bound_always: bool,
}

pub fn persistence_experiment(
    mu: &StepDistribution,
    params: PersistenceParams,
    count: usize,
    trials: u64,
    seed: u64,
) -> Result<PersistenceStats> {
    if trials == 0 || count == 0 {
        return Err(Error::Config("persistence needs trials >= 1 and count >= 1".into()));
    }
    let per_trial = run_trials(trials, |t| {
        let path = sample_trial(mu, params.k * count, seed, t);
        persistent_segments(&path, count, &params)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let total = trials * count as u64;
    let z: u64 = per_trial.iter().map(|p| p.z as u64).sum();
    let densities: Vec<f64> = per_trial.iter().map(|p| p.z as f64 / count as f64).collect();
    let (density, stderr) = super::stats::mean_stderr(&densities);
    Ok(PersistenceStats {
        params,
        count,
        density,
        stderr,
        wilson99: wilson(z, total, Z99),
        lower_bound_always: per_trial.iter().all(|p| p.lower_bound_holds),
        per_trial,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecipeChoice {
    pub r: usize,
    /// Pilot hitting probability at the chosen `r`.
    pub hitting: Q,
    pub k: usize,
    /// Pilot estimate of `P(chi_1^k <= 2R + 2C + C0)` at the chosen `k`.
    pub short_step: f64,
}

/// Chooses `(k, R)` by pilot runs: `R` is the least integer whose pilot
/// hitting probability is at most `eps`, and `k` the least with
/// `P(d(x_0, w_k x_0) <= 2R + 2C + C0) < eps`.
#[allow(clippy::too_many_arguments)]
pub fn choose_params(
    space: &ModelSpace,
    mu: &StepDistribution,
    eps: f64,
    c: Q,
    c0: Q,
    pilot_trials: u64,
    horizon: usize,
    seed: u64,
) -> Result<RecipeChoice> {
    let eps_q = Q::new((eps * 1e6).round() as i64, 1_000_000);
    let mut chosen = None;
    for r in 1..=32 {
        let h = pilot_max_hitting(space, mu, r, horizon, pilot_trials, seed)?;
        if h <= eps_q {
            chosen = Some((r, h));
            break;
        }
    }
    let (r, hitting) = chosen.ok_or_else(|| Error::Config("no R up to 32 meets the pilot target".into()))?;
    let bound = q(2) * q(r as i64) + q(2) * c + c0;
    for k in 1..=10_000 {
        let short = run_trials(pilot_trials, |t| {
            let w = crate::walk::walk_endpoint(mu, k, seed ^ 0x5eed, crate::walk::forward_stream(t));
            q(w.len() as i64) <= bound
        });
        let frac = short.iter().filter(|s| **s).count() as f64 / pilot_trials as f64;
        if frac < eps {
            return Ok(RecipeChoice {
                r,
                hitting,
                k,
                short_step: frac,
            });
        }
    }
    Err(Error::Config("no k up to 10000 meets the pilot target".into()))
}
