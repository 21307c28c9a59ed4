//! Seeded random walks on free groups and `F_2 x Z/2`.
//!
//! Every trial owns a ChaCha8 stream: `ChaCha8Rng::seed_from_u64(master)`
//! with `set_stream(s)`, where the forward walk of trial `t` uses stream
//! `2t` and its backward (reflected) walk uses `2t + 1`. Results do not
//! depend on the number of worker threads, which is read from the
//! `GROMOV_WALK_WORKERS` environment variable.

pub mod limit;
pub mod measure;
pub mod path;
pub mod step;

use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use limit::{default_margin, limit_end, limit_point, LimitPrefix};
pub use measure::{empirical_pushforward, stationarity_tv, stationarity_tv_with_noise, EmpiricalMeasure, PushforwardKey};
pub use path::{
    sample_bi_infinite, sample_path, sample_trial, walk_endpoint, walk_visit, BiInfinitePath,
    SamplePath,
};
pub use step::{check_nonelementary, NonElementary, StepAtom, StepDistribution, StepSpec};

pub const WORKERS_ENV: &str = "GROMOV_WALK_WORKERS";

pub fn stream_rng(master: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream);
    rng
}

pub fn forward_stream(trial: u64) -> u64 {
    2 * trial
}

pub fn backward_stream(trial: u64) -> u64 {
    2 * trial + 1
}

fn pool() -> Option<&'static rayon::ThreadPool> {
    static POOL: OnceLock<Option<rayon::ThreadPool>> = OnceLock::new();
    POOL.get_or_init(|| {
        let n: usize = std::env::var(WORKERS_ENV).ok()?.parse().ok()?;
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().ok()
    })
    .as_ref()
}

/// Runs `f(0), ..., f(trials - 1)` in parallel and returns the results in
/// trial order.
pub fn run_trials<T, F>(trials: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match pool() {
        Some(p) => p.install(|| (0..trials).into_par_iter().map(&f).collect()),
        None => (0..trials).into_par_iter().map(&f).collect(),
    }
}

/// [`run_trials`] on a dedicated pool of `workers` threads.
pub fn run_trials_with_workers<T, F>(workers: usize, trials: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| (0..trials).into_par_iter().map(&f).collect())
}
