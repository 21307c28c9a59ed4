// Pilot run behind `TRACKING_LOG_CONSTANT`: the largest `d(w_k, gamma) / ln k`
// over `k >= 100` seen in 100 walks of length 10^4, on a seed that no
// acceptance run uses.

use gromov_walk::estimators::stats::quantile;
use gromov_walk::estimators::tracking::{tracking_experiment, PILOT_SEED, TRACKING_LOG_CONSTANT};
use gromov_walk::walk::{default_margin, StepDistribution};

pub fn run_example() -> gromov_walk::Result<()> {
    let mu = StepDistribution::uniform_generators(2);
    let series = tracking_experiment(&mu, 10_000, default_margin(&mu), 100, 100, PILOT_SEED)?;
    let maxes: Vec<f64> = series.iter().map(|s| s.max_log_ratio).collect();
    let worst = maxes.iter().copied().fold(0.0, f64::max);
    println!("pilot max of max d/ln k: {worst:.3}");
    println!("pilot 95% quantile:      {:.3}", quantile(&maxes, 0.95));
    println!("committed constant:      {TRACKING_LOG_CONSTANT}");
    assert!(worst <= TRACKING_LOG_CONSTANT);
    Ok(())
}

fn main() -> gromov_walk::Result<()> {
    run_example()
}
