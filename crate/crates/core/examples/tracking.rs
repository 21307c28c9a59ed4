// Sublinear tracking of the walk by the geodesic ray to its limit.

use gromov_walk::estimators::tracking_series;
use gromov_walk::walk::{default_margin, sample_trial, StepDistribution};

pub fn run_example() -> gromov_walk::Result<()> {
    let mu = StepDistribution::uniform_generators(2);
    let n = 2000;
    for trial in 0..5 {
        let path = sample_trial(&mu, n + 200, 31, trial);
        let s = tracking_series(&path, n, default_margin(&mu), 100)?;
        println!(
            "trial {trial}: d(w_n, ray)/n = {:.5}, max d/ln k = {:.3}",
            s.final_ratio, s.max_log_ratio
        );
    }
    Ok(())
}

fn main() -> gromov_walk::Result<()> {
    run_example()
}
