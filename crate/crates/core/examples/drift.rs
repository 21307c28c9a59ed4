// Drift of the simple walk on F2 against the exact expectation.

use gromov_walk::estimators::estimate_drift;
use gromov_walk::oracle::expected_distance;
use gromov_walk::walk::StepDistribution;

pub fn run_example() -> gromov_walk::Result<()> {
    let mu = StepDistribution::uniform_generators(2);
    for n in [100, 1000, 5000] {
        let est = estimate_drift(&mu, n, 100, 7)?;
        let exact = expected_distance(2, n) / n as f64;
        println!("n = {n:5}: L = {:.4} +- {:.4}, exact E|w_n|/n = {exact:.4}", est.l_hat, est.stderr);
    }
    Ok(())
}

fn main() -> gromov_walk::Result<()> {
    run_example()
}
