// Probability that the walk has travelled at most n/4 by time n.

use gromov_walk::estimators::drift_tail;
use gromov_walk::oracle::distance_cdf;
use gromov_walk::walk::StepDistribution;

pub fn run_example() -> gromov_walk::Result<()> {
    let mu = StepDistribution::uniform_generators(2);
    let ns = [20, 40, 80];
    for e in drift_tail(&mu, &ns, 0.25, 50_000, 11)? {
        println!(
            "n = {:3}: p = {:.5} [{:.5}, {:.5}], exact {:.5}",
            e.n,
            e.p_hat,
            e.wilson_lo,
            e.wilson_hi,
            distance_cdf(2, e.n, e.n as f64 / 4.0)
        );
    }
    Ok(())
}

fn main() -> gromov_walk::Result<()> {
    run_example()
}
