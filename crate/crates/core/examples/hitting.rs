// Probability that the forward or backward walk ever enters a shadow.

use gromov_walk::coarse::Shadow;
use gromov_walk::estimators::{hitting_prob, Direction};
use gromov_walk::oracle::vertex_hitting_probability;
use gromov_walk::space::{q, ModelPoint, ModelSpace};
use gromov_walk::walk::StepDistribution;

pub fn run_example() -> gromov_walk::Result<()> {
    let f2 = ModelSpace::free(2);
    let mu = StepDistribution::uniform_generators(2);
    let s = Shadow::new(f2.basepoint.clone(), ModelPoint::tree("ab"), q(0));
    for direction in [Direction::Forward, Direction::Backward] {
        let est = hitting_prob(&f2, &mu, &s, 400, 20_000, 5, direction)?;
        let (lo, hi) = est.wilson();
        println!("{direction:?}: {:.4} in [{lo:.4}, {hi:.4}]", est.estimate());
    }
    println!("exact probability of ever reaching ab: {:.4}", vertex_hitting_probability(2, 2));
    Ok(())
}

fn main() -> gromov_walk::Result<()> {
    run_example()
}
