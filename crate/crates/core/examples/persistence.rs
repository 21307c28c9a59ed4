// Persistent joints: pick (k, R) from a pilot run, then measure their density.

use gromov_walk::estimators::persistence::choose_params;
use gromov_walk::estimators::{persistence_experiment, PersistenceParams};
use gromov_walk::space::{q, ModelSpace};
use gromov_walk::walk::StepDistribution;

pub fn run_example() -> gromov_walk::Result<()> {
    let f2 = ModelSpace::free(2);
    let mu = StepDistribution::uniform_generators(2);
    let choice = choose_params(&f2, &mu, 0.1, q(0), q(1), 1000, 200, 17)?;
    println!("recipe: R = {}, k = {}, pilot hitting bound {}", choice.r, choice.k, choice.hitting);
    let params = PersistenceParams {
        k: choice.k,
        r: q(choice.r as i64),
        c: q(0),
        c0: q(1),
    };
    let st = persistence_experiment(&mu, params, 20, 100, 18)?;
    let (lo, hi) = st.wilson99;
    println!("density {:.3}, 99% interval [{lo:.3}, {hi:.3}]", st.density);
    println!("distance lower bound held on every path: {}", st.lower_bound_always);
    Ok(())
}

fn main() -> gromov_walk::Result<()> {
    run_example()
}
