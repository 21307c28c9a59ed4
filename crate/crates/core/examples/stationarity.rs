// The hitting measure is mu-stationary: convolving the empirical boundary
// measure with mu returns it up to sampling noise.

use gromov_walk::walk::{default_margin, empirical_pushforward, stationarity_tv_with_noise, PushforwardKey, StepDistribution};

pub fn run_example() -> gromov_walk::Result<()> {
    let mu = StepDistribution::uniform_generators(2);
    let d = 2;
    let key = PushforwardKey::BoundaryPrefix {
        d: d + mu.max_step_len(),
        margin: default_margin(&mu),
    };
    let deep = empirical_pushforward(&mu, 40, 50_000, key, 37, false)?;
    let (tv, noise) = stationarity_tv_with_noise(&mu, &deep, d)?;
    println!("depth {d}: TV(mu * nu, nu) = {tv:.5}, noise scale {noise:.5}");
    Ok(())
}

fn main() -> gromov_walk::Result<()> {
    run_example()
}
