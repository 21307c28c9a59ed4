// Gromov products at the midpoint of the walk.

use gromov_walk::estimators::midpoint_gp_experiment;
use gromov_walk::walk::StepDistribution;

pub fn run_example() -> gromov_walk::Result<()> {
    let mu = StepDistribution::uniform_generators(2);
    let st = midpoint_gp_experiment(&mu, 1000, 500, 43)?;
    println!("P((w_m . w_n) >= 200) = {:.3}", st.frac_mid_at_least(200.0));
    println!("P((u_m^-1 . w_m) <= 10) = {:.3}", st.frac_cross_at_most(10.0));
    Ok(())
}

fn main() -> gromov_walk::Result<()> {
    run_example()
}
