// Harmonic mass of nested cylinders decays like 3^-r.

use gromov_walk::estimators::decay::alternating_word;
use gromov_walk::estimators::shadow_decay;
use gromov_walk::oracle::cylinder_mass;
use gromov_walk::walk::{default_margin, StepDistribution};

pub fn run_example() -> gromov_walk::Result<()> {
    let mu = StepDistribution::uniform_generators(2);
    let fit = shadow_decay(&mu, 2, 1, 6, &alternating_word(6), 120, default_margin(&mu), 20_000, 23)?;
    for (r, m) in &fit.chain {
        println!("r = {r}: {} mass {:.5}, exact {:.5}", m.prefix, m.mass, cylinder_mass(2, *r));
    }
    println!("fitted slope {:.3} (ln 1/3 = {:.3})", fit.slope, -(3f64.ln()));
    Ok(())
}

fn main() -> gromov_walk::Result<()> {
    run_example()
}
