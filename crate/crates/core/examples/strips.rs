// Bounded-geometry strips: the axis of a4, its linear growth and the
// strip of a two-sided random walk.

use gromov_walk::boundary::End;
use gromov_walk::strips::{
    acylindricity_constant, cover_factor, enumerate_bg_in_ball, strip_trial, BGParams, BoundaryPair,
};
use gromov_walk::space::{q, ModelSpace};
use gromov_walk::walk::{default_margin, StepDistribution};

pub fn run_example() -> gromov_walk::Result<()> {
    let f2 = ModelSpace::free(2);
    let axis = BoundaryPair::new(End::parse("(A)")?, End::parse("(a)")?)?;
    let params = BGParams::new(q(1), q(3), "aaaa".parse()?)?;
    let n = acylindricity_constant(22);
    for r in [0, 5, 10, 20] {
        let count = enumerate_bg_in_ball(&f2, &axis, &params, r, 1 << 20)?.len();
        println!("axis: {count} elements in the {r}-ball, bound {}", n * cover_factor(&params, r));
    }

    let mu = StepDistribution::uniform_generators(2);
    let params = BGParams::new(q(1), q(3), "aba".parse()?)?;
    let s = strip_trial(&f2, &mu, &params, &[100, 200, 400], default_margin(&mu), 41, 0)?;
    for (n, v) in &s.points {
        println!("walk strip: (1/{n}) log(1 + count) = {v:.5}");
    }
    println!("fraction of times in the strip: {:.3}", s.strip_time_density);
    Ok(())
}

fn main() -> gromov_walk::Result<()> {
    run_example()
}
