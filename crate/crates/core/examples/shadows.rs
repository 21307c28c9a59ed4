// Shadows in the tree: the product definition, its horofunction form and
// the complementary shadow that covers the rest.

use gromov_walk::coarse::{default_slack, shadow_complement_cover, shadow_contains, Shadow};
use gromov_walk::horo::{horo_eval, Horofunction};
use gromov_walk::space::{q, ModelPoint, ModelSpace};

pub fn run_example() -> gromov_walk::Result<()> {
    let f2 = ModelSpace::free(2);
    let s = Shadow::new(f2.basepoint.clone(), ModelPoint::tree("ab"), q(1));
    let depth = s.depth(&f2)?;
    let ball = f2.ball(&f2.basepoint, 4)?;
    let inside: Vec<_> = ball.iter().filter(|y| shadow_contains(&f2, &s, y).unwrap()).collect();
    println!("{} of {} points of the 4-ball lie in S_1(ab, 1)", inside.len(), ball.len());
    for y in &ball {
        let rho = Horofunction::orbit(&f2, (*y).clone());
        let by_horo = horo_eval(&f2, &rho, &s.center)? <= depth;
        assert_eq!(by_horo, shadow_contains(&f2, &s, y)?);
    }
    println!("membership agrees with rho_y(ab) <= {depth}");

    let cover = shadow_complement_cover(&f2, &s, default_slack(&f2))?;
    let missed = ball
        .iter()
        .filter(|y| !shadow_contains(&f2, &s, y).unwrap() && !shadow_contains(&f2, &cover, y).unwrap())
        .count();
    println!("complement shadow centred at {} misses {missed} points", cover.center);
    Ok(())
}

fn main() -> gromov_walk::Result<()> {
    run_example()
}
