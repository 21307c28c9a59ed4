// Translation lengths: cyclic reduction, the Gromov-product formula and the
// growth of tau(w_n) along the walk.

use gromov_walk::estimators::{translation_growth, translation_length_exact, translation_length_formula};
use gromov_walk::space::{q, ModelSpace};
use gromov_walk::walk::StepDistribution;

pub fn run_example() -> gromov_walk::Result<()> {
    let f2 = ModelSpace::free(2);
    for s in ["ab", "abA", "baBAbabA", "aaBAA"] {
        let g = f2.parse_element(s)?;
        println!(
            "tau({s}) = {} by cyclic reduction, {:?} by the formula",
            translation_length_exact(&g),
            translation_length_formula(&f2, &g, q(1))?
        );
    }
    let mu = StepDistribution::uniform_generators(2);
    let st = translation_growth(&f2, &mu, 200, 0.25, 500, 3, q(1))?;
    println!("P(tau(w_200) <= 50) = {:.4}, formula agreed: {}", st.tail, st.formula_agrees);
    Ok(())
}

fn main() -> gromov_walk::Result<()> {
    run_example()
}
