// Seeded sample paths, their boundary limits and two-sided walks.

use gromov_walk::strips::walk_pair;
use gromov_walk::walk::{default_margin, limit_end, sample_bi_infinite, sample_trial, StepDistribution};

pub fn run_example() -> gromov_walk::Result<()> {
    let mu = StepDistribution::uniform_generators(2);
    let path = sample_trial(&mu, 200, 42, 0);
    for k in [10, 50, 100, 200] {
        println!("|w_{k}| = {}", path.word_len(k));
    }
    let margin = default_margin(&mu);
    let end = limit_end(&path, margin)?;
    println!("limit known to depth {:?}: {end}", end.known_depth());
    let again = sample_trial(&mu, 200, 42, 0);
    assert_eq!(path.location(200), again.location(200));

    let bi = sample_bi_infinite(&mu, 100, 100, 42, 0);
    let pair = walk_pair(&bi, margin)?;
    println!("backward and forward limits split after {} letters", pair.divergence());
    Ok(())
}

fn main() -> gromov_walk::Result<()> {
    run_example()
}
