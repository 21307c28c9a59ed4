//! Exact reference values for the simple random walk on a free group.
//!
//! The distance `|w_n|` of the simple walk on `F_r` is a birth-death chain:
//! from 0 it steps to 1, elsewhere it steps up with probability
//! `(2r - 1) / 2r` and down otherwise. Its law is computed here by dynamic
//! programming, independently of the simulator.

/// Law of `|w_n|` as a vector indexed by distance.
pub fn distance_distribution(rank: u8, n: usize) -> Vec<f64> {
    let up = (2.0 * rank as f64 - 1.0) / (2.0 * rank as f64);
    let down = 1.0 - up;
    let mut p = vec![0.0; n + 2];
    p[0] = 1.0;
    for step in 0..n {
        let mut next = vec![0.0; n + 2];
        for d in 0..=step {
            let m = p[d];
            if m == 0.0 {
                continue;
            }
            if d == 0 {
                next[1] += m;
            } else {
                next[d + 1] += m * up;
                next[d - 1] += m * down;
            }
        }
        p = next;
    }
    p.truncate(n + 1);
    p
}

/// `E |w_n|`.
pub fn expected_distance(rank: u8, n: usize) -> f64 {
    distance_distribution(rank, n)
        .iter()
        .enumerate()
        .map(|(d, p)| d as f64 * p)
        .sum()
}

/// `P(|w_n| <= threshold)`.
pub fn distance_cdf(rank: u8, n: usize, threshold: f64) -> f64 {
    distance_distribution(rank, n)
        .iter()
        .enumerate()
        .filter(|(d, _)| *d as f64 <= threshold)
        .map(|(_, p)| p)
        .sum()
}

/// Asymptotic drift `(r - 1) / r` of the simple walk on `F_r`.
pub fn drift(rank: u8) -> f64 {
    (rank as f64 - 1.0) / rank as f64
}

/// Harmonic measure of a depth-`r` cylinder for the simple walk on `F_rank`:
/// `(1 / 2 rank) (1 / (2 rank - 1))^(r - 1)`.
pub fn cylinder_mass(rank: u8, r: usize) -> f64 {
    if r == 0 {
        return 1.0;
    }
    let k = 2.0 * rank as f64;
    (1.0 / k) * (1.0 / (k - 1.0)).powi(r as i32 - 1)
}

/// Probability that the simple walk on `F_rank` ever reaches a given vertex
/// at distance `m` from the start.
pub fn vertex_hitting_probability(rank: u8, m: usize) -> f64 {
    (1.0 / (2.0 * rank as f64 - 1.0)).powi(m as i32)
}
