//! Gromov products at the midpoint of the walk.

use crate::error::{Error, Result};
use crate::walk::{forward_stream, run_trials, walk_visit, StepDistribution};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq)]
pub struct MidpointStats {
    pub n: usize,
    pub m: usize,
    /// `(w_m x_0 . w_n x_0)_{x_0}` per trial.
    pub gp_mid: Vec<f64>,
    /// `(u_m^-1 x_0 . w_m x_0)_{x_0}` with `u_m = w_m^-1 w_n`, per trial.
    pub gp_cross: Vec<f64>,
}

fn gp(x: &Word, y: &Word) -> f64 {
    (x.len() + y.len() - x.dist(y)) as f64 / 2.0
}

impl MidpointStats {
    /// Fraction of trials with `gp_mid >= level`.
    pub fn frac_mid_at_least(&self, level: f64) -> f64 {
        self.gp_mid.iter().filter(|x| **x >= level).count() as f64 / self.gp_mid.len() as f64
    }

    /// Fraction of trials with `gp_cross <= level`.
    pub fn frac_cross_at_most(&self, level: f64) -> f64 {
        self.gp_cross.iter().filter(|x| **x <= level).count() as f64 / self.gp_cross.len() as f64
    }
}

/// Runs the walk to `n` and records both products at `m = ceil(n / 2)`.
pub fn midpoint_gp_experiment(mu: &StepDistribution, n: usize, trials: u64, seed: u64) -> Result<MidpointStats> {
    if trials == 0 || n == 0 {
        return Err(Error::Config("midpoint needs n >= 1 and trials >= 1".into()));
    }
    let m = n.div_ceil(2);
    let pairs = run_trials(trials, |t| {
        let mut wm = Word::identity();
        let mut wn = Word::identity();
        walk_visit(mu, n, seed, forward_stream(t), |k, w| {
            if k == m {
                wm = w.word.clone();
            }
            if k == n {
                wn = w.word.clone();
            }
        });
        let u_inv = wn.inv().mul(&wm);
        (gp(&wm, &wn), gp(&u_inv, &wm))
    });
    Ok(MidpointStats {
        n,
        m,
        gp_mid: pairs.iter().map(|p| p.0).collect(),
        gp_cross: pairs.iter().map(|p| p.1).collect(),
    })
}
