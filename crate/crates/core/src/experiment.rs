//! Running a validated configuration.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Value};

use crate::config::{EstimatorParams, Experiment, ExperimentConfig};
use crate::error::Result;
use crate::estimators::decay::alternating_word;
use crate::estimators::persistence::{choose_params, PersistenceParams};
use crate::estimators::{
    drift_tail, estimate_drift, hitting_prob, midpoint_gp_experiment, persistence_experiment, shadow_decay,
    tracking_experiment, translation_growth,
};
use crate::oracle;
use crate::output::{cell, fcell, record_path, write_atomic, ResultRecord, Table};
use crate::space::{q_to_f64, Model};
use crate::walk::{default_margin, empirical_pushforward, run_trials, stationarity_tv, PushforwardKey, StepDistribution};

/// Everything a run produces; only `record.wall_clock_s` varies between
/// identical runs.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub table: Table,
    pub record: ResultRecord,
    /// Invariants that failed on sampled data.
    pub failures: Vec<String>,
}

impl RunOutput {
    /// Writes the CSV and, next to it, the JSON record.
    pub fn write(&self, csv_path: &Path) -> Result<PathBuf> {
        write_atomic(csv_path, &self.table.to_csv()?)?;
        let rec = record_path(csv_path);
        let mut text = serde_json::to_string_pretty(&self.record).expect("record serializes");
        text.push('\n');
        write_atomic(&rec, text.as_bytes())?;
        Ok(rec)
    }
}

/// Rank of the free group when `mu` is the simple random walk.
pub fn simple_walk_rank(model: &Model, mu: &StepDistribution) -> Option<u8> {
    let Model::Free { rank } = *model else {
        return None;
    };
    let support = mu.support();
    let p = 1.0 / (2.0 * rank as f64);
    let simple = support.len() == 2 * rank as usize
        && support.iter().all(|(g, w)| g.word.len() == 1 && !g.central && (w - p).abs() < 1e-12);
    simple.then_some(rank)
}

pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    let exp = config.validate()?;
    let start = Instant::now();
    let (table, payload, failures) = run_validated(&exp)?;
    let record = ResultRecord::new(
        config.digest(),
        exp.estimator.name(),
        payload,
        start.elapsed().as_secs_f64(),
    );
    Ok(RunOutput {
        table,
        record,
        failures,
    })
}

fn run_validated(exp: &Experiment) -> Result<(Table, Value, Vec<String>)> {
    let Experiment {
        space,
        mu,
        estimator,
        seed,
        trials,
    } = exp;
    let (seed, trials) = (*seed, *trials);
    let simple = simple_walk_rank(&space.model, mu);
    let margin_or = |m: Option<usize>| m.unwrap_or_else(|| default_margin(mu));
    let mut failures = Vec::new();
    let out = match estimator {
        EstimatorParams::Drift(p) => {
            let est = estimate_drift(mu, p.n, trials, seed)?;
            let oracle = simple.map(|r| oracle::expected_distance(r, p.n) / p.n as f64);
            let mut t = Table::new(&["n", "trials", "l_hat", "stderr", "oracle"]);
            t.push(vec![
                cell(p.n),
                cell(trials),
                fcell(est.l_hat),
                fcell(est.stderr),
                oracle.map(fcell).unwrap_or_default(),
            ]);
            let payload = json!({"l_hat": est.l_hat, "stderr": est.stderr, "oracle": oracle});
            (t, payload)
        }
        EstimatorParams::Tail(p) => {
            let tails = drift_tail(mu, &p.ns, p.l, trials, seed)?;
            let mut t = Table::new(&["n", "l", "hits", "trials", "p_hat", "wilson_lo", "wilson_hi", "oracle"]);
            for e in &tails {
                let oracle = simple.map(|r| oracle::distance_cdf(r, e.n, e.l * e.n as f64));
                t.push(vec![
                    cell(e.n),
                    fcell(e.l),
                    cell(e.hits),
                    cell(e.trials),
                    fcell(e.p_hat),
                    fcell(e.wilson_lo),
                    fcell(e.wilson_hi),
                    oracle.map(fcell).unwrap_or_default(),
                ]);
            }
            let payload = json!({"p_hat": tails.iter().map(|e| e.p_hat).collect::<Vec<_>>()});
            (t, payload)
        }
        EstimatorParams::Translation { params, c0 } => {
            let st = translation_growth(space, mu, params.n, params.l, trials, seed, *c0)?;
            let mut t = Table::new(&["trial", "tau_exact", "tau_formula"]);
            for (i, s) in st.samples.iter().enumerate() {
                t.push(vec![
                    cell(i),
                    cell(s.tau_exact),
                    s.tau_formula.map(cell).unwrap_or_default(),
                ]);
            }
            if !st.formula_agrees {
                failures.push("translation: guarded formula disagrees with the cyclic core length".into());
            }
            let payload = json!({
                "tail": st.tail, "wilson_lo": st.wilson_lo, "wilson_hi": st.wilson_hi,
                "formula_agrees": st.formula_agrees,
            });
            (t, payload)
        }
        EstimatorParams::Hitting {
            params,
            shadow,
            direction,
        } => {
            let est = hitting_prob(space, mu, shadow, params.horizon, trials, seed, *direction)?;
            let mut t = Table::new(&["horizon", "p_hat"]);
            for h in 0..=params.horizon {
                t.push(vec![cell(h), fcell(est.at_horizon(h))]);
            }
            let (lo, hi) = est.wilson();
            let payload = json!({"estimate": est.estimate(), "wilson_lo": lo, "wilson_hi": hi});
            (t, payload)
        }
        EstimatorParams::Persistence { params, c, c0, r } => {
            let (k, r_value, recipe) = match (params.k, r) {
                (Some(k), Some(r)) => (k, *r, Value::Null),
                _ => {
                    let choice = choose_params(
                        space,
                        mu,
                        params.eps,
                        *c,
                        *c0,
                        params.pilot_trials,
                        params.pilot_horizon,
                        seed ^ 0x9e37_79b9_7f4a_7c15,
                    )?;
                    let recipe = json!({
                        "r": choice.r, "k": choice.k, "hitting": q_to_f64(choice.hitting),
                        "short_step": choice.short_step,
                    });
                    (choice.k, crate::space::q(choice.r as i64), recipe)
                }
            };
            let pp = PersistenceParams {
                k,
                r: r_value,
                c: *c,
                c0: *c0,
            };
            let st = persistence_experiment(mu, pp, params.count, trials, seed)?;
            let mut t = Table::new(&["trial", "z", "distance", "lower_bound_holds"]);
            for (i, p) in st.per_trial.iter().enumerate() {
                t.push(vec![cell(i), cell(p.z), cell(p.distance), cell(p.lower_bound_holds)]);
            }
            if !st.lower_bound_always {
                failures.push("persistence: d(x0, w_kn x0) >= (C0/2) Z failed on a sampled path".into());
            }
            let payload = json!({
                "k": k, "r": q_to_f64(r_value), "recipe": recipe, "density": st.density,
                "stderr": st.stderr, "wilson99": [st.wilson99.0, st.wilson99.1],
                "lower_bound_always": st.lower_bound_always,
            });
            (t, payload)
        }
        EstimatorParams::Decay { params, reference } => {
            let Model::Free { rank } = space.model else { unreachable!("validated") };
            let reference = reference.clone().unwrap_or_else(|| alternating_word(params.r2));
            let fit = shadow_decay(
                mu,
                rank,
                params.r1,
                params.r2,
                &reference,
                params.n,
                margin_or(params.margin),
                trials,
                seed,
            )?;
            let mut t = Table::new(&["r", "prefix", "count", "mass", "oracle"]);
            for (r, m) in &fit.chain {
                t.push(vec![
                    cell(r),
                    cell(&m.prefix),
                    cell(m.count),
                    fcell(m.mass),
                    simple.map(|k| fcell(oracle::cylinder_mass(k, *r))).unwrap_or_default(),
                ]);
            }
            let payload = json!({
                "slope": fit.slope, "intercept": fit.intercept, "residual": fit.residual,
                "resolved": fit.resolved, "unresolved": fit.unresolved, "dropped": fit.dropped,
            });
            (t, payload)
        }
        EstimatorParams::Tracking(p) => {
            let series = tracking_experiment(mu, p.n, margin_or(p.margin), p.log_from, trials, seed)?;
            let mut t = Table::new(&["trial", "final_ratio", "max_log_ratio"]);
            for (i, s) in series.iter().enumerate() {
                t.push(vec![cell(i), fcell(s.final_ratio), fcell(s.max_log_ratio)]);
            }
            let finals: Vec<f64> = series.iter().map(|s| s.final_ratio).collect();
            let maxes: Vec<f64> = series.iter().map(|s| s.max_log_ratio).collect();
            let payload = json!({
                "final_ratio_q95": crate::estimators::stats::quantile(&finals, 0.95),
                "max_log_ratio_q95": crate::estimators::stats::quantile(&maxes, 0.95),
            });
            (t, payload)
        }
        EstimatorParams::Midpoint(p) => {
            let st = midpoint_gp_experiment(mu, p.n, trials, seed)?;
            let mut t = Table::new(&["trial", "gp_mid", "gp_cross"]);
            for (i, (a, b)) in st.gp_mid.iter().zip(&st.gp_cross).enumerate() {
                t.push(vec![cell(i), fcell(*a), fcell(*b)]);
            }
            let payload = json!({"n": st.n, "m": st.m});
            (t, payload)
        }
        EstimatorParams::Stationarity(p) => {
            let deep_d = p.depth + mu.max_step_len();
            let key = PushforwardKey::BoundaryPrefix {
                d: deep_d,
                margin: margin_or(p.margin),
            };
            let deep = empirical_pushforward(mu, p.n, trials, key, seed, false)?;
            let tv = stationarity_tv(mu, &deep, p.depth)?;
            let shallow = deep.coarsen(p.depth)?;
            let mut t = Table::new(&["key", "count", "total"]);
            for (k, c) in shallow.iter() {
                t.push(vec![cell(k), cell(c), cell(shallow.total())]);
            }
            let payload = json!({"tv": tv, "unresolved": deep.unresolved(), "total": deep.total()});
            (t, payload)
        }
        EstimatorParams::Strips { params, bg } => {
            let margin = margin_or(params.margin);
            let series = run_trials(trials, |i| {
                crate::strips::strip_trial(space, mu, bg, &params.ns, margin, seed, i)
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
            let mut t = Table::new(&["trial", "n", "log_card_over_n"]);
            for (i, s) in series.iter().enumerate() {
                for (n, v) in &s.points {
                    t.push(vec![cell(i), cell(n), fcell(*v)]);
                }
            }
            let density: Vec<f64> = series.iter().map(|s| s.strip_time_density).collect();
            let identity = series.iter().filter(|s| s.identity_in_strip).count();
            let payload = json!({
                "mean_strip_time_density": crate::estimators::stats::mean_stderr(&density).0,
                "identity_in_strip": identity,
            });
            (t, payload)
        }
    };
    Ok((out.0, out.1, failures))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(estimator: &str, params: Value, trials: u64) -> ExperimentConfig {
        ExperimentConfig::from_json(
            &json!({
                "schema_version": 1,
                "model": {"kind": "free", "rank": 2},
                "step": {"support": [{"word": "a", "p": 0.25}, {"word": "A", "p": 0.25},
                                     {"word": "b", "p": 0.25}, {"word": "B", "p": 0.25}]},
                "estimator": estimator,
                "params": params,
                "seed": 3,
                "trials": trials,
            })
            .to_string(),
        )
        .unwrap()
    }

    #[test]
    fn every_estimator_runs() {
        let cases = [
            ("drift", json!({"n": 50})),
            ("tail", json!({"ns": [10, 20]})),
            ("translation", json!({"n": 20})),
            ("hitting", json!({"shadow": {"base": "1", "center": "ab", "R": 0.5}, "horizon": 10})),
            ("persistence", json!({"count": 5, "k": 10, "r": 1})),
            ("decay", json!({"n": 60, "r2": 4})),
            ("tracking", json!({"n": 100, "log_from": 10})),
            ("midpoint", json!({"n": 20})),
            ("stationarity", json!({"n": 60, "depth": 2})),
            ("strips", json!({"ns": [20, 40]})),
        ];
        for (name, params) in cases {
            let out = run(&config(name, params, 20)).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(!out.table.rows.is_empty(), "{name}");
            assert!(out.failures.is_empty(), "{name}: {:?}", out.failures);
            assert_eq!(out.record.estimator, name);
        }
    }

    #[test]
    fn deterministic_csv() {
        let c = config("drift", json!({"n": 200}), 30);
        let a = run(&c).unwrap().table.to_csv().unwrap();
        let b = run(&c).unwrap().table.to_csv().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn writes_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("drift.csv");
        let out = run(&config("drift", json!({"n": 20}), 5)).unwrap();
        let rec = out.write(&csv).unwrap();
        let text = std::fs::read_to_string(rec).unwrap();
        let back: ResultRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back.config_digest, out.record.config_digest);
        assert!(std::fs::read_to_string(csv).unwrap().starts_with("n,trials,l_hat,stderr,oracle\n"));
    }
}
