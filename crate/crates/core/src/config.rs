//! Experiment configuration files.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "model": {"kind": "free", "rank": 2},
//!   "step": {"support": [{"word": "a", "p": 0.25}, {"word": "A", "p": 0.25},
//!                        {"word": "b", "p": 0.25}, {"word": "B", "p": 0.25}]},
//!   "estimator": "drift",
//!   "params": {"n": 10000},
//!   "seed": 7,
//!   "trials": 200,
//!   "output": "drift.csv"
//! }
//! ```

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::coarse::{Shadow, ShadowRecord};
use crate::error::{Error, Result};
use crate::estimators::Direction;
use crate::space::{parse_q, Model, ModelSpace, Q};
use crate::walk::{check_nonelementary, StepDistribution, StepSpec};
use crate::word::Word;

pub const SCHEMA_VERSION: u32 = 1;

pub const ESTIMATORS: &[&str] = &[
    "drift",
    "tail",
    "persistence",
    "hitting",
    "decay",
    "translation",
    "tracking",
    "midpoint",
    "stationarity",
    "strips",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub model: Model,
    pub step: StepSpec,
    pub estimator: String,
    #[serde(default)]
    pub params: Map<String, Value>,
    pub seed: u64,
    pub trials: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("schema: {e}")))
    }

    pub fn load(path: &std::path::Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        ExperimentConfig::from_json(&text)
    }

    /// Sorted-key compact JSON, the input of [`ExperimentConfig::digest`].
    pub fn canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        serde_json::to_string(&value).expect("value serializes")
    }

    /// Hex SHA-256 of the canonical JSON.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.canonical_json().as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Checks the whole configuration before any sampling.
    pub fn validate(&self) -> Result<Experiment> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if let Model::Free { rank } = self.model {
            if rank == 0 || rank > crate::word::Letter::MAX_RANK {
                return Err(Error::Config(format!("free group rank {rank} out of range")));
            }
        }
        let space = ModelSpace::new(self.model);
        let alphabet = self.model.alphabet().ok_or_else(|| {
            Error::Config(format!("no group acts on the {} model by random walk", self.model.name()))
        })?;
        let mu = StepDistribution::from_spec(alphabet, &self.step).map_err(|e| Error::Config(e.to_string()))?;
        let estimator = EstimatorParams::parse(&self.estimator, &self.params, &space)?;
        if estimator.needs_free() && !self.model.is_free() {
            return Err(Error::Config(format!(
                "estimator {} is not available on the {} model",
                self.estimator,
                self.model.name()
            )));
        }
        if estimator.needs_nonelementary() && !check_nonelementary(&mu, crate::estimators::drift::NONELEMENTARY_SEARCH_LEN).holds() {
            return Err(Error::Config(format!(
                "estimator {} needs a non-elementary step distribution",
                self.estimator
            )));
        }
        Ok(Experiment {
            space,
            mu,
            estimator,
            seed: self.seed,
            trials: self.trials,
        })
    }
}

/// A validated configuration.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub space: ModelSpace,
    pub mu: StepDistribution,
    pub estimator: EstimatorParams,
    pub seed: u64,
    pub trials: u64,
}

/// Rational parameter written as a JSON number or a string such as `"3/2"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rational {
    Number(serde_json::Number),
    Text(String),
}

impl Rational {
    pub fn value(&self) -> Result<Q> {
        match self {
            Rational::Number(n) => parse_q(&n.to_string()),
            Rational::Text(s) => parse_q(s),
        }
        .map_err(|e| Error::Config(e.to_string()))
    }
}

fn one() -> Rational {
    Rational::Number(1.into())
}

fn zero() -> Rational {
    Rational::Number(0.into())
}

fn quarter() -> f64 {
    0.25
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriftParams {
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailParams {
    pub ns: Vec<usize>,
    #[serde(default = "quarter")]
    pub l: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranslationParams {
    pub n: usize,
    #[serde(default = "quarter")]
    pub l: f64,
    #[serde(default = "one")]
    pub c0: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HittingParams {
    pub shadow: ShadowRecord,
    pub horizon: usize,
    #[serde(default)]
    pub backward: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PersistenceConfig {
    pub count: usize,
    /// Step spacing; chosen by the pilot recipe when absent.
    #[serde(default)]
    pub k: Option<usize>,
    /// Shadow parameter; chosen by the pilot recipe when absent.
    #[serde(default)]
    pub r: Option<Rational>,
    #[serde(default = "zero")]
    pub c: Rational,
    #[serde(default = "one")]
    pub c0: Rational,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_pilot_trials")]
    pub pilot_trials: u64,
    #[serde(default = "default_pilot_horizon")]
    pub pilot_horizon: usize,
}

fn default_eps() -> f64 {
    0.1
}

fn default_pilot_trials() -> u64 {
    2000
}

fn default_pilot_horizon() -> usize {
    200
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayParams {
    #[serde(default = "default_r1")]
    pub r1: usize,
    #[serde(default = "default_r2")]
    pub r2: usize,
    pub n: usize,
    #[serde(default)]
    pub margin: Option<usize>,
    /// Reference end prefix; `abab...` when absent.
    #[serde(default)]
    pub reference: Option<String>,
}

fn default_r1() -> usize {
    1
}

fn default_r2() -> usize {
    8
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrackingParams {
    pub n: usize,
    #[serde(default)]
    pub margin: Option<usize>,
    #[serde(default = "default_log_from")]
    pub log_from: usize,
}

fn default_log_from() -> usize {
    100
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MidpointParams {
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationarityParams {
    pub n: usize,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default)]
    pub margin: Option<usize>,
}

fn default_depth() -> usize {
    3
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StripsParams {
    pub ns: Vec<usize>,
    #[serde(default = "one")]
    pub k: Rational,
    #[serde(default = "default_strip_r")]
    pub r: Rational,
    #[serde(default = "default_strip_v")]
    pub v: String,
    #[serde(default)]
    pub margin: Option<usize>,
}

fn default_strip_r() -> Rational {
    Rational::Number(3.into())
}

fn default_strip_v() -> String {
    "aba".into()
}

/// Typed, validated estimator parameters.
#[derive(Clone, Debug)]
pub enum EstimatorParams {
    Drift(DriftParams),
    Tail(TailParams),
    Translation { params: TranslationParams, c0: Q },
    Hitting { params: HittingParams, shadow: Shadow, direction: Direction },
    Persistence { params: PersistenceConfig, c: Q, c0: Q, r: Option<Q> },
    Decay { params: DecayParams, reference: Option<Word> },
    Tracking(TrackingParams),
    Midpoint(MidpointParams),
    Stationarity(StationarityParams),
    Strips { params: StripsParams, bg: crate::strips::BGParams },
}

fn typed<T: DeserializeOwned>(name: &str, params: &Map<String, Value>) -> Result<T> {
    serde_json::from_value(Value::Object(params.clone()))
        .map_err(|e| Error::Config(format!("params for {name}: {e}")))
}

impl EstimatorParams {
    pub fn parse(name: &str, params: &Map<String, Value>, space: &ModelSpace) -> Result<EstimatorParams> {
        let positive = |what: &str, n: usize| {
            if n == 0 {
                Err(Error::Config(format!("{what} must be at least 1")))
            } else {
                Ok(())
            }
        };
        Ok(match name {
            "drift" => {
                let p: DriftParams = typed(name, params)?;
                positive("n", p.n)?;
                EstimatorParams::Drift(p)
            }
            "tail" => {
                let p: TailParams = typed(name, params)?;
                if p.ns.is_empty() || p.ns.contains(&0) || p.l.is_nan() || p.l <= 0.0 {
                    return Err(Error::Config("tail needs positive ns and l".into()));
                }
                EstimatorParams::Tail(p)
            }
            "translation" => {
                let p: TranslationParams = typed(name, params)?;
                positive("n", p.n)?;
                let c0 = p.c0.value()?;
                EstimatorParams::Translation { params: p, c0 }
            }
            "hitting" => {
                let p: HittingParams = typed(name, params)?;
                let shadow = Shadow::from_record(space, &p.shadow).map_err(|e| Error::Config(e.to_string()))?;
                let direction = if p.backward { Direction::Backward } else { Direction::Forward };
                EstimatorParams::Hitting { params: p, shadow, direction }
            }
            "persistence" => {
                let p: PersistenceConfig = typed(name, params)?;
                positive("count", p.count)?;
                if let Some(k) = p.k {
                    positive("k", k)?;
                }
                if p.k.is_some() != p.r.is_some() {
                    return Err(Error::Config("persistence needs both k and r, or neither".into()));
                }
                let r = p.r.as_ref().map(Rational::value).transpose()?;
                let (c, c0) = (p.c.value()?, p.c0.value()?);
                EstimatorParams::Persistence { params: p, c, c0, r }
            }
            "decay" => {
                let p: DecayParams = typed(name, params)?;
                positive("n", p.n)?;
                if p.r1 == 0 || p.r1 > p.r2 {
                    return Err(Error::Config("decay needs 1 <= r1 <= r2".into()));
                }
                let reference = p
                    .reference
                    .as_deref()
                    .map(|s| s.parse::<Word>().map_err(|e| Error::Config(e.to_string())))
                    .transpose()?;
                EstimatorParams::Decay { params: p, reference }
            }
            "tracking" => {
                let p: TrackingParams = typed(name, params)?;
                positive("n", p.n)?;
                EstimatorParams::Tracking(p)
            }
            "midpoint" => {
                let p: MidpointParams = typed(name, params)?;
                positive("n", p.n)?;
                EstimatorParams::Midpoint(p)
            }
            "stationarity" => {
                let p: StationarityParams = typed(name, params)?;
                positive("n", p.n)?;
                EstimatorParams::Stationarity(p)
            }
            "strips" => {
                let p: StripsParams = typed(name, params)?;
                if p.ns.is_empty() || p.ns.contains(&0) {
                    return Err(Error::Config("strips needs positive ns".into()));
                }
                let v: Word = p.v.parse().map_err(|e: Error| Error::Config(e.to_string()))?;
                let bg = crate::strips::BGParams::new(p.k.value()?, p.r.value()?, v)?;
                EstimatorParams::Strips { params: p, bg }
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown estimator {other:?} (expected one of {})",
                    ESTIMATORS.join(", ")
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            EstimatorParams::Drift(_) => "drift",
            EstimatorParams::Tail(_) => "tail",
            EstimatorParams::Translation { .. } => "translation",
            EstimatorParams::Hitting { .. } => "hitting",
            EstimatorParams::Persistence { .. } => "persistence",
            EstimatorParams::Decay { .. } => "decay",
            EstimatorParams::Tracking(_) => "tracking",
            EstimatorParams::Midpoint(_) => "midpoint",
            EstimatorParams::Stationarity(_) => "stationarity",
            EstimatorParams::Strips { .. } => "strips",
        }
    }

    fn needs_free(&self) -> bool {
        !matches!(
            self,
            EstimatorParams::Drift(_)
                | EstimatorParams::Tail(_)
                | EstimatorParams::Translation { .. }
                | EstimatorParams::Hitting { .. }
        )
    }

    fn needs_nonelementary(&self) -> bool {
        !matches!(self, EstimatorParams::Hitting { .. } | EstimatorParams::Strips { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DRIFT: &str = r#"{
        "schema_version": 1,
        "model": {"kind": "free", "rank": 2},
        "step": {"support": [{"word": "a", "p": 0.25}, {"word": "A", "p": 0.25},
                             {"word": "b", "p": 0.25}, {"word": "B", "p": 0.25}]},
        "estimator": "drift",
        "params": {"n": 100},
        "seed": 1,
        "trials": 10
    }"#;

    #[test]
    fn valid_config() {
        let c = ExperimentConfig::from_json(DRIFT).unwrap();
        let e = c.validate().unwrap();
        assert_eq!(e.estimator.name(), "drift");
        assert_eq!(c.digest().len(), 64);
    }

    #[test]
    fn digest_ignores_formatting_and_key_order() {
        let a = ExperimentConfig::from_json(DRIFT).unwrap();
        let mut v: Value = serde_json::from_str(DRIFT).unwrap();
        let obj = v.as_object_mut().unwrap();
        let seed = obj.remove("seed").unwrap();
        obj.insert("seed".into(), seed);
        let b = ExperimentConfig::from_json(&serde_json::to_string_pretty(&v).unwrap()).unwrap();
        assert_eq!(a.digest(), b.digest());
        let mut c = a.clone();
        c.seed = 2;
        assert_ne!(a.digest(), c.digest());
    }

    #[test]
    fn rejections() {
        let bad_sum = DRIFT.replace("\"p\": 0.25}, {\"word\": \"A\"", "\"p\": 0.15}, {\"word\": \"A\"");
        let e = ExperimentConfig::from_json(&bad_sum).unwrap().validate().unwrap_err();
        assert!(matches!(e, Error::Config(_)), "{e}");

        let unknown = DRIFT.replace("\"n\": 100", "\"n\": 100, \"m\": 3");
        assert!(ExperimentConfig::from_json(&unknown).unwrap().validate().is_err());

        let elementary = DRIFT.replace(
            r#"[{"word": "a", "p": 0.25}, {"word": "A", "p": 0.25},
                             {"word": "b", "p": 0.25}, {"word": "B", "p": 0.25}]"#,
            r#"[{"word": "a", "p": 1.0}]"#,
        );
        let e = ExperimentConfig::from_json(&elementary).unwrap().validate().unwrap_err();
        assert!(e.to_string().contains("non-elementary"), "{e}");

        let version = DRIFT.replace("\"schema_version\": 1", "\"schema_version\": 9");
        assert!(ExperimentConfig::from_json(&version).unwrap().validate().is_err());

        let estimator = DRIFT.replace("\"drift\"", "\"entropy\"");
        assert!(ExperimentConfig::from_json(&estimator).unwrap().validate().is_err());

        assert!(ExperimentConfig::from_json("{\"schema_version\": 1}").is_err());
    }
}
