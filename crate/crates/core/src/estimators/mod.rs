//! Monte-Carlo and exact estimators for walks on free groups.

pub mod decay;
pub mod drift;
pub mod hitting;
pub mod midpoint;
pub mod persistence;
pub mod stats;
pub mod tracking;
pub mod translation;

pub use decay::{shadow_decay, DecayFit};
pub use drift::{drift_tail, estimate_drift, estimate_drift_unchecked, DriftEstimate, TailEstimate};
pub use hitting::{hitting_prob, Direction, HittingEstimate};
pub use midpoint::{midpoint_gp_experiment, MidpointStats};
pub use persistence::{persistence_experiment, persistent_segments, PersistenceParams, PersistenceStats};
pub use tracking::{tracking_experiment, tracking_series, TrackingSeries};
pub use translation::{
    translation_growth, translation_length_exact, translation_length_formula, TranslationStats,
};
