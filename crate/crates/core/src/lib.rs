//! Bayesian concept learning for strictly increasing integer sequences.
//!
//! A small space of generating rules (add `t`, multiply by `s`, or
//! `s·x + t`) is enumerated, each rule is scored against an observed
//! sequence under a progressive-noise Gaussian likelihood, and the
//! posterior-maximizing rule is applied to the last element to predict
//! the next one. A single "experience" parameter `beta` in `[0, 1]`
//! controls how much prior mass compound rules receive.
//!
//! ```
//! use seqbayes::{predict_next, LikelihoodParams, Sequence, SpaceConfig};
//!
//! let seq: Sequence = "5,10,20,40,80".parse().unwrap();
//! let p = predict_next(&seq, &SpaceConfig::default(), 1.0, &LikelihoodParams::default()).unwrap();
//! assert_eq!(p.next, 160);
//! assert_eq!(p.hypothesis.to_string(), "M2");
//! ```

pub mod calibration;
pub mod cli;
pub mod error;
pub mod evaluation;
pub mod generate;
pub mod hypothesis;
pub mod inference;
mod numeric;
pub mod sequence;

pub use calibration::{
    accuracy_curve, accuracy_curve_on, calibrate, calibrate_on, BetaGrid, CalibrationResult, CurvePoint,
    HUMAN_REFERENCE_ACCURACY,
};
pub use error::{Error, Result};
pub use evaluation::{
    build_suite, build_suite_for, evaluate, evaluate_suite, grade, run_survey_fixture, ClassReport, EvalConfig,
    EvalReport, SequenceClass, Suite, SuiteItem, SurveyAnswer, SurveyOutcome,
};
pub use generate::{
    derive_seed, generate, replay, sample_integer_noise, seeded_rng, NoiseMode, NoiseSpec, SequenceSample,
    RNG_ALGORITHM,
};
pub use hypothesis::{enumerate, transition_pairs, Hypothesis, Primitive, SpaceConfig};
pub use inference::{
    log_likelihood, map_hypothesis, posterior, posterior_predictive, predict_next, CandidateScore, LikelihoodParams,
    PosteriorEntry, PosteriorTable, Prediction, PriorModel,
};
pub use sequence::Sequence;
