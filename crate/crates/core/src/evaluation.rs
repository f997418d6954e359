//! Synthetic test suites over six sequence classes, grading, and the
//! built-in six-question multiple-choice fixture.

use std::fmt::{self, Write as _};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generate::{derive_seed, generate, seeded_rng, NoiseMode, NoiseSpec, SequenceSample, RNG_ALGORITHM};
use crate::hypothesis::{enumerate, Hypothesis, SpaceConfig, DEFAULT_N_MAX};
use crate::inference::{best_candidate, posterior_predictive, predict_next, LikelihoodParams};
use crate::sequence::{to_csv, Sequence};

/// Draw attempts per suite item before the class is declared unsatisfiable.
pub const MAX_SUITE_RETRIES: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceClass {
    PureAddition,
    AdditionWithNoise,
    PureMultiplication,
    MultiplicationWithNoise,
    PureCompound,
    CompoundWithNoise,
}

impl SequenceClass {
    pub const ALL: [SequenceClass; 6] = [
        SequenceClass::PureAddition,
        SequenceClass::AdditionWithNoise,
        SequenceClass::PureMultiplication,
        SequenceClass::MultiplicationWithNoise,
        SequenceClass::PureCompound,
        SequenceClass::CompoundWithNoise,
    ];

    pub fn is_noisy(self) -> bool {
        matches!(
            self,
            SequenceClass::AdditionWithNoise
                | SequenceClass::MultiplicationWithNoise
                | SequenceClass::CompoundWithNoise
        )
    }

    pub fn is_compound(self) -> bool {
        matches!(self, SequenceClass::PureCompound | SequenceClass::CompoundWithNoise)
    }

    /// Rules the class draws its truth from.
    pub fn pool(self, space: &SpaceConfig) -> Vec<Hypothesis> {
        enumerate(space)
            .into_iter()
            .filter(|h| match self {
                SequenceClass::PureAddition | SequenceClass::AdditionWithNoise => {
                    matches!(h, Hypothesis::Add { .. })
                }
                SequenceClass::PureMultiplication | SequenceClass::MultiplicationWithNoise => {
                    matches!(h, Hypothesis::Mul { .. })
                }
                SequenceClass::PureCompound | SequenceClass::CompoundWithNoise => h.is_compound(),
            })
            .collect()
    }

    pub fn title(self) -> &'static str {
        match self {
            SequenceClass::PureAddition => "Pure addition",
            SequenceClass::AdditionWithNoise => "Addition with noise",
            SequenceClass::PureMultiplication => "Pure multiplication",
            SequenceClass::MultiplicationWithNoise => "Multiplication with noise",
            SequenceClass::PureCompound => "Compound sequence",
            SequenceClass::CompoundWithNoise => "Compound sequence with noise",
        }
    }

    fn index(self) -> u64 {
        SequenceClass::ALL.iter().position(|&c| c == self).expect("listed") as u64
    }
}

impl fmt::Display for SequenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = serde_json::to_value(self).map_err(|_| fmt::Error)?;
        f.write_str(v.as_str().ok_or(fmt::Error)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalConfig {
    pub per_class_count: usize,
    /// Elements shown to the model; the target is the next one.
    pub shown_length: usize,
    /// Inclusive range for the first element.
    pub x1_range: [u64; 2],
    /// Generation-side noise variance for noisy classes.
    pub sigma2_noise: f64,
    pub n_max: u64,
    pub master_seed: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            per_class_count: 200,
            shown_length: 5,
            x1_range: [1, 20],
            sigma2_noise: 0.66,
            n_max: DEFAULT_N_MAX,
            master_seed: 42,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.shown_length < 3 {
            return Err(Error::Parameter("shown_length must be >= 3".into()));
        }
        let [lo, hi] = self.x1_range;
        if lo < 1 || lo > hi || hi > self.n_max {
            return Err(Error::Parameter(format!(
                "x1_range [{lo}, {hi}] must satisfy 1 <= lo <= hi <= n_max ({})",
                self.n_max
            )));
        }
        if !(self.sigma2_noise.is_finite() && self.sigma2_noise > 0.0) {
            return Err(Error::Parameter("sigma2_noise must be > 0".into()));
        }
        self.space()?;
        Ok(())
    }

    pub fn space(&self) -> Result<SpaceConfig> {
        SpaceConfig::with_n_max(self.n_max)
    }

    pub fn from_json_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let config: EvalConfig = serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?;
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteItem {
    pub class: SequenceClass,
    /// The shown elements with their true rule and noise trace.
    pub sample: SequenceSample,
    /// The true rule applied, without noise, to the last shown element.
    pub target: u64,
    pub options: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Suite {
    pub config: EvalConfig,
    pub counts: Vec<(SequenceClass, usize)>,
    pub items: Vec<SuiteItem>,
}

/// `per_class_count` items for each of the six classes.
pub fn build_suite(config: &EvalConfig) -> Result<Suite> {
    let counts: Vec<_> = SequenceClass::ALL
        .iter()
        .map(|&c| (c, config.per_class_count))
        .collect();
    build_suite_for(config, &counts)
}

/// Builds a suite with explicit per-class counts.
///
/// Item `i` of a class is drawn from seed
/// `derive_seed(derive_seed(derive_seed(master, class), i), attempt)`, so
/// items do not depend on each other or on which other classes are present.
pub fn build_suite_for(config: &EvalConfig, counts: &[(SequenceClass, usize)]) -> Result<Suite> {
    config.validate()?;
    let space = config.space()?;
    let sigma = config.sigma2_noise.sqrt();
    let mut items = Vec::with_capacity(counts.iter().map(|(_, n)| n).sum());

    for &(class, count) in counts {
        let pool = class.pool(&space);
        let class_seed = derive_seed(config.master_seed, class.index());
        for i in 0..count {
            let item_seed = derive_seed(class_seed, i as u64);
            let item = (0..MAX_SUITE_RETRIES)
                .find_map(|attempt| draw_item(class, &pool, config, sigma, derive_seed(item_seed, attempt)).transpose())
                .transpose()?
                .ok_or_else(|| Error::Suite {
                    class: class.to_string(),
                })?;
            items.push(item);
        }
    }

    Ok(Suite {
        config: *config,
        counts: counts.to_vec(),
        items,
    })
}

/// `Ok(None)` when the draw overflowed the domain and should be retried.
fn draw_item(
    class: SequenceClass,
    pool: &[Hypothesis],
    config: &EvalConfig,
    sigma: f64,
    seed: u64,
) -> Result<Option<SuiteItem>> {
    let mut rng = seeded_rng(seed);
    let truth = pool[rng.random_range(0..pool.len())];
    let x1 = rng.random_range(config.x1_range[0]..=config.x1_range[1]);
    let noise_seed: u64 = rng.random();
    let noise = if class.is_noisy() {
        NoiseSpec::new(NoiseMode::Progressive, sigma, noise_seed)?
    } else {
        NoiseSpec::none()
    };

    let sample = match generate(&truth, x1, config.shown_length, &noise, config.n_max) {
        Ok(s) => s,
        Err(Error::GenerationOverflow { .. } | Error::NoiseRejection { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let last = *sample.values.last().expect("shown_length >= 3");
    let target = match truth.apply(last, config.n_max) {
        Ok(t) => t,
        Err(Error::DomainOverflow { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(Some(SuiteItem {
        class,
        sample,
        target,
        options: None,
    }))
}

pub fn grade(prediction: u64, target: u64) -> bool {
    prediction == target
}

/// What the model decided on one suite item.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ItemOutcome {
    pub map: Hypothesis,
    pub prediction: u64,
    pub correct: bool,
}

pub fn evaluate_items(suite: &Suite, beta: f64, params: &LikelihoodParams) -> Result<Vec<ItemOutcome>> {
    let space = suite.config.space()?;
    suite
        .items
        .iter()
        .map(|item| {
            let seq = item.sample.sequence()?;
            let p = predict_next(&seq, &space, beta, params)?;
            Ok(ItemOutcome {
                map: p.hypothesis,
                prediction: p.next,
                correct: grade(p.next, item.target),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub class: SequenceClass,
    pub count: usize,
    pub correct: usize,
    /// `None` when the class is empty.
    pub accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub beta: f64,
    pub sigma2: f64,
    pub first_element_log_weight: f64,
    pub config: EvalConfig,
    pub rng: String,
    pub classes: Vec<ClassReport>,
    pub count: usize,
    pub correct: usize,
    pub accuracy: Option<f64>,
}

fn ratio(correct: usize, count: usize) -> Option<f64> {
    (count > 0).then(|| correct as f64 / count as f64)
}

impl EvalReport {
    pub fn from_outcomes(suite: &Suite, outcomes: &[ItemOutcome], beta: f64, params: &LikelihoodParams) -> Self {
        let classes: Vec<ClassReport> = suite
            .counts
            .iter()
            .map(|&(class, _)| {
                let (count, correct) = suite
                    .items
                    .iter()
                    .zip(outcomes)
                    .filter(|(item, _)| item.class == class)
                    .fold((0, 0), |(n, c), (_, o)| (n + 1, c + o.correct as usize));
                ClassReport {
                    class,
                    count,
                    correct,
                    accuracy: ratio(correct, count),
                }
            })
            .collect();
        let count = outcomes.len();
        let correct = outcomes.iter().filter(|o| o.correct).count();
        EvalReport {
            beta,
            sigma2: params.sigma2,
            first_element_log_weight: params.first_element_log_weight,
            config: suite.config,
            rng: RNG_ALGORITHM.to_string(),
            classes,
            count,
            correct,
            accuracy: ratio(correct, count),
        }
    }

    pub fn class(&self, class: SequenceClass) -> Option<&ClassReport> {
        self.classes.iter().find(|c| c.class == class)
    }

    /// Aligned text table, accuracies in percent with two decimals.
    pub fn to_table(&self) -> String {
        let pct = |a: Option<f64>| a.map_or_else(|| "n/a".to_string(), |a| format!("{:.2}", a * 100.0));
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(
            out,
            "# beta={} sigma2={} per_class_count={} shown_length={} x1_range={}..{} sigma2_noise={} n_max={} master_seed={}",
            self.beta, self.sigma2, c.per_class_count, c.shown_length, c.x1_range[0], c.x1_range[1],
            c.sigma2_noise, c.n_max, c.master_seed
        );
        let _ = writeln!(
            out,
            "{:<30} {:>7} {:>8} {:>13}",
            "Sequence type", "Count", "Correct", "Accuracy (%)"
        );
        for r in &self.classes {
            let _ = writeln!(
                out,
                "{:<30} {:>7} {:>8} {:>13}",
                r.class.title(),
                r.count,
                r.correct,
                pct(r.accuracy)
            );
        }
        let _ = writeln!(
            out,
            "{:<30} {:>7} {:>8} {:>13}",
            "Overall",
            self.count,
            self.correct,
            pct(self.accuracy)
        );
        out
    }
}

pub fn evaluate_suite(suite: &Suite, beta: f64, params: &LikelihoodParams) -> Result<EvalReport> {
    let outcomes = evaluate_items(suite, beta, params)?;
    Ok(EvalReport::from_outcomes(suite, &outcomes, beta, params))
}

pub fn evaluate(config: &EvalConfig, beta: f64, params: &LikelihoodParams) -> Result<EvalReport> {
    evaluate_suite(&build_suite(config)?, beta, params)
}

/// One multiple-choice question: five shown elements, four options, answer key.
#[derive(Debug, Clone, Copy)]
pub struct SurveyQuestion {
    pub class: SequenceClass,
    pub shown: [u64; 5],
    pub options: [u64; 4],
    pub answer: u64,
}

pub const SURVEY: [SurveyQuestion; 6] = [
    SurveyQuestion {
        class: SequenceClass::PureAddition,
        shown: [11, 19, 27, 35, 43],
        options: [86, 51, 52, 53],
        answer: 51,
    },
    SurveyQuestion {
        class: SequenceClass::AdditionWithNoise,
        shown: [5, 7, 9, 12, 14],
        options: [17, 28, 12, 16],
        answer: 16,
    },
    SurveyQuestion {
        class: SequenceClass::PureMultiplication,
        shown: [5, 10, 20, 40, 80],
        options: [120, 85, 160, 100],
        answer: 160,
    },
    SurveyQuestion {
        class: SequenceClass::MultiplicationWithNoise,
        shown: [3, 6, 12, 25, 50],
        options: [75, 100, 56, 150],
        answer: 100,
    },
    SurveyQuestion {
        class: SequenceClass::PureCompound,
        shown: [1, 4, 13, 40, 121],
        options: [122, 364, 243, 606],
        answer: 364,
    },
    SurveyQuestion {
        class: SequenceClass::CompoundWithNoise,
        shown: [5, 14, 33, 70, 144],
        options: [580, 436, 148, 292],
        answer: 292,
    },
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyAnswer {
    pub question: usize,
    pub class: SequenceClass,
    pub sequence: Sequence,
    pub options: Vec<u64>,
    pub scores: Vec<f64>,
    pub chosen: u64,
    pub expected: u64,
    pub correct: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyOutcome {
    pub beta: f64,
    pub sigma2: f64,
    pub answers: Vec<SurveyAnswer>,
    pub correct: usize,
    pub total: usize,
}

impl SurveyOutcome {
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# beta={} sigma2={}", self.beta, self.sigma2);
        for a in &self.answers {
            let opts = to_csv(&a.options);
            let _ = writeln!(
                out,
                "Q{} {:<30} {:<22} options {:<18} chosen {:>4}  expected {:>4}  {}",
                a.question,
                a.class.title(),
                a.sequence.to_string(),
                opts,
                a.chosen,
                a.expected,
                if a.correct { "ok" } else { "WRONG" }
            );
        }
        let _ = writeln!(out, "{}/{} correct", self.correct, self.total);
        out
    }
}

/// Answers the six built-in questions by posterior predictive over their options.
pub fn run_survey_fixture(beta: f64, params: &LikelihoodParams) -> Result<SurveyOutcome> {
    let space = SpaceConfig::default();
    let answers = SURVEY
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let sequence = Sequence::new(q.shown.to_vec())?;
            let scores = posterior_predictive(&sequence, &q.options, &space, beta, params)?;
            let chosen = best_candidate(&scores).expect("four options");
            Ok(SurveyAnswer {
                question: i + 1,
                class: q.class,
                sequence,
                options: q.options.to_vec(),
                scores: scores.iter().map(|s| s.score).collect(),
                chosen,
                expected: q.answer,
                correct: grade(chosen, q.answer),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let correct = answers.iter().filter(|a| a.correct).count();
    Ok(SurveyOutcome {
        beta,
        sigma2: params.sigma2,
        total: answers.len(),
        answers,
        correct,
    })
}
