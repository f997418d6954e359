//! Prior, likelihood, and posterior over the enumerated rule space.
//!
//! The prior gives each primitive mass `1 / (n_a + n_p + β·n_a·n_p)` and each
//! compound `β` times that. The likelihood is the progressive-noise model:
//! each observed element is scored by a Gaussian on its residual against
//! the rule applied to the previous *observed* element.
//!
//! Since every rule maps integers to integers, the discrete Gaussian
//! normalizer is the same for all hypotheses and is dropped; scores are bare
//! `-r² / (2σ²)` sums. Posteriors are normalized in log space with a max
//! shift, summing in enumeration order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypothesis::{enumerate, Hypothesis, SpaceConfig};
use crate::numeric::{log_sum_exp, normalize_log_weights};
use crate::sequence::Sequence;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorModel {
    beta: f64,
    n_additive: usize,
    n_multiplicative: usize,
}

impl PriorModel {
    pub fn new(beta: f64, n_additive: usize, n_multiplicative: usize) -> Result<Self> {
        check_beta(beta)?;
        if n_additive == 0 || n_multiplicative == 0 {
            return Err(Error::Parameter("primitive counts must be positive".into()));
        }
        Ok(PriorModel {
            beta,
            n_additive,
            n_multiplicative,
        })
    }

    pub fn for_space(beta: f64, config: &SpaceConfig) -> Result<Self> {
        Self::new(beta, config.n_additive(), config.n_multiplicative())
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    fn denominator(&self) -> f64 {
        let (a, p) = (self.n_additive as f64, self.n_multiplicative as f64);
        (a + p) + self.beta * a * p
    }

    pub fn prior(&self, h: &Hypothesis) -> f64 {
        if h.is_compound() {
            self.beta / self.denominator()
        } else {
            1.0 / self.denominator()
        }
    }

    /// `-inf` for compounds at `beta = 0`.
    pub fn log_prior(&self, h: &Hypothesis) -> f64 {
        self.prior(h).ln()
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&beta) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("beta must lie in [0, 1], got {beta}")))
    }
}

fn check_sigma2(sigma2: f64) -> Result<()> {
    if sigma2.is_finite() && sigma2 > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("sigma2 must be > 0, got {sigma2}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LikelihoodParams {
    /// Noise variance assumed by the likelihood.
    pub sigma2: f64,
    /// Constant `ln P(x1 | h)`; shared by every hypothesis.
    pub first_element_log_weight: f64,
}

impl Default for LikelihoodParams {
    fn default() -> Self {
        LikelihoodParams {
            sigma2: 1.0,
            first_element_log_weight: 0.0,
        }
    }
}

impl LikelihoodParams {
    pub fn with_sigma2(sigma2: f64) -> Self {
        LikelihoodParams {
            sigma2,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        check_sigma2(self.sigma2)?;
        if !self.first_element_log_weight.is_finite() {
            return Err(Error::Parameter("first_element_log_weight must be finite".into()));
        }
        Ok(())
    }
}

/// Sum of `-r_j² / (2σ²)` over transitions, in sequence order.
fn residual_score(seq: &Sequence, h: &Hypothesis, sigma2: f64) -> f64 {
    seq.transitions()
        .map(|(prev, cur)| {
            let r = (cur as i128 - h.step(prev) as i128) as f64;
            -(r * r) / (2.0 * sigma2)
        })
        .sum()
}

/// Unnormalized log `P(D | h)`: the first-element constant plus the residual terms.
pub fn log_likelihood(seq: &Sequence, h: &Hypothesis, params: &LikelihoodParams) -> Result<f64> {
    params.validate()?;
    Ok(params.first_element_log_weight + residual_score(seq, h, params.sigma2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorEntry {
    pub hypothesis: Hypothesis,
    /// `ln prior + ln likelihood`; `null` in JSON when the prior is zero.
    #[serde(with = "neg_inf_as_null")]
    pub log_score: f64,
    pub probability: f64,
    /// The rule applied to the last observed element.
    pub prediction: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorTable {
    pub sequence: Sequence,
    pub beta: f64,
    pub sigma2: f64,
    /// Sorted by probability descending, ties in enumeration order.
    pub entries: Vec<PosteriorEntry>,
}

impl PosteriorTable {
    pub fn probability_of(&self, h: &Hypothesis) -> Option<f64> {
        self.entries.iter().find(|e| &e.hypothesis == h).map(|e| e.probability)
    }

    pub fn top(&self, k: usize) -> &[PosteriorEntry] {
        &self.entries[..k.min(self.entries.len())]
    }

    /// Keeps only the `k` most probable entries.
    pub fn truncated(mut self, k: usize) -> Self {
        self.entries.truncate(k);
        self
    }
}

mod neg_inf_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NEG_INFINITY))
    }
}

/// Full posterior over `enumerate(config)`.
pub fn posterior(seq: &Sequence, config: &SpaceConfig, beta: f64, params: &LikelihoodParams) -> Result<PosteriorTable> {
    params.validate()?;
    let prior = PriorModel::for_space(beta, config)?;
    let space = enumerate(config);

    // The first-element constant is hypothesis-independent: it is left out of
    // the normalized weights so probabilities do not depend on it at all.
    let residuals: Vec<f64> = space.iter().map(|h| residual_score(seq, h, params.sigma2)).collect();
    let weights: Vec<f64> = space
        .iter()
        .zip(&residuals)
        .map(|(h, r)| prior.log_prior(h) + r)
        .collect();
    let probs = normalize_log_weights(&weights);

    let last = seq.last();
    let mut entries: Vec<PosteriorEntry> = space
        .iter()
        .zip(residuals.iter().zip(probs))
        .map(|(h, (r, p))| PosteriorEntry {
            hypothesis: *h,
            log_score: prior.log_prior(h) + (params.first_element_log_weight + r),
            probability: p,
            prediction: h.step(last) as u64,
        })
        .collect();
    // stable: equal probabilities keep enumeration order
    entries.sort_by(|a, b| b.probability.total_cmp(&a.probability));

    Ok(PosteriorTable {
        sequence: seq.clone(),
        beta,
        sigma2: params.sigma2,
        entries,
    })
}

/// The most probable hypothesis; ties go to the earlier one in enumeration order.
pub fn map_hypothesis(table: &PosteriorTable) -> Result<Hypothesis> {
    table
        .entries
        .iter()
        .reduce(|best, e| {
            let better = e.probability > best.probability
                || (e.probability == best.probability && e.hypothesis < best.hypothesis);
            if better {
                e
            } else {
                best
            }
        })
        .map(|e| e.hypothesis)
        .ok_or_else(|| Error::Parameter("empty posterior table".into()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub hypothesis: Hypothesis,
    pub next: u64,
    pub table: PosteriorTable,
}

pub fn predict_next(seq: &Sequence, config: &SpaceConfig, beta: f64, params: &LikelihoodParams) -> Result<Prediction> {
    let table = posterior(seq, config, beta, params)?;
    let hypothesis = map_hypothesis(&table)?;
    Ok(Prediction {
        hypothesis,
        next: hypothesis.step(seq.last()) as u64,
        table,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CandidateScore {
    pub candidate: u64,
    /// Normalized over the candidate set.
    pub score: f64,
}

/// Scores candidate next values by `Σ_h P(h|D) · exp(-(o - h(last))² / 2σ²)`,
/// normalized over the candidates. Computed in log space so that candidates
/// far from every prediction still get a well-defined relative score.
pub fn posterior_predictive(
    seq: &Sequence,
    candidates: &[u64],
    config: &SpaceConfig,
    beta: f64,
    params: &LikelihoodParams,
) -> Result<Vec<CandidateScore>> {
    if candidates.is_empty() {
        return Err(Error::Parameter("no candidates".into()));
    }
    let table = posterior(seq, config, beta, params)?;
    let log_scores: Vec<f64> = candidates
        .iter()
        .map(|&o| {
            let terms: Vec<f64> = table
                .entries
                .iter()
                .filter(|e| e.probability > 0.0)
                .map(|e| {
                    let r = o as f64 - e.prediction as f64;
                    e.probability.ln() - r * r / (2.0 * params.sigma2)
                })
                .collect();
            log_sum_exp(&terms)
        })
        .collect();
    let scores = normalize_log_weights(&log_scores);
    Ok(candidates
        .iter()
        .zip(scores)
        .map(|(&candidate, score)| CandidateScore { candidate, score })
        .collect())
}

/// Highest-scoring candidate; ties go to the earlier candidate.
pub fn best_candidate(scores: &[CandidateScore]) -> Option<u64> {
    scores
        .iter()
        .reduce(|best, s| if s.score > best.score { s } else { best })
        .map(|s| s.candidate)
}
