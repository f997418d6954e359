//! Sequence generation under no, progressive, or stationary noise.
//!
//! Noise is a continuous Gaussian draw rounded to the nearest integer
//! (half away from zero). Every generator is driven by an explicit seed, so
//! a `(hypothesis, start, length, NoiseSpec)` tuple always yields the same
//! sample.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypothesis::Hypothesis;
use crate::sequence::{to_csv, Sequence};

/// Identity of the random source, echoed in reports.
pub const RNG_ALGORITHM: &str =
    "ChaCha20Rng(seed_from_u64) + rand_distr::Normal, rounded half away from zero; per-item seeds via SplitMix64";

/// Noise draws allowed per element before giving up on strict increase.
pub const MAX_NOISE_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseMode {
    None,
    /// Each step perturbs `h(previous noisy value)`; the perturbed value feeds the next step.
    Progressive,
    /// The noiseless sequence is generated first, then every element (the first included)
    /// is perturbed independently.
    Stationary,
}

impl fmt::Display for NoiseMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoiseMode::None => "none",
            NoiseMode::Progressive => "progressive",
            NoiseMode::Stationary => "stationary",
        })
    }
}

impl FromStr for NoiseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(NoiseMode::None),
            "progressive" => Ok(NoiseMode::Progressive),
            "stationary" => Ok(NoiseMode::Stationary),
            _ => Err(Error::Parameter(format!("unknown noise mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    mode: NoiseMode,
    sigma: f64,
    seed: u64,
}

impl NoiseSpec {
    /// `sigma` is the standard deviation of the Gaussian draw; it must be
    /// positive and finite unless `mode` is `None`, where it is ignored.
    pub fn new(mode: NoiseMode, sigma: f64, seed: u64) -> Result<Self> {
        if mode != NoiseMode::None && !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::Parameter(format!("noise sigma must be > 0, got {sigma}")));
        }
        Ok(NoiseSpec { mode, sigma, seed })
    }

    pub fn none() -> Self {
        NoiseSpec {
            mode: NoiseMode::None,
            sigma: 0.0,
            seed: 0,
        }
    }

    pub fn mode(&self) -> NoiseMode {
        self.mode
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// A generated or observed sequence with its provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceSample {
    pub values: Vec<u64>,
    #[serde(rename = "truth_label")]
    pub truth: Option<Hypothesis>,
    /// Seed value of the rule (`x1` before any stationary perturbation).
    pub start: u64,
    /// Progressive: one offset per step after the first.
    /// Stationary: one offset per element.
    pub noise_trace: Option<Vec<i64>>,
    pub seed: Option<u64>,
}

impl SequenceSample {
    pub fn sequence(&self) -> Result<Sequence> {
        Sequence::new(self.values.clone())
    }

    pub fn to_csv(&self) -> String {
        to_csv(&self.values)
    }
}

pub fn seeded_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent child seed for stream `index` of `master`:
/// `splitmix64(master ^ splitmix64(index))`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

/// One rounded-Gaussian integer offset with standard deviation `sigma`.
pub fn sample_integer_noise<R: Rng + ?Sized>(sigma: f64, rng: &mut R) -> i64 {
    let normal = Normal::new(0.0, sigma).expect("sigma validated by caller");
    // f64::round rounds half away from zero
    normal.sample(rng).round() as i64
}

fn offset(base: u128, e: i64) -> Option<u128> {
    if e >= 0 {
        base.checked_add(e as u128)
    } else {
        base.checked_sub(e.unsigned_abs() as u128)
    }
}

fn check_bound(step: usize, value: u128, n_max: u64) -> Result<u64> {
    if value > n_max as u128 {
        Err(Error::GenerationOverflow { step, value, n_max })
    } else {
        Ok(value as u64)
    }
}

/// Generates `length` values from `h` starting at `x1`.
///
/// Noisy offsets that would break strict increase are redrawn, up to
/// [`MAX_NOISE_ATTEMPTS`] times per element. Any value above `n_max` is a
/// [`Error::GenerationOverflow`] naming the step (0-based element index).
pub fn generate(h: &Hypothesis, x1: u64, length: usize, noise: &NoiseSpec, n_max: u64) -> Result<SequenceSample> {
    if x1 == 0 {
        return Err(Error::Parameter("start value must be >= 1".into()));
    }
    if length < 2 {
        return Err(Error::Parameter("length must be >= 2".into()));
    }
    check_bound(0, x1 as u128, n_max)?;

    let mut rng = seeded_rng(noise.seed);
    let (values, trace) = match noise.mode {
        NoiseMode::None => {
            let mut values = vec![x1];
            for step in 1..length {
                let prev = values[step - 1];
                values.push(check_bound(step, h.step(prev), n_max)?);
            }
            (values, None)
        }
        NoiseMode::Progressive => {
            let mut values = vec![x1];
            let mut trace = Vec::with_capacity(length - 1);
            for step in 1..length {
                let prev = values[step - 1];
                let base = check_bound(step, h.step(prev), n_max)?;
                let (v, e) = draw_above(base as u128, prev as u128 + 1, noise.sigma, &mut rng, step)?;
                values.push(check_bound(step, v, n_max)?);
                trace.push(e);
            }
            (values, Some(trace))
        }
        NoiseMode::Stationary => {
            let mut clean = vec![x1];
            for step in 1..length {
                clean.push(check_bound(step, h.step(clean[step - 1]), n_max)?);
            }
            let mut values: Vec<u64> = Vec::with_capacity(length);
            let mut trace = Vec::with_capacity(length);
            for (step, &c) in clean.iter().enumerate() {
                let floor = values.last().map_or(1, |&p| p as u128 + 1);
                let (v, e) = draw_above(c as u128, floor, noise.sigma, &mut rng, step)?;
                values.push(check_bound(step, v, n_max)?);
                trace.push(e);
            }
            (values, Some(trace))
        }
    };

    Ok(SequenceSample {
        values,
        truth: Some(*h),
        start: x1,
        noise_trace: trace,
        seed: (noise.mode != NoiseMode::None).then_some(noise.seed),
    })
}

fn draw_above(base: u128, floor: u128, sigma: f64, rng: &mut ChaCha20Rng, step: usize) -> Result<(u128, i64)> {
    for _ in 0..MAX_NOISE_ATTEMPTS {
        let e = sample_integer_noise(sigma, rng);
        if let Some(v) = offset(base, e) {
            if v >= floor {
                return Ok((v, e));
            }
        }
    }
    Err(Error::NoiseRejection {
        step,
        attempts: MAX_NOISE_ATTEMPTS,
    })
}

/// Re-runs the progressive recurrence `x_j = h(x_{j-1}) + trace[j-1]` with
/// the given offsets. No RNG involved.
pub fn replay(h: &Hypothesis, x1: u64, trace: &[i64]) -> Result<SequenceSample> {
    if x1 == 0 {
        return Err(Error::Parameter("start value must be >= 1".into()));
    }
    if trace.is_empty() {
        return Err(Error::Sequence("trace must have at least one offset".into()));
    }
    let mut values = vec![x1];
    for (i, &e) in trace.iter().enumerate() {
        let prev = values[i];
        let next = offset(h.step(prev), e)
            .filter(|&v| v > prev as u128 && v <= u64::MAX as u128)
            .ok_or_else(|| {
                Error::Sequence(format!(
                    "offset {e} at step {} breaks strict increase after {prev}",
                    i + 1
                ))
            })?;
        values.push(next as u64);
    }
    Ok(SequenceSample {
        values,
        truth: Some(*h),
        start: x1,
        noise_trace: Some(trace.to_vec()),
        seed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypothesis::DEFAULT_N_MAX;

    fn h(label: &str) -> Hypothesis {
        label.parse().unwrap()
    }

    #[test]
    fn noiseless_examples() {
        let s = generate(&h("M2"), 2, 6, &NoiseSpec::none(), DEFAULT_N_MAX).unwrap();
        assert_eq!(s.values, [2, 4, 8, 16, 32, 64]);
        assert_eq!(s.noise_trace, None);
        let s = generate(&h("M2+A2"), 2, 4, &NoiseSpec::none(), DEFAULT_N_MAX).unwrap();
        assert_eq!(s.values, [2, 6, 14, 30]);
        let s = generate(&h("M2+A2"), 4, 4, &NoiseSpec::none(), DEFAULT_N_MAX).unwrap();
        assert_eq!(s.values, [4, 10, 22, 46]);
    }

    #[test]
    fn replay_examples() {
        assert_eq!(
            replay(&h("M2"), 2, &[1, 0, 0, 0, 0]).unwrap().values,
            [2, 5, 10, 20, 40, 80]
        );
        assert_eq!(replay(&h("A5"), 2, &[0, 0, 0]).unwrap().values, [2, 7, 12, 17]);
    }

    #[test]
    fn replay_rejects_non_increasing() {
        assert!(matches!(replay(&h("A1"), 5, &[0, -1]), Err(Error::Sequence(_))));
        assert!(matches!(replay(&h("A2"), 1, &[-5]), Err(Error::Sequence(_))));
        assert!(replay(&h("A2"), 1, &[]).is_err());
    }

    #[test]
    fn zero_trace_equals_noiseless() {
        for label in ["A3", "M3", "M2+A7"] {
            let a = replay(&h(label), 3, &[0; 4]).unwrap();
            let b = generate(&h(label), 3, 5, &NoiseSpec::none(), DEFAULT_N_MAX).unwrap();
            assert_eq!(a.values, b.values);
        }
    }

    #[test]
    fn progressive_round_trips_through_replay() {
        for seed in 0..50 {
            let noise = NoiseSpec::new(NoiseMode::Progressive, 1.5, seed).unwrap();
            let s = generate(&h("A1"), 3, 8, &noise, DEFAULT_N_MAX).unwrap();
            assert!(s.values.windows(2).all(|w| w[1] > w[0]));
            let r = replay(&h("A1"), 3, s.noise_trace.as_ref().unwrap()).unwrap();
            assert_eq!(r.values, s.values);
        }
    }

    #[test]
    fn stationary_is_increasing_and_records_every_element() {
        for seed in 0..50 {
            let noise = NoiseSpec::new(NoiseMode::Stationary, 1.0, seed).unwrap();
            let s = generate(&h("A3"), 1, 6, &noise, DEFAULT_N_MAX).unwrap();
            assert!(s.values[0] >= 1);
            assert!(s.values.windows(2).all(|w| w[1] > w[0]), "{:?}", s.values);
            let trace = s.noise_trace.unwrap();
            assert_eq!(trace.len(), 6);
            for (j, (&v, &e)) in s.values.iter().zip(&trace).enumerate() {
                assert_eq!(v as i64, 1 + 3 * j as i64 + e);
            }
        }
    }

    #[test]
    fn same_seed_same_output() {
        let noise = NoiseSpec::new(NoiseMode::Progressive, 0.8, 99).unwrap();
        let a = generate(&h("M3+A4"), 2, 6, &noise, DEFAULT_N_MAX).unwrap();
        let b = generate(&h("M3+A4"), 2, 6, &noise, DEFAULT_N_MAX).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn overflow_names_step() {
        let err = generate(&h("M3"), 10_000, 5, &NoiseSpec::none(), DEFAULT_N_MAX).unwrap_err();
        assert!(
            matches!(
                err,
                Error::GenerationOverflow {
                    step: 3,
                    value: 270_000,
                    ..
                }
            ),
            "{err:?}"
        );
        assert!(generate(&h("A1"), 5, 2, &NoiseSpec::none(), 4).is_err());
    }

    #[test]
    fn invalid_noise_specs() {
        assert!(NoiseSpec::new(NoiseMode::Progressive, 0.0, 1).is_err());
        assert!(NoiseSpec::new(NoiseMode::Stationary, f64::NAN, 1).is_err());
        assert!(NoiseSpec::new(NoiseMode::None, 0.0, 1).is_ok());
        assert!(generate(&h("A1"), 1, 1, &NoiseSpec::none(), 100).is_err());
    }

    #[test]
    fn tiny_sigma_gives_zero_offsets() {
        let mut rng = seeded_rng(7);
        assert!((0..10_000).all(|_| sample_integer_noise(1e-6, &mut rng) == 0));
    }

    #[test]
    fn sample_json_shape() {
        let s = replay(&h("M2"), 2, &[1, 0]).unwrap();
        let v: serde_json::Value = serde_json::to_value(&s).unwrap();
        assert_eq!(v["truth_label"], "M2");
        assert_eq!(v["values"], serde_json::json!([2, 5, 10]));
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys.len(), 5);
        let back: SequenceSample = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn derived_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| derive_seed(42, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
    }
}
